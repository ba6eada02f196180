//! Stirling numbers of both kinds, Bell numbers and factorials in the log
//! domain, plus a checked log-gamma.

use crate::error::{Error, Result};
use crate::logspace::{log_add, log_sum_exp, LogValue, LOG_ZERO};

pub const MAX_TABLE_N: usize = 64;

/// Log-domain counting numbers for all `0 ≤ k ≤ n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct LogNumberTable {
    n_max: usize,
    /// `stirling2[n][k]` = log S(n,k).
    stirling2: Vec<Vec<LogValue>>,
    /// `stirling1[n][k]` = log c(n,k), unsigned first kind.
    stirling1: Vec<Vec<LogValue>>,
    bell: Vec<LogValue>,
    factorial: Vec<LogValue>,
}

impl LogNumberTable {
    pub fn build(n_max: usize) -> Result<Self> {
        if !(1..=MAX_TABLE_N).contains(&n_max) {
            return Err(Error::out_of_range(
                "n_max",
                n_max,
                format!("1..={MAX_TABLE_N}"),
            ));
        }
        let mut stirling2 = vec![vec![LOG_ZERO; n_max + 1]; n_max + 1];
        let mut stirling1 = vec![vec![LOG_ZERO; n_max + 1]; n_max + 1];
        stirling2[0][0] = 0.0;
        stirling1[0][0] = 0.0;
        for n in 1..=n_max {
            let prev_n = ((n - 1) as f64).ln();
            for k in 1..=n {
                let k_ln = (k as f64).ln();
                stirling2[n][k] = log_add(k_ln + stirling2[n - 1][k], stirling2[n - 1][k - 1]);
                stirling1[n][k] = log_add(prev_n + stirling1[n - 1][k], stirling1[n - 1][k - 1]);
            }
        }
        let bell = stirling2.iter().map(|row| log_sum_exp(row)).collect();
        let mut factorial = vec![0.0; n_max + 1];
        for n in 1..=n_max {
            factorial[n] = factorial[n - 1] + (n as f64).ln();
        }
        let table = Self {
            n_max,
            stirling2,
            stirling1,
            bell,
            factorial,
        };
        table.self_check()?;
        Ok(table)
    }

    fn self_check(&self) -> Result<()> {
        const TOL: f64 = 1e-10;
        for n in 1..=self.n_max {
            if self.stirling2[n][1].abs() > TOL || self.stirling2[n][n].abs() > TOL {
                return Err(Error::Internal(format!(
                    "S({n},1) or S({n},{n}) differs from 1"
                )));
            }
            let total = log_sum_exp(&self.stirling1[n]);
            if (total - self.factorial[n]).abs() > TOL {
                return Err(Error::Internal(format!(
                    "first-kind row {n} does not sum to {n}!"
                )));
            }
        }
        Ok(())
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize, k: usize) -> Result<()> {
        if n > self.n_max || k > n {
            return Err(Error::out_of_range(
                "(n, k)",
                format!("({n}, {k})"),
                format!("0 <= k <= n <= {}", self.n_max),
            ));
        }
        Ok(())
    }

    /// log S(n,k): unordered `k`-partitions of `n` items.
    pub fn ln_stirling2(&self, n: usize, k: usize) -> Result<LogValue> {
        self.check(n, k)?;
        Ok(self.stirling2[n][k])
    }

    /// log c(n,k): permutations of `n` items with `k` cycles.
    pub fn ln_stirling1(&self, n: usize, k: usize) -> Result<LogValue> {
        self.check(n, k)?;
        Ok(self.stirling1[n][k])
    }

    /// log B_n: all partitions of `n` items.
    pub fn ln_bell(&self, n: usize) -> Result<LogValue> {
        self.check(n, 0)?;
        Ok(self.bell[n])
    }

    pub fn ln_factorial(&self, n: usize) -> Result<LogValue> {
        self.check(n, 0)?;
        Ok(self.factorial[n])
    }
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "log_gamma needs a finite x > 0, got {x}"
        )));
    }
    Ok(libm::lgamma(x))
}
