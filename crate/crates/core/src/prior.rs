//! Partition priors expressed as a per-cluster factor `f_prior(S)` and
//! cardinality weights `w_k`, so that an ordered `k`-partition has prior
//! `w_k · Π_j f_prior(S_j)`.

use crate::combinatorics::{log_gamma, LogNumberTable};
use crate::error::{Error, Result};
use crate::logspace::{log_sum_exp, LogValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorKind {
    /// Every unordered partition equally likely.
    UniformPartitions,
    /// `p(k) = 1/n`, partitions of equal size equally likely.
    UniformK,
    /// Chinese-restaurant / Dirichlet-process partition prior.
    DirichletProcess { theta: f64 },
}

/// How the Dirichlet-process cardinality weight is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DpWeight {
    /// `w_k = θ^k Γ(θ) / (Γ(θ+n) k!)`, a proper prior for every `θ`.
    #[default]
    Normalized,
    /// `w_k = Γ(θ) / (Γ(θ+n) k!)` without the `θ^k` factor. Identical to
    /// `Normalized` at `θ = 1`; otherwise the prior does not sum to one and
    /// posteriors differ by a `θ^k` tilt on `k`.
    WithoutThetaPower,
}

impl DpWeight {
    pub fn name(&self) -> &'static str {
        match self {
            DpWeight::Normalized => "with-theta-power",
            DpWeight::WithoutThetaPower => "without-theta-power",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSpec {
    pub kind: PriorKind,
    pub dp_weight: DpWeight,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self::uniform_k()
    }
}

impl PriorSpec {
    pub fn uniform_k() -> Self {
        Self {
            kind: PriorKind::UniformK,
            dp_weight: DpWeight::Normalized,
        }
    }

    pub fn uniform_partitions() -> Self {
        Self {
            kind: PriorKind::UniformPartitions,
            dp_weight: DpWeight::Normalized,
        }
    }

    pub fn dirichlet_process(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Domain(format!(
                "DP concentration must be > 0, got {theta}"
            )));
        }
        Ok(Self {
            kind: PriorKind::DirichletProcess { theta },
            dp_weight: DpWeight::Normalized,
        })
    }

    pub fn with_dp_weight(mut self, dp_weight: DpWeight) -> Self {
        self.dp_weight = dp_weight;
        self
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PriorKind::UniformPartitions => "uniform-partitions",
            PriorKind::UniformK => "uniform-k",
            PriorKind::DirichletProcess { .. } => "dp",
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match self.kind {
            PriorKind::DirichletProcess { theta } => Some(theta),
            _ => None,
        }
    }

    /// `log f_prior(S)` for a cluster of the given size.
    pub fn log_f_prior(&self, cluster_size: usize) -> Result<LogValue> {
        if cluster_size == 0 {
            return Err(Error::Domain("clusters are nonempty".into()));
        }
        match self.kind {
            PriorKind::UniformPartitions | PriorKind::UniformK => Ok(0.0),
            PriorKind::DirichletProcess { .. } => log_gamma(cluster_size as f64),
        }
    }

    /// `log w_k` for `k` clusters over `n` items.
    pub fn log_weight(&self, k: usize, n: usize, tables: &LogNumberTable) -> Result<LogValue> {
        if k < 1 || k > n {
            return Err(Error::out_of_range("k", k, format!("1..={n}")));
        }
        let ln_k_fact = tables.ln_factorial(k)?;
        Ok(match self.kind {
            PriorKind::UniformPartitions => -ln_k_fact - tables.ln_bell(n)?,
            PriorKind::UniformK => -ln_k_fact - (n as f64).ln() - tables.ln_stirling2(n, k)?,
            PriorKind::DirichletProcess { theta } => {
                let base = log_gamma(theta)? - log_gamma(theta + n as f64)? - ln_k_fact;
                match self.dp_weight {
                    DpWeight::Normalized => base + k as f64 * theta.ln(),
                    DpWeight::WithoutThetaPower => base,
                }
            }
        })
    }

    /// `log w_k` for `k = 1..=n`.
    pub fn log_weights(&self, n: usize, tables: &LogNumberTable) -> Result<Vec<LogValue>> {
        (1..=n).map(|k| self.log_weight(k, n, tables)).collect()
    }

    /// The prior marginal `p(k)`, `k = 1..=n`, renormalized to sum to one.
    ///
    /// Uses `Σ_{unordered k-partitions} Π f_prior = S(n,k)` for the uniform
    /// priors and `c(n,k)` for the Dirichlet process.
    pub fn prior_k(&self, n: usize, tables: &LogNumberTable) -> Result<Vec<f64>> {
        let logs = (1..=n)
            .map(|k| {
                let count = match self.kind {
                    PriorKind::DirichletProcess { .. } => tables.ln_stirling1(n, k)?,
                    _ => tables.ln_stirling2(n, k)?,
                };
                Ok(self.log_weight(k, n, tables)? + tables.ln_factorial(k)? + count)
            })
            .collect::<Result<Vec<_>>>()?;
        let total = log_sum_exp(&logs);
        Ok(logs.iter().map(|l| (l - total).exp()).collect())
    }
}
