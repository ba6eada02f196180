//! Arithmetic on nonnegative quantities stored as natural logarithms.
//!
//! `f64::NEG_INFINITY` encodes an exact zero. Multiplication is addition of
//! logs and addition is log-sum-exp; none of the helpers here produce NaN for
//! zero operands.

/// Log of a nonnegative quantity. `NEG_INFINITY` is exact zero.
pub type LogValue = f64;

pub const LOG_ZERO: LogValue = f64::NEG_INFINITY;
pub const LOG_ONE: LogValue = 0.0;

/// `log(exp(a) + exp(b))`.
#[inline]
pub fn log_add(a: LogValue, b: LogValue) -> LogValue {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == LOG_ZERO {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Two-pass log-sum-exp over a slice.
pub fn log_sum_exp(values: &[LogValue]) -> LogValue {
    let max = values.iter().copied().fold(LOG_ZERO, f64::max);
    if max == LOG_ZERO {
        return LOG_ZERO;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Streaming log-sum-exp with a running maximum.
///
/// The result depends on the order in which terms are pushed, so callers that
/// need bit-reproducible output must push in a fixed order.
#[derive(Debug, Clone, Copy)]
pub struct LogAccumulator {
    max: f64,
    sum: f64,
}

impl Default for LogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogAccumulator {
    #[inline]
    pub const fn new() -> Self {
        Self {
            max: LOG_ZERO,
            sum: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, v: LogValue) {
        if v == LOG_ZERO {
            return;
        }
        if v <= self.max {
            self.sum += (v - self.max).exp();
        } else {
            // exp(-inf) == 0 covers the first finite term.
            self.sum = self.sum * (self.max - v).exp() + 1.0;
            self.max = v;
        }
    }

    #[inline]
    pub fn value(&self) -> LogValue {
        if self.max == LOG_ZERO {
            LOG_ZERO
        } else {
            self.max + self.sum.ln()
        }
    }
}

impl Extend<LogValue> for LogAccumulator {
    fn extend<I: IntoIterator<Item = LogValue>>(&mut self, iter: I) {
        for v in iter {
            self.push(v);
        }
    }
}

impl FromIterator<LogValue> for LogAccumulator {
    fn from_iter<I: IntoIterator<Item = LogValue>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}
