use crate::error::{Error, Result};
use crate::logspace::LogValue;
use crate::subset::direct::direct_convolve;
use crate::subset::fast::fast_convolve_exact;
use crate::subset::fixed::DEFAULT_SCALE_BITS;
use crate::subset::table::SubsetTable;

/// Which sum-product convolution to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Log-sum-exp over every submask split, `Θ(3^n)`.
    #[default]
    Direct,
    /// Ranked transform in exact integer arithmetic, `O(n^2 2^n)`.
    FastExact { scale_bits: u32 },
}

impl Engine {
    pub fn fast_exact() -> Self {
        Engine::FastExact {
            scale_bits: DEFAULT_SCALE_BITS,
        }
    }

    pub fn convolve(&self, f: &SubsetTable, g: &SubsetTable) -> Result<SubsetTable> {
        match *self {
            Engine::Direct => direct_convolve(f, g),
            Engine::FastExact { scale_bits } => fast_convolve_exact(f, g, scale_bits),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::FastExact { .. } => "fast-exact",
        }
    }
}

/// Computes `f^(1) = f, f^(2) = f*f, ..., f^(k_max)` and returns `f^(k)(U)`
/// for each `k`.
///
/// `consumer(k, table)` sees every `f^(k)` as soon as it is built; only the
/// current power is retained afterwards.
pub fn iterate_convolutions<C>(
    f: &SubsetTable,
    k_max: usize,
    engine: Engine,
    mut consumer: C,
) -> Result<Vec<LogValue>>
where
    C: FnMut(usize, &SubsetTable) -> Result<()>,
{
    if k_max < 1 || k_max > f.n() {
        return Err(Error::out_of_range(
            "k_max",
            k_max,
            format!("1..={}", f.n()),
        ));
    }
    let mut at_full = Vec::with_capacity(k_max);
    consumer(1, f)?;
    at_full.push(f.at_full());

    let mut power: Option<SubsetTable> = None;
    for k in 2..=k_max {
        let next = engine.convolve(f, power.as_ref().unwrap_or(f))?;
        consumer(k, &next)?;
        at_full.push(next.at_full());
        power = Some(next);
    }
    Ok(at_full)
}
