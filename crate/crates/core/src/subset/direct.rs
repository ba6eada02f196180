//! Direct `Θ(3^n)` subset convolution in the sum-product and max-product
//! semirings.

use rayon::prelude::*;

use crate::error::Result;
use crate::logspace::{LogAccumulator, LOG_ZERO};
use crate::subset::table::{check_same_size, SubsetTable};

/// Output masks handed to one rayon task.
const CHUNK: usize = 256;

/// `(f*g)(X) = log Σ_{A⊆X} exp(f(A) + g(X∖A))` for every `X`.
///
/// Submasks are visited in ascending order for every `X`, so each entry is
/// bit-reproducible regardless of how output masks are spread over threads.
pub fn direct_convolve(f: &SubsetTable, g: &SubsetTable) -> Result<SubsetTable> {
    check_same_size(f, g)?;
    let n = f.n();
    let (fe, ge) = (f.entries(), g.entries());
    let min_size = match (f.min_rank(), g.min_rank()) {
        (Some(a), Some(b)) => a + b,
        _ => return Ok(SubsetTable::from_raw(n, vec![LOG_ZERO; 1 << n])),
    };

    let mut out = vec![LOG_ZERO; 1 << n];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(chunk, slots)| {
            let base = chunk * CHUNK;
            for (offset, slot) in slots.iter_mut().enumerate() {
                let x = (base + offset) as u32;
                if (x.count_ones() as usize) < min_size {
                    continue;
                }
                *slot = convolve_at(fe, ge, x);
            }
        });
    Ok(SubsetTable::from_raw(n, out))
}

#[inline]
pub(crate) fn convolve_at(fe: &[f64], ge: &[f64], x: u32) -> f64 {
    let mut acc = LogAccumulator::new();
    let mut a = 0u32;
    loop {
        let fa = fe[a as usize];
        if fa != LOG_ZERO {
            let gb = ge[(x ^ a) as usize];
            if gb != LOG_ZERO {
                acc.push(fa + gb);
            }
        }
        if a == x {
            break;
        }
        a = a.wrapping_sub(x) & x;
    }
    acc.value()
}

/// Result of a max-product convolution.
#[derive(Debug, Clone)]
pub struct MaxConvolution {
    pub table: SubsetTable,
    /// For every `X`, the submask `A` (of the first operand) attaining the
    /// maximum; `None` unless requested.
    pub argmax: Option<Vec<u32>>,
}

/// `max_{A⊆X} f(A) + g(X∖A)` for every `X`.
///
/// Ties go to the smallest `A`. When every split of `X` is zero the result
/// is zero and the recorded argmax is `0`.
pub fn max_convolve(
    f: &SubsetTable,
    g: &SubsetTable,
    record_argmax: bool,
) -> Result<MaxConvolution> {
    check_same_size(f, g)?;
    let n = f.n();
    let (fe, ge) = (f.entries(), g.entries());

    let mut values = vec![LOG_ZERO; 1 << n];
    let mut argmax = vec![0u32; if record_argmax { 1 << n } else { 0 }];

    let compute = |x: u32| -> (f64, u32) {
        let mut best = LOG_ZERO;
        let mut best_a = 0u32;
        let mut a = 0u32;
        loop {
            let v = fe[a as usize] + ge[(x ^ a) as usize];
            if v > best {
                best = v;
                best_a = a;
            }
            if a == x {
                break;
            }
            a = a.wrapping_sub(x) & x;
        }
        (best, best_a)
    };

    if record_argmax {
        values
            .par_chunks_mut(CHUNK)
            .zip(argmax.par_chunks_mut(CHUNK))
            .enumerate()
            .for_each(|(chunk, (vals, args))| {
                let base = chunk * CHUNK;
                for (offset, (v, a)) in vals.iter_mut().zip(args.iter_mut()).enumerate() {
                    (*v, *a) = compute((base + offset) as u32);
                }
            });
    } else {
        values
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(chunk, vals)| {
                let base = chunk * CHUNK;
                for (offset, v) in vals.iter_mut().enumerate() {
                    *v = compute((base + offset) as u32).0;
                }
            });
    }

    Ok(MaxConvolution {
        table: SubsetTable::from_raw(n, values),
        argmax: record_argmax.then_some(argmax),
    })
}
