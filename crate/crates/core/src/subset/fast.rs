//! Ranked ("fast") subset convolution in `O(n^2 2^n)` ring operations.
//!
//! The ranked algorithm subtracts during Möbius inversion, so in floating
//! point it suffers cancellation. [`fast_convolve_exact`] instead quantizes
//! both operands to integers and carries out every step exactly; the only
//! error left is the input quantization. [`fast_convolve_float`] is the same
//! algorithm in `f64`, kept as a diagnostic.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logspace::LOG_ZERO;
use crate::subset::direct::convolve_at;
use crate::subset::fixed::{ln_scaled, quantize, zeta_transform};
use crate::subset::modular::{self, Crt, PRIMES};
use crate::subset::table::{check_same_size, SubsetTable};
use std::f64::consts::LN_2;

/// Operands after the per-item tilt `t(X) − Σ_{i∈X} c_i`.
struct Tilted {
    offsets: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
    f_shift: f64,
    g_shift: f64,
}

impl Tilted {
    fn new(f: &SubsetTable, g: &SubsetTable) -> Self {
        let n = f.n();
        let offsets = item_offsets(f, g);
        let tilt = |t: &SubsetTable| -> Vec<f64> {
            t.entries()
                .iter()
                .enumerate()
                .map(|(m, &v)| v - subset_offset(&offsets, m as u32))
                .collect()
        };
        let (fe, ge) = (tilt(f), tilt(g));
        let max = |v: &[f64]| v.iter().copied().fold(LOG_ZERO, f64::max);
        let (f_shift, g_shift) = (max(&fe), max(&ge));
        debug_assert_eq!(fe.len(), 1 << n);
        Self {
            offsets,
            f: fe,
            g: ge,
            f_shift,
            g_shift,
        }
    }

    fn is_zero(&self) -> bool {
        self.f_shift == LOG_ZERO || self.g_shift == LOG_ZERO
    }

    /// Log-domain correction for result entry `x`.
    fn restore(&self, x: u32) -> f64 {
        self.f_shift + self.g_shift + subset_offset(&self.offsets, x)
    }
}

/// `c = max_i f({i})`, applied to every item. Falls back to the second
/// operand's singletons, then to zero.
fn item_offsets(f: &SubsetTable, g: &SubsetTable) -> Vec<f64> {
    let n = f.n();
    let best = |t: &SubsetTable| (0..n).map(|i| t.entries()[1 << i]).fold(LOG_ZERO, f64::max);
    let c = [best(f), best(g)]
        .into_iter()
        .find(|v| *v != LOG_ZERO)
        .unwrap_or(0.0);
    vec![c; n]
}

#[inline]
fn subset_offset(offsets: &[f64], x: u32) -> f64 {
    let mut s = 0.0;
    let mut bits = x;
    while bits != 0 {
        s += offsets[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    s
}

/// Exact ranked subset convolution of fixed-point images of `f` and `g`.
///
/// Returns a log table agreeing with [`direct_convolve`] up to the effect of
/// quantizing each operand to `scale_bits` fractional bits.
///
/// [`direct_convolve`]: crate::subset::direct_convolve
pub fn fast_convolve_exact(
    f: &SubsetTable,
    g: &SubsetTable,
    scale_bits: u32,
) -> Result<SubsetTable> {
    check_same_size(f, g)?;
    if scale_bits == 0 {
        return Err(Error::out_of_range("scale_bits", 0, ">= 1"));
    }
    if scale_bits > MAX_SCALE_BITS {
        return Err(Error::out_of_range(
            "scale_bits",
            scale_bits,
            format!("<= {MAX_SCALE_BITS}"),
        ));
    }
    let n = f.n();
    let size = 1usize << n;
    let tilted = Tilted::new(f, g);
    if tilted.is_zero() {
        return Ok(SubsetTable::from_raw(n, vec![LOG_ZERO; size]));
    }

    let fq: Vec<BigUint> = tilted
        .f
        .par_iter()
        .map(|&v| quantize(v - tilted.f_shift, scale_bits))
        .collect();
    let gq: Vec<BigUint> = tilted
        .g
        .par_iter()
        .map(|&v| quantize(v - tilted.g_shift, scale_bits))
        .collect();

    let max_bits = |v: &[BigUint]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let bound_bits = max_bits(&fq) + max_bits(&gq) + n as u64;
    let m = modular::primes_for_bits(bound_bits).ok_or_else(|| {
        Error::out_of_range(
            "scale_bits",
            scale_bits,
            format!(
                "intermediate values need {bound_bits} bits, more than {} primes provide",
                PRIMES.len()
            ),
        )
    })?;
    let primes = &PRIMES[..m];

    let residues: Vec<Vec<u64>> = primes
        .iter()
        .map(|&p| {
            let fr: Vec<u64> = fq.par_iter().map(|v| modular::reduce(v, p)).collect();
            let gr: Vec<u64> = gq.par_iter().map(|v| modular::reduce(v, p)).collect();
            ranked_convolve_mod(n, &fr, &gr, p)
        })
        .collect();

    let crt = Crt::new(primes);
    let mut entries: Vec<f64> = (0..size)
        .into_par_iter()
        .map(|x| {
            let r: Vec<u64> = residues.iter().map(|res| res[x]).collect();
            ln_scaled(&crt.reconstruct(&r), 2 * scale_bits as u64)
        })
        .collect();
    check_precision(&tilted, n, scale_bits, &entries)?;
    entries.par_iter_mut().enumerate().for_each(|(x, v)| {
        if *v != LOG_ZERO {
            *v += tilted.restore(x as u32);
        }
    });
    Ok(SubsetTable::from_raw(n, entries))
}

/// Ranked convolution of two residue tables modulo `p`; entry `X` of the
/// result is `Σ_{A⊆X} f(A) g(X∖A) mod p`.
fn ranked_convolve_mod(n: usize, f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let f_hat = ranked_zeta_mod(n, f, p);
    let g_hat = ranked_zeta_mod(n, g, p);
    let size = 1usize << n;

    let per_rank: Vec<(usize, Vec<u64>)> = (0..=n)
        .into_par_iter()
        .filter_map(|j| {
            let terms: Vec<(&[u64], &[u64])> = (0..=j)
                .filter_map(|r| match (&f_hat[r], &g_hat[j - r]) {
                    (Some(a), Some(b)) => Some((a.as_slice(), b.as_slice())),
                    _ => None,
                })
                .collect();
            if terms.is_empty() {
                return None;
            }
            let mut h: Vec<u64> = (0..size)
                .map(|x| {
                    let acc: u128 = terms.iter().map(|(a, b)| a[x] as u128 * b[x] as u128).sum();
                    (acc % p as u128) as u64
                })
                .collect();
            modular::mobius_mod(&mut h, p);
            Some((j, h))
        })
        .collect();

    let mut out = vec![0u64; size];
    for (j, h) in per_rank {
        for (x, slot) in out.iter_mut().enumerate() {
            if (x as u32).count_ones() as usize == j {
                *slot = h[x];
            }
        }
    }
    out
}

/// Zeta transforms of the rank slices of `t`; `None` for empty ranks.
fn ranked_zeta_mod(n: usize, t: &[u64], p: u64) -> Vec<Option<Vec<u64>>> {
    (0..=n)
        .into_par_iter()
        .map(|r| {
            let mut slice: Vec<u64> = t
                .iter()
                .enumerate()
                .map(|(x, &v)| {
                    if (x as u32).count_ones() as usize == r {
                        v
                    } else {
                        0
                    }
                })
                .collect();
            if slice.iter().all(|&v| v == 0) {
                return None;
            }
            modular::zeta_mod(&mut slice, p);
            Some(slice)
        })
        .collect()
}

/// Ranked subset convolution in plain `f64`, with the same tilt and shift as
/// the exact path. Cancellation in the Möbius step makes this unreliable for
/// larger `n`; entries that come out nonpositive are reported as zero.
pub fn fast_convolve_float(f: &SubsetTable, g: &SubsetTable) -> Result<SubsetTable> {
    check_same_size(f, g)?;
    let n = f.n();
    let size = 1usize << n;
    let tilted = Tilted::new(f, g);
    if tilted.is_zero() {
        return Ok(SubsetTable::from_raw(n, vec![LOG_ZERO; size]));
    }
    let ranked = |t: &[f64], shift: f64| -> Vec<Vec<f64>> {
        (0..=n)
            .map(|r| {
                let mut slice: Vec<f64> = t
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| {
                        if (x as u32).count_ones() as usize == r {
                            (v - shift).exp()
                        } else {
                            0.0
                        }
                    })
                    .collect();
                crate::subset::fixed::zeta_transform(&mut slice);
                slice
            })
            .collect()
    };
    let f_hat = ranked(&tilted.f, tilted.f_shift);
    let g_hat = ranked(&tilted.g, tilted.g_shift);
    let mut out = vec![LOG_ZERO; size];
    for j in 0..=n {
        let mut h: Vec<f64> = (0..size)
            .map(|x| (0..=j).map(|r| f_hat[r][x] * g_hat[j - r][x]).sum())
            .collect();
        crate::subset::fixed::mobius_transform(&mut h);
        for (x, slot) in out.iter_mut().enumerate() {
            if (x as u32).count_ones() as usize == j {
                let v = h[x];
                *slot = if v > 0.0 && v.is_finite() {
                    v.ln() + tilted.restore(x as u32)
                } else {
                    LOG_ZERO
                };
            }
        }
    }
    Ok(SubsetTable::from_raw(n, out))
}

/// Largest accepted `scale_bits`; keeps `2^-(B+1)` a normal-range `f64`.
pub const MAX_SCALE_BITS: u32 = 1000;

/// Relative error that quantization may contribute to any result entry
/// before [`fast_convolve_exact`] refuses the result.
pub const MAX_QUANTIZATION_ERROR: f64 = 1.0 / (1u64 << 43) as f64;

/// Certifies the exact result `h` (natural log of the scaled integers, before
/// the tilt is undone) against a worst-case bound on quantization error.
///
/// Writing `F = F_q + ε_F` with `|ε_F| ≤ 1/2` for every finite entry and
/// `ε_F = 0` for zeros, the error of one product is at most
/// `(|ε_F| G + F_q |ε_G|)`. Summed over the splits of `X` and bounded using
/// the smallest populated rank of each operand, this needs only one zeta
/// transform per rank of nonnegative values, which `f64` computes without
/// cancellation.
fn check_precision(tilted: &Tilted, n: usize, scale_bits: u32, h: &[f64]) -> Result<()> {
    let half_ulp = 0.5f64.powi(scale_bits as i32 + 1);
    let upper = |t: &[f64], shift: f64| -> Vec<f64> {
        t.iter()
            .map(|&v| {
                if v == LOG_ZERO {
                    0.0
                } else {
                    (v - shift).exp() + half_ulp
                }
            })
            .collect()
    };
    let f_hat = upper(&tilted.f, tilted.f_shift);
    let g_hat = upper(&tilted.g, tilted.g_shift);
    let rank_f = min_rank(&f_hat);
    let rank_g = min_rank(&g_hat);

    // bound(X) = Σ_{B⊆X, |B|≤|X|−r_f} ĝ(B) + Σ_{A⊆X, |A|≤|X|−r_g} f̂(A)
    let size = 1usize << n;
    let mut bound = vec![0.0f64; size];
    for (values, skip) in [(&g_hat, rank_f), (&f_hat, rank_g)] {
        let mut cumulative = vec![0.0f64; size];
        for m in 0..=n {
            for (x, v) in values.iter().enumerate() {
                if (x as u32).count_ones() as usize == m {
                    cumulative[x] = *v;
                }
            }
            if m + skip > n {
                break;
            }
            let mut z = cumulative.clone();
            zeta_transform(&mut z);
            for (x, b) in bound.iter_mut().enumerate() {
                if (x as u32).count_ones() as usize == m + skip {
                    *b += z[x];
                }
            }
        }
    }

    // Error bound is half_ulp·bound(X) in the units of h; allow for rounding
    // in the bound itself.
    let slack = 1.0 + 1e-9;
    let fe: Vec<f64> = tilted.f.iter().map(|v| v - tilted.f_shift).collect();
    let ge: Vec<f64> = tilted.g.iter().map(|v| v - tilted.g_shift).collect();
    let required = (0..size)
        .into_par_iter()
        .filter_map(|x| {
            let e = half_ulp * bound[x] * slack;
            if e == 0.0 {
                return None;
            }
            if h[x] != LOG_ZERO {
                let rel = e / h[x].exp();
                if rel < 1.0 && -(-rel).ln_1p() <= MAX_QUANTIZATION_ERROR {
                    return None;
                }
            }
            let truth = convolve_at(&fe, &ge, x as u32);
            if truth == LOG_ZERO {
                return None;
            }
            // bound(X)·2^-(B+1) ≤ tol·h  ⇔  B ≥ log2(bound / (2·tol·h))
            let bits =
                ((bound[x] * slack).ln() - (2.0 * MAX_QUANTIZATION_ERROR).ln() - truth) / LN_2;
            Some(bits.ceil().max(scale_bits as f64 + 1.0) as u32)
        })
        .max();
    match required {
        None => Ok(()),
        Some(required) => Err(Error::Precision {
            given: scale_bits,
            required,
        }),
    }
}

fn min_rank(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(x, _)| (x as u32).count_ones() as usize)
        .min()
        .unwrap_or(0)
}
