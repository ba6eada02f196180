//! Fixed-point (arbitrary-precision integer) tables and the zeta/Möbius
//! transform pair.

use std::f64::consts::LN_2;
use std::ops::{AddAssign, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_traits::{Float, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::logspace::{LogValue, LOG_ZERO};
use crate::subset::table::{check_items, SubsetTable};

/// Default number of fractional bits for fixed-point conversion.
pub const DEFAULT_SCALE_BITS: u32 = 96;

/// `entries[X] = round(exp(value(X) − shift) · 2^scale_bits)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointTable {
    n: usize,
    scale_bits: u32,
    /// Log-domain offset subtracted before scaling; `0.0` for plain integer
    /// tables.
    shift: LogShift,
    entries: Vec<BigInt>,
}

/// A log-domain shift stored by bit pattern so the table stays `Eq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct LogShift(u64);

impl LogShift {
    fn new(v: f64) -> Self {
        LogShift(v.to_bits())
    }
    fn get(self) -> f64 {
        f64::from_bits(self.0)
    }
}

impl FixedPointTable {
    /// Quantizes a log table, using its maximum finite entry as the shift.
    pub fn from_log_table(table: &SubsetTable, scale_bits: u32) -> Self {
        let shift = table
            .entries()
            .iter()
            .copied()
            .filter(|v| *v != LOG_ZERO)
            .fold(LOG_ZERO, f64::max);
        Self::with_shift(
            table,
            scale_bits,
            if shift == LOG_ZERO { 0.0 } else { shift },
        )
    }

    pub fn with_shift(table: &SubsetTable, scale_bits: u32, shift: f64) -> Self {
        let entries = table
            .entries()
            .iter()
            .map(|&v| BigInt::from(quantize(v - shift, scale_bits)))
            .collect();
        Self {
            n: table.n(),
            scale_bits,
            shift: LogShift::new(shift),
            entries,
        }
    }

    /// Wraps raw integers (zero shift).
    pub fn from_integers(n: usize, scale_bits: u32, entries: Vec<BigInt>) -> Result<Self> {
        check_items(n)?;
        if entries.len() != 1usize << n {
            return Err(Error::Domain(format!(
                "table over {n} items needs {} entries, got {}",
                1usize << n,
                entries.len()
            )));
        }
        Ok(Self {
            n,
            scale_bits,
            shift: LogShift::new(0.0),
            entries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale_bits(&self) -> u32 {
        self.scale_bits
    }

    pub fn shift(&self) -> f64 {
        self.shift.get()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Back to the log domain. Negative entries are rejected since they have
    /// no logarithm.
    pub fn to_log_table(&self) -> Result<SubsetTable> {
        let shift = self.shift.get();
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(mask, v)| {
                if v.is_negative() {
                    Err(Error::Domain(format!(
                        "negative fixed-point entry at mask {mask:#b}"
                    )))
                } else {
                    Ok(ln_scaled(v.magnitude(), self.scale_bits as u64) + shift)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SubsetTable::from_entries(self.n, entries)
    }

    /// `ẑ(X) = Σ_{A⊆X} z(A)`.
    pub fn zeta(&self) -> Self {
        let mut out = self.clone();
        zeta_transform(&mut out.entries);
        out
    }

    /// Inverse of [`FixedPointTable::zeta`].
    pub fn mobius(&self) -> Self {
        let mut out = self.clone();
        mobius_transform(&mut out.entries);
        out
    }
}

/// In-place subset-sum transform over a table of length `2^n`.
pub fn zeta_transform<T>(values: &mut [T])
where
    T: for<'a> AddAssign<&'a T>,
{
    butterfly(values, |lo, hi| *hi += lo);
}

/// In-place inverse of [`zeta_transform`].
pub fn mobius_transform<T>(values: &mut [T])
where
    T: for<'a> SubAssign<&'a T>,
{
    butterfly(values, |lo, hi| *hi -= lo);
}

/// One pass per item: every `X` containing the item is combined with
/// `X` minus the item.
fn butterfly<T>(values: &mut [T], mut op: impl FnMut(&T, &mut T)) {
    let len = values.len();
    assert!(len.is_power_of_two(), "table length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                op(l, h);
            }
        }
        half *= 2;
    }
}

const LN2_HI: f64 = 6.931_471_803_691_238e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// `round(exp(d) · 2^bits)`, exact apart from the rounding of `exp` itself.
pub(crate) fn quantize(d: LogValue, bits: u32) -> BigUint {
    if d == LOG_ZERO {
        return BigUint::zero();
    }
    // exp(d) = m · 2^-k with m in [1, 2).
    let k = (-d / LN_2).floor();
    let m = ((d + k * LN2_HI) + k * LN2_LO).exp();
    let (mantissa, exponent, _) = m.integer_decode();
    let e = exponent as i64 + bits as i64 - k as i64;
    if e >= 0 {
        BigUint::from(mantissa) << (e as u64)
    } else {
        let s = (-e) as u32;
        if s > 64 {
            BigUint::zero()
        } else {
            let rounded = (mantissa as u128 + (1u128 << (s - 1))) >> s;
            BigUint::from(rounded)
        }
    }
}

/// `ln(v · 2^-scale_bits)`; `-inf` for zero.
///
/// The value is split as `m · 2^e` with `m` in `[1, 2)` so that the
/// power-of-two part never cancels against a large logarithm.
pub(crate) fn ln_scaled(v: &BigUint, scale_bits: u64) -> f64 {
    let bits = v.bits();
    if bits == 0 {
        return LOG_ZERO;
    }
    let top = if bits <= 64 {
        v.to_u64().unwrap_or(u64::MAX) << (64 - bits)
    } else {
        (v >> (bits - 64)).to_u64().unwrap_or(u64::MAX)
    };
    let m = top as f64 / 2f64.powi(63);
    let e = bits as i64 - 1 - scale_bits as i64;
    m.ln() + e as f64 * LN_2
}
