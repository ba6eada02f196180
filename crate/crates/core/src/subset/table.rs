use crate::error::{Error, Result};
use crate::logspace::{LogValue, LOG_ONE, LOG_ZERO};
use crate::subset::mask::{full_bits, SubsetMask, MAX_ITEMS};

/// A log-domain value for every subset of an `n`-item ground set, indexed by
/// mask bits.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetTable {
    n: usize,
    entries: Vec<LogValue>,
}

impl SubsetTable {
    pub fn from_entries(n: usize, entries: Vec<LogValue>) -> Result<Self> {
        check_items(n)?;
        if entries.len() != 1usize << n {
            return Err(Error::Domain(format!(
                "table over {n} items needs {} entries, got {}",
                1usize << n,
                entries.len()
            )));
        }
        if let Some(mask) = entries.iter().position(|v| v.is_nan()) {
            return Err(Error::Domain(format!("NaN entry at mask {mask:#b}")));
        }
        if let Some(mask) = entries.iter().position(|&v| v == f64::INFINITY) {
            return Err(Error::Domain(format!("+inf entry at mask {mask:#b}")));
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(SubsetMask) -> LogValue) -> Result<Self> {
        check_items(n)?;
        let entries = (0..1u32 << n).map(|m| f(SubsetMask(m))).collect();
        Self::from_entries(n, entries)
    }

    /// The convolution identity: log 1 at the empty set, zero elsewhere.
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |m| if m.is_empty() { LOG_ONE } else { LOG_ZERO })
    }

    /// `log 1` on every nonempty set, zero at the empty set.
    pub fn counting(n: usize) -> Result<Self> {
        Self::from_fn(n, |m| if m.is_empty() { LOG_ZERO } else { LOG_ONE })
    }

    pub(crate) fn from_raw(n: usize, entries: Vec<LogValue>) -> Self {
        debug_assert_eq!(entries.len(), 1usize << n);
        Self { n, entries }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entries(&self) -> &[LogValue] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, mask: SubsetMask) -> LogValue {
        self.entries[mask.0 as usize]
    }

    #[inline]
    pub fn full_mask(&self) -> u32 {
        full_bits(self.n)
    }

    /// Value at the whole ground set.
    #[inline]
    pub fn at_full(&self) -> LogValue {
        self.entries[self.full_mask() as usize]
    }

    /// Smallest subset size carrying a nonzero value, if any.
    pub fn min_rank(&self) -> Option<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != LOG_ZERO)
            .map(|(m, _)| (m as u32).count_ones() as usize)
            .min()
    }

    /// `f(X) + t·|X|` for every `X`.
    pub fn tilted(&self, t: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(m, &v)| v + t * (m as u32).count_ones() as f64)
            .collect();
        Self::from_raw(self.n, entries)
    }

    /// Relabel items: item `i` of `self` becomes item `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: perm.len(),
            });
        }
        let mut entries = vec![LOG_ZERO; self.entries.len()];
        for (m, &v) in self.entries.iter().enumerate() {
            let image = SubsetMask(m as u32)
                .items()
                .fold(0u32, |acc, i| acc | (1 << perm[i]));
            entries[image as usize] = v;
        }
        Ok(Self::from_raw(self.n, entries))
    }
}

pub(crate) fn check_items(n: usize) -> Result<()> {
    if n > MAX_ITEMS {
        return Err(Error::out_of_range("n", n, format!("0..={MAX_ITEMS}")));
    }
    Ok(())
}

pub(crate) fn check_same_size(f: &SubsetTable, g: &SubsetTable) -> Result<()> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            left: f.n,
            right: g.n,
        });
    }
    Ok(())
}
