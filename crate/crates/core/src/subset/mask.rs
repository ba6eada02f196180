use std::fmt;

/// Largest ground set the engine accepts. Tables hold `2^n` entries.
pub const MAX_ITEMS: usize = 26;

/// A subset of the items `0..n`, bit `i` set iff item `i` is a member.
///
/// Item indices are 0-based here; user-facing output converts to 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The whole ground set `{0, .., n-1}`.
    #[inline]
    pub const fn full(n: usize) -> Self {
        SubsetMask(full_bits(n))
    }

    #[inline]
    pub const fn singleton(item: usize) -> Self {
        SubsetMask(1 << item)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn contains(self, item: usize) -> bool {
        self.0 & (1 << item) != 0
    }

    #[inline]
    pub const fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub const fn is_disjoint(self, other: SubsetMask) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub const fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn items(self) -> Items {
        Items(self.0)
    }

    /// 1-based member labels, ascending.
    pub fn labels(self) -> Vec<usize> {
        self.items().map(|i| i + 1).collect()
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        SubsetMask(items.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }
}

impl std::ops::BitOr for SubsetMask {
    type Output = SubsetMask;
    fn bitor(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | rhs.0)
    }
}

impl std::ops::Sub for SubsetMask {
    type Output = SubsetMask;
    /// Set difference.
    fn sub(self, rhs: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !rhs.0)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, label) in self.labels().into_iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{label}")?;
        }
        f.write_str("}")
    }
}

/// Members of a mask in ascending order.
#[derive(Debug, Clone)]
pub struct Items(u32);

impl Iterator for Items {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Items {}

#[inline]
pub(crate) const fn full_bits(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

/// Submasks of `set` in ascending integer order, from `0` to `set` inclusive.
pub fn submasks(set: u32) -> Submasks {
    Submasks { set, next: Some(0) }
}

#[derive(Debug, Clone)]
pub struct Submasks {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Submasks {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        self.next = if cur == self.set {
            None
        } else {
            Some(cur.wrapping_sub(self.set) & self.set)
        };
        Some(cur)
    }
}
