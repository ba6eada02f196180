//! Exact integer arithmetic for the ranked transform, carried out modulo a set
//! of word-sized primes and recombined by the Chinese remainder theorem.
//!
//! Every intermediate of ranked subset convolution is an integer combination
//! of the inputs, and the final entries are nonnegative and bounded, so
//! residues modulo enough primes determine them exactly.

use num_bigint::BigUint;
use num_traits::Zero;

/// Primes just below `2^60`, each above `2^59.99`.
pub(crate) const PRIMES: [u64; 40] = [
    0xfffffffffffffa3,
    0xfffffffffffff95,
    0xfffffffffffff53,
    0xfffffffffffff4d,
    0xffffffffffffeff,
    0xffffffffffffee9,
    0xffffffffffffe8f,
    0xffffffffffffe75,
    0xffffffffffffe71,
    0xffffffffffffe3b,
    0xffffffffffffdd3,
    0xffffffffffffdbd,
    0xffffffffffffd8b,
    0xffffffffffffd63,
    0xffffffffffffd49,
    0xffffffffffffd3d,
    0xffffffffffffd33,
    0xffffffffffffd2b,
    0xffffffffffffd0f,
    0xffffffffffffcf7,
    0xffffffffffffce3,
    0xffffffffffffc91,
    0xffffffffffffc5b,
    0xffffffffffffc29,
    0xffffffffffffc19,
    0xffffffffffffb99,
    0xffffffffffffb8f,
    0xffffffffffffb5d,
    0xffffffffffffb51,
    0xffffffffffffaf3,
    0xffffffffffffad9,
    0xffffffffffffacf,
    0xffffffffffffa57,
    0xffffffffffffa3f,
    0xffffffffffffa21,
    0xffffffffffffa1f,
    0xffffffffffff9d7,
    0xffffffffffff9cb,
    0xffffffffffff989,
    0xffffffffffff985,
];

/// Guaranteed bits of modulus contributed by each prime.
pub(crate) const BITS_PER_PRIME: u64 = 59;

/// Number of primes whose product exceeds `2^bits`, if enough are available.
pub(crate) fn primes_for_bits(bits: u64) -> Option<usize> {
    let m = (bits + 1).div_ceil(BITS_PER_PRIME) as usize;
    (m <= PRIMES.len()).then_some(m)
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce(v: &BigUint, p: u64) -> u64 {
    if v.is_zero() {
        return 0;
    }
    // Horner over 64-bit digits, most significant first.
    v.iter_u64_digits().rev().fold(0u64, |acc, d| {
        let wide = ((acc as u128) << 64) | d as u128;
        (wide % p as u128) as u64
    })
}

pub(crate) fn zeta_mod(values: &mut [u64], p: u64) {
    butterfly(values, |lo, hi| *hi = add_mod(*hi, lo, p));
}

pub(crate) fn mobius_mod(values: &mut [u64], p: u64) {
    butterfly(values, |lo, hi| *hi = sub_mod(*hi, lo, p));
}

fn butterfly(values: &mut [u64], op: impl Fn(u64, &mut u64)) {
    let len = values.len();
    let mut half = 1;
    while half < len {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                op(*l, h);
            }
        }
        half *= 2;
    }
}

/// Garner reconstruction for a fixed prime set.
pub(crate) struct Crt {
    primes: Vec<u64>,
    /// `inverses[i][j]` = `primes[j]^-1 mod primes[i]` for `j < i`.
    inverses: Vec<Vec<u64>>,
}

impl Crt {
    pub(crate) fn new(primes: &[u64]) -> Self {
        let inverses = primes
            .iter()
            .enumerate()
            .map(|(i, &pi)| primes[..i].iter().map(|&pj| inv_mod(pj % pi, pi)).collect())
            .collect();
        Self {
            primes: primes.to_vec(),
            inverses,
        }
    }

    /// The unique value in `[0, Π primes)` with the given residues.
    pub(crate) fn reconstruct(&self, residues: &[u64]) -> BigUint {
        debug_assert_eq!(residues.len(), self.primes.len());
        // Mixed-radix digits v_i with x = v_0 + v_1 p_0 + v_2 p_0 p_1 + ...
        let mut digits = Vec::with_capacity(self.primes.len());
        for (i, &pi) in self.primes.iter().enumerate() {
            let mut x = residues[i] % pi;
            for (j, &vj) in digits.iter().enumerate() {
                x = mul_mod(sub_mod(x, vj % pi, pi), self.inverses[i][j], pi);
            }
            digits.push(x);
        }
        // Horner: x = v_0 + p_0 (v_1 + p_1 (v_2 + ...)).
        let last = digits.len() - 1;
        let mut acc = BigUint::from(digits[last]);
        for i in (0..last).rev() {
            acc *= self.primes[i];
            acc += digits[i];
        }
        acc
    }
}
