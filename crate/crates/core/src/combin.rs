//! Binomial coefficients and k-subset enumeration over machine words.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)` as a `u64`, `None` on overflow. Zero when `k > n`.
pub fn binom(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n, k)` as a big integer. Zero when `k > n`.
pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Saturating `C(n, k)`, handy for comparing against size caps.
pub fn binom_sat(n: u64, k: u64) -> u64 {
    binom(n, k).unwrap_or(u64::MAX)
}

/// Iterator over all `k`-element subsets of the low `n` bits, in ascending
/// numeric order (Gosper's hack).
#[derive(Debug, Clone)]
pub struct KSubsets {
    next: Option<u32>,
    limit: u64,
}

impl KSubsets {
    pub fn new(n: u32, k: u32) -> Self {
        assert!(n <= 31, "KSubsets supports at most 31 positions");
        let next = if k > n {
            None
        } else if k == 0 {
            Some(0)
        } else {
            Some(((1u64 << k) - 1) as u32)
        };
        KSubsets {
            next,
            limit: 1u64 << n,
        }
    }
}

impl Iterator for KSubsets {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur as u64;
            let low = c & c.wrapping_neg();
            let ripple = c + low;
            let succ = (((ripple ^ c) >> 2) / low) | ripple;
            (succ < self.limit).then_some(succ as u32)
        };
        Some(cur)
    }
}

/// Deposit the low bits of `pattern` into the set bit positions of `mask`
/// (software `pdep`).
pub fn deposit(mut pattern: u32, mut mask: u32) -> u32 {
    let mut out = 0;
    while mask != 0 && pattern != 0 {
        let low = mask & mask.wrapping_neg();
        if pattern & 1 == 1 {
            out |= low;
        }
        pattern >>= 1;
        mask &= mask - 1;
    }
    out
}

/// Rank of a `k`-subset among all `k`-subsets in ascending numeric order
/// (the colexicographic rank).
pub fn colex_rank(bits: u32) -> u64 {
    let mut rank = 0u64;
    let mut rest = bits;
    let mut i = 1u64;
    while rest != 0 {
        let pos = rest.trailing_zeros() as u64;
        rank += binom(pos, i).expect("small binomial");
        rest &= rest - 1;
        i += 1;
    }
    rank
}
