//! Colexicographic ranking of `k`-subsets of `{0, .., b-1}`.
//!
//! The rank of `{c_0 < c_1 < .. < c_{k-1}}` is `sum_i C(c_i, i+1)`, a
//! bijection onto `0 .. C(b, k)`.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

/// `ceil(lg C(b, k))`, the width of a rank field.
pub fn rank_width(b: usize, k: usize) -> Result<u32> {
    let c = binomial(b, k);
    if c.is_zero() {
        return Err(Error::InvalidArgument(alloc::format!("no {k}-subsets of a {b}-set")));
    }
    Ok((c - 1u32).bits() as u32)
}

/// Rank of a strictly increasing subset of `0..b`.
pub fn colex_rank(subset: &[usize], b: usize) -> Result<BigUint> {
    let mut rank = BigUint::zero();
    for (i, &c) in subset.iter().enumerate() {
        if c >= b || (i > 0 && subset[i - 1] >= c) {
            return Err(Error::InvalidArgument("subset must be strictly increasing and below b".into()));
        }
        rank += binomial(c, i + 1);
    }
    Ok(rank)
}

/// Inverse of [`colex_rank`].
pub fn colex_unrank(rank: &BigUint, b: usize, k: usize) -> Result<Vec<usize>> {
    if *rank >= binomial(b, k) {
        return Err(Error::Decode(alloc::format!("rank out of range for C({b}, {k})")));
    }
    let mut rest = rank.clone();
    let mut out = alloc::vec![0usize; k];
    let mut upper = b; // elements chosen so far are all below `upper`
    for i in (1..=k).rev() {
        // largest c < upper with C(c, i) <= rest; C(i-1, i) = 0 always qualifies
        let (mut lo, mut hi) = (i - 1, upper - 1);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if binomial(mid, i) <= rest {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        rest -= binomial(lo, i);
        out[i - 1] = lo;
        upper = lo;
    }
    debug_assert!(rest.is_zero());
    Ok(out)
}
