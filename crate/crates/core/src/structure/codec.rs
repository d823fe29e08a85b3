//! Bit layout of `(L, E)`, all integer fields MSB-first:
//!
//! ```text
//! pair count      ceil(lg sqrt(n w) + 1) bits
//! pairs           2n bits each: row mask (row 0 first), then column mask
//! ones count      ceil(lg(n^{3/2}/sqrt(w)) + 1) bits, at least 1
//! ones            2 ceil(lg n) bits each: row, then column
//! ```

use alloc::format;
use alloc::vec::Vec;

use super::{CoverPair, Redundancy};
use crate::bits::{BitString, BitVector};
use crate::bounds::{coord_width, ones_count_width, pair_count_width};
use crate::{Error, Result};

pub fn serialize_redundancy(r: &Redundancy) -> Result<BitString> {
    let n = r.n;
    let w = r.word_bits;
    let pw = pair_count_width(n, w);
    let ow = ones_count_width(n, w);
    let cw = coord_width(n);
    if r.pairs.len() as u128 >= 1u128 << pw {
        return Err(Error::InvalidArgument(format!(
            "{} pairs do not fit a {pw}-bit count",
            r.pairs.len()
        )));
    }
    if r.ones.len() as u128 >= 1u128 << ow {
        return Err(Error::InvalidArgument(format!(
            "{} ones do not fit a {ow}-bit count",
            r.ones.len()
        )));
    }

    let mut out = BitString::new();
    out.push_uint(r.pairs.len() as u64, pw);
    for pair in &r.pairs {
        if pair.rows.len() != n || pair.cols.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: pair.rows.len().max(pair.cols.len()) });
        }
        for b in pair.rows.iter().chain(pair.cols.iter()) {
            out.push(b);
        }
    }
    out.push_uint(r.ones.len() as u64, ow);
    for &(i, j) in &r.ones {
        for c in [i, j] {
            if c >= n {
                return Err(Error::OutOfBounds { index: c, len: n });
            }
            out.push_uint(c as u64, cw);
        }
    }
    debug_assert_eq!(out.len(), r.serialized_len());
    Ok(out)
}

/// Decodes a structure that occupies exactly `bits`.
pub fn deserialize_redundancy(bits: &BitString, n: usize, w: u32) -> Result<Redundancy> {
    let (r, used) = deserialize_redundancy_prefix(bits, n, w)?;
    if used != bits.len() {
        return Err(Error::Decode(format!("{} trailing bits after structure", bits.len() - used)));
    }
    Ok(r)
}

/// Decodes a structure from the front of `bits`, returning it with the
/// number of bits consumed.
pub fn deserialize_redundancy_prefix(bits: &BitString, n: usize, w: u32) -> Result<(Redundancy, usize)> {
    if n == 0 || w == 0 {
        return Err(Error::Decode("n and w must be positive".into()));
    }
    let pw = pair_count_width(n, w);
    let ow = ones_count_width(n, w);
    let cw = coord_width(n);
    let mut pos = 0usize;

    let pair_count = bits.read_uint(pos, pw)? as usize;
    pos += pw as usize;
    if pos + pair_count * 2 * n > bits.len() {
        return Err(Error::Decode(format!("truncated: {pair_count} pairs need {} bits", pair_count * 2 * n)));
    }
    let mut pairs = Vec::with_capacity(pair_count);
    for _ in 0..pair_count {
        let rows = BitVector::from_bools((pos..pos + n).map(|p| bits.get(p)));
        let cols = BitVector::from_bools((pos + n..pos + 2 * n).map(|p| bits.get(p)));
        pos += 2 * n;
        let pair = CoverPair::new(rows, cols);
        if pair.is_empty() {
            return Err(Error::Decode("pair with empty row and column sets".into()));
        }
        pairs.push(pair);
    }

    let ones_count = bits.read_uint(pos, ow)? as usize;
    pos += ow as usize;
    if pos + ones_count * 2 * cw as usize > bits.len() {
        return Err(Error::Decode(format!("truncated: {ones_count} ones")));
    }
    let mut ones = Vec::with_capacity(ones_count);
    for _ in 0..ones_count {
        let i = bits.read_uint(pos, cw)? as usize;
        let j = bits.read_uint(pos + cw as usize, cw)? as usize;
        pos += 2 * cw as usize;
        if i >= n || j >= n {
            return Err(Error::Decode(format!("coordinate ({i}, {j}) outside {n}x{n}")));
        }
        ones.push((i, j));
    }
    Ok((Redundancy { n, word_bits: w, pairs, ones }, pos))
}
