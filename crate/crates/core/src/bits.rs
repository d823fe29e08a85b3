//! Packed bit containers.
//!
//! [`BitString`] is a growable bit sequence used for serialized structures
//! and raw memory regions. [`BitVector`] is a fixed-dimension Boolean vector
//! with the set operations the query algorithms need.
//!
//! Bit `p` lives in word `p / 64` at bit `p % 64` (LSB first). Bits past
//! `len` in the last word are always zero, so derived equality is exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; words_for(len)], len }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self { words: vec![u64::MAX; words_for(len)], len };
        s.clear_tail();
        s
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut s = Self::new();
        for b in bits {
            s.push(b);
        }
        s
    }

    /// Builds a string of `len` bits from LSB-first packed bytes. Extra bits
    /// in the final byte are ignored.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() * 8 < len {
            return Err(Error::Decode(alloc::format!(
                "{} bytes cannot hold {len} bits",
                bytes.len()
            )));
        }
        let mut s = Self::zeros(len);
        for (i, chunk) in bytes.chunks(8).enumerate().take(s.words.len()) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            s.words[i] = u64::from_le_bytes(buf);
        }
        s.clear_tail();
        Ok(s)
    }

    /// LSB-first packed bytes, `ceil(len / 8)` of them, zero padded.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out.truncate(nbytes);
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn as_words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos < self.len);
        (self.words[pos / WORD] >> (pos % WORD)) & 1 == 1
    }

    pub fn try_get(&self, pos: usize) -> Result<bool> {
        if pos >= self.len {
            return Err(Error::OutOfBounds { index: pos, len: self.len });
        }
        Ok(self.get(pos))
    }

    #[inline]
    pub fn set(&mut self, pos: usize, value: bool) {
        debug_assert!(pos < self.len);
        let mask = 1u64 << (pos % WORD);
        if value {
            self.words[pos / WORD] |= mask;
        } else {
            self.words[pos / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value >> width == 0, "{value} does not fit {width} bits");
        for k in (0..width).rev() {
            self.push((value >> k) & 1 == 1);
        }
    }

    /// Reads `width` bits starting at `pos` as an MSB-first unsigned integer.
    pub fn read_uint(&self, pos: usize, width: u32) -> Result<u64> {
        debug_assert!(width <= 64);
        let end = pos + width as usize;
        if end > self.len {
            return Err(Error::Decode(alloc::format!(
                "need bits {pos}..{end}, string has {}",
                self.len
            )));
        }
        let mut v = 0u64;
        for p in pos..end {
            v = (v << 1) | self.get(p) as u64;
        }
        Ok(v)
    }

    pub fn extend_from(&mut self, other: &BitString) {
        for p in 0..other.len {
            self.push(other.get(p));
        }
    }

    /// The `index`-th `width`-bit word, LSB-first, zero padded past the end.
    pub fn word(&self, index: usize, width: u32) -> u64 {
        let width = width as usize;
        debug_assert!((1..=64).contains(&width));
        let start = index * width;
        let mut v = 0u64;
        for b in 0..width {
            let p = start + b;
            if p >= self.len {
                break;
            }
            v |= (self.get(p) as u64) << b;
        }
        v
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |p| self.get(p))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString[{}](", self.len)?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

/// A Boolean vector of fixed dimension `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector(BitString);

impl BitVector {
    pub fn zeros(n: usize) -> Self {
        Self(BitString::zeros(n))
    }

    pub fn ones(n: usize) -> Self {
        Self(BitString::ones(n))
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self(BitString::from_bools(bits))
    }

    /// Vector of dimension `n` with ones at `indices` (0-based).
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Result<Self> {
        let mut v = Self::zeros(n);
        for i in indices {
            if i >= n {
                return Err(Error::OutOfBounds { index: i, len: n });
            }
            v.set(i, true);
        }
        Ok(v)
    }

    /// Vector whose bit `i` is bit `i` of `mask`; requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64);
        let mut v = Self::zeros(n);
        if n > 0 {
            let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            v.0.words[0] = mask & keep;
        }
        v
    }

    /// Inverse of [`BitVector::from_mask`]; `None` when `n > 64`.
    pub fn to_mask(&self) -> Option<u64> {
        match self.0.len {
            0 => Some(0),
            1..=64 => Some(self.0.words[0]),
            _ => None,
        }
    }

    pub fn from_bit_string(bits: BitString) -> Self {
        Self(bits)
    }

    pub fn as_bit_string(&self) -> &BitString {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0.get(i)
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        self.0.set(i, value)
    }

    pub fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.0.words.iter().all(|&w| w == 0)
    }

    /// Indices of the one bits, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter()
    }

    /// Bitwise negation.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.0.words {
            *w = !*w;
        }
        out.0.clear_tail();
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    /// `self AND NOT other`.
    pub fn and_not(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.0.words.iter_mut().zip(&other.0.words) {
            *a |= *b;
        }
    }

    /// Popcount of `self AND other`.
    pub fn and_count(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .words
            .iter()
            .zip(&other.0.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Whether `self AND other` has any one bit.
    pub fn intersects(&self, other: &Self) -> bool {
        self.0.words.iter().zip(&other.0.words).any(|(a, b)| a & b != 0)
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let words = self.0.words.iter().zip(&other.0.words).map(|(&a, &b)| f(a, b)).collect();
        let mut out = Self(BitString { words, len: self.0.len });
        out.0.clear_tail();
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BitVector(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uint_fields_are_msb_first() {
        let mut s = BitString::new();
        s.push_uint(0b101, 3);
        s.push_uint(0b01, 2);
        assert_eq!(s.len(), 5);
        assert_eq!(s.iter().collect::<Vec<_>>(), [true, false, true, false, true]);
        assert_eq!(s.read_uint(0, 3).unwrap(), 5);
        assert_eq!(s.read_uint(3, 2).unwrap(), 1);
        assert!(s.read_uint(4, 2).is_err());
    }

    #[test]
    fn words_are_zero_padded() {
        let s = BitString::ones(10);
        assert_eq!(s.word(0, 8), 0xFF);
        assert_eq!(s.word(1, 8), 0b11);
        assert_eq!(s.word(0, 64), 0x3FF);
    }

    #[test]
    fn complement_keeps_tail_clear() {
        let v = BitVector::from_bools([true, false, true]);
        let c = v.complement();
        assert_eq!(c, BitVector::from_bools([false, true, false]));
        assert_eq!(c.count_ones(), 1);
        assert_eq!(BitVector::ones(70).complement(), BitVector::zeros(70));
    }

    #[test]
    fn from_indices_rejects_out_of_range() {
        assert!(BitVector::from_indices(4, [4]).is_err());
        let v = BitVector::from_indices(4, [0, 3]).unwrap();
        assert_eq!(v.support().collect::<Vec<_>>(), [0, 3]);
    }

    proptest! {
        #[test]
        fn bytes_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..300)) {
            let s = BitString::from_bools(bits.iter().copied());
            let back = BitString::from_bytes(&s.to_bytes(), s.len()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn complement_is_involution(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let v = BitVector::from_bools(bits);
            prop_assert_eq!(v.complement().complement(), v.clone());
            prop_assert_eq!(v.complement().count_ones() + v.count_ones(), v.len());
        }

        #[test]
        fn iter_ones_matches_get(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let s = BitString::from_bools(bits.iter().copied());
            let expected: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
            prop_assert_eq!(s.iter_ones().collect::<Vec<_>>(), expected);
        }
    }
}
