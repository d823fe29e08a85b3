//! Cell-probe memory: a read-only matrix region and a redundancy region,
//! both divided into `w`-bit words.
//!
//! Only reads are charged. Within one session a word is charged the first
//! time any of its bits is requested; later requests to the same word are
//! free (the querier may remember what it read) but still counted in
//! `matrix_bit_requests`.

use alloc::vec::Vec;

use crate::bits::BitString;
use crate::matrix::BitMatrix;
use crate::{Error, Result};

/// Word size of a probe session. One of 8, 16, 32, 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WordSize(u32);

impl WordSize {
    pub fn new(bits: u32) -> Result<Self> {
        match bits {
            8 | 16 | 32 | 64 => Ok(Self(bits)),
            _ => Err(Error::InvalidWordSize(bits)),
        }
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ProbeLedger {
    pub matrix_word_probes: u64,
    pub redundancy_word_probes: u64,
    /// Matrix bit requests before memoization.
    pub matrix_bit_requests: u64,
}

/// Memory a query algorithm reads from.
///
/// Implemented by [`ProbeSession`] over real memory and by the replay
/// emulators, which answer matrix probes without the matrix.
pub trait CellProbe {
    fn dim(&self) -> usize;

    fn word_bits(&self) -> u32;

    fn redundancy_word_count(&self) -> usize;

    fn probe_matrix_bit(&mut self, row: usize, col: usize) -> Result<bool>;

    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64>;
}

impl<P: CellProbe + ?Sized> CellProbe for &mut P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn word_bits(&self) -> u32 {
        (**self).word_bits()
    }
    fn redundancy_word_count(&self) -> usize {
        (**self).redundancy_word_count()
    }
    fn probe_matrix_bit(&mut self, row: usize, col: usize) -> Result<bool> {
        (**self).probe_matrix_bit(row, col)
    }
    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64> {
        (**self).probe_redundancy_word(index)
    }
}

/// The redundancy region as `w`-bit words, zero padded at the tail.
#[derive(Debug, Clone, Copy)]
pub struct RedundancyMemory<'a> {
    bits: &'a BitString,
    word_bits: u32,
}

impl<'a> RedundancyMemory<'a> {
    pub fn new(bits: &'a BitString, word_bits: u32) -> Self {
        assert!((1..=64).contains(&word_bits));
        Self { bits, word_bits }
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn word_count(&self) -> usize {
        self.bits.len().div_ceil(self.word_bits as usize)
    }

    /// Length in bits before padding.
    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    pub fn word(&self, index: usize) -> Result<u64> {
        let len = self.word_count();
        if index >= len {
            return Err(Error::OutOfBounds { index, len });
        }
        Ok(self.bits.word(index, self.word_bits))
    }
}

pub struct ProbeSession<'a> {
    matrix: &'a BitMatrix,
    redundancy: RedundancyMemory<'a>,
    word: WordSize,
    ledger: ProbeLedger,
    matrix_memo: BitString,
    redundancy_memo: BitString,
}

impl<'a> ProbeSession<'a> {
    pub fn new(matrix: &'a BitMatrix, redundancy: &'a BitString, word_bits: u32) -> Result<Self> {
        let word = WordSize::new(word_bits)?;
        let n = matrix.dim();
        let memory = RedundancyMemory::new(redundancy, word.bits());
        Ok(Self {
            matrix,
            redundancy: memory,
            word,
            ledger: ProbeLedger::default(),
            matrix_memo: BitString::zeros((n * n).div_ceil(word.bits() as usize)),
            redundancy_memo: BitString::zeros(memory.word_count()),
        })
    }

    pub fn ledger(&self) -> ProbeLedger {
        self.ledger
    }

    pub fn matrix(&self) -> &BitMatrix {
        self.matrix
    }

    /// Word address of matrix entry `(i, j)` under the row-major layout.
    #[inline]
    pub fn matrix_word_of(&self, i: usize, j: usize) -> usize {
        (i * self.matrix.dim() + j) / self.word.bits() as usize
    }
}

impl CellProbe for ProbeSession<'_> {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn word_bits(&self) -> u32 {
        self.word.bits()
    }

    fn redundancy_word_count(&self) -> usize {
        self.redundancy.word_count()
    }

    fn probe_matrix_bit(&mut self, row: usize, col: usize) -> Result<bool> {
        let value = self.matrix.try_get(row, col)?;
        self.ledger.matrix_bit_requests += 1;
        let addr = self.matrix_word_of(row, col);
        if !self.matrix_memo.get(addr) {
            self.matrix_memo.set(addr, true);
            self.ledger.matrix_word_probes += 1;
        }
        Ok(value)
    }

    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64> {
        let word = self.redundancy.word(index)?;
        if !self.redundancy_memo.get(index) {
            self.redundancy_memo.set(index, true);
            self.ledger.redundancy_word_probes += 1;
        }
        Ok(word)
    }
}

/// One matrix probe as seen by a recorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixProbe {
    pub row: usize,
    pub col: usize,
    pub value: bool,
}

/// Wraps a probe source and logs every matrix bit request in order.
pub struct Recording<P> {
    inner: P,
    log: Vec<MatrixProbe>,
}

impl<P: CellProbe> Recording<P> {
    pub fn new(inner: P) -> Self {
        Self { inner, log: Vec::new() }
    }

    pub fn log(&self) -> &[MatrixProbe] {
        &self.log
    }

    pub fn take_log(&mut self) -> Vec<MatrixProbe> {
        core::mem::take(&mut self.log)
    }

    pub fn into_parts(self) -> (P, Vec<MatrixProbe>) {
        (self.inner, self.log)
    }
}

impl<P: CellProbe> CellProbe for Recording<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn word_bits(&self) -> u32 {
        self.inner.word_bits()
    }
    fn redundancy_word_count(&self) -> usize {
        self.inner.redundancy_word_count()
    }
    fn probe_matrix_bit(&mut self, row: usize, col: usize) -> Result<bool> {
        let value = self.inner.probe_matrix_bit(row, col)?;
        self.log.push(MatrixProbe { row, col, value });
        Ok(value)
    }
    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64> {
        self.inner.probe_redundancy_word(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn fresh_session_has_zero_ledger() {
        let m = BitMatrix::zeros(4).unwrap();
        let r = BitString::new();
        let s = ProbeSession::new(&m, &r, 8).unwrap();
        assert_eq!(s.ledger(), ProbeLedger::default());

        let m2 = BitMatrix::zeros(2).unwrap();
        let r2 = BitString::zeros(10);
        let s2 = ProbeSession::new(&m2, &r2, 8).unwrap();
        assert_eq!(s2.ledger(), ProbeLedger::default());
    }

    #[test]
    fn word_size_must_be_supported() {
        let m = BitMatrix::zeros(8).unwrap();
        let r = BitString::zeros(100);
        assert!(matches!(ProbeSession::new(&m, &r, 4), Err(Error::InvalidWordSize(4))));
        assert!(ProbeSession::new(&m, &r, 12).is_err());
        for w in [8, 16, 32, 64] {
            assert!(ProbeSession::new(&m, &r, w).is_ok());
        }
    }

    #[test]
    fn matrix_probes_memoize_per_word() {
        let m = BitMatrix::identity(4).unwrap();
        let r = BitString::new();
        let mut s = ProbeSession::new(&m, &r, 8).unwrap();
        assert!(s.probe_matrix_bit(1, 1).unwrap());

        let mut s = ProbeSession::new(&m, &r, 8).unwrap();
        s.probe_matrix_bit(0, 0).unwrap();
        s.probe_matrix_bit(0, 1).unwrap();
        assert_eq!(s.ledger().matrix_word_probes, 1);
        assert_eq!(s.ledger().matrix_bit_requests, 2);

        // positions 0 and 8 fall in words 0 and 1
        let mut s = ProbeSession::new(&m, &r, 8).unwrap();
        s.probe_matrix_bit(0, 0).unwrap();
        s.probe_matrix_bit(2, 0).unwrap();
        assert_eq!(s.matrix_word_of(2, 0), 1);
        assert_eq!(s.ledger().matrix_word_probes, 2);

        assert!(matches!(s.probe_matrix_bit(4, 0), Err(Error::OutOfBounds { .. })));
        assert!(s.probe_matrix_bit(0, 4).is_err());
    }

    #[test]
    fn redundancy_words_are_padded() {
        let m = BitMatrix::zeros(2).unwrap();
        let r = BitString::ones(10);
        let mut s = ProbeSession::new(&m, &r, 8).unwrap();
        assert_eq!(s.probe_redundancy_word(0).unwrap(), 0xFF);
        assert_eq!(s.probe_redundancy_word(1).unwrap(), 0b11);
        assert!(matches!(s.probe_redundancy_word(2), Err(Error::OutOfBounds { index: 2, len: 2 })));
        s.probe_redundancy_word(1).unwrap();
        assert_eq!(s.ledger().redundancy_word_probes, 2);
    }

    #[test]
    fn ledger_reads_are_pure() {
        let m = BitMatrix::identity(8).unwrap();
        let r = BitString::new();
        let mut s = ProbeSession::new(&m, &r, 8).unwrap();
        for i in 0..3 {
            s.probe_matrix_bit(i, 0).unwrap();
        }
        let a = s.ledger();
        let b = s.ledger();
        assert_eq!(a, b);
        assert_eq!(a.matrix_word_probes, 3);
    }

    proptest! {
        #[test]
        fn word_probes_count_distinct_words(
            n in 1usize..20,
            w in prop::sample::select(vec![8u32, 16, 32, 64]),
            probes in proptest::collection::vec((0usize..20, 0usize..20), 0..80),
        ) {
            let mut m = BitMatrix::zeros(n).unwrap();
            for (i, j) in &probes {
                if i < &n && j < &n && (i + j) % 3 == 0 {
                    m.set(*i, *j, true);
                }
            }
            let before = m.clone();
            let r = BitString::ones(37);
            let r_before = r.clone();
            let mut s = ProbeSession::new(&m, &r, w).unwrap();
            let mut words = BTreeSet::new();
            let mut requests = 0u64;
            let mut prev = s.ledger();
            for (i, j) in probes.iter().map(|&(i, j)| (i % n, j % n)) {
                prop_assert_eq!(s.probe_matrix_bit(i, j).unwrap(), m.get(i, j));
                words.insert((i * n + j) / w as usize);
                requests += 1;
                let now = s.ledger();
                prop_assert!(now.matrix_word_probes >= prev.matrix_word_probes);
                prop_assert!(now.matrix_word_probes <= now.matrix_bit_requests);
                prev = now;
            }
            prop_assert_eq!(s.ledger().matrix_word_probes, words.len() as u64);
            prop_assert_eq!(s.ledger().matrix_bit_requests, requests);
            drop(s);
            prop_assert_eq!(m, before);
            prop_assert_eq!(r, r_before);
        }
    }
}
