//! The succinct side structure and its randomized query.
//!
//! Preprocessing builds a list of cover pairs `(I, J)` (row set, column set)
//! and the list of 1-entries inside their union `U`. A query scans those
//! ones, samples uncovered entries row by row, and finally probes whatever
//! is left, failing if that remainder is too large.

use alloc::vec::Vec;

use crate::bits::BitVector;
use crate::bounds;

mod codec;
mod preprocess;
mod query;
mod verify;

pub use codec::{deserialize_redundancy, deserialize_redundancy_prefix, serialize_redundancy};
pub use preprocess::{
    preprocess_exact, preprocess_exact_with_cap, preprocess_heuristic, DEFAULT_EXACT_CAP, EXACT_HARD_LIMIT,
};
pub use query::{query, umv_query, QueryDiagnostics, QueryOutcome, QueryResult};
pub use verify::{verify_structure, VerifyReport};

/// One rectangle `I x J` of the cover.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverPair {
    pub rows: BitVector,
    pub cols: BitVector,
}

impl CoverPair {
    pub fn new(rows: BitVector, cols: BitVector) -> Self {
        debug_assert_eq!(rows.len(), cols.len());
        Self { rows, cols }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_zero() && self.cols.is_zero()
    }
}

/// The side structure `(L, E)`: cover pairs and the 1-entries they cover.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Redundancy {
    pub n: usize,
    /// Word size the thresholds were computed with.
    pub word_bits: u32,
    pub pairs: Vec<CoverPair>,
    /// Covered 1-entries `(row, col)`, row-major order.
    pub ones: Vec<(usize, usize)>,
}

impl Redundancy {
    pub fn empty(n: usize, word_bits: u32) -> Self {
        Self { n, word_bits, pairs: Vec::new(), ones: Vec::new() }
    }

    /// Row `i` of the cover `U` as a column mask.
    pub fn cover_rows(&self) -> Vec<BitVector> {
        let mut rows = alloc::vec![BitVector::zeros(self.n); self.n];
        for pair in &self.pairs {
            for i in pair.rows.support() {
                rows[i].or_assign(&pair.cols);
            }
        }
        rows
    }

    pub fn covered_cells(&self) -> usize {
        self.cover_rows().iter().map(|r| r.count_ones()).sum()
    }

    /// Serialized length `r` in bits, before word padding.
    pub fn serialized_len(&self) -> usize {
        let n = self.n;
        let w = self.word_bits;
        bounds::pair_count_width(n, w) as usize
            + self.pairs.len() * 2 * n
            + bounds::ones_count_width(n, w) as usize
            + self.ones.len() * 2 * bounds::coord_width(n) as usize
    }
}
