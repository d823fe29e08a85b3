use alloc::vec::Vec;

use crate::bits::BitVector;
use crate::hard::{family_entropy_bits, HardInstanceSpec};
use crate::{Error, Result};

/// Zeros implied by the answers: a 0 in answer `m` at row `i` rules out
/// every column selected by vector `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct InferredZerosReport {
    /// Known zeros of block `(i, b)` at index `i * blocks_per_row + b`.
    pub per_block: Vec<usize>,
    pub min_per_block: usize,
    /// `3n^2 / (4r)`.
    pub threshold: f64,
    pub meets_threshold: bool,
    /// Queries answered 0 at each row.
    pub zero_answers_per_row: Vec<usize>,
    pub min_zero_answers: usize,
    /// `(r - k) lg(n^2 / (4r))`.
    pub residual_bound: f64,
}

pub fn inferred_zeros_report(
    answers: &[BitVector],
    vectors: &[BitVector],
    spec: &HardInstanceSpec,
    k: usize,
) -> Result<InferredZerosReport> {
    let n = spec.n();
    if answers.len() != vectors.len() {
        return Err(Error::DimensionMismatch { expected: vectors.len(), actual: answers.len() });
    }
    for x in answers.iter().chain(vectors) {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
        }
    }

    let blocks = spec.blocks_per_row();
    let mut per_block = alloc::vec![0usize; n * blocks];
    let mut zero_answers_per_row = alloc::vec![0usize; n];
    for i in 0..n {
        let mut known = BitVector::zeros(n);
        for (a, v) in answers.iter().zip(vectors) {
            if !a.get(i) {
                zero_answers_per_row[i] += 1;
                known.or_assign(v);
            }
        }
        for j in known.support() {
            per_block[i * blocks + spec.block_of(j)] += 1;
        }
    }

    let min_per_block = per_block.iter().copied().min().unwrap_or(0);
    Ok(InferredZerosReport {
        meets_threshold: per_block.iter().all(|&c| spec.meets_known_zero_threshold(c)),
        min_per_block,
        per_block,
        threshold: spec.known_zero_threshold(),
        min_zero_answers: zero_answers_per_row.iter().copied().min().unwrap_or(0),
        zero_answers_per_row,
        residual_bound: spec.residual_entropy_bound(k),
    })
}

/// Both sides of `r_bits + |E| >= r lg(n^2/r) - (r - k) lg(n^2/(4r))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationCheck {
    pub lhs_bits: f64,
    pub entropy_bits: f64,
    pub residual_bound: f64,
    pub holds: bool,
}

pub fn information_check(
    spec: &HardInstanceSpec,
    redundancy_bits: usize,
    encoding_bits: usize,
    k: usize,
) -> Result<InformationCheck> {
    let entropy_bits = family_entropy_bits(spec)?;
    let residual_bound = spec.residual_entropy_bound(k);
    let lhs_bits = (redundancy_bits + encoding_bits) as f64;
    Ok(InformationCheck {
        lhs_bits,
        entropy_bits,
        residual_bound,
        holds: lhs_bits + 1e-9 >= entropy_bits - residual_bound,
    })
}
