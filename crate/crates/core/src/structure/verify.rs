use alloc::collections::BTreeSet;

use super::Redundancy;
use crate::bounds::{ones_count_ok, pair_count_ok};
use crate::matrix::BitMatrix;

/// Per-invariant result of [`verify_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyReport {
    pub dimensions: bool,
    /// Listed ones are exactly the 1-entries of `U`, each listed once.
    pub completeness: bool,
    /// Every listed entry is a 1 in `M`.
    pub values: bool,
    /// `|L| <= sqrt(n w)`.
    pub pair_count: bool,
    /// `|E| <= n^{3/2}/sqrt(w)`.
    pub ones_count: bool,
    pub nonempty_pairs: bool,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.dimensions && self.completeness && self.values && self.pair_count && self.ones_count && self.nonempty_pairs
    }
}

/// Checks a structure against the matrix it claims to describe. Never fails;
/// each invariant is reported separately.
pub fn verify_structure(matrix: &BitMatrix, r: &Redundancy, w: u32) -> VerifyReport {
    let n = matrix.dim();
    let dimensions = r.n == n
        && r.word_bits == w
        && r.pairs.iter().all(|p| p.rows.len() == n && p.cols.len() == n)
        && r.ones.iter().all(|&(i, j)| i < n && j < n);
    if !dimensions {
        return VerifyReport {
            dimensions,
            completeness: false,
            values: false,
            pair_count: pair_count_ok(r.pairs.len(), n, w),
            ones_count: ones_count_ok(r.ones.len(), n, w),
            nonempty_pairs: r.pairs.iter().all(|p| !p.is_empty()),
        };
    }

    let cover = r.cover_rows();
    let listed: BTreeSet<(usize, usize)> = r.ones.iter().copied().collect();
    let mut expected = BTreeSet::new();
    for (i, row) in cover.iter().enumerate() {
        for j in row.support() {
            if matrix.get(i, j) {
                expected.insert((i, j));
            }
        }
    }

    VerifyReport {
        dimensions,
        completeness: listed.len() == r.ones.len() && listed == expected,
        values: r.ones.iter().all(|&(i, j)| matrix.get(i, j)),
        pair_count: pair_count_ok(r.pairs.len(), n, w),
        ones_count: ones_count_ok(r.ones.len(), n, w),
        nonempty_pairs: r.pairs.iter().all(|p| !p.is_empty()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::preprocess_exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample() -> (BitMatrix, Redundancy) {
        let m = BitMatrix::random(8, 0.1, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let r = preprocess_exact(&m, 8).unwrap();
        (m, r)
    }

    #[test]
    fn preprocessed_structure_passes() {
        let (m, r) = sample();
        assert!(!r.pairs.is_empty());
        assert!(verify_structure(&m, &r, 8).all_pass());
    }

    #[test]
    fn fabricated_entry_outside_cover_fails_completeness() {
        let m = BitMatrix::ones(4).unwrap();
        let mut r = Redundancy::empty(4, 4);
        r.ones.push((1, 2));
        let rep = verify_structure(&m, &r, 4);
        assert!(!rep.completeness);
        assert!(rep.values);
    }

    #[test]
    fn missing_or_duplicate_entries_fail_completeness() {
        let (m, mut r) = sample();
        if let Some(&first) = r.ones.first() {
            r.ones.push(first);
            assert!(!verify_structure(&m, &r, 8).completeness);
        }
        let (m, mut r) = sample();
        if r.ones.pop().is_some() {
            assert!(!verify_structure(&m, &r, 8).completeness);
        }
    }

    #[test]
    fn too_many_ones_fails_cardinality() {
        // n=4, w=4 allows at most 4 ones
        let m = BitMatrix::ones(4).unwrap();
        let mut r = Redundancy::empty(4, 4);
        r.ones = (0..4).flat_map(|i| [(i, 0), (i, 1)]).collect();
        let rep = verify_structure(&m, &r, 4);
        assert!(!rep.ones_count);
        assert!(!rep.all_pass());
    }

    #[test]
    fn zero_value_entry_fails_values() {
        let m = BitMatrix::zeros(4).unwrap();
        let r = preprocess_exact(&m, 4).unwrap();
        let mut bad = r.clone();
        bad.ones.push((0, 0));
        let rep = verify_structure(&m, &bad, 4);
        assert!(!rep.values);
        assert!(!rep.completeness);
    }
}
