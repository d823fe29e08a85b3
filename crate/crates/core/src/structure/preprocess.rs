use alloc::vec::Vec;
use rand::seq::index;
use rand::Rng;

use super::{CoverPair, Redundancy};
use crate::bits::BitVector;
use crate::bounds::{density_ok, meets_cover_threshold};
use crate::matrix::BitMatrix;
use crate::{Error, Result};

/// Largest `n` exact mode accepts unless a larger cap is passed.
pub const DEFAULT_EXACT_CAP: usize = 12;

/// Exact mode keys pairs by a `2n`-bit integer, so `n` can never exceed 32.
pub const EXACT_HARD_LIMIT: usize = 32;

/// Running cover `U` during preprocessing, one column mask per row.
struct CoverState<'a> {
    n: usize,
    w: u32,
    rows: &'a [BitVector],
    covered: Vec<BitVector>,
    pairs: Vec<CoverPair>,
}

impl<'a> CoverState<'a> {
    fn new(rows: &'a [BitVector], w: u32) -> Self {
        let n = rows.len();
        Self { n, w, rows, covered: alloc::vec![BitVector::zeros(n); n], pairs: Vec::new() }
    }

    fn row_fresh(&self, i: usize, cols: &BitVector) -> (usize, usize) {
        let fresh = cols.and_not(&self.covered[i]);
        (fresh.count_ones(), fresh.and_count(&self.rows[i]))
    }

    /// Both acceptance conditions against the current cover.
    fn accepts(&self, rows: &BitVector, cols: &BitVector) -> bool {
        let mut fresh_total = 0;
        for i in rows.support() {
            let (size, ones) = self.row_fresh(i, cols);
            if !density_ok(ones, size, self.n, self.w) {
                return false;
            }
            fresh_total += size;
        }
        meets_cover_threshold(fresh_total, self.n, self.w)
    }

    fn add(&mut self, rows: BitVector, cols: BitVector) {
        for i in rows.support() {
            self.covered[i].or_assign(&cols);
        }
        self.pairs.push(CoverPair::new(rows, cols));
    }

    fn finish(self, matrix: &BitMatrix) -> Redundancy {
        let ones = collect_covered_ones(matrix, &self.covered);
        Redundancy { n: self.n, word_bits: self.w, pairs: self.pairs, ones }
    }
}

fn collect_covered_ones(matrix: &BitMatrix, covered: &[BitVector]) -> Vec<(usize, usize)> {
    let mut ones = Vec::new();
    for (i, cov) in covered.iter().enumerate() {
        for j in cov.support() {
            if matrix.get(i, j) {
                ones.push((i, j));
            }
        }
    }
    ones
}

fn check_word_bits(w: u32) -> Result<()> {
    if w == 0 {
        return Err(Error::InvalidArgument("word size must be positive".into()));
    }
    Ok(())
}

/// Exhaustive preprocessing over all `4^n` pairs with the default cap.
pub fn preprocess_exact(matrix: &BitMatrix, w: u32) -> Result<Redundancy> {
    preprocess_exact_with_cap(matrix, w, DEFAULT_EXACT_CAP)
}

/// Visits every pair `(I, J)` in ascending order of the key `I << n | J`
/// (bit `i` of a mask is row or column `i`) and accepts a pair when
///
/// 1. it covers at least `n^{3/2}/sqrt(w)` cells not yet in `U`, and
/// 2. in every row of `I` the uncovered part of `J` has 1-density at most
///    `1/sqrt(n w)` (rows with nothing uncovered pass).
pub fn preprocess_exact_with_cap(matrix: &BitMatrix, w: u32, cap: usize) -> Result<Redundancy> {
    check_word_bits(w)?;
    let n = matrix.dim();
    let cap = cap.min(EXACT_HARD_LIMIT);
    if n > cap {
        return Err(Error::ExactCapExceeded { n, cap });
    }

    let m_rows: Vec<u64> = (0..n).map(|i| matrix.row(i).to_mask().unwrap()).collect();
    let mut covered = alloc::vec![0u64; n];
    let mut pairs = Vec::new();
    let full: u64 = (1u64 << n) - 1;
    let density = |ones: u32, size: u32| density_ok(ones as usize, size as usize, n, w);

    // rows = 0 or cols = 0 covers nothing and can never be accepted
    for rows in 1..=full {
        let row_count = rows.count_ones() as usize;
        for cols in 1..=full {
            if !meets_cover_threshold(row_count * cols.count_ones() as usize, n, w) {
                continue;
            }
            let mut fresh_total = 0usize;
            let mut ok = true;
            let mut rest = rows;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let fresh = cols & !covered[i];
                let size = fresh.count_ones();
                if size > 0 && !density((fresh & m_rows[i]).count_ones(), size) {
                    ok = false;
                    break;
                }
                fresh_total += size as usize;
            }
            if ok && meets_cover_threshold(fresh_total, n, w) {
                let mut rest = rows;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    covered[i] |= cols;
                }
                pairs.push(CoverPair::new(BitVector::from_mask(n, rows), BitVector::from_mask(n, cols)));
            }
        }
    }

    let covered: Vec<BitVector> = covered.iter().map(|&c| BitVector::from_mask(n, c)).collect();
    let ones = collect_covered_ones(matrix, &covered);
    Ok(Redundancy { n, word_bits: w, pairs, ones })
}

/// Greedy preprocessing over `candidate_budget` generated candidates.
///
/// The first candidate is the full pair `([n], [n])`. Later candidates pick
/// a random row set and column set, each of size `n >> k` for a random
/// level `k`, then drop the rows whose uncovered slice is too dense. Every
/// candidate is tested with the same two acceptance conditions as exact
/// mode, so all size bounds of the result still hold; only the query's
/// failure-probability guarantee is lost.
pub fn preprocess_heuristic<R: Rng + ?Sized>(
    matrix: &BitMatrix,
    w: u32,
    candidate_budget: usize,
    rng: &mut R,
) -> Result<Redundancy> {
    check_word_bits(w)?;
    if candidate_budget == 0 {
        return Err(Error::InvalidArgument("candidate budget must be at least 1".into()));
    }
    let n = matrix.dim();
    let rows = matrix.rows();
    let mut state = CoverState::new(&rows, w);

    let all = BitVector::ones(n);
    if state.accepts(&all, &all) {
        state.add(all.clone(), all);
    }

    let levels = usize::BITS - n.leading_zeros();
    for _ in 1..candidate_budget {
        let row_size = (n >> rng.gen_range(0..levels)).max(1);
        let col_size = (n >> rng.gen_range(0..levels)).max(1);
        let cols = BitVector::from_indices(n, index::sample(rng, n, col_size).into_iter())?;
        let picked = index::sample(rng, n, row_size);
        let kept = picked.into_iter().filter(|&i| {
            let (size, ones) = state.row_fresh(i, &cols);
            density_ok(ones, size, n, w)
        });
        let cand_rows = BitVector::from_indices(n, kept)?;
        if !cand_rows.is_zero() && state.accepts(&cand_rows, &cols) {
            state.add(cand_rows, cols);
        }
    }
    Ok(state.finish(matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{ones_count_ok, pair_count_ok};
    use crate::structure::verify_structure;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exact mode re-implemented over the generic cover state, key by key.
    fn exact_reference(matrix: &BitMatrix, w: u32) -> Redundancy {
        let n = matrix.dim();
        let rows = matrix.rows();
        let mut state = CoverState::new(&rows, w);
        for key in 0u64..(1u64 << (2 * n)) {
            let r = BitVector::from_mask(n, key >> n);
            let c = BitVector::from_mask(n, key & ((1 << n) - 1));
            if state.accepts(&r, &c) {
                state.add(r, c);
            }
        }
        state.finish(matrix)
    }

    #[test]
    fn all_ones_matrix_gets_empty_structure() {
        let m = BitMatrix::ones(4).unwrap();
        let r = preprocess_exact(&m, 4).unwrap();
        assert!(r.pairs.is_empty());
        assert!(r.ones.is_empty());
        let h = preprocess_heuristic(&m, 4, 200, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!(h.pairs.is_empty());
        assert!(h.ones.is_empty());
    }

    #[test]
    fn all_zeros_matrix_exact() {
        let m = BitMatrix::zeros(4).unwrap();
        let r = preprocess_exact(&m, 4).unwrap();
        assert!(r.ones.is_empty());
        assert!(!r.pairs.is_empty());
        // replay the acceptances: each pair covers at least n^{1.5}/sqrt(w) = 4 new cells
        let mut seen = alloc::vec![BitVector::zeros(4); 4];
        for p in &r.pairs {
            let fresh: usize = p.rows.support().map(|i| p.cols.and_not(&seen[i]).count_ones()).sum();
            assert!(fresh >= 4);
            for i in p.rows.support() {
                seen[i].or_assign(&p.cols);
            }
        }
        // the first acceptable key is rows={0}, cols={0,1,2,3}
        assert_eq!(r.pairs[0].rows, BitVector::from_mask(4, 0b0001));
        assert_eq!(r.pairs[0].cols, BitVector::from_mask(4, 0b1111));
        assert_eq!(r.pairs.len(), 4);
    }

    #[test]
    fn heuristic_full_pair_on_zero_matrix() {
        let m = BitMatrix::zeros(16).unwrap();
        let r = preprocess_heuristic(&m, 16, 1, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.covered_cells(), 256);
        assert!(r.ones.is_empty());
    }

    #[test]
    fn cap_and_budget_validation() {
        let m = BitMatrix::zeros(13).unwrap();
        assert!(matches!(preprocess_exact(&m, 8), Err(Error::ExactCapExceeded { n: 13, cap: 12 })));
        assert!(preprocess_heuristic(&m, 8, 0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
        assert!(preprocess_exact(&BitMatrix::zeros(2).unwrap(), 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exact_fast_path_matches_reference(seed: u64, n in 1usize..=5, w in prop::sample::select(vec![1u32, 4, 8, 16]), density in 0.0f64..0.6) {
            let m = BitMatrix::random(n, density, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            prop_assert_eq!(preprocess_exact(&m, w).unwrap(), exact_reference(&m, w));
        }

        #[test]
        fn exact_output_satisfies_invariants(seed: u64, n in 1usize..=7, w in prop::sample::select(vec![4u32, 8, 16]), density in 0.0f64..0.6) {
            let m = BitMatrix::random(n, density, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let r = preprocess_exact(&m, w).unwrap();
            prop_assert!(pair_count_ok(r.pairs.len(), n, w));
            prop_assert!(ones_count_ok(r.ones.len(), n, w));
            prop_assert!(verify_structure(&m, &r, w).all_pass());
        }

        #[test]
        fn heuristic_output_satisfies_invariants(seed: u64, n in 1usize..=48, w in prop::sample::select(vec![8u32, 16, 64]), density in 0.0f64..0.6, budget in 1usize..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = BitMatrix::random(n, density, &mut rng).unwrap();
            let r = preprocess_heuristic(&m, w, budget, &mut rng).unwrap();
            prop_assert!(verify_structure(&m, &r, w).all_pass());
            let mut rng2 = ChaCha8Rng::seed_from_u64(seed);
            let m2 = BitMatrix::random(n, density, &mut rng2).unwrap();
            prop_assert_eq!(preprocess_heuristic(&m2, w, budget, &mut rng2).unwrap(), r);
        }
    }
}
