use alloc::vec::Vec;
use rand::Rng;

use super::Redundancy;
use crate::bits::BitVector;
use crate::bounds::{meets_cover_threshold, sample_count};
use crate::probe::CellProbe;
use crate::seed::QuerySeed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryResult {
    Answer(BitVector),
    Failure,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryDiagnostics {
    /// `|I_1|`: undecided rows after scanning the covered ones.
    pub rows_after_scan: usize,
    /// `|I_2|`: undecided rows after sampling.
    pub rows_after_sampling: usize,
    /// `|(I_2 x J) \ U|`.
    pub remaining: usize,
    /// `(row, samples drawn)` for every row that reached step 2.
    pub samples: Vec<(usize, usize)>,
    pub fallback_used: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOutcome {
    pub result: QueryResult,
    pub diagnostics: QueryDiagnostics,
}

impl QueryOutcome {
    pub fn answer(&self) -> Option<&BitVector> {
        match &self.result {
            QueryResult::Answer(u) => Some(u),
            QueryResult::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.result == QueryResult::Failure
    }
}

/// Computes `Mv` through `probe`.
///
/// 1. Read the structure, then set `u_i = 1` for every covered one
///    `(i, j)` with `v_j = 1`.
/// 2. For each undecided row draw `ceil(2 sqrt(n w) lg n)` columns, with
///    repetition, from `J` minus the cover; a 1 decides the row.
/// 3. If the uncovered remainder of the undecided rows has at least
///    `n^{3/2}/sqrt(w)` cells, fail (or, with `fallback`, continue).
///    Otherwise probe the remainder row by row.
///
/// Without fallback a returned answer is always `Mv`; with fallback the
/// query never fails.
pub fn query<P: CellProbe>(
    probe: &mut P,
    redundancy: &Redundancy,
    v: &BitVector,
    seed: QuerySeed,
    fallback: bool,
) -> Result<QueryOutcome> {
    let rows = BitVector::ones(redundancy.n);
    run_steps(probe, redundancy, &rows, v, seed, fallback)
}

/// Answers `u^T M v` by running the three steps on the rows in `support(u)`
/// only, with fallback on.
pub fn umv_query<P: CellProbe>(
    probe: &mut P,
    redundancy: &Redundancy,
    u: &BitVector,
    v: &BitVector,
    seed: QuerySeed,
) -> Result<bool> {
    if u.len() != redundancy.n {
        return Err(Error::DimensionMismatch { expected: redundancy.n, actual: u.len() });
    }
    let out = run_steps(probe, redundancy, u, v, seed, true)?;
    let rows = out.answer().expect("fallback never fails");
    Ok(rows.intersects(u))
}

fn check_shapes<P: CellProbe>(probe: &P, redundancy: &Redundancy, v: &BitVector) -> Result<()> {
    let n = redundancy.n;
    for actual in [probe.dim(), v.len()] {
        if actual != n {
            return Err(Error::DimensionMismatch { expected: n, actual });
        }
    }
    if probe.word_bits() != redundancy.word_bits {
        return Err(Error::WordSizeMismatch { structure: redundancy.word_bits, session: probe.word_bits() });
    }
    let words = redundancy.serialized_len().div_ceil(redundancy.word_bits as usize);
    if probe.redundancy_word_count() != words {
        return Err(Error::DimensionMismatch { expected: words, actual: probe.redundancy_word_count() });
    }
    Ok(())
}

fn run_steps<P: CellProbe>(
    probe: &mut P,
    redundancy: &Redundancy,
    candidate_rows: &BitVector,
    v: &BitVector,
    seed: QuerySeed,
    fallback: bool,
) -> Result<QueryOutcome> {
    check_shapes(probe, redundancy, v)?;
    let n = redundancy.n;
    let w = redundancy.word_bits;

    // L and E are read in full; U is rebuilt from L.
    for idx in 0..probe.redundancy_word_count() {
        probe.probe_redundancy_word(idx)?;
    }
    let cover = redundancy.cover_rows();

    let mut undecided = candidate_rows.clone();
    let mut u = BitVector::zeros(n);
    let mut diagnostics = QueryDiagnostics::default();

    for &(i, j) in &redundancy.ones {
        if undecided.get(i) && v.get(j) {
            u.set(i, true);
            undecided.set(i, false);
        }
    }
    diagnostics.rows_after_scan = undecided.count_ones();

    let samples = sample_count(n, w);
    let step2_rows: Vec<usize> = undecided.support().collect();
    for i in step2_rows {
        let domain: Vec<usize> = v.and_not(&cover[i]).support().collect();
        if domain.is_empty() {
            diagnostics.samples.push((i, 0));
            continue;
        }
        let mut rng = seed.row_rng(i);
        let mut drawn = 0;
        for _ in 0..samples {
            let j = domain[rng.gen_range(0..domain.len())];
            drawn += 1;
            if probe.probe_matrix_bit(i, j)? {
                u.set(i, true);
                undecided.set(i, false);
                break;
            }
        }
        diagnostics.samples.push((i, drawn));
    }
    diagnostics.rows_after_sampling = undecided.count_ones();

    let remaining_rows: Vec<(usize, BitVector)> =
        undecided.support().map(|i| (i, v.and_not(&cover[i]))).collect();
    diagnostics.remaining = remaining_rows.iter().map(|(_, d)| d.count_ones()).sum();
    if meets_cover_threshold(diagnostics.remaining, n, w) {
        if !fallback {
            return Ok(QueryOutcome { result: QueryResult::Failure, diagnostics });
        }
        diagnostics.fallback_used = true;
    }

    for (i, domain) in remaining_rows {
        for j in domain.support() {
            if probe.probe_matrix_bit(i, j)? {
                u.set(i, true);
                break;
            }
        }
    }
    Ok(QueryOutcome { result: QueryResult::Answer(u), diagnostics })
}
