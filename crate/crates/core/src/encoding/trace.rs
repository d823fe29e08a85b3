use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::BitVector;
use crate::matrix::BitMatrix;
use crate::probe::{CellProbe, MatrixProbe, ProbeSession, Recording};
use crate::seed::QuerySeed;
use crate::structure::{query, serialize_redundancy, Redundancy};
use crate::{Error, Result};

/// The matrix probes of a query sequence and their first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// Every matrix bit request, each query padded to `t_budget`.
    pub probes: Vec<MatrixProbe>,
    /// `B`: distinct coordinates in order of first request.
    pub distinct: Vec<(usize, usize)>,
    /// `K`: 0-based positions in `distinct` whose entry is 1, ascending.
    pub ones: Vec<usize>,
    pub t_budget: usize,
    /// Unpadded request count of each query.
    pub probes_per_query: Vec<usize>,
    pub answers: Vec<BitVector>,
}

impl Trace {
    /// `b`.
    pub fn b(&self) -> usize {
        self.distinct.len()
    }

    /// `k`.
    pub fn k(&self) -> usize {
        self.ones.len()
    }

    pub fn query_count(&self) -> usize {
        self.probes_per_query.len()
    }

    pub fn max_probes(&self) -> usize {
        self.probes_per_query.iter().copied().max().unwrap_or(0)
    }

    pub fn mean_probes(&self) -> f64 {
        if self.probes_per_query.is_empty() {
            return 0.0;
        }
        self.probes_per_query.iter().sum::<usize>() as f64 / self.probes_per_query.len() as f64
    }
}

/// Counts requests of one query and remembers the last coordinate.
struct Counting<'p, P> {
    inner: &'p mut P,
    count: usize,
    last: Option<(usize, usize)>,
}

impl<P: CellProbe> CellProbe for Counting<'_, P> {
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
        let v = self.inner.probe_matrix_bit(row, col)?;
        self.count += 1;
        self.last = Some((row, col));
        Ok(v)
    }
    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64> {
        self.inner.probe_redundancy_word(index)
    }
}

/// Runs the query (fallback on) for each vector in order, with query `m`
/// seeded by `(seed, m)`. With a budget, each query's requests are padded
/// to exactly `t_budget` by repeating its last request, or `(0, 0)` if it
/// made none. Returns the answers and unpadded request counts.
///
/// Recorders and emulators both go through here so that the padding they
/// see is identical.
pub(crate) fn run_query_sequence<P: CellProbe>(
    probe: &mut P,
    redundancy: &Redundancy,
    vectors: &[BitVector],
    seed: u64,
    t_budget: Option<usize>,
) -> Result<(Vec<BitVector>, Vec<usize>)> {
    let mut answers = Vec::with_capacity(vectors.len());
    let mut counts = Vec::with_capacity(vectors.len());
    let mut over_budget = false;
    for (m, v) in vectors.iter().enumerate() {
        let mut counting = Counting { inner: &mut *probe, count: 0, last: None };
        let out = query(&mut counting, redundancy, v, QuerySeed::new(seed, m as u64), true)?;
        let (count, last) = (counting.count, counting.last);
        answers.push(out.answer().expect("fallback never fails").clone());
        counts.push(count);
        if let Some(t) = t_budget {
            if count > t {
                over_budget = true;
            }
            if !over_budget {
                let (row, col) = last.unwrap_or((0, 0));
                for _ in count..t {
                    probe.probe_matrix_bit(row, col)?;
                }
            }
        }
    }
    if over_budget {
        let budget = t_budget.unwrap_or(0);
        let observed = counts.iter().copied().max().unwrap_or(0);
        return Err(Error::BudgetExceeded { observed, budget });
    }
    Ok((answers, counts))
}

/// Unpadded matrix requests per query; the smallest valid `t_budget` is
/// their maximum.
pub fn observed_probe_counts(
    matrix: &BitMatrix,
    redundancy: &Redundancy,
    vectors: &[BitVector],
    seed: u64,
) -> Result<Vec<usize>> {
    let bits = serialize_redundancy(redundancy)?;
    let mut session = ProbeSession::new(matrix, &bits, redundancy.word_bits)?;
    Ok(run_query_sequence(&mut session, redundancy, vectors, seed, None)?.1)
}

/// First-occurrence order `B` of a probe list, and the positions `K` of
/// its 1-valued entries.
pub fn distinct_and_ones(probes: &[MatrixProbe]) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut distinct = Vec::new();
    let mut ones = Vec::new();
    for p in probes {
        index.entry((p.row, p.col)).or_insert_with(|| {
            let at = distinct.len();
            distinct.push((p.row, p.col));
            if p.value {
                ones.push(at);
            }
            at
        });
    }
    (distinct, ones)
}

/// Runs the query sequence over the real matrix and records every request.
pub fn record_query_trace(
    matrix: &BitMatrix,
    redundancy: &Redundancy,
    vectors: &[BitVector],
    seed: u64,
    t_budget: usize,
) -> Result<Trace> {
    let bits = serialize_redundancy(redundancy)?;
    let session = ProbeSession::new(matrix, &bits, redundancy.word_bits)?;
    let mut rec = Recording::new(session);
    let (answers, probes_per_query) = run_query_sequence(&mut rec, redundancy, vectors, seed, Some(t_budget))?;
    let (_, probes) = rec.into_parts();
    debug_assert_eq!(probes.len(), vectors.len() * t_budget);
    let (distinct, ones) = distinct_and_ones(&probes);
    Ok(Trace { probes, distinct, ones, t_budget, probes_per_query, answers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard::{hard_query_vectors, sample_hard_matrix, HardInstanceSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance(seed: u64) -> (HardInstanceSpec, BitMatrix, Redundancy, Vec<BitVector>) {
        let spec = HardInstanceSpec::for_lower_bound(8, 8).unwrap();
        let m = sample_hard_matrix(&spec, &mut ChaCha8Rng::seed_from_u64(seed));
        // an empty structure leaves every entry to be probed
        let r = Redundancy::empty(8, 8);
        let vs = hard_query_vectors(&spec).unwrap();
        (spec, m, r, vs)
    }

    #[test]
    fn zero_matrix_trace_has_no_ones() {
        let m = BitMatrix::zeros(8).unwrap();
        let r = Redundancy::empty(8, 8);
        let vs = hard_query_vectors(&HardInstanceSpec::for_lower_bound(8, 8).unwrap()).unwrap();
        let t = observed_probe_counts(&m, &r, &vs, 0).unwrap().into_iter().max().unwrap();
        let trace = record_query_trace(&m, &r, &vs, 0, t).unwrap();
        assert_eq!(trace.k(), 0);
        assert!(trace.b() > 0);
    }

    #[test]
    fn hard_instance_trace_is_deterministic() {
        let (_, m, r, vs) = instance(5);
        let t = observed_probe_counts(&m, &r, &vs, 9).unwrap().into_iter().max().unwrap();
        let a = record_query_trace(&m, &r, &vs, 9, t).unwrap();
        let b = record_query_trace(&m, &r, &vs, 9, t).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.probes.len(), vs.len() * t);
        let mut coords: Vec<(usize, usize)> = a.probes.iter().map(|p| (p.row, p.col)).collect();
        coords.sort();
        coords.dedup();
        assert_eq!(a.b(), coords.len());
        for &j in &a.ones {
            let (p, q) = a.distinct[j];
            assert!(m.get(p, q));
        }
        for (idx, &(p, q)) in a.distinct.iter().enumerate() {
            assert_eq!(m.get(p, q), a.ones.contains(&idx));
        }
    }

    #[test]
    fn budget_below_observed_is_an_error() {
        let (_, m, r, vs) = instance(6);
        let max = observed_probe_counts(&m, &r, &vs, 1).unwrap().into_iter().max().unwrap();
        assert!(max > 0);
        let err = record_query_trace(&m, &r, &vs, 1, max - 1).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { observed: max, budget: max - 1 });
    }
}
