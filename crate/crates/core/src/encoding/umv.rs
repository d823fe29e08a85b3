//! Vector-matrix-vector probe logs and recovery of `Mv` from them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::bits::{BitString, BitVector};
use crate::bounds::coord_width;
use crate::matrix::{mv_oracle, BitMatrix};
use crate::probe::{CellProbe, MatrixProbe, ProbeSession, RedundancyMemory, Recording};
use crate::seed::QuerySeed;
use crate::structure::{serialize_redundancy, umv_query, Redundancy};
use crate::{Error, Result};

/// Default largest `n` for the `2^n` candidate loop.
pub const DEFAULT_RECOVERY_CAP: usize = 14;

/// One segment of exactly `t` probes per query vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UmvProbeLog {
    pub n: usize,
    pub t: usize,
    pub segments: Vec<Vec<MatrixProbe>>,
}

impl UmvProbeLog {
    /// Bits per entry: `2 ceil(lg n) + 1`.
    pub fn entry_width(n: usize) -> usize {
        2 * coord_width(n) as usize + 1
    }

    pub fn bit_len(&self) -> usize {
        self.segments.len() * self.t * Self::entry_width(self.n)
    }

    pub fn to_bits(&self) -> BitString {
        let cw = coord_width(self.n);
        let mut out = BitString::new();
        for p in self.segments.iter().flatten() {
            out.push_uint(p.row as u64, cw);
            out.push_uint(p.col as u64, cw);
            out.push(p.value);
        }
        out
    }

    pub fn from_bits(bits: &BitString, n: usize, t: usize, segments: usize) -> Result<Self> {
        let cw = coord_width(n);
        let width = Self::entry_width(n);
        if bits.len() != segments * t * width {
            return Err(Error::Decode(format!(
                "log has {} bits, expected {segments} x {t} x {width}",
                bits.len()
            )));
        }
        let mut pos = 0;
        let mut out = Vec::with_capacity(segments);
        for _ in 0..segments {
            let mut seg = Vec::with_capacity(t);
            for _ in 0..t {
                let row = bits.read_uint(pos, cw)? as usize;
                let col = bits.read_uint(pos + cw as usize, cw)? as usize;
                if row >= n || col >= n {
                    return Err(Error::Decode(format!("entry ({row}, {col}) outside {n}x{n}")));
                }
                seg.push(MatrixProbe { row, col, value: bits.get(pos + width - 1) });
                pos += width;
            }
            out.push(seg);
        }
        Ok(Self { n, t, segments: out })
    }
}

fn record_umv(
    matrix: &BitMatrix,
    redundancy: &Redundancy,
    bits: &BitString,
    v: &BitVector,
    seed: QuerySeed,
) -> Result<Vec<MatrixProbe>> {
    let u = mv_oracle(matrix, v)?.complement();
    let session = ProbeSession::new(matrix, bits, redundancy.word_bits)?;
    let mut rec = Recording::new(session);
    umv_query(&mut rec, redundancy, &u, v, seed)?;
    Ok(rec.into_parts().1)
}

/// Largest unpadded segment over the query vectors.
pub fn umv_required_budget(
    matrix: &BitMatrix,
    redundancy: &Redundancy,
    vectors: &[BitVector],
    seed: u64,
) -> Result<usize> {
    let bits = serialize_redundancy(redundancy)?;
    let mut max = 0;
    for (j, v) in vectors.iter().enumerate() {
        max = max.max(record_umv(matrix, redundancy, &bits, v, QuerySeed::new(seed, j as u64))?.len());
    }
    Ok(max)
}

/// Runs the `u^T M v` query on `(complement(Mv^(j)), v^(j))` for every `j`
/// and logs its matrix probes, padding each segment to exactly `t` by
/// repeating its last probe.
pub fn build_umv_probe_log(
    matrix: &BitMatrix,
    redundancy: &Redundancy,
    vectors: &[BitVector],
    seed: u64,
    t: usize,
) -> Result<UmvProbeLog> {
    let bits = serialize_redundancy(redundancy)?;
    let mut segments = Vec::with_capacity(vectors.len());
    let mut observed = 0;
    for (j, v) in vectors.iter().enumerate() {
        let mut seg = record_umv(matrix, redundancy, &bits, v, QuerySeed::new(seed, j as u64))?;
        observed = observed.max(seg.len());
        let pad = seg
            .last()
            .copied()
            .unwrap_or(MatrixProbe { row: 0, col: 0, value: matrix.get(0, 0) });
        seg.resize(t.max(seg.len()), pad);
        segments.push(seg);
    }
    if observed > t {
        return Err(Error::BudgetExceeded { observed, budget: t });
    }
    Ok(UmvProbeLog { n: matrix.dim(), t, segments })
}

/// Answers matrix requests from one log segment; anything else is absent.
struct LogOracle<'a> {
    n: usize,
    entries: &'a BTreeMap<(usize, usize), bool>,
    redundancy: RedundancyMemory<'a>,
}

impl CellProbe for LogOracle<'_> {
    fn dim(&self) -> usize {
        self.n
    }
    fn word_bits(&self) -> u32 {
        self.redundancy.word_bits()
    }
    fn redundancy_word_count(&self) -> usize {
        self.redundancy.word_count()
    }
    fn probe_matrix_bit(&mut self, row: usize, col: usize) -> Result<bool> {
        self.entries.get(&(row, col)).copied().ok_or(Error::AbsentProbe { row, col })
    }
    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64> {
        self.redundancy.word(index)
    }
}

/// Recovers `Mv^(j)` from `R` and the log alone.
///
/// Every `u` in `{0,1}^n` is replayed against segment `j`; a replay that
/// asks for an entry missing from the segment is dropped. Among replays
/// answering 0 the heaviest `u` is unique and equals `complement(Mv^(j))`.
pub fn recover_mv_from_umv_log(
    redundancy: &Redundancy,
    log: &UmvProbeLog,
    v: &BitVector,
    j: usize,
    seed: u64,
    cap: usize,
) -> Result<BitVector> {
    let n = redundancy.n;
    if n > cap || n >= 64 {
        return Err(Error::InvalidArgument(format!("n={n} exceeds the recovery cap {cap}")));
    }
    if log.n != n {
        return Err(Error::DimensionMismatch { expected: n, actual: log.n });
    }
    let segment = log
        .segments
        .get(j)
        .ok_or(Error::OutOfBounds { index: j, len: log.segments.len() })?;
    let mut entries = BTreeMap::new();
    for p in segment {
        if let Some(prev) = entries.insert((p.row, p.col), p.value) {
            if prev != p.value {
                return Err(Error::Recovery(format!("entry ({}, {}) logged with both values", p.row, p.col)));
            }
        }
    }

    let bits = serialize_redundancy(redundancy)?;
    let qs = QuerySeed::new(seed, j as u64);
    let mut best: Option<(u32, u64)> = None;
    let mut tied = false;
    for mask in 0u64..1 << n {
        let u = BitVector::from_mask(n, mask);
        let mut oracle = LogOracle { n, entries: &entries, redundancy: RedundancyMemory::new(&bits, redundancy.word_bits) };
        match umv_query(&mut oracle, redundancy, &u, v, qs) {
            Ok(false) => {
                let weight = mask.count_ones();
                match best {
                    Some((w, _)) if w > weight => {}
                    Some((w, _)) if w == weight => tied = true,
                    _ => {
                        best = Some((weight, mask));
                        tied = false;
                    }
                }
            }
            Ok(true) | Err(Error::AbsentProbe { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    match best {
        None => Err(Error::Recovery(format!("no candidate completed for query {j}"))),
        Some(_) if tied => Err(Error::Recovery(format!("heaviest zero-answer vector for query {j} is not unique"))),
        Some((_, mask)) => Ok(BitVector::from_mask(n, mask).complement()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard::{hard_query_vectors, partition_query_vectors, sample_hard_matrix, HardInstanceSpec};
    use crate::structure::preprocess_exact;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn log_for(m: &BitMatrix, vs: &[BitVector], seed: u64, preprocess: bool) -> (Redundancy, UmvProbeLog) {
        let r = if preprocess { preprocess_exact(m, 8).unwrap() } else { Redundancy::empty(m.dim(), 8) };
        let t = umv_required_budget(m, &r, vs, seed).unwrap();
        let log = build_umv_probe_log(m, &r, vs, seed, t).unwrap();
        (r, log)
    }

    #[test]
    fn identity_three() {
        let m = BitMatrix::identity(3).unwrap();
        let v = BitVector::from_bools([true, true, false]);
        let (r, log) = log_for(&m, &[v.clone()], 0, false);
        let got = recover_mv_from_umv_log(&r, &log, &v, 0, 0, DEFAULT_RECOVERY_CAP).unwrap();
        assert_eq!(got, BitVector::from_bools([true, true, false]));
    }

    #[test]
    fn zero_matrix_logs_only_zeros() {
        let spec = HardInstanceSpec::for_lower_bound(8, 8).unwrap();
        let vs = hard_query_vectors(&spec).unwrap();
        let m = BitMatrix::zeros(8).unwrap();
        let (r, log) = log_for(&m, &vs, 3, true);
        assert!(log.segments.iter().flatten().all(|p| !p.value));
        for (j, v) in vs.iter().enumerate() {
            let got = recover_mv_from_umv_log(&r, &log, v, j, 3, DEFAULT_RECOVERY_CAP).unwrap();
            assert!(got.is_zero());
        }
    }

    #[test]
    fn log_length_and_codec() {
        let spec = HardInstanceSpec::for_lower_bound(8, 8).unwrap();
        let vs = hard_query_vectors(&spec).unwrap();
        let m = sample_hard_matrix(&spec, &mut ChaCha8Rng::seed_from_u64(4));
        let (r, log) = log_for(&m, &vs, 1, false);
        let bits = log.to_bits();
        assert_eq!(bits.len(), 4 * log.t * (2 * 3 + 1));
        assert_eq!(UmvProbeLog::from_bits(&bits, 8, log.t, 4).unwrap(), log);
        assert!(UmvProbeLog::from_bits(&bits, 8, log.t + 1, 4).is_err());
        let again = build_umv_probe_log(&m, &r, &vs, 1, log.t).unwrap();
        assert_eq!(again, log);
        assert!(matches!(
            build_umv_probe_log(&m, &r, &vs, 1, log.t - 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let r = Redundancy::empty(16, 8);
        let v = BitVector::ones(16);
        let log = UmvProbeLog { n: 16, t: 0, segments: alloc::vec![Vec::new()] };
        assert!(matches!(recover_mv_from_umv_log(&r, &log, &v, 0, 0, 14), Err(Error::InvalidArgument(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn hard_instances_recover_exactly(mseed: u64, qseed: u64, pick in 0usize..3, preprocess: bool) {
            let (n, r) = [(8, 8), (6, 6), (8, 16)][pick];
            let spec = HardInstanceSpec::for_lower_bound(n, r).unwrap();
            let vs = if pick == 1 { partition_query_vectors(&spec).unwrap() } else { hard_query_vectors(&spec).unwrap() };
            let m = sample_hard_matrix(&spec, &mut ChaCha8Rng::seed_from_u64(mseed));
            let (red, log) = log_for(&m, &vs, qseed, preprocess);
            for (j, v) in vs.iter().enumerate() {
                let got = recover_mv_from_umv_log(&red, &log, v, j, qseed, DEFAULT_RECOVERY_CAP).unwrap();
                prop_assert_eq!(got, mv_oracle(&m, v).unwrap());
            }
        }
    }
}
