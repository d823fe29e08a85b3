use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::trace::run_query_sequence;
use super::trace_codec::{decode_trace_encoding, DecodedTrace, TraceEncoding};
use crate::bits::{BitString, BitVector};
use crate::hard::HardInstanceSpec;
use crate::probe::{CellProbe, RedundancyMemory};
use crate::structure::{serialize_redundancy, Redundancy};
use crate::{Error, Result};

/// Answers matrix requests from `(b, k, K)` alone: the `j`-th new
/// coordinate gets index `j` and reads 1 iff `j` is in `K`.
pub struct TraceEmulator<'a> {
    n: usize,
    redundancy: RedundancyMemory<'a>,
    decoded: DecodedTrace,
    one_set: Vec<bool>,
    seen: BTreeMap<(usize, usize), usize>,
    order: Vec<(usize, usize)>,
}

impl<'a> TraceEmulator<'a> {
    pub fn new(n: usize, redundancy_bits: &'a BitString, word_bits: u32, decoded: DecodedTrace) -> Self {
        let mut one_set = alloc::vec![false; decoded.b];
        for &j in &decoded.ones {
            one_set[j] = true;
        }
        Self {
            n,
            redundancy: RedundancyMemory::new(redundancy_bits, word_bits),
            decoded,
            one_set,
            seen: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    /// `B^alg`: coordinates in the order the emulator first saw them.
    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    /// Errors unless exactly `b` distinct coordinates were requested.
    pub fn finish(self) -> Result<Vec<(usize, usize)>> {
        if self.order.len() != self.decoded.b {
            return Err(Error::Consistency(format!(
                "replay saw {} distinct probes, encoding has b={}",
                self.order.len(),
                self.decoded.b
            )));
        }
        Ok(self.order)
    }
}

impl CellProbe for TraceEmulator<'_> {
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
        if row >= self.n || col >= self.n {
            return Err(Error::OutOfBounds { index: row.max(col), len: self.n });
        }
        let j = match self.seen.get(&(row, col)) {
            Some(&j) => j,
            None => {
                let j = self.order.len();
                if j >= self.decoded.b {
                    return Err(Error::Consistency(format!(
                        "probe ({row}, {col}) would be distinct probe {} but b={}",
                        j + 1,
                        self.decoded.b
                    )));
                }
                self.seen.insert((row, col), j);
                self.order.push((row, col));
                j
            }
        };
        Ok(self.one_set[j])
    }

    fn probe_redundancy_word(&mut self, index: usize) -> Result<u64> {
        self.redundancy.word(index)
    }
}

/// Replays the query sequence from `(R, encoding)` and returns the answers
/// together with `B^alg`.
pub fn emulate_queries_traced(
    redundancy: &Redundancy,
    encoding: &TraceEncoding,
    spec: &HardInstanceSpec,
    vectors: &[BitVector],
    seed: u64,
    t_budget: usize,
) -> Result<(Vec<BitVector>, Vec<(usize, usize)>)> {
    let decoded = decode_trace_encoding(&encoding.bits, spec, t_budget)?;
    let bits = serialize_redundancy(redundancy)?;
    let mut emulator = TraceEmulator::new(redundancy.n, &bits, redundancy.word_bits, decoded);
    let (answers, _) = run_query_sequence(&mut emulator, redundancy, vectors, seed, Some(t_budget))?;
    let order = emulator.finish()?;
    Ok((answers, order))
}

/// Answers every query vector with the matrix absent.
pub fn emulate_queries(
    redundancy: &Redundancy,
    encoding: &TraceEncoding,
    spec: &HardInstanceSpec,
    vectors: &[BitVector],
    seed: u64,
    t_budget: usize,
) -> Result<Vec<BitVector>> {
    emulate_queries_traced(redundancy, encoding, spec, vectors, seed, t_budget).map(|(a, _)| a)
}
