//! `width(b) || width(k) || colex rank of K`, integer fields MSB-first.

use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigUint;

use super::subset::{binomial, colex_rank, colex_unrank, rank_width};
use super::trace::Trace;
use crate::bits::BitString;
use crate::bounds::ceil_log2;
use crate::hard::HardInstanceSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEncoding {
    pub bits: BitString,
    pub field_width: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedTrace {
    pub b: usize,
    pub k: usize,
    /// Ascending 0-based indices into `B`.
    pub ones: Vec<usize>,
}

/// Total probe slots `(4r/n) t`.
fn slots(spec: &HardInstanceSpec, t_budget: usize) -> usize {
    spec.query_count() * t_budget
}

/// `ceil(lg((4r/n) t + 1))`.
pub fn field_width(spec: &HardInstanceSpec, t_budget: usize) -> u32 {
    ceil_log2(slots(spec, t_budget) as u64 + 1)
}

/// `ceil(lg C((4r/n) t, k)) + 2 field_width`.
pub fn trace_encoding_bound(spec: &HardInstanceSpec, t_budget: usize, k: usize) -> Result<usize> {
    let width = rank_width(slots(spec, t_budget), k)?;
    Ok(width as usize + 2 * field_width(spec, t_budget) as usize)
}

fn push_biguint(out: &mut BitString, value: &BigUint, width: u32) {
    for i in (0..width as u64).rev() {
        out.push(value.bit(i));
    }
}

fn read_biguint(bits: &BitString, pos: usize, width: u32) -> BigUint {
    let mut v = BigUint::default();
    for i in 0..width as usize {
        if bits.get(pos + i) {
            v.set_bit(u64::from(width) - 1 - i as u64, true);
        }
    }
    v
}

pub fn build_trace_encoding(trace: &Trace, spec: &HardInstanceSpec) -> Result<TraceEncoding> {
    let fw = field_width(spec, trace.t_budget);
    let (b, k) = (trace.b(), trace.k());
    if b > slots(spec, trace.t_budget) {
        return Err(Error::InvalidArgument(format!(
            "b={b} exceeds {} probe slots",
            slots(spec, trace.t_budget)
        )));
    }
    let rank = colex_rank(&trace.ones, b)?;
    let width = rank_width(b, k)?;
    let mut bits = BitString::new();
    bits.push_uint(b as u64, fw);
    bits.push_uint(k as u64, fw);
    push_biguint(&mut bits, &rank, width);
    Ok(TraceEncoding { bits, field_width: fw })
}

pub fn decode_trace_encoding(bits: &BitString, spec: &HardInstanceSpec, t_budget: usize) -> Result<DecodedTrace> {
    let fw = field_width(spec, t_budget);
    let header = 2 * fw as usize;
    if bits.len() < header {
        return Err(Error::Decode(format!("{} bits is shorter than the {header}-bit header", bits.len())));
    }
    let b = bits.read_uint(0, fw)? as usize;
    let k = bits.read_uint(fw as usize, fw)? as usize;
    if b > slots(spec, t_budget) {
        return Err(Error::Decode(format!("b={b} exceeds {} probe slots", slots(spec, t_budget))));
    }
    if k > b {
        return Err(Error::Decode(format!("k={k} exceeds b={b}")));
    }
    let width = rank_width(b, k)?;
    if bits.len() != header + width as usize {
        return Err(Error::Decode(format!(
            "expected {} bits for b={b}, k={k}, found {}",
            header + width as usize,
            bits.len()
        )));
    }
    let rank = read_biguint(bits, header, width);
    if rank >= binomial(b, k) {
        return Err(Error::Decode(format!("rank out of range for C({b}, {k})")));
    }
    let ones = colex_unrank(&rank, b, k)?;
    Ok(DecodedTrace { b, k, ones })
}

impl TraceEncoding {
    pub fn decode(&self, spec: &HardInstanceSpec, t_budget: usize) -> Result<DecodedTrace> {
        decode_trace_encoding(&self.bits, spec, t_budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVector;
    use proptest::prelude::*;

    fn synthetic(b: usize, ones: Vec<usize>, t: usize) -> Trace {
        Trace {
            probes: Vec::new(),
            distinct: (0..b).map(|i| (0, i)).collect(),
            ones,
            t_budget: t,
            probes_per_query: Vec::new(),
            answers: Vec::<BitVector>::new(),
        }
    }

    #[test]
    fn rank_field_for_two_of_five() {
        // 4 queries x t=2 slots gives field width ceil(lg 9) = 4
        let spec = HardInstanceSpec::for_lower_bound(4, 4).unwrap();
        let enc = build_trace_encoding(&synthetic(5, alloc::vec![1, 4], 2), &spec).unwrap();
        assert_eq!(enc.field_width, 4);
        assert_eq!(enc.bits.len(), 2 * 4 + 4);
        assert_eq!(enc.bits.read_uint(8, 4).unwrap(), 7);
        let dec = enc.decode(&spec, 2).unwrap();
        assert_eq!(dec, DecodedTrace { b: 5, k: 2, ones: alloc::vec![1, 4] });
    }

    #[test]
    fn no_ones_means_no_rank_field() {
        let spec = HardInstanceSpec::for_lower_bound(8, 8).unwrap();
        let enc = build_trace_encoding(&synthetic(30, Vec::new(), 40), &spec).unwrap();
        assert_eq!(enc.bits.len(), 2 * enc.field_width as usize);
        assert_eq!(enc.field_width, 8); // ceil(lg 161)
    }

    #[test]
    fn malformed_encodings_are_rejected() {
        let spec = HardInstanceSpec::for_lower_bound(4, 4).unwrap();
        // k > b
        let mut bits = BitString::new();
        bits.push_uint(2, 4);
        bits.push_uint(3, 4);
        assert!(matches!(decode_trace_encoding(&bits, &spec, 2), Err(Error::Decode(_))));
        // rank 10 with C(5,2) = 10
        let mut bits = BitString::new();
        bits.push_uint(5, 4);
        bits.push_uint(2, 4);
        bits.push_uint(10, 4);
        assert!(matches!(decode_trace_encoding(&bits, &spec, 2), Err(Error::Decode(_))));
        // b larger than the slot count
        let mut bits = BitString::new();
        bits.push_uint(9, 4);
        bits.push_uint(0, 4);
        assert!(decode_trace_encoding(&bits, &spec, 2).is_err());
        assert!(decode_trace_encoding(&BitString::zeros(3), &spec, 2).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_and_bound(t in 1usize..200, pick in proptest::collection::btree_set(0usize..800, 0..60), extra in 0usize..200) {
            let spec = HardInstanceSpec::for_lower_bound(8, 16).unwrap();
            let total = spec.query_count() * t;
            let ones: Vec<usize> = pick.into_iter().filter(|&c| c < total).collect();
            let b = (ones.last().map_or(0, |&c| c + 1) + extra).min(total);
            let trace = synthetic(b, ones.clone(), t);
            let enc = build_trace_encoding(&trace, &spec).unwrap();
            prop_assert!(enc.bits.len() <= trace_encoding_bound(&spec, t, ones.len()).unwrap());
            let dec = decode_trace_encoding(&enc.bits, &spec, t).unwrap();
            prop_assert_eq!(dec, DecodedTrace { b, k: ones.len(), ones });
        }
    }
}
