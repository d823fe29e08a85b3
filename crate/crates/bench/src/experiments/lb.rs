use boolmv_core::encoding::{
    build_trace_encoding, build_umv_probe_log, decode_trace_encoding, emulate_queries_traced, inferred_zeros_report,
    information_check, observed_probe_counts, record_query_trace, recover_mv_from_umv_log, trace_encoding_bound,
    umv_required_budget, UmvProbeLog,
};
use boolmv_core::hard::{
    family_entropy_bits, hard_query_vectors, partition_query_vectors, sample_hard_matrix, HardInstanceSpec,
};
use boolmv_core::matrix::{mv_oracle, BitMatrix};
use boolmv_core::seed::rng_from;
use boolmv_core::structure::serialize_redundancy;
use boolmv_core::{BitString, BitVector, Error as CoreError, Redundancy};
use rayon::prelude::*;
use serde::Serialize;

use super::{build_structure, TAG_MATRIX};
use crate::config::SweepConfig;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LbRow {
    pub n: usize,
    pub r: usize,
    pub t_budget: usize,
    pub b: usize,
    pub k: usize,
    pub encoding_bits: usize,
    pub entropy_bits: f64,
    pub zeros_per_block_min: usize,
    pub residual_bound: f64,
    pub w: u32,
    pub seed: u64,
    pub mode: String,
    /// `block` for the per-block query vectors, `partition` for the floor-split variant.
    pub vectors: String,
    pub r_bits: usize,
    pub max_probes: usize,
    pub mean_probes: f64,
    pub encoding_bound: usize,
    pub emulation_ok: bool,
    pub order_ok: bool,
    pub codec_ok: bool,
    pub encoding_bound_ok: bool,
    /// Empty for partition vectors, which carry no per-block guarantee.
    pub zeros_ok: Option<bool>,
    pub info_ok: bool,
    pub umv_t: Option<usize>,
    pub umv_log_bits: Option<usize>,
    pub umv_ok: Option<bool>,
    pub pass: bool,
}

/// Inputs and outputs of one instance, for dumping to disk.
#[derive(Debug, Clone)]
pub struct LbArtifacts {
    pub matrix: BitMatrix,
    pub redundancy: Redundancy,
    pub encoding: BitString,
    pub umv_log: Option<BitString>,
}

#[derive(Debug, Clone)]
pub struct LbOutput {
    pub rows: Vec<LbRow>,
    pub artifacts: Vec<LbArtifacts>,
    /// The budget every trace was padded to.
    pub t_budget: usize,
}

struct Instance {
    spec: HardInstanceSpec,
    w: u32,
    seed: u64,
    vectors: Vec<BitVector>,
    block_vectors: bool,
    matrix: BitMatrix,
    redundancy: Redundancy,
    mode: String,
}

fn instance(cfg: &SweepConfig, spec: HardInstanceSpec, w: u32, seed: u64) -> Result<Instance> {
    let (n, r) = (spec.n(), spec.r());
    let (vectors, block_vectors) = match hard_query_vectors(&spec) {
        Ok(v) => (v, true),
        Err(CoreError::InvalidSpec(_)) => (partition_query_vectors(&spec)?, false),
        Err(e) => return Err(e.into()),
    };
    let matrix = sample_hard_matrix(&spec, &mut rng_from(seed, &[TAG_MATRIX, n as u64, r as u64]));
    let (redundancy, mode) = build_structure(&matrix, w, cfg, seed)?;
    Ok(Instance { spec, w, seed, vectors, block_vectors, matrix, redundancy, mode: mode.to_string() })
}

fn evaluate(cfg: &SweepConfig, inst: &Instance, t: usize) -> Result<(LbRow, LbArtifacts)> {
    let Instance { spec, vectors, matrix, redundancy, seed, .. } = inst;
    let (n, r) = (spec.n(), spec.r());
    let oracle: Vec<BitVector> = vectors.iter().map(|v| mv_oracle(matrix, v)).collect::<Result<_, _>>()?;

    let trace = record_query_trace(matrix, redundancy, vectors, *seed, t)?;
    let enc = build_trace_encoding(&trace, spec)?;
    let decoded = decode_trace_encoding(&enc.bits, spec, t)?;
    let codec_ok = decoded.b == trace.b() && decoded.k == trace.k() && decoded.ones == trace.ones;
    let (answers, order) = emulate_queries_traced(redundancy, &enc, spec, vectors, *seed, t)?;
    let emulation_ok = answers == oracle;
    let order_ok = order == trace.distinct;

    let k = trace.k();
    let zeros = inferred_zeros_report(&answers, vectors, spec, k)?;
    let r_bits = serialize_redundancy(redundancy)?.len();
    let info = information_check(spec, r_bits, enc.bits.len(), k)?;
    let encoding_bound = trace_encoding_bound(spec, t, k)?;
    let zeros_ok = inst.block_vectors.then_some(zeros.meets_threshold);

    let mut umv = None;
    if cfg.umv {
        let ut = umv_required_budget(matrix, redundancy, vectors, *seed)?;
        let log = build_umv_probe_log(matrix, redundancy, vectors, *seed, ut)?;
        let mut ok = log.bit_len() == vectors.len() * ut * UmvProbeLog::entry_width(n);
        for (j, v) in vectors.iter().enumerate() {
            let got = recover_mv_from_umv_log(redundancy, &log, v, j, *seed, cfg.umv_cap);
            ok &= matches!(got, Ok(ref x) if *x == oracle[j]);
        }
        umv = Some((ut, log.to_bits(), ok));
    }

    let encoding_bound_ok = enc.bits.len() <= encoding_bound;
    let umv_ok = umv.as_ref().map(|u| u.2);
    let pass = emulation_ok
        && order_ok
        && codec_ok
        && encoding_bound_ok
        && zeros_ok != Some(false)
        && info.holds
        && umv_ok != Some(false);
    let row = LbRow {
        n,
        r,
        t_budget: t,
        b: trace.b(),
        k,
        encoding_bits: enc.bits.len(),
        entropy_bits: family_entropy_bits(spec)?,
        zeros_per_block_min: zeros.min_per_block,
        residual_bound: zeros.residual_bound,
        w: inst.w,
        seed: *seed,
        mode: inst.mode.clone(),
        vectors: if inst.block_vectors { "block" } else { "partition" }.into(),
        r_bits,
        max_probes: trace.max_probes(),
        mean_probes: trace.mean_probes(),
        encoding_bound,
        emulation_ok,
        order_ok,
        codec_ok,
        encoding_bound_ok,
        zeros_ok,
        info_ok: info.holds,
        umv_t: umv.as_ref().map(|u| u.0),
        umv_log_bits: umv.as_ref().map(|u| u.1.len()),
        umv_ok,
        pass,
    };
    let artifacts = LbArtifacts {
        matrix: matrix.clone(),
        redundancy: redundancy.clone(),
        encoding: enc.bits,
        umv_log: umv.map(|u| u.1),
    };
    Ok((row, artifacts))
}

/// Samples one hard matrix per `(n, r, w, seed)`, records its query trace,
/// encodes it, replays it without the matrix and checks every derived
/// quantity. Unless `t_budget` is fixed, a first pass measures the largest
/// per-query probe count over the whole run and every trace is padded to it.
pub fn run_lb_experiment(cfg: &SweepConfig) -> Result<LbOutput> {
    cfg.validate_lb()?;
    let mut jobs = Vec::new();
    for &n in &cfg.n_values {
        for r in cfg.r_spec.values_for(n) {
            let spec = HardInstanceSpec::for_lower_bound(n, r).map_err(|e| BenchError::Config(e.to_string()))?;
            for &w in &cfg.w_values {
                jobs.extend(cfg.seeds.iter().map(|&s| (spec, w, s)));
            }
        }
    }

    let instances: Vec<Instance> = jobs.par_iter().map(|&(spec, w, s)| instance(cfg, spec, w, s)).collect::<Result<_>>()?;
    let t_budget = match cfg.t_budget {
        Some(t) => t,
        None => instances
            .par_iter()
            .map(|i| Ok(observed_probe_counts(&i.matrix, &i.redundancy, &i.vectors, i.seed)?.into_iter().max().unwrap_or(0)))
            .collect::<Result<Vec<usize>>>()?
            .into_iter()
            .max()
            .unwrap_or(0),
    };

    let results: Vec<(LbRow, LbArtifacts)> =
        instances.par_iter().map(|i| evaluate(cfg, i, t_budget)).collect::<Result<_>>()?;
    let (rows, artifacts) = results.into_iter().unzip();
    Ok(LbOutput { rows, artifacts, t_budget })
}
