use boolmv_core::bounds::{headline_probe_bound, probe_limit, redundancy_size_bound};
use boolmv_core::matrix::mv_oracle;
use boolmv_core::seed::derive;
use boolmv_core::structure::{query, serialize_redundancy, verify_structure};
use boolmv_core::{ProbeSession, QuerySeed};
use rayon::prelude::*;
use serde::Serialize;

use super::{build_structure, failure_rate_limit, random_matrix, random_vectors};
use crate::config::{Mode, SweepConfig};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub w: u32,
    /// Largest serialized structure over the seeds.
    pub r_bits: usize,
    pub avg_matrix_word_probes: f64,
    pub max_matrix_word_probes: u64,
    pub avg_redundancy_word_probes: f64,
    pub failure_rate: f64,
    /// `n^{1.5} sqrt(w) lg n`.
    pub bound: f64,
    /// `max_matrix_word_probes / bound`.
    pub ratio: f64,
    pub mode: String,
    pub trials: usize,
    pub completed: usize,
    pub mismatches: usize,
    /// `n ceil(2 sqrt(n w) lg n) + n^{1.5}/sqrt(w)`.
    pub probe_limit: f64,
    pub r_bits_bound: f64,
    /// `1/n` plus three binomial standard deviations.
    pub failure_rate_limit: f64,
    pub probe_ok: bool,
    pub r_bits_ok: bool,
    /// Empty for heuristic rows, which carry no failure guarantee.
    pub failure_rate_ok: Option<bool>,
    pub structure_ok: bool,
    pub pass: bool,
}

#[derive(Default)]
struct SeedStats {
    r_bits: usize,
    matrix_probe_sum: u64,
    matrix_probe_max: u64,
    redundancy_probe_sum: u64,
    completed: usize,
    failures: usize,
    mismatches: usize,
    structure_ok: bool,
    mode: Option<Mode>,
}

fn sweep_seed(cfg: &SweepConfig, n: usize, w: u32, seed: u64) -> Result<SeedStats> {
    let (m, _) = random_matrix(seed, n, w)?;
    let (r, mode) = build_structure(&m, w, cfg, seed)?;
    let bits = serialize_redundancy(&r)?;
    let master = derive(seed, &[n as u64, w as u64]);
    let mut st = SeedStats {
        r_bits: bits.len(),
        structure_ok: verify_structure(&m, &r, w).all_pass(),
        mode: Some(mode),
        ..Default::default()
    };
    for (q, v) in random_vectors(seed, n, w, cfg.queries_per_point).iter().enumerate() {
        let mut session = ProbeSession::new(&m, &bits, w)?;
        let out = query(&mut session, &r, v, QuerySeed::new(master, q as u64), cfg.fallback)?;
        if let Some(u) = out.answer() {
            st.mismatches += usize::from(u != &mv_oracle(&m, v)?);
        }
        // a fallback completion is a failure of the plain algorithm
        if out.is_failure() || out.diagnostics.fallback_used {
            st.failures += 1;
            continue;
        }
        let ledger = session.ledger();
        st.completed += 1;
        st.matrix_probe_sum += ledger.matrix_word_probes;
        st.matrix_probe_max = st.matrix_probe_max.max(ledger.matrix_word_probes);
        st.redundancy_probe_sum += ledger.redundancy_word_probes;
    }
    Ok(st)
}

/// One row per `(n, w)`, aggregated over all seeds. Probe statistics cover
/// the queries that completed without failing or falling back.
pub fn run_probe_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let points: Vec<(usize, u32)> =
        cfg.n_values.iter().flat_map(|&n| cfg.w_values.iter().map(move |&w| (n, w))).collect();
    points
        .iter()
        .map(|&(n, w)| {
            let per_seed: Vec<SeedStats> =
                cfg.seeds.par_iter().map(|&s| sweep_seed(cfg, n, w, s)).collect::<Result<_>>()?;
            let trials = cfg.seeds.len() * cfg.queries_per_point;
            let completed: usize = per_seed.iter().map(|s| s.completed).sum();
            let failures: usize = per_seed.iter().map(|s| s.failures).sum();
            let mismatches: usize = per_seed.iter().map(|s| s.mismatches).sum();
            let r_bits = per_seed.iter().map(|s| s.r_bits).max().unwrap_or(0);
            let max_probes = per_seed.iter().map(|s| s.matrix_probe_max).max().unwrap_or(0);
            let avg = |f: fn(&SeedStats) -> u64| {
                if completed == 0 {
                    0.0
                } else {
                    per_seed.iter().map(f).sum::<u64>() as f64 / completed as f64
                }
            };
            let mode = per_seed[0].mode.expect("set by sweep_seed");
            let bound = headline_probe_bound(n, w);
            let limit = probe_limit(n, w);
            let r_bits_bound = redundancy_size_bound(n, w);
            let failure_rate = failures as f64 / trials as f64;
            let rate_limit = failure_rate_limit(n, trials);
            let probe_ok = max_probes as f64 <= limit;
            let r_bits_ok = r_bits as f64 <= r_bits_bound;
            let failure_rate_ok = (mode == Mode::Exact).then_some(failure_rate <= rate_limit);
            let structure_ok = per_seed.iter().all(|s| s.structure_ok);
            Ok(SweepRow {
                n,
                w,
                r_bits,
                avg_matrix_word_probes: avg(|s| s.matrix_probe_sum),
                max_matrix_word_probes: max_probes,
                avg_redundancy_word_probes: avg(|s| s.redundancy_probe_sum),
                failure_rate,
                bound,
                ratio: max_probes as f64 / bound,
                mode: mode.to_string(),
                trials,
                completed,
                mismatches,
                probe_limit: limit,
                r_bits_bound,
                failure_rate_limit: rate_limit,
                probe_ok,
                r_bits_ok,
                failure_rate_ok,
                structure_ok,
                pass: probe_ok && r_bits_ok && structure_ok && mismatches == 0 && failure_rate_ok != Some(false),
            })
        })
        .collect()
}
