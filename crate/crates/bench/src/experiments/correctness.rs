use boolmv_core::bounds::{probe_limit, redundancy_size_bound};
use boolmv_core::matrix::mv_oracle;
use boolmv_core::seed::derive;
use boolmv_core::structure::{query, serialize_redundancy, verify_structure};
use boolmv_core::{ProbeSession, QuerySeed};
use rayon::prelude::*;
use serde::Serialize;

use super::{build_structure, random_matrix, random_vectors};
use crate::config::SweepConfig;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectnessRow {
    pub n: usize,
    pub w: u32,
    pub r_bits: usize,
    pub mode: String,
    pub seed: u64,
    pub queries: usize,
    /// Wrong answers over both runs of every query.
    pub mismatches: usize,
    /// Failures in the configured fallback setting.
    pub failures: usize,
    /// Queries of the fallback run that needed the fallback.
    pub fallbacks: usize,
    pub density: f64,
    pub failures_without_fallback: usize,
    pub max_matrix_word_probes: u64,
    pub structure_ok: bool,
    pub r_bits_ok: bool,
    pub probe_budget_ok: bool,
    pub pass: bool,
}

fn correctness_point(cfg: &SweepConfig, n: usize, w: u32, seed: u64) -> Result<CorrectnessRow> {
    let (m, density) = random_matrix(seed, n, w)?;
    let (r, mode) = build_structure(&m, w, cfg, seed)?;
    let bits = serialize_redundancy(&r)?;
    let query_master = derive(seed, &[n as u64, w as u64]);
    let limit = probe_limit(n, w);

    let mut mismatches = 0;
    let mut failures_without_fallback = 0;
    let mut fallbacks = 0;
    let mut max_probes = 0;
    let mut probe_budget_ok = true;
    for (q, v) in random_vectors(seed, n, w, cfg.queries_per_point).iter().enumerate() {
        let expected = mv_oracle(&m, v)?;
        let qs = QuerySeed::new(query_master, q as u64);

        let mut session = ProbeSession::new(&m, &bits, w)?;
        let plain = query(&mut session, &r, v, qs, false)?;
        match plain.answer() {
            None => failures_without_fallback += 1,
            Some(u) => {
                mismatches += usize::from(u != &expected);
                let probes = session.ledger().matrix_word_probes;
                max_probes = max_probes.max(probes);
                probe_budget_ok &= probes as f64 <= limit;
            }
        }

        if cfg.fallback {
            let mut session = ProbeSession::new(&m, &bits, w)?;
            let out = query(&mut session, &r, v, qs, true)?;
            fallbacks += usize::from(out.diagnostics.fallback_used);
            mismatches += usize::from(out.answer() != Some(&expected));
        }
    }

    let structure_ok = verify_structure(&m, &r, w).all_pass();
    let r_bits_ok = bits.len() as f64 <= redundancy_size_bound(n, w);
    Ok(CorrectnessRow {
        n,
        w,
        r_bits: bits.len(),
        mode: mode.to_string(),
        seed,
        queries: cfg.queries_per_point,
        mismatches,
        failures: if cfg.fallback { 0 } else { failures_without_fallback },
        fallbacks,
        density,
        failures_without_fallback,
        max_matrix_word_probes: max_probes,
        structure_ok,
        r_bits_ok,
        probe_budget_ok,
        pass: mismatches == 0 && structure_ok && r_bits_ok && probe_budget_ok,
    })
}

/// One row per `(n, w, seed)`: build `R` for a random matrix and compare
/// `queries_per_point` random queries against the naive product, without
/// fallback and, when enabled, with it.
pub fn run_correctness(cfg: &SweepConfig) -> Result<Vec<CorrectnessRow>> {
    cfg.validate()?;
    let jobs: Vec<(usize, u32, u64)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| cfg.w_values.iter().flat_map(move |&w| cfg.seeds.iter().map(move |&s| (n, w, s))))
        .collect();
    jobs.par_iter().map(|&(n, w, s)| correctness_point(cfg, n, w, s)).collect()
}
