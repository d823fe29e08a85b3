//! Experiment drivers. Every job derives its randomness from the config
//! seeds alone and results are collected in config order, so output is
//! identical across runs and thread counts.

mod correctness;
mod lb;
mod sweep;

pub use correctness::{run_correctness, CorrectnessRow};
pub use lb::{run_lb_experiment, LbArtifacts, LbOutput, LbRow};
pub use sweep::{run_probe_sweep, SweepRow};

use boolmv_core::matrix::BitMatrix;
use boolmv_core::seed::rng_from;
use boolmv_core::structure::{preprocess_exact_with_cap, preprocess_heuristic};
use boolmv_core::{BitVector, Redundancy};
use rand::Rng;

use crate::config::{Mode, SweepConfig};
use crate::error::Result;

// stream tags for rng_from
const TAG_MATRIX: u64 = 0x4d41_5452;
const TAG_PREPROCESS: u64 = 0x5052_4550;
const TAG_VECTORS: u64 = 0x5645_4354;

/// Densities cycled through by random test matrices. `0` is replaced by
/// `1/sqrt(n w)`, the density at which a whole-matrix pair is just accepted.
const DENSITIES: [f64; 6] = [0.0, 0.01, 0.05, 0.1, 0.3, 0.6];

pub(crate) fn density_for(seed: u64, n: usize, w: u32) -> f64 {
    let d = DENSITIES[(seed % DENSITIES.len() as u64) as usize];
    if d == 0.0 {
        1.0 / ((n as f64) * (w as f64)).sqrt()
    } else {
        d
    }
}

pub(crate) fn random_matrix(seed: u64, n: usize, w: u32) -> Result<(BitMatrix, f64)> {
    let density = density_for(seed, n, w);
    let m = BitMatrix::random(n, density, &mut rng_from(seed, &[TAG_MATRIX, n as u64, w as u64]))?;
    Ok((m, density))
}

pub(crate) fn random_vectors(seed: u64, n: usize, w: u32, count: usize) -> Vec<BitVector> {
    let mut rng = rng_from(seed, &[TAG_VECTORS, n as u64, w as u64]);
    (0..count)
        .map(|_| {
            let p = [0.05, 0.2, 0.5, 0.9][rng.gen_range(0..4)];
            BitVector::from_bools((0..n).map(|_| rng.gen_bool(p)))
        })
        .collect()
}

/// Preprocesses with the concrete mode for this `n`.
pub(crate) fn build_structure(m: &BitMatrix, w: u32, cfg: &SweepConfig, seed: u64) -> Result<(Redundancy, Mode)> {
    let n = m.dim();
    let mode = cfg.mode.resolve(n, cfg.exact_cap);
    let r = match mode {
        Mode::Exact => preprocess_exact_with_cap(m, w, cfg.exact_cap)?,
        _ => {
            let mut rng = rng_from(seed, &[TAG_PREPROCESS, n as u64, w as u64]);
            preprocess_heuristic(m, w, cfg.candidate_budget, &mut rng)?
        }
    };
    Ok((r, mode))
}

/// `1/n + 3 sqrt((1/n)(1 - 1/n)/trials)`.
pub fn failure_rate_limit(n: usize, trials: usize) -> f64 {
    let p = 1.0 / n as f64;
    p + 3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
