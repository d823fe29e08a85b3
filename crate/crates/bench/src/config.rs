use std::fmt;
use std::str::FromStr;

use boolmv_core::structure::{DEFAULT_EXACT_CAP, EXACT_HARD_LIMIT};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Heuristic,
    /// Exact up to the cap, heuristic above it.
    Auto,
}

impl Mode {
    /// The concrete mode used for an `n x n` matrix.
    pub fn resolve(self, n: usize, exact_cap: usize) -> Mode {
        match self {
            Mode::Auto if n <= exact_cap => Mode::Exact,
            Mode::Auto => Mode::Heuristic,
            m => m,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Heuristic => "heuristic",
            Mode::Auto => "auto",
        })
    }
}

impl FromStr for Mode {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "heuristic" => Ok(Mode::Heuristic),
            "auto" => Ok(Mode::Auto),
            _ => Err(BenchError::Config(format!("unknown mode {s:?}"))),
        }
    }
}

/// Which `r` values a lower-bound run uses for each `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RSpec {
    /// `r = n`.
    EqualToN,
    Explicit(Vec<usize>),
}

impl RSpec {
    pub fn values_for(&self, n: usize) -> Vec<usize> {
        match self {
            RSpec::EqualToN => vec![n],
            RSpec::Explicit(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub w_values: Vec<u32>,
    pub r_spec: RSpec,
    pub seeds: Vec<u64>,
    pub mode: Mode,
    pub queries_per_point: usize,
    pub fallback: bool,
    pub candidate_budget: usize,
    pub exact_cap: usize,
    /// Lower-bound runs only: fixed per-query probe budget.
    pub t_budget: Option<usize>,
    /// Lower-bound runs only: also recover `Mv` from vector-matrix-vector logs.
    pub umv: bool,
    pub umv_cap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_values: vec![8],
            w_values: vec![8],
            r_spec: RSpec::EqualToN,
            seeds: vec![0],
            mode: Mode::Auto,
            queries_per_point: 100,
            fallback: true,
            candidate_budget: 512,
            exact_cap: DEFAULT_EXACT_CAP,
            t_budget: None,
            umv: false,
            umv_cap: boolmv_core::encoding::DEFAULT_RECOVERY_CAP,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(BenchError::Config(msg));
        if self.n_values.is_empty() || self.w_values.is_empty() || self.seeds.is_empty() {
            return bad("n, w and seed lists must be non-empty".into());
        }
        if let Some(&n) = self.n_values.iter().find(|&&n| n < 2) {
            return bad(format!("n={n} is below 2"));
        }
        if let Some(&w) = self.w_values.iter().find(|&&w| !matches!(w, 8 | 16 | 32 | 64)) {
            return bad(format!("w={w} is not one of 8, 16, 32, 64"));
        }
        if self.queries_per_point == 0 {
            return bad("queries per point must be at least 1".into());
        }
        if self.candidate_budget == 0 {
            return bad("candidate budget must be at least 1".into());
        }
        if self.exact_cap > EXACT_HARD_LIMIT {
            return bad(format!("exact cap {} exceeds {EXACT_HARD_LIMIT}", self.exact_cap));
        }
        if self.mode == Mode::Exact {
            if let Some(&n) = self.n_values.iter().find(|&&n| n > self.exact_cap) {
                return bad(format!("exact mode needs n <= {}, got n={n}", self.exact_cap));
            }
        }
        if let RSpec::Explicit(rs) = &self.r_spec {
            if rs.is_empty() {
                return bad("r list must be non-empty".into());
            }
        }
        Ok(())
    }

    /// Extra checks for lower-bound runs.
    pub fn validate_lb(&self) -> Result<()> {
        self.validate()?;
        if self.umv {
            if let Some(&n) = self.n_values.iter().find(|&&n| n > self.umv_cap) {
                return Err(BenchError::Config(format!(
                    "--umv enumerates 2^n vectors; n={n} exceeds the cap {}",
                    self.umv_cap
                )));
            }
        }
        Ok(())
    }
}

/// Parses `1,2,3`, `0..10` (half-open) or a mix such as `0..4,9`.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>>
where
    T: FromStr + TryFrom<u64>,
{
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let lo: u64 = a.trim().parse().map_err(|_| BenchError::Config(format!("bad range start in {part:?}")))?;
            let hi: u64 = b.trim().parse().map_err(|_| BenchError::Config(format!("bad range end in {part:?}")))?;
            if lo >= hi {
                return Err(BenchError::Config(format!("empty range {part:?}")));
            }
            for x in lo..hi {
                out.push(T::try_from(x).map_err(|_| BenchError::Config(format!("{x} out of range")))?);
            }
        } else {
            out.push(part.parse().map_err(|_| BenchError::Config(format!("cannot parse {part:?}")))?);
        }
    }
    if out.is_empty() {
        return Err(BenchError::Config(format!("empty list {s:?}")));
    }
    Ok(out)
}
