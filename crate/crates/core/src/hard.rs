//! The block-structured hard family and its query vectors.
//!
//! Each row of a hard matrix is cut into `r/n` contiguous blocks of `n^2/r`
//! columns with exactly one 1 per block, so the family has `(n^2/r)^r`
//! members. Column `j` (0-based) has residue `(j mod n^2/r) + 1` in
//! `1..=n^2/r`; the query vectors select residue classes.

use alloc::format;
use alloc::vec::Vec;
use rand::Rng;

use crate::bits::BitVector;
use crate::bounds::lg;
use crate::matrix::BitMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HardInstanceSpec {
    n: usize,
    r: usize,
}

/// How the `4r/n` query vectors are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryRegime {
    /// `r <= sqrt(n^3/4)`: vector `m` selects residues
    /// `(m-1)W+1 ..= mW` with `W = n^3 / 4r^2`.
    Small { range_width: usize },
    /// `r >= sqrt(n^3/4)`: vector `(m, i)` selects residue `m` inside the
    /// `i`-th chunk of `n^4 / 4r^2` columns.
    Large { chunk_len: usize, chunks: usize },
}

impl HardInstanceSpec {
    /// Validates the block-family shape: `n | r`, `r | n^2`, `n <= r <= n^2`.
    ///
    /// The lower-bound range `r <= n^2/4` is checked separately by
    /// [`HardInstanceSpec::check_lower_bound_range`].
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if r == 0 || r % n != 0 {
            return Err(Error::InvalidSpec(format!("n={n} does not divide r={r}")));
        }
        if (n * n) % r != 0 {
            return Err(Error::InvalidSpec(format!("r={r} does not divide n^2={}", n * n)));
        }
        Ok(Self { n, r })
    }

    /// Like [`HardInstanceSpec::new`] but also requires `r <= n^2/4`.
    pub fn for_lower_bound(n: usize, r: usize) -> Result<Self> {
        let spec = Self::new(n, r)?;
        spec.check_lower_bound_range()?;
        Ok(spec)
    }

    pub fn check_lower_bound_range(&self) -> Result<()> {
        if 4 * self.r > self.n * self.n {
            return Err(Error::InvalidSpec(format!(
                "r={} exceeds n^2/4={}",
                self.r,
                self.n * self.n / 4
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn blocks_per_row(&self) -> usize {
        self.r / self.n
    }

    #[inline]
    pub fn block_width(&self) -> usize {
        self.n * self.n / self.r
    }

    /// Number of query vectors, `4r/n`.
    #[inline]
    pub fn query_count(&self) -> usize {
        4 * self.r / self.n
    }

    /// 1-based residue of 0-based column `j`.
    #[inline]
    pub fn residue(&self, j: usize) -> usize {
        j % self.block_width() + 1
    }

    /// The block of row-local column `j`.
    #[inline]
    pub fn block_of(&self, j: usize) -> usize {
        j / self.block_width()
    }

    pub fn regime(&self) -> Result<QueryRegime> {
        self.check_lower_bound_range()?;
        let (n, r) = (self.n as u128, self.r as u128);
        let n3 = n * n * n;
        let four_r2 = 4 * r * r;
        if self.n < 128 && self.query_count() as u128 > 1u128 << self.n {
            return Err(Error::InvalidSpec("4r/n exceeds 2^n".into()));
        }
        if four_r2 <= n3 {
            if n3 % four_r2 != 0 {
                return Err(Error::InvalidSpec(format!(
                    "range width n^3/4r^2 = {n3}/{four_r2} is not an integer"
                )));
            }
            Ok(QueryRegime::Small { range_width: (n3 / four_r2) as usize })
        } else {
            let n4 = n3 * n;
            if four_r2 % n3 != 0 || n4 % four_r2 != 0 {
                return Err(Error::InvalidSpec(format!(
                    "chunk parameters 4r^2/n^3 = {four_r2}/{n3} and n^4/4r^2 = {n4}/{four_r2} must be integers"
                )));
            }
            Ok(QueryRegime::Large {
                chunk_len: (n4 / four_r2) as usize,
                chunks: (four_r2 / n3) as usize,
            })
        }
    }

    /// `3n^2/(4r)`, the guaranteed number of known zeros per block.
    pub fn known_zero_threshold(&self) -> f64 {
        3.0 * (self.n * self.n) as f64 / (4 * self.r) as f64
    }

    /// `count >= 3n^2/(4r)`, exactly.
    pub fn meets_known_zero_threshold(&self, count: usize) -> bool {
        count * 4 * self.r >= 3 * self.n * self.n
    }

    /// `(r - k) lg(n^2/(4r))`: entropy left in `M` once `k` ones and the
    /// zeros implied by the answers are known.
    pub fn residual_entropy_bound(&self, k: usize) -> f64 {
        let per_block = (self.n * self.n) as f64 / (4 * self.r) as f64;
        self.r.saturating_sub(k) as f64 * lg(per_block)
    }
}

/// Uniform member of the hard family: one uniformly placed 1 per block.
pub fn sample_hard_matrix<R: Rng + ?Sized>(spec: &HardInstanceSpec, rng: &mut R) -> BitMatrix {
    let n = spec.n();
    let width = spec.block_width();
    let mut m = BitMatrix::zeros(n).expect("spec guarantees n >= 1");
    for i in 0..n {
        for b in 0..spec.blocks_per_row() {
            let j = b * width + rng.gen_range(0..width);
            m.set(i, j, true);
        }
    }
    m
}

/// The `4r/n` query vectors of the lower-bound argument.
///
/// Errors when the range or chunk parameters are not integers; see
/// [`partition_query_vectors`] for a variant defined for every `r` in the
/// small regime.
pub fn hard_query_vectors(spec: &HardInstanceSpec) -> Result<Vec<BitVector>> {
    let n = spec.n();
    let out = match spec.regime()? {
        QueryRegime::Small { range_width } => (1..=spec.query_count())
            .map(|m| {
                let lo = (m - 1) * range_width + 1;
                let hi = m * range_width;
                BitVector::from_bools((0..n).map(|j| (lo..=hi).contains(&spec.residue(j))))
            })
            .collect(),
        QueryRegime::Large { chunk_len, chunks } => {
            let mut out = Vec::with_capacity(spec.query_count());
            for m in 1..=spec.block_width() {
                for i in 1..=chunks {
                    let lo = (i - 1) * chunk_len;
                    let hi = i * chunk_len;
                    out.push(BitVector::from_bools(
                        (0..n).map(|j| spec.residue(j) == m && (lo..hi).contains(&j)),
                    ));
                }
            }
            out
        }
    };
    debug_assert_eq!(out.len(), spec.query_count());
    Ok(out)
}

/// Splits the residues `1..=n^2/r` into `4r/n` contiguous classes with
/// boundaries `floor(m * (n^2/r) / (4r/n))`; vector `m` selects class `m`.
///
/// Agrees with [`hard_query_vectors`] whenever `n^3/4r^2` is an integer.
/// Requires `4r/n <= n^2/r` so no class is empty.
pub fn partition_query_vectors(spec: &HardInstanceSpec) -> Result<Vec<BitVector>> {
    spec.check_lower_bound_range()?;
    let q = spec.query_count();
    let width = spec.block_width();
    if q > width {
        return Err(Error::InvalidSpec(format!(
            "{q} classes cannot partition {width} residues"
        )));
    }
    Ok((1..=q)
        .map(|m| {
            let lo = (m - 1) * width / q;
            let hi = m * width / q;
            BitVector::from_bools((0..spec.n()).map(|j| {
                let res = spec.residue(j);
                res > lo && res <= hi
            }))
        })
        .collect())
}

/// `r lg(n^2/r)` bits, the entropy of a uniform member of the family.
pub fn family_entropy_bits(spec: &HardInstanceSpec) -> Result<f64> {
    spec.check_lower_bound_range()?;
    Ok(spec.r() as f64 * lg(spec.block_width() as f64))
}
