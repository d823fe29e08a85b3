//! The read-only input matrix and the brute-force product oracles.

use alloc::vec::Vec;
use rand::Rng;

use crate::bits::{BitString, BitVector};
use crate::{Error, Result};

/// An `n x n` Boolean matrix stored row-major: entry `(i, j)` is bit `i*n + j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    bits: BitString,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n, bits: BitString::zeros(n * n) })
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n, bits: BitString::ones(n * n) })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_bit_string(n: usize, bits: BitString) -> Result<Self> {
        check_dim(n)?;
        if bits.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, actual: bits.len() });
        }
        Ok(Self { n, bits })
    }

    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// Each entry independently 1 with probability `density`.
    pub fn random<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidArgument(alloc::format!("density {density} outside [0, 1]")));
        }
        let mut m = Self::zeros(n)?;
        for p in 0..n * n {
            if rng.gen_bool(density) {
                m.bits.set(p, true);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        self.bits.get(i * self.n + j)
    }

    pub fn try_get(&self, i: usize, j: usize) -> Result<bool> {
        for idx in [i, j] {
            if idx >= self.n {
                return Err(Error::OutOfBounds { index: idx, len: self.n });
            }
        }
        Ok(self.get(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.n && j < self.n);
        self.bits.set(i * self.n + j, value)
    }

    pub fn as_bit_string(&self) -> &BitString {
        &self.bits
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_bools((0..self.n).map(|j| self.get(i, j)))
    }

    pub fn rows(&self) -> Vec<BitVector> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }
}

impl core::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.n, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
    }
    Ok(())
}

/// `Mv` over the Boolean semiring by full scan of the definition
/// `(Mv)_i = OR_j (M_ij AND v_j)`.
pub fn mv_oracle(m: &BitMatrix, v: &BitVector) -> Result<BitVector> {
    if v.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), actual: v.len() });
    }
    let n = m.dim();
    Ok(BitVector::from_bools((0..n).map(|i| (0..n).any(|j| m.get(i, j) && v.get(j)))))
}

/// `u^T M v = OR_{i,j} (M_ij AND u_i AND v_j)`.
pub fn umv_oracle(m: &BitMatrix, u: &BitVector, v: &BitVector) -> Result<bool> {
    let n = m.dim();
    for len in [u.len(), v.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, actual: len });
        }
    }
    Ok((0..n).any(|i| u.get(i) && (0..n).any(|j| m.get(i, j) && v.get(j))))
}
