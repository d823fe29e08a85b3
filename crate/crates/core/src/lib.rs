//! Succinct Boolean matrix-vector multiplication in the cell-probe model.
//!
//! The crate has two halves:
//!
//! - an upper-bound data structure: a read-only `n x n` Boolean matrix plus a
//!   small side structure (a list of row/column cover pairs and the 1-entries
//!   they cover), queried by a randomized three-step algorithm that charges
//!   every word it reads through a [`probe::ProbeSession`];
//! - the lower-bound machinery made executable: the block-structured hard
//!   family, probe traces and their `(b, k, K)` encoding, a replay emulator
//!   that answers queries with the matrix absent, and recovery of `Mv` from a
//!   vector-matrix-vector probe log.
//!
//! Everything here is `no_std` with `alloc`. File formats, CSV and the CLI
//! live in the `boolmv-bench` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
pub mod bounds;
pub mod encoding;
pub mod error;
pub mod hard;
pub mod matrix;
pub mod probe;
pub mod seed;
pub mod structure;

pub use bits::{BitString, BitVector};
pub use error::Error;
pub use hard::HardInstanceSpec;
pub use matrix::BitMatrix;
pub use probe::{CellProbe, ProbeLedger, ProbeSession};
pub use seed::QuerySeed;
pub use structure::{CoverPair, QueryOutcome, Redundancy};

pub type Result<T, E = Error> = core::result::Result<T, E>;
