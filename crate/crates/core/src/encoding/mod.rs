//! Probe traces, their `(b, k, K)` encoding, replay without the matrix, and
//! recovery of `Mv` from vector-matrix-vector probe logs.

mod emulate;
pub mod subset;
mod trace;
mod trace_codec;
mod umv;
mod zeros;

pub use emulate::{emulate_queries, emulate_queries_traced, TraceEmulator};
pub use trace::{distinct_and_ones, observed_probe_counts, record_query_trace, Trace};
pub use trace_codec::{
    build_trace_encoding, decode_trace_encoding, field_width, trace_encoding_bound, DecodedTrace, TraceEncoding,
};
pub use umv::{
    build_umv_probe_log, recover_mv_from_umv_log, umv_required_budget, UmvProbeLog, DEFAULT_RECOVERY_CAP,
};
pub use zeros::{inferred_zeros_report, information_check, InferredZerosReport, InformationCheck};
