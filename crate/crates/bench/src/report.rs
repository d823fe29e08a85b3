use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::experiments::{CorrectnessRow, LbRow, SweepRow};

/// Header row, comma separated, LF line endings.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn correctness_summary(rows: &[CorrectnessRow]) -> String {
    let mut out = String::new();
    for r in rows {
        out += &format!(
            "{:>4} n={:<4} w={:<3} seed={:<5} {:<9} r_bits={:<7} mismatches={} failures={} fallbacks={} no-fallback-failures={}\n",
            verdict(r.pass),
            r.n,
            r.w,
            r.seed,
            r.mode,
            r.r_bits,
            r.mismatches,
            r.failures,
            r.fallbacks,
            r.failures_without_fallback
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out += &format!("{} points, {} failed\n", rows.len(), failed);
    out
}

pub fn sweep_summary(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let rate = match r.failure_rate_ok {
            Some(ok) => format!("{:.4} (limit {:.4}, {})", r.failure_rate, r.failure_rate_limit, verdict(ok)),
            None => format!("{:.4}", r.failure_rate),
        };
        out += &format!(
            "{:>4} n={:<4} w={:<3} {:<9} r_bits={:<7} probes avg={:.1} max={} limit={:.0} bound={:.0} ratio={:.3} failure_rate={}\n",
            verdict(r.pass),
            r.n,
            r.w,
            r.mode,
            r.r_bits,
            r.avg_matrix_word_probes,
            r.max_matrix_word_probes,
            r.probe_limit,
            r.bound,
            r.ratio,
            rate
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out += &format!("{} points, {} failed (failure-rate limit is 1/n + 3 sigma)\n", rows.len(), failed);
    out
}

pub fn lb_summary(rows: &[LbRow]) -> String {
    let mut out = String::new();
    for r in rows {
        out += &format!(
            "{:>4} n={:<3} r={:<4} w={:<3} seed={:<5} t={} b={} k={} enc_bits={} r_bits={} entropy={:.1} residual={:.1} zeros_min={}{}\n",
            verdict(r.pass),
            r.n,
            r.r,
            r.w,
            r.seed,
            r.t_budget,
            r.b,
            r.k,
            r.encoding_bits,
            r.r_bits,
            r.entropy_bits,
            r.residual_bound,
            r.zeros_per_block_min,
            match r.umv_ok {
                Some(ok) => format!(" umv={}", verdict(ok)),
                None => String::new(),
            }
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out += &format!("{} instances, {} failed\n", rows.len(), failed);
    out
}
