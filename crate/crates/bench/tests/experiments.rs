use boolmv_bench::experiments::{run_correctness, run_lb_experiment, run_probe_sweep};
use boolmv_bench::{BenchError, Mode, RSpec, SweepConfig};
use proptest::prelude::*;

fn lb_config(n: usize, rs: Vec<usize>, seeds: std::ops::Range<u64>, umv: bool) -> SweepConfig {
    SweepConfig {
        n_values: vec![n],
        r_spec: RSpec::Explicit(rs),
        seeds: seeds.collect(),
        umv,
        ..SweepConfig::default()
    }
}

#[test]
fn lb_eight_by_eight_meets_every_check() {
    let out = run_lb_experiment(&lb_config(8, vec![8], 0..20, false)).unwrap();
    assert_eq!(out.rows.len(), 20);
    for row in &out.rows {
        assert!(row.emulation_ok && row.order_ok && row.codec_ok && row.info_ok, "{row:?}");
        assert!(row.zeros_per_block_min >= 6);
        assert_eq!(row.zeros_ok, Some(true));
        assert_eq!(row.t_budget, out.t_budget);
        assert!(row.b <= 4 * row.t_budget);
    }
}

#[test]
fn entropy_column_matches_family_size() {
    let out = run_lb_experiment(&lb_config(16, vec![16, 32, 64], 0..2, false)).unwrap();
    for row in &out.rows {
        // every member is one of (n^2/r)^r matrices
        let per_block = (row.n * row.n / row.r) as f64;
        assert_eq!(row.entropy_bits, row.r as f64 * per_block.log2());
        assert!(row.pass, "{row:?}");
    }
}

#[test]
fn umv_recovery_at_n_eight() {
    let out = run_lb_experiment(&lb_config(8, vec![8, 16], 0..6, true)).unwrap();
    for (row, art) in out.rows.iter().zip(&out.artifacts) {
        assert_eq!(row.umv_ok, Some(true), "{row:?}");
        let t = row.umv_t.unwrap();
        assert_eq!(row.umv_log_bits, Some((4 * row.r / row.n) * t * (2 * 3 + 1)));
        assert_eq!(art.umv_log.as_ref().unwrap().len(), row.umv_log_bits.unwrap());
    }
}

#[test]
fn partition_vectors_cover_non_integral_sizes() {
    let out = run_lb_experiment(&lb_config(6, vec![6], 0..4, true)).unwrap();
    for row in &out.rows {
        assert_eq!(row.vectors, "partition");
        assert_eq!(row.zeros_ok, None);
        assert!(row.pass, "{row:?}");
    }
}

#[test]
fn fixed_budget_below_need_is_rejected() {
    let mut cfg = lb_config(8, vec![16], 0..3, false);
    cfg.t_budget = Some(0);
    assert!(matches!(run_lb_experiment(&cfg), Err(BenchError::Core(boolmv_core::Error::BudgetExceeded { .. }))));
}

#[test]
fn correctness_and_sweep_agree_on_structure_size() {
    let cfg = SweepConfig {
        n_values: vec![10],
        w_values: vec![16],
        seeds: vec![3],
        mode: Mode::Exact,
        queries_per_point: 40,
        ..SweepConfig::default()
    };
    let c = run_correctness(&cfg).unwrap();
    let s = run_probe_sweep(&cfg).unwrap();
    assert_eq!(c[0].r_bits, s[0].r_bits);
    assert!(c[0].pass && s[0].pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_correctness_points_pass(seed in 0u64..10_000, n in 2usize..40, w in prop::sample::select(vec![8u32, 16, 32, 64])) {
        let cfg = SweepConfig {
            n_values: vec![n],
            w_values: vec![w],
            seeds: vec![seed],
            queries_per_point: 20,
            ..SweepConfig::default()
        };
        let rows = run_correctness(&cfg).unwrap();
        prop_assert_eq!(rows[0].mismatches, 0);
        prop_assert!(rows[0].pass);
    }
}
