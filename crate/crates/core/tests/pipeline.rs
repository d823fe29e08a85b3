use boolmv_core::encoding::{
    build_trace_encoding, build_umv_probe_log, emulate_queries, observed_probe_counts, record_query_trace,
    recover_mv_from_umv_log, umv_required_budget, DEFAULT_RECOVERY_CAP,
};
use boolmv_core::hard::{hard_query_vectors, sample_hard_matrix};
use boolmv_core::matrix::mv_oracle;
use boolmv_core::seed::rng_from;
use boolmv_core::structure::{
    deserialize_redundancy, preprocess_exact, preprocess_heuristic, query, serialize_redundancy, verify_structure,
};
use boolmv_core::{BitMatrix, BitVector, HardInstanceSpec, ProbeSession, QuerySeed};

#[test]
fn structure_survives_storage_and_answers_queries() {
    let mut rng = rng_from(11, &[]);
    let m = BitMatrix::random(10, 0.3, &mut rng).unwrap();
    let r = preprocess_exact(&m, 16).unwrap();
    assert!(verify_structure(&m, &r, 16).all_pass());

    let bits = serialize_redundancy(&r).unwrap();
    let back = deserialize_redundancy(&bits, 10, 16).unwrap();
    assert_eq!(back, r);

    for q in 0..50 {
        let v = BitVector::from_mask(10, q * 37 % 1024);
        let mut s = ProbeSession::new(&m, &bits, 16).unwrap();
        let out = query(&mut s, &back, &v, QuerySeed::new(11, q), true).unwrap();
        assert_eq!(out.answer(), Some(&mv_oracle(&m, &v).unwrap()));
    }
}

#[test]
fn large_heuristic_structure_is_valid() {
    let mut rng = rng_from(5, &[]);
    let m = BitMatrix::random(48, 0.05, &mut rng).unwrap();
    let r = preprocess_heuristic(&m, 32, 256, &mut rng).unwrap();
    assert!(verify_structure(&m, &r, 32).all_pass());
}

#[test]
fn hard_instance_replays_without_the_matrix() {
    let spec = HardInstanceSpec::for_lower_bound(16, 32).unwrap();
    let vs = hard_query_vectors(&spec).unwrap();
    let m = sample_hard_matrix(&spec, &mut rng_from(2, &[]));
    let r = preprocess_heuristic(&m, 8, 128, &mut rng_from(3, &[])).unwrap();
    let t = observed_probe_counts(&m, &r, &vs, 9).unwrap().into_iter().max().unwrap();

    let trace = record_query_trace(&m, &r, &vs, 9, t).unwrap();
    let enc = build_trace_encoding(&trace, &spec).unwrap();
    let answers = emulate_queries(&r, &enc, &spec, &vs, 9, t).unwrap();
    let expected: Vec<_> = vs.iter().map(|v| mv_oracle(&m, v).unwrap()).collect();
    assert_eq!(answers, expected);
    assert_eq!(trace.answers, expected);
}

#[test]
fn umv_log_recovers_every_product() {
    let spec = HardInstanceSpec::for_lower_bound(8, 16).unwrap();
    let vs = hard_query_vectors(&spec).unwrap();
    let m = sample_hard_matrix(&spec, &mut rng_from(4, &[]));
    let r = preprocess_exact(&m, 8).unwrap();
    let t = umv_required_budget(&m, &r, &vs, 1).unwrap();
    let log = build_umv_probe_log(&m, &r, &vs, 1, t).unwrap();
    for (j, v) in vs.iter().enumerate() {
        let got = recover_mv_from_umv_log(&r, &log, v, j, 1, DEFAULT_RECOVERY_CAP).unwrap();
        assert_eq!(got, mv_oracle(&m, v).unwrap());
    }
}
