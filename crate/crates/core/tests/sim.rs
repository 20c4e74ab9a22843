mod common;

use common::oracle::{hoeffding, mwpm_path, rel_err};
use common::patch;
use locq::codes::{GenRepCode, PlanarCode, SquareComplex, StabilizerCode, SubdividedCode};
use locq::sim::{
    bench_scaling, hoeffding_bound, mwpm_path_bound, run_trials, GenUfTrial, NoiseModel, PeelTrial, RepMwpmTrial,
    ScalingFamily, SubdividedTrial, SweepRow, TrialDecoder, TrivialTrial, UfTrial,
};
use locq::subdivided::{BruteForceOuter, PatchMode};

#[test]
fn bounds_match_arbitrary_precision() {
    let mut worst: f64 = 0.0;
    for &(n, r) in &[(100usize, 9usize), (18, 1), (1000, 49), (5000, 10)] {
        let t = (r + 1) as f64 / n as f64;
        for k in 0..5 {
            let p = t * k as f64 / 4.0;
            worst = worst.max(rel_err(hoeffding_bound(n, r, p).unwrap(), hoeffding(n, r, p)));
        }
    }
    for &(l, delta) in &[(5usize, 3usize), (9, 4), (7, 2), (11, 3)] {
        let a = delta - 1;
        let pole = 1.0 / (2.0 * a as f64).powi(4);
        for eps in [1e-12, 1e-8, pole * 0.5, pole * (1.0 - 1e-9), f64::from_bits(pole.to_bits() - 1)] {
            worst = worst.max(rel_err(mwpm_path_bound(l, delta, a, eps).unwrap(), mwpm_path(l, delta, a, eps)));
        }
    }
    assert!(worst < 1e-12, "worst relative error {worst}");
}

#[test]
fn bound_examples_and_preconditions() {
    assert!((hoeffding_bound(100, 9, 0.05).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
    let want = (-2.0 * 100.0f64 / 100.0).exp();
    assert!((hoeffding_bound(100, 9, 0.0).unwrap() - want).abs() < 1e-15);
    assert!(hoeffding_bound(100, 9, 0.2).is_err());
    let want = 0.04f64.powi(7) / 0.96;
    assert!(rel_err(mwpm_path_bound(5, 3, 2, 1e-8).unwrap(), want) < 1e-12);
    assert!(mwpm_path_bound(5, 3, 2, 1.0 / 256.0).is_err());
}

fn subdivided(l: usize) -> (SubdividedCode, BruteForceOuter) {
    let code = SubdividedCode::new(SquareComplex::toric(3, 3).unwrap(), l).unwrap();
    let outer = BruteForceOuter::new(code.outer_css()).unwrap();
    (code, outer)
}

#[test]
fn noiseless_trials_never_fail() {
    let planar = PlanarCode::new(5).unwrap();
    let p = patch(3, 3, 3);
    let rep = GenRepCode::new(3, 5).unwrap();
    let (code, outer) = subdivided(3);
    let decoders: Vec<Box<dyn TrialDecoder>> = vec![
        Box::new(PeelTrial { code: &planar }),
        Box::new(UfTrial { code: &planar }),
        Box::new(GenUfTrial { patch: &p }),
        Box::new(RepMwpmTrial { code: &rep }),
        Box::new(SubdividedTrial { code: &code, outer: &outer, mode: PatchMode::Serial }),
        Box::new(TrivialTrial::new(&planar)),
    ];
    let noise = NoiseModel::new(0.0, 0.0, 3).unwrap();
    for d in &decoders {
        let s = run_trials(d.as_ref(), &noise, 100, false).unwrap();
        assert_eq!(s.failures, 0, "{}", d.id());
    }
}

#[test]
fn pure_erasure_peeling_never_fails_below_distance_rate() {
    let planar = PlanarCode::new(5).unwrap();
    let noise = NoiseModel::new(0.0, 0.1, 3).unwrap();
    let s = run_trials(&PeelTrial { code: &planar }, &noise, 2_000, true).unwrap();
    assert_eq!(s.declined, 0);
    let uf = run_trials(&UfTrial { code: &planar }, &noise, 2_000, true).unwrap();
    assert_eq!(uf.failures, s.failures);
}

#[test]
fn results_are_deterministic_and_order_independent() {
    let (code, outer) = subdivided(3);
    let d = SubdividedTrial { code: &code, outer: &outer, mode: PatchMode::Serial };
    let noise = NoiseModel::new(0.03, 0.01, 17).unwrap();
    let a = run_trials(&d, &noise, 700, false).unwrap();
    let b = run_trials(&d, &noise, 700, true).unwrap();
    let c = run_trials(&SubdividedTrial { mode: PatchMode::ParallelPatches, ..d }, &noise, 700, true).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(a.failures > 0);
    assert_eq!(a.diagnostics.diagnosed, a.failures);
}

#[test]
fn trivial_decoder_fails_often_but_not_always() {
    let planar = PlanarCode::new(3).unwrap();
    let d = TrivialTrial::new(&planar);
    let mut rates = Vec::new();
    for seed in [1, 2] {
        let noise = NoiseModel::new(0.5, 0.0, seed).unwrap();
        let s = run_trials(&d, &noise, 4_000, true).unwrap();
        let (lo, hi) = s.interval();
        assert!(lo > 0.0 && hi < 1.0);
        rates.push((lo, hi));
    }
    assert!(rates[0].0 <= rates[1].1 && rates[1].0 <= rates[0].1);
}

#[test]
fn zero_trials_rejected() {
    let planar = PlanarCode::new(3).unwrap();
    let noise = NoiseModel::new(0.1, 0.0, 0).unwrap();
    assert!(run_trials(&UfTrial { code: &planar }, &noise, 0, false).is_err());
}

#[test]
fn sweep_row_schema() {
    let planar = PlanarCode::new(3).unwrap();
    let noise = NoiseModel::new(0.1, 0.0, 4).unwrap();
    let s = run_trials(&UfTrial { code: &planar }, &noise, 300, false).unwrap();
    let row = SweepRow::from_summary("planar:3", "uf", 3, &noise, &s);
    assert!(row.ci_lo <= row.rate && row.rate <= row.ci_hi);
    assert_eq!(row.trials, 300);
    let json = serde_json::to_value(&row).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in locq::sim::SWEEP_HEADER.split(',') {
        assert!(keys.contains(&k), "{k}");
    }
}

#[test]
fn u_path_diagnostic_tracks_logical_failures() {
    let (code, outer) = subdivided(3);
    let d = SubdividedTrial { code: &code, outer: &outer, mode: PatchMode::Serial };
    let noise = NoiseModel::new(0.04, 0.0, 5).unwrap();
    let s = run_trials(&d, &noise, 3_000, true).unwrap();
    let agreement = s.diagnostics.u_path_agreement().unwrap();
    eprintln!("U-path agreement {agreement:.4} over {} failures", s.failures);
    assert!(agreement > 0.5);
}

#[test]
fn scaling_negative_control() {
    let noise = NoiseModel::new(0.02, 0.0, 1).unwrap();
    let r = bench_scaling(ScalingFamily::Quadratic, &[5, 9, 17, 33], &noise, 10).unwrap();
    assert!(r.rows.windows(2).all(|w| w[0].n < w[1].n));
    assert!(r.ops_slope.unwrap() >= 1.8);
    assert_eq!(ScalingFamily::Uf.num_qubits(5).unwrap(), PlanarCode::new(5).unwrap().graph().num_edges());
}
