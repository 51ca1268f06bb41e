use std::path::PathBuf;

use mcc_core::harness::{
    instance_to_json, label_points, load_instance, parse_instance, points_to_csv, region_of,
    run_simulation, sample_region, trial_instance, write_instance, Aggregate, CostMode,
    ReferenceMode, RegionKind, SimulationConfig,
};
use mcc_core::{kappa_mutual, kappa_owa, Error};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mcc-core-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn fixtures_load() {
    let one = load_instance(fixture("example1.json")).unwrap();
    assert_eq!(one.n(), 5);
    assert!((one.costs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let two = load_instance(fixture("example2.json")).unwrap();
    assert_eq!(two.n(), 8);
    assert_eq!(two.epsilon(), 0.1);
}

#[test]
fn instances_round_trip() {
    let inst = load_instance(fixture("example2.json"))
        .unwrap()
        .with_delta(0.4)
        .unwrap()
        .with_gamma2(0.3)
        .unwrap();
    let path = scratch("round_trip.json");
    write_instance(&inst, &path).unwrap();
    assert_eq!(load_instance(&path).unwrap(), inst);
    assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_instance(fixture("nope.json")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn unknown_keys_are_rejected() {
    let text = r#"{"opinions":[0.5],"costs":[1],"owa_weights":[1],"epsilon":0.1,"eps":2}"#;
    assert!(matches!(parse_instance(text), Err(Error::Parse { .. })));
}

#[test]
fn report_aggregates_match_records() {
    let mut cfg = SimulationConfig::new(5, 12, ReferenceMode::ExactEnum, CostMode::Random);
    cfg.seed = 99;
    let report = run_simulation(&cfg).unwrap();
    assert_eq!(report.records.len(), 12);
    let gaps: Vec<f64> = report.records.iter().map(|r| r.cost_gap).collect();
    let mean = gaps.iter().sum::<f64>() / 12.0;
    let var = gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / 11.0;
    assert!((report.cost_gap.mean - mean).abs() <= 1e-12);
    assert!((report.cost_gap.std - var.sqrt()).abs() <= 1e-12);
    let times: Vec<f64> = report.records.iter().map(|r| r.ap_time_ms).collect();
    assert_eq!(report.ap_time_ms, Aggregate::of(&times));
    for (t, r) in report.records.iter().enumerate() {
        assert_eq!(r.trial, t);
        assert!(r.cost_gap >= -1e-7);
        assert!(r.feasible);
        assert!((r.ap_cost - r.reference_cost - r.cost_gap).abs() <= 1e-15);
    }
}

#[test]
fn reports_serialize() {
    let mut cfg = SimulationConfig::new(6, 3, ReferenceMode::SymmetricLinear, CostMode::Uniform);
    cfg.record_timings = false;
    let report = run_simulation(&cfg).unwrap();
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("trial,cost_gap,ap_time_ms,reference_time_ms,converged,feasible")
    );
    assert_eq!(lines.count(), 3);
    let back: mcc_core::harness::SimulationReport =
        serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn trials_are_reproducible_and_distinct() {
    let cfg = SimulationConfig::new(7, 3, ReferenceMode::ExactEnum, CostMode::Random);
    let a = trial_instance(&cfg, 1).unwrap();
    assert_eq!(a, trial_instance(&cfg, 1).unwrap());
    assert_ne!(a, trial_instance(&cfg, 2).unwrap());
    let mut other = cfg.clone();
    other.seed = 1;
    assert_ne!(a, trial_instance(&other, 1).unwrap());
}

#[test]
fn thread_count_does_not_change_results() {
    let mut cfg = SimulationConfig::new(5, 16, ReferenceMode::ExactEnum, CostMode::Random);
    cfg.record_timings = false;
    cfg.threads = Some(1);
    let single = run_simulation(&cfg).unwrap();
    cfg.threads = Some(4);
    let multi = run_simulation(&cfg).unwrap();
    assert_eq!(single.records, multi.records);
    assert_eq!(single.to_csv(), multi.to_csv());
}

#[test]
fn sampled_points_are_labelled_correctly() {
    let inst = load_instance(fixture("example1.json"))
        .unwrap()
        .with_delta(0.3)
        .unwrap();
    let pts = sample_region(&inst, RegionKind::Mutual, 500, 4).unwrap();
    assert_eq!(pts.len(), 500);
    for p in &pts {
        assert_eq!(p.inside, kappa_mutual(&p.coords) <= 0.3 + 1e-12);
    }
    let pts = sample_region(&inst, RegionKind::Owa, 500, 4).unwrap();
    for p in &pts {
        let k = kappa_owa(inst.owa_weights(), &p.coords).unwrap();
        assert_eq!(p.inside, k <= 0.2 + 1e-12);
    }
    assert!(pts.iter().any(|p| p.inside) && pts.iter().any(|p| !p.inside));
    let csv = points_to_csv(&pts);
    assert!(csv.starts_with("x1,x2,x3,x4,x5,inside\n"));
    assert_eq!(csv.lines().count(), 501);
    // a threshold the instance does not set
    assert!(sample_region(&inst, RegionKind::Pairwise, 5, 0).is_err());
    let region = region_of(&inst, RegionKind::Mutual).unwrap();
    let labelled = label_points(&region, vec![vec![0.0, 0.0, 0.0, 0.0, 0.3]]).unwrap();
    assert!(labelled[0].inside);
}
