mod common;

use dirnet_core::network::{FiniteNetwork, MeasuredNetwork};
use dirnet_core::sampling::{
    run_convergence_experiment, sample_iid, ExperimentConfig, GroundTruth, Method, CSV_HEADER,
};
use dirnet_core::Error;

#[test]
fn large_samples_cover_the_support() {
    for size in 2..=10 {
        let net = FiniteNetwork::directed_circle(size).unwrap();
        let m = MeasuredNetwork::uniform(net.clone());
        for seed in 0..20 {
            assert_eq!(sample_iid(&m, 50 * size, seed).unwrap(), net, "size {size} seed {seed}");
        }
    }
}

#[test]
fn samples_never_leave_the_support() {
    let net = FiniteNetwork::directed_circle(6).unwrap();
    let m = MeasuredNetwork::new(net.clone(), vec![0.5, 0.0, 0.25, 0.0, 0.25, 0.0], None).unwrap();
    for seed in 0..50 {
        let s = sample_iid(&m, 30, seed).unwrap();
        for id in s.nodes() {
            assert!(["0", "2", "4"].contains(&id.as_str()));
        }
    }
}

fn dn_config() -> ExperimentConfig {
    let m = MeasuredNetwork::uniform(FiniteNetwork::directed_circle(4).unwrap());
    let mut cfg = ExperimentConfig::new(GroundTruth::Finite(m), Method::Dn, 0.2);
    cfg.sizes = vec![2, 4, 8, 16];
    cfg.trials = 400;
    cfg.seed = 17;
    cfg
}

#[test]
fn frequencies_respect_the_bound() {
    let report = run_convergence_experiment(&dn_config()).unwrap();
    assert_eq!(report.max_min_mass, Some(0.25));
    for row in &report.rows {
        let b = row.bound_clamped.unwrap();
        let sigma = (b * (1.0 - b) / row.trials as f64).sqrt();
        assert!(row.empirical_freq <= b + 3.0 * sigma, "{row:?}");
    }
    // at 16 draws a missed node is rare and every miss keeps d_N positive
    assert!(report.rows[3].empirical_freq < 0.1);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = dn_config();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_convergence_experiment(&cfg).unwrap());
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_convergence_experiment(&cfg).unwrap());
    assert_eq!(one, four);
    assert_eq!(one.statistics, four.statistics);
    let mut other = cfg.clone();
    other.seed = 18;
    assert_ne!(run_convergence_experiment(&other).unwrap().statistics, one.statistics);
}

#[test]
fn components_flag_and_csv() {
    let report = run_convergence_experiment(&dn_config()).unwrap();
    assert!(report.components_assumed);
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 4);

    let m = MeasuredNetwork::uniform(FiniteNetwork::directed_circle(4).unwrap())
        .with_components(vec![vec![0, 1], vec![2, 3]])
        .unwrap();
    let mut cfg = ExperimentConfig::new(GroundTruth::Finite(m), Method::Nr, 0.5);
    cfg.trials = 20;
    assert!(!run_convergence_experiment(&cfg).unwrap().components_assumed);
}

#[test]
fn continuous_circle_has_no_bound() {
    let mut cfg = ExperimentConfig::new(GroundTruth::ContinuousCircle, Method::Dowker, 0.5);
    cfg.sizes = vec![8, 16];
    cfg.trials = 10;
    let report = run_convergence_experiment(&cfg).unwrap();
    assert_eq!(report.max_min_mass, None);
    for row in &report.rows {
        assert_eq!(row.bound_raw, None);
        assert!(row.csv_line().contains(",,"));
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = dn_config();
    cfg.epsilon = 0.0;
    assert!(matches!(run_convergence_experiment(&cfg), Err(Error::InvalidArgument(_))));
    let mut cfg = dn_config();
    cfg.sizes = vec![];
    assert!(run_convergence_experiment(&cfg).is_err());
    let mut cfg = dn_config();
    cfg.trials = 0;
    assert!(run_convergence_experiment(&cfg).is_err());
    let cfg = ExperimentConfig::new(GroundTruth::ContinuousCircle, Method::Nr, 0.5);
    assert!(run_convergence_experiment(&cfg).is_err());
    let big = MeasuredNetwork::uniform(FiniteNetwork::directed_circle(7).unwrap());
    let cfg = ExperimentConfig::new(GroundTruth::Finite(big), Method::Dn, 0.5);
    assert!(run_convergence_experiment(&cfg).unwrap_err().is_budget());
}
