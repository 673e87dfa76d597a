//! Experiment driver: bookkeeping, determinism, aggregation and fits.

use rand_distr::{Distribution, StandardNormal};
use rdpg_ase::harness::{
    aggregate, fit_rate, read_records, records_to_string, run_experiment, run_trials, ExperimentConfig, ModelKind,
    SeriesKey, TrialRecord,
};
use rdpg_ase::seed::rng_from_seed;

fn tiny(model: ModelKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::desk(model);
    cfg.n_grid = vec![100];
    cfg.dims = vec![5];
    cfg.replicates = 2;
    cfg.gamma_grid = None;
    cfg
}

fn synthetic(n: usize, err: f64, replicate: usize) -> TrialRecord {
    TrialRecord {
        model: "synthetic".into(),
        n,
        d: 5,
        r: 5,
        k: 0,
        noise: String::new(),
        gamma: None,
        rho: 1.0,
        replicate,
        seed: 0,
        err_2inf: Some(err),
        err_frob: Some(err),
        lower_bound: None,
        deloc_scaled_max: None,
        runtime_ms: None,
        status: "ok".into(),
    }
}

#[test]
fn rerun_gives_identical_records() {
    for model in [
        ModelKind::WeightedDirichlet,
        ModelKind::WeightedWeakSignal,
        ModelKind::SbmBinary,
        ModelKind::SparseBinaryDirichlet,
    ] {
        let cfg = tiny(model);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(records_to_string(&a).unwrap(), records_to_string(&b).unwrap());
        assert_ne!(a[0].seed, a[1].seed);
    }
}

#[test]
fn record_count_matches_grid() {
    let mut cfg = ExperimentConfig::desk(ModelKind::SparseBinaryDirichlet);
    cfg.n_grid = vec![40, 80];
    cfg.dims = vec![2, 5, 9];
    cfg.gamma_grid = Some(vec![0.0, 0.3]);
    cfg.replicates = 3;
    let recs = run_experiment(&cfg).unwrap();
    assert_eq!(recs.len(), 2 * 3 * 2 * 3);
    assert_eq!(recs.len(), cfg.expected_records());
    for r in &recs {
        assert_eq!(r.k, r.d as i64 - r.r as i64);
        let expect_rho = (r.n as f64).powf(-r.gamma.unwrap());
        assert_eq!(r.rho, expect_rho);
    }
}

#[test]
fn underspecified_records_respect_bound() {
    let mut cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet);
    cfg.n_grid = vec![80, 160];
    cfg.dims = vec![1, 2, 3, 4];
    cfg.replicates = 4;
    for r in run_experiment(&cfg).unwrap() {
        assert!(r.err_2inf.unwrap() >= r.lower_bound.unwrap(), "{r:?}");
    }
}

#[test]
fn worker_count_and_order_do_not_matter() {
    let mut cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet);
    cfg.n_grid = vec![50, 90];
    cfg.dims = vec![4, 6];
    cfg.replicates = 5;
    cfg.workers = Some(1);
    let one = records_to_string(&run_experiment(&cfg).unwrap()).unwrap();
    cfg.workers = Some(4);
    let four = records_to_string(&run_experiment(&cfg).unwrap()).unwrap();
    assert_eq!(one, four);
}

#[test]
fn csv_survives_a_file_round_trip() {
    let mut cfg = tiny(ModelKind::SbmBinary);
    cfg.dims = vec![3, 5, 8];
    let recs = run_experiment(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trials.csv");
    std::fs::write(&path, records_to_string(&recs).unwrap()).unwrap();
    let back = read_records(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, recs);
}

#[test]
fn timing_is_opt_in() {
    let mut cfg = tiny(ModelKind::WeightedDirichlet);
    assert!(run_experiment(&cfg).unwrap().iter().all(|r| r.runtime_ms.is_none()));
    cfg.timing = true;
    assert!(run_experiment(&cfg)
        .unwrap()
        .iter()
        .all(|r| r.runtime_ms.unwrap() >= 0.0));
}

#[test]
fn aggregate_small_examples() {
    let s = aggregate(&[synthetic(10, 1.0, 0), synthetic(10, 3.0, 1)]);
    assert_eq!((s[0].mean, s[0].sem, s[0].errbar), (Some(2.0), Some(1.0), Some(2.0)));

    let s = aggregate(&[synthetic(10, 0.7, 0), synthetic(10, 0.7, 1), synthetic(10, 0.7, 2)]);
    assert_eq!(s[0].sem, Some(0.0));

    let s = aggregate(&[synthetic(10, 0.7, 0)]);
    assert_eq!(s[0].sem, None);
    assert_eq!(s[0].errbar, None);
}

#[test]
fn sem_of_gaussian_errors_matches_clt() {
    let mut rng = rng_from_seed(17);
    let recs: Vec<TrialRecord> = (0..1000)
        .map(|i| {
            let z: f64 = StandardNormal.sample(&mut rng);
            synthetic(10, 5.0 + z, i)
        })
        .collect();
    let sem = aggregate(&recs)[0].sem.unwrap();
    let target = 1.0 / 1000f64.sqrt();
    assert!((sem - target).abs() <= 0.1 * target, "{sem} vs {target}");
}

fn key() -> SeriesKey {
    SeriesKey {
        model: "synthetic".into(),
        noise: String::new(),
        gamma: None,
        d: 5,
    }
}

#[test]
fn rate_fit_examples() {
    let grid = [300usize, 600, 1200, 2400, 4800, 9600];
    let exact: Vec<TrialRecord> = grid.iter().map(|&n| synthetic(n, (n as f64).powf(-0.5), 0)).collect();
    let f = fit_rate(&aggregate(&exact), &key(), 0.5).unwrap();
    assert!((f.fit.slope + 0.5).abs() <= 1e-12);
    assert_eq!(f.ns, vec![2400, 4800, 9600]);

    let flat: Vec<TrialRecord> = grid.iter().map(|&n| synthetic(n, 0.3, 0)).collect();
    let f = fit_rate(&aggregate(&flat), &key(), 0.5).unwrap();
    assert!(f.fit.slope.abs() <= 1e-12);

    let mut rng = rng_from_seed(5);
    let noisy: Vec<TrialRecord> = grid
        .iter()
        .map(|&n| {
            let z: f64 = StandardNormal.sample(&mut rng);
            synthetic(n, 3.0 * (n as f64).powf(-0.25) * (1.0 + 0.01 * z), 0)
        })
        .collect();
    let f = fit_rate(&aggregate(&noisy), &key(), 1.0).unwrap();
    assert!((f.fit.slope + 0.25).abs() <= 0.03, "{}", f.fit.slope);
}

#[test]
fn noiseless_sweep_is_exact_from_true_rank_on() {
    let mut cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet);
    cfg.noiseless = true;
    cfg.n_grid = vec![120];
    cfg.dims = (1..=9).collect();
    cfg.replicates = 2;
    let summaries = aggregate(&run_experiment(&cfg).unwrap());
    for s in &summaries {
        let m = s.mean.unwrap();
        if s.d < 5 {
            assert!(m > 1e-3, "d = {}: {m}", s.d);
        } else {
            // surplus columns are built from round-off sized eigenvalues
            assert!(m <= 1e-6, "d = {}: {m}", s.d);
        }
    }
}

#[test]
fn diagnostics_follow_the_flags() {
    let mut cfg = tiny(ModelKind::WeightedDirichlet);
    assert!(run_trials(&cfg).unwrap().diagnostics.is_empty());
    cfg.diagnostics.deloc = true;
    let run = run_trials(&cfg).unwrap();
    assert_eq!(run.diagnostics.len(), 2);
    for (d, r) in run.diagnostics.iter().zip(&run.records) {
        assert_eq!(d.label, "theorem-setting");
        assert_eq!(d.deloc_scaled_max, r.deloc_scaled_max);
        assert!(d.deloc_scaled_max.unwrap() >= 1.0);
    }
}
