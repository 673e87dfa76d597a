//! Under-specified embeddings (d < r) cannot be consistent: every trial sits
//! above the truncation bound sqrt(sum of dropped population eigenvalues / n).
//!
//! cargo run --release --example underspecified_bound

use rdpg_ase::harness::{run_experiment, ExperimentConfig, ModelKind};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let mut cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet);
    cfg.n_grid = vec![200, 400, 800];
    cfg.dims = vec![3, 4];
    cfg.replicates = 3;

    for rec in run_experiment(&cfg)? {
        let err = rec.err_2inf.unwrap_or(f64::NAN);
        let lb = rec.lower_bound.unwrap_or(f64::NAN);
        println!(
            "n={:>4} d={} rep={} err={err:.4} bound={lb:.4} margin={:.4}",
            rec.n,
            rec.d,
            rec.replicate,
            err - lb
        );
    }
    Ok(())
}
