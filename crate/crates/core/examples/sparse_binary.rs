//! Binary RDPG with sparsity rho_n = n^-gamma. Denser networks (small gamma)
//! converge faster.
//!
//! cargo run --release --example sparse_binary

use rdpg_ase::harness::{aggregate, fit_rate, run_experiment, series_keys, ExperimentConfig, ModelKind};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let mut cfg = ExperimentConfig::desk(ModelKind::SparseBinaryDirichlet);
    cfg.n_grid = vec![200, 400, 800, 1600];
    cfg.dims = vec![5];
    cfg.gamma_grid = Some(vec![0.0, 0.25, 0.5]);
    cfg.replicates = 5;

    let summaries = aggregate(&run_experiment(&cfg)?);
    for key in series_keys(&summaries) {
        let fit = fit_rate(&summaries, &key, cfg.tail_fraction)?;
        println!("gamma={:?}: slope {:.3}", key.gamma.unwrap_or(0.0), fit.fit.slope);
    }
    Ok(())
}
