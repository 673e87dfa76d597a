//! Error against embedding dimension at fixed n, with the growth exponent
//! in the number of surplus dimensions k = d - r.
//!
//! cargo run --release --example dimension_sweep

use rdpg_ase::generators::NoiseModel;
use rdpg_ase::harness::{aggregate, dim_sweep, run_experiment, ExperimentConfig, ModelKind};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let mut cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet);
    cfg.n_grid = vec![800];
    cfg.dims = (3..=30).collect();
    cfg.noise = Some(NoiseModel::ExponentialCentered);
    cfg.replicates = 4;

    let sweep = dim_sweep(&aggregate(&run_experiment(&cfg)?), 800)?;
    for (d, err) in &sweep.curve {
        println!("d={d:>2} k={:>3} err={err:.4}", *d as i64 - sweep.r as i64);
    }
    println!("smallest error at d = {}", sweep.argmin_d);
    println!("growth exponent in k: {:.3}", sweep.k_fit.slope);
    Ok(())
}
