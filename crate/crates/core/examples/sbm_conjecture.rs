//! Binary stochastic blockmodel (0.9 within, 0.1 between, five communities).
//! Binary networks are outside the proven delocalization setting, so these
//! numbers are labelled conjecture support.
//!
//! cargo run --release --example sbm_conjecture

use rdpg_ase::harness::{aggregate, render_summary, run_trials, ExperimentConfig, ModelKind};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let mut cfg = ExperimentConfig::desk(ModelKind::SbmBinary);
    cfg.n_grid = vec![200, 400, 800, 1600];
    cfg.dims = vec![5, 10];
    cfg.replicates = 6;
    cfg.diagnostics.deloc = true;

    let run = run_trials(&cfg)?;
    print!("{}", render_summary(&cfg, &aggregate(&run.records)));
    for d in run.diagnostics.iter().filter(|d| d.replicate == 0) {
        println!(
            "[{}] n={} sqrt(n) max trailing entry = {:.3} (log n = {:.3})",
            d.label,
            d.n,
            d.deloc_scaled_max.unwrap_or(f64::NAN),
            (d.n as f64).ln()
        );
    }
    Ok(())
}
