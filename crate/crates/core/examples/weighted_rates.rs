//! Error of the embedding against n for a well-specified (d = r) and an
//! over-specified (d = 2r) dimension on weighted networks.
//!
//! cargo run --release --example weighted_rates

use rdpg_ase::harness::{aggregate, fit_rate, run_experiment, ExperimentConfig, ModelKind, SeriesKey};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let mut cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet);
    cfg.n_grid = vec![200, 400, 800, 1600];
    cfg.dims = vec![5, 10];
    cfg.replicates = 8;

    let summaries = aggregate(&run_experiment(&cfg)?);
    for s in &summaries {
        println!(
            "d={:>2} n={:>5} mean={:.4} +/- {:.4}",
            s.d,
            s.n,
            s.mean.unwrap_or(f64::NAN),
            s.errbar.unwrap_or(f64::NAN)
        );
    }
    for &d in &cfg.dims {
        let key = SeriesKey {
            model: cfg.model.as_str().into(),
            noise: cfg.noise_tag(),
            gamma: None,
            d,
        };
        let fit = fit_rate(&summaries, &key, cfg.tail_fraction)?;
        println!("d={d}: log-log slope {:.3} over n = {:?}", fit.fit.slope, fit.ns);
    }
    Ok(())
}
