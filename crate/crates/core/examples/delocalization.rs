//! Largest entries of trailing eigenvectors of a weighted network, next to
//! a matrix with one planted localized eigenvector.
//!
//! cargo run --release --example delocalization

use faer::Mat;
use rdpg_ase::embedding::full_spectrum;
use rdpg_ase::generators::{sample_dirichlet_latents, weighted_rdpg, wigner, NoiseModel};
use rdpg_ase::rmt::deloc_profile;

fn main() -> Result<(), rdpg_ase::error::Error> {
    for n in [250, 500, 1000] {
        let x = sample_dirichlet_latents(n, &[1.0; 5], 1)?;
        let net = weighted_rdpg(&x, 1.0, NoiseModel::normal(1.0)?, 2)?;
        let prof = deloc_profile(&full_spectrum(net.adjacency.as_ref())?, 5, 10)?;
        println!(
            "n={n:>4} sqrt(n) max = {:.3}   8 log n = {:.3}",
            prof.scaled_max,
            8.0 * (n as f64).ln()
        );
    }

    // noise plus a large entry on one diagonal position: its eigenvector
    // concentrates on that coordinate
    let n = 500;
    let w = wigner(n, 3)?;
    let spike = 40.0 * (n as f64).sqrt();
    let a = Mat::from_fn(n, n, |i, j| {
        w.adjacency[(i, j)] + if i == 0 && j == 0 { spike } else { 0.0 }
    });
    let prof = deloc_profile(&full_spectrum(a.as_ref())?, 0, 1)?;
    println!(
        "localized: sqrt(n) max = {:.3} vs sqrt(n)/2 = {:.3}",
        prof.scaled_max,
        (n as f64).sqrt() / 2.0
    );
    Ok(())
}
