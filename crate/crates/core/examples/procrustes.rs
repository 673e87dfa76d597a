//! Orthogonal Procrustes alignment of a rotated, perturbed copy.
//!
//! cargo run --release --example procrustes

use faer::Mat;
use rdpg_ase::metrics::{procrustes_align, two_inf_norm};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let n = 6;
    let x = Mat::from_fn(n, 2, |i, j| ((i * 3 + j * 5) % 7) as f64 / 7.0);
    let t = 0.7f64;
    let rot = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) | (1, 1) => t.cos(),
        (0, 1) => -t.sin(),
        _ => t.sin(),
    });
    let xhat = Mat::from_fn(n, 2, |i, j| (&x * &rot)[(i, j)] + 1e-3 * ((i + j) % 2) as f64);

    let w = procrustes_align(xhat.as_ref(), x.as_ref())?;
    let before = two_inf_norm((&xhat - &x).as_ref());
    let after = two_inf_norm((&(&xhat * &w) - &x).as_ref());
    println!("2,inf error before {before:.4}, after alignment {after:.6}");
    println!(
        "W = [[{:.4}, {:.4}], [{:.4}, {:.4}]]",
        w[(0, 0)],
        w[(0, 1)],
        w[(1, 0)],
        w[(1, 1)]
    );
    Ok(())
}
