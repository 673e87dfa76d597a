//! Stieltjes transform of a Wigner matrix against the semicircle law on the
//! line Im z = eta.
//!
//! cargo run --release --example semicircle

use rdpg_ase::generators::wigner;
use rdpg_ase::linalg::scaled;
use rdpg_ase::rmt::{semicircle_error_curve, semicircle_transform};

fn main() -> Result<(), rdpg_ase::error::Error> {
    for n in [250, 500, 1000] {
        let w = wigner(n, 11)?;
        let b = scaled(w.adjacency.as_ref(), 1.0 / (n as f64).sqrt());
        let curve = semicircle_error_curve(b.as_ref(), (-3.0, 3.0), 0.5, 121)?;
        println!("n={n:>4} sup error {:.5}", curve.sup_error);
    }
    let m = semicircle_transform(faer::c64::new(0.0, 1.0))?;
    println!("m_sc(i) = {:.6} + {:.6}i", m.re, m.im);
    Ok(())
}
