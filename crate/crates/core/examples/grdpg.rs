//! Generalized RDPG with an indefinite signature and the magnitude-ordered
//! embedding that recovers it.
//!
//! cargo run --release --example grdpg

use faer::Mat;
use rdpg_ase::embedding::{ase, SelectionRule};
use rdpg_ase::generators::{sample_grdpg, LatentPositions};

fn main() -> Result<(), rdpg_ase::error::Error> {
    // two groups with disassortative structure: p = 1, q = 1
    let n = 400;
    let x = Mat::from_fn(n, 2, |i, j| match (i % 2, j) {
        (_, 0) => 0.6,
        (0, _) => 0.4,
        _ => -0.4,
    });
    let x = LatentPositions::explicit(x)?;
    let net = sample_grdpg(&x, 1, 1, 1.0, 9)?;
    println!("signature {:?}", net.signature);

    for rule in [SelectionRule::AlgebraicDescending, SelectionRule::MagnitudeDescending] {
        let emb = ase(net.adjacency.as_ref(), 2, rule)?;
        println!("{rule}: selected eigenvalues {:?}", emb.selected_eigenvalues);
    }
    Ok(())
}
