//! Adding a rank-r matrix moves the eigenvalue counting function by at most r.
//!
//! cargo run --release --example interlacing

use faer::Mat;
use rdpg_ase::generators::wigner;
use rdpg_ase::linalg::sym_eigenvalues_desc;
use rdpg_ase::rmt::counting_gap;

fn ascending(m: &Mat<f64>) -> Result<Vec<f64>, rdpg_ase::error::Error> {
    let mut e = sym_eigenvalues_desc(m.as_ref())?;
    e.reverse();
    Ok(e)
}

fn main() -> Result<(), rdpg_ase::error::Error> {
    let n = 300;
    let h = wigner(n, 5)?.adjacency;
    for r in [1usize, 3] {
        // rank-r spike built from coordinate blocks
        let spike = Mat::from_fn(n, n, |i, j| {
            if i % r == j % r {
                4.0 / n as f64 * (1 + i % r) as f64
            } else {
                0.0
            }
        });
        let b = &h + &(&spike * faer::Scale(n as f64));
        let gap = counting_gap(&ascending(&h)?, &ascending(&b)?)?;
        println!("rank {r}: counting gap {gap} (bound {r})");
    }
    Ok(())
}
