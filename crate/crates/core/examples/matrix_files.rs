//! Write a network and its latent positions to the plain-text matrix format
//! and read them back.
//!
//! cargo run --release --example matrix_files

use rdpg_ase::generators::{sample_sbm, SbmSpec};
use rdpg_ase::matrix_io::{read_matrix, write_matrix};

fn main() -> Result<(), rdpg_ase::error::Error> {
    let sample = sample_sbm(&SbmSpec::planted(8, vec![1.0, 1.0], 0.9, 0.1), 7)?;
    let mut buf = Vec::new();
    write_matrix(&mut buf, &sample.network.adjacency, sample.network.kind.as_str())?;
    print!("{}", String::from_utf8_lossy(&buf));

    let back = read_matrix(buf.as_slice())?;
    assert_eq!(back.matrix, sample.network.adjacency);
    println!("memberships {:?}", sample.memberships);
    Ok(())
}
