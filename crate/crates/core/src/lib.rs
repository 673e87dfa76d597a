pub mod cli;
pub mod embedding;
pub mod error;
pub mod generators;
pub mod harness;
pub mod linalg;
pub mod matrix_io;
pub mod metrics;
pub mod rmt;
pub mod seed;
