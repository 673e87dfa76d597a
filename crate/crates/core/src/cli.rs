//! Command-line interface for the `rdpg` binary.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 domain or
//! degeneracy refusal, 4 internal numerical-contract violation.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use faer::Mat;

use crate::embedding::{ase, full_spectrum, SelectionRule};
use crate::error::{Error, Result};
use crate::generators::{
    binary_rdpg, sample_dirichlet_latents, sample_grdpg, sample_sbm, weighted_rdpg, wigner, LatentPositions, Network,
    NoiseModel, SbmSpec,
};
use crate::harness::{
    aggregate, read_records, render_summary, run_trials, write_diagnostics, write_records, ExperimentConfig,
};
use crate::matrix_io::{load_matrix, save_matrix};
use crate::rmt;
use crate::seed::child_seed;

#[derive(Debug, Parser)]
#[command(
    name = "rdpg",
    version,
    about = "Random dot product graphs and misspecified spectral embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a network and write its adjacency matrix.
    Generate(GenerateArgs),
    /// Adjacency spectral embedding of a matrix file.
    Embed(EmbedArgs),
    /// Run a Monte Carlo experiment from a config file.
    Experiment(ExperimentArgs),
    /// Delocalization profile of trailing eigenvectors.
    Deloc(DelocArgs),
    /// Empirical Stieltjes transform against the semicircle law.
    Semicircle(SemicircleArgs),
    /// Aggregate a trial CSV and fit convergence rates.
    Rate(RateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelFlag {
    /// A = rho X X^T + E with Dirichlet latents.
    Weighted,
    /// Bernoulli(rho x_i^T x_j) with Dirichlet latents.
    Binary,
    /// Bernoulli(rho x_i^T I_pq x_j); needs --latents.
    Grdpg,
    /// Planted-partition SBM.
    Sbm,
    /// Symmetric standard normal matrix.
    Wigner,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "weighted")]
    pub model: ModelFlag,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Latent dimension (number of communities for sbm).
    #[arg(long, default_value_t = 5)]
    pub r: usize,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// normal, normal(SIGMA), laplace, exponential or poisson.
    #[arg(long, default_value = "normal")]
    pub noise: String,
    /// Dirichlet parameter, comma separated; defaults to r ones.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Latent positions file (required for grdpg).
    #[arg(long)]
    pub latents: Option<PathBuf>,
    /// Positive part of the grdpg signature.
    #[arg(long)]
    pub p: Option<usize>,
    /// Negative part of the grdpg signature.
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    #[arg(long, default_value_t = 0.9)]
    pub within: f64,
    #[arg(long, default_value_t = 0.1)]
    pub between: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the latent positions.
    #[arg(long)]
    pub latents_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "algebraic")]
    pub rule: SelectionRule,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-trial diagnostics CSV (when the config enables diagnostics).
    #[arg(long)]
    pub diagnostics_out: Option<PathBuf>,
    /// Use the full-size grids (hours of runtime).
    #[arg(long)]
    pub full_scale: bool,
    /// Worker threads; defaults to RDPG_WORKERS or the core count.
    #[arg(long, env = "RDPG_WORKERS")]
    pub workers: Option<usize>,
    /// Fill the runtime_ms column.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct DelocArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Read the matrix from a file instead of sampling one.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Signal rank to skip; defaults to --r (0 for wigner).
    #[arg(long)]
    pub skip: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SemicircleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Read a symmetric matrix; it is divided by sqrt(n) unless --no-scale.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub no_scale: bool,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub eta: f64,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub e_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub e_max: f64,
    #[arg(long, default_value_t = 121)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub tail_fraction: f64,
}

/// Parse `args` (including the program name), run, and return the exit code.
/// Errors are reported on standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a, out),
        Command::Embed(a) => cmd_embed(&a, out),
        Command::Experiment(a) => cmd_experiment(&a, out),
        Command::Deloc(a) => cmd_deloc(&a, out),
        Command::Semicircle(a) => cmd_semicircle(&a, out),
        Command::Rate(a) => cmd_rate(&a, out),
    }
}

fn flag_err(flag: &str, e: Error) -> Error {
    match e {
        Error::Parameter(m) => Error::Parameter(format!("--{flag}: {m}")),
        other => other,
    }
}

fn latents_for(m: &ModelArgs) -> Result<LatentPositions> {
    if let Some(path) = &m.latents {
        return LatentPositions::explicit(load_matrix(path)?.matrix);
    }
    let alpha = m.alpha.clone().unwrap_or_else(|| vec![1.0; m.r]);
    sample_dirichlet_latents(m.n, &alpha, child_seed(m.seed, "latents")).map_err(|e| flag_err("alpha", e))
}

/// Sample the network described by the model flags.
pub fn build_network(m: &ModelArgs) -> Result<(Network, Option<LatentPositions>)> {
    if m.n == 0 {
        return Err(Error::Parameter("--n: must be >= 1".to_string()));
    }
    let edges = child_seed(m.seed, "edges");
    match m.model {
        ModelFlag::Weighted => {
            let noise = NoiseModel::parse(&m.noise).map_err(|e| flag_err("noise", e))?;
            let x = latents_for(m)?;
            let net = weighted_rdpg(&x, m.rho, noise, edges).map_err(|e| flag_err("rho", e))?;
            Ok((net, Some(x)))
        }
        ModelFlag::Binary => {
            let x = latents_for(m)?;
            let net = binary_rdpg(&x, m.rho, edges).map_err(|e| flag_err("rho", e))?;
            Ok((net, Some(x)))
        }
        ModelFlag::Grdpg => {
            if m.latents.is_none() {
                return Err(Error::Parameter("--latents: required for grdpg".to_string()));
            }
            let x = latents_for(m)?;
            let p = m.p.unwrap_or(x.dim().saturating_sub(m.q));
            let net = sample_grdpg(&x, p, m.q, m.rho, edges).map_err(|e| flag_err("p", e))?;
            Ok((net, Some(x)))
        }
        ModelFlag::Sbm => {
            let alpha = m.alpha.clone().unwrap_or_else(|| vec![1.0; m.r]);
            let spec = SbmSpec::planted(m.n, alpha, m.within, m.between);
            let s = sample_sbm(&spec, m.seed).map_err(|e| flag_err("within/--between", e))?;
            Ok((s.network, Some(s.latents)))
        }
        ModelFlag::Wigner => Ok((wigner(m.n, m.seed)?, None)),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn cmd_generate<W: Write>(a: &GenerateArgs, out: &mut W) -> Result<()> {
    let (net, x) = build_network(&a.model)?;
    save_matrix(&a.out, &net.adjacency, net.kind.as_str())?;
    if let (Some(path), Some(x)) = (&a.latents_out, &x) {
        save_matrix(path, &x.matrix().to_owned(), "latent")?;
    }
    writeln!(
        out,
        "wrote {} n={} kind={} seed={}",
        a.out.display(),
        net.n(),
        net.kind.as_str(),
        a.model.seed
    )?;
    Ok(())
}

fn cmd_embed<W: Write>(a: &EmbedArgs, out: &mut W) -> Result<()> {
    let m = load_matrix(&a.input)?;
    let n = m.matrix.nrows();
    if a.d == 0 || a.d > n {
        return Err(Error::Parameter(format!("--d: must be in 1..={n}, got {}", a.d)));
    }
    let emb = ase(m.matrix.as_ref(), a.d, a.rule)?;
    save_matrix(&a.out, &emb.coords, "embedding")?;
    writeln!(out, "wrote {} n={} d={} rule={}", a.out.display(), n, a.d, a.rule)?;
    for (pos, lam) in emb.selected_positions.iter().zip(&emb.selected_eigenvalues) {
        writeln!(out, "eigenvalue {:>4} {:.12e}", pos + 1, lam)?;
    }
    Ok(())
}

fn cmd_experiment<W: Write>(a: &ExperimentArgs, out: &mut W) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(&a.config)?;
    if a.full_scale {
        cfg = cfg.full_scale();
    }
    if a.workers.is_some() {
        cfg.workers = a.workers;
    }
    cfg.timing |= a.timing;
    let run = run_trials(&cfg)?;
    write_records(create(&a.out)?, &run.records)?;
    if let Some(path) = &a.diagnostics_out {
        write_diagnostics(create(path)?, &run.diagnostics)?;
    }
    let summaries = aggregate(&run.records);
    out.write_all(render_summary(&cfg, &summaries).as_bytes())?;
    writeln!(out, "wrote {} records to {}", run.records.len(), a.out.display())?;
    Ok(())
}

fn deloc_source(a: &DelocArgs) -> Result<(Mat<f64>, usize)> {
    if let Some(path) = &a.input {
        return Ok((load_matrix(path)?.matrix, a.skip.unwrap_or(a.model.r)));
    }
    let (net, _) = build_network(&a.model)?;
    let default_skip = if a.model.model == ModelFlag::Wigner {
        0
    } else {
        a.model.r
    };
    Ok((net.adjacency, a.skip.unwrap_or(default_skip)))
}

fn cmd_deloc<W: Write>(a: &DelocArgs, out: &mut W) -> Result<()> {
    let (m, skip) = deloc_source(a)?;
    let n = m.nrows();
    if a.window == 0 || skip + a.window > n {
        return Err(Error::Parameter(format!(
            "--window: r + window = {} exceeds n = {n}",
            skip + a.window
        )));
    }
    let spec = full_spectrum(m.as_ref())?;
    let prof = rmt::deloc_profile(&spec, skip, a.window)?;
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        writeln!(w, "index,eigenvalue,max_abs_entry,scaled_max_abs_entry")?;
        let sq = (n as f64).sqrt();
        for (i, v) in prof.per_index_max.iter().enumerate() {
            let pos = skip + i;
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e}",
                pos + 1,
                spec.eigenvalues[pos],
                v,
                sq * v
            )?;
        }
        w.flush()?;
    }
    writeln!(
        out,
        "deloc n={} skip={} window={} scaled_max={:.6} log_n={:.6}",
        n,
        skip,
        a.window,
        prof.scaled_max,
        (n as f64).ln()
    )?;
    Ok(())
}

fn cmd_semicircle<W: Write>(a: &SemicircleArgs, out: &mut W) -> Result<()> {
    if !(a.eta > 0.0) {
        return Err(Error::Parameter(format!("--eta: must be > 0, got {}", a.eta)));
    }
    if a.points == 0 {
        return Err(Error::Parameter("--points: must be >= 1".to_string()));
    }
    let b = match &a.input {
        Some(path) => {
            let m = load_matrix(path)?.matrix;
            if a.no_scale {
                m
            } else {
                crate::linalg::scaled(m.as_ref(), 1.0 / (m.nrows() as f64).sqrt())
            }
        }
        None => {
            let (net, _) = build_network(&a.model)?;
            let h = rmt::rmt_scale(&net, true)?.h.expect("noise matrix requested");
            match a.model.model {
                // unit-variance entries already
                ModelFlag::Wigner => h,
                ModelFlag::Weighted => {
                    let var = NoiseModel::parse(&a.model.noise)?.variance();
                    crate::linalg::scaled(h.as_ref(), 1.0 / var.sqrt())
                }
                _ => {
                    return Err(Error::Parameter(
                        "--model: semicircle samples support wigner and weighted; use --input otherwise".to_string(),
                    ))
                }
            }
        }
    };
    let curve = rmt::semicircle_error_curve(b.as_ref(), (a.e_min, a.e_max), a.eta, a.points)?;
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        writeln!(
            w,
            "energy,eta,re_empirical,im_empirical,re_semicircle,im_semicircle,abs_error"
        )?;
        for ((z, m), s) in curve.grid.iter().zip(&curve.empirical).zip(&curve.reference) {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                z.re,
                z.im,
                m.re,
                m.im,
                s.re,
                s.im,
                (m - s).norm()
            )?;
        }
        w.flush()?;
    }
    writeln!(
        out,
        "semicircle n={} eta={} points={} sup_error={:.6}",
        b.nrows(),
        a.eta,
        a.points,
        curve.sup_error
    )?;
    Ok(())
}

fn cmd_rate<W: Write>(a: &RateArgs, out: &mut W) -> Result<()> {
    if !(a.tail_fraction > 0.0 && a.tail_fraction <= 1.0) {
        return Err(Error::Parameter("--tail-fraction: must be in (0, 1]".to_string()));
    }
    let records = read_records(File::open(&a.input)?)?;
    let summaries = aggregate(&records);
    out.write_all(crate::harness::render_table(&summaries, a.tail_fraction).as_bytes())?;
    Ok(())
}
