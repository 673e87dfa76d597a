//! Trial execution.
//!
//! One trial is one network draw at `(model, n, gamma, replicate)`. Its
//! spectrum is computed once and reused for every embedding dimension in
//! the config, so a trial produces `dims.len()` records.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ModelKind};
use super::record::{format_float, TrialRecord};
use crate::embedding::{ase_from_spectrum, full_spectrum, Spectrum};
use crate::error::{Error, Result};
use crate::generators::{
    binary_rdpg, noiseless_rdpg, sample_dirichlet_latents, sample_sbm, weighted_rdpg, LatentPositions, Network, SbmSpec,
};
use crate::linalg;
use crate::metrics::{misspec_error, overfit_split};
use crate::rmt;
use crate::seed::{child_seed, TrialKey};

/// Slack allowed in the over-specified split inequality, relative to its
/// right-hand side.
const SPLIT_SLACK: f64 = 1e-10;

/// Per-trial random-matrix diagnostics (side output).
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDiagnostics {
    pub model: String,
    pub n: usize,
    pub gamma: Option<f64>,
    pub replicate: usize,
    pub seed: u64,
    /// `theorem-setting` or `conjecture-support`.
    pub label: String,
    pub deloc_scaled_max: Option<f64>,
    pub deloc_log_bound: Option<f64>,
    pub semicircle_sup_error: Option<f64>,
    pub interlacing_gap: Option<usize>,
    pub interlacing_bound: Option<usize>,
    pub note: String,
}

pub const DIAGNOSTICS_HEADER: [&str; 12] = [
    "model",
    "n",
    "gamma",
    "replicate",
    "seed",
    "label",
    "deloc_scaled_max",
    "deloc_log_bound",
    "semicircle_sup_error",
    "interlacing_gap",
    "interlacing_bound",
    "note",
];

/// Records sorted by condition and replicate, plus optional diagnostics.
#[derive(Debug, Clone, Default)]
pub struct ExperimentRun {
    pub records: Vec<TrialRecord>,
    pub diagnostics: Vec<TrialDiagnostics>,
}

/// Parameters of one semicircle diagnostic sweep.
pub const SEMICIRCLE_ETA: f64 = 0.5;
pub const SEMICIRCLE_POINTS: usize = 121;

#[derive(Debug, Clone, Copy)]
struct TrialTask {
    n: usize,
    gamma: Option<f64>,
    replicate: usize,
}

/// A generated network with the latent positions it was drawn from.
pub struct TrialDraw {
    pub network: Network,
    pub latents: LatentPositions,
    pub rho: f64,
    pub seed: u64,
}

/// Worker count: config value, else `RDPG_WORKERS`, else the core count.
pub fn resolve_workers(cfg: &ExperimentConfig) -> usize {
    cfg.workers
        .or_else(|| std::env::var("RDPG_WORKERS").ok().and_then(|v| v.parse().ok()))
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

pub fn trial_seed(cfg: &ExperimentConfig, n: usize, gamma: Option<f64>, replicate: usize) -> u64 {
    TrialKey {
        base_seed: cfg.base_seed,
        model: cfg.model.as_str(),
        n,
        noise: &cfg.noise_tag(),
        gamma,
        replicate,
    }
    .derive()
}

pub fn rho_for(n: usize, gamma: Option<f64>) -> f64 {
    gamma.map_or(1.0, |g| (n as f64).powf(-g))
}

/// Draw the network for one trial exactly as [`run_trials`] does.
pub fn draw_trial(cfg: &ExperimentConfig, n: usize, gamma: Option<f64>, replicate: usize) -> Result<TrialDraw> {
    let seed = trial_seed(cfg, n, gamma, replicate);
    let rho = rho_for(n, gamma);
    let alpha = cfg.alpha_or_default();
    let (network, latents) = match cfg.model {
        ModelKind::WeightedDirichlet | ModelKind::WeightedWeakSignal => {
            let x = sample_dirichlet_latents(n, &alpha, child_seed(seed, "latents"))?;
            let edges = child_seed(seed, "edges");
            let net = if cfg.noiseless {
                noiseless_rdpg(&x, rho, edges)?
            } else {
                weighted_rdpg(&x, rho, cfg.weighted_noise(), edges)?
            };
            (net, x)
        }
        ModelKind::SparseBinaryDirichlet => {
            let x = sample_dirichlet_latents(n, &alpha, child_seed(seed, "latents"))?;
            let net = binary_rdpg(&x, rho, child_seed(seed, "edges"))?;
            (net, x)
        }
        ModelKind::SbmBinary => {
            let spec = SbmSpec::planted(n, alpha, cfg.sbm_within, cfg.sbm_between);
            let s = sample_sbm(&spec, seed)?;
            (s.network, s.latents)
        }
    };
    Ok(TrialDraw {
        network,
        latents,
        rho,
        seed,
    })
}

/// Run every trial of `cfg` and return the records.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    Ok(run_trials(cfg)?.records)
}

/// Run every trial of `cfg`, with diagnostics when enabled.
///
/// Output is independent of the worker count: seeds depend only on trial
/// coordinates and records are sorted before returning.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    cfg.validate()?;
    let mut tasks = Vec::with_capacity(cfg.n_grid.len() * cfg.replicates);
    for gamma in cfg.gammas() {
        for &n in &cfg.n_grid {
            for replicate in 0..cfg.replicates {
                tasks.push(TrialTask { n, gamma, replicate });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_workers(cfg))
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<(Vec<TrialRecord>, Option<TrialDiagnostics>)> =
        pool.install(|| tasks.par_iter().map(|t| run_one(cfg, *t)).collect::<Result<Vec<_>>>())?;

    let mut run = ExperimentRun::default();
    for (recs, diag) in outcomes {
        run.records.extend(recs);
        run.diagnostics.extend(diag);
    }
    run.records.sort_by_key(TrialRecord::sort_key);
    run.diagnostics
        .sort_by_key(|d| (d.gamma.map_or(0, f64::to_bits), d.n, d.replicate));
    Ok(run)
}

fn base_record(cfg: &ExperimentConfig, t: TrialTask, d: usize, rho: f64, seed: u64) -> TrialRecord {
    TrialRecord {
        model: cfg.model.as_str().to_string(),
        n: t.n,
        d,
        r: cfg.r,
        k: d as i64 - cfg.r as i64,
        noise: cfg.noise_tag(),
        gamma: t.gamma,
        rho,
        replicate: t.replicate,
        seed,
        err_2inf: None,
        err_frob: None,
        lower_bound: None,
        deloc_scaled_max: None,
        runtime_ms: None,
        status: "ok".to_string(),
    }
}

// Failures that only invalidate the trial, not the experiment.
fn is_trial_failure(e: &Error) -> bool {
    matches!(e, Error::ModelValidity { .. } | Error::Numerical(_))
}

fn run_one(cfg: &ExperimentConfig, t: TrialTask) -> Result<(Vec<TrialRecord>, Option<TrialDiagnostics>)> {
    let start = Instant::now();
    let seed = trial_seed(cfg, t.n, t.gamma, t.replicate);
    let rho = rho_for(t.n, t.gamma);
    let failed = |reason: &Error| {
        let recs = cfg
            .dims
            .iter()
            .map(|&d| {
                let mut rec = base_record(cfg, t, d, rho, seed);
                rec.status = format!("failed: {reason}");
                rec
            })
            .collect();
        Ok((recs, None))
    };

    let draw = match draw_trial(cfg, t.n, t.gamma, t.replicate) {
        Ok(d) => d,
        Err(e) if is_trial_failure(&e) => return failed(&e),
        Err(e) => return Err(e),
    };
    let spec = match full_spectrum(draw.network.adjacency.as_ref()) {
        Ok(s) => s,
        Err(e) if is_trial_failure(&e) => return failed(&e),
        Err(e) => return Err(e),
    };
    let shared_ms = start.elapsed().as_secs_f64() * 1e3;

    let diagnostics = if cfg.diagnostics.any() {
        Some(trial_diagnostics(cfg, t, &draw, &spec)?)
    } else {
        None
    };
    let deloc = diagnostics.as_ref().and_then(|d| d.deloc_scaled_max);

    let mut records = Vec::with_capacity(cfg.dims.len());
    for &d in &cfg.dims {
        let t0 = Instant::now();
        let mut rec = base_record(cfg, t, d, rho, seed);
        let emb = ase_from_spectrum(&spec, d, cfg.selection_rule)?;
        let err = misspec_error(&emb, &draw.latents, rho, cfg.r)?;
        if let Some(lb) = err.lower_bound {
            if err.error_2inf < lb {
                return Err(Error::contract(format!(
                    "error {} below truncation bound {} at n = {}, d = {d}, seed {seed}",
                    err.error_2inf, lb, t.n
                )));
            }
        }
        if err.k > 0 {
            let split = overfit_split(&emb, &draw.latents, rho, cfg.r)?;
            let rhs = split.head + split.trailing;
            if split.total > rhs * (1.0 + SPLIT_SLACK) {
                return Err(Error::contract(format!(
                    "split inequality violated: {} > {} + {}",
                    split.total, split.head, split.trailing
                )));
            }
        }
        rec.err_2inf = Some(err.error_2inf);
        rec.err_frob = Some(err.error_frob);
        rec.lower_bound = err.lower_bound;
        rec.deloc_scaled_max = deloc;
        if cfg.timing {
            rec.runtime_ms = Some(shared_ms + t0.elapsed().as_secs_f64() * 1e3);
        }
        records.push(rec);
    }
    Ok((records, diagnostics))
}

fn trial_diagnostics(
    cfg: &ExperimentConfig,
    t: TrialTask,
    draw: &TrialDraw,
    spec: &Spectrum,
) -> Result<TrialDiagnostics> {
    let n = t.n;
    let mut out = TrialDiagnostics {
        model: cfg.model.as_str().to_string(),
        n,
        gamma: t.gamma,
        replicate: t.replicate,
        seed: draw.seed,
        label: cfg.model.evidence_label().to_string(),
        deloc_scaled_max: None,
        deloc_log_bound: None,
        semicircle_sup_error: None,
        interlacing_gap: None,
        interlacing_bound: None,
        note: String::new(),
    };
    let mut notes = Vec::new();

    if cfg.diagnostics.deloc {
        if cfg.r + cfg.deloc_window > n {
            notes.push("deloc window exceeds n".to_string());
        } else {
            match rmt::deloc_profile(spec, cfg.r, cfg.deloc_window) {
                Ok(p) => {
                    out.deloc_scaled_max = Some(p.scaled_max);
                    out.deloc_log_bound = Some((n as f64).ln());
                }
                Err(Error::Degenerate(m)) => notes.push(format!("deloc skipped: {m}")),
                Err(e) => return Err(e),
            }
        }
    }

    if cfg.diagnostics.semicircle || cfg.diagnostics.interlacing {
        let scaled = rmt::rmt_scale(&draw.network, true)?;
        let h = scaled.h.expect("noise matrix requested");
        let mut eigs_h = linalg::sym_eigenvalues_desc(h.as_ref())?;

        if cfg.diagnostics.interlacing {
            let f = 1.0 / (n as f64).sqrt();
            let mut eigs_b: Vec<f64> = spec.eigenvalues.iter().map(|v| v * f).collect();
            eigs_b.reverse();
            let mut asc_h = eigs_h.clone();
            asc_h.reverse();
            let rank = draw.network.true_rank.unwrap_or(cfg.r);
            out.interlacing_gap = Some(rmt::counting_gap(&asc_h, &eigs_b)?);
            out.interlacing_bound = Some(rank);
        }

        if cfg.diagnostics.semicircle {
            let var = mean_entry_variance(cfg, &draw.network);
            if var > 0.0 {
                let s = 1.0 / var.sqrt();
                eigs_h.iter_mut().for_each(|v| *v *= s);
                let curve = rmt::semicircle_error_curve_from_eigenvalues(
                    &eigs_h,
                    (-rmt::SPECTRAL_WINDOW, rmt::SPECTRAL_WINDOW),
                    SEMICIRCLE_ETA,
                    SEMICIRCLE_POINTS,
                )?;
                out.semicircle_sup_error = Some(curve.sup_error);
            } else {
                notes.push("semicircle skipped: zero noise".to_string());
            }
        }
    }
    out.note = notes.join("; ");
    Ok(out)
}

/// Average off-diagonal entry variance of `A - P`, used to put the noise
/// matrix on the unit semicircle scale.
fn mean_entry_variance(cfg: &ExperimentConfig, net: &Network) -> f64 {
    if cfg.model.is_weighted() {
        if cfg.noiseless {
            0.0
        } else {
            cfg.weighted_noise().variance()
        }
    } else {
        let p = net.expectation.as_ref().expect("binary networks carry expectations");
        let n = p.nrows();
        if n < 2 {
            return 0.0;
        }
        let mut s = 0.0;
        for j in 0..n {
            for i in j + 1..n {
                let v = p[(i, j)];
                s += v * (1.0 - v);
            }
        }
        s / (n * (n - 1) / 2) as f64
    }
}

pub fn write_diagnostics<W: Write>(out: W, diags: &[TrialDiagnostics]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(DIAGNOSTICS_HEADER)?;
    let f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    let u = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for d in diags {
        w.write_record([
            d.model.clone(),
            d.n.to_string(),
            f(d.gamma),
            d.replicate.to_string(),
            d.seed.to_string(),
            d.label.clone(),
            f(d.deloc_scaled_max),
            f(d.deloc_log_bound),
            f(d.semicircle_sup_error),
            u(d.interlacing_gap),
            u(d.interlacing_bound),
            d.note.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
