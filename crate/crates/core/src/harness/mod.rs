//! Monte Carlo experiments: configuration, execution, CSV output and rate fits.

mod config;
mod record;
mod run;
mod stats;

pub use config::{DiagnosticFlags, ExperimentConfig, ModelKind, DESK_N_GRID, DESK_REPLICATES};
pub use record::{format_float, read_records, records_to_string, write_records, TrialRecord, CSV_HEADER};
pub use run::{
    draw_trial, resolve_workers, rho_for, run_experiment, run_trials, trial_seed, write_diagnostics, ExperimentRun,
    TrialDiagnostics, TrialDraw, DIAGNOSTICS_HEADER, SEMICIRCLE_ETA, SEMICIRCLE_POINTS,
};
pub use stats::{
    aggregate, dim_sweep, fit_rate, least_squares, mean_sem, render_summary, render_table, series_keys, tail_length,
    ConditionSummary, DimSweep, LineFit, RateFit, SeriesKey,
};
