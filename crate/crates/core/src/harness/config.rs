//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! model = weighted_dirichlet      # weighted_dirichlet | weighted_weak_signal
//!                                 # | sbm_binary | sparse_binary_dirichlet
//! n_grid = 300, 600, 1200, 2400
//! dims = 4, 5, 10
//! r = 5
//! noise = normal                  # normal | normal(0.1) | laplace | exponential | poisson
//! gamma_grid = 0, 0.25            # optional; rho = n^-gamma
//! replicates = 20
//! base_seed = 1
//! selection_rule = algebraic      # algebraic | magnitude
//! diagnostics = deloc             # any of deloc, semicircle, interlacing; or none
//! deloc_window = 10
//! alpha = 1, 1, 1, 1, 1           # Dirichlet parameter; defaults to r ones
//! sbm_within = 0.9
//! sbm_between = 0.1
//! tail_fraction = 0.5
//! workers = 1
//! timing = false
//! ```
//!
//! Unknown keys, duplicate keys and malformed values are reported with their
//! line number.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::embedding::SelectionRule;
use crate::error::{Error, Result};
use crate::generators::NoiseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    WeightedDirichlet,
    WeightedWeakSignal,
    SbmBinary,
    SparseBinaryDirichlet,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::WeightedDirichlet => "weighted_dirichlet",
            ModelKind::WeightedWeakSignal => "weighted_weak_signal",
            ModelKind::SbmBinary => "sbm_binary",
            ModelKind::SparseBinaryDirichlet => "sparse_binary_dirichlet",
        }
    }

    pub fn is_weighted(&self) -> bool {
        matches!(self, ModelKind::WeightedDirichlet | ModelKind::WeightedWeakSignal)
    }

    /// Binary models sit outside the proven delocalization setting; their
    /// diagnostics are conjecture support.
    pub fn evidence_label(&self) -> &'static str {
        if self.is_weighted() {
            "theorem-setting"
        } else {
            "conjecture-support"
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "weighted_dirichlet" => Ok(ModelKind::WeightedDirichlet),
            "weighted_weak_signal" => Ok(ModelKind::WeightedWeakSignal),
            "sbm_binary" => Ok(ModelKind::SbmBinary),
            "sparse_binary_dirichlet" => Ok(ModelKind::SparseBinaryDirichlet),
            other => Err(Error::param(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DiagnosticFlags {
    pub deloc: bool,
    pub semicircle: bool,
    pub interlacing: bool,
}

impl DiagnosticFlags {
    pub fn any(&self) -> bool {
        self.deloc || self.semicircle || self.interlacing
    }
}

/// Everything needed to reproduce a Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub n_grid: Vec<usize>,
    /// Embedding dimensions `d = r + k`.
    pub dims: Vec<usize>,
    pub r: usize,
    /// Edge noise for weighted models; ignored by binary models.
    pub noise: Option<NoiseModel>,
    /// `rho_n = n^-gamma` per entry; `None` means `rho = 1`.
    pub gamma_grid: Option<Vec<f64>>,
    pub replicates: usize,
    pub base_seed: u64,
    pub selection_rule: SelectionRule,
    pub diagnostics: DiagnosticFlags,
    pub deloc_window: usize,
    /// Dirichlet parameter for latent positions (or community proportions).
    pub alpha: Option<Vec<f64>>,
    pub sbm_within: f64,
    pub sbm_between: f64,
    pub tail_fraction: f64,
    /// Worker threads; `None` defers to `RDPG_WORKERS` or the core count.
    pub workers: Option<usize>,
    /// Record wall-clock `runtime_ms`. Off by default so CSVs are reproducible.
    pub timing: bool,
    /// Drop the edge noise of weighted models (`A = rho X X^T`). Test hook.
    #[doc(hidden)]
    pub noiseless: bool,
}

/// Desk-scale grid shared by all models.
pub const DESK_N_GRID: [usize; 4] = [300, 600, 1200, 2400];
pub const DESK_REPLICATES: usize = 20;

impl ExperimentConfig {
    /// Desk-scale defaults for a model family.
    pub fn desk(model: ModelKind) -> Self {
        let dims = match model {
            ModelKind::WeightedDirichlet => vec![4, 5, 6, 10, 20, 40],
            _ => vec![4, 5, 6, 7, 10, 20],
        };
        let noise = match model {
            ModelKind::WeightedDirichlet => Some(NoiseModel::Normal { sigma: 1.0 }),
            ModelKind::WeightedWeakSignal => Some(NoiseModel::Normal { sigma: 0.1 }),
            _ => None,
        };
        let gamma_grid = match model {
            ModelKind::SparseBinaryDirichlet => Some(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]),
            ModelKind::WeightedWeakSignal => Some(vec![0.0, 0.25, 0.5]),
            _ => None,
        };
        Self {
            model,
            n_grid: DESK_N_GRID.to_vec(),
            dims,
            r: 5,
            noise,
            gamma_grid,
            replicates: DESK_REPLICATES,
            base_seed: 1,
            selection_rule: SelectionRule::AlgebraicDescending,
            diagnostics: DiagnosticFlags::default(),
            deloc_window: 10,
            alpha: None,
            sbm_within: 0.9,
            sbm_between: 0.1,
            tail_fraction: 0.5,
            workers: None,
            timing: false,
            noiseless: false,
        }
    }

    /// Switch to the full grids of the original experiments (long runtime).
    pub fn full_scale(mut self) -> Self {
        match self.model {
            ModelKind::WeightedWeakSignal => {
                self.n_grid = (1..=8).map(|i| 1000 * i).collect();
                self.replicates = 40;
                self.dims = vec![4, 5, 6, 7, 10, 20];
            }
            ModelKind::WeightedDirichlet => {
                self.n_grid = (1..=26).map(|i| 300 * i).collect();
                self.replicates = 80;
                self.dims = vec![4, 5, 6, 10, 20, 40];
            }
            ModelKind::SbmBinary => {
                self.n_grid = (1..=26).map(|i| 300 * i).collect();
                self.replicates = 80;
                self.dims = vec![4, 5, 6, 7, 10, 20];
            }
            ModelKind::SparseBinaryDirichlet => {
                self.n_grid = (1..=26).map(|i| 300 * i).collect();
                self.replicates = 80;
                self.dims = vec![4, 5, 6, 7, 10, 20];
                self.gamma_grid = Some(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]);
            }
        }
        self
    }

    pub fn alpha_or_default(&self) -> Vec<f64> {
        self.alpha.clone().unwrap_or_else(|| vec![1.0; self.r])
    }

    /// Effective noise law for weighted models.
    pub fn weighted_noise(&self) -> NoiseModel {
        self.noise.unwrap_or(match self.model {
            ModelKind::WeightedWeakSignal => NoiseModel::Normal { sigma: 0.1 },
            _ => NoiseModel::Normal { sigma: 1.0 },
        })
    }

    /// Noise tag written to CSV: empty for binary models.
    pub fn noise_tag(&self) -> String {
        if !self.model.is_weighted() {
            String::new()
        } else if self.noiseless {
            "none".to_string()
        } else {
            self.weighted_noise().tag()
        }
    }

    pub fn gammas(&self) -> Vec<Option<f64>> {
        match &self.gamma_grid {
            Some(g) => g.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }

    pub fn expected_records(&self) -> usize {
        self.n_grid.len() * self.dims.len() * self.gammas().len() * self.replicates
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::param("n_grid must not be empty"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("n_grid must be strictly ascending"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates must be >= 1"));
        }
        if self.dims.is_empty() {
            return Err(Error::param("dims must not be empty"));
        }
        if self.r == 0 {
            return Err(Error::param("r must be >= 1"));
        }
        let n_min = self.n_grid[0];
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0 || d > n_min) {
            return Err(Error::param(format!("dimension {d} outside 1..={n_min}")));
        }
        if let Some(g) = &self.gamma_grid {
            if let Some(bad) = g.iter().find(|&&v| !(v >= 0.0 && v.is_finite())) {
                return Err(Error::param(format!("gamma must be >= 0, got {bad}")));
            }
            if self.model == ModelKind::SbmBinary {
                return Err(Error::param("sbm_binary does not take a gamma grid"));
            }
        }
        if let Some(a) = &self.alpha {
            if a.len() != self.r {
                return Err(Error::param(format!(
                    "alpha has {} entries but r = {}",
                    a.len(),
                    self.r
                )));
            }
        }
        if self.diagnostics.deloc && self.deloc_window == 0 {
            return Err(Error::param("deloc_window must be >= 1"));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::param("tail_fraction must be in (0, 1]"));
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parse the flat `key = value` format. `model` must be present; every
    /// other key overrides the desk default for that model.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                field: line.to_string(),
                msg: "expected `key = value`".to_string(),
            })?;
            let key = key.trim().to_string();
            if entries.iter().any(|(_, k, _)| *k == key) {
                return Err(Error::Config {
                    line: line_no,
                    field: key,
                    msg: "duplicate key".to_string(),
                });
            }
            entries.push((line_no, key, value.trim().to_string()));
        }

        let (model_line, _, model_value) =
            entries
                .iter()
                .find(|(_, k, _)| k == "model")
                .ok_or_else(|| Error::Config {
                    line: 0,
                    field: "model".to_string(),
                    msg: "missing required key".to_string(),
                })?;
        let model = ModelKind::from_str(model_value).map_err(|e| cfg_err(*model_line, "model", e))?;
        let mut cfg = Self::desk(model);

        for (line, key, value) in &entries {
            let line = *line;
            let v = value.as_str();
            let key_s = key.as_str();
            let err = |e: Error| cfg_err(line, key_s, e);
            match key_s {
                "model" => {}
                "n_grid" => cfg.n_grid = parse_list(v).map_err(err)?,
                "dims" => cfg.dims = parse_list(v).map_err(err)?,
                "r" => cfg.r = parse_one(v).map_err(err)?,
                "noise" => {
                    cfg.noise = match v {
                        "" | "none" => None,
                        other => Some(NoiseModel::parse(other).map_err(err)?),
                    }
                }
                "gamma_grid" => {
                    cfg.gamma_grid = match v {
                        "" | "none" => None,
                        other => Some(parse_list(other).map_err(err)?),
                    }
                }
                "replicates" => cfg.replicates = parse_one(v).map_err(err)?,
                "base_seed" => cfg.base_seed = parse_one(v).map_err(err)?,
                "selection_rule" => cfg.selection_rule = SelectionRule::from_str(v).map_err(err)?,
                "diagnostics" => cfg.diagnostics = parse_flags(v).map_err(err)?,
                "deloc_window" => cfg.deloc_window = parse_one(v).map_err(err)?,
                "alpha" => {
                    cfg.alpha = match v {
                        "" | "none" => None,
                        other => Some(parse_list(other).map_err(err)?),
                    }
                }
                "sbm_within" => cfg.sbm_within = parse_one(v).map_err(err)?,
                "sbm_between" => cfg.sbm_between = parse_one(v).map_err(err)?,
                "tail_fraction" => cfg.tail_fraction = parse_one(v).map_err(err)?,
                "workers" => cfg.workers = Some(parse_one(v).map_err(err)?),
                "timing" => cfg.timing = parse_one(v).map_err(err)?,
                other => {
                    return Err(Error::Config {
                        line,
                        field: other.to_string(),
                        msg: "unknown key".to_string(),
                    })
                }
            }
        }
        cfg.validate().map_err(|e| Error::Config {
            line: 0,
            field: "config".to_string(),
            msg: e.to_string(),
        })?;
        Ok(cfg)
    }

    /// Render in the file format accepted by [`ExperimentConfig::parse`].
    pub fn to_text(&self) -> String {
        let join = |v: &[String]| v.join(", ");
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("model", self.model.to_string());
        push(
            "n_grid",
            join(&self.n_grid.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
        );
        push(
            "dims",
            join(&self.dims.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
        );
        push("r", self.r.to_string());
        push("noise", self.noise.map_or("none".to_string(), |n| n.tag()));
        push(
            "gamma_grid",
            self.gamma_grid.as_ref().map_or("none".to_string(), |g| {
                join(&g.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            }),
        );
        push("replicates", self.replicates.to_string());
        push("base_seed", self.base_seed.to_string());
        push("selection_rule", self.selection_rule.to_string());
        let mut flags = Vec::new();
        if self.diagnostics.deloc {
            flags.push("deloc".to_string());
        }
        if self.diagnostics.semicircle {
            flags.push("semicircle".to_string());
        }
        if self.diagnostics.interlacing {
            flags.push("interlacing".to_string());
        }
        push(
            "diagnostics",
            if flags.is_empty() {
                "none".to_string()
            } else {
                join(&flags)
            },
        );
        push("deloc_window", self.deloc_window.to_string());
        push(
            "alpha",
            self.alpha.as_ref().map_or("none".to_string(), |a| {
                join(&a.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            }),
        );
        push("sbm_within", self.sbm_within.to_string());
        push("sbm_between", self.sbm_between.to_string());
        push("tail_fraction", self.tail_fraction.to_string());
        if let Some(w) = self.workers {
            push("workers", w.to_string());
        }
        push("timing", self.timing.to_string());
        out
    }
}

fn cfg_err(line: usize, field: &str, e: Error) -> Error {
    let msg = match e {
        Error::Parameter(m) => m,
        other => other.to_string(),
    };
    Error::Config {
        line,
        field: field.to_string(),
        msg,
    }
}

fn parse_one<T: FromStr>(v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::param(format!("cannot parse `{v}`")))
}

fn parse_list<T: FromStr>(v: &str) -> Result<Vec<T>> {
    if v.trim().is_empty() {
        return Err(Error::param("empty list"));
    }
    v.split(',').map(parse_one).collect()
}

fn parse_flags(v: &str) -> Result<DiagnosticFlags> {
    let mut flags = DiagnosticFlags::default();
    for item in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "none" => {}
            "deloc" => flags.deloc = true,
            "semicircle" => flags.semicircle = true,
            "interlacing" => flags.interlacing = true,
            other => return Err(Error::param(format!("unknown diagnostic `{other}`"))),
        }
    }
    Ok(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal() {
        let cfg =
            ExperimentConfig::parse("model = weighted_dirichlet\nn_grid = 100\ndims = 5\nreplicates = 2\n").unwrap();
        assert_eq!(cfg.n_grid, vec![100]);
        assert_eq!(cfg.dims, vec![5]);
        assert_eq!(cfg.replicates, 2);
        assert_eq!(cfg.expected_records(), 2);
    }

    #[test]
    fn round_trip_text() {
        let mut cfg = ExperimentConfig::desk(ModelKind::SparseBinaryDirichlet);
        cfg.diagnostics.deloc = true;
        cfg.alpha = Some(vec![1.0, 2.0, 1.0, 1.0, 0.5]);
        cfg.workers = Some(2);
        let back = ExperimentConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn errors_carry_line_and_field() {
        let text = "model = sbm_binary\n# comment\nreplicates = many\n";
        match ExperimentConfig::parse(text) {
            Err(Error::Config { line, field, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(field, "replicates");
            }
            other => panic!("{other:?}"),
        }
        match ExperimentConfig::parse("model = sbm_binary\nbogus = 1\n") {
            Err(Error::Config { line: 2, field, .. }) => assert_eq!(field, "bogus"),
            other => panic!("{other:?}"),
        }
        assert!(ExperimentConfig::parse("n_grid = 100\n").is_err());
        assert!(ExperimentConfig::parse("model = sbm_binary\nn_grid = 600, 300\n").is_err());
        assert!(ExperimentConfig::parse("model = sbm_binary\nno equals sign\n").is_err());
        assert!(ExperimentConfig::parse("model = nope\n").is_err());
    }

    #[test]
    fn full_scale_grids() {
        let cfg = ExperimentConfig::desk(ModelKind::WeightedDirichlet).full_scale();
        assert_eq!(cfg.n_grid.first(), Some(&300));
        assert_eq!(cfg.n_grid.last(), Some(&7800));
        assert_eq!(cfg.replicates, 80);
        assert_eq!(cfg.dims, vec![4, 5, 6, 10, 20, 40]);
    }
}
