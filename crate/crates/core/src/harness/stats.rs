//! Aggregation of trial records and log-log rate fits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::config::ExperimentConfig;
use super::record::TrialRecord;
use crate::error::{Error, Result};

/// Mean and standard error of the 2,∞ error at one `(model, noise, gamma, d, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSummary {
    pub model: String,
    pub noise: String,
    pub gamma: Option<f64>,
    pub d: usize,
    pub r: usize,
    pub n: usize,
    /// Successful replicates.
    pub count: usize,
    pub failed: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation over `sqrt(count)`; `None` when `count < 2`.
    pub sem: Option<f64>,
    /// Two standard errors.
    pub errbar: Option<f64>,
    pub mean_lower_bound: Option<f64>,
    pub mean_deloc: Option<f64>,
}

/// A curve of condition means over `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesKey {
    pub model: String,
    pub noise: String,
    pub gamma: Option<f64>,
    pub d: usize,
}

impl SeriesKey {
    pub fn of(s: &ConditionSummary) -> Self {
        Self {
            model: s.model.clone(),
            noise: s.noise.clone(),
            gamma: s.gamma,
            d: s.d,
        }
    }

    fn matches(&self, s: &ConditionSummary) -> bool {
        self.model == s.model
            && self.noise == s.noise
            && self.gamma.map(f64::to_bits) == s.gamma.map(f64::to_bits)
            && self.d == s.d
    }
}

/// Ordinary least squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// `None` with only two points.
    pub slope_stderr: Option<f64>,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub key: SeriesKey,
    pub fit: LineFit,
    /// The `n` values that entered the fit.
    pub ns: Vec<usize>,
}

/// Mean and standard error of the mean.
pub fn mean_sem(values: &[f64]) -> Option<(f64, Option<f64>)> {
    let m = values.len();
    if m == 0 {
        return None;
    }
    // shifted by the first value; constant inputs give exactly zero spread
    let shift = values[0];
    let mean = shift + values.iter().map(|v| v - shift).sum::<f64>() / m as f64;
    if m < 2 {
        return Some((mean, None));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    Some((mean, Some((var / m as f64).sqrt())))
}

fn mean(values: &[f64]) -> Option<f64> {
    mean_sem(values).map(|(m, _)| m)
}

pub fn aggregate(records: &[TrialRecord]) -> Vec<ConditionSummary> {
    type Key = (String, String, u64, usize, usize, usize);
    let mut groups: BTreeMap<Key, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (
            r.model.clone(),
            r.noise.clone(),
            r.gamma.map_or(0, f64::to_bits),
            r.d,
            r.n,
            r.r,
        );
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let first = rs[0];
            let ok: Vec<&TrialRecord> = rs.iter().copied().filter(|r| r.is_ok()).collect();
            let errs: Vec<f64> = ok.iter().filter_map(|r| r.err_2inf).collect();
            let lbs: Vec<f64> = ok.iter().filter_map(|r| r.lower_bound).collect();
            let delocs: Vec<f64> = ok.iter().filter_map(|r| r.deloc_scaled_max).collect();
            let ms = mean_sem(&errs);
            ConditionSummary {
                model: first.model.clone(),
                noise: first.noise.clone(),
                gamma: first.gamma,
                d: first.d,
                r: first.r,
                n: first.n,
                count: errs.len(),
                failed: rs.len() - ok.len(),
                mean: ms.map(|(m, _)| m),
                sem: ms.and_then(|(_, s)| s),
                errbar: ms.and_then(|(_, s)| s).map(|s| 2.0 * s),
                mean_lower_bound: mean(&lbs),
                mean_deloc: mean(&delocs),
            }
        })
        .collect()
}

/// Distinct series in `summaries`, in first-seen order.
pub fn series_keys(summaries: &[ConditionSummary]) -> Vec<SeriesKey> {
    let mut keys: Vec<SeriesKey> = Vec::new();
    for s in summaries {
        let k = SeriesKey::of(s);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let m = xs.len();
    if m != ys.len() {
        return Err(Error::Fit(format!("{} x values but {} y values", m, ys.len())));
    }
    if m < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {m}")));
    }
    let mx = xs.iter().sum::<f64>() / m as f64;
    let my = ys.iter().sum::<f64>() / m as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("x values are all equal".to_string()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = (m > 2).then(|| {
        let ssr: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (ssr / (m - 2) as f64 / sxx).sqrt()
    });
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
        points: m,
    })
}

fn log_points(pairs: &[(f64, f64)], what: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    if let Some((x, y)) = pairs.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::Fit(format!(
            "{what}: nonpositive point ({x}, {y}) on a log scale"
        )));
    }
    Ok(pairs.iter().map(|(x, y)| (x.ln(), y.ln())).unzip())
}

/// Points kept by a tail fit over `len` grid values: the last
/// `max(3, ceil(fraction * len))`.
pub fn tail_length(len: usize, tail_fraction: f64) -> usize {
    ((tail_fraction * len as f64).ceil() as usize).max(3).min(len)
}

/// Slope of `log mean` against `log n` over the tail of the series.
pub fn fit_rate(summaries: &[ConditionSummary], key: &SeriesKey, tail_fraction: f64) -> Result<RateFit> {
    let mut pts: Vec<(usize, f64)> = summaries
        .iter()
        .filter(|s| key.matches(s))
        .filter_map(|s| s.mean.map(|m| (s.n, m)))
        .collect();
    pts.sort_by_key(|p| p.0);
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "series {} d={} has {} points; a rate fit needs at least 3",
            key.model,
            key.d,
            pts.len()
        )));
    }
    let tail = &pts[pts.len() - tail_length(pts.len(), tail_fraction)..];
    let pairs: Vec<(f64, f64)> = tail.iter().map(|&(n, m)| (n as f64, m)).collect();
    let (xs, ys) = log_points(&pairs, "rate fit")?;
    Ok(RateFit {
        key: key.clone(),
        fit: least_squares(&xs, &ys)?,
        ns: tail.iter().map(|p| p.0).collect(),
    })
}

/// Mean error against `d` at a fixed `n`, with the growth exponent in `k = d - r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimSweep {
    pub n: usize,
    pub r: usize,
    /// `(d, mean error)` ordered by `d`.
    pub curve: Vec<(usize, f64)>,
    /// Slope of `log mean` against `log k` over `d > r`.
    pub k_fit: LineFit,
    pub argmin_d: usize,
}

pub fn dim_sweep(summaries: &[ConditionSummary], n: usize) -> Result<DimSweep> {
    let at_n: Vec<&ConditionSummary> = summaries.iter().filter(|s| s.n == n).collect();
    let Some(first) = at_n.first() else {
        return Err(Error::Fit(format!("no conditions at n = {n}")));
    };
    if at_n
        .iter()
        .any(|s| s.model != first.model || s.noise != first.noise || s.gamma != first.gamma)
    {
        return Err(Error::Fit(
            "dimension sweep needs a single model/noise/gamma".to_string(),
        ));
    }
    let r = first.r;
    let mut curve: Vec<(usize, f64)> = at_n.iter().filter_map(|s| s.mean.map(|m| (s.d, m))).collect();
    curve.sort_by_key(|p| p.0);
    let argmin_d = curve
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|p| p.0)
        .ok_or_else(|| Error::Fit("no successful trials".to_string()))?;
    let over: Vec<(f64, f64)> = curve
        .iter()
        .filter(|p| p.0 > r)
        .map(|&(d, m)| ((d - r) as f64, m))
        .collect();
    let (xs, ys) = log_points(&over, "dimension sweep")?;
    Ok(DimSweep {
        n,
        r,
        curve,
        k_fit: least_squares(&xs, &ys)?,
        argmin_d,
    })
}

/// Experiment header line followed by [`render_table`].
pub fn render_summary(cfg: &ExperimentConfig, summaries: &[ConditionSummary]) -> String {
    let noise = cfg.noise_tag();
    format!(
        "# model={} noise={} r={} replicates={} label={}\n{}",
        cfg.model,
        if noise.is_empty() { "-" } else { &noise },
        cfg.r,
        cfg.replicates,
        cfg.model.evidence_label(),
        render_table(summaries, cfg.tail_fraction)
    )
}

/// Fixed-width table of condition means followed by tail rate fits.
pub fn render_table(summaries: &[ConditionSummary], tail_fraction: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>8} {:>4} {:>7} {:>5} {:>6} {:>14} {:>14} {:>14}",
        "model", "gamma", "d", "n", "ok", "failed", "mean_err_2inf", "errbar_2sem", "lower_bound"
    );
    let na = |v: Option<f64>| v.map_or("NA".to_string(), |x| format!("{x:.6e}"));
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<24} {:>8} {:>4} {:>7} {:>5} {:>6} {:>14} {:>14} {:>14}",
            s.model,
            s.gamma.map_or("-".to_string(), |g| format!("{g}")),
            s.d,
            s.n,
            s.count,
            s.failed,
            na(s.mean),
            na(s.errbar),
            na(s.mean_lower_bound)
        );
    }
    let _ = writeln!(out, "# rate fits: log mean error vs log n over the tail");
    for key in series_keys(summaries) {
        let g = key.gamma.map_or("-".to_string(), |g| format!("{g}"));
        match fit_rate(summaries, &key, tail_fraction) {
            Ok(f) => {
                let _ = writeln!(
                    out,
                    "rate model={} noise={} gamma={g} d={} slope={:.4} stderr={} points={}",
                    key.model,
                    if key.noise.is_empty() { "-" } else { &key.noise },
                    key.d,
                    f.fit.slope,
                    f.fit.slope_stderr.map_or("NA".to_string(), |s| format!("{s:.4}")),
                    f.fit.points
                );
            }
            Err(e) => {
                let _ = writeln!(out, "rate model={} gamma={g} d={} unavailable ({e})", key.model, key.d);
            }
        }
    }
    out
}
