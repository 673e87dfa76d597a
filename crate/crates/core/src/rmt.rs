//! Random-matrix diagnostics: resolvents, Stieltjes transforms, semicircle
//! law error, eigenvalue interlacing under low-rank perturbation, and
//! eigenvector delocalization profiles.
//!
//! The delocalization thresholds used by the harness are empirical
//! calibrations, not theoretical constants. Profiles computed on binary
//! networks are reported as conjecture support only.

use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat, MatRef};

use crate::embedding::Spectrum;
use crate::error::{Error, Result};
use crate::generators::Network;
use crate::linalg;

/// Adjacency scaled for random-matrix statements: `B = A / sqrt(n)` and,
/// when the expectation is known, `H = (A - P) / sqrt(n)`.
#[derive(Debug, Clone)]
pub struct RmtScaled {
    pub b: Mat<f64>,
    pub h: Option<Mat<f64>>,
    pub n: usize,
}

pub fn rmt_scale(net: &Network, with_noise: bool) -> Result<RmtScaled> {
    let n = net.n();
    let f = 1.0 / (n as f64).sqrt();
    let b = linalg::scaled(net.adjacency.as_ref(), f);
    let h = if with_noise {
        let p = net
            .expectation
            .as_ref()
            .ok_or_else(|| Error::contract("noise matrix requested but the network has no expectation"))?;
        Some(linalg::scaled((&net.adjacency - p).as_ref(), f))
    } else {
        None
    };
    Ok(RmtScaled { b, h, n })
}

fn require_upper(z: c64) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!("Im z must be > 0, got {}", z.im)));
    }
    Ok(())
}

/// `G(z) = (B - z I)^{-1}` by LU factorization.
pub fn resolvent(b: MatRef<'_, f64>, z: c64) -> Result<Mat<c64>> {
    require_upper(z)?;
    let n = linalg::require_square(b, "resolvent input")?;
    let shifted = Mat::from_fn(n, n, |i, j| {
        let v = c64::new(b[(i, j)], 0.0);
        if i == j {
            v - z
        } else {
            v
        }
    });
    Ok(shifted.partial_piv_lu().inverse())
}

/// `max |G (B - zI) - I|`
pub fn resolvent_residual(b: MatRef<'_, f64>, z: c64, g: MatRef<'_, c64>) -> f64 {
    let n = b.nrows();
    let shifted = Mat::from_fn(n, n, |i, j| {
        let v = c64::new(b[(i, j)], 0.0);
        if i == j {
            v - z
        } else {
            v
        }
    });
    let prod = g * shifted.as_ref();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

/// Largest violation of `sum_j |G_ij|^2 = Im G_ii / eta` over rows `i`.
pub fn ward_defect(g: MatRef<'_, c64>, eta: f64) -> f64 {
    let n = g.nrows();
    (0..n)
        .map(|i| {
            let lhs: f64 = (0..n).map(|j| g[(i, j)].norm_sqr()).sum();
            (lhs - g[(i, i)].im / eta).abs()
        })
        .fold(0.0, f64::max)
}

/// `(1/N) sum_a 1 / (lambda_a - z)`
pub fn stieltjes_from_eigenvalues(eigs: &[f64], z: c64) -> Result<c64> {
    require_upper(z)?;
    if eigs.is_empty() {
        return Err(Error::contract("empty spectrum"));
    }
    let sum: c64 = eigs.iter().map(|&l| (c64::new(l, 0.0) - z).inv()).sum();
    Ok(sum / eigs.len() as f64)
}

/// Empirical Stieltjes transform `(1/N) tr G(z)`, evaluated through the
/// eigenvalues of `B`.
pub fn empirical_stieltjes(b: MatRef<'_, f64>, z: c64) -> Result<c64> {
    require_upper(z)?;
    linalg::require_square(b, "stieltjes input")?;
    let eigs = linalg::sym_eigenvalues_desc(b)?;
    stieltjes_from_eigenvalues(&eigs, z)
}

/// `(1/N) tr G(z)` by explicit inversion. Independent of the eigenvalue route.
pub fn stieltjes_by_trace(b: MatRef<'_, f64>, z: c64) -> Result<c64> {
    let g = resolvent(b, z)?;
    let n = g.nrows();
    let tr: c64 = (0..n).map(|i| g[(i, i)]).sum();
    Ok(tr / n as f64)
}

/// Stieltjes transform of the semicircle law: the root of
/// `m^2 + z m + 1 = 0` with `Im m > 0`.
pub fn semicircle_transform(z: c64) -> Result<c64> {
    require_upper(z)?;
    let s = (z * z - 4.0).sqrt();
    let a = (-z + s) * 0.5;
    let b = (-z - s) * 0.5;
    // the roots multiply to 1; take the small one as the reciprocal of the
    // large one to avoid cancellation
    let (big, small) = if a.norm() >= b.norm() {
        (a, a.inv())
    } else {
        (b, b.inv())
    };
    Ok(if big.im > 0.0 { big } else { small })
}

/// Semicircle density `sqrt(4 - x^2) / (2 pi)` on `[-2, 2]`.
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI)
    }
}

/// Largest |E| accepted for semicircle error grids.
pub const SPECTRAL_WINDOW: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct SemicircleErrorCurve {
    pub grid: Vec<c64>,
    pub empirical: Vec<c64>,
    pub reference: Vec<c64>,
    pub sup_error: f64,
}

impl SemicircleErrorCurve {
    pub fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.empirical.iter().zip(&self.reference).map(|(a, b)| (a - b).norm())
    }
}

/// `|m_emp(E + i eta) - m_sc(E + i eta)|` on `points` uniformly spaced
/// energies in `energy_range`.
pub fn semicircle_error_curve(
    b: MatRef<'_, f64>,
    energy_range: (f64, f64),
    eta: f64,
    points: usize,
) -> Result<SemicircleErrorCurve> {
    linalg::require_square(b, "semicircle input")?;
    let eigs = linalg::sym_eigenvalues_desc(b)?;
    semicircle_error_curve_from_eigenvalues(&eigs, energy_range, eta, points)
}

pub fn semicircle_error_curve_from_eigenvalues(
    eigs: &[f64],
    energy_range: (f64, f64),
    eta: f64,
    points: usize,
) -> Result<SemicircleErrorCurve> {
    if !(eta > 0.0) {
        return Err(Error::domain(format!("eta must be > 0, got {eta}")));
    }
    let (lo, hi) = energy_range;
    if !(lo <= hi && lo >= -SPECTRAL_WINDOW && hi <= SPECTRAL_WINDOW) {
        return Err(Error::domain(format!(
            "energy range [{lo}, {hi}] must lie within [-{SPECTRAL_WINDOW}, {SPECTRAL_WINDOW}]"
        )));
    }
    if points == 0 {
        return Err(Error::param("grid needs at least one point"));
    }
    let step = if points > 1 {
        (hi - lo) / (points - 1) as f64
    } else {
        0.0
    };
    let grid: Vec<c64> = (0..points).map(|i| c64::new(lo + step * i as f64, eta)).collect();
    let mut empirical = Vec::with_capacity(points);
    let mut reference = Vec::with_capacity(points);
    let mut sup_error = 0.0f64;
    for &z in &grid {
        let m = stieltjes_from_eigenvalues(eigs, z)?;
        let msc = semicircle_transform(z)?;
        sup_error = sup_error.max((m - msc).norm());
        empirical.push(m);
        reference.push(msc);
    }
    Ok(SemicircleErrorCurve {
        grid,
        empirical,
        reference,
        sup_error,
    })
}

/// Largest absolute entries of the trailing eigenvectors.
#[derive(Debug, Clone)]
pub struct DelocProfile {
    /// One entry per eigenvector `r+1 ..= r+k_window`.
    pub per_index_max: Vec<f64>,
    /// `sqrt(n)` times the overall largest entry; at least 1 for unit vectors.
    pub scaled_max: f64,
    pub n: usize,
    pub r: usize,
    pub k_window: usize,
}

/// Relative spacing below which neighbouring eigenvalues count as tied.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Delocalization profile of eigenvectors `r+1 ..= r+k_window` (algebraic
/// order).
///
/// Refuses windows whose eigenvalues are numerically tied with each other or
/// with the neighbouring positions `r` and `r+k_window+1`: the eigenvectors
/// are then only defined up to rotation within the tied block (for example
/// the null space of an exactly low-rank matrix).
pub fn deloc_profile(spec: &Spectrum, r: usize, k_window: usize) -> Result<DelocProfile> {
    let n = spec.n();
    if k_window == 0 || r + k_window > n {
        return Err(Error::param(format!(
            "window r = {r}, k = {k_window} does not fit in n = {n}"
        )));
    }
    let lam = &spec.eigenvalues;
    let scale = lam.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    let lo = r.saturating_sub(1);
    let hi = (r + k_window + 1).min(n);
    for p in lo..hi.saturating_sub(1) {
        if scale == 0.0 || (lam[p] - lam[p + 1]).abs() <= tol {
            return Err(Error::Degenerate(format!(
                "eigenvalues at positions {} and {} are tied ({} vs {})",
                p + 1,
                p + 2,
                lam[p],
                lam[p + 1]
            )));
        }
    }
    let v = spec.eigenvectors.as_ref();
    let per_index_max: Vec<f64> = (r..r + k_window)
        .map(|j| (0..n).map(|i| v[(i, j)].abs()).fold(0.0, f64::max))
        .collect();
    let overall = per_index_max.iter().copied().fold(0.0, f64::max);
    Ok(DelocProfile {
        per_index_max,
        scaled_max: (n as f64).sqrt() * overall,
        n,
        r,
        k_window,
    })
}

/// Largest difference between the eigenvalue counting functions
/// `#{lambda <= x}` of two spectra of equal length, as a raw count.
///
/// Both step functions only change at eigenvalues, so evaluating at every
/// eigenvalue of either list is exhaustive.
pub fn counting_gap(eigs_h: &[f64], eigs_b: &[f64]) -> Result<usize> {
    if eigs_h.len() != eigs_b.len() {
        return Err(Error::contract(format!(
            "spectra differ in length: {} vs {}",
            eigs_h.len(),
            eigs_b.len()
        )));
    }
    for (name, e) in [("first", eigs_h), ("second", eigs_b)] {
        if e.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::contract(format!("{name} spectrum is not sorted nondecreasing")));
        }
    }
    let count = |e: &[f64], x: f64| e.partition_point(|&v| v <= x);
    let mut points: Vec<f64> = eigs_h.iter().chain(eigs_b).copied().collect();
    points.sort_by(f64::total_cmp);
    let mut extra = Vec::with_capacity(points.len());
    for w in points.windows(2) {
        extra.push(0.5 * (w[0] + w[1]));
    }
    points.extend(extra);
    Ok(points
        .into_iter()
        .map(|x| count(eigs_h, x).abs_diff(count(eigs_b, x)))
        .max()
        .unwrap_or(0))
}

/// `sup_x |n_H(x) - n_B(x)|` for the normalized counting functions. For a
/// rank-`r` difference `B - H` this is at most `r / N`; `r` is used for the
/// caller's contract check via [`interlacing_holds`].
pub fn interlacing_check(eigs_h: &[f64], eigs_b: &[f64], _r: usize) -> Result<f64> {
    let gap = counting_gap(eigs_h, eigs_b)?;
    let n = eigs_h.len().max(1);
    Ok(gap as f64 / n as f64)
}

/// Exact integer form of the interlacing contract: count gap `<= r`.
pub fn interlacing_holds(eigs_h: &[f64], eigs_b: &[f64], r: usize) -> Result<bool> {
    Ok(counting_gap(eigs_h, eigs_b)? <= r)
}
