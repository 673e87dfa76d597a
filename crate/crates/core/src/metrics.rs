//! Row-wise error metrics, orthogonal Procrustes alignment, and the
//! estimation error of an embedding whose dimension may differ from the
//! true rank.
//!
//! The alignment is the Frobenius-optimal orthogonal matrix. The 2,∞ error
//! reported at that matrix is therefore an upper bound on the minimum 2,∞
//! error over all orthogonal alignments.

use faer::{Mat, MatRef};

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::generators::LatentPositions;
use crate::linalg;

/// Largest Euclidean row norm. Zero for an empty matrix.
pub fn two_inf_norm(m: MatRef<'_, f64>) -> f64 {
    let mut best = 0.0f64;
    for i in 0..m.nrows() {
        let mut s = 0.0;
        for j in 0..m.ncols() {
            s += m[(i, j)] * m[(i, j)];
        }
        best = best.max(s);
    }
    best.sqrt()
}

/// Orthogonal `W` minimizing `||xhat W - x||_F`: `W = U V^T` from the SVD
/// `xhat^T x = U S V^T`.
///
/// When `xhat^T x` is rank deficient the minimizer is not unique; any SVD
/// still yields an orthogonal `W`.
pub fn procrustes_align(xhat: MatRef<'_, f64>, x: MatRef<'_, f64>) -> Result<Mat<f64>> {
    if xhat.nrows() != x.nrows() || xhat.ncols() != x.ncols() {
        return Err(Error::contract(format!(
            "procrustes shapes differ: {}x{} vs {}x{}",
            xhat.nrows(),
            xhat.ncols(),
            x.nrows(),
            x.ncols()
        )));
    }
    if !linalg::all_finite(xhat) || !linalg::all_finite(x) {
        return Err(Error::contract("procrustes inputs must be finite"));
    }
    let d = xhat.ncols();
    if d == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let cross = xhat.transpose() * x;
    let svd = cross
        .svd()
        .map_err(|e| Error::Numerical(format!("procrustes svd failed: {e:?}")))?;
    Ok(svd.U() * svd.V().transpose())
}

/// Estimation error of an embedding against `rho^{1/2} X` after zero padding
/// and Procrustes alignment.
#[derive(Debug, Clone)]
pub struct MisspecError {
    pub error_2inf: f64,
    pub error_frob: f64,
    /// `d - r`
    pub k: i64,
    /// Alignment applied to the (padded) embedding; `max(d, r)` square.
    pub aligned_w: Mat<f64>,
    /// `sqrt(sum_{j > d} s_j / n)`, present only when `d < r`.
    pub lower_bound: Option<f64>,
}

/// Nonzero eigenvalues of `rho X X^T`, nonincreasing, computed from the
/// `r x r` Gram matrix `rho X^T X`.
pub fn population_eigenvalues(x: &LatentPositions, rho: f64) -> Result<Vec<f64>> {
    let gram = linalg::scaled((x.matrix().transpose() * x.matrix()).as_ref(), rho);
    linalg::sym_eigenvalues_desc(gram.as_ref())
}

/// Lower bound on the 2,∞ error of any `(r+k)`-dimensional estimate when
/// `k < 0`: `sqrt(sum_{j=r+k+1}^{r} s_j / n)`.
///
/// `eigs_p` holds the `r` nonzero eigenvalues of the expectation sorted
/// nonincreasing (1-based `s_j` is `eigs_p[j-1]`).
pub fn underspecified_lower_bound(eigs_p: &[f64], r: usize, k: i64, n: usize) -> Result<f64> {
    if k >= 0 {
        return Err(Error::domain(format!("lower bound needs k < 0, got k = {k}")));
    }
    if eigs_p.len() < r {
        return Err(Error::contract(format!(
            "need {r} population eigenvalues, got {}",
            eigs_p.len()
        )));
    }
    let kept = r as i64 + k;
    if kept < 0 {
        return Err(Error::domain(format!("k = {k} below -r = -{r}")));
    }
    if n == 0 {
        return Err(Error::contract("n must be positive"));
    }
    let tail = &eigs_p[kept as usize..r];
    if let Some(bad) = tail.iter().find(|&&s| !(s > 0.0)) {
        return Err(Error::contract(format!(
            "population eigenvalue {bad} in the truncated range is not positive"
        )));
    }
    Ok((tail.iter().sum::<f64>() / n as f64).sqrt())
}

fn lower_bound_clamped(eigs_p: &[f64], keep: usize, r: usize, n: usize) -> f64 {
    let s: f64 = eigs_p[keep..r].iter().map(|v| v.max(0.0)).sum();
    (s / n as f64).sqrt()
}

/// Error of `emb` against `rho^{1/2} X` where `X` has `r` columns.
///
/// `k = d - r >= 0`: `rho^{1/2} X` is padded with `k` zero columns.
/// `k < 0`: the embedding is padded with `|k|` zero columns and the
/// truncation lower bound is attached.
pub fn misspec_error(emb: &Embedding, x: &LatentPositions, rho: f64, r: usize) -> Result<MisspecError> {
    if x.dim() != r {
        return Err(Error::contract(format!(
            "latent positions have {} columns, expected r = {r}",
            x.dim()
        )));
    }
    if emb.n() != x.n() {
        return Err(Error::contract(format!(
            "embedding has {} rows, latent positions {}",
            emb.n(),
            x.n()
        )));
    }
    let d = emb.d();
    let k = d as i64 - r as i64;
    let target = linalg::scaled(x.matrix(), rho.sqrt());
    let (est, tgt) = if k >= 0 {
        (emb.coords.clone(), linalg::pad_columns(target.as_ref(), k as usize))
    } else {
        (linalg::pad_columns(emb.coords.as_ref(), (-k) as usize), target)
    };
    let w = procrustes_align(est.as_ref(), tgt.as_ref())?;
    let diff = &(est.as_ref() * w.as_ref()) - &tgt;
    let lower_bound = if k < 0 {
        let eigs = population_eigenvalues(x, rho)?;
        Some(lower_bound_clamped(&eigs, d, r, x.n()))
    } else {
        None
    };
    Ok(MisspecError {
        error_2inf: two_inf_norm(diff.as_ref()),
        error_frob: linalg::frobenius(diff.as_ref()),
        k,
        aligned_w: w,
        lower_bound,
    })
}

/// Split of an over-specified (`k > 0`) error at the Procrustes alignment
/// `W = [W_head; W_tail]` (rows `1..r` and `r+1..r+k`):
///
/// `||Xhat W - X_pad|| <= ||Xhat_{1:r} W_head - X_pad|| + ||Xhat_{r+1:r+k}||`
///
/// in the 2,∞ norm. `W_tail` has orthonormal rows, so the trailing term
/// needs no alignment.
#[derive(Debug, Clone, Copy)]
pub struct OverfitSplit {
    pub total: f64,
    pub head: f64,
    pub trailing: f64,
}

pub fn overfit_split(emb: &Embedding, x: &LatentPositions, rho: f64, r: usize) -> Result<OverfitSplit> {
    let err = misspec_error(emb, x, rho, r)?;
    if err.k <= 0 {
        return Err(Error::domain(format!("split needs k > 0, got k = {}", err.k)));
    }
    let n = emb.n();
    let d = emb.d();
    let target = linalg::pad_columns(linalg::scaled(x.matrix(), rho.sqrt()).as_ref(), err.k as usize);
    let w = err.aligned_w.as_ref();
    let head_coords = emb.coords.as_ref().subcols(0, r);
    let head = &(head_coords * w.subrows(0, r)) - &target;
    let trailing = emb.coords.as_ref().subcols(r, d - r);
    debug_assert_eq!(head.nrows(), n);
    Ok(OverfitSplit {
        total: err.error_2inf,
        head: two_inf_norm(head.as_ref()),
        trailing: two_inf_norm(trailing),
    })
}
