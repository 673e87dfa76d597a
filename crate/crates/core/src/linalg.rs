//! Small dense helpers on top of `faer` shared by the other modules.

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

pub fn frobenius(a: MatRef<'_, f64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, j)];
            acc += v * v;
        }
    }
    acc.sqrt()
}

pub fn max_abs(a: MatRef<'_, f64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].abs());
        }
    }
    m
}

pub fn all_finite(a: MatRef<'_, f64>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)].is_finite()))
}

/// Largest |a_ij - a_ji| relative to the largest entry.
pub fn asymmetry(a: MatRef<'_, f64>) -> f64 {
    let n = a.nrows();
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Bit-exact symmetry across the diagonal.
pub fn is_bit_symmetric(a: MatRef<'_, f64>) -> bool {
    let n = a.nrows();
    a.ncols() == n && (0..n).all(|j| ((j + 1)..n).all(|i| a[(i, j)].to_bits() == a[(j, i)].to_bits()))
}

pub fn require_square(a: MatRef<'_, f64>, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::contract(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

/// Eigenvalues of a symmetric matrix, nonincreasing.
pub fn sym_eigenvalues_desc(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let mut vals = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigenvalue solver failed: {e:?}")))?;
    vals.reverse();
    Ok(vals)
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    a.singular_values()
        .map_err(|e| Error::Numerical(format!("singular value solver failed: {e:?}")))
}

/// Numerical rank: number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: MatRef<'_, f64>, rel_tol: f64) -> Result<usize> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0);
    }
    let sv = singular_values(a)?;
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > rel_tol * top).count())
}

/// Horizontally append `extra` zero columns.
pub fn pad_columns(a: MatRef<'_, f64>, extra: usize) -> Mat<f64> {
    let cols = a.ncols();
    Mat::from_fn(a.nrows(), cols + extra, |i, j| if j < cols { a[(i, j)] } else { 0.0 })
}

pub fn scaled(a: MatRef<'_, f64>, factor: f64) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| factor * a[(i, j)])
}

/// `a a^T`
pub fn gram_outer(a: MatRef<'_, f64>) -> Mat<f64> {
    a * a.transpose()
}

/// `||M^T M - I||_max`
pub fn orthogonality_defect(m: MatRef<'_, f64>) -> f64 {
    let g = m.transpose() * m;
    let k = g.nrows();
    let mut worst = 0.0f64;
    for j in 0..k {
        for i in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}
