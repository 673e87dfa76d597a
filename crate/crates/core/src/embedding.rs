//! Symmetric eigendecomposition and adjacency spectral embedding (ASE).

use std::fmt;
use std::str::FromStr;

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};
use crate::linalg;

/// Which eigenpairs an embedding keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    /// The `d` algebraically largest eigenvalues.
    #[default]
    AlgebraicDescending,
    /// The `d` eigenvalues of largest magnitude (suited to indefinite
    /// expectations such as the GRDPG).
    MagnitudeDescending,
}

impl SelectionRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelectionRule::AlgebraicDescending => "algebraic",
            SelectionRule::MagnitudeDescending => "magnitude",
        }
    }
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SelectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "algebraic" | "algebraic_descending" => Ok(SelectionRule::AlgebraicDescending),
            "magnitude" | "magnitude_descending" => Ok(SelectionRule::MagnitudeDescending),
            other => Err(Error::param(format!("unknown selection rule `{other}`"))),
        }
    }
}

/// Full eigendecomposition with eigenvalues sorted nonincreasing.
///
/// Column `j` of `eigenvectors` pairs with `eigenvalues[j]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Spectrum positions in selection order for `rule`.
    ///
    /// Magnitude ordering is a stable sort on `|lambda|`, so ties keep the
    /// algebraic order.
    pub fn order(&self, rule: SelectionRule) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        if rule == SelectionRule::MagnitudeDescending {
            idx.sort_by(|&a, &b| self.eigenvalues[b].abs().total_cmp(&self.eigenvalues[a].abs()));
        }
        idx
    }
}

/// Dense symmetric eigendecomposition of `a`.
///
/// Rejects non-finite input and matrices whose largest asymmetry exceeds
/// `1e-12` relative to the largest entry.
pub fn full_spectrum(a: MatRef<'_, f64>) -> Result<Spectrum> {
    let n = linalg::require_square(a, "adjacency matrix")?;
    if !linalg::all_finite(a) {
        return Err(Error::contract("matrix has non-finite entries"));
    }
    let asym = linalg::asymmetry(a);
    if asym > 1e-12 {
        return Err(Error::contract(format!(
            "matrix is not symmetric (relative asymmetry {asym:e})"
        )));
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: Mat::zeros(0, 0),
        });
    }
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    // faer returns ascending order
    let eigenvalues: Vec<f64> = (0..n).rev().map(|j| s[j]).collect();
    let eigenvectors = Mat::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// A `d`-dimensional adjacency spectral embedding.
#[derive(Debug, Clone)]
pub struct Embedding {
    /// `n x d`; column `j` is eigenvector `j` scaled by `sqrt(|eigenvalue j|)`.
    pub coords: Mat<f64>,
    pub selected_eigenvalues: Vec<f64>,
    /// Positions of the selected pairs in the nonincreasing spectrum.
    pub selected_positions: Vec<usize>,
    pub rule: SelectionRule,
}

impl Embedding {
    pub fn d(&self) -> usize {
        self.coords.ncols()
    }

    pub fn n(&self) -> usize {
        self.coords.nrows()
    }
}

/// Embed from an existing decomposition. Lets one decomposition serve many `d`.
pub fn ase_from_spectrum(spec: &Spectrum, d: usize, rule: SelectionRule) -> Result<Embedding> {
    let n = spec.n();
    if d == 0 || d > n {
        return Err(Error::param(format!("embedding dimension d = {d} outside 1..={n}")));
    }
    let positions: Vec<usize> = spec.order(rule).into_iter().take(d).collect();
    let selected_eigenvalues: Vec<f64> = positions.iter().map(|&p| spec.eigenvalues[p]).collect();
    let scales: Vec<f64> = selected_eigenvalues.iter().map(|v| v.abs().sqrt()).collect();
    let v = spec.eigenvectors.as_ref();
    let coords = Mat::from_fn(n, d, |i, j| v[(i, positions[j])] * scales[j]);
    Ok(Embedding {
        coords,
        selected_eigenvalues,
        selected_positions: positions,
        rule,
    })
}

/// `d`-dimensional ASE `U_{1:d} |S_{1:d}|^{1/2}` of a symmetric matrix.
pub fn ase(a: MatRef<'_, f64>, d: usize, rule: SelectionRule) -> Result<Embedding> {
    let n = linalg::require_square(a, "adjacency matrix")?;
    if d == 0 || d > n {
        return Err(Error::param(format!("embedding dimension d = {d} outside 1..={n}")));
    }
    let spec = full_spectrum(a)?;
    ase_from_spectrum(&spec, d, rule)
}

/// Eigenvectors `r+1 ..= r+k` in algebraic order (the default ASE order).
pub fn trailing_eigvecs(spec: &Spectrum, r: usize, k: usize) -> Result<Mat<f64>> {
    trailing_eigvecs_with(spec, r, k, SelectionRule::AlgebraicDescending)
}

/// Eigenvectors `r+1 ..= r+k` under the given selection order.
pub fn trailing_eigvecs_with(spec: &Spectrum, r: usize, k: usize, rule: SelectionRule) -> Result<Mat<f64>> {
    let n = spec.n();
    if k == 0 || r + k > n {
        return Err(Error::param(format!(
            "trailing window r = {r}, k = {k} does not fit in n = {n}"
        )));
    }
    let order = spec.order(rule);
    let v = spec.eigenvectors.as_ref();
    Ok(Mat::from_fn(n, k, |i, j| v[(i, order[r + j])]))
}

/// Eigenvalues `r+1 ..= r+k` under the given order.
pub fn trailing_eigenvalues(spec: &Spectrum, r: usize, k: usize, rule: SelectionRule) -> Vec<f64> {
    spec.order(rule)
        .into_iter()
        .skip(r)
        .take(k)
        .map(|p| spec.eigenvalues[p])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use rand_distr::{Distribution, StandardNormal};

    fn random_symmetric(n: usize, seed: u64) -> Mat<f64> {
        let mut rng = rng_from_seed(seed);
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = StandardNormal.sample(&mut rng);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        a
    }

    fn residual_max(a: MatRef<'_, f64>, s: &Spectrum) -> f64 {
        let n = s.n();
        let lam = Mat::from_fn(n, n, |i, j| if i == j { s.eigenvalues[i] } else { 0.0 });
        let av = a * s.eigenvectors.as_ref();
        let vl = s.eigenvectors.as_ref() * lam.as_ref();
        linalg::max_abs((&av - &vl).as_ref())
    }

    #[test]
    fn diagonal_spectrum() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { [3.0, 1.0, 2.0][i] } else { 0.0 });
        let s = full_spectrum(a.as_ref()).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0, 1.0]);
        // signed permutation of identity columns
        let expected_row = [0usize, 2, 1];
        for (j, &row) in expected_row.iter().enumerate() {
            assert!((s.eigenvectors[(row, j)].abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_matrix_spectrum() {
        let a = Mat::<f64>::zeros(4, 4);
        let s = full_spectrum(a.as_ref()).unwrap();
        assert!(s.eigenvalues.iter().all(|&v| v == 0.0));
        assert!(linalg::orthogonality_defect(s.eigenvectors.as_ref()) <= 1e-10);
    }

    #[test]
    fn random_symmetric_residuals() {
        let a = random_symmetric(50, 4);
        let s = full_spectrum(a.as_ref()).unwrap();
        let norm = linalg::frobenius(a.as_ref());
        assert!(linalg::orthogonality_defect(s.eigenvectors.as_ref()) <= 1e-10);
        assert!(residual_max(a.as_ref(), &s) <= 1e-8 * norm);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let lam = Mat::from_fn(50, 50, |i, j| if i == j { s.eigenvalues[i] } else { 0.0 });
        let recon = s.eigenvectors.as_ref() * lam.as_ref() * s.eigenvectors.transpose();
        assert!(linalg::frobenius((&recon - &a).as_ref()) <= 1e-8 * norm);
    }

    #[test]
    fn rejects_bad_input() {
        let mut a = random_symmetric(5, 1);
        a[(0, 1)] += 1e-3;
        assert!(matches!(full_spectrum(a.as_ref()), Err(Error::Contract(_))));
        let mut b = random_symmetric(5, 1);
        b[(2, 2)] = f64::NAN;
        assert!(matches!(full_spectrum(b.as_ref()), Err(Error::Contract(_))));
    }

    #[test]
    fn ase_all_ones() {
        let a = Mat::from_fn(2, 2, |_, _| 1.0);
        let e = ase(a.as_ref(), 1, SelectionRule::AlgebraicDescending).unwrap();
        assert!((e.selected_eigenvalues[0] - 2.0).abs() < 1e-14);
        for i in 0..2 {
            assert!((e.coords[(i, 0)].abs() - 1.0).abs() < 1e-14);
        }
        assert_eq!(e.coords[(0, 0)].signum(), e.coords[(1, 0)].signum());
    }

    #[test]
    fn ase_selection_conventions() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { [-9.0, 4.0][i] } else { 0.0 });
        let m = ase(a.as_ref(), 1, SelectionRule::MagnitudeDescending).unwrap();
        assert!((m.coords[(0, 0)].abs() - 3.0).abs() < 1e-14);
        assert_eq!(m.coords[(1, 0)], 0.0);
        assert_eq!(m.selected_eigenvalues, vec![-9.0]);
        let g = ase(a.as_ref(), 1, SelectionRule::AlgebraicDescending).unwrap();
        assert_eq!(g.coords[(0, 0)], 0.0);
        assert!((g.coords[(1, 0)].abs() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ase_dimension_bounds() {
        let a = random_symmetric(4, 2);
        assert!(matches!(
            ase(a.as_ref(), 0, SelectionRule::AlgebraicDescending),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            ase(a.as_ref(), 5, SelectionRule::AlgebraicDescending),
            Err(Error::Parameter(_))
        ));
        assert_eq!(ase(a.as_ref(), 4, SelectionRule::AlgebraicDescending).unwrap().d(), 4);
    }

    #[test]
    fn trailing_windows() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { [3.0, 2.0, 1.0][i] } else { 0.0 });
        let s = full_spectrum(a.as_ref()).unwrap();
        let t = trailing_eigvecs(&s, 1, 1).unwrap();
        assert!((t[(1, 0)].abs() - 1.0).abs() < 1e-14);
        let all = trailing_eigvecs(&s, 0, 3).unwrap();
        assert_eq!(all, s.eigenvectors);
        assert!(trailing_eigvecs(&s, 2, 2).is_err());
        assert!(trailing_eigvecs(&s, 1, 0).is_err());

        let r = random_symmetric(20, 9);
        let s = full_spectrum(r.as_ref()).unwrap();
        let t = trailing_eigvecs(&s, 5, 7).unwrap();
        assert!(linalg::orthogonality_defect(t.as_ref()) <= 1e-10);
    }

    #[test]
    fn rules_agree_on_psd() {
        for seed in 0..5 {
            let g = random_symmetric(15, seed);
            let psd = g.as_ref() * g.transpose();
            let s = full_spectrum(psd.as_ref()).unwrap();
            let a = ase_from_spectrum(&s, 6, SelectionRule::AlgebraicDescending).unwrap();
            let m = ase_from_spectrum(&s, 6, SelectionRule::MagnitudeDescending).unwrap();
            assert_eq!(a.coords, m.coords);
        }
    }

    #[test]
    fn psd_row_norms_match_diagonal() {
        let g = random_symmetric(12, 3);
        let psd = g.as_ref() * g.transpose();
        let e = ase(psd.as_ref(), 12, SelectionRule::AlgebraicDescending).unwrap();
        for i in 0..12 {
            let row: f64 = (0..12).map(|j| e.coords[(i, j)].powi(2)).sum();
            assert!((row - psd[(i, i)]).abs() <= 1e-9 * psd[(i, i)].abs().max(1.0));
        }
    }

    #[test]
    fn tied_eigenvalues_share_subspace() {
        // diag(2, 2, 1) rotated: only the top-2 projector is contractual
        let a = Mat::from_fn(3, 3, |i, j| if i == j { [2.0, 1.0, 2.0][i] } else { 0.0 });
        let e = ase(a.as_ref(), 2, SelectionRule::AlgebraicDescending).unwrap();
        let proj = e.coords.as_ref() * e.coords.transpose();
        let want = Mat::from_fn(3, 3, |i, j| if i == j && i != 1 { 2.0 } else { 0.0 });
        assert!(linalg::max_abs((&proj - &want).as_ref()) < 1e-12);
    }
}
