//! Procrustes alignment against a brute-force search over O(2), plus
//! norm invariants.

use std::f64::consts::PI;

use faer::Mat;
use proptest::prelude::*;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rdpg_ase::linalg::{frobenius, orthogonality_defect};
use rdpg_ase::metrics::{procrustes_align, two_inf_norm};
use rdpg_ase::seed::rng_from_seed;

fn gaussian(rows: usize, cols: usize, seed: u64) -> Mat<f64> {
    let mut rng = rng_from_seed(seed);
    Mat::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
}

fn random_orthogonal(d: usize, seed: u64) -> Mat<f64> {
    gaussian(d, d, seed).qr().compute_Q()
}

fn objective(xhat: &Mat<f64>, w: &Mat<f64>, x: &Mat<f64>) -> f64 {
    frobenius((&(xhat * w) - x).as_ref())
}

/// 5000 rotations and 5000 reflections, evenly spaced in angle.
fn o2_grid() -> Vec<Mat<f64>> {
    let steps = 5000;
    let mut out = Vec::with_capacity(2 * steps);
    for s in 0..steps {
        let t = 2.0 * PI * s as f64 / steps as f64;
        let (c, si) = (t.cos(), t.sin());
        out.push(Mat::from_fn(2, 2, |i, j| [[c, -si], [si, c]][i][j]));
        out.push(Mat::from_fn(2, 2, |i, j| [[c, si], [si, -c]][i][j]));
    }
    out
}

#[test]
fn beats_o2_grid_on_random_cases() {
    let grid = o2_grid();
    let mut rng = rng_from_seed(99);
    for case in 0..200u64 {
        let n = rng.random_range(3..12);
        let x = gaussian(n, 2, 1000 + case);
        let xhat = gaussian(n, 2, 5000 + case);
        let w = procrustes_align(xhat.as_ref(), x.as_ref()).unwrap();
        let best = objective(&xhat, &w, &x);
        let grid_best = grid
            .iter()
            .map(|g| objective(&xhat, g, &x))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= grid_best + 1e-3, "case {case}: {best} > {grid_best}");
    }
}

#[test]
fn recovers_rotation() {
    let x = gaussian(20, 4, 3);
    let r = random_orthogonal(4, 4);
    let w = procrustes_align((&x * &r).as_ref(), x.as_ref()).unwrap();
    let diff = &w - r.transpose();
    assert!(diff.norm_max() <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn row_norms_are_rotation_invariant(seed in any::<u64>(), n in 1usize..20, d in 1usize..6) {
        let m = gaussian(n, d, seed);
        let w = random_orthogonal(d, seed ^ 0xabc);
        let a = two_inf_norm(m.as_ref());
        let b = two_inf_norm((&m * &w).as_ref());
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), n in 1usize..20, d in 1usize..6) {
        let a = gaussian(n, d, seed);
        let b = gaussian(n, d, seed.wrapping_add(1));
        let lhs = two_inf_norm((&a + &b).as_ref());
        prop_assert!(lhs <= two_inf_norm(a.as_ref()) + two_inf_norm(b.as_ref()) + 1e-12);
    }

    #[test]
    fn alignment_is_orthogonal_and_beats_random_draws(seed in any::<u64>(), n in 2usize..15, d in 1usize..5) {
        let x = gaussian(n, d, seed);
        let xhat = gaussian(n, d, seed.wrapping_mul(31).wrapping_add(7));
        let w = procrustes_align(xhat.as_ref(), x.as_ref()).unwrap();
        prop_assert!(orthogonality_defect(w.as_ref()) <= 1e-10);
        let best = objective(&xhat, &w, &x);
        for t in 0..100u64 {
            let q = random_orthogonal(d, seed ^ (t + 1).wrapping_mul(0x9e37_79b9));
            prop_assert!(best <= objective(&xhat, &q, &x) + 1e-10);
        }
    }
}
