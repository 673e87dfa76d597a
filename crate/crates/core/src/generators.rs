//! Latent positions and random graphs: weighted RDPG, binary (sparse) RDPG,
//! stochastic blockmodel and generalized RDPG.
//!
//! All generators are pure functions of their inputs and a `u64` seed. Edge
//! variables are drawn in a fixed order (row-major over the lower triangle)
//! and mirrored, so the adjacency matrix is bit-symmetric.

use faer::{Mat, MatRef, Side};
use rand::Rng as _;
use rand_distr::{Distribution, Exp1, Gamma, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;
use crate::seed::{rng_from_seed, Rng};

/// How a set of latent positions was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum LatentSource {
    Dirichlet { alpha: Vec<f64> },
    SbmDerived,
    Explicit,
}

/// Latent positions: the rows of an `n x r` matrix.
#[derive(Debug, Clone)]
pub struct LatentPositions {
    matrix: Mat<f64>,
    source: LatentSource,
    bound: f64,
}

impl LatentPositions {
    /// Wrap an explicit matrix. Every entry must be finite.
    pub fn explicit(matrix: Mat<f64>) -> Result<Self> {
        Self::with_source(matrix, LatentSource::Explicit)
    }

    fn with_source(matrix: Mat<f64>, source: LatentSource) -> Result<Self> {
        if !linalg::all_finite(matrix.as_ref()) {
            return Err(Error::param("latent positions must be finite"));
        }
        let bound = row_norm_max(matrix.as_ref());
        Ok(Self { matrix, source, bound })
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.matrix.as_ref()
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn source(&self) -> &LatentSource {
        &self.source
    }

    /// Largest row norm (the almost-sure bound `M` on latent vectors).
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn into_matrix(self) -> Mat<f64> {
        self.matrix
    }
}

fn row_norm_max(m: MatRef<'_, f64>) -> f64 {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

/// Mean-zero edge noise laws for the weighted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// `N(0, sigma^2)`
    Normal { sigma: f64 },
    /// `Laplace(0, 1)`
    LaplaceUnit,
    /// `Exp(1) - 1`
    ExponentialCentered,
    /// `Poisson(1) - 1`
    PoissonCentered,
}

impl NoiseModel {
    pub fn normal(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::param(format!("normal noise sigma must be > 0, got {sigma}")));
        }
        Ok(NoiseModel::Normal { sigma })
    }

    pub fn variance(&self) -> f64 {
        match *self {
            NoiseModel::Normal { sigma } => sigma * sigma,
            NoiseModel::LaplaceUnit => 2.0,
            NoiseModel::ExponentialCentered => 1.0,
            NoiseModel::PoissonCentered => 1.0,
        }
    }

    /// Short tag used in CSV output and seed derivation.
    pub fn tag(&self) -> String {
        match *self {
            NoiseModel::Normal { sigma } if sigma == 1.0 => "normal".to_string(),
            NoiseModel::Normal { sigma } => format!("normal({sigma})"),
            NoiseModel::LaplaceUnit => "laplace".to_string(),
            NoiseModel::ExponentialCentered => "exponential".to_string(),
            NoiseModel::PoissonCentered => "poisson".to_string(),
        }
    }

    /// Parse `normal`, `normal(0.1)`, `laplace`, `exponential`, `poisson`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "normal" => Ok(NoiseModel::Normal { sigma: 1.0 }),
            "laplace" => Ok(NoiseModel::LaplaceUnit),
            "exponential" => Ok(NoiseModel::ExponentialCentered),
            "poisson" => Ok(NoiseModel::PoissonCentered),
            _ => {
                let inner = s
                    .strip_prefix("normal(")
                    .and_then(|rest| rest.strip_suffix(')'))
                    .ok_or_else(|| Error::param(format!("unknown noise model `{s}`")))?;
                let sigma: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::param(format!("bad sigma in `{s}`")))?;
                NoiseModel::normal(sigma)
            }
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match *self {
            NoiseModel::Normal { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma * z
            }
            NoiseModel::LaplaceUnit => {
                // inverse CDF on (-1/2, 1/2)
                let u: f64 = rng.random::<f64>() - 0.5;
                -u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            NoiseModel::ExponentialCentered => {
                let e: f64 = Exp1.sample(rng);
                e - 1.0
            }
            NoiseModel::PoissonCentered => {
                let p = Poisson::new(1.0).expect("rate 1 is valid");
                let k: f64 = p.sample(rng);
                k - 1.0
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    Weighted,
    Binary,
}

impl NetworkKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NetworkKind::Weighted => "weighted",
            NetworkKind::Binary => "binary",
        }
    }
}

/// An observed symmetric adjacency matrix, optionally with its expectation.
#[derive(Debug, Clone)]
pub struct Network {
    pub adjacency: Mat<f64>,
    pub kind: NetworkKind,
    pub expectation: Option<Mat<f64>>,
    pub true_rank: Option<usize>,
    /// Signature `(p, q)` of the expectation when it came from a GRDPG.
    pub signature: Option<(usize, usize)>,
    pub sparsity: f64,
    pub seed: u64,
}

impl Network {
    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }
}

/// Stochastic blockmodel recipe: community proportions drawn from
/// `Dirichlet(alpha)`, block probabilities in `block_matrix`.
#[derive(Debug, Clone)]
pub struct SbmSpec {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub block_matrix: Mat<f64>,
}

impl SbmSpec {
    /// Homogeneous block matrix: `within` on the diagonal, `between` elsewhere.
    pub fn planted(n: usize, alpha: Vec<f64>, within: f64, between: f64) -> Self {
        let r = alpha.len();
        let block_matrix = Mat::from_fn(r, r, |i, j| if i == j { within } else { between });
        Self { n, alpha, block_matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.alpha.len();
        if self.n == 0 {
            return Err(Error::param("sbm needs n >= 1"));
        }
        if r == 0 {
            return Err(Error::param("sbm needs at least one community"));
        }
        if self.alpha.iter().any(|&a| !(a >= 0.0 && a.is_finite())) {
            return Err(Error::param("sbm alpha entries must be nonnegative"));
        }
        if self.alpha.iter().all(|&a| a == 0.0) {
            return Err(Error::param("sbm alpha must have a positive entry"));
        }
        let b = self.block_matrix.as_ref();
        if b.nrows() != r || b.ncols() != r {
            return Err(Error::param(format!(
                "block matrix must be {r}x{r}, got {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        for i in 0..r {
            for j in 0..r {
                let v = b[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::param(format!(
                        "block matrix entry ({i}, {j}) = {v} is outside [0, 1]"
                    )));
                }
                if v.to_bits() != b[(j, i)].to_bits() {
                    return Err(Error::param("block matrix must be symmetric"));
                }
            }
        }
        Ok(())
    }
}

/// Output of [`sample_sbm`].
#[derive(Debug, Clone)]
pub struct SbmSample {
    pub network: Network,
    pub latents: LatentPositions,
    pub pi: Vec<f64>,
    pub memberships: Vec<usize>,
}

fn dirichlet_row(rng: &mut Rng, gammas: &[Option<Gamma<f64>>], out: &mut [f64]) {
    loop {
        let mut total = 0.0;
        for (slot, g) in out.iter_mut().zip(gammas) {
            *slot = g.as_ref().map_or(0.0, |g| g.sample(rng));
            total += *slot;
        }
        // all-zero draws only happen with tiny alphas; redraw
        if total > 0.0 {
            out.iter_mut().for_each(|v| *v /= total);
            return;
        }
    }
}

fn gamma_laws(alpha: &[f64]) -> Result<Vec<Option<Gamma<f64>>>> {
    alpha
        .iter()
        .map(|&a| {
            if a == 0.0 {
                Ok(None)
            } else {
                Gamma::new(a, 1.0)
                    .map(Some)
                    .map_err(|e| Error::param(format!("bad Dirichlet parameter {a}: {e}")))
            }
        })
        .collect()
}

/// Rows drawn i.i.d. from `Dirichlet(alpha)`.
pub fn sample_dirichlet_latents(n: usize, alpha: &[f64], seed: u64) -> Result<LatentPositions> {
    if n == 0 {
        return Err(Error::param("n must be >= 1"));
    }
    if alpha.is_empty() {
        return Err(Error::param("alpha must have at least one entry"));
    }
    if let Some(a) = alpha.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::param(format!("Dirichlet alpha entries must be > 0, got {a}")));
    }
    let r = alpha.len();
    let laws = gamma_laws(alpha)?;
    let mut rng = rng_from_seed(seed);
    let mut m = Mat::zeros(n, r);
    let mut row = vec![0.0; r];
    for i in 0..n {
        dirichlet_row(&mut rng, &laws, &mut row);
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    LatentPositions::with_source(m, LatentSource::Dirichlet { alpha: alpha.to_vec() })
}

fn check_rho_weighted(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::param(format!("rho out of range (0, 1]: {rho}")));
    }
    Ok(())
}

fn check_rho_binary(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::param(format!("rho out of range [0, 1]: {rho}")));
    }
    Ok(())
}

fn latent_rank(x: &LatentPositions) -> Result<usize> {
    linalg::numerical_rank(x.matrix(), 1e-10)
}

fn symmetric_noise(n: usize, noise: Option<NoiseModel>, rng: &mut Rng) -> Mat<f64> {
    let mut e = Mat::zeros(n, n);
    if let Some(noise) = noise {
        for i in 0..n {
            for j in 0..=i {
                let v = noise.sample(rng);
                e[(i, j)] = v;
                e[(j, i)] = v;
            }
        }
    }
    e
}

fn weighted_impl(x: &LatentPositions, rho: f64, noise: Option<NoiseModel>, seed: u64) -> Result<Network> {
    check_rho_weighted(rho)?;
    let n = x.n();
    let p = linalg::scaled((x.matrix() * x.matrix().transpose()).as_ref(), rho);
    let mut rng = rng_from_seed(seed);
    let e = symmetric_noise(n, noise, &mut rng);
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            // mirror P's lower triangle so A stays bit-symmetric even if the
            // matmul rounds (i,j) and (j,i) differently
            let v = p[(i, j)] + e[(i, j)];
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let p = symmetrize_lower(p);
    Ok(Network {
        adjacency: a,
        kind: NetworkKind::Weighted,
        expectation: Some(p),
        true_rank: Some(latent_rank(x)?),
        signature: None,
        sparsity: rho,
        seed,
    })
}

fn symmetrize_lower(mut p: Mat<f64>) -> Mat<f64> {
    let n = p.nrows();
    for i in 0..n {
        for j in 0..i {
            p[(j, i)] = p[(i, j)];
        }
    }
    p
}

/// Weighted RDPG: `A = rho X X^T + E` with `E` symmetric and i.i.d. from
/// `noise` on and below the diagonal.
pub fn weighted_rdpg(x: &LatentPositions, rho: f64, noise: NoiseModel, seed: u64) -> Result<Network> {
    weighted_impl(x, rho, Some(noise), seed)
}

/// `A = rho X X^T` exactly. Test hook for exact-recovery checks; the public
/// noise laws cannot express zero variance.
#[doc(hidden)]
pub fn noiseless_rdpg(x: &LatentPositions, rho: f64, seed: u64) -> Result<Network> {
    weighted_impl(x, rho, None, seed)
}

/// `rho * x_i^T I_{p,q} x_j` for all pairs, validated into `[0, 1]` off the diagonal.
fn edge_probabilities(x: MatRef<'_, f64>, p_pos: usize, rho: f64) -> Result<Mat<f64>> {
    let n = x.nrows();
    let r = x.ncols();
    let signed = Mat::from_fn(n, r, |i, j| if j < p_pos { x[(i, j)] } else { -x[(i, j)] });
    let mut prob = linalg::scaled((signed.as_ref() * x.transpose()).as_ref(), rho);
    const SLACK: f64 = 1e-12;
    for i in 0..n {
        for j in 0..i {
            let v = prob[(i, j)];
            if !(v >= -SLACK && v <= 1.0 + SLACK) {
                return Err(Error::ModelValidity { i: j, j: i, prob: v });
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            let v = prob[(i, j)].clamp(0.0, 1.0);
            prob[(i, j)] = v;
            prob[(j, i)] = v;
        }
    }
    Ok(prob)
}

fn bernoulli_adjacency(prob: MatRef<'_, f64>, rng: &mut Rng) -> Mat<f64> {
    let n = prob.nrows();
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let u: f64 = rng.random();
            if u < prob[(i, j)] {
                a[(i, j)] = 1.0;
                a[(j, i)] = 1.0;
            }
        }
    }
    a
}

/// Binary RDPG: `A_ij ~ Bernoulli(rho x_i^T x_j)` for `i < j`, zero diagonal.
///
/// Probabilities within `1e-12` of `[0, 1]` are clamped (floating-point dot
/// products of simplex rows can land a hair above 1).
pub fn binary_rdpg(x: &LatentPositions, rho: f64, seed: u64) -> Result<Network> {
    check_rho_binary(rho)?;
    let r = x.dim();
    sample_signed(x, r, 0, rho, seed)
}

/// Generalized RDPG with signature `(p, q)`, `p + q = r`.
pub fn sample_grdpg(x: &LatentPositions, p: usize, q: usize, rho: f64, seed: u64) -> Result<Network> {
    check_rho_binary(rho)?;
    if p + q != x.dim() {
        return Err(Error::param(format!(
            "signature ({p}, {q}) does not match latent dimension {}",
            x.dim()
        )));
    }
    let mut net = sample_signed(x, p, q, rho, seed)?;
    net.signature = Some((p, q));
    Ok(net)
}

fn sample_signed(x: &LatentPositions, p: usize, _q: usize, rho: f64, seed: u64) -> Result<Network> {
    let prob = edge_probabilities(x.matrix(), p, rho)?;
    let mut rng = rng_from_seed(seed);
    let a = bernoulli_adjacency(prob.as_ref(), &mut rng);
    Ok(Network {
        adjacency: a,
        kind: NetworkKind::Binary,
        expectation: Some(prob),
        true_rank: Some(latent_rank(x)?),
        signature: None,
        sparsity: rho,
        seed,
    })
}

/// Stochastic blockmodel.
///
/// Draws `pi ~ Dirichlet(alpha)`, i.i.d. memberships from `pi`, sets
/// `P = Z B Z^T` and returns `X = U_{1:r} S_{1:r}^{1/2}` from the spectral
/// decomposition of `P` alongside the Bernoulli adjacency matrix.
///
/// The decomposition is computed through the `r x r` matrix
/// `D^{1/2} B D^{1/2}` (`D` = community sizes), which has the same nonzero
/// spectrum as `P`. Empty communities contribute zero columns. `B` must be
/// positive semidefinite so that `P = X X^T` holds; use [`sample_grdpg`] for
/// indefinite structure.
pub fn sample_sbm(spec: &SbmSpec, seed: u64) -> Result<SbmSample> {
    spec.validate()?;
    let n = spec.n;
    let r = spec.alpha.len();
    let b = spec.block_matrix.as_ref();

    let b_eigs = linalg::sym_eigenvalues_desc(b)?;
    let b_scale = b_eigs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if b_eigs.last().copied().unwrap_or(0.0) < -1e-12 * b_scale.max(1.0) {
        return Err(Error::param(
            "sbm block matrix must be positive semidefinite to admit latent positions",
        ));
    }

    let mut rng = rng_from_seed(seed);
    let laws = gamma_laws(&spec.alpha)?;
    let mut pi = vec![0.0; r];
    dirichlet_row(&mut rng, &laws, &mut pi);

    let mut memberships = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = None;
        for (k, &w) in pi.iter().enumerate() {
            acc += w;
            if w > 0.0 && u < acc {
                pick = Some(k);
                break;
            }
        }
        // u can exceed the rounded cumulative sum; fall back to the last
        // community with positive mass
        let k = pick.unwrap_or_else(|| pi.iter().rposition(|&w| w > 0.0).expect("pi has positive mass"));
        memberships.push(k);
    }

    let mut counts = vec![0usize; r];
    for &k in &memberships {
        counts[k] += 1;
    }

    let prob = Mat::from_fn(n, n, |i, j| b[(memberships[i], memberships[j])]);

    // spectral factor through the community-level matrix
    let sqrt_d: Vec<f64> = counts.iter().map(|&c| (c as f64).sqrt()).collect();
    let m = Mat::from_fn(r, r, |i, j| sqrt_d[i] * b[(i, j)] * sqrt_d[j]);
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("sbm eigendecomposition failed: {e:?}")))?;
    let q = evd.U();
    let s = evd.S();
    // faer sorts ascending; column c of X uses eigenpair r-1-c
    let mut x = Mat::zeros(n, r);
    for (i, &k) in memberships.iter().enumerate() {
        if counts[k] == 0 {
            continue;
        }
        for c in 0..r {
            let idx = r - 1 - c;
            let lam = s[idx].max(0.0);
            x[(i, c)] = q[(k, idx)] / sqrt_d[k] * lam.sqrt();
        }
    }

    let a = bernoulli_adjacency(prob.as_ref(), &mut rng);
    let latents = LatentPositions::with_source(x, LatentSource::SbmDerived)?;
    let rank = counts
        .iter()
        .filter(|&&c| c > 0)
        .count()
        .min(linalg::numerical_rank(b, 1e-10)?);
    let network = Network {
        adjacency: a,
        kind: NetworkKind::Binary,
        expectation: Some(prob),
        true_rank: Some(rank),
        signature: None,
        sparsity: 1.0,
        seed,
    };
    Ok(SbmSample {
        network,
        latents,
        pi,
        memberships,
    })
}

/// Symmetric matrix with i.i.d. standard normal entries on and below the
/// diagonal and zero expectation. Scaled by `1/sqrt(n)` it is a Wigner matrix
/// whose spectrum fills `[-2, 2]`.
pub fn wigner(n: usize, seed: u64) -> Result<Network> {
    if n == 0 {
        return Err(Error::param("n must be >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    let a = symmetric_noise(n, Some(NoiseModel::Normal { sigma: 1.0 }), &mut rng);
    Ok(Network {
        adjacency: a,
        kind: NetworkKind::Weighted,
        expectation: Some(Mat::zeros(n, n)),
        true_rank: Some(0),
        signature: None,
        sparsity: 1.0,
        seed,
    })
}
