//! Eigendecomposition of the adjacency matrix and the quantities derived from
//! its spectrum: the worst-case epidemic threshold, regime classification,
//! Katz centrality and the per-node mode weights `zeta`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::EpidemicParams;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 0;
const ORTHO_TOL: f64 = 1e-10;
const RECON_TOL: f64 = 1e-8;

/// Tolerance used for threshold and resonance equality tests.
pub const THRESHOLD_EPS: f64 = 1e-12;

/// Full spectrum of a symmetric adjacency matrix.
///
/// Eigenvalues are sorted in descending order. Column `nu` of
/// `eigenvectors` is the orthonormal eigenvector for `eigenvalues[nu]`. The
/// Perron vector (column 0) is entrywise nonnegative; every other column has
/// its first non-negligible entry positive.
#[derive(Debug, Clone)]
pub struct SpectralData {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
    /// `u . psi_nu` for each mode.
    mode_weights: DVector<f64>,
    /// `zeta[(i, nu)] = psi_nu(i) * sum_j psi_nu(j)`.
    zeta: DMatrix<f64>,
}

/// Decomposes the adjacency matrix of `graph`.
pub fn decompose(graph: &Graph) -> Result<SpectralData> {
    SpectralData::from_symmetric(graph.adjacency().clone())
}

impl SpectralData {
    pub fn from_symmetric(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        let original = matrix.clone();
        let eig = matrix
            .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or(Error::EigenFailure { residual: f64::NAN })?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            let mut v = eig.eigenvectors.column(k).into_owned();
            let flip = if col == 0 {
                v.sum() < 0.0
            } else {
                v.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0)
            };
            if flip {
                v.neg_mut();
            }
            eigenvectors.set_column(col, &v);
        }

        let ortho = (eigenvectors.transpose() * &eigenvectors - DMatrix::identity(n, n)).amax();
        let recon = (&eigenvectors * DMatrix::from_diagonal(&eigenvalues) * eigenvectors.transpose()
            - &original)
            .amax();
        if !(ortho < ORTHO_TOL && recon < RECON_TOL) {
            return Err(Error::EigenFailure {
                residual: ortho.max(recon),
            });
        }

        let mode_weights = eigenvectors.row_sum().transpose();
        let mut zeta = eigenvectors.clone();
        for (nu, mut col) in zeta.column_iter_mut().enumerate() {
            col *= mode_weights[nu];
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
            mode_weights,
            zeta,
        })
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Spectral radius (largest eigenvalue).
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Projections `psi_nu . u` of the all-ones vector onto each mode.
    pub fn mode_weights(&self) -> &DVector<f64> {
        &self.mode_weights
    }

    /// Table with rows indexed by node and columns by mode.
    pub fn zeta(&self) -> &DMatrix<f64> {
        &self.zeta
    }

    /// `M diag(coeffs) M^T u`: combines per-mode coefficients into node values.
    pub fn combine_modes(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.zeta * coeffs
    }

    /// `M diag(f(lambda)) M^T v`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, v: &DVector<f64>) -> DVector<f64> {
        let mut projected = self.eigenvectors.tr_mul(v);
        for (c, &lambda) in projected.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= f(lambda);
        }
        &self.eigenvectors * projected
    }

    /// Dense `M diag(f(lambda)) M^T`.
    pub fn matrix_function<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let diag = self.eigenvalues.map(f);
        let scaled = &self.eigenvectors * DMatrix::from_diagonal(&diag);
        scaled * self.eigenvectors.transpose()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.matrix_function(|lambda| lambda)
    }
}

/// Worst-case threshold `tau = 1 / (q^2 lambda1)` and the Gompertz boundary
/// `q tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub tau: f64,
    pub q_tau: f64,
}

pub fn epidemic_threshold(lambda1: f64, q: f64) -> Threshold {
    assert!(lambda1 > 0.0, "spectral radius of a connected graph with an edge is positive");
    let tau = 1.0 / (q * q * lambda1);
    Threshold { tau, q_tau: q * tau }
}

pub fn threshold_tau(spectral: &SpectralData, params: &EpidemicParams) -> Threshold {
    epidemic_threshold(spectral.lambda1(), params.q())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `beta_e < q tau`: the bound is a networked Gompertz curve.
    Gompertz,
    /// `q tau < beta_e < tau`: bounded, but the leading coefficient is negative.
    BoundedNonGompertz,
    /// `beta_e > tau`: the bound saturates at full infection.
    Supercritical,
    /// `gamma = 0`.
    SiLimit,
    /// `beta = 0`.
    DecayLimit,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Gompertz => "GOMPERTZ",
            Regime::BoundedNonGompertz => "BOUNDED_NON_GOMPERTZ",
            Regime::Supercritical => "SUPERCRITICAL",
            Regime::SiLimit => "SI_LIMIT",
            Regime::DecayLimit => "DECAY_LIMIT",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn classify_regime(spectral: &SpectralData, params: &EpidemicParams) -> Result<Regime> {
    classify(spectral.lambda1(), params)
}

pub(crate) fn classify(lambda1: f64, params: &EpidemicParams) -> Result<Regime> {
    if params.beta() == 0.0 {
        return Ok(Regime::DecayLimit);
    }
    let Some(beta_e) = params.beta_e() else {
        return Ok(Regime::SiLimit);
    };
    let th = epidemic_threshold(lambda1, params.q());
    for (name, bound) in [("q tau", th.q_tau), ("tau", th.tau)] {
        if (beta_e - bound).abs() < THRESHOLD_EPS {
            return Err(Error::Degenerate(format!("beta_e = {beta_e} equals {name} = {bound}")));
        }
    }
    Ok(if beta_e < th.q_tau {
        Regime::Gompertz
    } else if beta_e < th.tau {
        Regime::BoundedNonGompertz
    } else {
        Regime::Supercritical
    })
}

/// Katz centrality `c = [(I - alpha A)^-1 - I] u`.
///
/// Solved as `(I - alpha A) c = alpha A u` with partial-pivoting LU; no
/// explicit inverse is formed.
pub fn katz_centrality(graph: &Graph, spectral: &SpectralData, alpha: f64) -> Result<DVector<f64>> {
    let limit = 1.0 / spectral.lambda1();
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidParams(format!("Katz attenuation must be >= 0, got {alpha}")));
    }
    if alpha >= limit - THRESHOLD_EPS {
        return Err(Error::ResolventDivergent { alpha, limit });
    }
    let n = graph.n();
    let a = graph.adjacency();
    let system = DMatrix::identity(n, n) - a * alpha;
    let rhs = a * DVector::from_element(n, alpha);
    system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::LinearSolve("I - alpha A is singular".into()))
}
