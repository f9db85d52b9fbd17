//! Closed-form worst-case surprisal `I_hat(t)` and its probability `x_hat(t)`.
//!
//! The bound solves the linear system `dI/dt = B I + b` with
//! `B = q beta A - (gamma/q) I` and
//! `b = [(p + q log q) beta A - (p + log q)(gamma/q) I] u`, started from
//! `I(0) = -log(q) u`. Since `B` shares eigenvectors with `A`, the solution
//! reduces to independent modes:
//!
//! ```text
//! I_hat(t) = sum_nu zeta_nu * alpha_nu * (exp(mu_nu t) - 1) - log(q) u
//! mu_nu    = q beta lambda_nu - gamma / q
//! alpha_nu = p (beta lambda_nu - gamma/q) / mu_nu
//! ```
//!
//! which for `gamma > 0` is `alpha_nu = (p - p q beta_e lambda_nu) / (1 - q^2 beta_e lambda_nu)`.
//! For `gamma = 0` the ratio cancels to `p / q` for every mode, including
//! `lambda_nu = 0`.
//!
//! [`BoundSystem::bound_surprisal`] is the modal evaluation. The other
//! `surprisal_*` methods are the matrix forms (variation of parameters,
//! shifted equilibrium, `D` resolvent, Katz) kept as independent routes.

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{from_surprisal, Model, Trajectory};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::EpidemicParams;
use crate::spectral::{katz_centrality, SpectralData, THRESHOLD_EPS};

/// Assembled worst-case linear system for one graph and parameter set.
#[derive(Debug, Clone)]
pub struct BoundSystem<'a> {
    spectral: &'a SpectralData,
    params: EpidemicParams,
    b_matrix: DMatrix<f64>,
    b_vector: DVector<f64>,
    d_matrix: Option<DMatrix<f64>>,
    rates: DVector<f64>,
    amplitudes: DVector<f64>,
    resonance: Option<(usize, f64)>,
}

pub fn build_system<'a>(spectral: &'a SpectralData, params: &EpidemicParams) -> BoundSystem<'a> {
    BoundSystem::new(spectral, params)
}

/// Per-mode amplitudes `alpha_nu`; fails on a resonant mode.
pub fn mode_amplitudes(spectral: &SpectralData, params: &EpidemicParams) -> Result<DVector<f64>> {
    let (amplitudes, resonance) = amplitudes(spectral, params);
    match resonance {
        Some((mode, gap)) => Err(Error::SingularMode { mode, gap }),
        None => Ok(amplitudes),
    }
}

fn amplitudes(spectral: &SpectralData, params: &EpidemicParams) -> (DVector<f64>, Option<(usize, f64)>) {
    let (p, q) = (params.p(), params.q());
    let mut resonance = None;
    let amplitudes = match params.beta_e() {
        None => DVector::from_element(spectral.n(), p / q),
        Some(beta_e) => DVector::from_iterator(
            spectral.n(),
            spectral.eigenvalues().iter().enumerate().map(|(nu, &lambda)| {
                let gap = 1.0 - q * q * beta_e * lambda;
                if gap.abs() < THRESHOLD_EPS && resonance.is_none() {
                    resonance = Some((nu, gap));
                }
                p * (1.0 - q * beta_e * lambda) / gap
            }),
        ),
    };
    (amplitudes, resonance)
}

impl<'a> BoundSystem<'a> {
    pub fn new(spectral: &'a SpectralData, params: &EpidemicParams) -> Self {
        let n = spectral.n();
        let (beta, gamma, p, q) = (params.beta(), params.gamma(), params.p(), params.q());
        let log_q = q.ln();
        let u = DVector::from_element(n, 1.0);

        let b_matrix = spectral.matrix_function(|lambda| q * beta * lambda - gamma / q);
        let b_vector = spectral.apply(
            |lambda| (p + q * log_q) * beta * lambda - (p + log_q) * gamma / q,
            &u,
        );
        let d_matrix = params
            .beta_e()
            .map(|beta_e| spectral.matrix_function(|lambda| 1.0 - q * q * beta_e * lambda));
        let rates = spectral.eigenvalues().map(|lambda| q * beta * lambda - gamma / q);
        let (amplitudes, resonance) = amplitudes(spectral, params);

        Self {
            spectral,
            params: *params,
            b_matrix,
            b_vector,
            d_matrix,
            rates,
            amplitudes,
            resonance,
        }
    }

    pub fn params(&self) -> &EpidemicParams {
        &self.params
    }

    pub fn spectral(&self) -> &SpectralData {
        self.spectral
    }

    /// `B = q beta A - (gamma/q) I`.
    pub fn b_matrix(&self) -> &DMatrix<f64> {
        &self.b_matrix
    }

    pub fn b_vector(&self) -> &DVector<f64> {
        &self.b_vector
    }

    /// `D = I - q^2 beta_e A`, present when `gamma > 0`.
    pub fn d_matrix(&self) -> Option<&DMatrix<f64>> {
        self.d_matrix.as_ref()
    }

    /// Eigenvalues of `B` in the order of the adjacency spectrum.
    pub fn rates(&self) -> &DVector<f64> {
        &self.rates
    }

    pub fn amplitudes(&self) -> Result<&DVector<f64>> {
        self.check_resonance()?;
        Ok(&self.amplitudes)
    }

    fn check_resonance(&self) -> Result<()> {
        match self.resonance {
            Some((mode, gap)) => Err(Error::SingularMode { mode, gap }),
            None => Ok(()),
        }
    }

    fn minus_log_q(&self) -> DVector<f64> {
        DVector::from_element(self.spectral.n(), -self.params.q().ln())
    }

    /// Modal evaluation of the worst-case surprisal at time `t`.
    pub fn bound_surprisal(&self, t: f64) -> Result<DVector<f64>> {
        self.check_resonance()?;
        let eta = self
            .amplitudes
            .zip_map(&self.rates, |alpha, mu| alpha * (mu * t).exp_m1());
        Ok(self.spectral.combine_modes(&eta) + self.minus_log_q())
    }

    /// `x_hat = 1 - exp(-I_hat)` on every grid time.
    pub fn bound_probability(&self, times: &[f64]) -> Result<Trajectory> {
        let values = times
            .iter()
            .map(|&t| {
                self.bound_surprisal(t)
                    .map(|info| info.iter().map(|&v| from_surprisal(v)).collect())
            })
            .collect::<Result<_>>()?;
        Ok(Trajectory {
            model: Model::Bound,
            times: times.to_vec(),
            values,
        })
    }

    fn exp_b(&self, t: f64) -> DMatrix<f64> {
        let (beta, gamma, q) = (self.params.beta(), self.params.gamma(), self.params.q());
        self.spectral
            .matrix_function(|lambda| ((q * beta * lambda - gamma / q) * t).exp())
    }

    fn b_inverse_b(&self) -> Result<DVector<f64>> {
        self.check_resonance()?;
        if let Some(mode) = self.rates.iter().position(|mu| mu.abs() < THRESHOLD_EPS) {
            return Err(Error::SingularMode {
                mode,
                gap: self.rates[mode],
            });
        }
        self.b_matrix
            .clone()
            .lu()
            .solve(&self.b_vector)
            .ok_or_else(|| Error::LinearSolve("B is singular".into()))
    }

    /// `e^{Bt} I_0 + (e^{Bt} - I) B^-1 b`.
    pub fn surprisal_variation_of_parameters(&self, t: f64) -> Result<DVector<f64>> {
        let n = self.spectral.n();
        let shift = self.b_inverse_b()?;
        let exp_bt = self.exp_b(t);
        Ok(&exp_bt * self.minus_log_q() + (exp_bt - DMatrix::identity(n, n)) * shift)
    }

    /// `e^{Bt} [B^-1 b - log(q) u] - B^-1 b`.
    pub fn surprisal_shifted(&self, t: f64) -> Result<DVector<f64>> {
        let shift = self.b_inverse_b()?;
        let log_q = self.params.q().ln();
        Ok(self.exp_b(t) * shift.add_scalar(-log_q) - shift)
    }

    fn exp_minus_d(&self, t: f64) -> Result<DMatrix<f64>> {
        let beta_e = self.params.beta_e().ok_or_else(|| {
            Error::Unsupported("the D-resolvent form needs gamma > 0".into())
        })?;
        let (gamma, q) = (self.params.gamma(), self.params.q());
        Ok(self
            .spectral
            .matrix_function(|lambda| (-(gamma / q) * (1.0 - q * q * beta_e * lambda) * t).exp()))
    }

    /// `(p/q) [e^{-(gamma/q) D t} - I] [I - p D^-1] u - log(q) u`.
    pub fn surprisal_resolvent(&self, t: f64) -> Result<DVector<f64>> {
        self.check_resonance()?;
        let n = self.spectral.n();
        let (p, q) = (self.params.p(), self.params.q());
        let d = self
            .d_matrix
            .clone()
            .ok_or_else(|| Error::Unsupported("the D-resolvent form needs gamma > 0".into()))?;
        let u = DVector::from_element(n, 1.0);
        let d_inv_u = d
            .lu()
            .solve(&u)
            .ok_or_else(|| Error::LinearSolve("D is singular".into()))?;
        let inner = &u - d_inv_u * p;
        let outer = self.exp_minus_d(t)? - DMatrix::identity(n, n);
        Ok(outer * inner * (p / q) + self.minus_log_q())
    }

    /// `p [e^{-(gamma/q) D t} - I] [u - (p/q) c] - log(q) u`, with `c` the
    /// Katz centrality at attenuation `q^2 beta_e`.
    pub fn bound_surprisal_katz(&self, graph: &Graph, t: f64) -> Result<DVector<f64>> {
        let n = self.spectral.n();
        let (p, q) = (self.params.p(), self.params.q());
        let beta_e = self
            .params
            .beta_e()
            .ok_or_else(|| Error::Unsupported("the Katz form needs gamma > 0".into()))?;
        let katz = katz_centrality(graph, self.spectral, q * q * beta_e)?;
        let inner = DVector::from_element(n, 1.0) - katz * (p / q);
        let outer = self.exp_minus_d(t)? - DMatrix::identity(n, n);
        Ok(outer * inner * p + self.minus_log_q())
    }

    /// Limit of `I_hat` as `t -> infinity` when every mode decays.
    pub fn stationary_surprisal(&self) -> Result<Option<DVector<f64>>> {
        self.check_resonance()?;
        if self.rates.iter().any(|&mu| mu >= 0.0) {
            return Ok(None);
        }
        Ok(Some(self.spectral.combine_modes(&(-&self.amplitudes)) + self.minus_log_q()))
    }
}

/// Asymptotic level `1 - q e^p` of `x_hat` when `beta = 0`.
pub fn decay_floor(p: f64) -> f64 {
    let q = 1.0 - p;
    p - q * p.exp_m1()
}

/// [`decay_floor`] for parameters with `beta = 0`.
pub fn remark2_limit(params: &EpidemicParams) -> Result<f64> {
    if params.beta() != 0.0 {
        return Err(Error::InvalidParams("the decay floor applies only when beta = 0".into()));
    }
    Ok(decay_floor(params.p()))
}
