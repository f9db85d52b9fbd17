//! Scalar Gompertz and logistic growth curves, and the networked Gompertz
//! curve that the worst-case susceptible probability approaches at large
//! times below the Gompertz threshold `q tau`.

use nalgebra::DVector;

use crate::bound::mode_amplitudes;
use crate::dynamics::{Model, Trajectory};
use crate::error::{Error, Result};
use crate::params::EpidemicParams;
use crate::spectral::{classify, epidemic_threshold, Regime, SpectralData};

/// `f(t) = P exp(-Q e^{-R t})`.
pub fn scalar_gompertz(p: f64, q: f64, r: f64, t: f64) -> f64 {
    p * (-q * (-r * t).exp()).exp()
}

/// `f'(t) = Q R e^{-R t} f(t)`.
pub fn scalar_gompertz_density(p: f64, q: f64, r: f64, t: f64) -> f64 {
    let decay = (-r * t).exp();
    q * r * decay * p * (-q * decay).exp()
}

/// Logistic solution of `N' = R N (1 - N / N_inf)` with `N(0) = N0`.
pub fn scalar_logistic(n0: f64, n_inf: f64, r: f64, t: f64) -> f64 {
    n_inf / (1.0 + (n_inf / n0 - 1.0) * (-r * t).exp())
}

pub fn scalar_logistic_density(n0: f64, n_inf: f64, r: f64, t: f64) -> f64 {
    let n = scalar_logistic(n0, n_inf, r, t);
    r * n * (1.0 - n / n_inf)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarGompertz {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl ScalarGompertz {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0 && r > 0.0) {
            return Err(Error::InvalidParams(format!(
                "Gompertz needs P, Q, R > 0, got ({p}, {q}, {r})"
            )));
        }
        Ok(Self { p, q, r })
    }

    pub fn value(&self, t: f64) -> f64 {
        scalar_gompertz(self.p, self.q, self.r, t)
    }

    pub fn density(&self, t: f64) -> f64 {
        scalar_gompertz_density(self.p, self.q, self.r, t)
    }

    /// `(log Q / R, P / e)`.
    pub fn inflection(&self) -> (f64, f64) {
        (self.q.ln() / self.r, self.p / std::f64::consts::E)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarLogistic {
    pub n0: f64,
    pub n_inf: f64,
    pub r: f64,
}

impl ScalarLogistic {
    pub fn new(n0: f64, n_inf: f64, r: f64) -> Result<Self> {
        if !(n0 > 0.0 && n0 < n_inf && r > 0.0) {
            return Err(Error::InvalidParams(format!(
                "logistic needs 0 < N0 < N_inf and R > 0, got ({n0}, {n_inf}, {r})"
            )));
        }
        Ok(Self { n0, n_inf, r })
    }

    pub fn value(&self, t: f64) -> f64 {
        scalar_logistic(self.n0, self.n_inf, self.r, t)
    }

    pub fn density(&self, t: f64) -> f64 {
        scalar_logistic_density(self.n0, self.n_inf, self.r, t)
    }

    /// `((1/R) log(N_inf/N0 - 1), N_inf / 2)`.
    pub fn inflection(&self) -> (f64, f64) {
        ((self.n_inf / self.n0 - 1.0).ln() / self.r, self.n_inf / 2.0)
    }
}

/// The mean-field SIS curve and its Gompertz counterpart for one set of
/// scalar rates: `N_inf = 1 - gamma/beta`, `R = beta - gamma`,
/// `P = N_inf`, `Q = log(N_inf / N0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarPair {
    pub logistic: ScalarLogistic,
    pub gompertz: ScalarGompertz,
}

impl ScalarPair {
    pub fn from_rates(beta: f64, gamma: f64, n0: f64) -> Result<Self> {
        if !(beta > gamma && gamma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "scalar SIS needs beta > gamma >= 0, got beta = {beta}, gamma = {gamma}"
            )));
        }
        let n_inf = 1.0 - gamma / beta;
        let r = beta - gamma;
        Ok(Self {
            logistic: ScalarLogistic::new(n0, n_inf, r)?,
            gompertz: ScalarGompertz::new(n_inf, (n_inf / n0).ln(), r)?,
        })
    }
}

/// Per-node parameters of the networked Gompertz curve
/// `s_i(t) = P_i exp(-Q_i e^{-R t})`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetGompertzParams {
    /// `P_i = q exp(sum_nu alpha_nu zeta_nu(i))`.
    pub carrying: Vec<f64>,
    /// `Q_i = alpha_1 zeta_1(i)`.
    pub shape: Vec<f64>,
    /// `R = (gamma/q)(1 - q^2 beta_e lambda_1)`.
    pub rate: f64,
    pub alpha: DVector<f64>,
    pub zeta1: Vec<f64>,
    pub tau: f64,
    pub q_tau: f64,
    pub regime: Regime,
    /// Asymptotic susceptible probability; equals `carrying` below threshold.
    pub s_inf: Vec<f64>,
}

/// Computes the Gompertz parameters for any `gamma > 0`.
///
/// Outside the Gompertz regime the numbers are still returned for
/// diagnostics, but the curve evaluators refuse to run.
pub fn net_gompertz_params(spectral: &SpectralData, params: &EpidemicParams) -> Result<NetGompertzParams> {
    let beta_e = params
        .beta_e()
        .ok_or_else(|| Error::InvalidParams("networked Gompertz parameters need gamma > 0".into()))?;
    let q = params.q();
    let lambda1 = spectral.lambda1();
    let regime = classify(lambda1, params)?;
    let th = epidemic_threshold(lambda1, q);
    let alpha = mode_amplitudes(spectral, params)?;
    let zeta = spectral.zeta();
    let exponent = zeta * &alpha;
    let carrying: Vec<f64> = exponent.iter().map(|e| q * e.exp()).collect();
    let zeta1: Vec<f64> = zeta.column(0).iter().copied().collect();
    let shape = zeta1.iter().map(|z| alpha[0] * z).collect();
    Ok(NetGompertzParams {
        s_inf: carrying.clone(),
        carrying,
        shape,
        rate: params.gamma() / q * (1.0 - q * q * beta_e * lambda1),
        alpha,
        zeta1,
        tau: th.tau,
        q_tau: th.q_tau,
        regime,
    })
}

/// Susceptible and infected networked Gompertz curves on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GompertzCurves {
    pub susceptible: Trajectory,
    pub infected: Trajectory,
}

impl NetGompertzParams {
    pub fn n(&self) -> usize {
        self.carrying.len()
    }

    fn require_gompertz(&self, what: &'static str) -> Result<()> {
        if self.regime != Regime::Gompertz {
            return Err(Error::WrongRegime {
                what,
                found: self.regime.to_string(),
            });
        }
        Ok(())
    }

    pub fn susceptible_at(&self, t: f64) -> Vec<f64> {
        let decay = (-self.rate * t).exp();
        self.carrying
            .iter()
            .zip(&self.shape)
            .map(|(p, q)| p * (-q * decay).exp())
            .collect()
    }

    pub fn net_gompertz_susceptible(&self, times: &[f64]) -> Result<GompertzCurves> {
        self.require_gompertz("the networked Gompertz curve")?;
        let susceptible = Trajectory {
            model: Model::Gompertz,
            times: times.to_vec(),
            values: times.iter().map(|&t| self.susceptible_at(t)).collect(),
        };
        let infected = susceptible.map(Model::Gompertz, |s| 1.0 - s);
        Ok(GompertzCurves { susceptible, infected })
    }

    /// Analytic time derivative of the infected curve, `-s_i Q_i R e^{-R t}`.
    pub fn infected_density(&self, times: &[f64]) -> Result<Trajectory> {
        self.require_gompertz("the networked Gompertz density")?;
        let values = times
            .iter()
            .map(|&t| {
                let decay = (-self.rate * t).exp();
                self.susceptible_at(t)
                    .iter()
                    .zip(&self.shape)
                    .map(|(s, q)| -s * q * self.rate * decay)
                    .collect()
            })
            .collect();
        Ok(Trajectory {
            model: Model::Gompertz,
            times: times.to_vec(),
            values,
        })
    }

    /// Per-node inflection times `log(Q_i) / R`; negative values are legal.
    pub fn inflection_times(&self) -> Result<Vec<f64>> {
        self.require_gompertz("inflection times")?;
        self.shape
            .iter()
            .enumerate()
            .map(|(i, &q)| {
                if q > 0.0 {
                    Ok(q.ln() / self.rate)
                } else {
                    Err(Error::Domain(format!("Q_{i} = {q} is not positive")))
                }
            })
            .collect()
    }
}

/// Leading-mode approximation of the worst-case susceptible probability
/// above threshold, `q exp(-alpha_1 zeta_1(i) e^{-(gamma/q)(1 - q^2 beta_e lambda_1) t})`.
pub fn supercritical_asymptote(spectral: &SpectralData, params: &EpidemicParams, t: f64) -> Result<Vec<f64>> {
    let regime = classify(spectral.lambda1(), params)?;
    if regime != Regime::Supercritical {
        return Err(Error::WrongRegime {
            what: "the supercritical asymptote",
            found: regime.to_string(),
        });
    }
    let beta_e = params.beta_e().expect("supercritical implies gamma > 0");
    let q = params.q();
    let alpha1 = mode_amplitudes(spectral, params)?[0];
    let growth = (-(params.gamma() / q) * (1.0 - q * q * beta_e * spectral.lambda1()) * t).exp();
    Ok(spectral
        .zeta()
        .column(0)
        .iter()
        .map(|z| q * (-alpha1 * z * growth).exp())
        .collect())
}
