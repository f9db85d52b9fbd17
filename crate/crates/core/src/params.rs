use crate::error::{Error, Result};

/// Infection rate `beta`, recovery rate `gamma` and the uniform initial
/// infection probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicParams {
    beta: f64,
    gamma: f64,
    p: f64,
}

impl EpidemicParams {
    pub fn new(beta: f64, gamma: f64, p: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParams(format!("beta must be >= 0, got {beta}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParams(format!("gamma must be >= 0, got {gamma}")));
        }
        if beta == 0.0 && gamma == 0.0 {
            return Err(Error::InvalidParams("beta and gamma cannot both be zero".into()));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("p must lie in (0, 1), got {p}")));
        }
        Ok(Self { beta, gamma, p })
    }

    /// Builds parameters from the effective infectivity `beta_e = beta / gamma`.
    pub fn from_effective(beta_e: f64, gamma: f64, p: f64) -> Result<Self> {
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::InvalidParams("gamma must be > 0 to use beta_e".into()));
        }
        Self::new(beta_e * gamma, gamma, p)
    }

    /// Skips validation of `p`, so that `p = 0` can be exercised.
    #[doc(hidden)]
    pub fn new_unchecked(beta: f64, gamma: f64, p: f64) -> Self {
        Self { beta, gamma, p }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `beta / gamma`, undefined when `gamma = 0`.
    pub fn beta_e(&self) -> Option<f64> {
        (self.gamma > 0.0).then(|| self.beta / self.gamma)
    }
}
