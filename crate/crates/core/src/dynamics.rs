//! Time integration of the networked SIS and surprisal (IC-SIS) equations,
//! plus the spectral evaluation of the linearized solution.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::EpidemicParams;
use crate::spectral::SpectralData;

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_MAX: f64 = 150.0;

const SIS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Sis,
    IcSis,
    Bound,
    Linearized,
    Gompertz,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::Sis,
        Model::IcSis,
        Model::Bound,
        Model::Linearized,
        Model::Gompertz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Sis => "sis",
            Model::IcSis => "icsis",
            Model::Bound => "bound",
            Model::Linearized => "linearized",
            Model::Gompertz => "gompertz",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParams(format!("unknown model `{s}`")))
    }
}

/// Uniform time grid `0, dt, 2 dt, ..., t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    /// `t_max` must be a whole multiple of `dt` (relative slack 1e-9).
    pub fn new(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidParams(format!("t_max must be > 0, got {t_max}")));
        }
        let ratio = t_max / dt;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) || steps < 1.0 {
            return Err(Error::InvalidParams(format!(
                "t_max = {t_max} is not a multiple of dt = {dt}"
            )));
        }
        Ok(Self {
            dt,
            steps: steps as usize,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of steps; the grid has `steps + 1` points.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }
}

/// Per-node values of one model sampled on a time grid.
///
/// `values[k][i]` is the value of node `i` at `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: Model,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn n_nodes(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn node_series(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[i]).collect()
    }

    pub fn last(&self) -> &[f64] {
        self.values.last().map_or(&[], Vec::as_slice)
    }

    pub fn map(&self, model: Model, f: impl Fn(f64) -> f64) -> Trajectory {
        Trajectory {
            model,
            times: self.times.clone(),
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }
}

/// Surprisal values `I_i(t)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurprisalTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl SurprisalTrajectory {
    /// Maps back to infection probabilities `1 - exp(-I)`.
    pub fn to_probability(&self) -> Trajectory {
        Trajectory {
            model: Model::IcSis,
            times: self.times.clone(),
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(|&v| from_surprisal(v)).collect())
                .collect(),
        }
    }
}

/// Information content `-log(1 - x)` that a node is susceptible.
pub fn surprisal(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("surprisal needs 0 <= x < 1, got {x}")));
    }
    Ok(-(-x).ln_1p())
}

/// Inverse of [`surprisal`].
pub fn from_surprisal(info: f64) -> f64 {
    -(-info).exp_m1()
}

/// Classical fixed-step fourth-order Runge-Kutta.
///
/// `rhs(y, dy)` writes the derivative. `check(k, t, y)` runs after every step
/// and can abort the integration.
pub fn rk4<F, C>(y0: &[f64], grid: TimeGrid, mut rhs: F, mut check: C) -> Result<Vec<Vec<f64>>>
where
    F: FnMut(&[f64], &mut [f64]),
    C: FnMut(f64, &[f64]) -> Result<()>,
{
    let n = y0.len();
    let dt = grid.dt();
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut scratch = vec![0.0; n];
    check(0.0, &y)?;
    out.push(y.clone());
    for step in 1..=grid.steps() {
        rhs(&y, &mut k1);
        for i in 0..n {
            scratch[i] = y[i] + 0.5 * dt * k1[i];
        }
        rhs(&scratch, &mut k2);
        for i in 0..n {
            scratch[i] = y[i] + 0.5 * dt * k2[i];
        }
        rhs(&scratch, &mut k3);
        for i in 0..n {
            scratch[i] = y[i] + dt * k3[i];
        }
        rhs(&scratch, &mut k4);
        for i in 0..n {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check(grid.time(step), &y)?;
        out.push(y.clone());
    }
    Ok(out)
}

/// Right-hand side of the networked SIS equations,
/// `dx_i = beta (1 - x_i) sum_j A_ij x_j - gamma x_i`.
pub fn sis_rhs(graph: &Graph, params: &EpidemicParams, x: &[f64], dx: &mut [f64]) {
    let (beta, gamma) = (params.beta(), params.gamma());
    for (i, d) in dx.iter_mut().enumerate() {
        let pressure: f64 = graph.neighbors(i).iter().map(|&j| x[j]).sum();
        *d = beta * (1.0 - x[i]) * pressure - gamma * x[i];
    }
}

/// Right-hand side of the surprisal form,
/// `dI_i = beta sum_j A_ij (1 - e^-I_j) - gamma (e^I_i - 1)`.
pub fn icsis_rhs(graph: &Graph, params: &EpidemicParams, info: &[f64], d_info: &mut [f64]) {
    let (beta, gamma) = (params.beta(), params.gamma());
    for (i, d) in d_info.iter_mut().enumerate() {
        let pressure: f64 = graph
            .neighbors(i)
            .iter()
            .map(|&j| from_surprisal(info[j]))
            .sum();
        *d = beta * pressure - gamma * info[i].exp_m1();
    }
}

/// Integrates the exact SIS dynamics from `x(0) = p u` with RK4.
pub fn integrate_sis(graph: &Graph, params: &EpidemicParams, grid: TimeGrid) -> Result<Trajectory> {
    let y0 = vec![params.p(); graph.n()];
    let values = rk4(
        &y0,
        grid,
        |x, dx| sis_rhs(graph, params, x, dx),
        |t, x| {
            match x
                .iter()
                .position(|v| !(-SIS_SLACK..=1.0 + SIS_SLACK).contains(v))
            {
                Some(node) => Err(Error::Instability {
                    time: t,
                    node,
                    value: x[node],
                }),
                None => Ok(()),
            }
        },
    )?;
    Ok(Trajectory {
        model: Model::Sis,
        times: grid.times(),
        values,
    })
}

/// Integrates the surprisal dynamics from `I(0) = -log(q) u` with RK4.
pub fn integrate_icsis(
    graph: &Graph,
    params: &EpidemicParams,
    grid: TimeGrid,
) -> Result<SurprisalTrajectory> {
    let y0 = vec![-params.q().ln(); graph.n()];
    let values = rk4(
        &y0,
        grid,
        |info, d| icsis_rhs(graph, params, info, d),
        |t, info| match info.iter().position(|v| !v.is_finite() || v.exp().is_infinite()) {
            Some(node) => Err(Error::Instability {
                time: t,
                node,
                value: info[node],
            }),
            None => Ok(()),
        },
    )?;
    Ok(SurprisalTrajectory {
        times: grid.times(),
        values,
    })
}

/// `x(t) = exp[(beta A - gamma I) t] p u`, evaluated in the eigenbasis.
///
/// The linearization diverges above threshold; values are not clipped.
pub fn linearized_solution(spectral: &SpectralData, params: &EpidemicParams, times: &[f64]) -> Trajectory {
    let n = spectral.n();
    let x0 = DVector::from_element(n, params.p());
    let (beta, gamma) = (params.beta(), params.gamma());
    let values = times
        .iter()
        .map(|&t| {
            spectral
                .apply(|lambda| ((beta * lambda - gamma) * t).exp(), &x0)
                .iter()
                .copied()
                .collect()
        })
        .collect();
    Trajectory {
        model: Model::Linearized,
        times: times.to_vec(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::spectral::decompose;

    #[test]
    fn surprisal_values() {
        assert_eq!(surprisal(0.0).unwrap(), 0.0);
        let x = 1.0 - (-1.0f64).exp();
        assert!((surprisal(x).unwrap() - 1.0).abs() < 1e-15);
        for x in [0.01, 0.5, 0.99] {
            assert!((from_surprisal(surprisal(x).unwrap()) - x).abs() < 1e-14);
        }
        assert!(matches!(surprisal(1.0), Err(Error::Domain(_))));
        assert!(matches!(surprisal(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_rules() {
        let g = TimeGrid::new(1.0, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert!((g.t_max() - 1.0).abs() < 1e-12);
        assert!(TimeGrid::new(1.0, 0.3).is_err());
        assert!(TimeGrid::new(1.0, 0.0).is_err());
        assert!(TimeGrid::new(-1.0, 0.1).is_err());
        let times = TimeGrid::new(150.0, 0.01).unwrap().times();
        for w in times.windows(2) {
            assert!((w[1] - w[0] - 0.01).abs() < 1e-12);
        }
    }

    #[test]
    fn model_names_roundtrip() {
        for m in Model::ALL {
            assert_eq!(m.name().parse::<Model>().unwrap(), m);
        }
        assert!("seir".parse::<Model>().is_err());
    }

    #[test]
    fn pure_decay_without_infection() {
        let g = fixtures::barbell(3, 2);
        let params = EpidemicParams::new(0.0, 0.3, 0.2).unwrap();
        let traj = integrate_sis(&g, &params, TimeGrid::new(20.0, 0.01).unwrap()).unwrap();
        for (t, row) in traj.times.iter().zip(&traj.values) {
            let exact = 0.2 * (-0.3 * t).exp();
            assert!(row.iter().all(|v| (v - exact).abs() < 1e-8));
        }
    }

    #[test]
    fn k2_reaches_logistic_fixed_point() {
        let g = fixtures::complete(2);
        let params = EpidemicParams::new(0.5, 0.2, 0.05).unwrap();
        let traj = integrate_sis(&g, &params, TimeGrid::new(200.0, 0.01).unwrap()).unwrap();
        for row in &traj.values {
            assert_eq!(row[0], row[1]);
        }
        let last = traj.last();
        assert!((last[0] - (1.0 - 0.2 / 0.5)).abs() < 1e-6);
    }

    #[test]
    fn zero_seed_stays_zero() {
        let g = fixtures::cycle(5);
        let params = EpidemicParams::new_unchecked(0.4, 0.1, 0.0);
        let traj = integrate_sis(&g, &params, TimeGrid::new(10.0, 0.1).unwrap()).unwrap();
        assert!(traj.values.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn huge_step_is_reported_as_instability() {
        let g = fixtures::complete(6);
        let params = EpidemicParams::new(5.0, 0.1, 0.5).unwrap();
        let err = integrate_sis(&g, &params, TimeGrid::new(10.0, 2.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Instability { .. }));
        assert!(err.is_numerical());
    }

    #[test]
    fn icsis_starts_at_minus_log_q() {
        let g = fixtures::star(6);
        let params = EpidemicParams::new(0.2, 0.1, 0.3).unwrap();
        let traj = integrate_icsis(&g, &params, TimeGrid::new(1.0, 0.1).unwrap()).unwrap();
        assert!(traj.values[0].iter().all(|&v| v == -(0.7f64).ln()));
    }

    #[test]
    fn linearized_special_cases() {
        let g = fixtures::complete(2);
        let s = decompose(&g).unwrap();
        let times = [0.0, 1.0, 5.0, 10.0];
        let flat = linearized_solution(&s, &EpidemicParams::new(0.3, 0.3, 0.2).unwrap(), &times);
        for row in &flat.values {
            assert!(row.iter().all(|v| (v - 0.2).abs() < 1e-12));
        }
        let decay = linearized_solution(&s, &EpidemicParams::new(0.0, 0.3, 0.2).unwrap(), &times);
        for (t, row) in times.iter().zip(&decay.values) {
            assert!(row.iter().all(|v| (v - 0.2 * (-0.3 * t).exp()).abs() < 1e-12));
        }
        assert!(flat.values[0].iter().all(|v| (v - 0.2).abs() < 1e-14));
    }
}
