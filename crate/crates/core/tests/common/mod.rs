#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use netgompertz::{decompose, EpidemicParams, Graph, SpectralData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: a random spanning tree plus extra edges with
/// probability `extra`.
pub fn random_connected(rng: &mut impl Rng, n: usize, extra: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.random_range(0..i), i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && rng.random_bool(extra) {
                edges.push((i, j));
            }
        }
    }
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    Graph::from_edges(labels, &edges).expect("spanning tree keeps the graph connected")
}

pub fn random_graph(rng: &mut impl Rng, n_min: usize, n_max: usize) -> (Graph, SpectralData) {
    let n = rng.random_range(n_min..=n_max);
    let extra = rng.random_range(0.05..0.4);
    let g = random_connected(rng, n, extra);
    let s = decompose(&g).unwrap();
    (g, s)
}

/// Parameters with `beta_e = fraction * q tau`.
pub fn gompertz_params(rng: &mut impl Rng, lambda1: f64) -> EpidemicParams {
    let p = rng.random_range(0.01..0.3);
    let q = 1.0 - p;
    let gamma = rng.random_range(0.2..1.0);
    let beta_e = rng.random_range(0.1..0.9) / (q * lambda1);
    EpidemicParams::from_effective(beta_e, gamma, p).unwrap()
}

/// Parameters with `beta_e = fraction * tau`, fraction < 1.
pub fn subthreshold_params(rng: &mut impl Rng, lambda1: f64) -> EpidemicParams {
    let p = rng.random_range(0.01..0.3);
    let q = 1.0 - p;
    let gamma = rng.random_range(0.1..1.0);
    let beta_e = rng.random_range(0.1..0.9) / (q * q * lambda1);
    EpidemicParams::from_effective(beta_e, gamma, p).unwrap()
}

/// Parameters with `beta_e` between 1.2 and 2 times tau.
pub fn supercritical_params(rng: &mut impl Rng, lambda1: f64) -> EpidemicParams {
    let p = rng.random_range(0.01..0.2);
    let q = 1.0 - p;
    let gamma = rng.random_range(0.05..0.2);
    let beta_e = rng.random_range(1.2..2.0) / (q * q * lambda1);
    EpidemicParams::from_effective(beta_e, gamma, p).unwrap()
}

pub fn ones(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0)
}

/// `exp(M) v` through nalgebra's Pade-based matrix exponential.
pub fn expm_apply(m: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    m.clone().exp() * v
}

pub fn max_abs_diff(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax()
}
