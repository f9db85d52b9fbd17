//! Networked SIS epidemics, their worst-case surprisal bound and the
//! networked Gompertz curve.
//!
//! The exact SIS dynamics on a graph are integrated numerically
//! ([`dynamics`]). Bounding the surprisal form of the equations by tangent
//! lines gives a linear system whose solution ([`bound`]) dominates the exact
//! infection probabilities and is itself dominated by the classical
//! linearization. Below the threshold `q tau` that bound approaches a per-node
//! Gompertz curve whose parameters come from the adjacency spectrum
//! ([`gompertz`], [`spectral`]).

pub mod analysis;
pub mod bound;
pub mod dynamics;
mod error;
pub mod gompertz;
pub mod graph;
mod params;
pub mod spectral;

pub use bound::{build_system, decay_floor, remark2_limit, BoundSystem};
pub use dynamics::{
    from_surprisal, integrate_icsis, integrate_sis, linearized_solution, surprisal, Model,
    SurprisalTrajectory, TimeGrid, Trajectory,
};
pub use error::{Error, Result};
pub use gompertz::{net_gompertz_params, supercritical_asymptote, NetGompertzParams};
pub use graph::{load_graph, load_graph_files, Graph, GraphStats};
pub use params::EpidemicParams;
pub use spectral::{
    classify_regime, decompose, epidemic_threshold, katz_centrality, threshold_tau, Regime,
    SpectralData, Threshold,
};
