//! Workloads shared by the criterion benches.

use netgompertz::{EpidemicParams, Graph};

/// Ring of `n` nodes, each joined to its `k` nearest neighbours on either side.
pub fn ring_lattice(n: usize, k: usize) -> Graph {
    assert!(n > 2 * k, "ring lattice needs n > 2k");
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (1..=k).map(move |d| (i, (i + d) % n)))
        .collect();
    Graph::from_edges((0..n).map(|i| i.to_string()), &edges).expect("ring lattice is valid")
}

/// The rates used for the sexual-contact network experiments.
pub fn paper_like_params(n: usize) -> EpidemicParams {
    EpidemicParams::new(0.03, 0.02, 1.0 / n as f64).expect("valid parameters")
}
