use std::collections::VecDeque;

use super::Graph;
use crate::error::{Error, Result};
use crate::spectral::SpectralData;

/// The topological descriptors reported for a network.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    pub lbar: f64,
    pub cbar: f64,
    /// `None` when the graph has fewer than three nodes.
    pub rho: Option<f64>,
    pub lambda1: f64,
    /// `None` when the degree variance over edge ends vanishes.
    pub r: Option<f64>,
    pub kmin: usize,
    pub kmax: usize,
    pub bipartite: bool,
}

impl GraphStats {
    pub fn compute(graph: &Graph, spectral: &SpectralData) -> Self {
        GraphStats {
            n: graph.n(),
            m: graph.m(),
            delta: edge_density(graph),
            lbar: avg_path_length(graph),
            cbar: avg_clustering(graph),
            rho: degree_heterogeneity(graph).ok(),
            lambda1: spectral.lambda1(),
            r: assortativity(graph),
            kmin: graph.min_degree(),
            kmax: graph.max_degree(),
            bipartite: is_bipartite(graph).is_some(),
        }
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.m as f64 / self.n as f64
    }
}

/// `2m / (n(n-1))`; zero for the single-node graph.
pub fn edge_density(graph: &Graph) -> f64 {
    let n = graph.n() as f64;
    if graph.n() < 2 {
        return 0.0;
    }
    2.0 * graph.m() as f64 / (n * (n - 1.0))
}

/// Mean BFS hop distance over unordered node pairs.
pub fn avg_path_length(graph: &Graph) -> f64 {
    let n = graph.n();
    if n < 2 {
        return 0.0;
    }
    let total: usize = (0..n)
        .map(|s| {
            graph
                .bfs_distances(s)
                .iter()
                .skip(s + 1)
                .map(|d| d.expect("graph is connected"))
                .sum::<usize>()
        })
        .sum();
    total as f64 / (n * (n - 1) / 2) as f64
}

/// Watts-Strogatz local clustering; zero for nodes of degree below two.
pub fn local_clustering(graph: &Graph, i: usize) -> f64 {
    let nbrs = graph.neighbors(i);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (a, &u) in nbrs.iter().enumerate() {
        let nu = graph.neighbors(u);
        links += nbrs[a + 1..]
            .iter()
            .filter(|w| nu.binary_search(w).is_ok())
            .count();
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

pub fn avg_clustering(graph: &Graph) -> f64 {
    let n = graph.n();
    (0..n).map(|i| local_clustering(graph, i)).sum::<f64>() / n as f64
}

/// Normalized degree heterogeneity
/// `sum over edges of (k_i^-1/2 - k_j^-1/2)^2 / (n - 2 sqrt(n - 1))`.
///
/// Zero for regular graphs and one for stars.
pub fn degree_heterogeneity(graph: &Graph) -> Result<f64> {
    let n = graph.n();
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "degree heterogeneity needs n >= 3, got {n}"
        )));
    }
    let inv_sqrt: Vec<f64> = graph
        .degrees()
        .into_iter()
        .map(|k| 1.0 / (k as f64).sqrt())
        .collect();
    let sum: f64 = graph
        .edges()
        .iter()
        .map(|&(i, j)| (inv_sqrt[i] - inv_sqrt[j]).powi(2))
        .sum();
    let nf = n as f64;
    Ok(sum / (nf - 2.0 * (nf - 1.0).sqrt()))
}

/// Newman degree assortativity: Pearson correlation of end-point degrees over
/// both orientations of every edge. `None` when the variance is zero.
pub fn assortativity(graph: &Graph) -> Option<f64> {
    let deg = graph.degrees();
    let ends = 2.0 * graph.m() as f64;
    if graph.m() == 0 {
        return None;
    }
    let (mut sx, mut sxx, mut sxy) = (0.0, 0.0, 0.0);
    for &(i, j) in graph.edges() {
        let (a, b) = (deg[i] as f64, deg[j] as f64);
        sx += a + b;
        sxx += a * a + b * b;
        sxy += 2.0 * a * b;
    }
    let mean = sx / ends;
    let var = sxx / ends - mean * mean;
    if var <= 1e-12 * mean * mean {
        return None;
    }
    Some((sxy / ends - mean * mean) / var)
}

/// A proper two-coloring of a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub color: Vec<u8>,
}

impl Bipartition {
    pub fn sides(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.color.len()).partition(|&i| self.color[i] == 0)
    }
}

/// BFS two-coloring starting from node 0 (color 0).
pub fn is_bipartite(graph: &Graph) -> Option<Bipartition> {
    let n = graph.n();
    let mut color: Vec<Option<u8>> = vec![None; n];
    color[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let cv = color[v]?;
        for &w in graph.neighbors(v) {
            match color[w] {
                None => {
                    color[w] = Some(1 - cv);
                    queue.push_back(w);
                }
                Some(cw) if cw == cv => return None,
                Some(_) => {}
            }
        }
    }
    Some(Bipartition {
        color: color.into_iter().map(|c| c.unwrap_or(0)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, load_graph};

    #[test]
    fn density_fixtures() {
        assert_eq!(edge_density(&fixtures::complete(3)), 1.0);
        assert!((edge_density(&fixtures::path(3)) - 2.0 / 3.0).abs() < 1e-15);
        for n in 3..=10 {
            assert!((edge_density(&fixtures::complete(n)) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn path_lengths() {
        assert_eq!(avg_path_length(&fixtures::complete(3)), 1.0);
        assert!((avg_path_length(&fixtures::path(3)) - 4.0 / 3.0).abs() < 1e-15);
        for n in 2..=20 {
            let expected = (n as f64 + 1.0) / 3.0;
            assert!((avg_path_length(&fixtures::path(n)) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn clustering() {
        assert_eq!(avg_clustering(&fixtures::complete(3)), 1.0);
        for n in 3..12 {
            assert_eq!(avg_clustering(&fixtures::star(n)), 0.0);
        }
        // triangle with a pendant: nodes 0,1 -> 1, node 2 -> 1/3, pendant -> 0
        let g = load_graph("a b\nb c\nc a\nc d", None).unwrap();
        assert!((avg_clustering(&g) - (1.0 + 1.0 + 1.0 / 3.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn heterogeneity() {
        assert!(degree_heterogeneity(&fixtures::cycle(4)).unwrap().abs() < 1e-12);
        assert!((degree_heterogeneity(&fixtures::star(5)).unwrap() - 1.0).abs() < 1e-12);
        for n in 4..=50 {
            assert!((degree_heterogeneity(&fixtures::star(n)).unwrap() - 1.0).abs() < 1e-12);
        }
        for n in 3..=12 {
            assert!(degree_heterogeneity(&fixtures::cycle(n)).unwrap().abs() < 1e-12);
            assert!(degree_heterogeneity(&fixtures::complete(n)).unwrap().abs() < 1e-12);
        }
        assert!(matches!(
            degree_heterogeneity(&fixtures::path(2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn assortativity_cases() {
        assert_eq!(assortativity(&fixtures::cycle(6)), None);
        assert_eq!(assortativity(&fixtures::complete(5)), None);
        for n in 3..10 {
            let r = assortativity(&fixtures::star(n)).unwrap();
            assert!((r + 1.0).abs() < 1e-12, "star {n}: {r}");
        }
    }

    #[test]
    fn bipartite_detection() {
        assert!(is_bipartite(&fixtures::path(3)).is_some());
        assert!(is_bipartite(&fixtures::complete(3)).is_none());
        let c4 = is_bipartite(&fixtures::cycle(4)).unwrap();
        assert_eq!(c4.sides(), (vec![0, 2], vec![1, 3]));
        assert!(is_bipartite(&fixtures::cycle(5)).is_none());
    }
}
