//! Simple undirected graphs, edge-list ingestion and topological descriptors.
//!
//! Node indices are assigned in first-appearance order of the edge list and
//! are the canonical order for every downstream matrix and CSV column.

mod load;
mod stats;

pub use load::{load_graph, load_graph_files};
pub use stats::{
    assortativity, avg_clustering, avg_path_length, degree_heterogeneity, edge_density,
    is_bipartite, local_clustering, Bipartition, GraphStats,
};

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sex {
    Male,
    Female,
}

impl Sex {
    pub fn as_str(self) -> &'static str {
        match self {
            Sex::Male => "M",
            Sex::Female => "F",
        }
    }
}

/// Optional per-node metadata read from the attribute CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeAttributes {
    pub sex: Option<Sex>,
    pub group: Option<String>,
}

/// Immutable, connected, simple undirected graph.
#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    adjacency: DMatrix<f64>,
    attributes: Option<Vec<NodeAttributes>>,
}

impl Graph {
    /// Builds a graph from labels and index pairs, applying the same checks
    /// as the edge-list loader (no self-loops, no duplicates, connected).
    pub fn from_edges<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidParams(format!("duplicate label `{label}`")));
            }
        }
        let n = labels.len();
        let mut builder = Builder::new(n);
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::load(k + 1, format!("edge ({a}, {b}) out of range")));
            }
            builder.add(a, b).map_err(|m| Error::load(k + 1, m))?;
        }
        builder.finish(labels, index)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Sorted neighbor indices of node `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    /// Edges as `(i, j)` with `i < j`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Dense symmetric 0/1 adjacency matrix.
    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn attributes(&self) -> Option<&[NodeAttributes]> {
        self.attributes.as_deref()
    }

    pub fn min_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn with_attributes(mut self, attributes: Vec<NodeAttributes>) -> Self {
        debug_assert_eq!(attributes.len(), self.n());
        self.attributes = Some(attributes);
        self
    }

    /// Breadth-first hop distances from `source`.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

pub(crate) struct Builder {
    neighbors: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            neighbors: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub(crate) fn grow(&mut self, n: usize) {
        if self.neighbors.len() < n {
            self.neighbors.resize(n, Vec::new());
        }
    }

    pub(crate) fn add(&mut self, a: usize, b: usize) -> std::result::Result<(), String> {
        if a == b {
            return Err("self-loop".to_string());
        }
        if self.neighbors[a].contains(&b) {
            return Err("duplicate edge".to_string());
        }
        self.neighbors[a].push(b);
        self.neighbors[b].push(a);
        self.edges.push((a.min(b), a.max(b)));
        Ok(())
    }

    pub(crate) fn finish(mut self, labels: Vec<String>, index: HashMap<String, usize>) -> Result<Graph> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidParams("graph has no nodes".into()));
        }
        for list in &mut self.neighbors {
            list.sort_unstable();
        }
        let mut adjacency = DMatrix::zeros(n, n);
        for &(a, b) in &self.edges {
            adjacency[(a, b)] = 1.0;
            adjacency[(b, a)] = 1.0;
        }
        let graph = Graph {
            labels,
            index,
            neighbors: self.neighbors,
            edges: self.edges,
            adjacency,
            attributes: None,
        };
        let dist = graph.bfs_distances(0);
        if let Some(far) = dist.iter().position(Option::is_none) {
            return Err(Error::Disconnected {
                root: graph.labels[0].clone(),
                unreachable: graph.labels[far].clone(),
            });
        }
        Ok(graph)
    }
}

/// Small named graphs used in tests, benches and examples.
pub mod fixtures {
    use super::Graph;

    fn numbered(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(numbered(n), edges).expect("fixture graph is valid")
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        build(n, &edges)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        build(n, &edges)
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        build(n, &edges)
    }

    /// Star with hub 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        build(n, &edges)
    }

    /// Two copies of K_`clique` joined through a path of `bridge` extra nodes.
    pub fn barbell(clique: usize, bridge: usize) -> Graph {
        let n = 2 * clique + bridge;
        let mut edges = Vec::new();
        for offset in [0, clique + bridge] {
            for i in 0..clique {
                for j in i + 1..clique {
                    edges.push((offset + i, offset + j));
                }
            }
        }
        let mut prev = clique - 1;
        for k in 0..bridge {
            edges.push((prev, clique + k));
            prev = clique + k;
        }
        edges.push((prev, clique + bridge));
        build(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_symmetric_with_zero_diagonal() {
        let g = fixtures::barbell(5, 6);
        let a = g.adjacency();
        assert_eq!(a, &a.transpose());
        for i in 0..g.n() {
            assert_eq!(a[(i, i)], 0.0);
            let row: f64 = a.row(i).iter().sum();
            assert_eq!(row as usize, g.degree(i));
        }
        assert_eq!(g.n(), 16);
        assert_eq!(g.m(), 2 * 10 + 7);
    }

    #[test]
    fn from_edges_rejects_duplicates_and_disconnection() {
        assert!(matches!(
            Graph::from_edges(["a", "b"], &[(0, 1), (1, 0)]),
            Err(Error::Load { line: 2, .. })
        ));
        assert!(matches!(
            Graph::from_edges(["a", "b", "c"], &[(0, 1)]),
            Err(Error::Disconnected { .. })
        ));
        assert!(Graph::from_edges(["a", "a"], &[(0, 1)]).is_err());
    }

    #[test]
    fn single_node_graph_is_connected() {
        let g = Graph::from_edges(["solo"], &[]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }
}
