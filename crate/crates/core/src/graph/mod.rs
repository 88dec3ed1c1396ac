//! Graph types and the graph algorithms the influence computations rely on.
//!
//! Nodes are dense integers `0..n`. Both graph types are immutable once built.

mod message;
mod random;
mod scc;

use std::collections::VecDeque;

use crate::{Error, Result};

pub use message::{MessageDigraph, MessageId};
pub use random::{add_extra_edges, erdos_renyi, spanning_tree, Rng};
pub use scc::{condensation, reachable_set, Component, CondensationDigraph};

/// A simple undirected graph.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted lexicographically,
/// so edge ids are stable for a given edge set. Neighbour lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from unordered pairs. Self-loops, duplicate edges and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(Error::NodeOutOfRange {
                        node,
                        node_count: n,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at node {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "duplicate edge {{{}, {}}}",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { edges, adjacency }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbours of `i` in ascending order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Position of `{u, v}` in [`edges`](Self::edges).
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// `Ok(())` when connected, otherwise an error naming an unreachable pair.
    /// The empty graph on zero nodes counts as connected.
    pub fn check_connected(&self) -> Result<()> {
        if self.node_count() == 0 {
            return Ok(());
        }
        match self.bfs_distances(0).iter().position(Option::is_none) {
            None => Ok(()),
            Some(to) => Err(Error::Disconnected { from: 0, to }),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.check_connected().is_ok()
    }

    pub fn is_tree(&self) -> bool {
        self.node_count() >= 1 && self.edge_count() + 1 == self.node_count() && self.is_connected()
    }

    /// Longest shortest-path length, by BFS from every node. `None` when the
    /// graph is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.node_count() {
            for d in self.bfs_distances(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }
}

/// A directed graph. Self-loops are allowed; duplicate arcs are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    successors: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Self {
            successors: vec![Vec::new(); n],
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut successors = vec![Vec::new(); n];
        for (v, w) in arcs {
            for node in [v, w] {
                if node >= n {
                    return Err(Error::NodeOutOfRange {
                        node,
                        node_count: n,
                    });
                }
            }
            successors[v].push(w);
        }
        for list in &mut successors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { successors })
    }

    pub fn node_count(&self) -> usize {
        self.successors.len()
    }

    pub fn arc_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    /// Heads of the arcs leaving `v`, ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    pub fn has_arc(&self, v: usize, w: usize) -> bool {
        self.successors[v].binary_search(&w).is_ok()
    }

    pub fn has_self_loop(&self, v: usize) -> bool {
        self.has_arc(v, v)
    }

    /// All arcs `(v, w)` in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(v, succ)| succ.iter().map(move |&w| (v, w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(
            UndirectedGraph::from_edges(3, [(0, 0)]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            UndirectedGraph::from_edges(3, [(0, 1), (1, 0)]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            UndirectedGraph::from_edges(3, [(0, 3)]),
            Err(Error::NodeOutOfRange { node: 3, .. })
        ));
    }

    #[test]
    fn edges_are_normalized_and_sorted() {
        let g = UndirectedGraph::from_edges(4, [(3, 1), (2, 0), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 3)]);
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.edge_id(3, 1), Some(2));
        assert!(!g.has_edge(2, 3));
    }

    #[test]
    fn diameter_and_connectivity() {
        assert_eq!(path(6).diameter(), Some(5));
        assert!(path(6).is_tree());
        let g = UndirectedGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.diameter(), None);
        assert!(matches!(
            g.check_connected(),
            Err(Error::Disconnected { from: 0, to: 2 })
        ));
    }

    #[test]
    fn digraph_merges_duplicate_arcs() {
        let d = Digraph::from_arcs(3, [(0, 1), (0, 1), (2, 2)]).unwrap();
        assert_eq!(d.arc_count(), 2);
        assert!(d.has_self_loop(2));
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 2)]);
    }
}
