//! Seeded random graph construction.
//!
//! Every generator takes an explicit `u64` seed and draws from [`Rng`]
//! (ChaCha with 8 rounds), whose output stream is fixed across platforms.

use std::collections::VecDeque;

use rand::seq::{index, SliceRandom};
use rand::{Rng as _, SeedableRng};

use super::UndirectedGraph;
use crate::{Error, Result};

/// The generator behind all random operations in this crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// G(n, p): every one of the n(n-1)/2 pairs is included independently with
/// probability `p`, visiting pairs in lexicographic order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<UndirectedGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(UndirectedGraph::from_sorted_unique(n, edges))
}

/// Random spanning tree by breadth-first search from a uniformly chosen root,
/// visiting each node's neighbours in shuffled order.
pub fn spanning_tree(g: &UndirectedGraph, seed: u64) -> Result<UndirectedGraph> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidArgument("graph has no nodes".into()));
    }
    let mut rng = Rng::seed_from_u64(seed);
    let root = rng.gen_range(0..n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::with_capacity(n - 1);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        let mut nbrs = g.neighbors(u).to_vec();
        nbrs.shuffle(&mut rng);
        for v in nbrs {
            if !seen[v] {
                seen[v] = true;
                edges.push((u.min(v), u.max(v)));
                queue.push_back(v);
            }
        }
    }
    if let Some(to) = seen.iter().position(|s| !s) {
        return Err(Error::Disconnected { from: root, to });
    }
    edges.sort_unstable();
    Ok(UndirectedGraph::from_sorted_unique(n, edges))
}

/// Adds `k` edges drawn uniformly without replacement from the edges of
/// `pool` that are not already in `tree`.
pub fn add_extra_edges(
    tree: &UndirectedGraph,
    pool: &UndirectedGraph,
    k: usize,
    seed: u64,
) -> Result<UndirectedGraph> {
    if tree.node_count() != pool.node_count() {
        return Err(Error::InvalidArgument(
            "tree and pool have different node counts".into(),
        ));
    }
    if let Some(&(u, v)) = tree.edges().iter().find(|&&(u, v)| !pool.has_edge(u, v)) {
        return Err(Error::InvalidArgument(format!(
            "edge {{{u}, {v}}} of the tree is missing from the pool"
        )));
    }
    let candidates: Vec<(usize, usize)> = pool
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| !tree.has_edge(u, v))
        .collect();
    if k > candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {k} extra edges but only {} are available",
            candidates.len()
        )));
    }
    let mut rng = Rng::seed_from_u64(seed);
    let mut edges = tree.edges().to_vec();
    edges.extend(
        index::sample(&mut rng, candidates.len(), k)
            .into_iter()
            .map(|i| candidates[i]),
    );
    edges.sort_unstable();
    Ok(UndirectedGraph::from_sorted_unique(tree.node_count(), edges))
}
