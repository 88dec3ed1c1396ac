//! Conversion between a network with several zero-potential leaf leaders and
//! the single-field formulation used everywhere else in the crate.

use super::ConductanceNetwork;
use crate::graph::UndirectedGraph;
use crate::{Error, Result};

/// Result of [`glue_leaders`]: the field network and, for each of its nodes,
/// the id the node had in the input graph.
#[derive(Debug, Clone)]
pub struct GluedNetwork {
    pub network: ConductanceNetwork,
    pub original_ids: Vec<usize>,
}

/// Result of [`split_field`]: a plain conductance graph in which every field
/// edge became a separate zero-potential leaf.
#[derive(Debug, Clone)]
pub struct SplitNetwork {
    pub graph: UndirectedGraph,
    pub conductances: Vec<f64>,
    /// The added leaves, ascending. Node ids below the first one are the
    /// original nodes, unchanged.
    pub zero_leaders: Vec<usize>,
}

/// Collapses the zero-potential leaves in `zero_leaders` into the field node.
///
/// The removed leaves' edge conductances become field conductances of their
/// neighbours; parallel edges into the field are merged by summing.
pub fn glue_leaders(
    g: &UndirectedGraph,
    conductances: &[f64],
    zero_leaders: &[usize],
) -> Result<GluedNetwork> {
    let n = g.node_count();
    if conductances.len() != g.edge_count() {
        return Err(Error::InvalidArgument(
            "one conductance per edge is required".into(),
        ));
    }
    if zero_leaders.is_empty() {
        return Err(Error::InvalidArgument("zero-leader set is empty".into()));
    }
    let mut glued = vec![false; n];
    for &z in zero_leaders {
        if z >= n {
            return Err(Error::NodeOutOfRange {
                node: z,
                node_count: n,
            });
        }
        if g.degree(z) != 1 {
            return Err(Error::NotALeaf(z));
        }
        glued[z] = true;
    }

    let original_ids: Vec<usize> = (0..n).filter(|&i| !glued[i]).collect();
    let mut new_id = vec![usize::MAX; n];
    for (k, &i) in original_ids.iter().enumerate() {
        new_id[i] = k;
    }
    let mut field = vec![0.0; original_ids.len()];
    let mut edges = Vec::new();
    let mut edge_c = Vec::new();
    for (&(u, v), &c) in g.edges().iter().zip(conductances) {
        match (glued[u], glued[v]) {
            (false, false) => {
                edges.push((new_id[u], new_id[v]));
                edge_c.push(c);
            }
            (true, false) => field[new_id[v]] += c,
            (false, true) => field[new_id[u]] += c,
            (true, true) => {}
        }
    }
    // relabelling is monotone, so the edge order is preserved
    let graph = UndirectedGraph::from_sorted_unique(original_ids.len(), edges);
    let network = ConductanceNetwork::new(graph, edge_c, field)?;
    Ok(GluedNetwork {
        network,
        original_ids,
    })
}

/// Reverse of [`glue_leaders`]: one new leaf per node with positive field
/// conductance, attached with that conductance.
pub fn split_field(net: &ConductanceNetwork) -> SplitNetwork {
    let n = net.node_count();
    let mut edges: Vec<((usize, usize), f64)> = net
        .graph()
        .edges()
        .iter()
        .copied()
        .zip(net.edge_conductances().iter().copied())
        .collect();
    let mut zero_leaders = Vec::new();
    for i in 0..n {
        let c = net.field(i);
        if c > 0.0 {
            let leaf = n + zero_leaders.len();
            zero_leaders.push(leaf);
            edges.push(((i, leaf), c));
        }
    }
    edges.sort_by_key(|&(e, _)| e);
    let (edges, conductances): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
    SplitNetwork {
        graph: UndirectedGraph::from_sorted_unique(n + zero_leaders.len(), edges),
        conductances,
        zero_leaders,
    }
}
