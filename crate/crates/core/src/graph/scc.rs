use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::Digraph;

/// A strongly connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Members, ascending.
    pub nodes: Vec<usize>,
    /// At least two nodes, or a single node with a self-loop.
    pub nontrivial: bool,
}

/// Quotient of a digraph by its strongly connected components.
///
/// Component ids form an acyclic ordering: every arc `(a, b)` of the
/// condensation has `b < a`. Sink components come first.
#[derive(Debug, Clone)]
pub struct CondensationDigraph {
    component_of: Vec<usize>,
    components: Vec<Component>,
    digraph: Digraph,
}

impl CondensationDigraph {
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_sink(&self, k: usize) -> bool {
        self.digraph.successors(k).is_empty()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.components.iter().filter(|c| c.nontrivial).count()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.nontrivial)
    }
}

pub fn condensation(d: &Digraph) -> CondensationDigraph {
    let n = d.node_count();
    let mut pg = DiGraph::<(), ()>::with_capacity(n, d.arc_count());
    for _ in 0..n {
        pg.add_node(());
    }
    for (v, w) in d.arcs() {
        pg.add_edge(NodeIndex::new(v), NodeIndex::new(w), ());
    }
    // tarjan_scc emits components in reverse topological order, which is
    // already an acyclic ordering in the sense above
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&pg)
        .into_iter()
        .map(|c| {
            let mut nodes: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            nodes.sort_unstable();
            nodes
        })
        .collect();

    let mut component_of = vec![0; n];
    let label = |sccs: &[Vec<usize>], component_of: &mut [usize]| {
        for (k, nodes) in sccs.iter().enumerate() {
            for &v in nodes {
                component_of[v] = k;
            }
        }
    };
    label(&sccs, &mut component_of);
    let is_sink: Vec<bool> = sccs
        .iter()
        .enumerate()
        .map(|(k, nodes)| {
            nodes
                .iter()
                .all(|&v| d.successors(v).iter().all(|&w| component_of[w] == k))
        })
        .collect();
    // moving sinks to the front keeps the ordering acyclic: no arc leaves a sink
    let mut order: Vec<usize> = (0..sccs.len()).collect();
    order.sort_by_key(|&k| !is_sink[k]);
    sccs = order.into_iter().map(|k| std::mem::take(&mut sccs[k])).collect();
    label(&sccs, &mut component_of);

    let components = sccs
        .into_iter()
        .map(|nodes| {
            let nontrivial = nodes.len() > 1 || d.has_self_loop(nodes[0]);
            Component { nodes, nontrivial }
        })
        .collect::<Vec<_>>();
    let arcs = d
        .arcs()
        .map(|(v, w)| (component_of[v], component_of[w]))
        .filter(|(a, b)| a != b);
    let digraph = Digraph::from_arcs(components.len(), arcs)
        .expect("component ids are in range by construction");
    CondensationDigraph {
        component_of,
        components,
        digraph,
    }
}

/// Nodes reachable from any of `sources` by a directed path of length >= 0,
/// ascending.
pub fn reachable_set(d: &Digraph, sources: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; d.node_count()];
    let mut stack = Vec::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in d.successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter()
        .enumerate()
        .filter_map(|(v, &s)| s.then_some(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{MessageDigraph, UndirectedGraph};

    fn assert_acyclic_ordering(c: &CondensationDigraph) {
        for (a, b) in c.digraph().arcs() {
            assert!(b < a, "arc ({a}, {b}) breaks the ordering");
        }
        let first_non_sink = (0..c.len()).find(|&k| !c.is_sink(k)).unwrap_or(c.len());
        assert!((first_non_sink..c.len()).all(|k| !c.is_sink(k)));
    }

    #[test]
    fn acyclic_digraph_has_trivial_components() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        let c = condensation(&d);
        assert_eq!(c.len(), 4);
        assert_eq!(c.nontrivial_count(), 0);
        assert_acyclic_ordering(&c);
    }

    #[test]
    fn self_loop_is_nontrivial() {
        let d = Digraph::from_arcs(2, [(0, 0), (0, 1)]).unwrap();
        let c = condensation(&d);
        assert_eq!(c.nontrivial_count(), 1);
        assert!(c.components()[c.component_of(0)].nontrivial);
        assert_acyclic_ordering(&c);
    }

    #[test]
    fn cycles_collapse() {
        // 0 <-> 1 -> 2 <-> 3, 4 isolated
        let d = Digraph::from_arcs(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]).unwrap();
        let c = condensation(&d);
        assert_eq!(c.len(), 3);
        assert_eq!(c.nontrivial_count(), 2);
        assert_eq!(c.component_of(0), c.component_of(1));
        assert_ne!(c.component_of(1), c.component_of(2));
        assert_eq!(c.digraph().arc_count(), 1);
        assert_acyclic_ordering(&c);
    }

    #[test]
    fn message_digraph_of_tree_is_acyclic() {
        let g = UndirectedGraph::from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let c = condensation(MessageDigraph::new(&g).digraph());
        assert_eq!(c.nontrivial_count(), 0);
        assert_eq!(c.len(), 10);
    }

    #[test]
    fn message_digraph_cycle_classes() {
        let unicyclic = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(
            condensation(MessageDigraph::new(&unicyclic).digraph()).nontrivial_count(),
            2
        );
        let two_cycles =
            UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0)]).unwrap();
        assert_eq!(
            condensation(MessageDigraph::new(&two_cycles).digraph()).nontrivial_count(),
            1
        );
    }

    #[test]
    fn reachability() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(reachable_set(&d, &[]).is_empty());
        assert_eq!(reachable_set(&d, &[0]), vec![0, 1, 2]);
        assert_eq!(reachable_set(&d, &[1]), vec![1, 2]);
        assert_eq!(reachable_set(&Digraph::empty(1), &[0]), vec![0]);
    }
}
