use std::ops::Range;

use super::{Digraph, UndirectedGraph};

/// Dense index of an ordered pair in a [`MessageDigraph`].
pub type MessageId = usize;

/// The digraph of dependencies between the messages of the algorithm.
///
/// Its nodes are the ordered pairs `(j, i)` with `{i, j}` an edge; the pair
/// `(j, i)` carries the messages that `i` sends to `j`. There is an arc
/// `(j, i) -> (i, k)` for every neighbour `k != j` of `i`: the message from
/// `i` to `j` is computed from the message `k` sent to `i`.
///
/// Pairs are numbered in lexicographic order of `(j, i)`, so all messages
/// received by a node form a contiguous block ordered by sender.
#[derive(Debug, Clone)]
pub struct MessageDigraph {
    base: UndirectedGraph,
    pairs: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    digraph: Digraph,
}

impl MessageDigraph {
    pub fn new(g: &UndirectedGraph) -> Self {
        let n = g.node_count();
        let mut pairs = Vec::with_capacity(2 * g.edge_count());
        let mut offsets = Vec::with_capacity(n + 1);
        for j in 0..n {
            offsets.push(pairs.len());
            pairs.extend(g.neighbors(j).iter().map(|&i| (j, i)));
        }
        offsets.push(pairs.len());

        let mut successors = Vec::with_capacity(pairs.len());
        for &(j, i) in &pairs {
            let start = offsets[i];
            let succ: Vec<usize> = g
                .neighbors(i)
                .iter()
                .enumerate()
                .filter(|&(_, &k)| k != j)
                .map(|(pos, _)| start + pos)
                .collect();
            successors.push(succ);
        }
        Self {
            base: g.clone(),
            pairs,
            offsets,
            digraph: Digraph { successors },
        }
    }

    pub fn base(&self) -> &UndirectedGraph {
        &self.base
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// Number of ordered pairs, twice the number of edges.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The ordered pair `(receiver, sender)` of a message.
    pub fn pair(&self, id: MessageId) -> (usize, usize) {
        self.pairs[id]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Id of the message sent by `sender` to `receiver`.
    pub fn id(&self, receiver: usize, sender: usize) -> Option<MessageId> {
        let block = self.incoming(receiver);
        let start = block.start;
        self.pairs[block]
            .binary_search_by_key(&sender, |&(_, i)| i)
            .ok()
            .map(|pos| start + pos)
    }

    /// Ids of the messages received by `node`, ordered by sender.
    pub fn incoming(&self, node: usize) -> Range<MessageId> {
        self.offsets[node]..self.offsets[node + 1]
    }

    /// Ids of the messages that feed the update of `id`.
    pub fn dependencies(&self, id: MessageId) -> &[MessageId] {
        self.digraph.successors(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_node_path() {
        // j=0, i=1, k=2
        let g = UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let md = MessageDigraph::new(&g);
        assert_eq!(md.pairs(), &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        let arcs: Vec<_> = md
            .digraph()
            .arcs()
            .map(|(a, b)| (md.pair(a), md.pair(b)))
            .collect();
        assert_eq!(arcs, vec![((0, 1), (1, 2)), ((2, 1), (1, 0))]);
    }

    #[test]
    fn single_edge_has_no_arcs() {
        let g = UndirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        let md = MessageDigraph::new(&g);
        assert_eq!(md.len(), 2);
        assert_eq!(md.digraph().arc_count(), 0);
    }

    #[test]
    fn triangle_counts() {
        // each of the 6 pairs (j, i) has exactly one k != j adjacent to i
        let g = UndirectedGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let md = MessageDigraph::new(&g);
        assert_eq!(md.len(), 6);
        assert_eq!(md.digraph().arc_count(), 6);
    }

    #[test]
    fn ids_round_trip() {
        let g = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let md = MessageDigraph::new(&g);
        for id in 0..md.len() {
            let (j, i) = md.pair(id);
            assert_eq!(md.id(j, i), Some(id));
        }
        assert_eq!(md.id(1, 3), None);
        assert_eq!(md.incoming(0).len(), g.degree(0));
    }
}
