//! Edge-list files.
//!
//! One edge per line, `u v` or `u v conductance` (conductance defaults to 1).
//! A line `u f conductance` sets the field conductance of node `u`. Text
//! after `#` is a comment, except a leading `# nodes: N` line, which fixes
//! the node count so that trailing isolated nodes survive a round trip.
//! Otherwise the node count is one more than the largest id mentioned.
//! Conductances are written in shortest round-trip form, so writing and
//! reading a file reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::electrical::ConductanceNetwork;
use crate::graph::UndirectedGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub graph: UndirectedGraph,
    /// Aligned with `graph.edges()`.
    pub edge_conductance: Vec<f64>,
    /// `None` when the file has no field lines.
    pub field_conductance: Option<Vec<f64>>,
}

impl EdgeList {
    pub fn unit(graph: UndirectedGraph) -> Self {
        let m = graph.edge_count();
        Self {
            graph,
            edge_conductance: vec![1.0; m],
            field_conductance: None,
        }
    }

    pub fn from_network(net: &ConductanceNetwork) -> Self {
        Self {
            graph: net.graph().clone(),
            edge_conductance: net.edge_conductances().to_vec(),
            field_conductance: Some(net.field_conductances().to_vec()),
        }
    }

    /// Builds the network, using `gamma` at every node when the file
    /// specifies no field conductances.
    pub fn to_network(&self, gamma: f64) -> Result<ConductanceNetwork> {
        let field = self
            .field_conductance
            .clone()
            .unwrap_or_else(|| vec![gamma; self.graph.node_count()]);
        ConductanceNetwork::new(self.graph.clone(), self.edge_conductance.clone(), field)
    }
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<EdgeList> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut declared_nodes = None;
    let mut edges: Vec<((usize, usize), f64, usize)> = Vec::new();
    let mut fields: Vec<(usize, f64, usize)> = Vec::new();
    let mut max_id = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(rest) = raw.trim_start().strip_prefix("# nodes:") {
            let n = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| err(line_no, format!("bad node count: {e}")))?;
            declared_nodes = Some(n);
            continue;
        }
        let content = raw.split('#').next().unwrap_or_default();
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !(2..=3).contains(&tokens.len()) {
            return Err(err(line_no, format!("expected 2 or 3 fields, found {}", tokens.len())));
        }
        let node = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(line_no, format!("invalid node id {s:?}")))
        };
        let value = |s: &str| {
            let c = s
                .parse::<f64>()
                .map_err(|_| err(line_no, format!("invalid conductance {s:?}")))?;
            if !c.is_finite() || c < 0.0 {
                return Err(err(line_no, format!("conductance {c} must be finite and nonnegative")));
            }
            Ok(c)
        };
        let u = node(tokens[0])?;
        max_id = max_id.max(Some(u));
        if tokens[1] == "f" {
            let Some(c) = tokens.get(2) else {
                return Err(err(line_no, "field line needs a conductance".into()));
            };
            fields.push((u, value(c)?, line_no));
        } else {
            let v = node(tokens[1])?;
            max_id = max_id.max(Some(v));
            if u == v {
                return Err(err(line_no, format!("self-loop at node {u}")));
            }
            let c = tokens.get(2).map_or(Ok(1.0), |s| value(s))?;
            if c == 0.0 {
                return Err(err(line_no, "edge conductance must be positive".into()));
            }
            edges.push(((u.min(v), u.max(v)), c, line_no));
        }
    }

    let n = declared_nodes
        .unwrap_or(0)
        .max(max_id.map_or(0, |m| m + 1));
    if let (Some(d), Some(m)) = (declared_nodes, max_id) {
        if m >= d {
            return Err(err(1, format!("node {m} exceeds declared count {d}")));
        }
    }
    edges.sort_by_key(|&(e, _, _)| e);
    if let Some(w) = edges.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(err(w[1].2, format!("duplicate edge {{{}, {}}}", w[1].0 .0, w[1].0 .1)));
    }
    let field_conductance = if fields.is_empty() {
        None
    } else {
        let mut field = vec![0.0; n];
        let mut seen = vec![false; n];
        for (u, c, line_no) in fields {
            if std::mem::replace(&mut seen[u], true) {
                return Err(err(line_no, format!("duplicate field line for node {u}")));
            }
            field[u] = c;
        }
        Some(field)
    };
    let edge_conductance = edges.iter().map(|&(_, c, _)| c).collect();
    let graph = UndirectedGraph::from_sorted_unique(n, edges.into_iter().map(|(e, _, _)| e).collect());
    Ok(EdgeList {
        graph,
        edge_conductance,
        field_conductance,
    })
}

pub fn format_edge_list(list: &EdgeList) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# nodes: {}", list.graph.node_count());
    for (&(u, v), c) in list.graph.edges().iter().zip(&list.edge_conductance) {
        let _ = writeln!(out, "{u} {v} {c}");
    }
    if let Some(field) = &list.field_conductance {
        for (i, c) in field.iter().enumerate() {
            let _ = writeln!(out, "{i} f {c}");
        }
    }
    out
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text, path)
}

pub fn save_graph(path: impl AsRef<Path>, list: &EdgeList) -> Result<()> {
    fs::write(path, format_edge_list(list))?;
    Ok(())
}
