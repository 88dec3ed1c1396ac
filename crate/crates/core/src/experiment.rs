//! The end-to-end simulation pipeline: a random graph, a spanning tree of
//! it, and the tree with a few edges put back; exact and message-passing
//! influence on all three; and report files for plotting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::spearman;
use crate::electrical::{all_potentials, build_weights, ConductanceNetwork, InfluenceVector};
use crate::graph::{add_extra_edges, erdos_renyi, spanning_tree, Rng, UndirectedGraph};
use crate::io::{save_graph, EdgeList};
use crate::mpa::{
    error_trace, exact_messages, run_mpa, Mpa, MpaOptions, FULL_TRACE_LIMIT, TRACE_STRIDE,
};
use crate::{Error, Result};

/// Attempts at drawing a connected random graph, with seeds `seed, seed+1, ...`.
pub const MAX_ER_ATTEMPTS: u64 = 100;
/// An error trace entry at or below this is considered settled.
pub const NEGLIGIBLE_ERROR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: f64,
    pub extra_edges: usize,
    pub gamma: f64,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 50,
            p: 0.1,
            extra_edges: 10,
            gamma: 0.04,
            seed: 0,
            tol: crate::mpa::DEFAULT_TOL,
            max_iter: crate::mpa::DEFAULT_MAX_ITER,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument("n must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidArgument(format!("p = {} outside [0, 1]", self.p)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma = {} must be positive", self.gamma)));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("tol = {} must be nonnegative", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphKind {
    #[serde(rename = "st")]
    SpanningTree,
    #[serde(rename = "fe")]
    FewExtraEdges,
    #[serde(rename = "er")]
    ErdosRenyi,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [Self::SpanningTree, Self::FewExtraEdges, Self::ErdosRenyi];

    pub fn label(self) -> &'static str {
        match self {
            Self::SpanningTree => "st",
            Self::FewExtraEdges => "fe",
            Self::ErdosRenyi => "er",
        }
    }
}

/// The three nested graphs `E_ST ⊂ E_FE ⊆ E_ER`.
#[derive(Debug, Clone)]
pub struct GeneratedGraphs {
    /// Seed that produced the connected random graph.
    pub er_seed: u64,
    pub er: UndirectedGraph,
    pub st: UndirectedGraph,
    pub fe: UndirectedGraph,
}

impl GeneratedGraphs {
    pub fn get(&self, kind: GraphKind) -> &UndirectedGraph {
        match kind {
            GraphKind::SpanningTree => &self.st,
            GraphKind::FewExtraEdges => &self.fe,
            GraphKind::ErdosRenyi => &self.er,
        }
    }
}

pub fn generate_graphs(cfg: &ExperimentConfig) -> Result<GeneratedGraphs> {
    cfg.validate()?;
    for attempt in 0..MAX_ER_ATTEMPTS {
        // Disjoint attempt ranges keep consecutive seeds from sharing graphs.
        let er_seed = cfg.seed.wrapping_mul(MAX_ER_ATTEMPTS).wrapping_add(attempt);
        let er = erdos_renyi(cfg.n, cfg.p, er_seed)?;
        if !er.is_connected() {
            continue;
        }
        let mut seeds = Rng::seed_from_u64(er_seed);
        seeds.set_stream(1);
        let st = spanning_tree(&er, seeds.next_u64())?;
        let fe = add_extra_edges(&st, &er, cfg.extra_edges, seeds.next_u64())?;
        return Ok(GeneratedGraphs { er_seed, er, st, fe });
    }
    Err(Error::InvalidArgument(format!(
        "no connected G({}, {}) graph in {MAX_ER_ATTEMPTS} attempts from seed {}",
        cfg.n, cfg.p, cfg.seed
    )))
}

/// Exact and approximate influence on one graph.
#[derive(Debug, Clone, Serialize)]
pub struct GraphRun {
    pub kind: GraphKind,
    pub node_count: usize,
    pub edge_count: usize,
    pub diameter: usize,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    /// `None` when a rank vector is constant.
    pub spearman_h: Option<f64>,
    pub spearman_w: Option<f64>,
    pub max_ratio_h: f64,
    /// `min_l (h_mpa - h_exact)`; nonnegative when every estimate over-shoots.
    pub min_excess_h: f64,
    /// `max (w_mpa - w_exact)`; nonpositive when every message under-shoots.
    pub max_excess_w: f64,
    /// First trace step from which the error stays at or below [`NEGLIGIBLE_ERROR`].
    pub h_settled_at: Option<usize>,
    pub w_settled_at: Option<usize>,
    #[serde(skip)]
    pub h_exact: Vec<f64>,
    #[serde(skip)]
    pub h_mpa: Vec<f64>,
    /// Message `i -> j` as `(i, j)`, aligned with the `w` vectors.
    #[serde(skip)]
    pub messages: Vec<(usize, usize)>,
    #[serde(skip)]
    pub w_exact: Vec<f64>,
    #[serde(skip)]
    pub w_mpa: Vec<f64>,
    #[serde(skip)]
    pub errors: Vec<(usize, f64, f64)>,
}

fn settled_at(errors: &[(usize, f64, f64)], pick: impl Fn(&(usize, f64, f64)) -> f64) -> Option<usize> {
    let mut settled = None;
    for e in errors.iter().rev() {
        if pick(e) > NEGLIGIBLE_ERROR {
            break;
        }
        settled = Some(e.0);
    }
    settled
}

/// Runs both computations on `g` with unit edge conductances and field
/// conductance `gamma` at every node.
pub fn run_on_graph(kind: GraphKind, g: &UndirectedGraph, cfg: &ExperimentConfig) -> Result<GraphRun> {
    let net = ConductanceNetwork::uniform(g.clone(), cfg.gamma)?;
    let weights = build_weights(&net)?;
    let potentials = all_potentials(&net)?;
    let h_exact = InfluenceVector(potentials.iter().map(|y| y.influence()).collect());
    let result = run_mpa(
        &weights,
        MpaOptions {
            tol: cfg.tol,
            max_iter: cfg.max_iter,
            trace: true,
        },
    )?;
    let mpa = Mpa::new(&weights);
    let md = mpa.message_digraph();
    let w_exact = exact_messages(md, &potentials);
    let errors = error_trace(&result)?;

    let h_mpa = result.h_estimates.values().to_vec();
    let max_ratio_h = h_mpa
        .iter()
        .zip(h_exact.values())
        .map(|(a, e)| a / e)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_excess_h = h_mpa
        .iter()
        .zip(h_exact.values())
        .map(|(a, e)| a - e)
        .fold(f64::INFINITY, f64::min);
    let max_excess_w = result
        .w_limits
        .iter()
        .zip(&w_exact)
        .map(|(a, e)| a - e)
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(GraphRun {
        kind,
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        diameter: g.diameter().ok_or(Error::Disconnected { from: 0, to: 0 })?,
        iterations: result.iterations,
        converged: result.converged,
        residual: result.residual,
        spearman_h: spearman(h_exact.values(), &h_mpa).ok(),
        spearman_w: spearman(&w_exact, &result.w_limits).ok(),
        max_ratio_h,
        min_excess_h,
        max_excess_w,
        h_settled_at: settled_at(&errors, |e| e.1),
        w_settled_at: settled_at(&errors, |e| e.2),
        h_exact: h_exact.0,
        h_mpa,
        messages: md.pairs().iter().map(|&(j, i)| (i, j)).collect(),
        w_exact,
        w_mpa: result.w_limits,
        errors,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub er_seed: u64,
    pub runs: Vec<GraphRun>,
    #[serde(skip)]
    pub graphs: GeneratedGraphs,
}

impl ExperimentReport {
    pub fn run(&self, kind: GraphKind) -> &GraphRun {
        self.runs.iter().find(|r| r.kind == kind).expect("every kind is run")
    }

    pub fn all_converged(&self) -> bool {
        self.runs.iter().all(|r| r.converged)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let graphs = generate_graphs(cfg)?;
    let runs = GraphKind::ALL
        .iter()
        .map(|&kind| run_on_graph(kind, graphs.get(kind), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport {
        config: cfg.clone(),
        er_seed: graphs.er_seed,
        runs,
        graphs,
    })
}

/// Median and minimum of a statistic across seeds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Spread {
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let mid = v.len() / 2;
        let median = if v.len().is_multiple_of(2) {
            0.5 * (v[mid - 1] + v[mid])
        } else {
            v[mid]
        };
        Some(Self {
            median,
            min: v[0],
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub seeds: Vec<u64>,
    pub spearman_fe: Option<Spread>,
    pub spearman_er: Option<Spread>,
    pub all_converged: bool,
}

/// Runs `count` experiments with seeds `cfg.seed, cfg.seed + 1, ...`, in parallel.
pub fn run_sweep(cfg: &ExperimentConfig, count: u64) -> Result<(Vec<ExperimentReport>, SweepSummary)> {
    let reports = (0..count)
        .into_par_iter()
        .map(|k| {
            run_experiment(&ExperimentConfig {
                seed: cfg.seed.wrapping_add(k),
                ..cfg.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let collect = |kind: GraphKind| -> Vec<f64> {
        reports.iter().filter_map(|r| r.run(kind).spearman_h).collect()
    };
    let summary = SweepSummary {
        seeds: reports.iter().map(|r| r.config.seed).collect(),
        spearman_fe: Spread::of(&collect(GraphKind::FewExtraEdges)),
        spearman_er: Spread::of(&collect(GraphKind::ErdosRenyi)),
        all_converged: reports.iter().all(ExperimentReport::all_converged),
    };
    Ok((reports, summary))
}

fn trace_csv(run: &GraphRun) -> String {
    let mut out = format!(
        "# every iteration up to {FULL_TRACE_LIMIT}, every {TRACE_STRIDE}th after; errors against the final iterate\n"
    );
    out.push_str("t,h_err_l1,w_err_l1\n");
    for (t, h, w) in &run.errors {
        let _ = writeln!(out, "{t},{h},{w}");
    }
    out
}

fn scatter_h_csv(run: &GraphRun) -> String {
    let mut out = String::from("node_or_arc,exact,approx\n");
    for (l, (e, a)) in run.h_exact.iter().zip(&run.h_mpa).enumerate() {
        let _ = writeln!(out, "{l},{e},{a}");
    }
    out
}

fn scatter_w_csv(run: &GraphRun) -> String {
    let mut out = String::from("node_or_arc,exact,approx\n");
    for ((i, j), (e, a)) in run.messages.iter().zip(run.w_exact.iter().zip(&run.w_mpa)) {
        let _ = writeln!(out, "{i}->{j},{e},{a}");
    }
    out
}

/// Writes `summary.json`, and per graph `<kind>.edges`, `<kind>_trace.csv`,
/// `<kind>_scatter_h.csv` and `<kind>_scatter_w.csv` into `dir`.
pub fn save_report(report: &ExperimentReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(report)? + "\n")?;
    for run in &report.runs {
        let label = run.kind.label();
        save_graph(
            dir.join(format!("{label}.edges")),
            &EdgeList::unit(report.graphs.get(run.kind).clone()),
        )?;
        fs::write(dir.join(format!("{label}_trace.csv")), trace_csv(run))?;
        fs::write(dir.join(format!("{label}_scatter_h.csv")), scatter_h_csv(run))?;
        fs::write(dir.join(format!("{label}_scatter_w.csv")), scatter_w_csv(run))?;
    }
    Ok(())
}
