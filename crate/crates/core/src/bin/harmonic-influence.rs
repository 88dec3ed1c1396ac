//! Command-line front end: graph generation, exact and message-passing
//! influence, the full simulation pipeline, and the convergence check.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when the algorithm did not
//! converge (or, for `check`, when the convergence hypothesis fails).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use harmonic_influence::analysis::{check_convergence_hypothesis, message_alpha_support, Verdict};
use harmonic_influence::electrical::{build_weights, harmonic_influence_exact};
use harmonic_influence::experiment::{
    generate_graphs, run_experiment, run_sweep, save_report, ExperimentConfig, GraphKind,
};
use harmonic_influence::io::{load_graph, save_graph, EdgeList};
use harmonic_influence::mpa::{error_trace, run_mpa, Mpa, MpaOptions};
use harmonic_influence::Result;

#[derive(Parser)]
#[command(name = "harmonic-influence", version, about = "Harmonic influence centrality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphFlags {
    /// Node count of the random graph
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Link probability of the random graph
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Edges added back to the spanning tree
    #[arg(long = "extra-edges", default_value_t = 10)]
    extra_edges: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct MpaFlags {
    /// Field conductance at every node (files without field lines)
    #[arg(long, default_value_t = 0.04)]
    gamma: f64,
    #[arg(long, default_value_t = harmonic_influence::mpa::DEFAULT_TOL)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = harmonic_influence::mpa::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write the random graph, its spanning tree and the tree with extra edges
    Generate {
        #[command(flatten)]
        graph: GraphFlags,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Exact harmonic influence of every node of a graph file
    Exact {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.04)]
        gamma: f64,
        /// CSV destination; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the message passing algorithm on a graph file
    Mpa {
        graph: PathBuf,
        #[command(flatten)]
        mpa: MpaFlags,
        /// Directory for estimates.csv and trace.csv; stdout summary only when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline on the three nested graphs
    Experiment {
        #[command(flatten)]
        graph: GraphFlags,
        #[command(flatten)]
        mpa: MpaFlags,
        /// Number of consecutive seeds to run
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Convergence-hypothesis verdict for a graph's message digraph
    Check {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.04)]
        gamma: f64,
    },
}

enum Outcome {
    Done,
    NotConverged,
}

fn config(graph: &GraphFlags, mpa: &MpaFlags) -> ExperimentConfig {
    ExperimentConfig {
        n: graph.n,
        p: graph.p,
        extra_edges: graph.extra_edges,
        gamma: mpa.gamma,
        seed: graph.seed,
        tol: mpa.tol,
        max_iter: mpa.max_iter,
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Generate { graph, out } => {
            let cfg = ExperimentConfig {
                n: graph.n,
                p: graph.p,
                extra_edges: graph.extra_edges,
                seed: graph.seed,
                ..Default::default()
            };
            let graphs = generate_graphs(&cfg)?;
            fs::create_dir_all(&out)?;
            for kind in GraphKind::ALL {
                let g = graphs.get(kind);
                save_graph(out.join(format!("{}.edges", kind.label())), &EdgeList::unit(g.clone()))?;
                println!(
                    "{}: {} nodes, {} edges, diameter {}",
                    kind.label(),
                    g.node_count(),
                    g.edge_count(),
                    g.diameter().unwrap_or_default()
                );
            }
            println!("random graph seed: {}", graphs.er_seed);
            Ok(Outcome::Done)
        }
        Command::Exact { graph, gamma, out } => {
            let net = load_graph(&graph)?.to_network(gamma)?;
            let h = harmonic_influence_exact(&net)?;
            let mut text = String::from("node,h_exact\n");
            for (l, v) in h.values().iter().enumerate() {
                let _ = writeln!(text, "{l},{v}");
            }
            write_or_print(out.as_deref(), &text)?;
            Ok(Outcome::Done)
        }
        Command::Mpa { graph, mpa, out } => {
            let net = load_graph(&graph)?.to_network(mpa.gamma)?;
            let weights = build_weights(&net)?;
            let result = run_mpa(
                &weights,
                MpaOptions {
                    tol: mpa.tol,
                    max_iter: mpa.max_iter,
                    trace: out.is_some(),
                },
            )?;
            println!(
                "converged: {}, iterations: {}, residual: {:e}",
                result.converged, result.iterations, result.residual
            );
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                let mut est = String::from("node,h_mpa\n");
                for (l, v) in result.h_estimates.values().iter().enumerate() {
                    let _ = writeln!(est, "{l},{v}");
                }
                fs::write(dir.join("estimates.csv"), est)?;
                let mut msgs = String::from("message,w,h\n");
                let md = Mpa::new(&weights);
                for (id, &(j, i)) in md.message_digraph().pairs().iter().enumerate() {
                    let _ = writeln!(msgs, "{i}->{j},{},{}", result.final_state.w[id], result.final_state.h[id]);
                }
                fs::write(dir.join("messages.csv"), msgs)?;
                let mut trace = String::from("t,h_err_l1,w_err_l1\n");
                for (t, h, w) in error_trace(&result)? {
                    let _ = writeln!(trace, "{t},{h},{w}");
                }
                fs::write(dir.join("trace.csv"), trace)?;
            }
            Ok(if result.converged { Outcome::Done } else { Outcome::NotConverged })
        }
        Command::Experiment { graph, mpa, seeds, out } => {
            let cfg = config(&graph, &mpa);
            cfg.validate()?;
            let reports = if seeds <= 1 {
                vec![run_experiment(&cfg)?]
            } else {
                let (reports, summary) = run_sweep(&cfg, seeds)?;
                fs::create_dir_all(&out)?;
                fs::write(out.join("sweep.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
                reports
            };
            let mut all_converged = true;
            for report in &reports {
                let dir = if seeds <= 1 { out.clone() } else { out.join(format!("seed_{}", report.config.seed)) };
                save_report(report, &dir)?;
                for r in &report.runs {
                    all_converged &= r.converged;
                    println!(
                        "seed {} {}: edges {}, diameter {}, iterations {}{}, spearman {}, max h ratio {:.3}",
                        report.config.seed,
                        r.kind.label(),
                        r.edge_count,
                        r.diameter,
                        r.iterations,
                        if r.converged { "" } else { " (not converged)" },
                        r.spearman_h.map_or("n/a".into(), |s| format!("{s:.4}")),
                        r.max_ratio_h
                    );
                }
            }
            Ok(if all_converged { Outcome::Done } else { Outcome::NotConverged })
        }
        Command::Check { graph, gamma } => {
            let net = load_graph(&graph)?.to_network(gamma)?;
            let mpa = Mpa::new(&build_weights(&net)?);
            let support = message_alpha_support(&mpa);
            match check_convergence_hypothesis(mpa.message_digraph().digraph(), &support) {
                Verdict::Satisfied => {
                    println!("satisfied");
                    Ok(Outcome::Done)
                }
                Verdict::Violating(ids) => {
                    let md = mpa.message_digraph();
                    let labels: Vec<String> = ids
                        .iter()
                        .map(|&id| {
                            let (j, i) = md.pair(id);
                            format!("{i}->{j}")
                        })
                        .collect();
                    println!("violating messages: {}", labels.join(" "));
                    Ok(Outcome::NotConverged)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
