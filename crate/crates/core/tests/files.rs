use std::fs;

use proptest::prelude::*;

use harmonic_influence::electrical::ConductanceNetwork;
use harmonic_influence::experiment::{run_experiment, save_report, ExperimentConfig, GraphKind};
use harmonic_influence::graph::UndirectedGraph;
use harmonic_influence::io::{load_graph, save_graph, EdgeList};

fn small_config(seed: u64) -> ExperimentConfig {
    ExperimentConfig { n: 20, p: 0.3, extra_edges: 4, seed, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn edge_list_round_trips(
        n in 2usize..25,
        pairs in prop::collection::btree_set((0usize..25, 0usize..25), 1..60),
        c in prop::collection::vec(1e-6f64..1e6, 60),
        f in prop::collection::vec(0.0f64..10.0, 25),
        with_field: bool,
    ) {
        let edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .filter(|&(u, v)| u < v && v < n)
            .collect();
        let graph = UndirectedGraph::from_edges(n, edges).unwrap();
        let m = graph.edge_count();
        let list = EdgeList {
            graph,
            edge_conductance: c[..m].to_vec(),
            field_conductance: with_field.then(|| f[..n].to_vec()),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        save_graph(&path, &list).unwrap();
        prop_assert_eq!(load_graph(&path).unwrap(), list);
    }
}

#[test]
fn network_survives_a_file() {
    let g = UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let net = ConductanceNetwork::new(g, vec![0.5, 1.0, 2.5, 1.0 / 3.0], vec![0.1, 0.0, 0.0, 0.7]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.edges");
    save_graph(&path, &EdgeList::from_network(&net)).unwrap();
    assert_eq!(load_graph(&path).unwrap().to_network(99.0).unwrap(), net);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    save_report(&run_experiment(&small_config(3)).unwrap(), a.path()).unwrap();
    save_report(&run_experiment(&small_config(3)).unwrap(), b.path()).unwrap();
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 13);
    for name in names {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name:?} differs"
        );
    }
}

#[test]
fn saved_graphs_reload_and_nest() {
    let report = run_experiment(&small_config(8)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    save_report(&report, dir.path()).unwrap();
    let load = |label: &str| load_graph(dir.path().join(format!("{label}.edges"))).unwrap().graph;
    let (st, fe, er) = (load("st"), load("fe"), load("er"));
    assert_eq!(&st, report.graphs.get(GraphKind::SpanningTree));
    assert!(st.is_tree());
    assert!(st.edges().iter().all(|&(u, v)| fe.has_edge(u, v)));
    assert!(fe.edges().iter().all(|&(u, v)| er.has_edge(u, v)));

    let trace = fs::read_to_string(dir.path().join("fe_trace.csv")).unwrap();
    let rows: Vec<&str> = trace.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,h_err_l1,w_err_l1");
    let run = report.run(GraphKind::FewExtraEdges);
    assert_eq!(rows.len() - 1, run.errors.len());
    let last: Vec<f64> = rows.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(last[1] < 1e-6 && last[2] < 1e-6);
}
