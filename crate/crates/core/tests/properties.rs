use proptest::prelude::*;
use rand::{Rng as _, SeedableRng};

use harmonic_influence::analysis::{check_convergence_hypothesis, Constant, GeneralizedDynamicsState, Verdict};
use harmonic_influence::electrical::{
    build_weights, dirichlet_potentials, glue_leaders, grounded_laplacian_solve, harmonic_influence_exact,
    split_field, ConductanceNetwork,
};
use harmonic_influence::graph::{
    add_extra_edges, condensation, erdos_renyi, reachable_set, spanning_tree, Digraph, MessageDigraph, Rng,
    UndirectedGraph,
};
use harmonic_influence::mpa::{exact_messages, Mpa};

fn connected(n: usize, extra: usize, seed: u64) -> UndirectedGraph {
    let mut s = seed;
    loop {
        let er = erdos_renyi(n, 0.6, s).unwrap();
        s = s.wrapping_add(0x9e37_79b9);
        if er.is_connected() {
            let tree = spanning_tree(&er, seed).unwrap();
            let room = er.edge_count() - tree.edge_count();
            return add_extra_edges(&tree, &er, extra.min(room), seed.rotate_left(7)).unwrap();
        }
    }
}

fn random_network(g: UndirectedGraph, seed: u64) -> ConductanceNetwork {
    let mut rng = Rng::seed_from_u64(seed);
    let c = (0..g.edge_count()).map(|_| rng.gen_range(0.1..5.0)).collect();
    let mut f: Vec<f64> = (0..g.node_count())
        .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.01..2.0) })
        .collect();
    f[0] = f[0].max(0.05);
    ConductanceNetwork::new(g, c, f).unwrap()
}

fn digraph_from_bits(n: usize, bits: u64) -> (Digraph, Vec<u64>) {
    let mut adj = vec![0u64; n];
    let mut arcs = Vec::new();
    for v in 0..n {
        for w in 0..n {
            if bits >> (v * n + w) & 1 == 1 {
                adj[v] |= 1 << w;
                arcs.push((v, w));
            }
        }
    }
    (Digraph::from_arcs(n, arcs).unwrap(), adj)
}

/// Reflexive-transitive closure rows on bitmasks.
fn closure(n: usize, adj: &[u64]) -> Vec<u64> {
    let mut reach: Vec<u64> = (0..n).map(|v| adj[v] | 1 << v).collect();
    for k in 0..n {
        for v in 0..n {
            if reach[v] >> k & 1 == 1 {
                reach[v] |= reach[k];
            }
        }
    }
    reach
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn message_digraph_structure_law(n in 3usize..20, extra in 0usize..25, seed: u64) {
        let g = connected(n, extra, seed);
        let expected = match g.edge_count() + 1 - n {
            0 => 0,
            1 => 2,
            _ => 1,
        };
        let md = MessageDigraph::new(&g);
        prop_assert_eq!(md.len(), 2 * g.edge_count());
        prop_assert_eq!(condensation(md.digraph()).nontrivial_count(), expected);
    }

    #[test]
    fn spanning_tree_is_a_subtree(n in 2usize..40, seed: u64) {
        let g = connected(n, n, seed);
        let t = spanning_tree(&g, seed ^ 1).unwrap();
        prop_assert!(t.is_tree());
        prop_assert_eq!(t.edge_count(), n - 1);
        prop_assert!(t.edges().iter().all(|&(u, v)| g.has_edge(u, v)));
    }

    #[test]
    fn condensation_is_an_acyclic_ordering(n in 1usize..7, bits: u64) {
        let (d, _) = digraph_from_bits(n, bits & ((1u64 << (n * n)) - 1));
        let cond = condensation(&d);
        for (a, b) in cond.digraph().arcs() {
            prop_assert!(b < a);
        }
        for k in 0..cond.len() {
            let sink = cond.digraph().successors(k).is_empty();
            prop_assert_eq!(cond.is_sink(k), sink);
            if !sink {
                prop_assert!((k..cond.len()).all(|h| !cond.is_sink(h)));
            }
        }
    }

    #[test]
    fn weights_are_stochastic_and_scale_free(n in 2usize..15, extra in 0usize..10, seed: u64, factor in 0.01f64..100.0) {
        let net = random_network(connected(n, extra, seed), seed);
        let w = build_weights(&net).unwrap();
        let scaled = build_weights(&net.scaled(factor).unwrap()).unwrap();
        for i in 0..n {
            let total: f64 = w.row(i).iter().sum::<f64>() + w.field(i);
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!((w.field(i) - scaled.field(i)).abs() < 1e-12);
            for (a, b) in w.row(i).iter().zip(scaled.row(i)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
        let h = harmonic_influence_exact(&net).unwrap();
        let hs = harmonic_influence_exact(&net.scaled(factor).unwrap()).unwrap();
        for (a, b) in h.values().iter().zip(hs.values()) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs());
        }
    }

    #[test]
    fn mpa_messages_are_monotone(n in 3usize..15, extra in 0usize..10, seed: u64) {
        let net = random_network(connected(n, extra, seed), seed);
        let mpa = Mpa::new(&build_weights(&net).unwrap());
        let mut s = mpa.initial_state();
        for _ in 0..60 {
            let next = mpa.step(&s);
            for id in 0..s.w.len() {
                prop_assert!(next.w[id] > 0.0 && next.w[id] <= s.w[id]);
                prop_assert!(next.h[id] >= 1.0);
            }
            s = next;
        }
    }

    #[test]
    fn mpa_is_exact_on_trees(n in 2usize..40, seed: u64) {
        let net = random_network(connected(n, 0, seed), seed);
        let d = net.graph().diameter().unwrap();
        let mpa = Mpa::new(&build_weights(&net).unwrap());
        let mut s = mpa.initial_state();
        for _ in 0..d {
            s = mpa.step(&s);
        }
        let h = harmonic_influence_exact(&net).unwrap();
        for (a, b) in mpa.estimates(&s).iter().zip(h.values()) {
            prop_assert!((a - b).abs() <= 1e-9 * b);
        }
        let potentials: Vec<_> = (0..n).map(|l| grounded_laplacian_solve(&net, l).unwrap()).collect();
        for (a, b) in s.w.iter().zip(exact_messages(mpa.message_digraph(), &potentials)) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn split_and_glue_preserve_potentials(n in 2usize..12, extra in 0usize..6, seed: u64) {
        let net = random_network(connected(n, extra, seed), seed);
        let split = split_field(&net);
        for leader in 0..n {
            let y = grounded_laplacian_solve(&net, leader).unwrap();
            let mut fixed: Vec<(usize, f64)> = split.zero_leaders.iter().map(|&z| (z, 0.0)).collect();
            fixed.push((leader, 1.0));
            let y_split = dirichlet_potentials(&split.graph, &split.conductances, &fixed).unwrap();
            for i in 0..n {
                prop_assert!((y.values[i] - y_split[i]).abs() < 1e-10);
            }
        }
        let back = glue_leaders(&split.graph, &split.conductances, &split.zero_leaders).unwrap();
        prop_assert_eq!(back.network, net);
    }

    #[test]
    fn hypothesis_matches_closure(n in 1usize..7, bits: u64, support_bits: u64) {
        let (d, adj) = digraph_from_bits(n, bits & ((1u64 << (n * n)) - 1));
        let support: Vec<usize> = (0..n).filter(|&v| support_bits >> v & 1 == 1).collect();
        let reach = closure(n, &adj);
        let mut on_cycle_undriven = Vec::new();
        for v in 0..n {
            let mut strict = 0u64;
            for w in 0..n {
                if adj[v] >> w & 1 == 1 {
                    strict |= reach[w];
                }
            }
            let driven = support.iter().any(|&s| reach[v] >> s & 1 == 1);
            if strict >> v & 1 == 1 && !driven {
                on_cycle_undriven.push(v);
            }
        }
        let expected = if on_cycle_undriven.is_empty() {
            Verdict::Satisfied
        } else {
            Verdict::Violating(on_cycle_undriven)
        };
        prop_assert_eq!(check_convergence_hypothesis(&d, &support), expected);
    }

    #[test]
    fn acyclic_limit_below_one_iff_driven_node_reachable(
        n in 1usize..7,
        bits: u64,
        support_bits: u64,
        alpha in 0.01f64..3.0,
    ) {
        // arcs only go from higher to lower ids
        let arcs: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| (0..v).map(move |w| (v, w)))
            .enumerate()
            .filter(|&(b, _)| bits >> b & 1 == 1)
            .map(|(_, a)| a)
            .collect();
        let d = Digraph::from_arcs(n, arcs).unwrap();
        let support: Vec<usize> = (0..n).filter(|&v| support_bits >> v & 1 == 1).collect();
        let a: Vec<f64> = (0..n).map(|v| if support.contains(&v) { alpha } else { 0.0 }).collect();
        let mut gen = GeneralizedDynamicsState::unscaled(
            d.clone(),
            Box::new(Constant(a)),
            Box::new(Constant(vec![0.0; n])),
        )
        .unwrap();
        let steps = gen.run(0.0, n + 2).unwrap();
        prop_assert!(steps <= n + 1);
        for v in 0..n {
            let reaches = reachable_set(&d, &[v]).iter().any(|w| support.contains(w));
            prop_assert_eq!(gen.omega[v] < 1.0, reaches);
        }
    }
}
