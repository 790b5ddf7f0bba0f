use std::collections::BTreeMap;

use hered3_core::cograph;
use hered3_core::io::{self, Format};
use hered3_core::pattern::{self, PatternKind};
use hered3_core::twosat::{encode_two_palette_subgraph, Lit, TwoSatFormula};
use hered3_core::{solve, Color, Decision, Graph, Palette, SolveOptions, VertexId, VertexSet};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut g = Graph::with_vertices(n);
            let mut k = 0;
            for i in 0..n as u32 {
                for j in i + 1..n as u32 {
                    if bits[k] {
                        g.add_edge(VertexId(i), VertexId(j)).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn palettes(n: usize) -> impl Strategy<Value = Vec<Palette>> {
    proptest::collection::vec((1u8..8).prop_map(Palette::from_bits), n)
}

/// Plain enumeration of list colorings.
fn brute_list_color(g: &Graph, pal: &[Palette]) -> bool {
    let vs: Vec<VertexId> = g.vertices().collect();
    fn rec(g: &Graph, vs: &[VertexId], pal: &[Palette], col: &mut BTreeMap<VertexId, Color>) -> bool {
        let Some((&v, rest)) = vs.split_first() else { return true };
        for c in pal[v.index()].iter() {
            if g.neighbors(v).all(|u| col.get(&u) != Some(&c)) {
                col.insert(v, c);
                if rec(g, rest, pal, col) {
                    return true;
                }
                col.remove(&v);
            }
        }
        false
    }
    rec(g, &vs, pal, &mut BTreeMap::new())
}

fn is_induced_p4(g: &Graph, p: [VertexId; 4]) -> bool {
    let e = |a: usize, b: usize| g.has_edge(p[a], p[b]);
    e(0, 1) && e(1, 2) && e(2, 3) && !e(0, 2) && !e(0, 3) && !e(1, 3)
}

fn brute_has_p4(g: &Graph) -> bool {
    let vs: Vec<VertexId> = g.vertices().collect();
    for &a in &vs {
        for &b in &vs {
            for &c in &vs {
                for &d in &vs {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct && is_induced_p4(g, p) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn components_partition_the_vertices(g in graph(10)) {
        let comps = g.connected_components();
        let total: usize = comps.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, g.vertex_count());
        for c in &comps {
            prop_assert!(g.is_connected_within(c));
            prop_assert!(g.set_neighborhood(c).is_empty());
        }
    }

    #[test]
    fn induced_subgraph_keeps_exactly_inner_edges(g in graph(9), keep in any::<u16>()) {
        let s: VertexSet = g.vertices().filter(|v| keep >> v.index() & 1 == 1).collect();
        let h = g.induced_subgraph(&s).unwrap();
        prop_assert_eq!(h.vertex_count(), s.len());
        let inner = g.edges().filter(|(u, v)| s.contains(u) && s.contains(v)).count();
        prop_assert_eq!(h.edge_count(), inner);
    }

    #[test]
    fn cograph_recognition_matches_p4_search(g in graph(8)) {
        let has = brute_has_p4(&g);
        match cograph::recognize(&g) {
            Ok(t) => {
                prop_assert!(!has);
                for u in g.vertices() {
                    for v in g.vertices().filter(|&v| v > u) {
                        prop_assert_eq!(t.adjacent(u, v), g.has_edge(u, v));
                    }
                }
            }
            Err(w) => {
                prop_assert!(has);
                prop_assert!(w.verify(&g));
            }
        }
    }

    #[test]
    fn class_witnesses_verify(g in graph(10)) {
        if let Some(w) = pattern::check_class(&g) {
            prop_assert!(matches!(w.kind, PatternKind::C5 | PatternKind::TwoP4));
            prop_assert!(w.verify(&g));
        }
        if let Some(w) = pattern::find_k4_or_odd_neighborhood(&g) {
            prop_assert!(w.verify(&g));
        }
        for len in [5, 7, 9] {
            if let Some(w) = pattern::find_induced_cycle(&g, len).unwrap() {
                prop_assert!(w.verify(&g));
            }
        }
    }

    #[test]
    fn cotree_coloring_matches_enumeration(g in graph(8), pal in palettes(8)) {
        if let Ok(t) = cograph::recognize(&g) {
            let p = |v: VertexId| pal[v.index()];
            let want = brute_list_color(&g, &pal);
            match cograph::list3color(&t, p) {
                Some(col) => {
                    prop_assert!(want);
                    prop_assert!(g.vertices().all(|v| pal[v.index()].contains(col[&v])));
                    prop_assert!(g.edges().all(|(u, v)| col[&u] != col[&v]));
                }
                None => prop_assert!(!want),
            }
        }
    }

    #[test]
    fn two_sat_matches_enumeration(vars in 1usize..=10, raw in proptest::collection::vec((0usize..10, any::<bool>(), 0usize..10, any::<bool>()), 0..30)) {
        let mut f = TwoSatFormula::new(vars);
        let lit = |v: usize, s: bool| if s { Lit::pos(v % vars) } else { Lit::neg(v % vars) };
        for &(a, sa, b, sb) in &raw {
            f.add_clause(lit(a, sa), lit(b, sb)).unwrap();
        }
        let brute = (0..1u32 << vars).any(|m| f.is_satisfied_by(&(0..vars).map(|k| m >> k & 1 == 1).collect::<Vec<_>>()));
        match f.solve() {
            Some(a) => prop_assert!(brute && f.is_satisfied_by(&a)),
            None => prop_assert!(!brute),
        }
    }

    #[test]
    fn two_palette_encoding_matches_enumeration(g in graph(8), drop in proptest::collection::vec(0usize..3, 8)) {
        let pal: Vec<Palette> = drop.iter().map(|&d| Palette::FULL.without(Color::ALL[d])).collect();
        let (f, vars) = encode_two_palette_subgraph(&g, &g.vertex_set(), |v| pal[v.index()]).unwrap();
        let want = brute_list_color(&g, &pal);
        match f.solve() {
            Some(a) => {
                prop_assert!(want);
                let col = vars.decode(&a);
                prop_assert!(g.edges().all(|(u, v)| col[&u] != col[&v]));
            }
            None => prop_assert!(!want),
        }
    }

    #[test]
    fn text_formats_round_trip(g in graph(12)) {
        let none = BTreeMap::new();
        let d = io::parse(&io::print(&g, &none, Format::DimacsCol), Format::DimacsCol).unwrap();
        prop_assert_eq!(&d.graph, &g);
        let e = io::parse(&io::print(&g, &none, Format::EdgeList), Format::EdgeList).unwrap();
        prop_assert_eq!(e.graph.vertex_count(), g.vertex_count());
        prop_assert_eq!(e.graph.edge_count(), g.edge_count());
        for (u, v) in e.graph.edges() {
            let (a, b): (u32, u32) = (e.labels[u.index()].parse().unwrap(), e.labels[v.index()].parse().unwrap());
            prop_assert!(g.has_edge(VertexId(a), VertexId(b)));
        }
    }

    #[test]
    fn solver_agrees_with_enumeration_in_class(g in graph(9)) {
        prop_assume!(pattern::check_class(&g).is_none());
        let want = brute_list_color(&g, &vec![Palette::FULL; g.id_bound()]);
        let r = solve(&g, &SolveOptions { witness: true, ..SolveOptions::default() }).unwrap();
        prop_assert_eq!(r.decision == Decision::Colorable, want);
        if let Some(w) = r.witness {
            prop_assert!(g.edges().all(|(u, v)| w[u.index()] != w[v.index()]));
        }
    }
}

#[test]
fn outside_the_class_is_refused_unless_assumed() {
    let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    assert!(matches!(solve(&c5, &SolveOptions::default()), Err(hered3_core::SolveError::ClassViolation(_))));
    let assumed = SolveOptions {
        assume_class: true,
        ..SolveOptions::default()
    };
    assert_eq!(solve(&c5, &assumed).unwrap().decision, Decision::Colorable);
}
