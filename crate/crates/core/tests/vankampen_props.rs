mod common;

use proptest::prelude::*;
use stablepi1::fpgroup::abelianization;
use stablepi1::scenarios::{bundled_scenario, van_kampen_group, Payload, VanKampenData};
use stablepi1::vankampen::{pi1_presentation, GluingComplex};

use common::{direct_entry, invariants, DIRECT_ENTRY};

/// A connected graph: vertex `i > 0` hangs off a random earlier vertex, then
/// `extra` further edges join random pairs (loops allowed).
fn connected_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=7).prop_flat_map(|n| {
        let tree = (1..n).map(|i| (0..i).prop_map(move |p| (p, i))).collect::<Vec<_>>();
        let extra = prop::collection::vec((0..n, 0..n), 0..=5);
        (Just(n), tree, extra, any::<bool>()).prop_map(|(n, tree, extra, flip)| {
            let mut edges: Vec<(usize, usize)> = tree.into_iter().map(|(a, b)| if flip { (b, a) } else { (a, b) }).collect();
            edges.extend(extra);
            (n, edges)
        })
    })
}

fn complex(n: usize, edges: &[(usize, usize)]) -> GluingComplex {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let labels: Vec<String> = (0..edges.len()).map(|i| format!("e{i}")).collect();
    let edge_refs: Vec<(&str, &str, &str)> =
        edges.iter().zip(&labels).map(|(&(s, t), l)| (l.as_str(), vertices[s].as_str(), vertices[t].as_str())).collect();
    let vertex_refs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    GluingComplex::new("G", &vertex_refs, &edge_refs, &[], "v0").unwrap()
}

/// A P-case id with random edge permutations of both complexes.
fn shuffled_p_case() -> impl Strategy<Value = (&'static str, Vec<usize>, Vec<usize>)> {
    prop::sample::select(DIRECT_ENTRY.map(|(id, _, _)| id).to_vec()).prop_flat_map(|id| {
        let v = p_case(id);
        let dbar: Vec<usize> = (0..v.dbar.edges().len()).collect();
        let d: Vec<usize> = (0..v.d.edges().len()).collect();
        (Just(id), Just(dbar).prop_shuffle(), Just(d).prop_shuffle())
    })
}

fn p_case(id: &str) -> VanKampenData {
    match bundled_scenario(id).map(|s| s.payload) {
        Some(Payload::VanKampen(v)) => *v,
        _ => panic!("{id} is a van Kampen case"),
    }
}

proptest! {
    #[test]
    fn graph_groups_are_free_of_rank_e_minus_v_plus_one((n, edges) in connected_graph()) {
        let c = complex(n, &edges);
        prop_assert_eq!(c.graph_rank(), edges.len() + 1 - n);
        let pi1 = pi1_presentation(&c).unwrap();
        prop_assert_eq!(pi1.presentation.generator_count(), c.graph_rank());
        prop_assert!(pi1.presentation.relators().is_empty());
        prop_assert_eq!(abelianization(&pi1.presentation).free_rank, c.graph_rank());
    }

    #[test]
    fn p_cases_do_not_depend_on_edge_order((case, dbar_perm, d_perm) in shuffled_p_case()) {
        let v = p_case(case);
        let moved = VanKampenData {
            dbar: v.dbar.with_edge_order(&dbar_perm),
            d: v.d.with_edge_order(&d_perm),
            map: v.map.clone(),
        };
        prop_assert_eq!(invariants(&van_kampen_group(&moved).unwrap()), invariants(&direct_entry(case)));
    }
}

#[test]
fn p_cases_do_not_depend_on_the_basepoint() {
    for (id, _, _) in DIRECT_ENTRY {
        let v = p_case(id);
        let expected = invariants(&direct_entry(id));
        for vertex in v.dbar.vertices() {
            let target = &v.map.vertex_map[vertex];
            let moved = VanKampenData {
                dbar: v.dbar.with_basepoint(vertex).unwrap(),
                d: v.d.with_basepoint(target).unwrap(),
                map: v.map.clone(),
            };
            assert_eq!(invariants(&van_kampen_group(&moved).unwrap()), expected, "{id} based at {vertex}");
        }
    }
}
