mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use jsjtree::complex::{Multigraph, RefinementComplex};
use jsjtree::corpus::{random_cylinder_graph, random_multigraph, rng};
use jsjtree::fixtures;
use jsjtree::model::VertexKind;
use jsjtree::refine::{
    class_count, neighbor_refine_fix, neighbor_refine_step, partition, same_partition, structure_invariant,
    synchronize,
};
use jsjtree::{initial_decoration, Exec, ExtNat, Mode, OrnamentUniverse};

/// Vertex classes as sets of ids.
fn vertex_groups(g: &jsjtree::CylinderGraph, d: &[jsjtree::OrnId]) -> BTreeSet<BTreeSet<String>> {
    let mut by: BTreeMap<jsjtree::OrnId, BTreeSet<String>> = BTreeMap::new();
    for (v, vx) in g.vertices.iter().enumerate() {
        by.entry(d[v]).or_default().insert(vx.id.clone());
    }
    by.into_values().collect()
}

fn groups(sets: &[&[&str]]) -> BTreeSet<BTreeSet<String>> {
    sets.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect()
}

#[test]
fn fig1_first_step_splits_cylinders_four_ways() {
    let g = fixtures::load("fig1");
    let cx = RefinementComplex::subdivide(&g);
    let mut u = OrnamentUniverse::new();
    let init = initial_decoration(&g, Mode::Qi, &mut u).unwrap();
    let sync = synchronize(&cx, &init, &mut u, Exec::default());
    let d1 = neighbor_refine_step(&cx, &init, &sync, &mut u, Exec::default());
    let want = groups(&[
        &["c1"],
        &["c2"],
        &["c3", "c4", "c6"],
        &["c5"],
        &["r6"],
        &["r1", "r2", "r3", "r4", "r5", "r7", "r8", "r9"],
        &["h"],
    ]);
    assert_eq!(vertex_groups(&g, &d1), want);

    // count rows by initial class, straight from the graph
    let label = |v: usize| (g.vertices[v].kind, g.vertices[v].qi_type.clone());
    for (id, rm, rf, h) in [("c1", 0, 5, 0), ("c2", 1, 1, 0), ("c3", 0, 2, 0), ("c5", 0, 1, 1)] {
        let c = g.vertex_index(id).unwrap();
        let mut got = (0, 0, 0);
        for &e in g.incident(c) {
            match label(g.other_end(e, c)) {
                (VertexKind::Hanging, _) => got.2 += 1,
                (_, Some(t)) if t == "F2" => got.1 += 1,
                _ => got.0 += 1,
            }
        }
        assert_eq!(got, (rm, rf, h), "{id}");
    }

    let d2 = neighbor_refine_step(&cx, &init, &d1, &mut u, Exec::default());
    let want = groups(&[
        &["c1"],
        &["c2"],
        &["c3", "c4", "c6"],
        &["c5"],
        &["r6"],
        &["r1"],
        &["r4"],
        &["r2", "r3", "r5"],
        &["r7", "r8", "r9"],
        &["h"],
    ]);
    assert_eq!(vertex_groups(&g, &d2), want);
}

#[test]
fn fig1_stabilizes_after_two_steps() {
    let g = fixtures::load("fig1");
    let cx = RefinementComplex::subdivide(&g);
    let mut u = OrnamentUniverse::new();
    let init = initial_decoration(&g, Mode::Qi, &mut u).unwrap();
    let (stable, steps) = neighbor_refine_fix(&cx, &init, &mut u, Exec::default());
    assert_eq!(steps, 2);
    assert_eq!(class_count(&stable[..g.vertices.len()]), 10);
}

#[test]
fn symmetric_example_is_stable_immediately() {
    for name in ["fig3", "fig4"] {
        let g = fixtures::load(name);
        let cx = RefinementComplex::subdivide(&g);
        let mut u = OrnamentUniverse::new();
        let init = initial_decoration(&g, Mode::Type, &mut u).unwrap();
        let (stable, steps) = neighbor_refine_fix(&cx, &init, &mut u, Exec::default());
        assert_eq!(steps, 0, "{name}");
        assert_eq!(class_count(&stable[..g.vertices.len()]), 3, "{name}");
    }
}

#[test]
fn two_regular_graph_has_one_entry() {
    let m = Multigraph { n: 5, edges: (0..5).map(|i| (i, (i + 1) % 5)).collect() };
    let cx = RefinementComplex::from_multigraph(&m);
    let mut u = OrnamentUniverse::new();
    let init = vec![u.base(["v"]); 5];
    let (stable, steps) = neighbor_refine_fix(&cx, &init, &mut u, Exec::default());
    assert_eq!(steps, 0);
    let inv = structure_invariant(&cx, &stable, &u).unwrap();
    assert_eq!(inv.entries.len(), 1);
    assert_eq!(inv.entries.values().next(), Some(&ExtNat::Fin(2)));
}

#[test]
fn qi_and_qi_stretch_invariants_differ() {
    let g = fixtures::load("fig1");
    let a = common::refined(&g, Mode::Qi);
    let b = common::refined(&g, Mode::QiStretch);
    assert!(class_count(&a.d) < class_count(&b.d));
    assert_ne!(a.invariant(0).unwrap(), b.invariant(0).unwrap());
}

#[test]
fn union_refines_like_its_components() {
    for (a, b) in [("fig1", "fig5"), ("fig3", "ex11-g0"), ("fig4", "fig1")] {
        let (ga, gb) = (fixtures::load(a), fixtures::load(b));
        let mut joint = jsjtree::Workspace::new(&[&ga, &gb], Mode::Qi, Exec::default()).unwrap();
        joint.full_refine().unwrap();
        for (p, g) in [(0, &ga), (1, &gb)] {
            let solo = common::refined(g, Mode::Qi);
            let cells = joint.cells_of(p);
            let restricted: Vec<_> = cells.iter().map(|&t| joint.d[t]).collect();
            assert!(same_partition(&restricted, &solo.d), "{a} + {b}, part {p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steps_refine_monotonically(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_cylinder_graph(&mut r, 12);
        let cx = RefinementComplex::subdivide(&g);
        let mut u = OrnamentUniverse::new();
        let init = initial_decoration(&g, Mode::Qi, &mut u).unwrap();
        let mut cur = synchronize(&cx, &init, &mut u, Exec::Sequential);
        for _ in 0..cx.len() + 2 {
            let next = neighbor_refine_step(&cx, &init, &cur, &mut u, Exec::Sequential);
            // every new class lies inside an old one
            let (p, q) = (partition(&cur), partition(&next));
            let mut parent = BTreeMap::new();
            for t in 0..cx.len() {
                prop_assert_eq!(*parent.entry(q[t]).or_insert(p[t]), p[t]);
            }
            cur = next;
        }
    }

    #[test]
    fn parallel_matches_sequential(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let m = random_multigraph(&mut r, n, 4);
        let cx = RefinementComplex::from_multigraph(&m);
        let mut u = OrnamentUniverse::new();
        let init = vec![u.base(["v"]); n];
        let (a, sa) = neighbor_refine_fix(&cx, &init, &mut u, Exec::Sequential);
        let (b, sb) = neighbor_refine_fix(&cx, &init, &mut u, Exec::Parallel);
        prop_assert_eq!(a, b);
        prop_assert_eq!(sa, sb);
    }
}
