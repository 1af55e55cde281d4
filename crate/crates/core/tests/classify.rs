mod common;

use std::collections::HashMap;

use jsjtree::classify::{compare, CompareOptions, Condition, Verdict, Workspace};
use jsjtree::fixtures;
use jsjtree::model::{parse_input, VertexKind};
use jsjtree::orient::{imbalance, xi_apply};
use jsjtree::{CylinderGraph, Exec, Mode};

fn verdict(a: &CylinderGraph, b: &CylinderGraph, mode: Mode) -> Verdict {
    compare(a, b, mode, CompareOptions::default()).unwrap()
}

fn kind(v: &Verdict) -> u8 {
    v.exit_code() as u8
}

#[test]
fn example_1_1() {
    let (g0, g1) = (fixtures::load("ex11-g0"), fixtures::load("ex11-g1"));
    assert!(matches!(verdict(&g0, &g1, Mode::QiStretch), Verdict::Distinct { condition: Condition::A, .. }));
    assert!(matches!(verdict(&g0, &g1, Mode::Boundary), Verdict::Equivalent(_)));
}

#[test]
fn symmetric_example_and_its_double() {
    let (g3, g4) = (fixtures::load("fig3"), fixtures::load("fig4"));
    for mode in [Mode::Boundary, Mode::Qi, Mode::Type] {
        assert!(matches!(verdict(&g3, &g4, mode), Verdict::Equivalent(_)), "{mode}");
    }
}

#[test]
fn reflexive_on_every_fixture() {
    for (name, _) in fixtures::ALL {
        let g = fixtures::load(name);
        for mode in Mode::ALL {
            let Ok(v) = compare(&g, &g, mode, CompareOptions::default()) else { continue };
            let Verdict::Equivalent(w) = v else { panic!("{name} {mode}: {v:?}") };
            assert!(w.xi.iter().all(|&(_, s)| s == 1), "{name} {mode}");
        }
    }
}

#[test]
fn symmetric_and_relabeling_invariant() {
    let names: Vec<&str> = fixtures::ALL.iter().map(|(n, _)| *n).collect();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i..] {
            let (ga, gb) = (fixtures::load(a), fixtures::load(b));
            for mode in [Mode::Qi, Mode::Boundary] {
                let ab = verdict(&ga, &gb, mode);
                assert_eq!(kind(&ab), kind(&verdict(&gb, &ga, mode)), "{a} {b} {mode}");
                let relabeled = verdict(&common::relabel(&ga), &gb, mode);
                assert_eq!(kind(&ab), kind(&relabeled), "{a}' {b} {mode}");
            }
        }
    }
}

#[test]
fn witness_signs_balance_the_imbalances() {
    let g = fixtures::load("fig5");
    let h = common::relabel(&g);
    let Verdict::Equivalent(w) = verdict(&g, &h, Mode::Boundary) else { panic!("fig5 not self-equivalent") };
    assert!(!w.xi.is_empty());

    let mut ws = Workspace::new(&[&g, &h], Mode::Boundary, Exec::default()).unwrap();
    ws.full_refine().unwrap();
    let classes = ws.classes();
    let xi: HashMap<_, i8> = w.xi.iter().map(|&(c, s)| (classes[c].0, s)).collect();
    let flipped = xi_apply(&ws.graph, &ws.d, &ws.o, &xi);
    for (_, cells) in &classes {
        let left = cells.iter().find(|&&t| t < ws.nv() && ws.part_of_vertex[t] == 0);
        let right = cells.iter().find(|&&t| t < ws.nv() && ws.part_of_vertex[t] == 1);
        if let (Some(&l), Some(&r)) = (left, right) {
            if ws.graph.vertices[l].kind == VertexKind::Cylindrical {
                let a = imbalance(&ws.graph, &ws.d, &flipped, l, &ws.universe);
                let b = imbalance(&ws.graph, &ws.d, &ws.o, r, &ws.universe);
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn sign_search_limit() {
    let g = fixtures::load("fig5");
    let opts = CompareOptions { max_xi: 0, ..CompareOptions::default() };
    assert!(matches!(compare(&g, &g, Mode::Boundary, opts).unwrap(), Verdict::Inconclusive { .. }));
}

#[test]
fn incomparable_oracles_are_inconclusive() {
    let g = fixtures::load("ex11-g0");
    let mut doc = g.to_json();
    doc["oracles"][0]["id"] = "K4-other".into();
    doc["vertices"][1]["oracle"] = "K4-other".into();
    let h = parse_input(&doc.to_string()).unwrap();
    assert!(matches!(verdict(&g, &h, Mode::Boundary), Verdict::Inconclusive { .. }));
    // a neighbor-level difference is still decisive
    let g1 = fixtures::load("ex11-g1");
    assert!(matches!(verdict(&g1, &h, Mode::QiStretch), Verdict::Distinct { .. }));
}

#[test]
fn trivial_jsj_warns() {
    let g = parse_input(r#"{"name":"lone","vertices":[{"id":"r","kind":"rigid","qi_type":"S"}],"edges":[]}"#).unwrap();
    let ws = common::refined(&g, Mode::Qi);
    assert_eq!(ws.warnings.len(), 1);
    assert!(matches!(verdict(&g, &g, Mode::Qi), Verdict::Equivalent(_)));
    let other = parse_input(r#"{"name":"lone","vertices":[{"id":"r","kind":"rigid","qi_type":"T"}],"edges":[]}"#).unwrap();
    assert!(matches!(verdict(&g, &other, Mode::Qi), Verdict::Distinct { .. }));
}

#[test]
fn orbit_counts() {
    let (ws, info) = jsjtree::orbits(&fixtures::load("fig3"), Mode::Type, Exec::default()).unwrap();
    let vertex_classes = info.iter().filter(|c| c.base[0] != "edge").count();
    assert_eq!(vertex_classes, 3);
    assert_eq!(info.len(), 5);
    assert_eq!(ws.parts.len(), 1);
}

#[test]
fn orders_agree_on_random_inputs() {
    let mut r = jsjtree::corpus::rng(11);
    for _ in 0..50 {
        let g = jsjtree::corpus::random_cylinder_graph(&mut r, 12);
        for mode in [Mode::Qi, Mode::Boundary] {
            let base = common::refined(&g, mode);
            for order in jsjtree::classify::all_orders() {
                let mut ws = Workspace::solo(&g, mode, Exec::default()).unwrap();
                ws.full_refine_with(order).unwrap();
                assert!(jsjtree::refine::same_partition(&base.d, &ws.d), "{mode} {order:?}");
            }
        }
    }
}
