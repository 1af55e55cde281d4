mod common;

use jsjtree::complex::{Multigraph, RefinementComplex};
use jsjtree::fixtures;
use jsjtree::oracle::{ball_isomorphic, degree_refinement, expand_ball, OracleError};
use jsjtree::refine::{neighbor_refine_fix, partition};
use jsjtree::{initial_decoration, Exec, Mode, OrnamentUniverse};

fn k4() -> Multigraph {
    Multigraph { n: 4, edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] }
}

#[test]
fn three_regular_ball() {
    let cx = RefinementComplex::from_multigraph(&k4());
    let b = expand_ball(&cx, 0, 2).unwrap();
    let root = &b.nodes[b.root];
    assert_eq!(root.children.len(), 3);
    for &c in &root.children {
        assert_eq!(b.nodes[c].children.len(), 2);
        for &gc in &b.nodes[c].children {
            assert!(b.nodes[gc].children.is_empty());
        }
    }
}

#[test]
fn regular_ball_sizes() {
    // K5 is 4-regular; a loop and a double edge make a 4-regular graph on 2 vertices
    let k5 = Multigraph { n: 5, edges: (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect() };
    let odd = Multigraph { n: 2, edges: vec![(0, 0), (0, 1), (0, 1), (1, 1)] };
    for (m, d) in [(k4(), 3u128), (k5, 4), (odd, 4)] {
        let cx = RefinementComplex::from_multigraph(&m);
        for r in 0..=6u32 {
            let want = 1 + d * ((d - 1).pow(r) - 1) / (d - 2);
            assert_eq!(expand_ball(&cx, 0, r as usize).unwrap().node_count(), want, "d={d} r={r}");
        }
    }
}

#[test]
fn infinite_multiplicity_is_refused() {
    let cx = RefinementComplex::subdivide(&fixtures::load("fig1"));
    assert!(matches!(expand_ball(&cx, 0, 1), Err(OracleError::InfiniteMultiplicity(_))));
}

#[test]
fn truncated_rigid_nodes_have_m_children() {
    let g = common::truncated(&fixtures::load("fig3"), 4);
    let cx = RefinementComplex::subdivide(&g);
    let r = g.vertex_index("r").unwrap();
    let b = expand_ball(&cx, r, 3).unwrap();
    assert_eq!(b.nodes[b.root].children.len(), 4);
    let labels = vec![0u8; cx.len()];
    assert!(ball_isomorphic(&b, &b, &labels));
}

#[test]
fn stable_classes_match_ball_isomorphism_on_fixtures() {
    for (name, _) in fixtures::ALL {
        let g = common::truncated(&fixtures::load(name), 2);
        let cx = RefinementComplex::subdivide(&g);
        let mut u = OrnamentUniverse::new();
        let init = initial_decoration(&g, Mode::Type, &mut u).unwrap();
        let (stable, steps) = neighbor_refine_fix(&cx, &init, &mut u, Exec::default());
        let class = partition(&stable);
        let far = 2 * (steps + 1);
        let near: Vec<_> = (0..cx.len()).map(|t| expand_ball(&cx, t, 4).unwrap()).collect();
        let deep: Vec<_> = (0..cx.len()).map(|t| expand_ball(&cx, t, far.max(4)).unwrap()).collect();
        for s in 0..cx.len() {
            for t in 0..cx.len() {
                if class[s] == class[t] {
                    assert!(ball_isomorphic(&near[s], &near[t], &init), "{name}: {s} {t}");
                } else {
                    assert!(!ball_isomorphic(&deep[s], &deep[t], &init), "{name}: {s} {t}");
                }
            }
        }
    }
}

#[test]
fn star_refinement() {
    let m = Multigraph { n: 4, edges: vec![(0, 1), (0, 2), (0, 3)] };
    let dr = degree_refinement(&m);
    let (c, l) = (dr.colors[0], dr.colors[1]);
    assert_eq!(dr.matrix[c], if c < l { vec![0, 3] } else { vec![3, 0] });
    assert_eq!(dr.matrix[l], if c < l { vec![1, 0] } else { vec![0, 1] });
}
