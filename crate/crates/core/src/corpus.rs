//! Seeded random inputs for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::complex::Multigraph;
use crate::model::{parse_input, CylinderGraph};

pub const DEFAULT_SEED: u64 = 0x4a53_4a21;

/// Seed from `JSJ_SEED`, or the default.
pub fn seed_from_env() -> u64 {
    std::env::var("JSJ_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected multigraph with `n` vertices, loops and parallel edges
/// allowed, every degree at most `max_deg`.
pub fn random_multigraph<R: Rng>(rng: &mut R, n: usize, max_deg: usize) -> Multigraph {
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&w| deg[w] < max_deg).collect();
        let w = *open.choose(rng).expect("a spanning tree fits under the degree bound");
        edges.push((w, v));
        deg[w] += 1;
        deg[v] += 1;
    }
    let extra = rng.gen_range(0..=n * 2);
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let need = if a == b { 2 } else { 1 };
        if deg[a] + need <= max_deg && deg[b] + need <= max_deg && (a != b || deg[a] + 2 <= max_deg) {
            edges.push((a.min(b), a.max(b)));
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    Multigraph { n, edges }
}

/// Random double cover: vertex `v` lifts to `2v` and `2v + 1`.
pub fn random_double_cover<R: Rng>(rng: &mut R, m: &Multigraph) -> Multigraph {
    let mut edges = Vec::new();
    for &(a, b) in &m.edges {
        if rng.gen_bool(0.5) {
            edges.push((2 * a, 2 * b));
            edges.push((2 * a + 1, 2 * b + 1));
        } else {
            edges.push((2 * a, 2 * b + 1));
            edges.push((2 * a + 1, 2 * b));
        }
    }
    Multigraph { n: 2 * m.n, edges }
}

/// The 100-graph corpus: random graphs on up to 8 vertices, alternating
/// with double covers of random graphs on up to 4 vertices so that pairs
/// with a common universal cover occur.
pub fn multigraph_corpus(seed: u64, size: usize) -> Vec<Multigraph> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        if out.len() % 2 == 0 {
            let n = r.gen_range(1..=8);
            out.push(random_multigraph(&mut r, n, 4));
        } else {
            let n = r.gen_range(1..=4);
            let base = random_multigraph(&mut r, n, 4);
            out.push(random_double_cover(&mut r, &base));
        }
    }
    out
}

/// A random connected bipartite input with at most `max_cells` cells
/// (vertices plus edges). Multiplicities at non-elementary vertices are
/// sometimes infinite.
pub fn random_cylinder_graph<R: Rng>(rng: &mut R, max_cells: usize) -> CylinderGraph {
    let cyls = rng.gen_range(1..=3usize);
    let nes = rng.gen_range(1..=3usize);
    let kinds = ["rigid", "hanging"];
    let labels = ["A", "B"];
    let mut vertices = Vec::new();
    for i in 0..cyls {
        vertices.push(json!({"id": format!("c{i}"), "kind": "cylindrical", "qi_type": "Z", "rel_qi_type": "Z"}));
    }
    for i in 0..nes {
        let l = labels[rng.gen_range(0..2)];
        vertices.push(json!({"id": format!("v{i}"), "kind": kinds[rng.gen_range(0..2)], "qi_type": l, "rel_qi_type": l}));
    }
    let budget = max_cells.saturating_sub(cyls + nes).max(cyls + nes - 1);
    let mut edges = Vec::new();
    let add = |edges: &mut Vec<serde_json::Value>, c: usize, v: usize, rng: &mut R| {
        let mult_ne = if rng.gen_bool(0.3) { json!("inf") } else { json!(rng.gen_range(1..=3)) };
        edges.push(json!({
            "id": format!("e{}", edges.len()),
            "cyl": format!("c{c}"), "ne": format!("v{v}"),
            "mult_at_cyl": rng.gen_range(1..=3), "mult_at_ne": mult_ne,
            "sign": null, "k": "1",
        }));
    };
    // spanning tree on the bipartite vertex set
    let mut placed_c = vec![0usize];
    let mut placed_v = Vec::new();
    let mut pending: Vec<(bool, usize)> = (1..cyls).map(|c| (true, c)).chain((0..nes).map(|v| (false, v))).collect();
    pending.shuffle(rng);
    while let Some(pos) = pending.iter().position(|&(is_c, _)| if is_c { !placed_v.is_empty() } else { true }) {
        let (is_c, i) = pending.remove(pos);
        if is_c {
            let v = *placed_v.choose(rng).expect("nonempty");
            add(&mut edges, i, v, rng);
            placed_c.push(i);
        } else {
            let c = *placed_c.choose(rng).expect("nonempty");
            add(&mut edges, c, i, rng);
            placed_v.push(i);
        }
    }
    while edges.len() < budget && rng.gen_bool(0.6) {
        let c = rng.gen_range(0..cyls);
        let v = rng.gen_range(0..nes);
        add(&mut edges, c, v, rng);
    }
    for v in vertices.iter_mut().skip(cyls) {
        let oracle = if v["kind"] == "hanging" { "pants" } else { "rigid" };
        v["oracle"] = json!(oracle);
    }
    let oracles = json!([{"id": "pants", "type": "flexible"}, {"id": "rigid", "type": "trivial"}]);
    let doc = json!({"name": "random", "vertices": vertices, "edges": edges, "oracles": oracles});
    parse_input(&doc.to_string()).expect("generated input is valid")
}
