#![allow(dead_code)]

use serde_json::Value;

use jsjtree::classify::Workspace;
use jsjtree::model::{parse_input, CylinderGraph};
use jsjtree::{Exec, Mode};

pub fn refined(g: &CylinderGraph, mode: Mode) -> Workspace {
    let mut ws = Workspace::solo(g, mode, Exec::default()).expect("decorates");
    ws.full_refine().expect("refines");
    ws
}

/// Prefixes every vertex and edge id with `x_` and reverses the vertex and
/// edge lists.
pub fn relabel(g: &CylinderGraph) -> CylinderGraph {
    let mut doc = g.to_json();
    let p = |v: &Value| Value::String(format!("x_{}", v.as_str().unwrap()));
    for v in doc["vertices"].as_array_mut().unwrap() {
        v["id"] = p(&v["id"]);
    }
    for e in doc["edges"].as_array_mut().unwrap() {
        for key in ["id", "cyl", "ne"] {
            e[key] = p(&e[key]);
        }
    }
    for o in doc["oracles"].as_array_mut().unwrap() {
        if let Some(Value::Object(map)) = o.get_mut("slot_edge") {
            let renamed = map
                .iter()
                .map(|(v, slots)| {
                    let slots: serde_json::Map<String, Value> =
                        slots.as_object().unwrap().iter().map(|(s, e)| (s.clone(), p(e))).collect();
                    (format!("x_{v}"), Value::Object(slots))
                })
                .collect();
            *map = renamed;
        }
    }
    doc["vertices"].as_array_mut().unwrap().reverse();
    doc["edges"].as_array_mut().unwrap().reverse();
    parse_input(&doc.to_string()).expect("relabeled graph is valid")
}

/// Stable classes as sorted sets of cell names, with the `x_` prefix removed.
pub fn partition_by_name(ws: &Workspace) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = ws
        .classes()
        .into_iter()
        .map(|(_, cells)| {
            let mut names: Vec<String> = cells.iter().map(|&t| ws.cell_name(t).replace("x_", "")).collect();
            names.sort();
            names
        })
        .collect();
    out.sort();
    out
}

/// Copy of `g` with every infinite multiplicity replaced by `m`.
pub fn truncated(g: &CylinderGraph, m: u64) -> CylinderGraph {
    let mut h = g.clone();
    for e in &mut h.edges {
        if !e.mult_at_ne.is_finite() {
            e.mult_at_ne = jsjtree::ExtNat::Fin(m);
        }
    }
    h
}
