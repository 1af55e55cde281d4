//! Text, JSON and DOT renderings of refinement results.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde_json::{json, Value};

use crate::classify::{class_infos, Workspace};
use crate::complex::Cell;
use crate::extnat::ExtNat;
use crate::ornament::OrnId;
use crate::stretch::StretchTable;

/// Vertex-level table: vertex classes in ornament order, entry = number of
/// neighboring vertices of the column class, summed through edge cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTable {
    pub classes: Vec<(OrnId, Vec<String>)>,
    pub base: Vec<Vec<String>>,
    pub entries: Vec<Vec<ExtNat>>,
}

pub fn vertex_table(ws: &Workspace, part: usize) -> VertexTable {
    let g = &ws.graph;
    let verts: Vec<usize> = ws.parts[part].vertices.clone().collect();
    let mut by: BTreeMap<OrnId, Vec<usize>> = BTreeMap::new();
    for &v in &verts {
        by.entry(ws.d[v]).or_default().push(v);
    }
    let mut classes: Vec<(OrnId, Vec<usize>)> = by.into_iter().collect();
    classes.sort_by(|a, b| ws.universe.cmp(a.0, b.0));
    let index: HashMap<OrnId, usize> = classes.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    let mut entries = vec![vec![ExtNat::ZERO; classes.len()]; classes.len()];
    for (i, (_, members)) in classes.iter().enumerate() {
        let v = members[0];
        for &e in g.incident(v) {
            let w = g.other_end(e, v);
            entries[i][index[&ws.d[w]]] += g.mult_at(e, v);
        }
    }
    VertexTable {
        base: classes.iter().map(|(o, _)| ws.universe.base_tags(*o).to_vec()).collect(),
        classes: classes
            .into_iter()
            .map(|(o, ms)| (o, ms.into_iter().map(|v| g.vertices[v].id.clone()).collect()))
            .collect(),
        entries,
    }
}

fn cell(n: ExtNat) -> String {
    match n {
        ExtNat::Inf => "∞".into(),
        ExtNat::Fin(k) => k.to_string(),
    }
}

/// Block matrix: rows and columns in ornament order, `|` between blocks
/// with different base ornaments.
pub fn render_table(t: &VertexTable) -> String {
    let n = t.classes.len();
    let labels: Vec<String> = t
        .classes
        .iter()
        .enumerate()
        .map(|(i, (_, ms))| format!("{i:>2} {} {{{}}}", t.base[i].join(":"), ms.join(",")))
        .collect();
    let lw = labels.iter().map(|s| s.chars().count()).max().unwrap_or(0);
    let breaks: Vec<bool> = (0..n).map(|j| j > 0 && t.base[j] != t.base[j - 1]).collect();
    let mut out = String::new();
    let mut header = format!("{:lw$} |", "");
    for j in 0..n {
        if breaks[j] {
            header.push_str(" |");
        }
        write!(header, " {j:>2}").unwrap();
    }
    out.push_str(header.trim_end());
    out.push('\n');
    for i in 0..n {
        if breaks[i] {
            out.push_str(&"-".repeat(header.chars().count()));
            out.push('\n');
        }
        let mut line = format!("{:lw$} |", labels[i]);
        for j in 0..n {
            if breaks[j] {
                line.push_str(" |");
            }
            write!(line, " {:>2}", cell(t.entries[i][j])).unwrap();
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// JSON form: the canonical ornament DAG, classes, the cell-level
/// invariant keyed by ornament positions, and the vertex table.
pub fn invariant_json(ws: &Workspace, part: usize) -> Result<Value, crate::classify::ClassifyError> {
    let inv = ws.invariant(part)?;
    let roots: Vec<OrnId> = inv.rows().collect();
    let table = ws.universe.export(&roots);
    let pos = |o: &OrnId| table.position[o].to_string();
    let mut matrix: BTreeMap<usize, BTreeMap<usize, ExtNat>> = BTreeMap::new();
    for ((r, c), n) in &inv.entries {
        matrix.entry(table.position[r]).or_default().insert(table.position[c], *n);
    }
    let matrix: serde_json::Map<String, Value> = matrix
        .into_iter()
        .map(|(r, row)| {
            let row: serde_json::Map<String, Value> =
                row.into_iter().map(|(c, n)| (c.to_string(), json!(n))).collect();
            (r.to_string(), Value::Object(row))
        })
        .collect();
    let cells = ws.cells_of(part);
    let classes: Vec<Value> = ws
        .classes()
        .into_iter()
        .filter(|(o, _)| inv.projection.contains_key(o))
        .map(|(o, members)| {
            json!({
                "ornament": pos(&o),
                "base": ws.universe.base_tags(o),
                "members": members.iter().filter(|t| cells.contains(t)).map(|&t| ws.cell_name(t)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let vt = vertex_table(ws, part);
    Ok(json!({
        "name": ws.parts[part].name,
        "mode": ws.mode.name(),
        "ornaments": table.nodes,
        "classes": classes,
        "invariant": matrix,
        "vertex_table": {
            "rows": vt.classes.iter().zip(&vt.base).map(|((o, ms), b)| json!({"ornament": pos(o), "base": b, "members": ms})).collect::<Vec<_>>(),
            "entries": vt.entries,
        },
    }))
}

pub fn render_orbits(ws: &Workspace) -> String {
    let mut out = String::new();
    for c in class_infos(ws) {
        let counts: Vec<String> = c.counts.iter().map(|(j, n)| format!("{j}:{}", cell(*n))).collect();
        writeln!(out, "{:>3} {:<24} {{{}}}  [{}]", c.index, c.base.join(":"), c.members.join(","), counts.join(" ")).unwrap();
    }
    out
}

pub fn orbits_json(ws: &Workspace) -> Value {
    json!({ "mode": ws.mode.name(), "classes": class_infos(ws) })
}

pub fn render_imbalances(ws: &Workspace) -> String {
    let classes = ws.classes();
    let index: HashMap<OrnId, usize> = classes.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    let mut out = String::new();
    for (o, cells, v) in ws.imbalances() {
        let entries: Vec<String> = v.entries.iter().map(|(orn, n)| format!("{}:{n}", index[orn])).collect();
        let names: Vec<String> = cells.iter().map(|&t| ws.cell_name(t)).collect();
        writeln!(out, "{:>3} {{{}}}  ({})", index[&o], names.join(","), entries.join(", ")).unwrap();
    }
    out
}

pub fn imbalances_json(ws: &Workspace) -> Value {
    let classes = ws.classes();
    let index: HashMap<OrnId, usize> = classes.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    let rows: Vec<Value> = ws
        .imbalances()
        .into_iter()
        .map(|(o, cells, v)| {
            json!({
                "class": index[&o],
                "members": cells.iter().map(|&t| ws.cell_name(t)).collect::<Vec<_>>(),
                "imbalance": v.entries.iter().map(|(orn, n)| json!([index[orn], n])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "mode": ws.mode.name(), "cylinders": rows })
}

pub fn render_stretch(t: &StretchTable) -> String {
    let mut out = String::from("cylinder\tedge\trs\n");
    for r in &t.rows {
        writeln!(out, "{}\t{}\t{}", r.cylinder, r.edge, r.rs).unwrap();
    }
    out
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per cell colored by stable class, one arc from each vertex cell
/// to each incident edge cell.
pub fn export_dot(ws: &Workspace) -> String {
    const PALETTE: [&str; 12] = [
        "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
        "#ccebc5", "#ffed6f",
    ];
    let g = &ws.graph;
    let classes = ws.classes();
    let index: HashMap<OrnId, usize> = classes.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    let node = |t: usize| match ws.complex.cells[t] {
        Cell::Vertex(v) => format!("v:{}", g.vertices[v].id),
        Cell::Edge(e) => format!("e:{}", g.edges[e].id),
    };
    let mut out = format!("digraph {} {{\n  node [style=filled];\n", dot_id(&g.name));
    for t in 0..ws.complex.len() {
        let class = index[&ws.d[t]];
        let shape = if matches!(ws.complex.cells[t], Cell::Edge(_)) { "box" } else { "ellipse" };
        writeln!(
            out,
            "  {} [label={}, class={class}, shape={shape}, fillcolor=\"{}\"];",
            dot_id(&node(t)),
            dot_id(&ws.cell_name(t)),
            PALETTE[class % PALETTE.len()]
        )
        .unwrap();
    }
    let nv = g.vertices.len();
    for (e, ed) in g.edges.iter().enumerate() {
        let sign = ws.o.edge_sign(g, e);
        for v in [ed.cyl, ed.ne] {
            writeln!(
                out,
                "  {} -> {} [mult=\"{}\", sign={sign}];",
                dot_id(&node(v)),
                dot_id(&node(nv + e)),
                g.mult_at(e, v)
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    out
}
