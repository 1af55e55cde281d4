//! Moduli, relative stretch factors and per-cylinder normalization.

use serde::Serialize;
use thiserror::Error;

use crate::model::{CylinderGraph, VertexKind};
use crate::rational::PosRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StretchError {
    #[error("edges {0:?} and {1:?} lie on different cylinders")]
    DifferentCylinders(String, String),
    #[error("edge {0:?} has no length")]
    MissingLength(String),
    #[error("vertex {0:?} is not a rigid endpoint of edge {1:?}")]
    NotRigidEndpoint(String, String),
}

/// `k(e0)/k(e1)`.
pub fn modulus(g: &CylinderGraph, e0: usize, e1: usize) -> Result<PosRational, StretchError> {
    let (a, b) = (&g.edges[e0], &g.edges[e1]);
    if a.cyl != b.cyl {
        return Err(StretchError::DifferentCylinders(a.id.clone(), b.id.clone()));
    }
    Ok(a.k / b.k)
}

/// Translation length of the cylinder's reference generator in the model
/// space of `e`'s rigid endpoint: `length(e)/k(e)`.
pub fn generator_length(g: &CylinderGraph, e: usize) -> Result<PosRational, StretchError> {
    let ed = &g.edges[e];
    let len = ed.length.ok_or_else(|| StretchError::MissingLength(ed.id.clone()))?;
    Ok(len / ed.k)
}

pub fn relative_stretch(
    g: &CylinderGraph,
    (v0, e0): (usize, usize),
    (v1, e1): (usize, usize),
) -> Result<PosRational, StretchError> {
    for (v, e) in [(v0, e0), (v1, e1)] {
        if g.edges[e].ne != v || g.vertices[v].kind != VertexKind::Rigid {
            return Err(StretchError::NotRigidEndpoint(g.vertices[v].id.clone(), g.edges[e].id.clone()));
        }
    }
    let d = modulus(g, e0, e1)?;
    let len = |e: usize| g.edges[e].length.ok_or_else(|| StretchError::MissingLength(g.edges[e].id.clone()));
    Ok(len(e1)? / len(e0)? * d)
}

fn rigid_edges_at(g: &CylinderGraph, c: usize) -> Vec<usize> {
    g.incident(c)
        .iter()
        .copied()
        .filter(|&e| g.vertices[g.edges[e].ne].kind == VertexKind::Rigid)
        .collect()
}

/// `rs(e)` for every rigid-incident edge at cylinder `c`, in edge order.
pub fn normalize_cylinder(g: &CylinderGraph, c: usize) -> Result<Vec<(usize, PosRational)>, StretchError> {
    let ls = rigid_edges_at(g, c)
        .into_iter()
        .map(|e| generator_length(g, e).map(|l| (e, l)))
        .collect::<Result<Vec<_>, _>>()?;
    let Some(min) = ls.iter().map(|(_, l)| *l).min() else {
        return Ok(Vec::new());
    };
    Ok(ls.into_iter().map(|(e, l)| (e, l / min)).collect())
}

/// Per-edge label: `Some(rs)` on rigid-incident edges, `None` elsewhere.
pub fn stretch_decoration(g: &CylinderGraph) -> Result<Vec<Option<PosRational>>, StretchError> {
    let mut out = vec![None; g.edges.len()];
    for c in g.cylinders() {
        for (e, rs) in normalize_cylinder(g, c)? {
            out[e] = Some(rs);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StretchRow {
    pub cylinder: String,
    pub edge: String,
    pub rs: PosRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StretchTable {
    pub rows: Vec<StretchRow>,
}

pub fn stretch_table(g: &CylinderGraph) -> Result<StretchTable, StretchError> {
    let mut rows = Vec::new();
    for c in g.cylinders() {
        for (e, rs) in normalize_cylinder(g, c)? {
            rows.push(StretchRow { cylinder: g.vertices[c].id.clone(), edge: g.edges[e].id.clone(), rs });
        }
    }
    Ok(StretchTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_input;

    fn two_edge(k0: &str, k1: &str) -> CylinderGraph {
        parse_input(&format!(
            r#"{{"name":"m","vertices":[{{"id":"c","kind":"cylindrical"}},{{"id":"r","kind":"rigid"}},{{"id":"s","kind":"rigid"}}],
            "edges":[{{"id":"a","cyl":"c","ne":"r","mult_at_cyl":1,"mult_at_ne":"inf","k":"{k0}","length":"3"}},
                     {{"id":"b","cyl":"c","ne":"s","mult_at_cyl":1,"mult_at_ne":"inf","k":"{k1}"}}]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn modulus_basics() {
        let g = two_edge("2", "3");
        assert_eq!(modulus(&g, 0, 1).unwrap(), PosRational::new(2, 3).unwrap());
        assert_eq!(modulus(&g, 0, 0).unwrap(), PosRational::ONE);
    }

    #[test]
    fn missing_length() {
        let g = two_edge("1", "1");
        assert_eq!(normalize_cylinder(&g, 0), Err(StretchError::MissingLength("b".into())));
        assert!(matches!(relative_stretch(&g, (1, 0), (2, 1)), Err(StretchError::MissingLength(_))));
    }
}
