//! Partial orientations, orientation imbalance and cylinder refinement.

use std::collections::{BTreeMap, HashMap};

use crate::decorate::Decoration;
use crate::model::CylinderGraph;
use crate::ornament::{OrnId, OrnamentUniverse, Sign};

/// Orientation state.
///
/// `line[e]` orients the peripheral line of edge `e` against the cylinder's
/// input reference generator (0 = unoriented). A cylinder, once oriented,
/// records in `flip` whether its chosen orientation agrees with the input
/// reference. The sign of an edge is `flip * alpha * line`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialOrientation {
    pub oriented: Vec<bool>,
    pub flip: Vec<i8>,
    pub line: Vec<i8>,
}

impl PartialOrientation {
    pub fn trivial(g: &CylinderGraph) -> Self {
        PartialOrientation {
            oriented: vec![false; g.vertices.len()],
            flip: vec![1; g.vertices.len()],
            line: vec![0; g.edges.len()],
        }
    }

    /// Sign of `e` against its cylinder's current orientation; 0 when
    /// either is unoriented.
    pub fn edge_sign(&self, g: &CylinderGraph, e: usize) -> i8 {
        let c = g.edges[e].cyl;
        if !self.oriented[c] {
            return 0;
        }
        self.flip[c] * g.edges[e].alpha() * self.line[e]
    }
}

/// An element of Z^Ω up to global sign, stored with its first nonzero
/// entry positive. Zero entries are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImbalanceVector {
    pub entries: Vec<(OrnId, i64)>,
}

impl ImbalanceVector {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Imbalance against the cylinder's input reference, ξ applied to lines,
/// sorted by ornament order, zero entries dropped.
fn raw_imbalance(
    g: &CylinderGraph,
    d: &[OrnId],
    o: &PartialOrientation,
    c: usize,
    u: &OrnamentUniverse,
    xi: Option<&HashMap<OrnId, i8>>,
) -> Vec<(OrnId, i64)> {
    if g.vertices[c].dihedral {
        return Vec::new();
    }
    let nv = g.vertices.len();
    let mut acc: BTreeMap<OrnId, i64> = BTreeMap::new();
    for &e in g.incident(c) {
        let orn = d[nv + e];
        let x = xi.and_then(|m| m.get(&orn)).copied().unwrap_or(1);
        let s = g.edges[e].alpha() as i64 * o.line[e] as i64 * x as i64;
        *acc.entry(orn).or_default() += g.edges[e].mult_at_cyl as i64 * s;
    }
    let mut v: Vec<_> = acc.into_iter().filter(|(_, n)| *n != 0).collect();
    v.sort_by(|a, b| u.cmp(a.0, b.0));
    v
}

fn canonical(mut v: Vec<(OrnId, i64)>) -> ImbalanceVector {
    if v.first().is_some_and(|(_, n)| *n < 0) {
        v.iter_mut().for_each(|(_, n)| *n = -*n);
    }
    ImbalanceVector { entries: v }
}

pub fn imbalance(g: &CylinderGraph, d: &[OrnId], o: &PartialOrientation, c: usize, u: &OrnamentUniverse) -> ImbalanceVector {
    canonical(raw_imbalance(g, d, o, c, u, None))
}

/// Imbalance as seen under `xi` acting on edge-line classes.
pub fn imbalance_xi(
    g: &CylinderGraph,
    d: &[OrnId],
    o: &PartialOrientation,
    c: usize,
    u: &OrnamentUniverse,
    xi: &HashMap<OrnId, i8>,
) -> ImbalanceVector {
    canonical(raw_imbalance(g, d, o, c, u, Some(xi)))
}

/// Orients every unoriented, unbalanced, non-dihedral cylinder so that its
/// imbalance is in canonical form, orients the unoriented lines at those
/// cylinders to sign +1, and wraps ornaments with orientation status and
/// sign. Returns whether the orientation changed.
pub fn cylinder_refine(
    g: &CylinderGraph,
    d: &[OrnId],
    o: &PartialOrientation,
    u: &mut OrnamentUniverse,
) -> (Decoration, PartialOrientation, bool) {
    let mut o2 = o.clone();
    for c in g.cylinders() {
        if o.oriented[c] || g.vertices[c].dihedral {
            continue;
        }
        let raw = raw_imbalance(g, d, o, c, u, None);
        let Some(&(_, first)) = raw.first() else { continue };
        o2.oriented[c] = true;
        o2.flip[c] = first.signum() as i8;
        for &e in g.incident(c) {
            if o2.line[e] == 0 {
                o2.line[e] = o2.flip[c] * g.edges[e].alpha();
            }
        }
    }
    let nv = g.vertices.len();
    let mut d2 = Vec::with_capacity(d.len());
    for &orn in &d[..nv] {
        d2.push(u.signed(orn, Sign::Zero));
    }
    for e in 0..g.edges.len() {
        let status = if o2.line[e] != 0 { Sign::Pos } else { Sign::Zero };
        let inner = u.signed(d[nv + e], status);
        d2.push(u.signed(inner, Sign::from_i8(o2.edge_sign(g, e))));
    }
    let changed = o2 != *o;
    (d2, o2, changed)
}

/// Negates every oriented line and cylinder whose ornament has `xi = -1`.
pub fn xi_apply(g: &CylinderGraph, d: &[OrnId], o: &PartialOrientation, xi: &HashMap<OrnId, i8>) -> PartialOrientation {
    let nv = g.vertices.len();
    let neg = |orn: OrnId| xi.get(&orn) == Some(&-1);
    let mut out = o.clone();
    for c in g.cylinders() {
        if o.oriented[c] && neg(d[c]) {
            out.flip[c] = -out.flip[c];
        }
    }
    for e in 0..g.edges.len() {
        if neg(d[nv + e]) {
            out.line[e] = -out.line[e];
        }
    }
    out
}
