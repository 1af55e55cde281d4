//! Input model: the finite quotient graph of a tree of cylinders.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extnat::ExtNat;
use crate::localsym::{OracleKind, OracleSpec, SignedPerm};
use crate::rational::PosRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("edge {0:?} does not join a cylindrical vertex to a non-elementary one")]
    Bipartite(String),
    #[error("edge {0:?} has infinite multiplicity at its cylinder")]
    InfiniteCylinderValence(String),
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("oracle {0:?} is defined differently in the two inputs")]
    OracleConflict(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Cylindrical,
    Rigid,
    Hanging,
}

impl VertexKind {
    pub fn tag(self) -> &'static str {
        match self {
            VertexKind::Cylindrical => "cylindrical",
            VertexKind::Rigid => "rigid",
            VertexKind::Hanging => "hanging",
        }
    }
}

/// A vertex's oracle and, for slotted oracles, which incident edge each
/// slot belongs to (slot index → edge index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub oracle: usize,
    pub slots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
    pub qi_type: Option<String>,
    pub rel_qi_type: Option<String>,
    pub dihedral: bool,
    pub binding: Option<Binding>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub cyl: usize,
    pub ne: usize,
    pub mult_at_cyl: u64,
    pub mult_at_ne: ExtNat,
    /// Attaching sign; `None` means no input orientation data.
    pub sign: Option<i8>,
    pub k: PosRational,
    pub length: Option<PosRational>,
    pub reversible: bool,
}

impl Edge {
    /// The attaching sign used in arithmetic; missing data counts as +1.
    pub fn alpha(&self) -> i8 {
        self.sign.unwrap_or(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderGraph {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub oracles: Vec<OracleSpec>,
    incident: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    name: String,
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<RawEdge>,
    #[serde(default)]
    oracles: Vec<RawOracle>,
}

#[derive(Serialize, Deserialize)]
struct RawVertex {
    id: String,
    kind: VertexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qi_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rel_qi_type: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dihedral: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    id: String,
    cyl: String,
    ne: String,
    mult_at_cyl: ExtNat,
    mult_at_ne: ExtNat,
    #[serde(default)]
    sign: Option<i8>,
    k: PosRational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<PosRational>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    reversible: bool,
}

#[derive(Serialize, Deserialize)]
struct RawOracle {
    id: String,
    #[serde(rename = "type")]
    kind: OracleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<SignedPerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slot_edge: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

fn schema(msg: impl Into<String>) -> ModelError {
    ModelError::Schema(msg.into())
}

pub fn parse_input(document: &str) -> Result<CylinderGraph, ModelError> {
    let raw: RawGraph = serde_json::from_str(document).map_err(|e| schema(e.to_string()))?;
    CylinderGraph::from_raw(raw)
}

impl CylinderGraph {
    fn from_raw(raw: RawGraph) -> Result<Self, ModelError> {
        if raw.vertices.is_empty() {
            return Err(schema("vertex list is empty"));
        }
        let mut vindex: HashMap<&str, usize> = HashMap::new();
        for (i, v) in raw.vertices.iter().enumerate() {
            if vindex.insert(v.id.as_str(), i).is_some() {
                return Err(schema(format!("duplicate vertex id {:?}", v.id)));
            }
            if v.dihedral && v.kind != VertexKind::Cylindrical {
                return Err(schema(format!("vertex {:?}: dihedral on a non-cylindrical vertex", v.id)));
            }
            if v.oracle.is_some() && v.kind == VertexKind::Cylindrical {
                return Err(schema(format!("vertex {:?}: oracle on a cylindrical vertex", v.id)));
            }
        }

        let mut eids = HashSet::new();
        let mut edges = Vec::with_capacity(raw.edges.len());
        for e in &raw.edges {
            if !eids.insert(e.id.as_str()) {
                return Err(schema(format!("duplicate edge id {:?}", e.id)));
            }
            let lookup = |id: &str| {
                vindex
                    .get(id)
                    .copied()
                    .ok_or_else(|| ModelError::DanglingReference(format!("edge {:?} refers to vertex {id:?}", e.id)))
            };
            let (cyl, ne) = (lookup(&e.cyl)?, lookup(&e.ne)?);
            if raw.vertices[cyl].kind != VertexKind::Cylindrical || raw.vertices[ne].kind == VertexKind::Cylindrical {
                return Err(ModelError::Bipartite(e.id.clone()));
            }
            let mult_at_cyl = match e.mult_at_cyl {
                ExtNat::Inf => return Err(ModelError::InfiniteCylinderValence(e.id.clone())),
                ExtNat::Fin(0) => return Err(schema(format!("edge {:?}: mult_at_cyl must be positive", e.id))),
                ExtNat::Fin(n) => n,
            };
            if e.mult_at_ne.is_zero() {
                return Err(schema(format!("edge {:?}: mult_at_ne must be positive", e.id)));
            }
            if let Some(s) = e.sign {
                if s != 1 && s != -1 {
                    return Err(schema(format!("edge {:?}: sign must be 1, -1 or null", e.id)));
                }
            }
            edges.push(Edge {
                id: e.id.clone(),
                cyl,
                ne,
                mult_at_cyl,
                mult_at_ne: e.mult_at_ne,
                sign: e.sign,
                k: e.k,
                length: e.length,
                reversible: e.reversible,
            });
        }

        let mut incident = vec![Vec::new(); raw.vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.cyl].push(i);
            incident[e.ne].push(i);
        }
        let eindex: HashMap<&str, usize> = edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();

        let mut oracles = Vec::new();
        let mut oindex: HashMap<String, usize> = HashMap::new();
        let mut slot_maps: HashMap<usize, Vec<usize>> = HashMap::new();
        for o in &raw.oracles {
            if oindex.contains_key(&o.id) {
                return Err(schema(format!("duplicate oracle id {:?}", o.id)));
            }
            let spec = OracleSpec::new(&o.id, o.kind, o.slots, o.generators.clone().unwrap_or_default())
                .map_err(|e| schema(e.to_string()))?;
            for (vid, map) in o.slot_edge.iter().flatten() {
                let v = *vindex
                    .get(vid.as_str())
                    .ok_or_else(|| ModelError::DanglingReference(format!("oracle {:?} binds vertex {vid:?}", o.id)))?;
                if raw.vertices[v].oracle.as_deref() != Some(o.id.as_str()) {
                    return Err(schema(format!("oracle {:?} has slots for vertex {vid:?} not bound to it", o.id)));
                }
                let n = spec.slots.ok_or_else(|| schema(format!("oracle {:?}: slot_edge needs slots", o.id)))?;
                let mut slots = vec![usize::MAX; n];
                for (s, eid) in map {
                    let s: usize = s
                        .parse()
                        .ok()
                        .filter(|&s| s < n)
                        .ok_or_else(|| schema(format!("oracle {:?}: bad slot {s:?}", o.id)))?;
                    let e = *eindex
                        .get(eid.as_str())
                        .ok_or_else(|| ModelError::DanglingReference(format!("oracle {:?} slot edge {eid:?}", o.id)))?;
                    if edges[e].ne != v {
                        return Err(schema(format!("oracle {:?}: edge {eid:?} is not incident to {vid:?}", o.id)));
                    }
                    slots[s] = e;
                }
                if slots.contains(&usize::MAX) {
                    return Err(schema(format!("oracle {:?}: slot_edge for {vid:?} is not total", o.id)));
                }
                let hit: HashSet<usize> = slots.iter().copied().collect();
                if incident[v].iter().any(|e| !hit.contains(e)) {
                    return Err(schema(format!("oracle {:?}: slot_edge for {vid:?} misses an incident edge", o.id)));
                }
                slot_maps.insert(v, slots);
            }
            oindex.insert(o.id.clone(), oracles.len());
            oracles.push(spec);
        }

        let mut vertices = Vec::with_capacity(raw.vertices.len());
        for (i, v) in raw.vertices.into_iter().enumerate() {
            let binding = match &v.oracle {
                None => None,
                Some(oid) => {
                    let oracle = *oindex
                        .get(oid)
                        .ok_or_else(|| ModelError::DanglingReference(format!("vertex {:?} uses oracle {oid:?}", v.id)))?;
                    let slots = slot_maps.remove(&i).unwrap_or_default();
                    if oracles[oracle].kind == OracleKind::SignedPermGroup && slots.is_empty() {
                        return Err(schema(format!("vertex {:?}: signed_perm_group oracle needs slot_edge", v.id)));
                    }
                    Some(Binding { oracle, slots })
                }
            };
            vertices.push(Vertex {
                id: v.id,
                kind: v.kind,
                qi_type: v.qi_type,
                rel_qi_type: v.rel_qi_type,
                dihedral: v.dihedral,
                binding,
            });
        }

        let g = CylinderGraph { name: raw.name, vertices, edges, oracles, incident };
        if !g.is_connected() {
            return Err(ModelError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.incident[v] {
                let w = self.other_end(e, v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let ed = &self.edges[e];
        if ed.cyl == v {
            ed.ne
        } else {
            ed.cyl
        }
    }

    /// Lift count at `v`'s side of edge `e`.
    pub fn mult_at(&self, e: usize, v: usize) -> ExtNat {
        let ed = &self.edges[e];
        if ed.cyl == v {
            ExtNat::Fin(ed.mult_at_cyl)
        } else {
            ed.mult_at_ne
        }
    }

    pub fn is_trivial_jsj(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn cylinders(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.vertices[v].kind == VertexKind::Cylindrical)
    }

    /// Disjoint union sharing one oracle registry. Ids are kept as they are
    /// and may repeat across parts, so the result is for computation only.
    pub fn disjoint_union(parts: &[&CylinderGraph]) -> Result<CylinderGraph, ModelError> {
        let mut out = CylinderGraph {
            name: parts.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join("+"),
            vertices: Vec::new(),
            edges: Vec::new(),
            oracles: Vec::new(),
            incident: Vec::new(),
        };
        for g in parts {
            let (voff, eoff) = (out.vertices.len(), out.edges.len());
            let mut remap = Vec::with_capacity(g.oracles.len());
            for o in &g.oracles {
                match out.oracles.iter().position(|p| p.id == o.id) {
                    Some(i) if out.oracles[i] == *o => remap.push(i),
                    Some(_) => return Err(ModelError::OracleConflict(o.id.clone())),
                    None => {
                        remap.push(out.oracles.len());
                        out.oracles.push(o.clone());
                    }
                }
            }
            for v in &g.vertices {
                let mut v = v.clone();
                if let Some(b) = &mut v.binding {
                    b.oracle = remap[b.oracle];
                    b.slots.iter_mut().for_each(|e| *e += eoff);
                }
                out.vertices.push(v);
            }
            for e in &g.edges {
                let mut e = e.clone();
                e.cyl += voff;
                e.ne += voff;
                out.edges.push(e);
            }
            out.incident
                .extend(g.incident.iter().map(|es| es.iter().map(|e| e + eoff).collect()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices = self
            .vertices
            .iter()
            .map(|v| RawVertex {
                id: v.id.clone(),
                kind: v.kind,
                qi_type: v.qi_type.clone(),
                rel_qi_type: v.rel_qi_type.clone(),
                dihedral: v.dihedral,
                oracle: v.binding.as_ref().map(|b| self.oracles[b.oracle].id.clone()),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| RawEdge {
                id: e.id.clone(),
                cyl: self.vertices[e.cyl].id.clone(),
                ne: self.vertices[e.ne].id.clone(),
                mult_at_cyl: ExtNat::Fin(e.mult_at_cyl),
                mult_at_ne: e.mult_at_ne,
                sign: e.sign,
                k: e.k,
                length: e.length,
                reversible: e.reversible,
            })
            .collect();
        let oracles = self
            .oracles
            .iter()
            .enumerate()
            .map(|(oi, o)| {
                let mut slot_edge = BTreeMap::new();
                for v in &self.vertices {
                    if let Some(b) = v.binding.as_ref().filter(|b| b.oracle == oi && !b.slots.is_empty()) {
                        let map = b
                            .slots
                            .iter()
                            .enumerate()
                            .map(|(s, e)| (s.to_string(), self.edges[*e].id.clone()))
                            .collect();
                        slot_edge.insert(v.id.clone(), map);
                    }
                }
                RawOracle {
                    id: o.id.clone(),
                    kind: o.kind,
                    slots: o.slots,
                    generators: (!o.generators.is_empty()).then(|| o.generators.clone()),
                    slot_edge: (!slot_edge.is_empty()).then_some(slot_edge),
                }
            })
            .collect();
        serde_json::to_value(RawGraph { name: self.name.clone(), vertices, edges, oracles })
            .expect("graph serializes")
    }
}
