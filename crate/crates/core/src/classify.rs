//! Joint refinement to simultaneous stability and the equivalence decision.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Cell, RefinementComplex};
use crate::decorate::{initial_decoration, Decoration, Mode};
use crate::exec::Exec;
use crate::extnat::ExtNat;
use crate::localsym::{vertex_refine, LocalSymError, MatchAnswer, MatchQuery, SymContext};
use crate::model::{CylinderGraph, ModelError, VertexKind};
use crate::orient::{cylinder_refine, imbalance, imbalance_xi, ImbalanceVector, PartialOrientation};
use crate::ornament::{OrnId, OrnamentUniverse};
use crate::refine::{class_count, neighbor_refine_fix, structure_invariant_on, RefineError, StructureInvariant};
use crate::stretch::StretchError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("mode data missing: {0}")]
    ModeDataMissing(#[from] StretchError),
    #[error(transparent)]
    LocalSym(#[from] LocalSymError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error("refinement did not stabilize within {0} rounds")]
    NoFixpoint(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Step {
    Neighbor,
    Cylinder,
    Vertex,
}

pub const DEFAULT_ORDER: [Step; 3] = [Step::Neighbor, Step::Cylinder, Step::Vertex];

/// All six round orders.
pub fn all_orders() -> Vec<[Step; 3]> {
    use Step::*;
    vec![
        [Neighbor, Cylinder, Vertex],
        [Neighbor, Vertex, Cylinder],
        [Cylinder, Neighbor, Vertex],
        [Cylinder, Vertex, Neighbor],
        [Vertex, Neighbor, Cylinder],
        [Vertex, Cylinder, Neighbor],
    ]
}

#[derive(Clone, Debug)]
pub struct Part {
    pub name: String,
    pub vertices: std::ops::Range<usize>,
    pub edges: std::ops::Range<usize>,
}

/// One or more graphs refined together over a shared universe.
pub struct Workspace {
    pub graph: CylinderGraph,
    pub parts: Vec<Part>,
    pub part_of_vertex: Vec<usize>,
    pub mode: Mode,
    pub complex: RefinementComplex,
    pub universe: OrnamentUniverse,
    pub init: Decoration,
    pub d: Decoration,
    pub o: PartialOrientation,
    pub unknown: bool,
    pub warnings: Vec<String>,
    pub exec: Exec,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RefineReport {
    pub rounds: usize,
    pub neighbor_steps: usize,
    pub classes: usize,
}

impl Workspace {
    pub fn new(graphs: &[&CylinderGraph], mode: Mode, exec: Exec) -> Result<Self, ClassifyError> {
        let graph = CylinderGraph::disjoint_union(graphs)?;
        let mut parts = Vec::new();
        let mut part_of_vertex = Vec::new();
        let mut warnings = Vec::new();
        let (mut v0, mut e0) = (0, 0);
        for (i, g) in graphs.iter().enumerate() {
            let (v1, e1) = (v0 + g.vertices.len(), e0 + g.edges.len());
            parts.push(Part { name: g.name.clone(), vertices: v0..v1, edges: e0..e1 });
            part_of_vertex.extend(std::iter::repeat_n(i, g.vertices.len()));
            if g.is_trivial_jsj() {
                warnings.push(format!("{}: trivial JSJ decomposition, comparing by vertex ornament alone", g.name));
            }
            (v0, e0) = (v1, e1);
        }
        let mut universe = OrnamentUniverse::new();
        let init = initial_decoration(&graph, mode, &mut universe)?;
        let complex = RefinementComplex::subdivide(&graph);
        let o = PartialOrientation::trivial(&graph);
        Ok(Workspace {
            d: init.clone(),
            graph,
            parts,
            part_of_vertex,
            mode,
            complex,
            universe,
            init,
            o,
            unknown: false,
            warnings,
            exec,
        })
    }

    pub fn solo(g: &CylinderGraph, mode: Mode, exec: Exec) -> Result<Self, ClassifyError> {
        Self::new(&[g], mode, exec)
    }

    pub fn nv(&self) -> usize {
        self.graph.vertices.len()
    }

    pub fn cells_of(&self, p: usize) -> Vec<usize> {
        let part = &self.parts[p];
        let nv = self.nv();
        part.vertices.clone().chain(part.edges.clone().map(|e| nv + e)).collect()
    }

    pub fn full_refine(&mut self) -> Result<RefineReport, ClassifyError> {
        self.full_refine_with(DEFAULT_ORDER)
    }

    /// Rounds of the given steps until a round changes neither the
    /// partition nor the orientation. The state before that round is kept.
    /// Modes without orientation data run neighbor refinement alone.
    pub fn full_refine_with(&mut self, order: [Step; 3]) -> Result<RefineReport, ClassifyError> {
        let mut report = RefineReport::default();
        if !self.mode.uses_orientation() {
            let (d, steps) = neighbor_refine_fix(&self.complex, &self.d, &mut self.universe, self.exec);
            self.d = d;
            report.rounds = 1;
            report.neighbor_steps = steps;
            report.classes = class_count(&self.d);
            return Ok(report);
        }
        let bound = self.complex.len() + self.graph.edges.len() + 2;
        loop {
            if report.rounds > bound {
                return Err(ClassifyError::NoFixpoint(bound));
            }
            report.rounds += 1;
            let (pd, po) = (self.d.clone(), self.o.clone());
            for step in order {
                match step {
                    Step::Neighbor => {
                        let (d, steps) = neighbor_refine_fix(&self.complex, &self.d, &mut self.universe, self.exec);
                        self.d = d;
                        report.neighbor_steps += steps;
                    }
                    Step::Cylinder => {
                        let (d, o, _) = cylinder_refine(&self.graph, &self.d, &self.o, &mut self.universe);
                        self.d = d;
                        self.o = o;
                    }
                    Step::Vertex => {
                        let out = vertex_refine(
                            &self.graph,
                            &self.d,
                            &self.o,
                            &mut self.universe,
                            Some(&self.part_of_vertex),
                            self.exec,
                        )?;
                        self.d = out.d;
                        self.o = out.o;
                        self.unknown |= out.unknown;
                    }
                }
            }
            if class_count(&self.d) == class_count(&pd) && self.o == po {
                self.d = pd;
                self.o = po;
                break;
            }
        }
        report.classes = class_count(&self.d);
        Ok(report)
    }

    pub fn invariant(&self, p: usize) -> Result<StructureInvariant, ClassifyError> {
        Ok(structure_invariant_on(&self.complex, &self.d, &self.cells_of(p), &self.universe)?)
    }

    pub fn image(&self, p: usize) -> BTreeSet<OrnId> {
        self.cells_of(p).into_iter().map(|t| self.d[t]).collect()
    }

    pub fn context(&self) -> SymContext<'_> {
        SymContext { g: &self.graph, d: &self.d, o: &self.o, u: &self.universe }
    }

    pub fn cell_name(&self, t: usize) -> String {
        match self.complex.cells[t] {
            Cell::Vertex(v) => self.graph.vertices[v].id.clone(),
            Cell::Edge(e) => self.graph.edges[e].id.clone(),
        }
    }

    /// Stable classes in ornament order, each with its member cells.
    pub fn classes(&self) -> Vec<(OrnId, Vec<usize>)> {
        let mut by: BTreeMap<OrnId, Vec<usize>> = BTreeMap::new();
        for (t, o) in self.d.iter().enumerate() {
            by.entry(*o).or_default().push(t);
        }
        let mut out: Vec<_> = by.into_iter().collect();
        out.sort_by(|a, b| self.universe.cmp(a.0, b.0));
        out
    }

    /// Canonical imbalance for every cylinder class, in class order.
    pub fn imbalances(&self) -> Vec<(OrnId, Vec<usize>, ImbalanceVector)> {
        self.classes()
            .into_iter()
            .filter(|(_, cells)| {
                matches!(self.complex.cells[cells[0]], Cell::Vertex(v) if self.graph.vertices[v].kind == VertexKind::Cylindrical)
            })
            .map(|(orn, cells)| {
                let v = cells[0];
                (orn, cells, imbalance(&self.graph, &self.d, &self.o, v, &self.universe))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// Stable ornaments of the two inputs differ.
    A,
    /// Structure invariants differ.
    B,
    /// Local symmetries cannot realize a vertex class.
    C,
    /// Imbalances differ under every sign choice.
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMatch {
    pub class: usize,
    pub base: Vec<String>,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub beta: Vec<ClassMatch>,
    /// Class index of every orientation-carrying edge class and its sign.
    pub xi: Vec<(usize, i8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equivalent(Witness),
    Distinct { condition: Condition, reason: String },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Equivalent(_) => 0,
            Verdict::Distinct { .. } => 1,
            Verdict::Inconclusive { .. } => 2,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompareOptions {
    pub max_xi: usize,
    pub exec: Exec,
    pub order: [Step; 3],
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { max_xi: 20, exec: Exec::default(), order: DEFAULT_ORDER }
    }
}

enum XiCheck {
    Pass,
    Fail(Condition, String),
    Unknown(String),
}

fn distinct(condition: Condition, reason: impl Into<String>) -> Verdict {
    Verdict::Distinct { condition, reason: reason.into() }
}

/// Decides equivalence of two inputs under `mode`.
pub fn compare(a: &CylinderGraph, b: &CylinderGraph, mode: Mode, opts: CompareOptions) -> Result<Verdict, ClassifyError> {
    let mut ws = Workspace::new(&[a, b], mode, opts.exec)?;
    if a.is_trivial_jsj() || b.is_trivial_jsj() {
        let img = |p: usize| ws.cells_of(p).into_iter().map(|t| ws.init[t]).collect::<BTreeSet<_>>();
        return Ok(if img(0) == img(1) && a.is_trivial_jsj() == b.is_trivial_jsj() {
            Verdict::Equivalent(Witness { beta: Vec::new(), xi: Vec::new() })
        } else {
            distinct(Condition::A, "vertex ornaments differ")
        });
    }

    // Neighbor refinement alone never depends on oracles, so a difference
    // here is decisive even when oracles are incomparable.
    {
        let mut u = ws.universe.clone();
        let (nd, _) = neighbor_refine_fix(&ws.complex, &ws.init, &mut u, opts.exec);
        let img = |p: usize| ws.cells_of(p).into_iter().map(|t| nd[t]).collect::<BTreeSet<_>>();
        if img(0) != img(1) {
            return Ok(distinct(Condition::A, "stable ornaments differ after neighbor refinement"));
        }
        let inv = |p: usize| structure_invariant_on(&ws.complex, &nd, &ws.cells_of(p), &u);
        if inv(0)? != inv(1)? {
            return Ok(distinct(Condition::B, "structure invariants differ after neighbor refinement"));
        }
    }

    ws.full_refine_with(opts.order)?;
    if ws.unknown {
        return Ok(Verdict::Inconclusive { reason: "vertices of one class carry incomparable oracles".into() });
    }
    if ws.image(0) != ws.image(1) {
        return Ok(distinct(Condition::A, "stable ornaments of the two inputs differ"));
    }
    if ws.invariant(0)? != ws.invariant(1)? {
        return Ok(distinct(Condition::B, "structure invariants differ"));
    }

    let nv = ws.nv();
    let g = &ws.graph;
    let classes = ws.classes();
    if !mode.uses_orientation() {
        return Ok(Verdict::Equivalent(Witness { beta: beta(&ws, &classes), xi: Vec::new() }));
    }
    let class_index: HashMap<OrnId, usize> = classes.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    let mut oriented: Vec<OrnId> = (0..g.edges.len())
        .filter(|&e| ws.o.line[e] != 0)
        .map(|e| ws.d[nv + e])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ws.universe.sort(&mut oriented);
    if oriented.len() > opts.max_xi {
        return Ok(Verdict::Inconclusive {
            reason: format!("{} orientation classes exceed the sign search limit {}", oriented.len(), opts.max_xi),
        });
    }

    // One representative per vertex class on each side.
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for (_, cells) in &classes {
        let left = cells.iter().copied().find(|&t| t < nv && ws.part_of_vertex[t] == 0);
        let right = cells.iter().copied().find(|&t| t < nv && ws.part_of_vertex[t] == 1);
        if let (Some(l), Some(r)) = (left, right) {
            reps.push((l, r));
        }
    }

    let cx = ws.context();
    let check = |mask: usize| -> XiCheck {
        let xi: HashMap<OrnId, i8> =
            oriented.iter().enumerate().map(|(i, o)| (*o, if mask >> i & 1 == 1 { -1 } else { 1 })).collect();
        for &(l, r) in &reps {
            if g.vertices[l].kind == VertexKind::Cylindrical {
                let a = imbalance_xi(g, &ws.d, &ws.o, l, &ws.universe, &xi);
                let b = imbalance(g, &ws.d, &ws.o, r, &ws.universe);
                if a != b {
                    return XiCheck::Fail(Condition::D, format!("imbalance differs at cylinder class of {:?}", g.vertices[l].id));
                }
            }
        }
        for &(l, r) in &reps {
            if g.vertices[l].kind != VertexKind::Cylindrical {
                match cx.query_match(&MatchQuery::vertices(l, r), Some(&xi)) {
                    Ok(MatchAnswer::Yes) => {}
                    Ok(MatchAnswer::No) => {
                        return XiCheck::Fail(Condition::C, format!("no local symmetry realizes class of {:?}", g.vertices[l].id))
                    }
                    Ok(MatchAnswer::Unknown) => return XiCheck::Unknown(format!("oracles differ at {:?}", g.vertices[l].id)),
                    Err(e) => return XiCheck::Unknown(e.to_string()),
                }
            }
        }
        XiCheck::Pass
    };

    let total = 1usize << oriented.len();
    let found = opts.exec.find_first(total, |m| !matches!(check(m), XiCheck::Fail(..)));
    match found.map(|m| (m, check(m))) {
        Some((mask, XiCheck::Pass)) => {
            let beta = beta(&ws, &classes);
            let xi = oriented
                .iter()
                .enumerate()
                .map(|(i, o)| (class_index[o], if mask >> i & 1 == 1 { -1 } else { 1 }))
                .collect();
            Ok(Verdict::Equivalent(Witness { beta, xi }))
        }
        Some((_, XiCheck::Unknown(reason))) => Ok(Verdict::Inconclusive { reason }),
        _ => match check(0) {
            XiCheck::Fail(c, reason) => Ok(distinct(c, reason)),
            _ => unreachable!("sign choice 0 failed"),
        },
    }
}

/// Class-by-class correspondence: stable ornaments are shared, so each
/// class is matched with itself.
fn beta(ws: &Workspace, classes: &[(OrnId, Vec<usize>)]) -> Vec<ClassMatch> {
    classes
        .iter()
        .enumerate()
        .map(|(i, (orn, cells))| {
            let side = |p: usize| -> Vec<String> {
                cells.iter().copied().filter(|&t| cell_part(ws, t) == p).map(|t| ws.cell_name(t)).collect()
            };
            ClassMatch { class: i, base: ws.universe.base_tags(*orn).to_vec(), left: side(0), right: side(1) }
        })
        .collect()
}

fn cell_part(ws: &Workspace, t: usize) -> usize {
    match ws.complex.cells[t] {
        Cell::Vertex(v) => ws.part_of_vertex[v],
        Cell::Edge(e) => ws.part_of_vertex[ws.graph.edges[e].cyl],
    }
}

/// One stable class with its members and neighbor counts by class index.
#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub index: usize,
    pub base: Vec<String>,
    pub members: Vec<String>,
    pub counts: Vec<(usize, ExtNat)>,
}

pub fn orbits(g: &CylinderGraph, mode: Mode, exec: Exec) -> Result<(Workspace, Vec<ClassInfo>), ClassifyError> {
    let mut ws = Workspace::solo(g, mode, exec)?;
    ws.full_refine()?;
    let info = class_infos(&ws);
    Ok((ws, info))
}

pub fn class_infos(ws: &Workspace) -> Vec<ClassInfo> {
    let classes = ws.classes();
    let index: HashMap<OrnId, usize> = classes.iter().enumerate().map(|(i, (o, _))| (*o, i)).collect();
    classes
        .iter()
        .enumerate()
        .map(|(i, (orn, cells))| {
            let mut counts: BTreeMap<usize, ExtNat> = BTreeMap::new();
            for &(n, c) in ws.complex.neighbors(cells[0]) {
                *counts.entry(index[&ws.d[n]]).or_insert(ExtNat::ZERO) += c;
            }
            ClassInfo {
                index: i,
                base: ws.universe.base_tags(*orn).to_vec(),
                members: cells.iter().map(|&t| ws.cell_name(t)).collect(),
                counts: counts.into_iter().collect(),
            }
        })
        .collect()
}
