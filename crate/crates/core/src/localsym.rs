//! Local symmetry oracles and vertex refinement.
//!
//! A slotted oracle models the peripheral lines at a vertex as `n` slots,
//! each owned by one incident edge, acted on by a group of signed
//! permutations. A configuration labels every slot with the ornament and
//! line orientation of its edge. Two configurations match when they lie in
//! one orbit.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decorate::Decoration;
use crate::exec::Exec;
use crate::extnat::ExtNat;
use crate::model::{CylinderGraph, VertexKind};
use crate::orient::PartialOrientation;
use crate::ornament::{OrnId, OrnamentUniverse, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalSymError {
    #[error("ill-posed query: {0}")]
    IllPosedQuery(String),
    #[error("vertex {0:?} has no oracle")]
    OracleMissing(String),
    #[error("invalid oracle {0:?}: {1}")]
    InvalidOracle(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Flexible,
    Trivial,
    SignedPermGroup,
}

/// Slot `i` goes to `perm[i]`, with its orientation multiplied by
/// `signs[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { perm: (0..n).collect(), signs: vec![1; n] }
    }

    /// `self` after `first`.
    pub fn after(&self, first: &SignedPerm) -> SignedPerm {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = first.perm[i];
            perm[i] = self.perm[j];
            signs[i] = first.signs[i] * self.signs[j];
        }
        SignedPerm { perm, signs }
    }

    fn validate(&self, n: usize) -> Result<(), String> {
        if self.perm.len() != n || self.signs.len() != n {
            return Err(format!("generator has length {} but there are {n} slots", self.perm.len()));
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(format!("{:?} is not a permutation", self.perm));
            }
        }
        if self.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err("signs must be 1 or -1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    pub id: String,
    pub kind: OracleKind,
    pub slots: Option<usize>,
    pub generators: Vec<SignedPerm>,
}

impl OracleSpec {
    pub fn new(id: &str, kind: OracleKind, slots: Option<usize>, generators: Vec<SignedPerm>) -> Result<Self, LocalSymError> {
        let bad = |m: String| LocalSymError::InvalidOracle(id.to_string(), m);
        match kind {
            OracleKind::SignedPermGroup => {
                let n = slots.filter(|&n| n > 0).ok_or_else(|| bad("needs a positive slot count".into()))?;
                for g in &generators {
                    g.validate(n).map_err(bad)?;
                }
            }
            _ if !generators.is_empty() => return Err(bad("only signed_perm_group takes generators".into())),
            _ => {}
        }
        Ok(OracleSpec { id: id.to_string(), kind, slots, generators })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatchAnswer {
    Yes,
    No,
    Unknown,
}

/// Read-only view of the refinement state.
#[derive(Clone, Copy)]
pub struct SymContext<'a> {
    pub g: &'a CylinderGraph,
    pub d: &'a [OrnId],
    pub o: &'a PartialOrientation,
    pub u: &'a OrnamentUniverse,
}

#[derive(Clone, Debug)]
pub struct MatchQuery {
    pub source: usize,
    pub source_edge: Option<usize>,
    pub reversal: bool,
    pub target: usize,
    pub target_edge: Option<usize>,
}

impl MatchQuery {
    pub fn vertices(v: usize, w: usize) -> Self {
        MatchQuery { source: v, source_edge: None, reversal: false, target: w, target_edge: None }
    }

    pub fn edges(v: usize, e: usize, w: usize, f: usize) -> Self {
        MatchQuery { source: v, source_edge: Some(e), reversal: false, target: w, target_edge: Some(f) }
    }
}

type Label = (OrnId, i8);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    labels: Vec<Label>,
    mark: Option<(usize, i8)>,
}

impl State {
    fn act(&self, g: &SignedPerm) -> State {
        let mut labels = self.labels.clone();
        for (i, &(orn, line)) in self.labels.iter().enumerate() {
            labels[g.perm[i]] = (orn, g.signs[i] * line);
        }
        let mark = self.mark.map(|(m, s)| (g.perm[m], g.signs[m] * s));
        State { labels, mark }
    }
}

fn orbit(gens: &[SignedPerm], start: State) -> Vec<State> {
    let mut seen: HashSet<State> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut out = Vec::new();
    while let Some(s) = queue.pop_front() {
        for g in gens {
            let t = s.act(g);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
        out.push(s);
    }
    out
}

fn cmp_labels(u: &OrnamentUniverse, a: &[Label], b: &[Label]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = u.cmp(x.0, y.0).then(x.1.cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn cmp_marked(u: &OrnamentUniverse, a: &(Vec<Label>, usize), b: &(Vec<Label>, usize)) -> Ordering {
    cmp_labels(u, &a.0, &b.0).then(a.1.cmp(&b.1))
}

/// Canonical data describing a vertex or edge class, before interning.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Canon {
    Slots { oracle: usize, labels: Vec<Label> },
    Marked { oracle: usize, orbits: Vec<(Vec<Label>, usize)> },
    Flexible { oracle: usize, counts: Vec<((OrnId, bool), ExtNat)> },
    FlexMarked { oracle: usize, counts: Vec<((OrnId, bool), ExtNat)>, mark: (OrnId, bool) },
    Unique { oracle: usize, what: &'static str, index: usize },
    Cylinder,
}

impl<'a> SymContext<'a> {
    fn nv(&self) -> usize {
        self.g.vertices.len()
    }

    fn label(&self, e: usize, xi: Option<&HashMap<OrnId, i8>>) -> Label {
        let orn = self.d[self.nv() + e];
        let x = xi.and_then(|m| m.get(&orn)).copied().unwrap_or(1);
        (orn, self.o.line[e] * x)
    }

    fn oracle_of(&self, v: usize) -> Result<(usize, &'a OracleSpec), LocalSymError> {
        let b = self.g.vertices[v]
            .binding
            .as_ref()
            .ok_or_else(|| LocalSymError::OracleMissing(self.g.vertices[v].id.clone()))?;
        Ok((b.oracle, &self.g.oracles[b.oracle]))
    }

    /// Slot map if the vertex is bound to a slotted oracle.
    fn slots(&self, v: usize) -> Option<&'a [usize]> {
        let b = self.g.vertices[v].binding.as_ref()?;
        (!b.slots.is_empty()).then_some(b.slots.as_slice())
    }

    fn generators(&self, v: usize) -> &'a [SignedPerm] {
        let (_, spec) = self.oracle_of(v).expect("bound");
        match spec.kind {
            OracleKind::SignedPermGroup => &spec.generators,
            _ => &[],
        }
    }

    fn config(&self, v: usize, xi: Option<&HashMap<OrnId, i8>>) -> Vec<Label> {
        self.slots(v).expect("slotted").iter().map(|&e| self.label(e, xi)).collect()
    }

    fn slot_set(&self, v: usize, e: usize) -> Vec<usize> {
        let slots = self.slots(v).expect("slotted");
        (0..slots.len()).filter(|&s| slots[s] == e).collect()
    }

    fn flexible_counts(&self, v: usize, xi: Option<&HashMap<OrnId, i8>>) -> Vec<((OrnId, bool), ExtNat)> {
        let mut acc: BTreeMap<(OrnId, bool), ExtNat> = BTreeMap::new();
        for &e in self.g.incident(v) {
            let (orn, line) = self.label(e, xi);
            *acc.entry((orn, line != 0)).or_insert(ExtNat::ZERO) += self.g.edges[e].mult_at_ne;
        }
        let mut v: Vec<_> = acc.into_iter().collect();
        v.sort_by(|a, b| self.u.cmp(a.0 .0, b.0 .0).then(a.0 .1.cmp(&b.0 .1)));
        v
    }

    fn vertex_canon(&self, v: usize, xi: Option<&HashMap<OrnId, i8>>) -> Result<Canon, LocalSymError> {
        let (oi, spec) = self.oracle_of(v)?;
        Ok(match (spec.kind, self.slots(v)) {
            (OracleKind::Flexible, _) => Canon::Flexible { oracle: oi, counts: self.flexible_counts(v, xi) },
            (OracleKind::Trivial, None) => Canon::Unique { oracle: oi, what: "vertex", index: v },
            (_, Some(_)) => {
                let start = State { labels: self.config(v, xi), mark: None };
                let labels = orbit(self.generators(v), start)
                    .into_iter()
                    .map(|s| s.labels)
                    .min_by(|a, b| cmp_labels(self.u, a, b))
                    .expect("orbit is nonempty");
                Canon::Slots { oracle: oi, labels }
            }
            (OracleKind::SignedPermGroup, None) => unreachable!("validated"),
        })
    }

    fn edge_canon(&self, v: usize, e: usize, xi: Option<&HashMap<OrnId, i8>>) -> Result<Canon, LocalSymError> {
        let (oi, spec) = self.oracle_of(v)?;
        Ok(match (spec.kind, self.slots(v)) {
            (OracleKind::Flexible, _) => {
                let (orn, line) = self.label(e, xi);
                Canon::FlexMarked { oracle: oi, counts: self.flexible_counts(v, xi), mark: (orn, line != 0) }
            }
            (OracleKind::Trivial, None) => Canon::Unique { oracle: oi, what: "edge", index: e },
            (_, Some(_)) => {
                let labels = self.config(v, xi);
                let mut orbits: Vec<(Vec<Label>, usize)> = Vec::new();
                for s0 in self.slot_set(v, e) {
                    let start = State { labels: labels.clone(), mark: Some((s0, 1)) };
                    let m = orbit(self.generators(v), start)
                        .into_iter()
                        .map(|s| (s.labels, s.mark.expect("marked").0))
                        .min_by(|a, b| cmp_marked(self.u, a, b))
                        .expect("orbit is nonempty");
                    if !orbits.contains(&m) {
                        orbits.push(m);
                    }
                }
                orbits.sort_by(|a, b| cmp_marked(self.u, a, b));
                Canon::Marked { oracle: oi, orbits }
            }
            (OracleKind::SignedPermGroup, None) => unreachable!("validated"),
        })
    }

    fn check_posed(&self, q: &MatchQuery) -> Result<(), LocalSymError> {
        for (v, e) in [(q.source, q.source_edge), (q.target, q.target_edge)] {
            if self.g.vertices[v].kind == VertexKind::Cylindrical {
                return Err(LocalSymError::IllPosedQuery(format!("{:?} is cylindrical", self.g.vertices[v].id)));
            }
            if let Some(e) = e {
                if self.g.edges[e].ne != v {
                    return Err(LocalSymError::IllPosedQuery(format!(
                        "edge {:?} is not at {:?}",
                        self.g.edges[e].id, self.g.vertices[v].id
                    )));
                }
            }
            self.oracle_of(v)?;
        }
        if q.source_edge.is_some() != q.target_edge.is_some() {
            return Err(LocalSymError::IllPosedQuery("only one side is marked".into()));
        }
        if self.u.initial(self.d[q.source]) != self.u.initial(self.d[q.target]) {
            return Err(LocalSymError::IllPosedQuery("vertices have different base ornaments".into()));
        }
        Ok(())
    }

    /// Decides whether a local symmetry carries the source to the target.
    /// `xi` acts on the source's lines only.
    pub fn query_match(&self, q: &MatchQuery, xi: Option<&HashMap<OrnId, i8>>) -> Result<MatchAnswer, LocalSymError> {
        self.check_posed(q)?;
        let (oa, spec) = self.oracle_of(q.source)?;
        let (ob, _) = self.oracle_of(q.target)?;
        if oa != ob {
            return Ok(MatchAnswer::Unknown);
        }
        let yes = |b: bool| if b { MatchAnswer::Yes } else { MatchAnswer::No };
        if spec.kind == OracleKind::Trivial && (self.slots(q.source).is_none() || self.slots(q.target).is_none()) {
            let same = q.source == q.target && q.source_edge == q.target_edge;
            let rev_ok = !q.reversal || q.source_edge.is_some_and(|e| self.g.edges[e].reversible);
            return Ok(yes(same && rev_ok));
        }
        if q.reversal && spec.kind != OracleKind::SignedPermGroup {
            let e = q.source_edge.ok_or_else(|| LocalSymError::IllPosedQuery("reversal needs a marked edge".into()))?;
            let can_reverse = spec.kind == OracleKind::Flexible || self.g.edges[e].reversible;
            if !can_reverse {
                return Ok(MatchAnswer::No);
            }
        }
        if q.reversal && spec.kind == OracleKind::SignedPermGroup {
            let (e, f) = match (q.source_edge, q.target_edge) {
                (Some(e), Some(f)) => (e, f),
                _ => return Err(LocalSymError::IllPosedQuery("reversal needs a marked edge".into())),
            };
            return Ok(yes(self.mark_sign(q.source, e, xi, q.target, f, -1).is_some()));
        }
        let (a, b) = match (q.source_edge, q.target_edge) {
            (Some(e), Some(f)) => (self.edge_canon(q.source, e, xi)?, self.edge_canon(q.target, f, None)?),
            _ => (self.vertex_canon(q.source, xi)?, self.vertex_canon(q.target, None)?),
        };
        Ok(yes(a == b))
    }

    /// Searches the orbit of the source edge's marked slots for a state
    /// equal to the target configuration with the mark on a slot of `f`,
    /// carrying mark sign `want` (or any sign when `want` is 0). Returns the
    /// sign found.
    fn mark_sign(
        &self,
        v: usize,
        e: usize,
        xi: Option<&HashMap<OrnId, i8>>,
        w: usize,
        f: usize,
        want: i8,
    ) -> Option<i8> {
        let target = self.config(w, None);
        let fslots: HashSet<usize> = self.slot_set(w, f).into_iter().collect();
        let labels = self.config(v, xi);
        let mut found = None;
        for s0 in self.slot_set(v, e) {
            let start = State { labels: labels.clone(), mark: Some((s0, 1)) };
            for s in orbit(self.generators(v), start) {
                let (m, sign) = s.mark.expect("marked");
                if s.labels == target && fslots.contains(&m) && (want == 0 || sign == want) {
                    if sign == 1 || want != 0 {
                        return Some(sign);
                    }
                    found.get_or_insert(sign);
                }
            }
        }
        found
    }

    /// Whether a local symmetry at `v` fixes edge `e` and reverses its line.
    pub fn query_reversal(&self, v: usize, e: usize) -> Result<bool, LocalSymError> {
        let q = MatchQuery { source: v, source_edge: Some(e), reversal: true, target: v, target_edge: Some(e) };
        self.check_posed(&q)?;
        let (_, spec) = self.oracle_of(v)?;
        Ok(match spec.kind {
            OracleKind::Flexible => true,
            OracleKind::Trivial => self.g.edges[e].reversible,
            OracleKind::SignedPermGroup => self.mark_sign(v, e, None, v, e, -1).is_some(),
        })
    }

    /// Sign by which a symmetry carrying `e` to `f` acts on the line.
    fn transport_sign(&self, v: usize, e: usize, w: usize, f: usize) -> i8 {
        match self.slots(v).zip(self.slots(w)) {
            Some(_) if !self.generators(v).is_empty() => self.mark_sign(v, e, None, w, f, 0).unwrap_or(1),
            _ => 1,
        }
    }
}

fn intern_labels(u: &mut OrnamentUniverse, head: OrnId, labels: &[Label]) -> OrnId {
    let mut t = head;
    for &(orn, line) in labels {
        let l = u.signed(orn, Sign::from_i8(line));
        t = u.orbit(t, l);
    }
    t
}

fn intern_counts(u: &mut OrnamentUniverse, head: OrnId, counts: &[((OrnId, bool), ExtNat)]) -> OrnId {
    let items: Vec<(OrnId, ExtNat)> = counts
        .iter()
        .map(|((orn, oriented), n)| (u.signed(*orn, if *oriented { Sign::Pos } else { Sign::Zero }), *n))
        .collect();
    u.neighbor(head, items)
}

fn intern_canon(u: &mut OrnamentUniverse, g: &CylinderGraph, c: &Canon) -> OrnId {
    let oid = |o: usize| g.oracles[o].id.clone();
    match c {
        Canon::Cylinder => u.base(["cylinder"]),
        Canon::Slots { oracle, labels } => {
            let head = u.base(["slots".to_string(), oid(*oracle)]);
            intern_labels(u, head, labels)
        }
        Canon::Marked { oracle, orbits } => {
            let mut t = u.base(["marked".to_string(), oid(*oracle)]);
            for (labels, slot) in orbits {
                let head = u.base(["slot".to_string(), slot.to_string()]);
                let l = intern_labels(u, head, labels);
                t = u.orbit(t, l);
            }
            t
        }
        Canon::Flexible { oracle, counts } => {
            let head = u.base(["flexible".to_string(), oid(*oracle)]);
            intern_counts(u, head, counts)
        }
        Canon::FlexMarked { oracle, counts, mark } => {
            let head = u.base(["flexible".to_string(), oid(*oracle)]);
            let c = intern_counts(u, head, counts);
            let m = u.signed(mark.0, if mark.1 { Sign::Pos } else { Sign::Zero });
            u.orbit(c, m)
        }
        Canon::Unique { oracle, what, index } => {
            u.base(["unique".to_string(), oid(*oracle), what.to_string(), index.to_string()])
        }
    }
}

pub struct VertexRefineOutcome {
    pub d: Decoration,
    pub o: PartialOrientation,
    pub changed: bool,
    /// Two cells that might be equivalent could not be compared.
    pub unknown: bool,
}

/// Splits vertex and edge classes by local-symmetry orbits and orients
/// non-reversible edge classes. `part` assigns each vertex to an input
/// graph of a joint workspace.
pub fn vertex_refine(
    g: &CylinderGraph,
    d: &[OrnId],
    o: &PartialOrientation,
    u: &mut OrnamentUniverse,
    part: Option<&[usize]>,
    exec: Exec,
) -> Result<VertexRefineOutcome, LocalSymError> {
    let nv = g.vertices.len();
    let ne_vertices: Vec<usize> = (0..nv).filter(|&v| g.vertices[v].kind != VertexKind::Cylindrical).collect();
    let (vcanon, ecanon) = {
        let cx = SymContext { g, d, o, u };
        for &v in &ne_vertices {
            cx.oracle_of(v)?;
        }
        let vc = exec.map(&ne_vertices, |&v| cx.vertex_canon(v, None));
        let ec = exec.map_range(g.edges.len(), |e| cx.edge_canon(g.edges[e].ne, e, None));
        (
            vc.into_iter().collect::<Result<Vec<_>, _>>()?,
            ec.into_iter().collect::<Result<Vec<_>, _>>()?,
        )
    };

    let mut unknown = false;
    let mut by_orn: HashMap<OrnId, Vec<usize>> = HashMap::new();
    for &v in &ne_vertices {
        by_orn.entry(d[v]).or_default().push(v);
    }
    for members in by_orn.values() {
        let first = &g.vertices[members[0]];
        let oracle = first.binding.as_ref().map(|b| b.oracle);
        for &w in &members[1..] {
            let b = g.vertices[w].binding.as_ref().expect("bound");
            if Some(b.oracle) != oracle {
                unknown = true;
            }
        }
        if let Some(part) = part {
            let unbound: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&v| {
                    let b = g.vertices[v].binding.as_ref().expect("bound");
                    g.oracles[b.oracle].kind == OracleKind::Trivial && b.slots.is_empty()
                })
                .collect();
            if unbound.iter().any(|&v| part[v] != part[unbound[0]]) {
                unknown = true;
            }
        }
    }

    let mut d2 = Vec::with_capacity(d.len());
    let mut vi = vcanon.iter();
    for v in 0..nv {
        let tok = if g.vertices[v].kind == VertexKind::Cylindrical {
            intern_canon(u, g, &Canon::Cylinder)
        } else {
            intern_canon(u, g, vi.next().expect("one per vertex"))
        };
        d2.push(u.orbit(d[v], tok));
    }
    for (e, c) in ecanon.iter().enumerate() {
        let tok = intern_canon(u, g, c);
        d2.push(u.orbit(d[nv + e], tok));
    }

    // Orient edge classes that admit no reversal.
    let mut o2 = o.clone();
    let mut classes: BTreeMap<OrnId, Vec<usize>> = BTreeMap::new();
    for e in 0..g.edges.len() {
        classes.entry(d2[nv + e]).or_default().push(e);
    }
    let mut classes: Vec<Vec<usize>> = classes.into_values().collect();
    classes.sort();
    {
        let cx = SymContext { g, d, o, u };
        for members in classes {
            if members.iter().any(|&e| o.line[e] != 0) {
                continue;
            }
            let mut reversible = false;
            for &e in &members {
                reversible |= cx.query_reversal(g.edges[e].ne, e)?;
            }
            if reversible {
                continue;
            }
            let anchor = members[0];
            o2.line[anchor] = 1;
            for &f in &members[1..] {
                o2.line[f] = cx.transport_sign(g.edges[anchor].ne, anchor, g.edges[f].ne, f);
            }
        }
    }
    let changed = o2 != *o;
    Ok(VertexRefineOutcome { d: d2, o: o2, changed, unknown })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition() {
        let a = SignedPerm { perm: vec![1, 0, 2], signs: vec![1, -1, 1] };
        let id = SignedPerm::identity(3);
        assert_eq!(a.after(&id), a);
        let aa = a.after(&a);
        assert_eq!(aa.perm, vec![0, 1, 2]);
        assert_eq!(aa.signs, vec![-1, -1, 1]);
    }

    #[test]
    fn rejects_non_permutations() {
        let bad = SignedPerm { perm: vec![0, 0], signs: vec![1, 1] };
        assert!(OracleSpec::new("x", OracleKind::SignedPermGroup, Some(2), vec![bad]).is_err());
        assert!(OracleSpec::new("x", OracleKind::SignedPermGroup, None, vec![]).is_err());
        assert!(OracleSpec::new("x", OracleKind::Flexible, None, vec![SignedPerm::identity(1)]).is_err());
    }
}
