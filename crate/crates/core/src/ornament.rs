//! Interned ornament values with a structural total order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::extnat::ExtNat;

/// Handle into an [`OrnamentUniverse`]. Equal ids mean equal values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrnId(u32);

impl OrnId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn from_i8(v: i8) -> Sign {
        match v.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ornament {
    Base(Vec<String>),
    /// Counts are sorted by key order with zero entries dropped.
    Neighbor { base: OrnId, counts: Vec<(OrnId, ExtNat)> },
    Signed { base: OrnId, sign: Sign },
    Orbit { base: OrnId, token: OrnId },
}

impl Ornament {
    fn rank(&self) -> u8 {
        match self {
            Ornament::Base(_) => 0,
            Ornament::Neighbor { .. } => 1,
            Ornament::Signed { .. } => 2,
            Ornament::Orbit { .. } => 3,
        }
    }
}

#[derive(Default, Debug, Clone)]
pub struct OrnamentUniverse {
    nodes: Vec<Ornament>,
    index: HashMap<Ornament, OrnId>,
}

impl OrnamentUniverse {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, id: OrnId) -> &Ornament {
        &self.nodes[id.index()]
    }

    /// Interns a value whose children are already interned. Neighbor counts
    /// are normalized first, so any insertion order gives the same id.
    pub fn intern(&mut self, value: Ornament) -> OrnId {
        let value = match value {
            Ornament::Neighbor { base, counts } => Ornament::Neighbor {
                base,
                counts: self.normalize_counts(counts),
            },
            other => other,
        };
        if let Some(&id) = self.index.get(&value) {
            return id;
        }
        let id = OrnId(u32::try_from(self.nodes.len()).expect("ornament universe overflow"));
        self.nodes.push(value.clone());
        self.index.insert(value, id);
        id
    }

    pub fn base<S: Into<String>>(&mut self, tags: impl IntoIterator<Item = S>) -> OrnId {
        self.intern(Ornament::Base(tags.into_iter().map(Into::into).collect()))
    }

    pub fn neighbor(&mut self, base: OrnId, counts: impl IntoIterator<Item = (OrnId, ExtNat)>) -> OrnId {
        self.intern(Ornament::Neighbor { base, counts: counts.into_iter().collect() })
    }

    pub fn signed(&mut self, base: OrnId, sign: Sign) -> OrnId {
        self.intern(Ornament::Signed { base, sign })
    }

    pub fn orbit(&mut self, base: OrnId, token: OrnId) -> OrnId {
        self.intern(Ornament::Orbit { base, token })
    }

    fn normalize_counts(&self, counts: Vec<(OrnId, ExtNat)>) -> Vec<(OrnId, ExtNat)> {
        let mut merged: HashMap<OrnId, ExtNat> = HashMap::new();
        for (k, v) in counts {
            *merged.entry(k).or_insert(ExtNat::ZERO) += v;
        }
        let mut out: Vec<_> = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by(|a, b| self.cmp(a.0, b.0));
        out
    }

    /// Structural total order. Never looks at id values except to short-cut
    /// equality.
    pub fn cmp(&self, a: OrnId, b: OrnId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let (x, y) = (self.get(a), self.get(b));
        match (x, y) {
            (Ornament::Base(s), Ornament::Base(t)) => s.cmp(t),
            (Ornament::Neighbor { base: b1, counts: c1 }, Ornament::Neighbor { base: b2, counts: c2 }) => {
                self.cmp(*b1, *b2).then_with(|| {
                    for ((k1, n1), (k2, n2)) in c1.iter().zip(c2) {
                        let o = self.cmp(*k1, *k2).then(n1.cmp(n2));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                    c1.len().cmp(&c2.len())
                })
            }
            (Ornament::Signed { base: b1, sign: s1 }, Ornament::Signed { base: b2, sign: s2 }) => {
                self.cmp(*b1, *b2).then(s1.cmp(s2))
            }
            (Ornament::Orbit { base: b1, token: t1 }, Ornament::Orbit { base: b2, token: t2 }) => {
                self.cmp(*b1, *b2).then_with(|| self.cmp(*t1, *t2))
            }
            _ => x.rank().cmp(&y.rank()),
        }
    }

    pub fn sort(&self, ids: &mut [OrnId]) {
        ids.sort_by(|a, b| self.cmp(*a, *b));
    }

    /// Follows `base` links down to the Base ornament.
    pub fn initial(&self, mut id: OrnId) -> OrnId {
        loop {
            match self.get(id) {
                Ornament::Base(_) => return id,
                Ornament::Neighbor { base, .. } | Ornament::Signed { base, .. } | Ornament::Orbit { base, .. } => {
                    id = *base
                }
            }
        }
    }

    pub fn base_tags(&self, id: OrnId) -> &[String] {
        match self.get(self.initial(id)) {
            Ornament::Base(t) => t,
            _ => unreachable!(),
        }
    }

    /// Canonical DAG serialization of everything reachable from `roots`.
    /// Nodes are listed in structural order and refer to each other by
    /// position, so the output never depends on intern ids and never blows
    /// up on deeply shared values.
    pub fn export(&self, roots: &[OrnId]) -> OrnamentTable {
        let mut seen: BTreeMap<OrnId, ()> = BTreeMap::new();
        let mut stack: Vec<OrnId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if seen.insert(id, ()).is_some() {
                continue;
            }
            match self.get(id) {
                Ornament::Base(_) => {}
                Ornament::Neighbor { base, counts } => {
                    stack.push(*base);
                    stack.extend(counts.iter().map(|(k, _)| *k));
                }
                Ornament::Signed { base, .. } => stack.push(*base),
                Ornament::Orbit { base, token } => {
                    stack.push(*base);
                    stack.push(*token);
                }
            }
        }
        let mut order: Vec<OrnId> = seen.into_keys().collect();
        self.sort(&mut order);
        let position: HashMap<OrnId, usize> = order.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let nodes = order
            .iter()
            .map(|id| match self.get(*id) {
                Ornament::Base(tags) => json!({ "base": tags }),
                Ornament::Neighbor { base, counts } => json!({
                    "neighbor": {
                        "base": position[base],
                        "counts": counts.iter().map(|(k, n)| json!([position[k], n])).collect::<Vec<_>>(),
                    }
                }),
                Ornament::Signed { base, sign } => json!({ "signed": { "base": position[base], "sign": sign.as_i8() } }),
                Ornament::Orbit { base, token } => json!({ "orbit": { "base": position[base], "token": position[token] } }),
            })
            .collect();
        OrnamentTable { nodes, position }
    }
}

pub struct OrnamentTable {
    pub nodes: Vec<Value>,
    pub position: HashMap<OrnId, usize>,
}

impl fmt::Display for OrnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
