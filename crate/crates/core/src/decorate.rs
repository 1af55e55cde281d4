//! Initial decorations for each mode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::CylinderGraph;
use crate::ornament::{OrnId, OrnamentUniverse};
use crate::stretch::{stretch_decoration, StretchError};

/// One ornament per cell of the subdivided complex.
pub type Decoration = Vec<OrnId>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Vertex kind only.
    Type,
    /// Kind and quasi-isometry type.
    Qi,
    /// Kind and relative quasi-isometry type.
    RelQi,
    /// Kind and relative type, then cylinder and vertex refinement.
    Boundary,
    /// Relative type plus stretch factors on rigid-incident edges.
    QiStretch,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Type, Mode::Qi, Mode::RelQi, Mode::Boundary, Mode::QiStretch];

    /// Whether the full pipeline (with orientation and local symmetry)
    /// runs, as opposed to neighbor refinement alone.
    pub fn uses_orientation(self) -> bool {
        matches!(self, Mode::Boundary | Mode::QiStretch)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Type => "type",
            Mode::Qi => "qi",
            Mode::RelQi => "rel-qi",
            Mode::Boundary => "boundary",
            Mode::QiStretch => "qi+stretch",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected type, qi, rel-qi, boundary or qi+stretch)"))
    }
}

pub fn initial_decoration(g: &CylinderGraph, mode: Mode, u: &mut OrnamentUniverse) -> Result<Decoration, StretchError> {
    let rs = if mode == Mode::QiStretch { Some(stretch_decoration(g)?) } else { None };
    let mut d = Vec::with_capacity(g.vertices.len() + g.edges.len());
    for v in &g.vertices {
        let mut tags = vec![v.kind.tag().to_string()];
        let label = match mode {
            Mode::Type => None,
            Mode::Qi => v.qi_type.as_ref(),
            Mode::RelQi | Mode::Boundary | Mode::QiStretch => v.rel_qi_type.as_ref(),
        };
        tags.extend(label.cloned());
        d.push(u.base(tags));
    }
    for e in 0..g.edges.len() {
        let id = match &rs {
            None => u.base(["edge"]),
            Some(rs) => match rs[e] {
                Some(r) => u.base(["edge".to_string(), r.to_string()]),
                None => u.base(["edge", "null"]),
            },
        };
        d.push(id);
    }
    Ok(d)
}
