//! Weighted adjacency on quotient cells.

use serde::{Deserialize, Serialize};

use crate::extnat::ExtNat;
use crate::model::CylinderGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
}

/// Cells with directed counts `count(t -> u)`.
///
/// Cells carry a phase. One refinement sweep updates phase 0 and then
/// phase 1 using the freshly updated phase 0 values. For a subdivided graph
/// phase 0 is the vertex cells and phase 1 the edge cells.
#[derive(Clone, Debug)]
pub struct RefinementComplex {
    pub cells: Vec<Cell>,
    adj: Vec<Vec<(usize, ExtNat)>>,
    phase: Vec<u8>,
}

/// A finite multigraph. A loop contributes 2 to its vertex's degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }
}

impl RefinementComplex {
    pub fn subdivide(g: &CylinderGraph) -> Self {
        let nv = g.vertices.len();
        let mut cells: Vec<Cell> = (0..nv).map(Cell::Vertex).collect();
        cells.extend((0..g.edges.len()).map(Cell::Edge));
        let mut adj = vec![Vec::new(); cells.len()];
        for (i, e) in g.edges.iter().enumerate() {
            adj[e.cyl].push((nv + i, ExtNat::Fin(e.mult_at_cyl)));
            adj[e.ne].push((nv + i, e.mult_at_ne));
            adj[nv + i] = vec![(e.cyl, ExtNat::ONE), (e.ne, ExtNat::ONE)];
        }
        let phase = cells.iter().map(|c| matches!(c, Cell::Edge(_)) as u8).collect();
        RefinementComplex { cells, adj, phase }
    }

    /// The degree-refinement regime: one cell per vertex, counts are edge
    /// counts, all in one phase.
    pub fn from_multigraph(m: &Multigraph) -> Self {
        let mut counts = vec![std::collections::BTreeMap::<usize, u64>::new(); m.n];
        for &(a, b) in &m.edges {
            *counts[a].entry(b).or_default() += 1;
            *counts[b].entry(a).or_default() += 1;
        }
        let adj = counts
            .into_iter()
            .map(|row| row.into_iter().map(|(u, c)| (u, ExtNat::Fin(c))).collect())
            .collect();
        RefinementComplex { cells: (0..m.n).map(Cell::Vertex).collect(), adj, phase: vec![0; m.n] }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn neighbors(&self, t: usize) -> &[(usize, ExtNat)] {
        &self.adj[t]
    }

    pub fn phase(&self, t: usize) -> u8 {
        self.phase[t]
    }

    pub fn has_second_phase(&self) -> bool {
        self.phase.contains(&1)
    }

    pub fn all_finite(&self) -> bool {
        self.adj.iter().flatten().all(|(_, c)| c.is_finite())
    }

    /// Total lift valence at `t`.
    pub fn valence(&self, t: usize) -> ExtNat {
        self.adj[t].iter().map(|(_, c)| *c).sum()
    }
}
