//! Neighbor refinement to a fixpoint, and the structure invariant.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::complex::RefinementComplex;
use crate::decorate::Decoration;
use crate::exec::Exec;
use crate::extnat::ExtNat;
use crate::ornament::{OrnId, OrnamentUniverse};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefineError {
    #[error("decoration is not stable: class of cell {0} has members with different neighbor counts")]
    NotStable(usize),
}

/// Class index per cell, numbered by first occurrence.
pub fn partition(d: &[OrnId]) -> Vec<usize> {
    let mut seen = HashMap::new();
    d.iter()
        .map(|o| {
            let n = seen.len();
            *seen.entry(*o).or_insert(n)
        })
        .collect()
}

pub fn class_count(d: &[OrnId]) -> usize {
    let mut ids = d.to_vec();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

pub fn same_partition(a: &[OrnId], b: &[OrnId]) -> bool {
    partition(a) == partition(b)
}

fn counts_at(cx: &RefinementComplex, t: usize, d: &[OrnId]) -> Vec<(OrnId, ExtNat)> {
    let mut acc: BTreeMap<OrnId, ExtNat> = BTreeMap::new();
    for &(u, c) in cx.neighbors(t) {
        *acc.entry(d[u]).or_insert(ExtNat::ZERO) += c;
    }
    acc.into_iter().collect()
}

fn update_phase(
    cx: &RefinementComplex,
    phase: u8,
    init: &[OrnId],
    read: &[OrnId],
    write: &mut [OrnId],
    u: &mut OrnamentUniverse,
    exec: Exec,
) {
    let cells: Vec<usize> = (0..cx.len()).filter(|&t| cx.phase(t) == phase).collect();
    let counts = exec.map(&cells, |&t| counts_at(cx, t, read));
    for (t, c) in cells.into_iter().zip(counts) {
        write[t] = u.neighbor(init[t], c);
    }
}

/// One sweep: phase 0 cells read `current`, then phase 1 cells read the
/// updated phase 0 values.
pub fn neighbor_refine_step(
    cx: &RefinementComplex,
    init: &[OrnId],
    current: &[OrnId],
    u: &mut OrnamentUniverse,
    exec: Exec,
) -> Decoration {
    let mut next = current.to_vec();
    update_phase(cx, 0, init, current, &mut next, u, exec);
    if cx.has_second_phase() {
        let snapshot = next.clone();
        update_phase(cx, 1, init, &snapshot, &mut next, u, exec);
    }
    next
}

/// Lets phase 1 cells see the initial ornaments of their neighbors before
/// the first sweep, so a sweep advances vertex information by a full hop.
pub fn synchronize(cx: &RefinementComplex, init: &[OrnId], u: &mut OrnamentUniverse, exec: Exec) -> Decoration {
    let mut out = init.to_vec();
    if cx.has_second_phase() {
        update_phase(cx, 1, init, init, &mut out, u, exec);
    }
    out
}

/// Iterates sweeps until the partition stops getting finer. Returns the
/// last strictly finer decoration and the number of strict sweeps.
pub fn neighbor_refine_fix(
    cx: &RefinementComplex,
    d0: &[OrnId],
    u: &mut OrnamentUniverse,
    exec: Exec,
) -> (Decoration, usize) {
    let mut cur = synchronize(cx, d0, u, exec);
    let mut classes = class_count(&cur);
    let mut steps = 0;
    loop {
        let next = neighbor_refine_step(cx, d0, &cur, u, exec);
        let n = class_count(&next);
        debug_assert!(n >= classes);
        if n == classes {
            return (cur, steps);
        }
        cur = next;
        classes = n;
        steps += 1;
    }
}

/// Counts between stable classes, keyed by ornaments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureInvariant {
    /// (row, column) → count of column-class neighbors at a row-class cell.
    pub entries: BTreeMap<(OrnId, OrnId), ExtNat>,
    /// Stable ornament → its Base ornament.
    pub projection: BTreeMap<OrnId, OrnId>,
}

impl StructureInvariant {
    pub fn rows(&self) -> impl Iterator<Item = OrnId> + '_ {
        self.projection.keys().copied()
    }

    pub fn entry(&self, row: OrnId, col: OrnId) -> ExtNat {
        self.entries.get(&(row, col)).copied().unwrap_or(ExtNat::ZERO)
    }
}

pub fn structure_invariant(
    cx: &RefinementComplex,
    stable: &[OrnId],
    u: &OrnamentUniverse,
) -> Result<StructureInvariant, RefineError> {
    let cells: Vec<usize> = (0..cx.len()).collect();
    structure_invariant_on(cx, stable, &cells, u)
}

/// The invariant restricted to the classes met by `cells` (one component
/// of a joint workspace).
pub fn structure_invariant_on(
    cx: &RefinementComplex,
    stable: &[OrnId],
    cells: &[usize],
    u: &OrnamentUniverse,
) -> Result<StructureInvariant, RefineError> {
    let mut rows: BTreeMap<OrnId, Vec<(OrnId, ExtNat)>> = BTreeMap::new();
    let mut projection = BTreeMap::new();
    for &t in cells {
        let counts = counts_at(cx, t, stable);
        match rows.get(&stable[t]) {
            Some(prev) if *prev != counts => return Err(RefineError::NotStable(t)),
            Some(_) => {}
            None => {
                rows.insert(stable[t], counts);
                projection.insert(stable[t], u.initial(stable[t]));
            }
        }
    }
    let entries = rows
        .into_iter()
        .flat_map(|(r, cs)| cs.into_iter().map(move |(c, n)| ((r, c), n)))
        .collect();
    Ok(StructureInvariant { entries, projection })
}

pub fn invariants_equal(a: &StructureInvariant, b: &StructureInvariant) -> bool {
    a == b
}
