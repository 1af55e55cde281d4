//! Brute-force checks for finite-multiplicity inputs: balls in the covering
//! tree with backtracking isomorphism, and classical degree refinement.
//! Nothing here calls into the refinement engine.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{Multigraph, RefinementComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("cell {0} has an infinite multiplicity")]
    InfiniteMultiplicity(usize),
}

/// A ball of the covering tree. Identical subtrees are shared, so a node
/// may be the child of several parents; `children` lists every copy.
#[derive(Clone, Debug)]
pub struct Ball {
    pub nodes: Vec<BallNode>,
    pub root: usize,
    pub radius: usize,
}

#[derive(Clone, Debug)]
pub struct BallNode {
    pub cell: usize,
    pub children: Vec<usize>,
}

pub fn expand_ball(cx: &RefinementComplex, base: usize, radius: usize) -> Result<Ball, OracleError> {
    if let Some(t) = (0..cx.len()).find(|&t| !cx.valence(t).is_finite()) {
        return Err(OracleError::InfiniteMultiplicity(t));
    }
    let mut nodes = Vec::new();
    let mut memo = HashMap::new();
    let root = build(cx, base, None, radius, &mut nodes, &mut memo);
    Ok(Ball { nodes, root, radius })
}

fn build(
    cx: &RefinementComplex,
    cell: usize,
    parent: Option<usize>,
    depth: usize,
    nodes: &mut Vec<BallNode>,
    memo: &mut HashMap<(usize, Option<usize>, usize), usize>,
) -> usize {
    if let Some(&n) = memo.get(&(cell, parent, depth)) {
        return n;
    }
    let mut children = Vec::new();
    if depth > 0 {
        for &(u, c) in cx.neighbors(cell) {
            let mut n = c.finite().expect("checked finite");
            if Some(u) == parent {
                n -= 1;
            }
            if n > 0 {
                let child = build(cx, u, Some(cell), depth - 1, nodes, memo);
                children.extend(std::iter::repeat_n(child, n as usize));
            }
        }
    }
    nodes.push(BallNode { cell, children });
    let id = nodes.len() - 1;
    memo.insert((cell, parent, depth), id);
    id
}

impl Ball {
    /// Number of nodes in the unshared tree.
    pub fn node_count(&self) -> u128 {
        let mut memo = HashMap::new();
        count(self, self.root, &mut memo)
    }
}

fn count(b: &Ball, n: usize, memo: &mut HashMap<usize, u128>) -> u128 {
    if let Some(&c) = memo.get(&n) {
        return c;
    }
    let c = 1 + b.nodes[n].children.iter().map(|&ch| count(b, ch, memo)).sum::<u128>();
    memo.insert(n, c);
    c
}

/// Searches for a root-preserving isomorphism that preserves `label` on
/// cells.
pub fn ball_isomorphic<L: PartialEq>(b1: &Ball, b2: &Ball, label: &[L]) -> bool {
    b1.radius == b2.radius && Iso { b1, b2, label, memo: HashMap::new() }.iso(b1.root, b2.root)
}

struct Iso<'a, L> {
    b1: &'a Ball,
    b2: &'a Ball,
    label: &'a [L],
    memo: HashMap<(usize, usize), bool>,
}

impl<L: PartialEq> Iso<'_, L> {
    fn iso(&mut self, x: usize, y: usize) -> bool {
        if let Some(&r) = self.memo.get(&(x, y)) {
            return r;
        }
        let (nx, ny) = (&self.b1.nodes[x], &self.b2.nodes[y]);
        let r = self.label[nx.cell] == self.label[ny.cell]
            && nx.children.len() == ny.children.len()
            && {
                let (cx, cy) = (nx.children.clone(), ny.children.clone());
                let mut used = vec![false; cy.len()];
                self.assign(&cx, &cy, 0, &mut used)
            };
        self.memo.insert((x, y), r);
        r
    }

    fn assign(&mut self, xs: &[usize], ys: &[usize], i: usize, used: &mut [bool]) -> bool {
        if i == xs.len() {
            return true;
        }
        for j in 0..ys.len() {
            if !used[j] && self.iso(xs[i], ys[j]) {
                used[j] = true;
                if self.assign(xs, ys, i + 1, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
}

/// Classical degree refinement: colors and the color-to-color count matrix.
/// Colors are numbered by sorted signature, so results from different
/// graphs are directly comparable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRefinement {
    pub colors: Vec<usize>,
    pub matrix: Vec<Vec<u64>>,
}

pub fn degree_refinement(m: &Multigraph) -> DegreeRefinement {
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); m.n];
    for &(a, b) in &m.edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let mut colors = vec![0usize; m.n];
    let mut k = usize::from(m.n > 0);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u64)>)> = (0..m.n)
            .map(|v| {
                let mut hist: HashMap<usize, u64> = HashMap::new();
                for &w in &nbrs[v] {
                    *hist.entry(colors[w]).or_default() += 1;
                }
                let mut h: Vec<_> = hist.into_iter().collect();
                h.sort_unstable();
                (colors[v], h)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colors = sigs.iter().map(|s| distinct.binary_search(s).expect("present")).collect();
        let stable = distinct.len() == k;
        k = distinct.len();
        if stable {
            break;
        }
    }
    let mut matrix = vec![vec![0u64; k]; k];
    let mut done = vec![false; k];
    for v in 0..m.n {
        if !std::mem::replace(&mut done[colors[v]], true) {
            for &w in &nbrs[v] {
                matrix[colors[v]][colors[w]] += 1;
            }
        }
    }
    DegreeRefinement { colors, matrix }
}
