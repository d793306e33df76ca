//! The cell/item hypergraph: one vertex per cell, one hyperedge per stored
//! item spanning its `d` choices.
//!
//! A connected component with `r` vertices and `s` edges is a tree when
//! `(d-1)s = r-1`, unicyclic when `(d-1)s = r`, and complex when
//! `(d-1)s > r`. In an insertion-only wear-cuckoo table, a cell of wear `k`
//! roots a `(d-1)`-ary tree of wear-children (the other choices of the item
//! it holds, each with wear at least `k-1`, recursively). In a tree component
//! that tree has at least `(d-1)^k + 1` distinct cells; a unicyclic component
//! loses at most one branch, leaving `(d-1)^(k-1) + 1`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hash_family::ChoiceSet;
use crate::wear_cuckoo::WearTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge {edge} has {got} endpoints, expected {d}")]
    Arity { edge: usize, got: usize, d: usize },
    #[error("edge {edge} endpoint {vertex} out of range for n={n}")]
    OutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("edge {edge} repeats vertex {vertex}")]
    Repeated { edge: usize, vertex: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Tree,
    Unicyclic,
    Complex,
}

/// Classifies a connected component with `r` vertices and `s` edges.
pub fn classify(r: usize, s: usize, d: usize) -> ComponentKind {
    let weighted = (d - 1) * s;
    if weighted + 1 == r {
        ComponentKind::Tree
    } else if weighted == r {
        ComponentKind::Unicyclic
    } else {
        ComponentKind::Complex
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub r: usize,
    pub s: usize,
    pub kind: ComponentKind,
}

#[derive(Clone, Debug)]
pub struct CellItemHypergraph {
    n: usize,
    d: usize,
    edges: Vec<ChoiceSet>,
}

impl CellItemHypergraph {
    pub fn build<I, E>(edges: I, n: usize, d: usize) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut out = Vec::new();
        for (idx, e) in edges.into_iter().enumerate() {
            let e = e.as_ref();
            if e.len() != d {
                return Err(HypergraphError::Arity {
                    edge: idx,
                    got: e.len(),
                    d,
                });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::OutOfRange {
                    edge: idx,
                    vertex: v,
                    n,
                });
            }
            let set = ChoiceSet::from_slice(e).ok_or_else(|| {
                let dup = e
                    .iter()
                    .enumerate()
                    .find(|(i, v)| e[..*i].contains(v))
                    .map_or(e[0], |(_, v)| *v);
                HypergraphError::Repeated {
                    edge: idx,
                    vertex: dup,
                }
            })?;
            out.push(set);
        }
        Ok(CellItemHypergraph { n, d, edges: out })
    }

    /// Hypergraph of the items currently stored in `table`.
    pub fn from_table<V>(table: &WearTable<V>) -> Self {
        let family = *table.family();
        CellItemHypergraph {
            n: table.capacity(),
            d: family.d(),
            edges: table
                .placements()
                .map(|(_, k)| family.derive_cells(k))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[ChoiceSet] {
        &self.edges
    }

    /// Component id for every vertex; isolated vertices get `None`. Ids are
    /// dense and ordered by each component's smallest vertex.
    pub fn component_labels(&self) -> (Vec<Option<usize>>, usize) {
        let mut uf = UnionFind::new(self.n);
        let mut touched = vec![false; self.n];
        for e in &self.edges {
            touched[e[0]] = true;
            for &v in &e[1..] {
                touched[v] = true;
                uf.union(e[0], v);
            }
        }
        let mut id_of_root = vec![usize::MAX; self.n];
        let mut next = 0;
        let labels = (0..self.n)
            .map(|v| {
                if !touched[v] {
                    return None;
                }
                let root = uf.find(v);
                if id_of_root[root] == usize::MAX {
                    id_of_root[root] = next;
                    next += 1;
                }
                Some(id_of_root[root])
            })
            .collect();
        (labels, next)
    }

    /// Connected components over non-isolated vertices.
    pub fn components(&self) -> Vec<ComponentStats> {
        let (labels, count) = self.component_labels();
        let mut r = vec![0usize; count];
        let mut s = vec![0usize; count];
        for id in labels.iter().flatten() {
            r[*id] += 1;
        }
        for e in &self.edges {
            s[labels[e[0]].expect("edge endpoint is labeled")] += 1;
        }
        r.into_iter()
            .zip(s)
            .map(|(r, s)| ComponentStats {
                r,
                s,
                kind: classify(r, s, self.d),
            })
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Per-cell wear and the choice set of the item each cell holds.
#[derive(Clone, Debug)]
pub struct WearLayout {
    pub wear: Vec<u32>,
    pub placed: Vec<Option<ChoiceSet>>,
}

impl WearLayout {
    pub fn from_table<V>(table: &WearTable<V>) -> Self {
        let family = *table.family();
        WearLayout {
            wear: table.wear_snapshot(),
            placed: table
                .cells()
                .iter()
                .map(|c| c.key().map(|k| family.derive_cells(k)))
                .collect(),
        }
    }
}

/// Occupied cells of wear `w >= 1` where some other choice of the occupant
/// has wear below `w - 1`.
pub fn wear_children_violations(layout: &WearLayout) -> usize {
    layout
        .placed
        .iter()
        .enumerate()
        .filter(|(cell, edge)| {
            let w = layout.wear[*cell];
            match edge {
                Some(e) if w >= 1 => e
                    .iter()
                    .any(|&other| other != *cell && layout.wear[other] < w - 1),
                _ => false,
            }
        })
        .count()
}

/// Distinct cells in the pruned wear-children tree rooted at `root`, expanded
/// to depth `wear(root)`. A cell reached twice is kept only at its first
/// (shallowest) occurrence. Also returns how many wear-child edges broke the
/// `>= k-1` rule or pointed at an empty cell that should be occupied.
pub fn wear_tree_size(layout: &WearLayout, root: usize) -> (usize, usize) {
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    let mut broken = 0;
    seen.insert(root);
    queue.push_back((root, layout.wear[root]));
    while let Some((cell, level)) = queue.pop_front() {
        if level == 0 {
            continue;
        }
        let Some(edge) = layout.placed[cell] else {
            broken += 1;
            continue;
        };
        for &child in edge.iter().filter(|&&c| c != cell) {
            if layout.wear[child] < level - 1 {
                broken += 1;
            }
            if seen.insert(child) {
                queue.push_back((child, level - 1));
            }
        }
    }
    (seen.len(), broken)
}

/// Lower bound on the wear-children tree of a wear-`k` cell, or `None` for
/// complex components where no bound is claimed.
pub fn wear_tree_bound(kind: ComponentKind, k: u32, d: usize) -> Option<u64> {
    let base = (d - 1) as u64;
    match kind {
        ComponentKind::Tree => Some(base.saturating_pow(k) + 1),
        ComponentKind::Unicyclic => Some(base.saturating_pow(k.saturating_sub(1)) + 1),
        ComponentKind::Complex => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentWearCheck {
    pub stats: ComponentStats,
    pub max_wear: u32,
    /// Smallest wear-children tree among cells holding `max_wear`.
    pub tree_size_at_max: usize,
    pub bound_at_max: Option<u64>,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WearTreeReport {
    pub components: Vec<ComponentWearCheck>,
    /// Cells whose wear-children tree is smaller than its bound.
    pub tree_violations: usize,
    /// Wear-children that break the `>= k-1` rule.
    pub child_violations: usize,
    /// Tree components with `r < (d-1)^k_max + 1`.
    pub size_violations: usize,
}

impl WearTreeReport {
    pub fn violations(&self) -> usize {
        self.tree_violations + self.child_violations + self.size_violations
    }
}

/// Checks the wear-children tree bounds on every occupied cell of wear >= 1.
/// Only meaningful for insertion-only tables.
pub fn check_wear_tree(h: &CellItemHypergraph, layout: &WearLayout) -> WearTreeReport {
    let d = h.d();
    let (labels, count) = h.component_labels();
    let stats = h.components();
    let mut checks: Vec<ComponentWearCheck> = stats
        .iter()
        .map(|&s| ComponentWearCheck {
            stats: s,
            max_wear: 0,
            tree_size_at_max: usize::MAX,
            bound_at_max: None,
            violations: 0,
        })
        .collect();
    debug_assert_eq!(checks.len(), count);

    for (cell, label) in labels.iter().enumerate() {
        if let Some(id) = label {
            checks[*id].max_wear = checks[*id].max_wear.max(layout.wear[cell]);
        }
    }

    let mut report = WearTreeReport::default();
    for (cell, label) in labels.iter().enumerate() {
        let Some(id) = *label else { continue };
        let k = layout.wear[cell];
        if k == 0 || layout.placed[cell].is_none() {
            continue;
        }
        let check = &mut checks[id];
        let (size, broken) = wear_tree_size(layout, cell);
        report.child_violations += broken;
        check.violations += broken;
        let bound = wear_tree_bound(check.stats.kind, k, d);
        if let Some(b) = bound {
            if (size as u64) < b {
                report.tree_violations += 1;
                check.violations += 1;
            }
        }
        if k == check.max_wear {
            check.tree_size_at_max = check.tree_size_at_max.min(size);
            check.bound_at_max = bound;
        }
    }

    for check in &mut checks {
        if check.tree_size_at_max == usize::MAX {
            check.tree_size_at_max = 0;
        }
        if check.stats.kind == ComponentKind::Tree {
            let need = wear_tree_bound(ComponentKind::Tree, check.max_wear, d).unwrap_or(0);
            if (check.stats.r as u64) < need {
                report.size_violations += 1;
                check.violations += 1;
            }
        }
    }
    report.components = checks;
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub n: usize,
    pub components: usize,
    pub max_r: usize,
    pub tree_fraction: f64,
    pub unicyclic_fraction: f64,
    pub complex_count: usize,
    /// `max_r / log2(n)`: the empirical constant in the logarithmic bound on
    /// component size.
    pub fitted_c: f64,
}

pub fn component_summary(stats: &[ComponentStats], n: usize) -> ComponentSummary {
    let count = stats.len();
    let tally = |kind| stats.iter().filter(|s| s.kind == kind).count();
    let frac = |c: usize| {
        if count == 0 {
            0.0
        } else {
            c as f64 / count as f64
        }
    };
    let max_r = stats.iter().map(|s| s.r).max().unwrap_or(0);
    let log_n = if n > 1 { (n as f64).log2() } else { 1.0 };
    ComponentSummary {
        n,
        components: count,
        max_r,
        tree_fraction: frac(tally(ComponentKind::Tree)),
        unicyclic_fraction: frac(tally(ComponentKind::Unicyclic)),
        complex_count: tally(ComponentKind::Complex),
        fitted_c: max_r as f64 / log_n,
    }
}
