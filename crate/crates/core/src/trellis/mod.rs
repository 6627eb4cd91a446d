//! Trellises: depth-partitioned, edge-labelled DAGs with one root and one or
//! more labelled goal vertices.
//!
//! Vertices are dense integer ids per level; vertex 0 of level 0 is the root
//! and every vertex of the last level is a goal. Edges of a section are kept
//! sorted by `(from, label, to)`.

mod bcjr;
mod bounds;
mod build;
mod export;
mod merge;
mod product;

pub use bcjr::{bcjr_wolf, bcjr_wolf_over};
pub use bounds::{check_bounds, check_css_bounds, BoundCheck, BoundReport};
pub use build::{
    build_joint_trellis, build_min_trellis_bcjr, build_min_trellis_tof, build_multigoal_trellis,
    build_outer_trellis, build_subgroup_trellis, Method,
};
pub use export::{from_json, to_dot, to_json, TrellisJson};
pub use merge::{disjoint_union, merge_twins, trivial_trellis};
pub use product::{atomic_trellis, atomic_trellis_symbols, shannon_product, shannon_product_all};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::CodeError;
use crate::pauli::{Pauli, PauliVector};

#[derive(Debug, Error)]
pub enum TrellisError {
    #[error("trellis depth must be at least 1")]
    ZeroDepth,
    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: usize, right: usize },
    #[error("section {section}: cannot multiply {left} by {right}")]
    AlphabetMismatch {
        section: usize,
        left: Symbol,
        right: Symbol,
    },
    #[error("malformed trellis: {0}")]
    Malformed(String),
    #[error("goal labels are not distinct")]
    DuplicateGoalLabel,
    #[error("twin merging would join goals labelled {0} and {1}")]
    MergeConflict(u64, u64),
    #[error("vertex {vertex} at depth {depth} has {count} outgoing tail edges")]
    AmbiguousTail {
        depth: usize,
        vertex: u32,
        count: usize,
    },
    #[error("{0}")]
    TooLarge(String),
    #[error("empty check matrix")]
    EmptyChecks,
    #[error("unknown construction method {0:?}")]
    UnknownMethod(String),
    #[error("trellis lacks one goal per coset")]
    MissingGoals,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pauli(#[from] crate::pauli::PauliError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// An edge label: a Pauli symbol, or a tail symbol of an extended code
/// (a bit vector multiplied by XOR).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Pauli(Pauli),
    Tail(u64),
}

impl Symbol {
    pub const I: Symbol = Symbol::Pauli(Pauli::I);

    pub fn is_identity(self) -> bool {
        matches!(self, Symbol::Pauli(Pauli::I) | Symbol::Tail(0))
    }

    /// Product of two symbols of the same kind.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Symbol) -> Option<Symbol> {
        match (self, other) {
            (Symbol::Pauli(a), Symbol::Pauli(b)) => Some(Symbol::Pauli(a * b)),
            (Symbol::Tail(a), Symbol::Tail(b)) => Some(Symbol::Tail(a ^ b)),
            _ => None,
        }
    }

    pub fn pauli(self) -> Option<Pauli> {
        match self {
            Symbol::Pauli(p) => Some(p),
            Symbol::Tail(_) => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Pauli(p) => write!(f, "{p}"),
            Symbol::Tail(t) => write!(f, "T{t}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = TrellisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TrellisError::Malformed(format!("bad edge label {s:?}"));
        if let Some(rest) = s.strip_prefix('T') {
            return rest.parse().map(Symbol::Tail).map_err(|_| bad());
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Pauli::from_char(c).map(Symbol::Pauli).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An edge of one section, from a vertex of level `t` to one of level `t+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: u32,
    pub label: Symbol,
    pub to: u32,
}

/// Vertex and edge counts of a trellis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    /// `2|E| - |V|`
    pub viterbi_cost: i64,
    pub state_profile: Vec<usize>,
    pub edge_profile: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    levels: Vec<usize>,
    sections: Vec<Vec<Edge>>,
    goal_labels: Vec<u64>,
    label_bits: usize,
    vertex_labels: Option<Vec<Vec<u64>>>,
}

impl Trellis {
    /// Assembles a trellis, sorting and deduplicating each section.
    pub fn from_parts(
        levels: Vec<usize>,
        mut sections: Vec<Vec<Edge>>,
        goal_labels: Vec<u64>,
        label_bits: usize,
    ) -> Result<Self, TrellisError> {
        if sections.is_empty() {
            return Err(TrellisError::ZeroDepth);
        }
        if levels.len() != sections.len() + 1 {
            return Err(TrellisError::Malformed(format!(
                "{} levels for {} sections",
                levels.len(),
                sections.len()
            )));
        }
        if levels[0] != 1 {
            return Err(TrellisError::Malformed(
                "level 0 must hold exactly the root".into(),
            ));
        }
        for (t, sec) in sections.iter_mut().enumerate() {
            for e in sec.iter() {
                if e.from as usize >= levels[t] || e.to as usize >= levels[t + 1] {
                    return Err(TrellisError::Malformed(format!(
                        "edge {e:?} out of range in section {t}"
                    )));
                }
            }
            sec.sort_unstable();
            sec.dedup();
        }
        if goal_labels.len() != *levels.last().unwrap() {
            return Err(TrellisError::Malformed(
                "one goal label per final vertex required".into(),
            ));
        }
        Ok(Trellis {
            levels,
            sections,
            goal_labels,
            label_bits,
            vertex_labels: None,
        })
    }

    pub(crate) fn with_vertex_labels(mut self, labels: Vec<Vec<u64>>) -> Self {
        debug_assert!(labels.iter().map(Vec::len).eq(self.levels.iter().copied()));
        self.vertex_labels = Some(labels);
        self
    }

    /// Straight-line trellis of the all-identity word.
    pub fn identity(depth: usize) -> Result<Self, TrellisError> {
        let sections = (0..depth)
            .map(|_| {
                vec![Edge {
                    from: 0,
                    label: Symbol::I,
                    to: 0,
                }]
            })
            .collect();
        Trellis::from_parts(vec![1; depth + 1], sections, vec![0], 0)
    }

    pub fn depth(&self) -> usize {
        self.sections.len()
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.levels
    }

    pub fn section(&self, t: usize) -> &[Edge] {
        &self.sections[t]
    }

    pub fn sections(&self) -> &[Vec<Edge>] {
        &self.sections
    }

    pub fn goal_labels(&self) -> &[u64] {
        &self.goal_labels
    }

    pub fn num_goals(&self) -> usize {
        self.goal_labels.len()
    }

    /// Number of bits used by goal labels.
    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    /// Optional per-vertex labels (partial syndromes for BCJR-Wolf trellises).
    pub fn vertex_labels(&self) -> Option<&[Vec<u64>]> {
        self.vertex_labels.as_deref()
    }

    pub fn num_vertices(&self) -> usize {
        self.levels.iter().sum()
    }

    pub fn num_edges(&self) -> usize {
        self.sections.iter().map(Vec::len).sum()
    }

    pub fn complexity(&self) -> ComplexityReport {
        let v = self.num_vertices();
        let e = self.num_edges();
        ComplexityReport {
            num_vertices: v,
            num_edges: e,
            viterbi_cost: 2 * e as i64 - v as i64,
            state_profile: self.levels.clone(),
            edge_profile: self.sections.iter().map(Vec::len).collect(),
        }
    }

    /// Offsets of each vertex's outgoing edges within section `t`.
    pub(crate) fn out_offsets(&self, t: usize) -> Vec<usize> {
        let mut off = vec![0usize; self.levels[t] + 1];
        for e in &self.sections[t] {
            off[e.from as usize + 1] += 1;
        }
        for i in 0..self.levels[t] {
            off[i + 1] += off[i];
        }
        off
    }

    /// No vertex has two outgoing, or two incoming, edges with the same label.
    pub fn is_biproper(&self) -> bool {
        self.sections.iter().all(|sec| {
            // sorted by (from, label, to)
            let forward = sec
                .windows(2)
                .all(|w| (w[0].from, w[0].label) != (w[1].from, w[1].label));
            let mut back: Vec<(u32, Symbol)> = sec.iter().map(|e| (e.to, e.label)).collect();
            back.sort_unstable();
            forward && back.windows(2).all(|w| w[0] != w[1])
        })
    }

    fn live_vertices(&self) -> Vec<Vec<bool>> {
        let depth = self.depth();
        let mut fwd: Vec<Vec<bool>> = self.levels.iter().map(|&s| vec![false; s]).collect();
        fwd[0][0] = true;
        for t in 0..depth {
            for e in &self.sections[t] {
                if fwd[t][e.from as usize] {
                    fwd[t + 1][e.to as usize] = true;
                }
            }
        }
        let mut bwd: Vec<Vec<bool>> = self.levels.iter().map(|&s| vec![false; s]).collect();
        bwd[depth].iter_mut().for_each(|b| *b = true);
        for t in (0..depth).rev() {
            for e in &self.sections[t] {
                if bwd[t + 1][e.to as usize] {
                    bwd[t][e.from as usize] = true;
                }
            }
        }
        fwd.iter()
            .zip(&bwd)
            .map(|(f, b)| f.iter().zip(b).map(|(x, y)| *x && *y).collect())
            .collect()
    }

    /// Every vertex lies on a root-to-goal path.
    pub fn is_reduced(&self) -> bool {
        self.live_vertices().iter().all(|l| l.iter().all(|&b| b))
    }

    /// Keeps only the vertices on some root-to-goal path.
    pub fn reduce(&self) -> Trellis {
        let live = self.live_vertices();
        self.retain_vertices(&live)
    }

    fn retain_vertices(&self, keep: &[Vec<bool>]) -> Trellis {
        let maps: Vec<Vec<Option<u32>>> = keep
            .iter()
            .map(|k| {
                let mut next = 0u32;
                k.iter()
                    .map(|&b| {
                        b.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let levels: Vec<usize> = keep
            .iter()
            .map(|k| k.iter().filter(|&&b| b).count())
            .collect();
        let sections = self
            .sections
            .iter()
            .enumerate()
            .map(|(t, sec)| {
                sec.iter()
                    .filter_map(|e| {
                        Some(Edge {
                            from: maps[t][e.from as usize]?,
                            label: e.label,
                            to: maps[t + 1][e.to as usize]?,
                        })
                    })
                    .collect()
            })
            .collect();
        let depth = self.depth();
        let goal_labels = self
            .goal_labels
            .iter()
            .zip(&keep[depth])
            .filter(|(_, &k)| k)
            .map(|(g, _)| *g)
            .collect();
        let vertex_labels = self.vertex_labels.as_ref().map(|vl| {
            vl.iter()
                .zip(keep)
                .map(|(l, k)| {
                    l.iter()
                        .zip(k)
                        .filter(|(_, &b)| b)
                        .map(|(x, _)| *x)
                        .collect()
                })
                .collect()
        });
        Trellis {
            levels,
            sections,
            goal_labels,
            label_bits: self.label_bits,
            vertex_labels,
        }
    }

    /// Drops the goals whose label fails `keep`, then reduces.
    pub fn restrict_goals(&self, keep: impl Fn(u64) -> bool) -> Trellis {
        let depth = self.depth();
        let mut live = self.live_vertices();
        for (i, &g) in self.goal_labels.iter().enumerate() {
            if !keep(g) {
                live[depth][i] = false;
            }
        }
        // A second sweep removes whatever only led to dropped goals.
        let t = self.retain_vertices(&live);
        t.reduce()
    }

    /// Replaces every goal label `g` by `f(g)`.
    pub fn map_goal_labels(&self, label_bits: usize, f: impl Fn(u64) -> u64) -> Trellis {
        let mut t = self.clone();
        t.goal_labels = t.goal_labels.iter().map(|&g| f(g)).collect();
        t.label_bits = label_bits;
        t
    }

    /// Goal labels are pairwise distinct.
    pub fn has_distinct_goal_labels(&self) -> bool {
        let mut g = self.goal_labels.clone();
        g.sort_unstable();
        g.windows(2).all(|w| w[0] != w[1])
    }

    /// Multiplies every label of section `t` by `rho[t]`.
    pub fn relabel(&self, rho: &PauliVector) -> Result<Trellis, TrellisError> {
        if rho.len() != self.depth() {
            return Err(TrellisError::DepthMismatch {
                left: self.depth(),
                right: rho.len(),
            });
        }
        let mut t = self.clone();
        for (i, sec) in t.sections.iter_mut().enumerate() {
            let r = Symbol::Pauli(rho.get(i));
            for e in sec.iter_mut() {
                e.label = e.label.mul(r).ok_or(TrellisError::AlphabetMismatch {
                    section: i,
                    left: e.label,
                    right: r,
                })?;
            }
            sec.sort_unstable();
        }
        Ok(t)
    }

    /// Canonical form: vertices renumbered in breadth-first discovery order
    /// from the root, visiting outgoing edges by label. Metadata is dropped.
    pub fn canonical(&self) -> Trellis {
        let depth = self.depth();
        let mut order: Vec<u32> = vec![0];
        let mut maps: Vec<Vec<u32>> = Vec::with_capacity(depth + 1);
        let mut m0 = vec![u32::MAX; self.levels[0]];
        m0[0] = 0;
        maps.push(m0);
        for t in 0..depth {
            let off = self.out_offsets(t);
            let sec = &self.sections[t];
            let mut map = vec![u32::MAX; self.levels[t + 1]];
            let mut next_order = Vec::with_capacity(self.levels[t + 1]);
            for &v in &order {
                let mut out: Vec<&Edge> =
                    sec[off[v as usize]..off[v as usize + 1]].iter().collect();
                out.sort_by_key(|e| (e.label, e.to));
                for e in out {
                    if map[e.to as usize] == u32::MAX {
                        map[e.to as usize] = next_order.len() as u32;
                        next_order.push(e.to);
                    }
                }
            }
            for v in 0..self.levels[t + 1] as u32 {
                if map[v as usize] == u32::MAX {
                    map[v as usize] = next_order.len() as u32;
                    next_order.push(v);
                }
            }
            maps.push(map);
            order = next_order;
        }
        let mut sections: Vec<Vec<Edge>> = self
            .sections
            .iter()
            .enumerate()
            .map(|(t, sec)| {
                sec.iter()
                    .map(|e| Edge {
                        from: maps[t][e.from as usize],
                        label: e.label,
                        to: maps[t + 1][e.to as usize],
                    })
                    .collect()
            })
            .collect();
        sections.iter_mut().for_each(|s| s.sort_unstable());
        let mut goal_labels = vec![0; self.levels[depth]];
        for (old, &g) in self.goal_labels.iter().enumerate() {
            goal_labels[maps[depth][old] as usize] = g;
        }
        Trellis {
            levels: self.levels.clone(),
            sections,
            goal_labels,
            label_bits: self.label_bits,
            vertex_labels: None,
        }
    }

    /// Equal canonical forms (vertex ids, edges and goal labels).
    pub fn is_isomorphic(&self, other: &Trellis) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.levels == b.levels && a.sections == b.sections && a.goal_labels == b.goal_labels
    }

    /// All root-to-goal label sequences with their goal labels, up to `limit` paths.
    pub fn paths(&self, limit: usize) -> Result<Vec<(Vec<Symbol>, u64)>, TrellisError> {
        let depth = self.depth();
        let offs: Vec<Vec<usize>> = (0..depth).map(|t| self.out_offsets(t)).collect();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, u32, Vec<Symbol>)> = vec![(0, 0, Vec::new())];
        while let Some((t, v, word)) = stack.pop() {
            if t == depth {
                if out.len() == limit {
                    return Err(TrellisError::TooLarge(format!("more than {limit} paths")));
                }
                out.push((word, self.goal_labels[v as usize]));
                continue;
            }
            let sec = &self.sections[t];
            for e in sec[offs[t][v as usize]..offs[t][v as usize + 1]]
                .iter()
                .rev()
            {
                let mut w = word.clone();
                w.push(e.label);
                stack.push((t + 1, e.to, w));
            }
        }
        Ok(out)
    }

    /// Paths of a Pauli-labelled trellis as vectors, grouped by goal label.
    pub fn words_by_goal(
        &self,
        limit: usize,
    ) -> Result<HashMap<u64, Vec<PauliVector>>, TrellisError> {
        let mut map: HashMap<u64, Vec<PauliVector>> = HashMap::new();
        for (word, g) in self.paths(limit)? {
            let symbols = word
                .iter()
                .map(|s| {
                    s.pauli()
                        .ok_or_else(|| TrellisError::Malformed("tail symbol in word".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            map.entry(g)
                .or_default()
                .push(PauliVector::from_symbols(&symbols)?);
        }
        Ok(map)
    }
}
