use std::collections::BTreeMap;

use crate::pauli::PauliVector;

use super::{Edge, Symbol, Trellis, TrellisError};

struct UnionFind {
    parent: Vec<u32>,
    merged: bool,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            merged: false,
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
            self.merged = true;
        }
    }
}

/// One chain of vertices per word, sharing the root; words with equal goal
/// labels share their goal vertex.
pub fn trivial_trellis(
    words: &[(PauliVector, u64)],
    label_bits: usize,
) -> Result<Trellis, TrellisError> {
    let n = words
        .first()
        .ok_or(TrellisError::Malformed("no words given".into()))?
        .0
        .len();
    let goal_ids: BTreeMap<u64, u32> = words
        .iter()
        .map(|w| w.1)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, g)| (g, i as u32))
        .collect();
    let m = words.len();
    let mut levels = vec![m; n + 1];
    levels[0] = 1;
    levels[n] = goal_ids.len();
    let mut sections = vec![Vec::with_capacity(m); n];
    for (w, (word, goal)) in words.iter().enumerate() {
        if word.len() != n {
            return Err(TrellisError::DepthMismatch {
                left: n,
                right: word.len(),
            });
        }
        for (t, sec) in sections.iter_mut().enumerate() {
            let from = if t == 0 { 0 } else { w as u32 };
            let to = if t + 1 == n { goal_ids[goal] } else { w as u32 };
            sec.push(Edge {
                from,
                label: Symbol::Pauli(word.get(t)),
                to,
            });
        }
    }
    Trellis::from_parts(
        levels,
        sections,
        goal_ids.keys().copied().collect(),
        label_bits,
    )
}

/// Union of trellises of equal depth with their roots identified.
pub fn disjoint_union(ts: &[Trellis]) -> Result<Trellis, TrellisError> {
    let depth = ts.first().ok_or(TrellisError::ZeroDepth)?.depth();
    let mut levels = vec![0usize; depth + 1];
    levels[0] = 1;
    let mut sections: Vec<Vec<Edge>> = vec![Vec::new(); depth];
    let mut goals = Vec::new();
    let mut bits = 0;
    for t in ts {
        if t.depth() != depth {
            return Err(TrellisError::DepthMismatch {
                left: depth,
                right: t.depth(),
            });
        }
        for (s, sec) in t.sections().iter().enumerate() {
            let from_off = if s == 0 { 0 } else { levels[s] as u32 };
            let to_off = levels[s + 1] as u32;
            sections[s].extend(sec.iter().map(|e| Edge {
                from: e.from + from_off,
                label: e.label,
                to: e.to + to_off,
            }));
        }
        for (l, size) in levels.iter_mut().enumerate().skip(1) {
            *size += t.level_sizes()[l];
        }
        goals.extend_from_slice(t.goal_labels());
        bits = bits.max(t.label_bits());
    }
    Trellis::from_parts(levels, sections, goals, bits)
}

/// Identifies the vertices of level `lvl` that share a union-find class.
fn apply_merge(t: &Trellis, lvl: usize, uf: &mut UnionFind) -> Result<Trellis, TrellisError> {
    let size = t.level_sizes()[lvl];
    let mut new_id = vec![u32::MAX; size];
    let mut next = 0u32;
    for v in 0..size as u32 {
        let r = uf.find(v);
        if new_id[r as usize] == u32::MAX {
            new_id[r as usize] = next;
            next += 1;
        }
        new_id[v as usize] = new_id[r as usize];
    }
    let depth = t.depth();
    let mut levels = t.level_sizes().to_vec();
    levels[lvl] = next as usize;
    let mut sections = t.sections().to_vec();
    if lvl > 0 {
        for e in sections[lvl - 1].iter_mut() {
            e.to = new_id[e.to as usize];
        }
    }
    if lvl < depth {
        for e in sections[lvl].iter_mut() {
            e.from = new_id[e.from as usize];
        }
    }
    let goals = if lvl == depth {
        let mut g = vec![None; next as usize];
        for (v, &label) in t.goal_labels().iter().enumerate() {
            let slot = &mut g[new_id[v] as usize];
            match *slot {
                None => *slot = Some(label),
                Some(other) if other != label => {
                    return Err(TrellisError::MergeConflict(other, label))
                }
                _ => {}
            }
        }
        g.into_iter().map(Option::unwrap).collect()
    } else {
        t.goal_labels().to_vec()
    };
    Trellis::from_parts(levels, sections, goals, t.label_bits())
}

/// Merges twin vertices until none remain: targets of equally labelled edges
/// leaving one vertex, and sources of equally labelled edges entering one
/// vertex. For a rectangular (joint) code the result is biproper and
/// presents the same code.
pub fn merge_twins(t: &Trellis) -> Result<Trellis, TrellisError> {
    let mut t = t.reduce();
    t.vertex_labels = None;
    let depth = t.depth();
    loop {
        let mut changed = false;
        for lvl in 1..=depth {
            let mut uf = UnionFind::new(t.level_sizes()[lvl]);
            for w in t.section(lvl - 1).windows(2) {
                if w[0].from == w[1].from && w[0].label == w[1].label {
                    uf.union(w[0].to, w[1].to);
                }
            }
            if uf.merged {
                t = apply_merge(&t, lvl, &mut uf)?;
                changed = true;
            }
        }
        for lvl in (0..depth).rev() {
            let mut uf = UnionFind::new(t.level_sizes()[lvl]);
            let mut back: Vec<(u32, Symbol, u32)> = t
                .section(lvl)
                .iter()
                .map(|e| (e.to, e.label, e.from))
                .collect();
            back.sort_unstable();
            for w in back.windows(2) {
                if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                    uf.union(w[0].2, w[1].2);
                }
            }
            if uf.merged {
                t = apply_merge(&t, lvl, &mut uf)?;
                changed = true;
            }
        }
        if !changed {
            return Ok(t);
        }
    }
}
