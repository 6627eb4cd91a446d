use std::collections::HashMap;

use crate::pauli::PauliVector;

use super::{Edge, Symbol, Trellis, TrellisError};

/// Minimal trellis of the two-word code `{identity, g}`.
///
/// Single-goal: the `g` path leaves the identity path at the left index of
/// `g` and rejoins it after the right index. Multi-goal: the `g` path never
/// rejoins and ends in a second goal labelled `tag`.
pub fn atomic_trellis_symbols(
    g: &[Symbol],
    multi_goal: bool,
    tag: u64,
    label_bits: usize,
) -> Result<Trellis, TrellisError> {
    let depth = g.len();
    if depth == 0 {
        return Err(TrellisError::ZeroDepth);
    }
    let identity_of = |s: Symbol| match s {
        Symbol::Pauli(_) => Symbol::I,
        Symbol::Tail(_) => Symbol::Tail(0),
    };
    let support: Vec<usize> = (0..depth).filter(|&t| !g[t].is_identity()).collect();
    let (Some(&l), Some(&r)) = (support.first(), support.last()) else {
        let sections = g
            .iter()
            .map(|&s| {
                vec![Edge {
                    from: 0,
                    label: identity_of(s),
                    to: 0,
                }]
            })
            .collect();
        return Trellis::from_parts(vec![1; depth + 1], sections, vec![0], label_bits);
    };
    // vertex 1 of level t exists while the g path is separated
    let split_end = if multi_goal { depth } else { r };
    let mut levels = vec![1usize; depth + 1];
    for lv in levels.iter_mut().take(split_end + 1).skip(l + 1) {
        *lv = 2;
    }
    let mut sections = Vec::with_capacity(depth);
    for (t, &sym) in g.iter().enumerate() {
        let id = identity_of(sym);
        let mut sec = vec![Edge {
            from: 0,
            label: id,
            to: 0,
        }];
        let from = if t > l && t <= split_end { 1 } else { 0 };
        let to = if t >= l && t < split_end || (multi_goal && t >= l) {
            1
        } else {
            0
        };
        if t >= l && (t <= r || multi_goal) {
            sec.push(Edge {
                from,
                label: sym,
                to,
            });
        }
        sections.push(sec);
    }
    let goals = if levels[depth] == 2 {
        vec![0, tag]
    } else {
        vec![0]
    };
    Trellis::from_parts(levels, sections, goals, label_bits)
}

/// Atomic trellis of a Pauli vector; the multi-goal variant labels the goal
/// of `g` with 1.
pub fn atomic_trellis(g: &PauliVector, multi_goal: bool) -> Trellis {
    let symbols: Vec<Symbol> = g.symbols().into_iter().map(Symbol::Pauli).collect();
    atomic_trellis_symbols(&symbols, multi_goal, 1, usize::from(multi_goal))
        .expect("Pauli vectors have positive length")
}

/// Sectionwise product: vertices are the reachable pairs, labels multiply,
/// and goal labels combine by XOR.
pub fn shannon_product(a: &Trellis, b: &Trellis) -> Result<Trellis, TrellisError> {
    if a.depth() != b.depth() {
        return Err(TrellisError::DepthMismatch {
            left: a.depth(),
            right: b.depth(),
        });
    }
    let depth = a.depth();
    let mut levels = vec![1usize];
    let mut sections = Vec::with_capacity(depth);
    let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
    for t in 0..depth {
        let oa = a.out_offsets(t);
        let ob = b.out_offsets(t);
        let sa = a.section(t);
        let sb = b.section(t);
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut next: Vec<(u32, u32)> = Vec::new();
        let mut sec = Vec::new();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            for ea in &sa[oa[u as usize]..oa[u as usize + 1]] {
                for eb in &sb[ob[v as usize]..ob[v as usize + 1]] {
                    let label = ea
                        .label
                        .mul(eb.label)
                        .ok_or(TrellisError::AlphabetMismatch {
                            section: t,
                            left: ea.label,
                            right: eb.label,
                        })?;
                    let key = (ea.to, eb.to);
                    let to = *ids.entry(key).or_insert_with(|| {
                        next.push(key);
                        next.len() as u32 - 1
                    });
                    sec.push(Edge {
                        from: i as u32,
                        label,
                        to,
                    });
                }
            }
        }
        levels.push(next.len());
        sections.push(sec);
        pairs = next;
    }
    let goals = pairs
        .iter()
        .map(|&(u, v)| a.goal_labels()[u as usize] ^ b.goal_labels()[v as usize])
        .collect();
    let t = Trellis::from_parts(levels, sections, goals, a.label_bits().max(b.label_bits()))?;
    Ok(t.reduce())
}

/// Product of a nonempty list of trellises, folded left to right.
pub fn shannon_product_all(ts: &[Trellis]) -> Result<Trellis, TrellisError> {
    let (first, rest) = ts.split_first().ok_or(TrellisError::ZeroDepth)?;
    rest.iter()
        .try_fold(first.clone(), |acc, t| shannon_product(&acc, t))
}
