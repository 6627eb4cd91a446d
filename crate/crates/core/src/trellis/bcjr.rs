use std::collections::HashMap;

use crate::code::Alphabet;
use crate::pauli::{PauliVector, MAX_QUBITS};

use super::{Edge, Symbol, Trellis, TrellisError};

/// Complete syndrome trellis of `checks` over the full Pauli alphabet.
pub fn bcjr_wolf(checks: &[PauliVector]) -> Result<Trellis, TrellisError> {
    bcjr_wolf_over(checks, Alphabet::Full)
}

/// Complete syndrome trellis over `alphabet`: each vertex carries the partial
/// syndrome `f(v)` (bit `i` for check `i`), and every reachable syndrome is a
/// goal labelled by that syndrome.
pub fn bcjr_wolf_over(checks: &[PauliVector], alphabet: Alphabet) -> Result<Trellis, TrellisError> {
    let n = checks.first().ok_or(TrellisError::EmptyChecks)?.len();
    if checks.len() > 64 {
        return Err(TrellisError::TooLarge(format!(
            "{} checks exceed the 64-bit state label",
            checks.len()
        )));
    }
    debug_assert!(n <= MAX_QUBITS);
    crate::code::check_width(checks, n)?;
    let symbols = alphabet.symbols();
    // column contributions: cols[t][a] = bits of (h_i,t * a)
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|t| {
            symbols
                .iter()
                .map(|&a| {
                    let probe = PauliVector::single(n, t, a);
                    checks
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (i, h)| acc | (u64::from(h.star(&probe)) << i))
                })
                .collect()
        })
        .collect();
    let mut states: Vec<u64> = vec![0];
    let mut labels = vec![states.clone()];
    let mut levels = vec![1usize];
    let mut sections = Vec::with_capacity(n);
    for col in &cols {
        let mut ids: HashMap<u64, u32> = HashMap::new();
        let mut next: Vec<u64> = Vec::new();
        let mut sec = Vec::with_capacity(states.len() * symbols.len());
        for (v, &f) in states.iter().enumerate() {
            for (ai, &a) in symbols.iter().enumerate() {
                let g = f ^ col[ai];
                let to = *ids.entry(g).or_insert_with(|| {
                    next.push(g);
                    next.len() as u32 - 1
                });
                sec.push(Edge {
                    from: v as u32,
                    label: Symbol::Pauli(a),
                    to,
                });
            }
        }
        levels.push(next.len());
        sections.push(sec);
        labels.push(next.clone());
        states = next;
    }
    let goals = states.clone();
    Ok(Trellis::from_parts(levels, sections, goals, checks.len())?.with_vertex_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::partial_syndrome;

    fn pv(s: &str) -> PauliVector {
        s.parse().unwrap()
    }

    #[test]
    fn single_z_check() {
        let t = bcjr_wolf(&[pv("Z")]).unwrap();
        assert_eq!(t.level_sizes(), &[1, 2]);
        let words = t.words_by_goal(10).unwrap();
        let mut g0 = words[&0].clone();
        g0.sort();
        let mut g1 = words[&1].clone();
        g1.sort();
        assert_eq!(g0, vec![pv("I"), pv("Z")]);
        assert_eq!(g1, vec![pv("X"), pv("Y")]);
    }

    #[test]
    fn complete_trellis_of_422() {
        let checks = [pv("XXXX"), pv("ZZZZ")];
        let t = bcjr_wolf(&checks).unwrap();
        assert_eq!(t.num_goals(), 4);
        assert!(t.is_biproper());
        // vertex labels are partial syndromes of every path through them
        let labels = t.vertex_labels().unwrap().to_vec();
        for (word, goal) in t.paths(1 << 10).unwrap() {
            let symbols: Vec<_> = word.iter().map(|s| s.pauli().unwrap()).collect();
            let e = PauliVector::from_symbols(&symbols).unwrap();
            let mut v = 0u32;
            for tt in 0..4 {
                let edge = t
                    .section(tt)
                    .iter()
                    .find(|ed| ed.from == v && ed.label == word[tt])
                    .unwrap();
                v = edge.to;
                let s = partial_syndrome(&e, &checks, tt + 1).unwrap();
                assert_eq!(labels[tt + 1][v as usize], s.bits() as u64);
            }
            assert_eq!(
                goal,
                crate::pauli::syndrome(&e, &checks).unwrap().bits() as u64
            );
        }
        assert!(bcjr_wolf(&[]).is_err());
    }
}
