use std::fmt;
use std::str::FromStr;

use crate::code::{restricted_tof, to_tof, JointCode, StabilizerCode};
use crate::pauli::PauliVector;

use super::{
    atomic_trellis, atomic_trellis_symbols, bcjr_wolf_over, disjoint_union, merge_twins,
    shannon_product, shannon_product_all, trivial_trellis, Edge, Symbol, Trellis, TrellisError,
};

/// Largest subgroup enumerated by the merging construction.
const MERGE_MAX_GENS: usize = 20;

/// Multi-goal trellis construction route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Extended code with tail symbols, trimmed after the product.
    ExtendedShannon,
    /// Product of multi-goal atomic trellises of the logical rows with the
    /// stabilizer trellis.
    AtomicMultigoal,
    /// Complete syndrome trellis restricted to the normalizer.
    BcjrWolf,
    /// Relabelled copies of the stabilizer trellis joined at the root, then
    /// twin merging.
    Merge,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::ExtendedShannon,
        Method::AtomicMultigoal,
        Method::BcjrWolf,
        Method::Merge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ExtendedShannon => "extended_shannon",
            Method::AtomicMultigoal => "atomic_multigoal",
            Method::BcjrWolf => "bcjr_wolf",
            Method::Merge => "merge",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = TrellisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s || m.name().replace('_', "-") == s)
            .ok_or_else(|| TrellisError::UnknownMethod(s.to_string()))
    }
}

/// Single-goal minimal trellis of the group generated by `gens` (TOF route).
pub fn build_subgroup_trellis(gens: &[PauliVector], n: usize) -> Result<Trellis, TrellisError> {
    if gens.is_empty() {
        return Trellis::identity(n);
    }
    let rows = to_tof(gens);
    let atomics: Vec<Trellis> = rows.iter().map(|g| atomic_trellis(g, false)).collect();
    shannon_product_all(&atomics)
}

/// Minimal single-goal trellis of N from atomic trellises of G(N) in TOF.
pub fn build_min_trellis_tof(code: &StabilizerCode) -> Result<Trellis, TrellisError> {
    build_subgroup_trellis(code.norm_gens(), code.n())
}

/// Minimal single-goal trellis of N as the zero-syndrome part of the
/// complete syndrome trellis.
pub fn build_min_trellis_bcjr(code: &StabilizerCode) -> Result<Trellis, TrellisError> {
    let t = super::bcjr_wolf(code.stab_gens())?;
    Ok(t.restrict_goals(|g| g == 0).map_goal_labels(0, |_| 0))
}

/// Single-goal minimal trellis of the outer code of a joint code.
pub fn build_outer_trellis(joint: &JointCode) -> Result<Trellis, TrellisError> {
    build_subgroup_trellis(&joint.outer_gens(), joint.n)
}

/// Minimal multi-goal trellis of the joint code (N, S): one goal per
/// logical coset, labelled by its logical coefficients.
pub fn build_multigoal_trellis(
    code: &StabilizerCode,
    method: Method,
) -> Result<Trellis, TrellisError> {
    build_joint_trellis(&code.joint(), method)
}

/// Minimal multi-goal trellis of a joint code with goals labelled by
/// [`JointCode::label_of`].
pub fn build_joint_trellis(joint: &JointCode, method: Method) -> Result<Trellis, TrellisError> {
    match method {
        Method::ExtendedShannon => extended_shannon(joint),
        Method::AtomicMultigoal => atomic_multigoal(joint),
        Method::BcjrWolf => bcjr_route(joint),
        Method::Merge => merge_route(joint),
    }
}

fn extended_shannon(joint: &JointCode) -> Result<Trellis, TrellisError> {
    let n = joint.n;
    let bits = joint.label_bits();
    let (s, l) = restricted_tof(&joint.sub_gens, &joint.coset_gens);
    if l.is_empty() {
        return build_subgroup_trellis(&s, n);
    }
    if l.len() > 64 {
        return Err(TrellisError::TooLarge(format!(
            "{} coset generators exceed 64 tail bits",
            l.len()
        )));
    }
    let tags: Vec<u64> = l.iter().map(|r| joint.label_of(r)).collect();
    let extended = |g: &PauliVector, tail: u64| -> Vec<Symbol> {
        g.symbols()
            .into_iter()
            .map(Symbol::Pauli)
            .chain([Symbol::Tail(tail)])
            .collect()
    };
    let mut atomics = Vec::with_capacity(s.len() + l.len());
    for g in &s {
        atomics.push(atomic_trellis_symbols(&extended(g, 0), false, 0, bits)?);
    }
    for (j, g) in l.iter().enumerate() {
        atomics.push(atomic_trellis_symbols(
            &extended(g, 1 << j),
            false,
            0,
            bits,
        )?);
    }
    let full = shannon_product_all(&atomics)?;
    drop_tail(&full, |tail| {
        (0..tags.len())
            .filter(|j| (tail >> j) & 1 == 1)
            .fold(0, |acc, j| acc ^ tags[j])
    })
}

/// Removes the last (tail) section; each vertex it leaves becomes a goal
/// labelled by `label(tail)` of its unique outgoing tail symbol.
fn drop_tail(t: &Trellis, label: impl Fn(u64) -> u64) -> Result<Trellis, TrellisError> {
    let depth = t.depth();
    let last = t.section(depth - 1);
    let size = t.level_sizes()[depth - 1];
    let mut goals = vec![None; size];
    let mut counts = vec![0usize; size];
    for e in last {
        counts[e.from as usize] += 1;
        let Symbol::Tail(tail) = e.label else {
            return Err(TrellisError::Malformed(
                "last section has no tail symbols".into(),
            ));
        };
        goals[e.from as usize] = Some(label(tail));
    }
    if let Some(v) = counts.iter().position(|&c| c != 1) {
        return Err(TrellisError::AmbiguousTail {
            depth: depth - 1,
            vertex: v as u32,
            count: counts[v],
        });
    }
    let levels = t.level_sizes()[..depth].to_vec();
    let sections: Vec<Vec<Edge>> = t.sections()[..depth - 1].to_vec();
    let goals: Vec<u64> = goals.into_iter().map(Option::unwrap).collect();
    Trellis::from_parts(levels, sections, goals, t.label_bits())
}

fn atomic_multigoal(joint: &JointCode) -> Result<Trellis, TrellisError> {
    let n = joint.n;
    let bits = joint.label_bits();
    let (s, l) = restricted_tof(&joint.sub_gens, &joint.coset_gens);
    let ts = build_subgroup_trellis(&s, n)?;
    if l.is_empty() {
        return Ok(ts);
    }
    let atomics = l
        .iter()
        .map(|g| {
            let symbols: Vec<Symbol> = g.symbols().into_iter().map(Symbol::Pauli).collect();
            atomic_trellis_symbols(&symbols, true, joint.label_of(g), bits)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let tl = shannon_product_all(&atomics)?;
    shannon_product(&tl, &ts)
}

fn bcjr_route(joint: &JointCode) -> Result<Trellis, TrellisError> {
    let checks: Vec<PauliVector> = joint
        .outer_checks
        .iter()
        .chain(&joint.coset_checks)
        .copied()
        .collect();
    if checks.is_empty() {
        // no checks at all: the outer code is every word over the alphabet
        let sections = (0..joint.n)
            .map(|_| {
                joint
                    .alphabet
                    .symbols()
                    .iter()
                    .map(|&a| Edge {
                        from: 0,
                        label: Symbol::Pauli(a),
                        to: 0,
                    })
                    .collect()
            })
            .collect();
        return Trellis::from_parts(vec![1; joint.n + 1], sections, vec![0], 0);
    }
    let r = joint.outer_checks.len();
    let outer_mask = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
    let t = bcjr_wolf_over(&checks, joint.alphabet)?;
    let t = t.restrict_goals(|g| g & outer_mask == 0);
    Ok(t.map_goal_labels(joint.label_bits(), |g| if r == 64 { 0 } else { g >> r }))
}

fn merge_route(joint: &JointCode) -> Result<Trellis, TrellisError> {
    let n = joint.n;
    if joint.sub_gens.len() > MERGE_MAX_GENS || joint.coset_gens.len() > MERGE_MAX_GENS {
        return Err(TrellisError::TooLarge(format!(
            "merging enumerates 2^{} words; the cap is 2^{MERGE_MAX_GENS}",
            joint.sub_gens.len()
        )));
    }
    let words: Vec<(PauliVector, u64)> = subgroup_elements(&joint.sub_gens, n)
        .into_iter()
        .map(|w| (w, 0))
        .collect();
    let ts = merge_twins(&trivial_trellis(&words, 0)?)?;
    if joint.coset_gens.is_empty() {
        return Ok(ts);
    }
    let copies = (0..joint.num_cosets() as u64)
        .map(|c| {
            Ok(ts
                .relabel(&joint.coset_rep(c))?
                .map_goal_labels(joint.label_bits(), |_| c))
        })
        .collect::<Result<Vec<_>, TrellisError>>()?;
    merge_twins(&disjoint_union(&copies)?)
}

/// All products of subsets of `gens`, in Gray-code order.
fn subgroup_elements(gens: &[PauliVector], n: usize) -> Vec<PauliVector> {
    let mut cur = PauliVector::identity(n);
    let mut out = vec![cur];
    for i in 1u64..(1 << gens.len()) {
        cur *= gens[i.trailing_zeros() as usize];
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(list: &[&str]) -> StabilizerCode {
        StabilizerCode::new(list.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!(matches!(
            "viterbi".parse::<Method>(),
            Err(TrellisError::UnknownMethod(_))
        ));
    }

    #[test]
    fn normalizer_trellis_of_422() {
        let c = code(&["XXXX", "ZZZZ"]);
        let a = build_min_trellis_tof(&c).unwrap();
        let b = build_min_trellis_bcjr(&c).unwrap();
        assert_eq!(a.level_sizes(), &[1, 4, 4, 4, 1]);
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn all_routes_agree_on_422() {
        let c = code(&["XXXX", "ZZZZ"]);
        let ts: Vec<Trellis> = Method::ALL
            .iter()
            .map(|&m| build_multigoal_trellis(&c, m).unwrap())
            .collect();
        assert_eq!(ts[0].level_sizes(), &[1, 4, 16, 64, 16]);
        for t in &ts {
            assert!(t.is_biproper());
            assert_eq!(t.num_goals(), 16);
            assert!(t.is_isomorphic(&ts[0]));
        }
    }

    #[test]
    fn k_zero_code() {
        let c = code(&["Z"]);
        for m in Method::ALL {
            let t = build_multigoal_trellis(&c, m).unwrap();
            assert_eq!(t.num_goals(), 1);
            assert_eq!(t.section(0).len(), 2, "{m}");
        }
    }
}
