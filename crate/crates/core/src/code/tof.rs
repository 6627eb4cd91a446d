//! Trellis-oriented forms of generator matrices.

use crate::pauli::{Pauli, PauliVector, MAX_QUBITS};

use super::{check_width, CodeError, PauliMatrix, StabilizerCode};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn end(v: &PauliVector, side: Side) -> Option<usize> {
    match side {
        Side::Left => v.left_index(),
        Side::Right => v.right_index(),
    }
}

/// Rows whose left (right) index is `t`.
fn rows_at(g: &[PauliVector], t: usize, side: Side) -> Vec<usize> {
    (0..g.len())
        .filter(|&i| end(&g[i], side) == Some(t))
        .collect()
}

/// First pair among `idx` with equal symbols at `t`.
fn equal_pair(g: &[PauliVector], idx: &[usize], t: usize) -> Option<(usize, usize)> {
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            if g[i].get(t) == g[j].get(t) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Row with the largest span among `idx`, lowest index on ties.
fn widest(g: &[PauliVector], idx: &[usize]) -> usize {
    let mut best = idx[0];
    for &i in &idx[1..] {
        if g[i].span_length() > g[best].span_length() {
            best = i;
        }
    }
    best
}

/// One replacement step of the conversion, if any applies at `(t, side)`.
fn tof_step(g: &mut [PauliVector], t: usize, side: Side) -> bool {
    let idx = rows_at(g, t, side);
    if idx.len() < 2 {
        return false;
    }
    if let Some((i, j)) = equal_pair(g, &idx, t) {
        let target = widest(g, &[i, j]);
        g[target] = g[i] * g[j];
        return true;
    }
    if idx.len() >= 3 {
        let three = &idx[..3];
        let target = widest(g, three);
        g[target] = g[three[0]] * g[three[1]] * g[three[2]];
        return true;
    }
    false
}

/// Converts independent rows to trellis-oriented form. Scans left indices in
/// ascending order, then right indices in descending order, applying the
/// first available replacement and restarting until none applies.
pub fn to_tof(g: &[PauliVector]) -> PauliMatrix {
    let mut g = g.to_vec();
    let Some(n) = g.first().map(|r| r.len()) else {
        return g;
    };
    loop {
        let changed = (0..n).any(|t| tof_step(&mut g, t, Side::Left))
            || (0..n).rev().any(|t| tof_step(&mut g, t, Side::Right));
        if !changed {
            return g;
        }
    }
}

fn side_ok(g: &[PauliVector], side: Side) -> bool {
    let Some(n) = g.first().map(|r| r.len()) else {
        return true;
    };
    (0..n).all(|t| {
        let idx = rows_at(g, t, side);
        match idx.len() {
            0 | 1 => true,
            2 => g[idx[0]].get(t) != g[idx[1]].get(t),
            _ => false,
        }
    })
}

/// At most two rows share any left index, and such two differ there.
pub fn has_l_property(g: &[PauliVector]) -> bool {
    side_ok(g, Side::Left)
}

/// Left and right conditions both hold.
pub fn is_tof(g: &[PauliVector]) -> bool {
    side_ok(g, Side::Left) && side_ok(g, Side::Right)
}

/// Brings `[sub; coset]` into restricted form: the `sub` block in TOF and the
/// whole stack with the left property. Only coset rows are modified by the
/// second stage, each by multiplying in other rows of the stack.
pub fn restricted_tof(sub: &[PauliVector], coset: &[PauliVector]) -> (PauliMatrix, PauliMatrix) {
    let s = to_tof(sub);
    let mut all: PauliMatrix = s.iter().chain(coset).copied().collect();
    let ns = s.len();
    let Some(n) = all.first().map(|r| r.len()) else {
        return (s, Vec::new());
    };
    'outer: loop {
        for t in 0..n {
            let idx = rows_at(&all, t, Side::Left);
            if idx.len() < 2 {
                continue;
            }
            if let Some((i, j)) = equal_pair(&all, &idx, t) {
                // the S block is already in TOF, so j is a coset row
                let target = if i >= ns { i } else { j };
                all[target] = all[i] * all[j];
                continue 'outer;
            }
            if idx.len() >= 3 {
                let three = &idx[..3];
                let target = *three.iter().find(|&&i| i >= ns).expect("S block is in TOF");
                all[target] = all[three[0]] * all[three[1]] * all[three[2]];
                continue 'outer;
            }
        }
        break;
    }
    let l = all.split_off(ns);
    (all, l)
}

/// `[G(S); G(L)]` in restricted trellis-oriented form.
pub fn to_restricted_tof(code: &StabilizerCode) -> PauliMatrix {
    let (s, l) = restricted_tof(code.stab_gens(), code.logical_gens());
    s.into_iter().chain(l).collect()
}

/// `[G(S) Q1; G(L) Q2]`: S rows padded with identity, logical row `j`
/// tagged with `X` at tail position `j`.
pub fn extend_joint(gs: &[PauliVector], gl: &[PauliVector]) -> Result<PauliMatrix, CodeError> {
    let n = match (gs.first(), gl.first()) {
        (Some(r), _) | (None, Some(r)) => r.len(),
        (None, None) => return Ok(Vec::new()),
    };
    check_width(gs, n)?;
    check_width(gl, n)?;
    let m = gl.len();
    if n + m > MAX_QUBITS {
        return Err(CodeError::WidthMismatch {
            row: 0,
            expected: MAX_QUBITS,
            found: n + m,
        });
    }
    if m == 0 {
        return Ok(gs.to_vec());
    }
    let pad = PauliVector::identity(m);
    let mut out: PauliMatrix = gs.iter().map(|r| r.concat(&pad)).collect();
    for (j, r) in gl.iter().enumerate() {
        out.push(r.concat(&PauliVector::single(m, j, Pauli::X)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2;

    fn rows(list: &[&str]) -> PauliMatrix {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn same_span(a: &[PauliVector], b: &[PauliVector]) -> bool {
        let r = gf2::rank(a);
        r == gf2::rank(b) && gf2::rank(&a.iter().chain(b).copied().collect::<Vec<_>>()) == r
    }

    #[test]
    fn already_tof() {
        let g = rows(&["XXII", "ZZII", "IXXI", "IZZI", "IIXX", "IIZZ"]);
        assert!(is_tof(&g));
        assert_eq!(to_tof(&g), g);
    }

    #[test]
    fn pair_reduction() {
        let g = rows(&["XXXX", "XXII"]);
        let t = to_tof(&g);
        assert_eq!(t, rows(&["IIXX", "XXII"]));
        assert!(is_tof(&t));
        assert!(same_span(&g, &t));
    }

    #[test]
    fn single_row_unchanged() {
        let g = rows(&["XZYX"]);
        assert_eq!(to_tof(&g), g);
    }

    #[test]
    fn restricted_form_of_422() {
        let code = StabilizerCode::new(rows(&["XXXX", "ZZZZ"])).unwrap();
        let g = to_restricted_tof(&code);
        assert_eq!(&g[..2], &rows(&["XXXX", "ZZZZ"])[..]);
        assert!(has_l_property(&g));
        assert!(same_span(&g, code.norm_gens()));
    }

    #[test]
    fn extension_shape() {
        let gs = rows(&["XXXX", "ZZZZ"]);
        let gl = rows(&["IXXI", "IIZZ", "IZZI", "IIXX"]);
        let g = extend_joint(&gs, &gl).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0].to_string(), "XXXXIIII");
        assert_eq!(g[2].to_string(), "IXXIXIII");
        assert_eq!(g[5].to_string(), "IIXXIIIX");
        assert!(gf2::is_independent(&g));
        assert_eq!(extend_joint(&gs, &[]).unwrap(), gs);
        assert!(extend_joint(&gs, &rows(&["XX"])).is_err());
    }
}
