use crate::gf2::{self, Echelon};
use crate::pauli::{BinaryVector, PauliVector};

use super::{Alphabet, CodeError, JointCode, PauliMatrix, StabilizerCode};

/// A CSS code `S_X = X^{rows of h1}`, `S_Z = Z^{rows of h2}`.
///
/// `lx_gens[i]` and `lz_gens[j]` anticommute iff `i == j`. The base code's
/// stabilizers are `sx_gens` followed by `sz_gens`, and its logical
/// generators interleave `lx_0, lz_0, lx_1, lz_1, ...`.
#[derive(Debug, Clone)]
pub struct CssCode {
    base: StabilizerCode,
    h1: Vec<BinaryVector>,
    h2: Vec<BinaryVector>,
    sx_gens: PauliMatrix,
    sz_gens: PauliMatrix,
    nx_gens: PauliMatrix,
    nz_gens: PauliMatrix,
    lx_gens: PauliMatrix,
    lz_gens: PauliMatrix,
}

/// Pairs up `xs` and `zs` so that `xs[i] . zs[j] = [i == j]`.
fn dual_pairs(
    mut xs: Vec<BinaryVector>,
    mut zs: Vec<BinaryVector>,
) -> (Vec<BinaryVector>, Vec<BinaryVector>) {
    assert_eq!(xs.len(), zs.len());
    for i in 0..xs.len() {
        let j = (i..zs.len())
            .find(|&j| xs[i].dot(&zs[j]))
            .expect("logical complements pair non-degenerately");
        zs.swap(i, j);
        for m in 0..xs.len() {
            if m != i && xs[m].dot(&zs[i]) {
                let xi = xs[i];
                xs[m] ^= xi;
            }
        }
        for m in 0..zs.len() {
            if m != i && xs[i].dot(&zs[m]) {
                let zi = zs[i];
                zs[m] ^= zi;
            }
        }
    }
    (xs, zs)
}

/// Basis of `space` modulo `sub` (complement vectors taken from `space`).
fn complement(space: &[BinaryVector], sub: &[BinaryVector]) -> Vec<BinaryVector> {
    let mut e: Echelon<BinaryVector, ()> = Echelon::new();
    for &s in sub {
        let _ = e.insert(s, ());
    }
    space
        .iter()
        .copied()
        .filter(|&v| e.insert(v, ()).is_ok())
        .collect()
}

/// Solves `rows . v = target` (one equation per row) for `v` of length `n`.
fn solve_binary(rows: &[BinaryVector], target: BinaryVector, n: usize) -> Option<BinaryVector> {
    let m = rows.len();
    let mut e: Echelon<BinaryVector, BinaryVector> = Echelon::new();
    for j in 0..n {
        let mut col = BinaryVector::zeros(m);
        for (i, r) in rows.iter().enumerate() {
            col.set(i, r.get(j));
        }
        let _ = e.insert(col, BinaryVector::unit(n, j));
    }
    e.solve(target, BinaryVector::zeros(n))
}

/// Pure-type partners: `t_i . h[j] = [i == j]` and `t_i . l = 0` for each `l` in `avoid`.
fn partners(h: &[BinaryVector], avoid: &[BinaryVector], n: usize) -> Vec<BinaryVector> {
    let rows: Vec<BinaryVector> = h.iter().chain(avoid).copied().collect();
    (0..h.len())
        .map(|i| {
            solve_binary(&rows, BinaryVector::unit(rows.len(), i), n)
                .expect("independent checks have pure-type partners")
        })
        .collect()
}

fn check_rows(h: &[BinaryVector], n: usize) -> Result<(), CodeError> {
    for (i, r) in h.iter().enumerate() {
        if r.len() != n {
            return Err(CodeError::WidthMismatch {
                row: i,
                expected: n,
                found: r.len(),
            });
        }
    }
    if !gf2::is_independent(h) {
        return Err(CodeError::Dependent);
    }
    Ok(())
}

/// Builds the CSS code of parity-check matrices `h1` (X-type stabilizers)
/// and `h2` (Z-type stabilizers) on `n` qubits.
pub fn css_split(h1: &[BinaryVector], h2: &[BinaryVector], n: usize) -> Result<CssCode, CodeError> {
    if n == 0 || n > crate::pauli::MAX_QUBITS {
        return Err(CodeError::Pauli(crate::pauli::PauliError::BadLength(n)));
    }
    if h1.is_empty() && h2.is_empty() {
        return Err(CodeError::Empty);
    }
    check_rows(h1, n)?;
    check_rows(h2, n)?;
    for (i, a) in h1.iter().enumerate() {
        for (j, b) in h2.iter().enumerate() {
            if a.dot(b) {
                return Err(CodeError::ContainmentViolated {
                    h1_row: i,
                    h2_row: j,
                });
            }
        }
    }
    let sx_gens: PauliMatrix = h1.iter().map(PauliVector::x_type).collect();
    let sz_gens: PauliMatrix = h2.iter().map(PauliVector::z_type).collect();

    // Z-type vectors commuting with S_X form ker(h1); X-type commuting with S_Z form ker(h2).
    let ker1 = gf2::binary_nullspace(h1, n);
    let ker2 = gf2::binary_nullspace(h2, n);
    let nz_gens: PauliMatrix = ker1.iter().map(PauliVector::z_type).collect();
    let nx_gens: PauliMatrix = ker2.iter().map(PauliVector::x_type).collect();

    let (lx, lz) = dual_pairs(complement(&ker2, h1), complement(&ker1, h2));
    if lx.len() > 32 {
        return Err(CodeError::TooManyLogicals(2 * lx.len()));
    }
    let lx_gens: PauliMatrix = lx.iter().map(PauliVector::x_type).collect();
    let lz_gens: PauliMatrix = lz.iter().map(PauliVector::z_type).collect();

    // Z-type partners of the X checks (avoiding the X logicals), X-type partners of the Z checks.
    let tz: Vec<BinaryVector> = partners(h1, &lx, n);
    let mut tx: Vec<BinaryVector> = partners(h2, &lz, n);
    // Make the two families commute: fixing t_x[j] by a row of h1 leaves its pairing intact.
    for (i, zi) in tz.iter().enumerate() {
        for xj in tx.iter_mut() {
            if zi.dot(xj) {
                *xj ^= h1[i];
            }
        }
    }
    let destabilizers: PauliMatrix = tz
        .iter()
        .map(PauliVector::z_type)
        .chain(tx.iter().map(PauliVector::x_type))
        .collect();
    let stab: PauliMatrix = sx_gens.iter().chain(&sz_gens).copied().collect();
    let logicals: PauliMatrix = lx_gens
        .iter()
        .zip(&lz_gens)
        .flat_map(|(a, b)| [*a, *b])
        .collect();
    let base = StabilizerCode::from_parts(stab, logicals, destabilizers)?;
    Ok(CssCode {
        base,
        h1: h1.to_vec(),
        h2: h2.to_vec(),
        sx_gens,
        sz_gens,
        nx_gens,
        nz_gens,
        lx_gens,
        lz_gens,
    })
}

impl CssCode {
    pub fn base(&self) -> &StabilizerCode {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    pub fn h1(&self) -> &[BinaryVector] {
        &self.h1
    }

    pub fn h2(&self) -> &[BinaryVector] {
        &self.h2
    }

    pub fn sx_gens(&self) -> &[PauliVector] {
        &self.sx_gens
    }

    pub fn sz_gens(&self) -> &[PauliVector] {
        &self.sz_gens
    }

    pub fn nx_gens(&self) -> &[PauliVector] {
        &self.nx_gens
    }

    pub fn nz_gens(&self) -> &[PauliVector] {
        &self.nz_gens
    }

    pub fn lx_gens(&self) -> &[PauliVector] {
        &self.lx_gens
    }

    pub fn lz_gens(&self) -> &[PauliVector] {
        &self.lz_gens
    }

    /// Syndrome against the X-type stabilizers (sees the Z part of `e`).
    pub fn syndrome_x(&self, e: &PauliVector) -> Result<BinaryVector, CodeError> {
        Ok(crate::pauli::syndrome(e, &self.sx_gens)?)
    }

    /// Syndrome against the Z-type stabilizers (sees the X part of `e`).
    pub fn syndrome_z(&self, e: &PauliVector) -> Result<BinaryVector, CodeError> {
        Ok(crate::pauli::syndrome(e, &self.sz_gens)?)
    }

    /// Z-type vector with X-check syndrome `sigma_x`.
    pub fn representative_z(&self, sigma_x: &BinaryVector) -> Result<PauliVector, CodeError> {
        if sigma_x.len() != self.sx_gens.len() {
            return Err(CodeError::SyndromeLength {
                expected: self.sx_gens.len(),
                found: sigma_x.len(),
            });
        }
        let full = sigma_x.concat(&BinaryVector::zeros(self.sz_gens.len()));
        self.base.representative_from_syndrome(&full)
    }

    /// X-type vector with Z-check syndrome `sigma_z`.
    pub fn representative_x(&self, sigma_z: &BinaryVector) -> Result<PauliVector, CodeError> {
        if sigma_z.len() != self.sz_gens.len() {
            return Err(CodeError::SyndromeLength {
                expected: self.sz_gens.len(),
                found: sigma_z.len(),
            });
        }
        let full = BinaryVector::zeros(self.sx_gens.len()).concat(sigma_z);
        self.base.representative_from_syndrome(&full)
    }

    /// Joint code `(N_Z, S_Z)` over `{I, Z}`, decoded against the X checks.
    pub fn joint_x(&self) -> JointCode {
        JointCode {
            n: self.n(),
            alphabet: Alphabet::ZOnly,
            sub_gens: self.sz_gens.clone(),
            coset_gens: self.lz_gens.clone(),
            outer_checks: self.sx_gens.clone(),
            coset_checks: self.lx_gens.clone(),
        }
    }

    /// Joint code `(N_X, S_X)` over `{I, X}`, decoded against the Z checks.
    pub fn joint_z(&self) -> JointCode {
        JointCode {
            n: self.n(),
            alphabet: Alphabet::XOnly,
            sub_gens: self.sx_gens.clone(),
            coset_gens: self.lx_gens.clone(),
            outer_checks: self.sz_gens.clone(),
            coset_checks: self.lz_gens.clone(),
        }
    }
}
