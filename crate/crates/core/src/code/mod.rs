//! Stabilizer codes: generator validation, normalizer / logical / destabilizer
//! derivation, CSS splits, trellis-oriented forms and code files.

mod css;
mod file;
mod tof;

pub use css::{css_split, CssCode};
pub use file::{builtin_names, load_code, parse_code, LoadedCode, BUILTIN_CODES};
pub use tof::{extend_joint, has_l_property, is_tof, restricted_tof, to_restricted_tof, to_tof};

use thiserror::Error;

use crate::gf2::{self, Echelon};
use crate::pauli::{BinaryVector, Pauli, PauliError, PauliVector};

/// Rows of Pauli vectors sharing one width.
pub type PauliMatrix = Vec<PauliVector>;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("no stabilizer generators given")]
    Empty,
    #[error("row {row} has width {found}, expected {expected}")]
    WidthMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("classical containment violated: row {h1_row} of h1 and row {h2_row} of h2 have odd overlap")]
    ContainmentViolated { h1_row: usize, h2_row: usize },
    #[error("syndrome has length {found}, expected {expected}")]
    SyndromeLength { expected: usize, found: usize },
    #[error("invalid logical operators: {0}")]
    BadLogicals(String),
    #[error("code has {0} logical bits; at most 64 are supported")]
    TooManyLogicals(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot place {r} generators on {n} qubits")]
    BadShape { n: usize, r: usize },
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_width(rows: &[PauliVector], n: usize) -> Result<(), CodeError> {
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(CodeError::WidthMismatch {
                row: i,
                expected: n,
                found: r.len(),
            });
        }
    }
    Ok(())
}

/// A stabilizer code with its derived structure.
///
/// Logical generators come in anticommuting pairs `(l[2i], l[2i+1])` that
/// commute with everything else, and destabilizer `t[i]` anticommutes with
/// stabilizer `s[j]` iff `i == j`.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    stab_gens: PauliMatrix,
    norm_gens: PauliMatrix,
    logical_gens: PauliMatrix,
    destabilizers: PauliMatrix,
    stab_echelon: Echelon<PauliVector, ()>,
}

fn validate_stabilizers(stab_gens: &[PauliVector]) -> Result<usize, CodeError> {
    let first = stab_gens.first().ok_or(CodeError::Empty)?;
    let n = first.len();
    check_width(stab_gens, n)?;
    for i in 0..stab_gens.len() {
        for j in i + 1..stab_gens.len() {
            if stab_gens[i].star(&stab_gens[j]) {
                return Err(CodeError::NonCommuting(i, j));
            }
        }
    }
    if !gf2::is_independent(stab_gens) {
        return Err(CodeError::Dependent);
    }
    Ok(n)
}

/// Basis `X_0..X_{n-1}, Z_0..Z_{n-1}` of the Pauli group.
fn standard_basis(n: usize) -> Vec<PauliVector> {
    (0..n)
        .map(|j| PauliVector::single(n, j, Pauli::X))
        .chain((0..n).map(|j| PauliVector::single(n, j, Pauli::Z)))
        .collect()
}

fn syndrome_of(e: &PauliVector, checks: &[PauliVector]) -> BinaryVector {
    let mut s = BinaryVector::zeros(checks.len());
    for (i, c) in checks.iter().enumerate() {
        s.set(i, c.star(e));
    }
    s
}

/// Kernel basis of the star product against `checks`.
fn symplectic_kernel(checks: &[PauliVector], n: usize) -> PauliMatrix {
    let basis = standard_basis(n);
    let images: Vec<BinaryVector> = basis.iter().map(|b| syndrome_of(b, checks)).collect();
    gf2::kernel(&images, &basis)
}

/// Symplectic Gram-Schmidt of `pool` modulo `stab`: anticommuting pairs that
/// commute with every other pair.
fn symplectic_pairs(pool: &[PauliVector], stab: &[PauliVector]) -> PauliMatrix {
    let mut span: Echelon<PauliVector, ()> = Echelon::new();
    for &s in stab {
        let _ = span.insert(s, ());
    }
    let mut pool: Vec<PauliVector> = pool.to_vec();
    let mut out = Vec::new();
    loop {
        pool.retain(|&v| !span.contains(v));
        let Some(a) = pool.first().copied() else {
            break;
        };
        let Some(bi) = pool.iter().position(|b| a.star(b)) else {
            // `a` commutes with all of N modulo the chosen pairs, so it lies in S.
            pool.remove(0);
            continue;
        };
        let b = pool[bi];
        out.push(a);
        out.push(b);
        let _ = span.insert(a, ());
        let _ = span.insert(b, ());
        for c in pool.iter_mut() {
            let ca = c.star(&a);
            let cb = c.star(&b);
            if cb {
                *c *= a;
            }
            if ca {
                *c *= b;
            }
        }
    }
    out
}

impl StabilizerCode {
    /// Builds a code from independent, pairwise-commuting generators.
    pub fn new(stab_gens: PauliMatrix) -> Result<Self, CodeError> {
        let n = validate_stabilizers(&stab_gens)?;
        let norm_gens = symplectic_kernel(&stab_gens, n);
        let logical_gens = symplectic_pairs(&norm_gens, &stab_gens);
        let destabilizers = derive_destabilizers(&stab_gens, &logical_gens, n);
        Ok(Self::assemble(
            n,
            stab_gens,
            norm_gens,
            logical_gens,
            destabilizers,
        ))
    }

    /// Builds a code with caller-chosen logical generators (anticommuting
    /// pairs, commuting with everything else and with the stabilizers).
    pub fn with_logicals(
        stab_gens: PauliMatrix,
        logical_gens: PauliMatrix,
    ) -> Result<Self, CodeError> {
        let n = validate_stabilizers(&stab_gens)?;
        check_width(&logical_gens, n)?;
        let k = n - stab_gens.len();
        validate_logicals(&stab_gens, &logical_gens, k)?;
        let norm_gens = symplectic_kernel(&stab_gens, n);
        let destabilizers = derive_destabilizers(&stab_gens, &logical_gens, n);
        Ok(Self::assemble(
            n,
            stab_gens,
            norm_gens,
            logical_gens,
            destabilizers,
        ))
    }

    /// Uniformly drawn independent commuting generators: `r` of them on `n`
    /// qubits, `1 <= r <= n`.
    pub fn random<R: rand::Rng + ?Sized>(
        n: usize,
        r: usize,
        rng: &mut R,
    ) -> Result<Self, CodeError> {
        if r == 0 || r > n || n > crate::pauli::MAX_QUBITS {
            return Err(CodeError::BadShape { n, r });
        }
        let mut gens: PauliMatrix = Vec::with_capacity(r);
        let mut span: Echelon<PauliVector, ()> = Echelon::new();
        while gens.len() < r {
            let g = PauliVector::from_masks(n, rng.random(), rng.random());
            if g.is_identity() || gens.iter().any(|h| !h.commutes_with(&g)) || span.contains(g) {
                continue;
            }
            let _ = span.insert(g, ());
            gens.push(g);
        }
        Self::new(gens)
    }

    pub(crate) fn from_parts(
        stab_gens: PauliMatrix,
        logical_gens: PauliMatrix,
        destabilizers: PauliMatrix,
    ) -> Result<Self, CodeError> {
        let n = validate_stabilizers(&stab_gens)?;
        let k = n - stab_gens.len();
        validate_logicals(&stab_gens, &logical_gens, k)?;
        let norm_gens = symplectic_kernel(&stab_gens, n);
        Ok(Self::assemble(
            n,
            stab_gens,
            norm_gens,
            logical_gens,
            destabilizers,
        ))
    }

    fn assemble(
        n: usize,
        stab_gens: PauliMatrix,
        norm_gens: PauliMatrix,
        logical_gens: PauliMatrix,
        destabilizers: PauliMatrix,
    ) -> Self {
        let mut stab_echelon = Echelon::new();
        for &s in &stab_gens {
            let _ = stab_echelon.insert(s, ());
        }
        StabilizerCode {
            n,
            k: n - stab_gens.len(),
            stab_gens,
            norm_gens,
            logical_gens,
            destabilizers,
            stab_echelon,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn stab_gens(&self) -> &[PauliVector] {
        &self.stab_gens
    }

    pub fn norm_gens(&self) -> &[PauliVector] {
        &self.norm_gens
    }

    pub fn logical_gens(&self) -> &[PauliVector] {
        &self.logical_gens
    }

    pub fn destabilizers(&self) -> &[PauliVector] {
        &self.destabilizers
    }

    pub fn syndrome(&self, e: &PauliVector) -> Result<BinaryVector, CodeError> {
        Ok(crate::pauli::syndrome(e, &self.stab_gens)?)
    }

    /// `prod_i t_i^{sigma_i}`, a fixed vector with syndrome `sigma`.
    pub fn representative_from_syndrome(
        &self,
        sigma: &BinaryVector,
    ) -> Result<PauliVector, CodeError> {
        if sigma.len() != self.stab_gens.len() {
            return Err(CodeError::SyndromeLength {
                expected: self.stab_gens.len(),
                found: sigma.len(),
            });
        }
        let mut rho = PauliVector::identity(self.n);
        for (i, t) in self.destabilizers.iter().enumerate() {
            if sigma.get(i) {
                rho *= *t;
            }
        }
        Ok(rho)
    }

    pub fn in_normalizer(&self, e: &PauliVector) -> bool {
        e.len() == self.n && self.stab_gens.iter().all(|s| !s.star(e))
    }

    /// Membership in S by row reduction.
    pub fn in_stabilizer(&self, e: &PauliVector) -> bool {
        e.len() == self.n && self.stab_echelon.contains(*e)
    }

    /// Coefficients of `e` over the logical generators, bit `j` for `l[j]`.
    /// Meaningful for `e` in N.
    pub fn logical_label(&self, e: &PauliVector) -> u64 {
        let mut label = 0u64;
        for j in 0..self.logical_gens.len() {
            if self.logical_gens[j ^ 1].star(e) {
                label |= 1 << j;
            }
        }
        label
    }

    /// `prod_j l_j^{c_j}` for a logical label `c`.
    pub fn logical_from_label(&self, label: u64) -> PauliVector {
        let mut v = PauliVector::identity(self.n);
        for (j, l) in self.logical_gens.iter().enumerate() {
            if (label >> j) & 1 == 1 {
                v *= *l;
            }
        }
        v
    }

    /// The joint code (N, S) with cosets labelled by logical coefficients.
    pub fn joint(&self) -> JointCode {
        JointCode {
            n: self.n,
            alphabet: Alphabet::Full,
            sub_gens: self.stab_gens.clone(),
            coset_gens: self.logical_gens.clone(),
            outer_checks: self.stab_gens.clone(),
            coset_checks: (0..self.logical_gens.len())
                .map(|j| self.logical_gens[j ^ 1])
                .collect(),
        }
    }
}

fn validate_logicals(
    stab: &[PauliVector],
    logicals: &[PauliVector],
    k: usize,
) -> Result<(), CodeError> {
    if logicals.len() != 2 * k {
        return Err(CodeError::BadLogicals(format!(
            "expected {} logical generators, got {}",
            2 * k,
            logicals.len()
        )));
    }
    if logicals.len() > 64 {
        return Err(CodeError::TooManyLogicals(logicals.len()));
    }
    for (i, l) in logicals.iter().enumerate() {
        if stab.iter().any(|s| s.star(l)) {
            return Err(CodeError::BadLogicals(format!(
                "logical {i} anticommutes with a stabilizer"
            )));
        }
        for (j, m) in logicals.iter().enumerate() {
            if l.star(m) != (i ^ 1 == j) {
                return Err(CodeError::BadLogicals(format!(
                    "logicals {i} and {j} have the wrong commutation"
                )));
            }
        }
    }
    Ok(())
}

fn derive_destabilizers(stab: &[PauliVector], logicals: &[PauliVector], n: usize) -> PauliMatrix {
    let r = stab.len();
    let basis = standard_basis(n);
    let mut e: Echelon<BinaryVector, PauliVector> = Echelon::new();
    for b in &basis {
        let _ = e.insert(syndrome_of(b, stab), *b);
    }
    let mut t: PauliMatrix = (0..r)
        .map(|i| {
            e.solve(BinaryVector::unit(r, i), PauliVector::identity(n))
                .expect("independent stabilizers have a surjective syndrome map")
        })
        .collect();
    for ti in t.iter_mut() {
        let orig = *ti;
        for j in 0..logicals.len() {
            if orig.star(&logicals[j]) {
                *ti *= logicals[j ^ 1];
            }
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            if t[i].star(&t[j]) {
                t[j] *= stab[i];
            }
        }
    }
    t
}

/// Symbols a trellis is allowed to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Full,
    XOnly,
    ZOnly,
}

impl Alphabet {
    pub fn symbols(self) -> &'static [Pauli] {
        match self {
            Alphabet::Full => &[Pauli::I, Pauli::X, Pauli::Y, Pauli::Z],
            Alphabet::XOnly => &[Pauli::I, Pauli::X],
            Alphabet::ZOnly => &[Pauli::I, Pauli::Z],
        }
    }
}

/// A joint code `(C, D)`: the outer code C is every vector over `alphabet`
/// with zero star product against `outer_checks`; D is generated by
/// `sub_gens`, and the cosets of D in C are spanned by `coset_gens`.
///
/// `coset_checks` is dual to `coset_gens`: `coset_checks[i] * coset_gens[j]`
/// is 1 iff `i == j`, and every check commutes with D.
#[derive(Debug, Clone)]
pub struct JointCode {
    pub n: usize,
    pub alphabet: Alphabet,
    pub sub_gens: PauliMatrix,
    pub coset_gens: PauliMatrix,
    pub outer_checks: PauliMatrix,
    pub coset_checks: PauliMatrix,
}

impl JointCode {
    pub fn label_bits(&self) -> usize {
        self.coset_gens.len()
    }

    pub fn num_cosets(&self) -> usize {
        1usize << self.coset_gens.len()
    }

    /// Coset label of a vector of the outer code.
    pub fn label_of(&self, v: &PauliVector) -> u64 {
        let mut label = 0;
        for (j, c) in self.coset_checks.iter().enumerate() {
            if c.star(v) {
                label |= 1 << j;
            }
        }
        label
    }

    pub fn coset_rep(&self, label: u64) -> PauliVector {
        let mut v = PauliVector::identity(self.n);
        for (j, g) in self.coset_gens.iter().enumerate() {
            if (label >> j) & 1 == 1 {
                v *= *g;
            }
        }
        v
    }

    /// Generators of the outer code.
    pub fn outer_gens(&self) -> PauliMatrix {
        self.sub_gens
            .iter()
            .chain(&self.coset_gens)
            .copied()
            .collect()
    }
}
