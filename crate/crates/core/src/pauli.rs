//! The effective Pauli group: single-qubit symbols, packed Pauli vectors,
//! binary vectors, and the symplectic ("star") product used for syndromes.
//!
//! Phases are never tracked. A Pauli vector is stored as two packed bit
//! masks `(x, z)` with `I=(0,0)`, `X=(1,0)`, `Z=(0,1)`, `Y=(1,1)`, so the
//! group product is a XOR and the star product is the parity of
//! `x1 & z2 ^ z1 & x2`.

use std::fmt;
use std::ops::{Mul, MulAssign};
use std::str::FromStr;

use thiserror::Error;

/// Largest supported qubit count (two `u128` masks).
pub const MAX_QUBITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid Pauli symbol {0:?} (expected one of I, X, Y, Z)")]
    InvalidSymbol(char),
    #[error("invalid bit {0:?} (expected 0 or 1)")]
    InvalidBit(char),
    #[error("length {0} outside the supported range 1..={MAX_QUBITS}")]
    BadLength(usize),
    #[error("depth {depth} out of range 0..={n}")]
    DepthOutOfRange { depth: usize, n: usize },
}

/// A single-qubit element of the effective Pauli group.
///
/// The declaration order `I < X < Y < Z` is the canonical label order used
/// for trellis canonical forms and tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Bit-pair encoding `(x, z)`.
    pub fn to_bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    /// Dense index in `I, X, Y, Z` order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// 1 iff both are non-identity and different (the two operators anticommute).
    pub fn star(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self, PauliError> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(PauliError::InvalidSymbol(other)),
        }
    }
}

impl Mul for Pauli {
    type Output = Pauli;

    fn mul(self, rhs: Pauli) -> Pauli {
        let (ax, az) = self.to_bits();
        let (bx, bz) = rhs.to_bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Group product in P1.
pub fn pauli_mul(a: Pauli, b: Pauli) -> Pauli {
    a * b
}

fn mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// An element of the effective Pauli group on `n` qubits, qubit 0 first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliVector {
    x: u128,
    z: u128,
    n: u32,
}

impl PauliVector {
    /// The all-identity vector.
    ///
    /// # Panics
    /// If `n` is zero or exceeds [`MAX_QUBITS`].
    pub fn identity(n: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n),
            "qubit count {n} out of range"
        );
        PauliVector {
            x: 0,
            z: 0,
            n: n as u32,
        }
    }

    pub fn try_identity(n: usize) -> Result<Self, PauliError> {
        if (1..=MAX_QUBITS).contains(&n) {
            Ok(PauliVector {
                x: 0,
                z: 0,
                n: n as u32,
            })
        } else {
            Err(PauliError::BadLength(n))
        }
    }

    pub fn from_masks(n: usize, x: u128, z: u128) -> Self {
        let v = PauliVector::identity(n);
        let m = mask(n);
        PauliVector {
            x: x & m,
            z: z & m,
            ..v
        }
    }

    pub fn from_symbols(symbols: &[Pauli]) -> Result<Self, PauliError> {
        let mut v = PauliVector::try_identity(symbols.len())?;
        for (i, &p) in symbols.iter().enumerate() {
            v.set(i, p);
        }
        Ok(v)
    }

    /// `X^alpha` for a binary vector `alpha`.
    pub fn x_type(alpha: &BinaryVector) -> Self {
        PauliVector::from_masks(alpha.len(), alpha.bits(), 0)
    }

    /// `Z^beta` for a binary vector `beta`.
    pub fn z_type(beta: &BinaryVector) -> Self {
        PauliVector::from_masks(beta.len(), 0, beta.bits())
    }

    /// Single non-identity symbol at `qubit`.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut v = PauliVector::identity(n);
        v.set(qubit, p);
        v
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_mask(&self) -> u128 {
        self.x
    }

    pub fn z_mask(&self) -> u128 {
        self.z
    }

    /// X component as a binary vector.
    pub fn x_part(&self) -> BinaryVector {
        BinaryVector::from_bits(self.len(), self.x)
    }

    /// Z component as a binary vector.
    pub fn z_part(&self) -> BinaryVector {
        BinaryVector::from_bits(self.len(), self.z)
    }

    pub fn get(&self, i: usize) -> Pauli {
        assert!(i < self.len(), "qubit {i} out of range");
        Pauli::from_bits((self.x >> i) & 1 == 1, (self.z >> i) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, p: Pauli) {
        assert!(i < self.len(), "qubit {i} out of range");
        let (x, z) = p.to_bits();
        self.x = (self.x & !(1u128 << i)) | ((x as u128) << i);
        self.z = (self.z & !(1u128 << i)) | ((z as u128) << i);
    }

    pub fn symbols(&self) -> Vec<Pauli> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// Smallest non-identity index.
    pub fn left_index(&self) -> Option<usize> {
        let s = self.x | self.z;
        (s != 0).then(|| s.trailing_zeros() as usize)
    }

    /// Largest non-identity index.
    pub fn right_index(&self) -> Option<usize> {
        let s = self.x | self.z;
        (s != 0).then(|| 127 - s.leading_zeros() as usize)
    }

    /// `R - L + 1`, or 0 for the identity.
    pub fn span_length(&self) -> usize {
        match (self.left_index(), self.right_index()) {
            (Some(l), Some(r)) => r - l + 1,
            _ => 0,
        }
    }

    /// Star product. Panics on a length mismatch; see [`star`] for the
    /// fallible form.
    pub fn star(&self, other: &PauliVector) -> bool {
        assert_eq!(
            self.n, other.n,
            "star product of vectors with different lengths"
        );
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1 == 1
    }

    pub fn commutes_with(&self, other: &PauliVector) -> bool {
        !self.star(other)
    }

    /// Star product restricted to the first `t` positions.
    pub fn star_prefix(&self, other: &PauliVector, t: usize) -> bool {
        let m = mask(t);
        (((self.x & other.z) ^ (self.z & other.x)) & m).count_ones() & 1 == 1
    }

    /// `(x, z) -> (z, x)`; the dot product against the swapped vector is the star product.
    pub fn swap_xz(&self) -> Self {
        PauliVector {
            x: self.z,
            z: self.x,
            n: self.n,
        }
    }

    /// Restriction to the positions in `range`, reindexed from zero.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start < end && end <= self.len());
        let m = mask(end - start);
        PauliVector {
            x: (self.x >> start) & m,
            z: (self.z >> start) & m,
            n: (end - start) as u32,
        }
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &PauliVector) -> Self {
        let n = self.len() + other.len();
        assert!(n <= MAX_QUBITS, "concatenation exceeds {MAX_QUBITS} qubits");
        PauliVector {
            x: self.x | (other.x << self.len()),
            z: self.z | (other.z << self.len()),
            n: n as u32,
        }
    }
}

impl Mul for PauliVector {
    type Output = PauliVector;

    fn mul(self, rhs: PauliVector) -> PauliVector {
        assert_eq!(self.n, rhs.n, "product of vectors with different lengths");
        PauliVector {
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            n: self.n,
        }
    }
}

impl serde::Serialize for PauliVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl MulAssign for PauliVector {
    fn mul_assign(&mut self, rhs: PauliVector) {
        *self = *self * rhs;
    }
}

impl fmt::Display for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliVector({self})")
    }
}

impl FromStr for PauliVector {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols = s
            .trim()
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        PauliVector::from_symbols(&symbols)
    }
}

/// A packed binary vector of up to 128 bits, index 0 first.
///
/// Length zero is allowed (e.g. the syndrome of a code with no stabilizers).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryVector {
    bits: u128,
    len: u32,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= 128, "binary vector length {len} exceeds 128");
        BinaryVector {
            bits: 0,
            len: len as u32,
        }
    }

    pub fn from_bits(len: usize, bits: u128) -> Self {
        assert!(len <= 128, "binary vector length {len} exceeds 128");
        BinaryVector {
            bits: bits & mask(len),
            len: len as u32,
        }
    }

    pub fn from_slice(bits: &[u8]) -> Self {
        let mut v = BinaryVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b != 0);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BinaryVector::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len(), "bit {i} out of range");
        (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len(), "bit {i} out of range");
        self.bits = (self.bits & !(1u128 << i)) | ((value as u128) << i);
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Usual inner product mod 2.
    pub fn dot(&self, other: &BinaryVector) -> bool {
        assert_eq!(
            self.len, other.len,
            "dot product of vectors with different lengths"
        );
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Bits `start..end`, reindexed from zero.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.len());
        BinaryVector::from_bits(end - start, self.bits >> start)
    }

    pub fn concat(&self, other: &BinaryVector) -> Self {
        BinaryVector::from_bits(
            self.len() + other.len(),
            self.bits | (other.bits << self.len()),
        )
    }
}

impl std::ops::BitXor for BinaryVector {
    type Output = BinaryVector;

    fn bitxor(self, rhs: BinaryVector) -> BinaryVector {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        BinaryVector {
            bits: self.bits ^ rhs.bits,
            len: self.len,
        }
    }
}

impl std::ops::BitXorAssign for BinaryVector {
    fn bitxor_assign(&mut self, rhs: BinaryVector) {
        *self = *self ^ rhs;
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl FromStr for BinaryVector {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.len() > 128 {
            return Err(PauliError::BadLength(s.len()));
        }
        let mut v = BinaryVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(PauliError::InvalidBit(other)),
            }
        }
        Ok(v)
    }
}

/// Star product `a * b`: 0 iff the corresponding operators commute.
pub fn star(a: &PauliVector, b: &PauliVector) -> Result<bool, PauliError> {
    if a.len() != b.len() {
        return Err(PauliError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.star(b))
}

/// Syndrome of `e`: bit `i` is `checks[i] * e`.
pub fn syndrome(e: &PauliVector, checks: &[PauliVector]) -> Result<BinaryVector, PauliError> {
    partial_syndrome(e, checks, e.len())
}

/// Syndrome accumulated over the first `t` positions only.
pub fn partial_syndrome(
    e: &PauliVector,
    checks: &[PauliVector],
    t: usize,
) -> Result<BinaryVector, PauliError> {
    if t > e.len() {
        return Err(PauliError::DepthOutOfRange {
            depth: t,
            n: e.len(),
        });
    }
    let mut s = BinaryVector::zeros(checks.len());
    for (i, c) in checks.iter().enumerate() {
        if c.len() != e.len() {
            return Err(PauliError::LengthMismatch {
                left: c.len(),
                right: e.len(),
            });
        }
        s.set(i, c.star_prefix(e, t));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(s: &str) -> PauliVector {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_table() {
        use Pauli::*;
        assert_eq!(X * Y, Z);
        assert_eq!(X * Z, Y);
        assert_eq!(Y * Z, X);
        assert_eq!(X * X, I);
        assert_eq!(Y * Y, I);
        assert_eq!(Z * Z, I);
        assert_eq!(I * Z, Z);
        for a in Pauli::ALL {
            assert_eq!(a * a, I);
            assert_eq!(I * a, a);
            for b in Pauli::ALL {
                assert_eq!(a * b, b * a);
                let (ax, az) = a.to_bits();
                let (bx, bz) = b.to_bits();
                assert_eq!(a * b, Pauli::from_bits(ax ^ bx, az ^ bz));
            }
        }
    }

    #[test]
    fn bit_pair_round_trip() {
        for p in Pauli::ALL {
            let (x, z) = p.to_bits();
            assert_eq!(Pauli::from_bits(x, z), p);
            assert_eq!(Pauli::from_char(p.as_char()).unwrap(), p);
        }
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&pv("X"), &pv("Z")), Ok(true));
        assert_eq!(star(&pv("XXXX"), &pv("ZZZZ")), Ok(false));
        assert_eq!(star(&pv("XYZI"), &pv("XYZI")), Ok(false));
        assert!(matches!(
            star(&pv("X"), &pv("XX")),
            Err(PauliError::LengthMismatch { .. })
        ));
        // componentwise rule: 1 iff both non-identity and different
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                let va = PauliVector::from_symbols(&[a]).unwrap();
                let vb = PauliVector::from_symbols(&[b]).unwrap();
                assert_eq!(va.star(&vb), a.star(b));
            }
        }
    }

    #[test]
    fn syndrome_examples() {
        let checks = [pv("XXXX"), pv("ZZZZ")];
        assert_eq!(syndrome(&pv("ZIII"), &checks).unwrap().to_string(), "10");
        assert_eq!(syndrome(&pv("IIII"), &checks).unwrap().to_string(), "00");
        assert_eq!(syndrome(&pv("XXXX"), &checks).unwrap().to_string(), "00");
        assert!(syndrome(&pv("ZII"), &checks).is_err());
    }

    #[test]
    fn partial_syndrome_examples() {
        let checks = [pv("XXXX"), pv("ZZZZ")];
        let e = pv("ZIII");
        assert!(partial_syndrome(&e, &checks, 0).unwrap().is_zero());
        assert_eq!(partial_syndrome(&e, &checks, 1).unwrap().to_string(), "10");
        assert_eq!(
            partial_syndrome(&e, &checks, 4).unwrap(),
            syndrome(&e, &checks).unwrap()
        );
        assert!(matches!(
            partial_syndrome(&e, &checks, 5),
            Err(PauliError::DepthOutOfRange { depth: 5, n: 4 })
        ));
    }

    #[test]
    fn parser_rejects_other_characters() {
        assert!(matches!(
            "XQZ".parse::<PauliVector>(),
            Err(PauliError::InvalidSymbol('Q'))
        ));
        assert!(matches!(
            "xz".parse::<PauliVector>(),
            Err(PauliError::InvalidSymbol('x'))
        ));
        assert!("".parse::<PauliVector>().is_err());
        assert!("0120".parse::<BinaryVector>().is_err());
        assert_eq!(pv("IXYZ").to_string(), "IXYZ");
    }

    #[test]
    fn span_indices() {
        let v = pv("IXIZI");
        assert_eq!(v.left_index(), Some(1));
        assert_eq!(v.right_index(), Some(3));
        assert_eq!(v.span_length(), 3);
        assert_eq!(pv("III").span_length(), 0);
        let wide = PauliVector::single(128, 127, Pauli::Y);
        assert_eq!(wide.right_index(), Some(127));
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = PauliVector> {
        (any::<u128>(), any::<u128>()).prop_map(move |(x, z)| PauliVector::from_masks(n, x, z))
    }

    proptest! {
        #[test]
        fn star_is_bilinear((a, b, c) in (1usize..40).prop_flat_map(|n| (arb_vec(n), arb_vec(n), arb_vec(n)))) {
            prop_assert_eq!((a * b).star(&c), a.star(&c) ^ b.star(&c));
            prop_assert!(!a.star(&a));
            prop_assert_eq!(a.star(&b), b.star(&a));
        }

        #[test]
        fn syndrome_is_invariant_under_commuting_factor(
            (e, b, checks) in (2usize..12).prop_flat_map(|n| (arb_vec(n), arb_vec(n), proptest::collection::vec(arb_vec(n), 1..5)))
        ) {
            let s_e = syndrome(&e, &checks).unwrap();
            let s_b = syndrome(&b, &checks).unwrap();
            prop_assert_eq!(syndrome(&(e * b), &checks).unwrap(), s_e ^ s_b);
            if s_b.is_zero() {
                prop_assert_eq!(syndrome(&(e * b), &checks).unwrap(), s_e);
            }
        }

        #[test]
        fn text_round_trip(v in (1usize..70).prop_flat_map(arb_vec)) {
            prop_assert_eq!(v.to_string().parse::<PauliVector>().unwrap(), v);
        }
    }
}
