//! Incremental Gaussian elimination over F2.
//!
//! Rows carry an optional payload that is combined alongside the key, which
//! is how kernels, preimages and coefficient vectors are recovered.

use crate::pauli::{BinaryVector, PauliVector};

/// A vector over F2 usable as an elimination key.
pub trait BitRow: Copy {
    fn add(self, other: Self) -> Self;
    fn is_zero(&self) -> bool;
    fn bit(&self, i: usize) -> bool;
    /// Index of the lowest set bit.
    fn lowest(&self) -> Option<usize>;
}

/// Something that is combined alongside a key during elimination.
pub trait Payload: Copy {
    fn add(self, other: Self) -> Self;
}

impl BitRow for BinaryVector {
    fn add(self, other: Self) -> Self {
        self ^ other
    }

    fn is_zero(&self) -> bool {
        BinaryVector::is_zero(self)
    }

    fn bit(&self, i: usize) -> bool {
        (self.bits() >> i) & 1 == 1
    }

    fn lowest(&self) -> Option<usize> {
        (self.bits() != 0).then(|| self.bits().trailing_zeros() as usize)
    }
}

/// Pauli vectors as 2n-bit rows: bits `0..n` are the X mask, `n..2n` the Z mask.
impl BitRow for PauliVector {
    fn add(self, other: Self) -> Self {
        self * other
    }

    fn is_zero(&self) -> bool {
        self.is_identity()
    }

    fn bit(&self, i: usize) -> bool {
        let n = self.len();
        if i < n {
            (self.x_mask() >> i) & 1 == 1
        } else {
            (self.z_mask() >> (i - n)) & 1 == 1
        }
    }

    fn lowest(&self) -> Option<usize> {
        if self.x_mask() != 0 {
            Some(self.x_mask().trailing_zeros() as usize)
        } else if self.z_mask() != 0 {
            Some(self.len() + self.z_mask().trailing_zeros() as usize)
        } else {
            None
        }
    }
}

impl Payload for () {
    fn add(self, _: Self) -> Self {}
}

impl Payload for BinaryVector {
    fn add(self, other: Self) -> Self {
        self ^ other
    }
}

impl Payload for PauliVector {
    fn add(self, other: Self) -> Self {
        self * other
    }
}

/// Echelon basis built one row at a time.
///
/// Each stored row is reduced against all earlier rows before insertion, so
/// reducing a vector by the stored rows in insertion order clears every pivot.
#[derive(Debug, Clone)]
pub struct Echelon<K: BitRow, P: Payload> {
    rows: Vec<(usize, K, P)>,
}

impl<K: BitRow, P: Payload> Default for Echelon<K, P> {
    fn default() -> Self {
        Echelon { rows: Vec::new() }
    }
}

impl<K: BitRow, P: Payload> Echelon<K, P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `(key, payload)` by the stored rows.
    pub fn reduce(&self, mut key: K, mut payload: P) -> (K, P) {
        for &(pivot, row, p) in &self.rows {
            if key.bit(pivot) {
                key = key.add(row);
                payload = payload.add(p);
            }
        }
        (key, payload)
    }

    /// Inserts a row. Returns `Err` with the reduced payload when the key is
    /// already in the span (the payload then records the dependency).
    pub fn insert(&mut self, key: K, payload: P) -> Result<(), P> {
        let (key, payload) = self.reduce(key, payload);
        match key.lowest() {
            Some(pivot) => {
                self.rows.push((pivot, key, payload));
                Ok(())
            }
            None => Err(payload),
        }
    }

    pub fn contains(&self, key: K) -> bool {
        self.reduce_key(key).is_zero()
    }

    fn reduce_key(&self, mut key: K) -> K {
        for &(pivot, row, _) in &self.rows {
            if key.bit(pivot) {
                key = key.add(row);
            }
        }
        key
    }

    /// If `key` is in the span, returns the payload combination producing it.
    pub fn solve(&self, key: K, zero: P) -> Option<P> {
        let (rest, payload) = self.reduce(key, zero);
        rest.is_zero().then_some(payload)
    }
}

/// Rank of a list of rows.
pub fn rank<K: BitRow>(rows: &[K]) -> usize {
    let mut e: Echelon<K, ()> = Echelon::new();
    for &r in rows {
        let _ = e.insert(r, ());
    }
    e.rank()
}

pub fn is_independent<K: BitRow>(rows: &[K]) -> bool {
    rank(rows) == rows.len()
}

/// Echelon basis of `rows` with each row tagged by its coefficient vector.
pub fn coefficient_echelon<K: BitRow>(rows: &[K]) -> Echelon<K, BinaryVector> {
    assert!(rows.len() <= 128, "at most 128 rows supported");
    let mut e = Echelon::new();
    for (i, &r) in rows.iter().enumerate() {
        let _ = e.insert(r, BinaryVector::unit(rows.len(), i));
    }
    e
}

/// Coefficients `c` with `sum_i c_i rows[i] = target`, if any.
pub fn express<K: BitRow>(rows: &[K], target: K) -> Option<BinaryVector> {
    coefficient_echelon(rows).solve(target, BinaryVector::zeros(rows.len()))
}

/// Kernel of the linear map sending `basis[j]` to `images[j]`: every
/// combination of `basis` whose image is zero, as a basis.
pub fn kernel<K: BitRow, P: Payload>(images: &[K], basis: &[P]) -> Vec<P> {
    assert_eq!(images.len(), basis.len());
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (&k, &p) in images.iter().zip(basis) {
        if let Err(dep) = e.insert(k, p) {
            out.push(dep);
        }
    }
    out
}

/// Kernel of a binary matrix acting on length-`n` vectors (`h * v^T = 0`).
pub fn binary_nullspace(h: &[BinaryVector], n: usize) -> Vec<BinaryVector> {
    let m = h.len();
    let images: Vec<BinaryVector> = (0..n)
        .map(|j| {
            let mut col = BinaryVector::zeros(m);
            for (i, row) in h.iter().enumerate() {
                col.set(i, row.get(j));
            }
            col
        })
        .collect();
    let basis: Vec<BinaryVector> = (0..n).map(|j| BinaryVector::unit(n, j)).collect();
    kernel(&images, &basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BinaryVector {
        s.parse().unwrap()
    }

    fn pv(s: &str) -> PauliVector {
        s.parse().unwrap()
    }

    #[test]
    fn rank_and_independence() {
        assert_eq!(rank(&[bv("110"), bv("011"), bv("101")]), 2);
        assert!(is_independent(&[pv("XXXX"), pv("ZZZZ")]));
        assert!(!is_independent(&[pv("XXXX"), pv("ZZZZ"), pv("YYYY")]));
    }

    #[test]
    fn express_finds_coefficients() {
        let rows = [pv("XXII"), pv("IZZI"), pv("IIXX")];
        let target = pv("XYYX");
        let c = express(&rows, target).unwrap();
        assert_eq!(c.to_string(), "111");
        assert!(express(&rows, pv("ZIII")).is_none());
    }

    #[test]
    fn nullspace_of_hamming() {
        let h = [bv("1111000"), bv("0110011"), bv("0011110")];
        let ker = binary_nullspace(&h, 7);
        assert_eq!(ker.len(), 4);
        for v in &ker {
            for r in &h {
                assert!(!r.dot(v));
            }
        }
        assert!(is_independent(&ker));
    }
}
