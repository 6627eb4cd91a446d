//! Brute-force references for small codes. Nothing here touches trellises.

use thiserror::Error;

use crate::code::{CodeError, CssCode, JointCode, StabilizerCode};
use crate::decoder::ChannelModel;
use crate::pauli::{BinaryVector, PauliVector};

/// Largest generator count accepted by the enumerators.
pub const MAX_GENERATORS: usize = 22;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{0} generators exceed the enumeration cap of {MAX_GENERATORS}")]
    TooLarge(usize),
    #[error("generator lengths differ from the requested length")]
    LengthMismatch,
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Every element of the group of length-`n` vectors generated by `gens`
/// (deduplicated, sorted).
pub fn enumerate_group(gens: &[PauliVector], n: usize) -> Result<Vec<PauliVector>, OracleError> {
    if gens.len() > MAX_GENERATORS {
        return Err(OracleError::TooLarge(gens.len()));
    }
    if gens.iter().any(|g| g.len() != n) {
        return Err(OracleError::LengthMismatch);
    }
    let mut out = gray_products(gens, PauliVector::identity(n));
    out.sort();
    out.dedup();
    Ok(out)
}

/// `base` times every subset product of `gens`, in Gray-code order.
fn gray_products(gens: &[PauliVector], base: PauliVector) -> Vec<PauliVector> {
    let mut cur = base;
    let mut out = Vec::with_capacity(1 << gens.len());
    out.push(cur);
    for i in 1u64..(1 << gens.len()) {
        cur *= gens[i.trailing_zeros() as usize];
        out.push(cur);
    }
    out
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

fn prob(e: &PauliVector, ch: &ChannelModel) -> f64 {
    (0..e.len()).map(|i| ch.prob(e.get(i))).product()
}

fn check(code: &StabilizerCode, sigma: &BinaryVector) -> Result<PauliVector, OracleError> {
    if code.n() + code.k() > MAX_GENERATORS {
        return Err(OracleError::TooLarge(code.n() + code.k()));
    }
    if sigma.len() != code.stab_gens().len() {
        return Err(CodeError::SyndromeLength {
            expected: code.stab_gens().len(),
            found: sigma.len(),
        }
        .into());
    }
    Ok(code.representative_from_syndrome(sigma)?)
}

/// Most probable error with syndrome `sigma`, by scanning all of `rho N`.
/// Ties go to the smallest vector.
pub fn brute_ndml(
    code: &StabilizerCode,
    sigma: &BinaryVector,
    ch: &ChannelModel,
) -> Result<(PauliVector, f64), OracleError> {
    let rho = check(code, sigma)?;
    let mut best: Option<(PauliVector, f64)> = None;
    for e in gray_products(code.norm_gens(), rho) {
        let p = prob(&e, ch);
        best = match best {
            Some((b, bp)) if bp > p || (bp == p && b < e) => Some((b, bp)),
            _ => Some((e, p)),
        };
    }
    Ok(best.expect("the coset is nonempty"))
}

/// Probability of every coset `rho * rep(label) * S` of a joint code, indexed
/// by label.
pub fn brute_joint_dml(
    joint: &JointCode,
    rho: &PauliVector,
    ch: &ChannelModel,
) -> Result<Vec<f64>, OracleError> {
    let total = joint.sub_gens.len() + joint.coset_gens.len();
    if total > MAX_GENERATORS {
        return Err(OracleError::TooLarge(total));
    }
    let members = gray_products(&joint.sub_gens, PauliVector::identity(joint.n));
    Ok((0..joint.num_cosets() as u64)
        .map(|c| {
            let base = *rho * joint.coset_rep(c);
            let mut acc = CompensatedSum::default();
            for s in &members {
                acc.add(prob(&(base * *s), ch));
            }
            acc.value()
        })
        .collect())
}

/// Probability of every logical coset `rho * l * S`, indexed by logical label.
pub fn brute_dml(
    code: &StabilizerCode,
    sigma: &BinaryVector,
    ch: &ChannelModel,
) -> Result<Vec<f64>, OracleError> {
    let rho = check(code, sigma)?;
    brute_joint_dml(&code.joint(), &rho, ch)
}

/// Total probability of the syndrome coset `rho N`.
pub fn brute_syndrome_prob(
    code: &StabilizerCode,
    sigma: &BinaryVector,
    ch: &ChannelModel,
) -> Result<f64, OracleError> {
    let rho = check(code, sigma)?;
    let mut acc = CompensatedSum::default();
    for e in gray_products(code.norm_gens(), rho) {
        acc.add(prob(&e, ch));
    }
    Ok(acc.value())
}

/// Coset probabilities of the separate CSS decoder: `(z_part, x_part)` where
/// `z_part[c]` sums the Z-type coset `rho_Z * lz(c) * S_Z` under `flip`
/// probability per Z and `x_part` likewise for X.
pub fn brute_css_dml(
    css: &CssCode,
    sigma_x: &BinaryVector,
    sigma_z: &BinaryVector,
    ch_z: &ChannelModel,
    ch_x: &ChannelModel,
) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
    let rz = css.representative_z(sigma_x)?;
    let rx = css.representative_x(sigma_z)?;
    Ok((
        brute_joint_dml(&css.joint_x(), &rz, ch_z)?,
        brute_joint_dml(&css.joint_z(), &rx, ch_x)?,
    ))
}

/// Most probable member of a coset `base * <gens>`.
pub fn brute_coset_argmax(
    gens: &[PauliVector],
    base: PauliVector,
    ch: &ChannelModel,
) -> Result<(PauliVector, f64), OracleError> {
    if gens.len() > MAX_GENERATORS {
        return Err(OracleError::TooLarge(gens.len()));
    }
    let mut best = (base, prob(&base, ch));
    for e in gray_products(gens, base) {
        let p = prob(&e, ch);
        if p > best.1 || (p == best.1 && e < best.0) {
            best = (e, p);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(s: &str) -> PauliVector {
        s.parse().unwrap()
    }

    fn code422() -> StabilizerCode {
        StabilizerCode::new(vec![pv("XXXX"), pv("ZZZZ")]).unwrap()
    }

    #[test]
    fn small_groups() {
        let g = enumerate_group(&[pv("XXXX"), pv("ZZZZ")], 4).unwrap();
        let mut want = vec![pv("IIII"), pv("XXXX"), pv("YYYY"), pv("ZZZZ")];
        want.sort();
        assert_eq!(g, want);
        assert_eq!(enumerate_group(&[], 3).unwrap(), vec![pv("III")]);
        let dup = enumerate_group(&[pv("XI"), pv("XI")], 2).unwrap();
        assert_eq!(dup.len(), 2);
        let big = vec![pv("X"); 23];
        assert!(matches!(
            enumerate_group(&big, 1),
            Err(OracleError::TooLarge(23))
        ));
        assert!(matches!(
            enumerate_group(&[pv("XI")], 3),
            Err(OracleError::LengthMismatch)
        ));
    }

    #[test]
    fn normalizer_size() {
        let c = code422();
        let n = enumerate_group(c.norm_gens(), 4).unwrap();
        assert_eq!(n.len(), 64);
        assert!(n.iter().all(|e| c.syndrome(e).unwrap().is_zero()));
    }

    #[test]
    fn ndml_identity() {
        let ch = ChannelModel::depolarizing(0.1).unwrap();
        let (e, p) = brute_ndml(&code422(), &"00".parse().unwrap(), &ch).unwrap();
        assert!(e.is_identity());
        assert!((p - 0.9f64.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn dml_partition() {
        let c = code422();
        let ch = ChannelModel::depolarizing(0.2).unwrap();
        for s in ["00", "01", "10", "11"] {
            let sigma: BinaryVector = s.parse().unwrap();
            let cosets = brute_dml(&c, &sigma, &ch).unwrap();
            assert_eq!(cosets.len(), 16);
            let total: f64 = cosets.iter().sum();
            assert!((total - brute_syndrome_prob(&c, &sigma, &ch).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        for x in [1.0, 1e-16, -1.0, 1e-16] {
            s.add(x);
        }
        assert!((s.value() - 2e-16).abs() < 1e-30);
    }
}
