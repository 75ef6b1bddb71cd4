//! Constructive degree-0 Hochschild reduction.
//!
//! Every invariant monomial `m` is rewritten as `scalar * 1` plus an explicit
//! combination of star-commutators. Off-diagonal monomials are eigenvectors
//! of `[z zb, -]`; diagonal ones descend one step at a time through
//! `[z^2/(2 i h1), z^(j-1) zb^(j+1)]`. The step coefficients are read from
//! the engine, not from a closed formula, so every certificate is an
//! independent check of the trace formula.

use alloc::format;
use alloc::vec::Vec;

use crate::algebra::Reorderer;
use crate::error::Error;
use crate::scalars::{rational, GaussianRational, ScalarPoly};
use crate::spherical::{monomials_up_to, star_with, InvariantPoly};
use crate::trace::phi;

/// Largest degree accepted by [`hh0_report`].
pub const HH0_MAX_DEGREE: u32 = 32;

/// One term `coeff * (left*right - right*left)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub coeff: ScalarPoly,
    pub left: InvariantPoly,
    pub right: InvariantPoly,
}

/// Proof that `target - scalar*1` lies in the span of star-commutators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub target: InvariantPoly,
    pub scalar: ScalarPoly,
    pub witnesses: Vec<Witness>,
}

impl Certificate {
    /// `sum coeff_i [left_i, right_i]`.
    pub fn witness_sum(&self) -> InvariantPoly {
        let mut engine = Reorderer::default();
        let mut sum = InvariantPoly::zero();
        for w in &self.witnesses {
            let k = star_with(&mut engine, &w.left, &w.right).sub(&star_with(&mut engine, &w.right, &w.left));
            sum = sum.add(&k.scale(&w.coeff));
        }
        sum
    }

    /// Smallest `h1` exponent among witness coefficients and left/right entries.
    pub fn min_witness_h1(&self) -> Option<i32> {
        self.witnesses
            .iter()
            .flat_map(|w| {
                let coeff = w.coeff.min_h1();
                let entries = w.left.terms().chain(w.right.terms()).filter_map(|(_, c)| c.min_h1());
                coeff.into_iter().chain(entries)
            })
            .min()
    }
}

/// `z^2 / (2 i h1)`.
fn lowering_operator() -> InvariantPoly {
    let inv = ScalarPoly::monomial(GaussianRational::new(rational(0, 1), rational(2, 1)), 1, 0)
        .inverse()
        .expect("2 i h1 is a unit");
    InvariantPoly::monomial(2, 0).expect("even").scale(&inv)
}

/// Reads `[z^2/(2 i h1), z^(j-1) zb^(j+1)] = (j+1) z^j zb^j + d * z^(j-1) zb^(j-1)` from
/// the engine and returns `c_j = -d/(j+1)`, so that `[z^j zb^j] = c_j [z^(j-1) zb^(j-1)]`.
pub fn descent_scalar(j: u32) -> Result<ScalarPoly, Error> {
    assert!(j >= 1);
    let mut engine = Reorderer::default();
    let left = lowering_operator();
    let right = InvariantPoly::monomial(j - 1, j + 1)?;
    let k = star_with(&mut engine, &left, &right).sub(&star_with(&mut engine, &right, &left));
    let lead = k.coeff(j, j);
    let next = k.coeff(j - 1, j - 1);
    if k.len() > 2 || lead != ScalarPoly::from_int(j as i64 + 1) {
        return Err(Error::Internal(format!("unexpected descent commutator at j = {j}: {k}")));
    }
    Ok(next.scale_rational(&rational(-1, j as i64 + 1)))
}

/// Certificate for one invariant monomial `z^p zb^q`.
pub fn reduce_certificate(p: u32, q: u32) -> Result<Certificate, Error> {
    let target = InvariantPoly::monomial(p, q)?;
    if p != q {
        let mut engine = Reorderer::default();
        let zzb = InvariantPoly::z_zb();
        let k = star_with(&mut engine, &zzb, &target).sub(&star_with(&mut engine, &target, &zzb));
        let weight = k.coeff(p, q);
        if k.len() != 1 || weight.is_zero() {
            return Err(Error::Internal(format!("z zb does not act diagonally on z^{p} zb^{q}: {k}")));
        }
        let coeff = weight.inverse()?;
        return Ok(Certificate {
            target: target.clone(),
            scalar: ScalarPoly::zero(),
            witnesses: alloc::vec![Witness { coeff, left: zzb, right: target }],
        });
    }
    let k = p;
    let steps: Vec<ScalarPoly> = (1..=k).map(descent_scalar).collect::<Result<_, _>>()?;
    let left = lowering_operator();
    let mut witnesses = Vec::with_capacity(k as usize);
    // m_k = sum_j (prod_{i>j} c_i) / (j+1) * [L, z^(j-1) zb^(j+1)] + (prod_i c_i) * 1
    let mut tail = ScalarPoly::one();
    for j in (1..=k).rev() {
        let coeff = tail.scale_rational(&rational(1, j as i64 + 1));
        witnesses.push(Witness { coeff, left: left.clone(), right: InvariantPoly::monomial(j - 1, j + 1)? });
        tail = &tail * &steps[(j - 1) as usize];
    }
    Ok(Certificate { target, scalar: tail, witnesses })
}

/// Certificate for an arbitrary invariant polynomial, by linearity.
pub fn reduce_certificate_poly(f: &InvariantPoly) -> Result<Certificate, Error> {
    let mut scalar = ScalarPoly::zero();
    let mut witnesses = Vec::new();
    for (&(p, q), c) in f.terms() {
        let cert = reduce_certificate(p, q)?;
        scalar += &(&cert.scalar * c);
        witnesses.extend(cert.witnesses.into_iter().map(|w| Witness { coeff: &w.coeff * c, ..w }));
    }
    Ok(Certificate { target: f.clone(), scalar, witnesses })
}

/// Replays the witnesses: true iff `target - scalar*1 = sum coeff_i [left_i, right_i]` exactly.
pub fn check_certificate(c: &Certificate) -> bool {
    let lhs = c.target.sub(&InvariantPoly::scalar(c.scalar.clone()));
    lhs == c.witness_sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hh0Entry {
    pub p: u32,
    pub q: u32,
    pub certificate: Certificate,
    pub checked: bool,
    pub phi: ScalarPoly,
}

impl Hh0Entry {
    pub fn passed(&self) -> bool {
        self.checked && self.phi == self.certificate.scalar
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hh0Report {
    pub max_degree: u32,
    pub entries: Vec<Hh0Entry>,
}

impl Hh0Report {
    pub fn failures(&self) -> impl Iterator<Item = &Hh0Entry> {
        self.entries.iter().filter(|e| !e.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Certifies every invariant monomial of degree at most `max_degree` and
/// compares each certificate scalar with the closed-form trace.
pub fn hh0_report(max_degree: u32) -> Result<Hh0Report, Error> {
    if max_degree % 2 == 1 || max_degree > HH0_MAX_DEGREE {
        return Err(Error::DegreeOutOfRange { degree: max_degree, bound: HH0_MAX_DEGREE });
    }
    let entries = monomials_up_to(max_degree).into_iter().map(|(p, q)| hh0_entry(p, q)).collect::<Result<_, _>>()?;
    Ok(Hh0Report { max_degree, entries })
}

pub fn hh0_entry(p: u32, q: u32) -> Result<Hh0Entry, Error> {
    let certificate = reduce_certificate(p, q)?;
    let checked = check_certificate(&certificate);
    let phi = phi(&certificate.target).0;
    Ok(Hh0Entry { p, q, certificate, checked, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::level_factor;

    #[test]
    fn unit_certificate() {
        let c = reduce_certificate(0, 0).unwrap();
        assert!(c.scalar.is_one());
        assert!(c.witnesses.is_empty());
        assert!(check_certificate(&c));
    }

    #[test]
    fn off_diagonal_certificate() {
        let c = reduce_certificate(2, 0).unwrap();
        assert!(c.scalar.is_zero());
        assert_eq!(c.witnesses.len(), 1);
        assert_eq!(c.witnesses[0].left, InvariantPoly::z_zb());
        assert_eq!(c.min_witness_h1(), Some(-1));
        assert!(check_certificate(&c));
    }

    #[test]
    fn diagonal_certificates() {
        let c = reduce_certificate(1, 1).unwrap();
        assert_eq!(c.scalar, &ScalarPoly::i_h1() * &level_factor(1));
        assert!(check_certificate(&c));

        let c4 = reduce_certificate(4, 4).unwrap();
        assert!(check_certificate(&c4));
        assert_eq!(c4.scalar, phi(&c4.target).0);
    }

    #[test]
    fn mutated_certificate_fails() {
        let mut c = reduce_certificate(1, 1).unwrap();
        c.scalar = &c.scalar + &ScalarPoly::h1();
        assert!(!check_certificate(&c));
    }

    #[test]
    fn descent_scalars_match_level_factors() {
        for j in 1..=6 {
            assert_eq!(descent_scalar(j).unwrap(), &ScalarPoly::i_h1() * &level_factor(j));
        }
    }

    #[test]
    fn parity_violation() {
        assert_eq!(reduce_certificate(1, 0), Err(Error::ParityViolation { p: 1, q: 0 }));
    }

    #[test]
    fn polynomial_certificate() {
        let f = InvariantPoly::monomial(2, 2)
            .unwrap()
            .add(&InvariantPoly::monomial(3, 1).unwrap().scale(&ScalarPoly::h2()));
        let c = reduce_certificate_poly(&f).unwrap();
        assert!(check_certificate(&c));
        assert_eq!(c.scalar, phi(&f).0);
    }

    #[test]
    fn report_sizes() {
        let r0 = hh0_report(0).unwrap();
        assert_eq!(r0.entries.len(), 1);
        assert!(r0.entries[0].certificate.scalar.is_one());
        let r4 = hh0_report(4).unwrap();
        assert_eq!(r4.entries.len(), 9);
        assert!(r4.all_passed());
        assert!(hh0_report(3).is_err());
        assert!(hh0_report(HH0_MAX_DEGREE + 2).is_err());
    }
}
