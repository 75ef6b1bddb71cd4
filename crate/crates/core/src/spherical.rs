//! The spherical subalgebra `eRe`, `e = (1 + g)/2`.
//!
//! An invariant polynomial `f = sum c z^p zb^q` (with `p + q` even) is
//! identified with `f*e`, reading each `z^p zb^q` as the normal-ordered
//! element of `R`. Since `g*e = e`, products fold back onto the
//! invariant polynomials by dropping `g`.
//!
//! This module also carries the symmetric-ordering Moyal product with
//! `[z, zb] = i*h1`, which is independent of the rewriting engine and serves
//! as its `h2 = 0` oracle.

use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Monomial, Reorderer, SrcElement};
use crate::error::Error;
use crate::linear::LinearCombination;
use crate::scalars::{binomial, factorial, falling, rational, ScalarPoly};

/// Commutative polynomial in two variables keyed by `(p, q)` exponents.
pub type PairPoly = LinearCombination<(u32, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct InvariantPoly(PairPoly);

impl InvariantPoly {
    pub fn zero() -> Self {
        InvariantPoly(PairPoly::zero())
    }

    pub fn one() -> Self {
        InvariantPoly(PairPoly::term((0, 0), ScalarPoly::one()))
    }

    pub fn scalar(c: ScalarPoly) -> Self {
        InvariantPoly(PairPoly::term((0, 0), c))
    }

    /// `z^p zb^q`; rejected unless `p + q` is even.
    pub fn monomial(p: u32, q: u32) -> Result<Self, Error> {
        Self::from_pair_poly(PairPoly::term((p, q), ScalarPoly::one()))
    }

    /// `z*zb`, the generator of the U(1) action.
    pub fn z_zb() -> Self {
        InvariantPoly(PairPoly::term((1, 1), ScalarPoly::one()))
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), ScalarPoly)>>(iter: I) -> Result<Self, Error> {
        Self::from_pair_poly(iter.into_iter().collect())
    }

    pub fn from_pair_poly(poly: PairPoly) -> Result<Self, Error> {
        if let Some((&(p, q), _)) = poly.iter().find(|((p, q), _)| (p + q) % 2 == 1) {
            return Err(Error::ParityViolation { p, q });
        }
        Ok(InvariantPoly(poly))
    }

    /// Reads an element of `R` with no `g` terms as an invariant polynomial.
    pub fn from_element(e: &SrcElement) -> Result<Self, Error> {
        if e.terms().any(|(m, _)| m.gamma) {
            return Err(Error::NotSpherical);
        }
        Self::from_pair_poly(e.terms().map(|(m, c)| ((m.p, m.q), c.clone())).collect())
    }

    /// The invariant polynomial `h` with `h*e = a*e`, for even `a`: every `g` folds to 1.
    pub fn fold(a: &SrcElement) -> Result<Self, Error> {
        Self::from_pair_poly(a.terms().map(|(m, c)| ((m.p, m.q), c.clone())).collect())
    }

    pub fn as_pair_poly(&self) -> &PairPoly {
        &self.0
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ScalarPoly)> {
        self.0.iter()
    }

    pub fn coeff(&self, p: u32, q: u32) -> ScalarPoly {
        self.0.coeff(&(p, q))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        InvariantPoly(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        InvariantPoly(self.0.sub(&o.0))
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        InvariantPoly(self.0.scale(c))
    }

    pub fn at_h2_zero(&self) -> Self {
        InvariantPoly(self.0.map_coeffs(ScalarPoly::at_h2_zero))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.0.iter().map(|((p, q), _)| p + q).max()
    }

    /// The polynomial as a normal-ordered element of `R`, without the idempotent.
    pub fn to_element(&self) -> SrcElement {
        SrcElement::from_terms(self.0.iter().map(|(&(p, q), c)| (Monomial::new(p, q, false), c.clone())))
    }

    /// `f*e` in `R`.
    pub fn embed(&self) -> SrcElement {
        self.to_element().mul(&idempotent())
    }

    /// Product induced by `eRe`.
    pub fn star(&self, o: &Self) -> Self {
        let mut engine = Reorderer::default();
        star_with(&mut engine, self, o)
    }

    pub fn star_commutator(&self, o: &Self) -> Self {
        let mut engine = Reorderer::default();
        star_with(&mut engine, self, o).sub(&star_with(&mut engine, o, self))
    }

    /// Symmetric-ordering Moyal product with `[z, zb] = i*h1`.
    pub fn moyal_star(&self, o: &Self) -> Self {
        InvariantPoly(moyal_product(&self.0, &o.0, &ScalarPoly::i_h1()))
    }

    /// `i*h1*(z d/dz - zb d/dzb) g`.
    pub fn euler_derivation(&self) -> Self {
        InvariantPoly(
            self.0
                .iter()
                .map(|(&(p, q), c)| {
                    let w = ScalarPoly::i_h1().scale_rational(&rational(p as i64 - q as i64, 1));
                    ((p, q), c * &w)
                })
                .collect(),
        )
    }

    /// Weyl symbol of the normal-ordered element at `h2 = 0`.
    pub fn normal_to_weyl(&self) -> Self {
        InvariantPoly(ordering_shift(&self.0, &ScalarPoly::i_h1().scale_rational(&rational(1, 2))))
    }

    /// Inverse of [`InvariantPoly::normal_to_weyl`].
    pub fn weyl_to_normal(&self) -> Self {
        InvariantPoly(ordering_shift(&self.0, &ScalarPoly::i_h1().scale_rational(&rational(-1, 2))))
    }
}

impl fmt::Display for InvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_element(&self.to_element()))
    }
}

/// `e = (1 + g)/2`.
pub fn idempotent() -> SrcElement {
    SrcElement::one().add(&SrcElement::gamma()).scale(&ScalarPoly::from_rational(rational(1, 2)))
}

pub(crate) fn star_with(engine: &mut Reorderer, f: &InvariantPoly, g: &InvariantPoly) -> InvariantPoly {
    let prod = engine.mul(&f.to_element(), &g.to_element());
    InvariantPoly::fold(&prod).expect("the relations preserve the parity of p + q")
}

/// Symmetric-ordering Moyal product of two-variable symbols with `[x, y] = hbar`:
/// `f * g = sum_n (hbar/2)^n / n! sum_k binom(n,k) (-1)^k (d_x^(n-k) d_y^k f)(d_x^k d_y^(n-k) g)`.
pub fn moyal_product(f: &PairPoly, g: &PairPoly, hbar: &ScalarPoly) -> PairPoly {
    let mut out = PairPoly::zero();
    for (&(a1, b1), c1) in f.iter() {
        for (&(a2, b2), c2) in g.iter() {
            let coeff = c1 * c2;
            for (key, c) in moyal_monomials(a1, b1, a2, b2, hbar).iter() {
                out.add_term(*key, &(c * &coeff));
            }
        }
    }
    out
}

/// Moyal product of `x^a1 y^b1` and `x^a2 y^b2`.
pub(crate) fn moyal_monomials(a1: u32, b1: u32, a2: u32, b2: u32, hbar: &ScalarPoly) -> PairPoly {
    let mut out = PairPoly::zero();
    let half_hbar = hbar.scale_rational(&rational(1, 2));
    let max_n = (a1 + b1).min(a2 + b2);
    let mut h_pow = ScalarPoly::one();
    for n in 0..=max_n {
        let pref = h_pow.scale_rational(&(rational(1, 1) / factorial(n)));
        for k in 0..=n {
            let (dxf, dyf) = (n - k, k);
            let (dxg, dyg) = (k, n - k);
            if dxf > a1 || dyf > b1 || dxg > a2 || dyg > b2 {
                continue;
            }
            let mut r = binomial(n, k) * falling(a1, dxf) * falling(b1, dyf) * falling(a2, dxg) * falling(b2, dyg);
            if k % 2 == 1 {
                r = -r;
            }
            out.add_term((a1 - dxf + a2 - dxg, b1 - dyf + b2 - dyg), &pref.scale_rational(&r));
        }
        h_pow = &h_pow * &half_hbar;
    }
    out
}

/// `exp(s * d_x d_y) f`, the change of ordering between normal and symmetric symbols.
pub fn ordering_shift(f: &PairPoly, s: &ScalarPoly) -> PairPoly {
    let mut out = PairPoly::zero();
    for (&(p, q), c) in f.iter() {
        let mut s_pow = ScalarPoly::one();
        for k in 0..=p.min(q) {
            let r = falling(p, k) * falling(q, k) / factorial(k);
            out.add_term((p - k, q - k), &(c * &s_pow).scale_rational(&r));
            s_pow = &s_pow * s;
        }
    }
    out
}

/// All invariant monomials `z^p zb^q` with `p + q = d`, in `(p, q)` order.
pub fn monomials_of_degree(d: u32) -> Vec<(u32, u32)> {
    if d % 2 == 1 {
        return Vec::new();
    }
    (0..=d).map(|p| (p, d - p)).collect()
}

/// All invariant monomials of degree at most `d`.
pub fn monomials_up_to(d: u32) -> Vec<(u32, u32)> {
    (0..=d).step_by(2).flat_map(monomials_of_degree).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::GaussianRational;

    fn m(p: u32, q: u32) -> InvariantPoly {
        InvariantPoly::monomial(p, q).unwrap()
    }

    fn i_h1_times(n: i64) -> ScalarPoly {
        ScalarPoly::i_h1().scale_rational(&rational(n, 1))
    }

    #[test]
    fn embed_examples() {
        assert_eq!(InvariantPoly::one().embed(), idempotent());
        let e = idempotent();
        assert_eq!(e.mul(&e), e);
        assert_eq!(InvariantPoly::z_zb().embed(), SrcElement::monomial(1, 1, false).mul(&e));
        assert_eq!(
            InvariantPoly::z_zb().embed(),
            SrcElement::monomial(1, 1, false)
                .add(&SrcElement::monomial(1, 1, true))
                .scale(&ScalarPoly::from_rational(rational(1, 2)))
        );
    }

    #[test]
    fn parity_is_enforced() {
        assert_eq!(InvariantPoly::monomial(1, 0), Err(Error::ParityViolation { p: 1, q: 0 }));
        assert_eq!(InvariantPoly::from_element(&SrcElement::gamma()), Err(Error::NotSpherical));
    }

    #[test]
    fn unit_law() {
        for &(p, q) in &monomials_up_to(6) {
            let f = m(p, q);
            assert_eq!(f.star(&InvariantPoly::one()), f);
            assert_eq!(InvariantPoly::one().star(&f), f);
            assert_eq!(f.moyal_star(&InvariantPoly::one()), f);
        }
    }

    #[test]
    fn z2_zb2_star_commutator() {
        // 4 i h1 z zb + 2 h1^2 + 4 h1^2 h2
        let expected = InvariantPoly::from_terms([
            ((1, 1), i_h1_times(4)),
            ((0, 0), ScalarPoly::monomial(GaussianRational::from_int(2), 2, 0)),
            ((0, 0), ScalarPoly::monomial(GaussianRational::from_int(4), 2, 1)),
        ])
        .unwrap();
        assert_eq!(m(2, 0).star_commutator(&m(0, 2)), expected);
        // brute force in R: fold of the R-commutator
        let r = m(2, 0).to_element().commutator(&m(0, 2).to_element());
        assert_eq!(InvariantPoly::fold(&r).unwrap(), expected);
    }

    #[test]
    fn commutator_transport() {
        for &(p1, q1) in &monomials_up_to(4) {
            for &(p2, q2) in &monomials_up_to(4) {
                let (f, g) = (m(p1, q1), m(p2, q2));
                assert_eq!(f.star_commutator(&g).embed(), f.embed().commutator(&g.embed()));
            }
        }
    }

    #[test]
    fn z_zb_bracket_is_diagonal_with_opposite_weight() {
        // The rewriting relation forces [z zb, z^p zb^q] = -i h1 (p - q) z^p zb^q.
        for &(p, q) in &[(2, 0), (3, 1), (2, 2), (0, 4)] {
            let k = InvariantPoly::z_zb().star_commutator(&m(p, q));
            assert_eq!(k, m(p, q).euler_derivation().scale(&ScalarPoly::from_int(-1)));
        }
    }

    #[test]
    fn euler_examples() {
        assert!(InvariantPoly::z_zb().euler_derivation().is_zero());
        assert_eq!(m(2, 0).euler_derivation(), m(2, 0).scale(&i_h1_times(2)));
        assert_eq!(m(3, 1).euler_derivation(), m(3, 1).scale(&i_h1_times(2)));
    }

    #[test]
    fn moyal_quadratic_bracket() {
        let k = InvariantPoly::z_zb().moyal_star(&m(2, 0)).sub(&m(2, 0).moyal_star(&InvariantPoly::z_zb()));
        assert_eq!(k, m(2, 0).scale(&i_h1_times(-2)));
    }

    #[test]
    fn moyal_generators() {
        let z = PairPoly::term((1, 0), ScalarPoly::one());
        let zb = PairPoly::term((0, 1), ScalarPoly::one());
        let half_i_h1 = ScalarPoly::i_h1().scale_rational(&rational(1, 2));
        let mut expected = PairPoly::term((1, 1), ScalarPoly::one());
        expected.add_term((0, 0), &half_i_h1);
        assert_eq!(moyal_product(&z, &zb, &ScalarPoly::i_h1()), expected);
    }

    #[test]
    fn ordering_maps_are_inverse() {
        for &(p, q) in &monomials_up_to(8) {
            let f = m(p, q);
            assert_eq!(f.normal_to_weyl().weyl_to_normal(), f);
        }
    }

    #[test]
    fn degeneration_in_weyl_symbols() {
        for &(p1, q1) in &monomials_up_to(6) {
            for &(p2, q2) in &monomials_up_to(6) {
                let (f, g) = (m(p1, q1), m(p2, q2));
                let lhs = f.star(&g).at_h2_zero().normal_to_weyl();
                let rhs = f.normal_to_weyl().moyal_star(&g.normal_to_weyl());
                assert_eq!(lhs, rhs, "({p1},{q1}) * ({p2},{q2})");
            }
        }
    }

    #[test]
    fn same_symbol_comparison_differs() {
        // Normal-ordered and symmetric symbols are different coordinates on the same algebra.
        assert_ne!(m(2, 0).star(&m(0, 2)).at_h2_zero(), m(2, 0).moyal_star(&m(0, 2)));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(4).len(), 9);
        assert_eq!(monomials_up_to(0), alloc::vec![(0, 0)]);
    }
}
