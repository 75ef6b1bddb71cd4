//! Normal-form arithmetic in `R`.
//!
//! Every element is stored as a finite sum of `c * z^p * zb^q * g^eps`. The
//! product is computed by rewriting with the single relation
//! `zb*z -> z*zb - i*h1*(1 + 2*h2*g)` and the sign rule `g*z = -z*g`,
//! `g*zb = -zb*g`, `g^2 = 1`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::linear::LinearCombination;
use crate::scalars::{rational, GaussianRational, ScalarPoly};

/// `z^p * zb^q * g^gamma`. The derived order is lexicographic on `(gamma, p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub gamma: bool,
    pub p: u32,
    pub q: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { gamma: false, p: 0, q: 0 };

    pub fn new(p: u32, q: u32, gamma: bool) -> Self {
        Monomial { gamma, p, q }
    }

    /// Degree in `z` and `zb` (the `h1` part of the grading lives in the coefficient).
    pub fn degree(&self) -> u32 {
        self.p + self.q
    }
}

/// An element of `R` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SrcElement(pub(crate) LinearCombination<Monomial>);

/// Extended degree of one term: `|z| = |zb| = 1`, `|h1| = 2`, `|h2| = |g| = 0`.
fn term_degree(m: &Monomial, h1_exp: i32) -> i64 {
    m.degree() as i64 + 2 * h1_exp as i64
}

impl SrcElement {
    pub fn zero() -> Self {
        SrcElement(LinearCombination::zero())
    }

    pub fn one() -> Self {
        Self::scalar(ScalarPoly::one())
    }

    pub fn scalar(c: ScalarPoly) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: ScalarPoly) -> Self {
        SrcElement(LinearCombination::term(m, c))
    }

    pub fn monomial(p: u32, q: u32, gamma: bool) -> Self {
        Self::term(Monomial::new(p, q, gamma), ScalarPoly::one())
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, false)
    }

    pub fn zb() -> Self {
        Self::monomial(0, 1, false)
    }

    pub fn gamma() -> Self {
        Self::monomial(0, 0, true)
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

    /// Terms in canonical `(eps, p, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ScalarPoly)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ScalarPoly {
        self.0.coeff(m)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ScalarPoly)>>(iter: I) -> Self {
        SrcElement(iter.into_iter().collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        SrcElement(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        SrcElement(self.0.sub(&o.0))
    }

    pub fn neg(&self) -> Self {
        SrcElement(self.0.neg())
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        SrcElement(self.0.scale(c))
    }

    /// Division by a central scalar. Only invertible (monomial) scalars are allowed.
    pub fn div_scalar(&self, c: &ScalarPoly) -> Result<Self, Error> {
        Ok(self.scale(&c.inverse()?))
    }

    /// Exact product in normal form.
    pub fn mul(&self, o: &Self) -> Self {
        let mut engine = Reorderer::default();
        engine.mul(self, o)
    }

    /// `self*o - o*self`.
    pub fn commutator(&self, o: &Self) -> Self {
        let mut engine = Reorderer::default();
        engine.mul(self, o).sub(&engine.mul(o, self))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut engine = Reorderer::default();
        let mut acc = Self::one();
        for _ in 0..k {
            acc = engine.mul(&acc, self);
        }
        acc
    }

    /// The degree-`d` part under the extended grading.
    pub fn homogeneous_component(&self, d: i64) -> Self {
        let mut out = LinearCombination::zero();
        for (m, c) in self.0.iter() {
            let part = ScalarPoly::from_terms(
                c.terms().filter(|(e, _)| term_degree(m, e.0) == d).map(|(e, v)| (*e, v.clone())),
            );
            out.add_term(*m, &part);
        }
        SrcElement(out)
    }

    /// All extended degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> =
            self.0.iter().flat_map(|(m, c)| c.terms().map(move |(e, _)| term_degree(m, e.0))).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// `Some(d)` when every term has extended degree `d`; zero counts as homogeneous of any degree.
    pub fn homogeneous_degree(&self) -> Option<Option<i64>> {
        match self.degrees().as_slice() {
            [] => Some(None),
            [d] => Some(Some(*d)),
            _ => None,
        }
    }

    /// True when every term has `h2` exponent at most its `h1` exponent.
    pub fn h2_bounded_by_h1(&self) -> bool {
        self.0.iter().all(|(_, c)| c.terms().all(|(e, _)| (e.1 as i64) <= e.0 as i64))
    }

    pub fn at_h2_zero(&self) -> Self {
        SrcElement(self.0.map_coeffs(ScalarPoly::at_h2_zero))
    }

    /// Drops every term carrying `g`.
    pub fn eps_projection(&self) -> Self {
        SrcElement(self.0.filter(|m| !m.gamma))
    }

    /// Largest `p + q` among the terms.
    pub fn max_degree(&self) -> Option<u32> {
        self.0.iter().map(|(m, _)| m.degree()).max()
    }
}

impl fmt::Display for SrcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_element(self))
    }
}

/// Memoised reordering of `zb^q * z^p` into normal form.
///
/// The table is owned by one multiplication (or a chain of them), so no
/// synchronisation is needed.
#[derive(Default)]
pub(crate) struct Reorderer {
    memo: BTreeMap<(u32, u32), SrcElement>,
}

impl Reorderer {
    pub(crate) fn mul(&mut self, a: &SrcElement, b: &SrcElement) -> SrcElement {
        let mut out = LinearCombination::zero();
        for (m1, c1) in a.0.iter() {
            for (m2, c2) in b.0.iter() {
                let coeff = c1 * c2;
                self.accumulate_monomial_product(&mut out, m1, m2, &coeff);
            }
        }
        SrcElement(out)
    }

    pub(crate) fn monomial_product(&mut self, m1: &Monomial, m2: &Monomial) -> SrcElement {
        let mut out = LinearCombination::zero();
        self.accumulate_monomial_product(&mut out, m1, m2, &ScalarPoly::one());
        SrcElement(out)
    }

    /// `z^p1 zb^q1 g^e1 * z^p2 zb^q2 g^e2`: move `g^e1` past `z^p2 zb^q2`,
    /// reorder `zb^q1 z^p2`, then move the inner `g` past `zb^q2`.
    fn accumulate_monomial_product(
        &mut self,
        out: &mut LinearCombination<Monomial>,
        m1: &Monomial,
        m2: &Monomial,
        coeff: &ScalarPoly,
    ) {
        let sign1 = m1.gamma && (m2.p + m2.q) % 2 == 1;
        let middle = self.reorder(m1.q, m2.p);
        for (m, c) in middle.0.iter() {
            let sign2 = m.gamma && m2.q % 2 == 1;
            let key = Monomial::new(m1.p + m.p, m.q + m2.q, m.gamma ^ m1.gamma ^ m2.gamma);
            let mut term = c * coeff;
            if sign1 ^ sign2 {
                term = -term;
            }
            out.add_term(key, &term);
        }
    }

    /// Normal form of `zb^q * z^p`.
    fn reorder(&mut self, q: u32, p: u32) -> SrcElement {
        if q == 0 {
            return SrcElement::monomial(p, 0, false);
        }
        if p == 0 {
            return SrcElement::monomial(0, q, false);
        }
        if let Some(hit) = self.memo.get(&(q, p)) {
            return hit.clone();
        }
        let result = if p == 1 {
            // zb^q z = (zb^(q-1) z) zb - i h1 zb^(q-1) - 2 i h1 h2 zb^(q-1) g
            let prev = self.reorder(q - 1, 1);
            let mut out = LinearCombination::zero();
            for (m, c) in prev.0.iter() {
                let c = if m.gamma { -c } else { c.clone() };
                out.add_term(Monomial::new(m.p, m.q + 1, m.gamma), &c);
            }
            let i_h1 = ScalarPoly::i_h1();
            out.add_term(Monomial::new(0, q - 1, false), &-&i_h1);
            let two_i_h1_h2 = ScalarPoly::monomial(GaussianRational::new(rational(0, 1), rational(2, 1)), 1, 1);
            out.add_term(Monomial::new(0, q - 1, true), &-&two_i_h1_h2);
            SrcElement(out)
        } else {
            // zb^q z^p = (zb^q z^(p-1)) z, and z^a zb^b g^e z = (-1)^e z^a (zb^b z) g^e
            let prev = self.reorder(q, p - 1);
            let mut out = LinearCombination::zero();
            for (m, c) in prev.0.iter() {
                let c = if m.gamma { -c } else { c.clone() };
                let inner = self.reorder(m.q, 1);
                for (mi, ci) in inner.0.iter() {
                    out.add_term(Monomial::new(m.p + mi.p, mi.q, mi.gamma ^ m.gamma), &(ci * &c));
                }
            }
            SrcElement(out)
        };
        self.memo.insert((q, p), result.clone());
        result
    }
}

/// Letters of a word in the `(x, y)` presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XyLetter {
    X,
    Y,
    Gamma,
}

impl XyLetter {
    /// `x = (z + zb)/2`, `y = (z - zb)/(2i)`, `g = g`.
    pub fn to_element(self) -> SrcElement {
        let half = ScalarPoly::from_rational(rational(1, 2));
        match self {
            XyLetter::X => SrcElement::z().add(&SrcElement::zb()).scale(&half),
            XyLetter::Y => {
                let minus_half_i = ScalarPoly::constant(GaussianRational::new(rational(0, 1), rational(-1, 2)));
                SrcElement::z().sub(&SrcElement::zb()).scale(&minus_half_i)
            }
            XyLetter::Gamma => SrcElement::gamma(),
        }
    }
}

/// Normalises a linear combination of words in `x`, `y`, `g`.
pub fn from_xy(words: &[(ScalarPoly, Vec<XyLetter>)]) -> SrcElement {
    let mut engine = Reorderer::default();
    let mut out = SrcElement::zero();
    for (c, word) in words {
        let mut acc = SrcElement::scalar(c.clone());
        for letter in word {
            acc = engine.mul(&acc, &letter.to_element());
        }
        out = out.add(&acc);
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn i_h1() -> ScalarPoly {
        ScalarPoly::i_h1()
    }

    fn c(re: (i64, i64), im: (i64, i64), a: i32, b: u32) -> ScalarPoly {
        ScalarPoly::monomial(GaussianRational::new(rational(re.0, re.1), rational(im.0, im.1)), a, b)
    }

    /// i*h1*(1 + 2*h2*g)
    fn relation_rhs() -> SrcElement {
        SrcElement::scalar(i_h1()).add(&SrcElement::gamma().scale(&c((0, 1), (2, 1), 1, 1)))
    }

    #[test]
    fn basic_relation() {
        let z = SrcElement::z();
        let zb = SrcElement::zb();
        assert_eq!(z.mul(&zb).sub(&zb.mul(&z)), relation_rhs());
        assert_eq!(SrcElement::gamma().mul(&SrcElement::gamma()), SrcElement::one());
        assert_eq!(SrcElement::gamma().mul(&z), SrcElement::monomial(1, 0, true).neg());
        assert_eq!(SrcElement::gamma().mul(&zb), SrcElement::monomial(0, 1, true).neg());
    }

    #[test]
    fn z_squared_with_zb() {
        let lhs = SrcElement::monomial(2, 0, false).commutator(&SrcElement::zb());
        assert_eq!(lhs, SrcElement::z().scale(&c((0, 1), (2, 1), 1, 0)));
    }

    #[test]
    fn z_with_zb_power() {
        for q in 1..=8u32 {
            let lhs = SrcElement::z().commutator(&SrcElement::monomial(0, q, false));
            let mut rhs = SrcElement::monomial(0, q - 1, false).scale(&i_h1().scale_rational(&rational(q as i64, 1)));
            if q % 2 == 1 {
                rhs = rhs.add(&SrcElement::monomial(0, q - 1, true).scale(&c((0, 1), (2, 1), 1, 1)));
            }
            assert_eq!(lhs, rhs, "q = {q}");
        }
    }

    #[test]
    fn from_xy_examples() {
        let half = ScalarPoly::from_rational(rational(1, 2));
        let yx_minus_xy = from_xy(&[
            (ScalarPoly::one(), vec![XyLetter::Y, XyLetter::X]),
            (ScalarPoly::from_int(-1), vec![XyLetter::X, XyLetter::Y]),
        ]);
        let expected = SrcElement::scalar(ScalarPoly::h1())
            .add(&SrcElement::gamma().scale(&ScalarPoly::h1().shift(0, 1).scale_rational(&rational(2, 1))))
            .scale(&half);
        assert_eq!(yx_minus_xy, expected);

        let x = from_xy(&[(ScalarPoly::one(), vec![XyLetter::X])]);
        assert_eq!(x, SrcElement::z().add(&SrcElement::zb()).scale(&half));

        // x^2 + y^2 = (z zb + zb z)/2 = z zb - i h1 (1 + 2 h2 g)/2
        let sq = from_xy(&[
            (ScalarPoly::one(), vec![XyLetter::X, XyLetter::X]),
            (ScalarPoly::one(), vec![XyLetter::Y, XyLetter::Y]),
        ]);
        let zzb = SrcElement::monomial(1, 1, false);
        let via_mul = zzb.add(&SrcElement::zb().mul(&SrcElement::z())).scale(&half);
        assert_eq!(sq, via_mul);
        assert_eq!(sq, zzb.sub(&relation_rhs().scale(&half)));
    }

    #[test]
    fn homogeneous_components() {
        let e = SrcElement::monomial(1, 1, false).add(&SrcElement::scalar(ScalarPoly::h1()));
        assert_eq!(e.homogeneous_component(2), e);
        assert!(SrcElement::monomial(2, 0, false).homogeneous_component(0).is_zero());
        let k = SrcElement::monomial(2, 0, false).commutator(&SrcElement::monomial(0, 2, false));
        assert_eq!(k.homogeneous_component(4), k);
    }

    #[test]
    fn division_by_non_monomial_is_rejected() {
        let s = &ScalarPoly::one() + &ScalarPoly::h2();
        assert!(SrcElement::z().div_scalar(&s).is_err());
        let two_i_h1 = c((0, 1), (2, 1), 1, 0);
        let d = SrcElement::z().div_scalar(&two_i_h1).unwrap();
        assert_eq!(d.scale(&two_i_h1), SrcElement::z());
    }

    pub(crate) fn arb_scalar() -> impl Strategy<Value = ScalarPoly> {
        proptest::collection::vec(((0i32..=2, 0u32..=2), -3i64..=3, -3i64..=3), 1..3).prop_map(|v| {
            ScalarPoly::from_terms(
                v.into_iter().map(|(e, re, im)| (e, GaussianRational::new(rational(re, 1), rational(im, 2)))),
            )
        })
    }

    pub(crate) fn arb_element(max_deg: u32) -> impl Strategy<Value = SrcElement> {
        proptest::collection::vec((0..=max_deg, 0..=max_deg, any::<bool>(), arb_scalar()), 1..4).prop_map(move |v| {
            SrcElement::from_terms(v.into_iter().map(|(p, q, g, c)| {
                let q = q.min(max_deg - p);
                (Monomial::new(p, q, g), c)
            }))
        })
    }

    fn arb_homogeneous() -> impl Strategy<Value = SrcElement> {
        (0u32..=5, 0u32..=5, any::<bool>(), 0i32..=2, 0u32..=2, -3i64..=3).prop_map(|(p, q, g, a, b, n)| {
            SrcElement::term(Monomial::new(p, q, g), ScalarPoly::monomial(GaussianRational::from_int(n), a, b))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_is_associative(a in arb_element(4), b in arb_element(4), c in arb_element(4)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn jacobi(a in arb_element(3), b in arb_element(3), c in arb_element(3)) {
            let j = a.commutator(&b.commutator(&c))
                .add(&b.commutator(&c.commutator(&a)))
                .add(&c.commutator(&a.commutator(&b)));
            prop_assert!(j.is_zero());
        }

        #[test]
        fn product_is_graded(a in arb_homogeneous(), b in arb_homogeneous()) {
            let da = a.homogeneous_degree().unwrap();
            let db = b.homogeneous_degree().unwrap();
            let prod = a.mul(&b);
            match (da, db, prod.homogeneous_degree()) {
                (Some(x), Some(y), Some(Some(d))) => prop_assert_eq!(d, x + y),
                (_, _, Some(None)) => {}
                other => prop_assert!(false, "not homogeneous: {:?}", other),
            }
        }

        #[test]
        fn components_sum_back(a in arb_element(5)) {
            let mut sum = SrcElement::zero();
            for d in a.degrees() {
                sum = sum.add(&a.homogeneous_component(d));
            }
            prop_assert_eq!(sum, a);
        }

        #[test]
        fn h2_bound_is_closed(a in arb_element(4), b in arb_element(4)) {
            let bounded = |e: &SrcElement| SrcElement::from_terms(e.terms().map(|(m, c)| {
                (*m, ScalarPoly::from_terms(c.terms().filter(|(x, _)| x.1 as i32 <= x.0).map(|(x, v)| (*x, v.clone()))))
            }));
            let (a, b) = (bounded(&a), bounded(&b));
            prop_assert!(a.mul(&b).h2_bounded_by_h1());
        }
    }
}
