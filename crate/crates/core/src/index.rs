//! Characteristic-class generating functions over formal curvature symbols,
//! the degree-`(n-1)` index form, and the flat local model
//! `W_{n-1} (x) R` with its trace density.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Monomial, Reorderer, SrcElement};
use crate::error::Error;
use crate::linear::LinearCombination;
use crate::scalars::{factorial, rational, GaussianRational, ScalarPoly, TruncSeries};
use crate::spherical::{moyal_monomials, InvariantPoly, PairPoly};
use crate::trace::{level_product, phi};

/// Exponents of commuting curvature symbols, each of form degree 2.
pub type FormMonomial = BTreeMap<String, u32>;

fn form_degree(m: &FormMonomial) -> u32 {
    2 * m.values().sum::<u32>()
}

/// Polynomial in commuting degree-2 symbols, truncated above `max_form_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormPoly {
    terms: LinearCombination<FormMonomial>,
    max_form_degree: u32,
}

impl FormPoly {
    pub fn zero(max_form_degree: u32) -> Self {
        FormPoly { terms: LinearCombination::zero(), max_form_degree }
    }

    pub fn scalar(c: ScalarPoly, max_form_degree: u32) -> Self {
        FormPoly { terms: LinearCombination::term(FormMonomial::new(), c), max_form_degree }
    }

    pub fn one(max_form_degree: u32) -> Self {
        Self::scalar(ScalarPoly::one(), max_form_degree)
    }

    /// A single curvature symbol.
    pub fn symbol(name: &str, max_form_degree: u32) -> Self {
        let mut m = FormMonomial::new();
        m.insert(String::from(name), 1);
        Self::from_terms([(m, ScalarPoly::one())], max_form_degree)
    }

    pub fn from_terms<I: IntoIterator<Item = (FormMonomial, ScalarPoly)>>(iter: I, max_form_degree: u32) -> Self {
        let terms = iter
            .into_iter()
            .map(|(mut m, c)| {
                m.retain(|_, e| *e > 0);
                (m, c)
            })
            .filter(|(m, _)| form_degree(m) <= max_form_degree)
            .collect();
        FormPoly { terms, max_form_degree }
    }

    pub fn max_form_degree(&self) -> u32 {
        self.max_form_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &ScalarPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, m: &FormMonomial) -> ScalarPoly {
        self.terms.coeff(m)
    }

    pub fn with_max_degree(&self, max_form_degree: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())), max_form_degree)
    }

    pub fn add(&self, o: &Self) -> Self {
        let d = self.max_form_degree.min(o.max_form_degree);
        FormPoly { terms: self.with_max_degree(d).terms.add(&o.with_max_degree(d).terms), max_form_degree: d }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&ScalarPoly::from_int(-1)))
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        FormPoly { terms: self.terms.scale(c), max_form_degree: self.max_form_degree }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.max_form_degree.min(o.max_form_degree);
        let mut terms = LinearCombination::zero();
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in o.terms.iter() {
                if form_degree(m1) + form_degree(m2) > d {
                    continue;
                }
                let mut m = m1.clone();
                for (s, e) in m2 {
                    *m.entry(s.clone()).or_insert(0) += e;
                }
                terms.add_term(m, &(c1 * c2));
            }
        }
        FormPoly { terms, max_form_degree: d }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(FormPoly::one(self.max_form_degree), |acc, _| acc.mul(self))
    }

    /// The form-degree-`d` part.
    pub fn component(&self, d: u32) -> Self {
        FormPoly { terms: self.terms.filter(|m| form_degree(m) == d), max_form_degree: self.max_form_degree }
    }

    pub fn degree_zero_part(&self) -> ScalarPoly {
        self.terms.coeff(&FormMonomial::new())
    }

    pub fn at_h2_zero(&self) -> Self {
        FormPoly { terms: self.terms.map_coeffs(ScalarPoly::at_h2_zero), max_form_degree: self.max_form_degree }
    }

    /// `sum_k s_k x^k`; `x` must be nilpotent (no form-degree-0 part).
    pub fn compose(series: &TruncSeries, x: &FormPoly) -> Result<FormPoly, Error> {
        if !x.degree_zero_part().is_zero() {
            return Err(Error::NonzeroDegreeZero);
        }
        let d = x.max_form_degree;
        let mut out = FormPoly::zero(d);
        let mut pow = FormPoly::one(d);
        for k in 0..=series.order() {
            if pow.is_zero() {
                break;
            }
            out = out.add(&pow.scale(series.coeff(k)));
            pow = pow.mul(x);
        }
        Ok(out)
    }
}

impl fmt::Display for FormPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_form(self))
    }
}

/// `sinh(x/2)/(x/2) = sum_j x^(2j) / (4^j (2j+1)!)`.
pub fn sinh_quotient(order: usize) -> TruncSeries {
    let coeffs = (0..=order)
        .map(|k| {
            if k % 2 == 1 {
                return ScalarPoly::zero();
            }
            let j = (k / 2) as u32;
            let denom = factorial(2 * j + 1) * rational(4i64.pow(j), 1);
            ScalarPoly::from_rational(rational(1, 1) / denom)
        })
        .collect();
    TruncSeries::from_coeffs(coeffs, order)
}

/// `(x/2)/sinh(x/2)` at `x = h1*r`, as a series in `r`. One factor per eigenvalue pair.
pub fn a_hat_factor(order: usize) -> TruncSeries {
    sinh_quotient(order).inverse().expect("constant term is 1").rescale_variable(&ScalarPoly::h1())
}

/// `exp(scale * symbol)`, finite because of the degree cutoff.
pub fn ch_exp(symbol: &FormPoly, scale: &ScalarPoly) -> Result<FormPoly, Error> {
    let order = (symbol.max_form_degree / 2) as usize;
    let exp = TruncSeries::variable(order).exp().expect("no constant term");
    FormPoly::compose(&exp, &symbol.scale(scale))
}

/// `sum_k (i*rn)^k / k! * prod_{l<=k} level_factor(l)`; the `h1` of the trace
/// cancels against the `1/h1` in the argument.
pub fn ch_phi_form(rn: &FormPoly, max_form_degree: u32) -> Result<FormPoly, Error> {
    let order = (max_form_degree / 2) as usize;
    let coeffs = (0..=order as u32)
        .map(|k| {
            let ik = ScalarPoly::constant(GaussianRational::i_pow(k as i64));
            &ik.scale_rational(&(rational(1, 1) / factorial(k))) * &level_product(k)
        })
        .collect();
    FormPoly::compose(&TruncSeries::from_coeffs(coeffs, order), &rn.with_max_degree(max_form_degree))
}

/// `h1^(n-1)` times the form-degree-`2(n-1)` part of
/// `prod_i A(rt_i) * Ch(-theta/h1) * Ch_phi(rn/h1)`.
pub fn index_form(rt_pairs: &[FormPoly], theta: &FormPoly, rn: &FormPoly, n: u32) -> Result<FormPoly, Error> {
    if n < 1 {
        return Err(Error::InvalidDimension(n));
    }
    if rt_pairs.len() != (n - 1) as usize {
        return Err(Error::CurvatureCount { expected: (n - 1) as usize, found: rt_pairs.len() });
    }
    let top = 2 * (n - 1);
    let a_hat = a_hat_factor((top / 2) as usize);
    let mut total = FormPoly::one(top);
    for rt in rt_pairs {
        total = total.mul(&FormPoly::compose(&a_hat, &rt.with_max_degree(top))?);
    }
    let minus_inv_h1 = ScalarPoly::monomial(GaussianRational::from_int(-1), -1, 0);
    total = total.mul(&ch_exp(&theta.with_max_degree(top), &minus_inv_h1)?);
    total = total.mul(&ch_phi_form(rn, top)?);
    Ok(total.component(top).scale(&ScalarPoly::h1().pow(n - 1)))
}

/// A term of the local model: base exponents `[a1, b1, a2, b2, ...]` for
/// `p1^a1 q1^b1 p2^a2 ...` (trailing zero pairs trimmed) and a fiber monomial of `R`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalMonomial {
    pub base: Vec<u32>,
    pub fiber: Monomial,
}

fn trim_base(mut base: Vec<u32>) -> Vec<u32> {
    if base.len() % 2 == 1 {
        base.push(0);
    }
    while base.len() >= 2 && base[base.len() - 1] == 0 && base[base.len() - 2] == 0 {
        base.truncate(base.len() - 2);
    }
    base
}

/// Polynomial in the base variables `p_i, q_i` (symmetric-ordering symbols).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BasePoly(pub LinearCombination<Vec<u32>>);

impl BasePoly {
    pub fn zero() -> Self {
        BasePoly(LinearCombination::zero())
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), ScalarPoly::one())
    }

    pub fn monomial(base: Vec<u32>, c: ScalarPoly) -> Self {
        BasePoly(LinearCombination::term(trim_base(base), c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ScalarPoly)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        BasePoly(self.0.add(&o.0))
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        BasePoly(self.0.scale(c))
    }

    pub fn at_h2_zero(&self) -> Self {
        BasePoly(self.0.map_coeffs(ScalarPoly::at_h2_zero))
    }

    /// Symmetric-ordering Moyal product with `[p_i, q_j] = h1 delta_ij`.
    pub fn moyal(&self, o: &Self) -> Self {
        let mut out = LinearCombination::zero();
        for (b1, c1) in self.0.iter() {
            for (b2, c2) in o.0.iter() {
                let coeff = c1 * c2;
                for (b, c) in base_moyal(b1, b2).iter() {
                    out.add_term(b.clone(), &(c * &coeff));
                }
            }
        }
        BasePoly(out)
    }
}

impl fmt::Display for BasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_base(self))
    }
}

/// Moyal product of two base monomials; the product factorises over Darboux pairs.
fn base_moyal(b1: &[u32], b2: &[u32]) -> LinearCombination<Vec<u32>> {
    let pairs = b1.len().max(b2.len()) / 2;
    let at = |b: &[u32], i: usize| b.get(i).copied().unwrap_or(0);
    let mut acc: LinearCombination<Vec<u32>> = LinearCombination::term(Vec::new(), ScalarPoly::one());
    for i in 0..pairs {
        let factor: PairPoly =
            moyal_monomials(at(b1, 2 * i), at(b1, 2 * i + 1), at(b2, 2 * i), at(b2, 2 * i + 1), &ScalarPoly::h1());
        let mut next = LinearCombination::zero();
        for (prefix, c) in acc.iter() {
            for (&(a, b), cf) in factor.iter() {
                let mut key = prefix.clone();
                key.push(a);
                key.push(b);
                next.add_term(key, &(c * cf));
            }
        }
        acc = next;
    }
    acc.map_keys(|k| trim_base(k.clone()))
}

/// Element of `W_{n-1} (x) R`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LocalElement(LinearCombination<LocalMonomial>);

impl LocalElement {
    pub fn zero() -> Self {
        LocalElement(LinearCombination::zero())
    }

    pub fn one() -> Self {
        Self::scalar(ScalarPoly::one())
    }

    pub fn scalar(c: ScalarPoly) -> Self {
        LocalElement(LinearCombination::term(LocalMonomial { base: Vec::new(), fiber: Monomial::ONE }, c))
    }

    /// `p_i` (1-based).
    pub fn p(i: usize) -> Self {
        Self::base_generator(i, 0)
    }

    /// `q_i` (1-based).
    pub fn q(i: usize) -> Self {
        Self::base_generator(i, 1)
    }

    fn base_generator(i: usize, slot: usize) -> Self {
        assert!(i >= 1, "base variables are 1-based");
        let mut base = vec![0; 2 * i];
        base[2 * (i - 1) + slot] = 1;
        Self::tensor(&BasePoly::monomial(base, ScalarPoly::one()), &SrcElement::one())
    }

    pub fn fiber(e: &SrcElement) -> Self {
        Self::tensor(&BasePoly::one(), e)
    }

    /// `f (x) g` for a base polynomial `f` and fiber element `g`.
    pub fn tensor(f: &BasePoly, g: &SrcElement) -> Self {
        let mut out = LinearCombination::zero();
        for (b, c1) in f.terms() {
            for (m, c2) in g.terms() {
                out.add_term(LocalMonomial { base: trim_base(b.clone()), fiber: *m }, &(c1 * c2));
            }
        }
        LocalElement(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LocalMonomial, &ScalarPoly)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        LocalElement(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        LocalElement(self.0.sub(&o.0))
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        LocalElement(self.0.scale(c))
    }

    /// Number of Darboux pairs actually used by the base part.
    pub fn base_pairs(&self) -> usize {
        self.0.iter().map(|(m, _)| m.base.len() / 2).max().unwrap_or(0)
    }

    /// Moyal product on the base tensored with the product of `R` on the fiber.
    pub fn local_star(&self, o: &Self) -> Self {
        let mut engine = Reorderer::default();
        self.local_star_with(&mut engine, o)
    }

    pub(crate) fn local_star_with(&self, engine: &mut Reorderer, o: &Self) -> Self {
        let mut out = LinearCombination::zero();
        for (m1, c1) in self.0.iter() {
            for (m2, c2) in o.0.iter() {
                let coeff = c1 * c2;
                let base = base_moyal(&m1.base, &m2.base);
                let fiber = engine.monomial_product(&m1.fiber, &m2.fiber);
                for (b, cb) in base.iter() {
                    let cb = cb * &coeff;
                    for (f, cf) in fiber.terms() {
                        out.add_term(LocalMonomial { base: b.clone(), fiber: *f }, &(&cb * cf));
                    }
                }
            }
        }
        LocalElement(out)
    }

    pub fn local_commutator(&self, o: &Self) -> Self {
        let mut engine = Reorderer::default();
        self.local_star_with(&mut engine, o).sub(&o.local_star_with(&mut engine, self))
    }

    /// Right multiplication by `e`, with the fiber folded onto invariant polynomials.
    pub fn to_spherical(&self) -> Result<BTreeMap<Vec<u32>, InvariantPoly>, Error> {
        let mut by_base: BTreeMap<Vec<u32>, PairPoly> = BTreeMap::new();
        for (m, c) in self.0.iter() {
            if (m.fiber.p + m.fiber.q) % 2 == 1 {
                return Err(Error::ParityViolation { p: m.fiber.p, q: m.fiber.q });
            }
            by_base.entry(m.base.clone()).or_default().add_term((m.fiber.p, m.fiber.q), c);
        }
        by_base
            .into_iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(b, f)| Ok((b, InvariantPoly::from_pair_poly(f)?)))
            .collect()
    }

    /// Base part, when the element is base-only.
    pub fn base_part(&self) -> Option<BasePoly> {
        if self.0.iter().any(|(m, _)| m.fiber != Monomial::ONE) {
            return None;
        }
        Some(BasePoly(self.0.map_keys(|m| m.base.clone())))
    }
}

/// Applies the trace to the fiber and evaluates at `z = zb = 0`, leaving the
/// base polynomial multiplying `dp_1 dq_1 ... dp_{n-1} dq_{n-1}`.
pub fn local_trace_density(f: &LocalElement, n: u32) -> Result<BasePoly, Error> {
    if n < 1 {
        return Err(Error::InvalidDimension(n));
    }
    let pairs = f.base_pairs();
    if pairs > (n - 1) as usize {
        return Err(Error::BaseVariableOutOfRange { index: pairs, n });
    }
    let mut out = BasePoly::zero();
    for (base, fiber) in f.to_spherical()? {
        out = out.add(&BasePoly::monomial(base, phi(&fiber).0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(name: &str, d: u32) -> FormPoly {
        FormPoly::symbol(name, d)
    }

    #[test]
    fn a_hat_low_coefficients() {
        let s = a_hat_factor(4);
        assert!(s.coeff(0).is_one());
        assert!(s.coeff(1).is_zero());
        assert_eq!(s.coeff(2), &ScalarPoly::h1().pow(2).scale_rational(&rational(-1, 24)));
        assert_eq!(s.coeff(4), &ScalarPoly::h1().pow(4).scale_rational(&rational(7, 5760)));
        let back = s.mul(&sinh_quotient(4).rescale_variable(&ScalarPoly::h1()));
        assert_eq!(back, TruncSeries::one(4));
    }

    #[test]
    fn ch_exp_examples() {
        let theta = sym("Theta", 4);
        assert_eq!(ch_exp(&FormPoly::zero(4), &ScalarPoly::from_int(3)).unwrap(), FormPoly::one(4));
        let minus_inv_h1 = ScalarPoly::monomial(GaussianRational::from_int(-1), -1, 0);
        let expected = FormPoly::one(4).add(&theta.scale(&minus_inv_h1)).add(
            &theta.pow(2).scale(&ScalarPoly::monomial(GaussianRational::new(rational(1, 2), rational(0, 1)), -2, 0)),
        );
        assert_eq!(ch_exp(&theta, &minus_inv_h1).unwrap(), expected);
        assert_eq!(ch_exp(&FormPoly::one(4), &ScalarPoly::one()), Err(Error::NonzeroDegreeZero));
    }

    #[test]
    fn ch_exp_is_multiplicative() {
        let (u, v) = (sym("u", 8), sym("v", 8));
        let one = ScalarPoly::one();
        assert_eq!(ch_exp(&u.add(&v), &one).unwrap(), ch_exp(&u, &one).unwrap().mul(&ch_exp(&v, &one).unwrap()));
    }

    #[test]
    fn ch_phi_form_low_terms() {
        let rn = sym("R_N", 6);
        let f = ch_phi_form(&rn, 6).unwrap();
        assert!(f.degree_zero_part().is_one());
        let expected = rn.scale(&(&ScalarPoly::i() * &level_product(1)));
        assert_eq!(f.component(2), expected);
        // agrees with the tau-series after tau = rn/h1
        let series = crate::trace::ch_phi(3);
        for k in 0..=3u32 {
            let c = series.coeff(k as usize).shift(-(k as i32), 0);
            assert_eq!(f.component(2 * k), rn.pow(k).scale(&c));
        }
    }

    #[test]
    fn index_form_examples() {
        let one = index_form(&[], &FormPoly::zero(0), &FormPoly::zero(0), 1).unwrap();
        assert_eq!(one, FormPoly::one(0));

        let rn = sym("R_N", 2);
        let z = FormPoly::zero(2);
        let only_rn = index_form(core::slice::from_ref(&z), &z, &rn, 2).unwrap();
        assert_eq!(only_rn, rn.scale(&(&ScalarPoly::i_h1() * &level_product(1))));

        let theta = sym("Theta", 2);
        let only_theta = index_form(core::slice::from_ref(&z), &theta, &z, 2).unwrap();
        assert_eq!(only_theta, theta.scale(&ScalarPoly::from_int(-1)));

        assert_eq!(index_form(&[], &z, &z, 0), Err(Error::InvalidDimension(0)));
        assert_eq!(index_form(&[], &z, &z, 2), Err(Error::CurvatureCount { expected: 1, found: 0 }));
    }

    #[test]
    fn weyl_relation_on_base() {
        let k = LocalElement::p(1).local_commutator(&LocalElement::q(1));
        assert_eq!(k, LocalElement::scalar(ScalarPoly::h1()));
        let k2 = LocalElement::p(1).local_commutator(&LocalElement::q(2));
        assert!(k2.is_zero());
        let f = LocalElement::p(2).local_star(&LocalElement::fiber(&SrcElement::z()));
        assert_eq!(f.local_star(&LocalElement::one()), f);
    }

    #[test]
    fn trace_density_examples() {
        assert_eq!(local_trace_density(&LocalElement::one(), 1).unwrap(), BasePoly::one());
        let g = InvariantPoly::monomial(2, 2).unwrap();
        let f = BasePoly::monomial(vec![1, 2], ScalarPoly::from_int(3));
        let fg = LocalElement::tensor(&f, &g.to_element());
        assert_eq!(local_trace_density(&fg, 2).unwrap(), f.scale(&phi(&g).0));
        assert!(matches!(local_trace_density(&fg, 1), Err(Error::BaseVariableOutOfRange { .. })));
        let odd = LocalElement::fiber(&SrcElement::z());
        assert!(matches!(local_trace_density(&odd, 2), Err(Error::ParityViolation { .. })));
    }
}
