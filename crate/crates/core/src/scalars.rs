//! Exact scalars: Gaussian rationals, Laurent polynomials in `h1` with
//! polynomial `h2` dependence, and truncated power series over them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Rational number, re-exported so downstream crates share one type.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `re + im*i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational(n, 1))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|self|^2`, always rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::from_int(1),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -(self.clone())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{}*i)", self.re, -self.im.clone())
                } else {
                    write!(f, "({}+{}*i)", self.re, self.im)
                }
            }
        }
    }
}

/// Exponent pair `(h1, h2)` of a scalar monomial. Ordered lexicographically.
pub type HbarExp = (i32, u32);

/// Finite sum `sum c * h1^a * h2^b` with `a` any integer and `b >= 0`.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of the underlying Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ScalarPoly {
    terms: BTreeMap<HbarExp, GaussianRational>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::constant(GaussianRational::from_rational(r))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    /// `c * h1^a * h2^b`.
    pub fn monomial(c: GaussianRational, a: i32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        ScalarPoly { terms }
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn h1() -> Self {
        Self::monomial(GaussianRational::one(), 1, 0)
    }

    pub fn h2() -> Self {
        Self::monomial(GaussianRational::one(), 0, 1)
    }

    /// `i*h1`, the basic commutator scale of the algebra.
    pub fn i_h1() -> Self {
        Self::monomial(GaussianRational::i(), 1, 0)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (HbarExp, GaussianRational)>>(iter: I) -> Self {
        let mut out = ScalarPoly::zero();
        for (e, c) in iter {
            out.add_term(e, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical `(h1, h2)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&HbarExp, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i32, b: u32) -> GaussianRational {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: HbarExp, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return ScalarPoly::zero();
        }
        ScalarPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::from_rational(r.clone()))
    }

    /// Multiplies by `h1^a * h2^b`. Panics if this would make an `h2` exponent negative.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        ScalarPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(x, y), c)| {
                    let y = y as i32 + b;
                    assert!(y >= 0, "negative h2 exponent");
                    ((x + a, y as u32), c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = ScalarPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The multiplicative inverse. Only nonzero monomials are units here.
    pub fn inverse(&self) -> Result<Self, Error> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(format!("{self}")));
        }
        let (&(a, b), c) = self.terms.iter().next().expect("one term");
        if b != 0 {
            return Err(Error::NotInvertible(format!("{self}")));
        }
        let inv = c.inverse().expect("stored coefficients are nonzero");
        Ok(ScalarPoly::monomial(inv, -a, 0))
    }

    pub fn min_h1(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.0).min()
    }

    pub fn max_h1(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.0).max()
    }

    /// Substitutes `h2 = 0`.
    pub fn at_h2_zero(&self) -> Self {
        ScalarPoly { terms: self.terms.iter().filter(|(e, _)| e.1 == 0).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// Complex conjugation of coefficients (h1, h2 treated as real).
    pub fn conj(&self) -> Self {
        ScalarPoly { terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }
}

impl<'a> Add<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, o: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&ScalarPoly> for ScalarPoly {
    fn add_assign(&mut self, o: &ScalarPoly) {
        for (e, c) in &o.terms {
            self.add_term(*e, c);
        }
    }
}

impl<'a> Sub<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, o: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl SubAssign<&ScalarPoly> for ScalarPoly {
    fn sub_assign(&mut self, o: &ScalarPoly) {
        for (e, c) in &o.terms {
            self.add_term(*e, &-c);
        }
    }
}

impl<'a> Mul<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, o: &ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        -&self
    }
}

impl From<GaussianRational> for ScalarPoly {
    fn from(c: GaussianRational) -> Self {
        ScalarPoly::constant(c)
    }
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::print_scalar(self))
    }
}

/// A power series in one formal variable, truncated after `order`.
///
/// Coefficients past the truncation order are discarded, never invented:
/// binary operations act at the smaller of the two orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<ScalarPoly>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![ScalarPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ScalarPoly::one();
        s
    }

    /// The formal variable itself (zero if `order == 0`).
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ScalarPoly::one();
        }
        s
    }

    /// Keeps `coeffs[0..=order]`, padding with zeros.
    pub fn from_coeffs(mut coeffs: Vec<ScalarPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, ScalarPoly::zero());
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &ScalarPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[ScalarPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn scale(&self, c: &ScalarPoly) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Substitutes `t -> c*t`, i.e. multiplies the `k`-th coefficient by `c^k`.
    pub fn rescale_variable(&self, c: &ScalarPoly) -> Self {
        let mut pow = ScalarPoly::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x * &pow);
            pow = &pow * c;
        }
        TruncSeries { coeffs }
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.order().min(o.order());
        TruncSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect() }
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.order().min(o.order());
        TruncSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect() }
    }

    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.order().min(o.order());
        let mut coeffs = vec![ScalarPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] += &(a * b);
            }
        }
        TruncSeries { coeffs }
    }

    /// `exp(s)` for `s` without constant term, via `e' = s' e`:
    /// `e_n = (1/n) sum_{k=1..n} k s_k e_{n-k}`.
    pub fn exp(&self) -> Result<TruncSeries, Error> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut e = vec![ScalarPoly::zero(); n + 1];
        e[0] = ScalarPoly::one();
        for m in 1..=n {
            let mut acc = ScalarPoly::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc += &(&self.coeffs[k] * &e[m - k]).scale_rational(&rational(k as i64, 1));
            }
            e[m] = acc.scale_rational(&rational(1, m as i64));
        }
        Ok(TruncSeries { coeffs: e })
    }

    /// Square root of a series with constant term one:
    /// `r_n = (s_n - sum_{k=1..n-1} r_k r_{n-k}) / 2`.
    pub fn sqrt(&self) -> Result<TruncSeries, Error> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        let mut r = vec![ScalarPoly::zero(); n + 1];
        r[0] = ScalarPoly::one();
        let half = rational(1, 2);
        for m in 1..=n {
            let mut acc = self.coeffs[m].clone();
            for k in 1..m {
                acc -= &(&r[k] * &r[m - k]);
            }
            r[m] = acc.scale_rational(&half);
        }
        Ok(TruncSeries { coeffs: r })
    }

    /// Multiplicative inverse; the constant term must be a unit of [`ScalarPoly`].
    pub fn inverse(&self) -> Result<TruncSeries, Error> {
        let c0 = self.coeffs[0].inverse()?;
        let n = self.order();
        let mut r = vec![ScalarPoly::zero(); n + 1];
        r[0] = c0.clone();
        for m in 1..=n {
            let mut acc = ScalarPoly::zero();
            for k in 1..=m {
                acc += &(&self.coeffs[k] * &r[m - k]);
            }
            r[m] = -&(&acc * &c0);
        }
        Ok(TruncSeries { coeffs: r })
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("({c})"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{k}"),
            });
        }
        if parts.is_empty() {
            parts.push(String::from("0"));
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.order() + 1)
    }
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// `binom(n, k)` as a rational.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `n!/(n-k)!`, the falling factorial.
pub fn falling(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    factorial(n) / factorial(n - k)
}
