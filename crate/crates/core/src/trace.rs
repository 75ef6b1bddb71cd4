//! The normalised trace on the spherical subalgebra and the deformed Chern
//! character built from it.

use core::fmt;

use crate::algebra::Reorderer;
use crate::scalars::{factorial, rational, ScalarPoly, TruncSeries};
use crate::spherical::{star_with, InvariantPoly};

/// Value of the trace; a Laurent polynomial in `h1` with polynomial `h2` dependence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TraceValue(pub ScalarPoly);

impl TraceValue {
    pub fn value(&self) -> &ScalarPoly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for TraceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `l/2 + (-1)^(l+1) * 2*floor((l+1)/2) * h2 / (l+1)`.
pub fn level_factor(l: u32) -> ScalarPoly {
    let sign = if l % 2 == 1 { 1 } else { -1 };
    let h2_coeff = rational(sign * 2 * ((l as i64 + 1) / 2), l as i64 + 1);
    &ScalarPoly::from_rational(rational(l as i64, 2)) + &ScalarPoly::h2().scale_rational(&h2_coeff)
}

/// `prod_{l=1..k} level_factor(l)`.
pub fn level_product(k: u32) -> ScalarPoly {
    (1..=k).fold(ScalarPoly::one(), |acc, l| &acc * &level_factor(l))
}

/// `phi(f) = sum_k (i h1)^k / (k!)^2 * prod_{l<=k} level_factor(l) * d^2k f / dz^k dzb^k (0,0)`.
///
/// The mixed derivative at the origin is `(k!)^2` times the coefficient of `z^k zb^k`.
pub fn phi(f: &InvariantPoly) -> TraceValue {
    let mut out = ScalarPoly::zero();
    for (&(p, q), c) in f.terms() {
        if p != q {
            continue;
        }
        let k = p;
        let kf2 = factorial(k) * factorial(k);
        let derivative = c.scale_rational(&kf2);
        let pref = ScalarPoly::i_h1().pow(k).scale_rational(&(rational(1, 1) / kf2));
        out += &(&(&pref * &level_product(k)) * &derivative);
    }
    TraceValue(out)
}

/// `f * f * ... * f` (`k` factors), with `star_power(f, 0) = 1`.
pub fn star_power(f: &InvariantPoly, k: u32) -> InvariantPoly {
    let mut engine = Reorderer::default();
    let mut acc = InvariantPoly::one();
    for _ in 0..k {
        acc = star_with(&mut engine, &acc, f);
    }
    acc
}

/// Closed-form deformed Chern character as a series in `tau`:
/// the `tau^k` coefficient is `(i h1)^k / k! * prod_{l<=k} level_factor(l)`.
pub fn ch_phi(order: usize) -> TruncSeries {
    let coeffs = (0..=order as u32)
        .map(|k| ScalarPoly::i_h1().pow(k).scale_rational(&(rational(1, 1) / factorial(k))).clone())
        .enumerate()
        .map(|(k, c)| &c * &level_product(k as u32))
        .collect();
    TruncSeries::from_coeffs(coeffs, order)
}

/// `phi(f*g - g*f)`; zero for every pair because `phi` is a trace.
pub fn trace_defect(f: &InvariantPoly, g: &InvariantPoly) -> TraceValue {
    phi(&f.star_commutator(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::GaussianRational;
    use crate::spherical::monomials_up_to;

    fn m(p: u32, q: u32) -> InvariantPoly {
        InvariantPoly::monomial(p, q).unwrap()
    }

    fn half_plus_h2() -> ScalarPoly {
        &ScalarPoly::from_rational(rational(1, 2)) + &ScalarPoly::h2()
    }

    #[test]
    fn level_factors() {
        assert_eq!(level_factor(1), half_plus_h2());
        assert_eq!(level_factor(2), &ScalarPoly::one() + &ScalarPoly::h2().scale_rational(&rational(-2, 3)));
        assert_eq!(level_factor(3), &ScalarPoly::from_rational(rational(3, 2)) + &ScalarPoly::h2());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(phi(&InvariantPoly::one()).0, ScalarPoly::one());
        for &(p, q) in &monomials_up_to(8) {
            if p != q {
                assert!(phi(&m(p, q)).is_zero());
            }
        }
        assert_eq!(phi(&m(1, 1)).0, &ScalarPoly::i_h1() * &half_plus_h2());
        let minus_h1_sq = ScalarPoly::monomial(GaussianRational::from_int(-1), 2, 0);
        let expected = &(&minus_h1_sq * &half_plus_h2()) * &level_factor(2);
        assert_eq!(phi(&m(2, 2)).0, expected);
    }

    #[test]
    fn trace_value_grading() {
        for &(p, q) in &monomials_up_to(12) {
            let v = phi(&m(p, q)).0;
            let d = ((p + q) / 2) as i32;
            for (&(a, b), _) in v.terms() {
                assert!((0..=d).contains(&a));
                assert!(b as i32 <= a);
            }
        }
    }

    #[test]
    fn linearity() {
        let a = ScalarPoly::monomial(GaussianRational::new(rational(2, 3), rational(-1, 5)), 1, 2);
        let b = &ScalarPoly::h2() + &ScalarPoly::from_int(7);
        let f = m(2, 2).add(&m(3, 1));
        let g = m(1, 1).add(&InvariantPoly::one());
        let lhs = phi(&f.scale(&a).add(&g.scale(&b))).0;
        let rhs = &(&a * &phi(&f).0) + &(&b * &phi(&g).0);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_power_examples() {
        let zzb = InvariantPoly::z_zb();
        assert_eq!(star_power(&zzb, 0), InvariantPoly::one());
        assert_eq!(star_power(&zzb, 1), zzb);
        assert_eq!(star_power(&zzb, 2), zzb.star(&zzb));
    }

    #[test]
    fn ch_phi_low_coefficients() {
        let s = ch_phi(4);
        assert!(s.coeff(0).is_one());
        assert_eq!(s.coeff(1), &(&ScalarPoly::i_h1() * &half_plus_h2()));
        // tau^k coefficient is phi(z^k zb^k)/k!
        for k in 0..=4u32 {
            let via_phi = phi(&m(k, k)).0.scale_rational(&(rational(1, 1) / factorial(k)));
            assert_eq!(s.coeff(k as usize), &via_phi);
        }
    }

    #[test]
    fn defect_examples() {
        assert!(trace_defect(&m(2, 0), &m(0, 2)).is_zero());
        assert!(trace_defect(&m(3, 1), &InvariantPoly::one()).is_zero());
        assert!(trace_defect(&m(3, 1), &m(1, 3)).is_zero());
    }
}
