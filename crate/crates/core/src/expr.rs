//! Input language and canonical printer.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := int ['/' int] | 'i' | 'h1' | 'h2' | 'g' | 'z' | 'zb' | 'x' | 'y'
//!         | 'p' digit | 'q' digit | '(' expr ')'
//! ```
//!
//! `zb` is the conjugate generator and `g` the reflection. Whitespace is
//! ignored and `*` is never implicit. A negative exponent is accepted only on
//! `i`, `h1` and nonzero rational literals. Everything the printers emit for
//! [`SrcElement`], [`InvariantPoly`] and [`ScalarPoly`] parses back to the same
//! value.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{from_xy, Monomial, Reorderer, SrcElement, XyLetter};
use crate::error::Error;
use crate::index::{BasePoly, FormPoly, LocalElement};
use crate::scalars::{GaussianRational, Rational, ScalarPoly};
use crate::spherical::InvariantPoly;

/// Deepest parenthesis nesting the parser accepts.
pub const MAX_NESTING: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarAtom {
    I,
    H1,
    H2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Z,
    Zb,
    X,
    Y,
    G,
    /// `p<d>`: first coordinate of the `d`-th base pair.
    P(u8),
    /// `q<d>`
    Q(u8),
}

impl Generator {
    fn name(self) -> String {
        match self {
            Generator::Z => "z".to_string(),
            Generator::Zb => "zb".to_string(),
            Generator::X => "x".to_string(),
            Generator::Y => "y".to_string(),
            Generator::G => "g".to_string(),
            Generator::P(d) => format!("p{d}"),
            Generator::Q(d) => format!("q{d}"),
        }
    }
}

/// Parsed expression. Products keep source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprTree {
    Sum(Vec<ExprTree>),
    Neg(Box<ExprTree>),
    Product(Vec<ExprTree>),
    Power(Box<ExprTree>, i64),
    Rational(Rational),
    Scalar(ScalarAtom),
    Generator(Generator),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Unexpected { found: String, expected: Vec<&'static str> },
    ExponentOverflow,
    NegativeExponent,
    ZeroDenominator,
    TooDeep,
}

/// Syntax error at byte offset `position`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: ", self.position)?;
        match &self.kind {
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "found {found}, expected one of: {}", expected.join(", "))
            }
            ParseErrorKind::ExponentOverflow => f.write_str("exponent does not fit in 32 bits"),
            ParseErrorKind::NegativeExponent => {
                f.write_str("negative exponents are only allowed on i, h1 and nonzero rationals")
            }
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::TooDeep => write!(f, "parentheses nested deeper than {MAX_NESTING}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Int(BigInt),
    Scalar(ScalarAtom),
    Gen(Generator),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Scalar(ScalarAtom::I) => "'i'".into(),
            Tok::Scalar(ScalarAtom::H1) => "'h1'".into(),
            Tok::Scalar(ScalarAtom::H2) => "'h2'".into(),
            Tok::Gen(g) => format!("'{}'", g.name()),
            Tok::End => "end of input".into(),
        }
    }
}

const ATOM: &[&str] = &["integer", "i", "h1", "h2", "g", "z", "zb", "x", "y", "p<digit>", "q<digit>", "'('"];
const AFTER_FACTOR: &[&str] = &["'^'", "'*'", "'+'", "'-'"];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = self.src.get(start) else {
            return Ok((start, Tok::End));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if b.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let n = BigInt::parse_bytes(&self.src[start..self.pos], 10).expect("ascii digits");
            return Ok((start, Tok::Int(n)));
        }
        if b.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let word = &self.src[start..self.pos];
            let tok = match word {
                b"i" => Some(Tok::Scalar(ScalarAtom::I)),
                b"h1" => Some(Tok::Scalar(ScalarAtom::H1)),
                b"h2" => Some(Tok::Scalar(ScalarAtom::H2)),
                b"g" => Some(Tok::Gen(Generator::G)),
                b"z" => Some(Tok::Gen(Generator::Z)),
                b"zb" => Some(Tok::Gen(Generator::Zb)),
                b"x" => Some(Tok::Gen(Generator::X)),
                b"y" => Some(Tok::Gen(Generator::Y)),
                [b'p', d] if d.is_ascii_digit() => Some(Tok::Gen(Generator::P(d - b'0'))),
                [b'q', d] if d.is_ascii_digit() => Some(Tok::Gen(Generator::Q(d - b'0'))),
                _ => None,
            };
            return tok.map(|t| (start, t)).ok_or_else(|| ParseError {
                position: start,
                kind: ParseErrorKind::Unexpected {
                    found: format!("identifier '{}'", String::from_utf8_lossy(word)),
                    expected: ATOM.to_vec(),
                },
            });
        }
        let ch = core::str::from_utf8(&self.src[start..]).ok().and_then(|s| s.chars().next());
        Err(ParseError {
            position: start,
            kind: ParseErrorKind::Unexpected {
                found: ch.map_or_else(|| "invalid byte".into(), |c| format!("character {c:?}")),
                expected: ATOM.to_vec(),
            },
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    look: (usize, Tok),
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src: input.as_bytes(), pos: 0 };
        let look = lexer.next()?;
        Ok(Parser { lexer, look, depth: 0 })
    }

    fn bump(&mut self) -> Result<(usize, Tok), ParseError> {
        let next = self.lexer.next()?;
        Ok(core::mem::replace(&mut self.look, next))
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            position: self.look.0,
            kind: ParseErrorKind::Unexpected { found: self.look.1.describe(), expected: expected.to_vec() },
        }
    }

    fn expr(&mut self) -> Result<ExprTree, ParseError> {
        let mut terms = Vec::new();
        let negate_first = self.look.1 == Tok::Minus;
        if negate_first {
            self.bump()?;
        }
        let first = self.term()?;
        terms.push(if negate_first { ExprTree::Neg(Box::new(first)) } else { first });
        loop {
            match self.look.1 {
                Tok::Plus => {
                    self.bump()?;
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    terms.push(ExprTree::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ExprTree::Sum(terms) })
    }

    fn term(&mut self) -> Result<ExprTree, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.look.1 == Tok::Star {
            self.bump()?;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { ExprTree::Product(factors) })
    }

    fn factor(&mut self) -> Result<ExprTree, ParseError> {
        let base = self.atom()?;
        if self.look.1 != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let negative = if self.look.1 == Tok::Minus {
            let pos = self.look.0;
            let invertible = match &base {
                ExprTree::Scalar(ScalarAtom::I | ScalarAtom::H1) => true,
                ExprTree::Rational(r) => !r.is_zero(),
                _ => false,
            };
            if !invertible {
                return Err(ParseError { position: pos, kind: ParseErrorKind::NegativeExponent });
            }
            self.bump()?;
            true
        } else {
            false
        };
        let (pos, tok) = self.look.clone();
        let Tok::Int(n) = tok else {
            return Err(self.unexpected(if negative { &["integer"] } else { &["integer", "'-'"] }));
        };
        self.bump()?;
        let overflow = ParseError { position: pos, kind: ParseErrorKind::ExponentOverflow };
        let e: i64 = u32::try_from(&n).map_err(|_| overflow.clone())?.into();
        if negative && e > i32::MAX as i64 {
            return Err(overflow);
        }
        Ok(ExprTree::Power(Box::new(base), if negative { -e } else { e }))
    }

    fn atom(&mut self) -> Result<ExprTree, ParseError> {
        match self.look.1.clone() {
            Tok::Int(n) => {
                self.bump()?;
                if self.look.1 != Tok::Slash {
                    return Ok(ExprTree::Rational(Rational::from_integer(n)));
                }
                self.bump()?;
                let (pos, tok) = self.look.clone();
                let Tok::Int(d) = tok else {
                    return Err(self.unexpected(&["integer"]));
                };
                if d.is_zero() {
                    return Err(ParseError { position: pos, kind: ParseErrorKind::ZeroDenominator });
                }
                self.bump()?;
                Ok(ExprTree::Rational(Rational::new(n, d)))
            }
            Tok::Scalar(s) => {
                self.bump()?;
                Ok(ExprTree::Scalar(s))
            }
            Tok::Gen(g) => {
                self.bump()?;
                Ok(ExprTree::Generator(g))
            }
            Tok::LParen => {
                if self.depth >= MAX_NESTING {
                    return Err(ParseError { position: self.look.0, kind: ParseErrorKind::TooDeep });
                }
                self.depth += 1;
                self.bump()?;
                let inner = self.expr()?;
                if self.look.1 != Tok::RParen {
                    return Err(self.unexpected(&["'^'", "'*'", "'+'", "'-'", "')'"]));
                }
                self.bump()?;
                self.depth -= 1;
                Ok(inner)
            }
            _ => Err(self.unexpected(ATOM)),
        }
    }
}

pub fn parse(input: &str) -> Result<ExprTree, ParseError> {
    let mut p = Parser::new(input)?;
    let tree = p.expr()?;
    if p.look.1 != Tok::End {
        let mut expected = AFTER_FACTOR.to_vec();
        expected.push("end of input");
        return Err(p.unexpected(&expected));
    }
    Ok(tree)
}

fn scalar_atom(s: ScalarAtom) -> ScalarPoly {
    match s {
        ScalarAtom::I => ScalarPoly::i(),
        ScalarAtom::H1 => ScalarPoly::h1(),
        ScalarAtom::H2 => ScalarPoly::h2(),
    }
}

/// The ring an expression is evaluated in.
trait Target {
    type Elem: Clone;
    fn scalar(&self, c: ScalarPoly) -> Self::Elem;
    fn generator(&self, g: Generator) -> Result<Self::Elem, Error>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&mut self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

struct SourceTarget(Reorderer);

impl Target for SourceTarget {
    type Elem = SrcElement;
    fn scalar(&self, c: ScalarPoly) -> SrcElement {
        SrcElement::scalar(c)
    }
    fn generator(&self, g: Generator) -> Result<SrcElement, Error> {
        let one = ScalarPoly::one();
        Ok(match g {
            Generator::Z => SrcElement::z(),
            Generator::Zb => SrcElement::zb(),
            Generator::G => SrcElement::gamma(),
            Generator::X => from_xy(&[(one, vec![XyLetter::X])]),
            Generator::Y => from_xy(&[(one, vec![XyLetter::Y])]),
            Generator::P(_) | Generator::Q(_) => return Err(Error::ForeignGenerator(g.name())),
        })
    }
    fn add(&self, a: &SrcElement, b: &SrcElement) -> SrcElement {
        a.add(b)
    }
    fn mul(&mut self, a: &SrcElement, b: &SrcElement) -> SrcElement {
        self.0.mul(a, b)
    }
}

struct LocalTarget(Reorderer);

impl Target for LocalTarget {
    type Elem = LocalElement;
    fn scalar(&self, c: ScalarPoly) -> LocalElement {
        LocalElement::scalar(c)
    }
    fn generator(&self, g: Generator) -> Result<LocalElement, Error> {
        match g {
            Generator::P(0) | Generator::Q(0) => Err(Error::BaseVariableOutOfRange { index: 0, n: 0 }),
            Generator::P(d) => Ok(LocalElement::p(d as usize)),
            Generator::Q(d) => Ok(LocalElement::q(d as usize)),
            _ => Ok(LocalElement::fiber(&SourceTarget(Reorderer::default()).generator(g)?)),
        }
    }
    fn add(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        a.add(b)
    }
    fn mul(&mut self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        a.local_star_with(&mut self.0, b)
    }
}

fn literal_scalar(t: &ExprTree) -> Option<ScalarPoly> {
    match t {
        ExprTree::Rational(r) => Some(ScalarPoly::from_rational(r.clone())),
        ExprTree::Scalar(s) => Some(scalar_atom(*s)),
        _ => None,
    }
}

fn eval_in<T: Target>(target: &mut T, t: &ExprTree) -> Result<T::Elem, Error> {
    Ok(match t {
        ExprTree::Sum(terms) => {
            let mut acc = target.scalar(ScalarPoly::zero());
            for term in terms {
                let v = eval_in(target, term)?;
                acc = target.add(&acc, &v);
            }
            acc
        }
        ExprTree::Neg(inner) => {
            let v = eval_in(target, inner)?;
            let minus = target.scalar(ScalarPoly::from_int(-1));
            target.mul(&minus, &v)
        }
        ExprTree::Product(factors) => {
            let mut acc = target.scalar(ScalarPoly::one());
            for f in factors {
                let v = eval_in(target, f)?;
                acc = target.mul(&acc, &v);
            }
            acc
        }
        ExprTree::Power(base, e) if *e < 0 => {
            let s = literal_scalar(base)
                .ok_or_else(|| Error::NotInvertible(String::from("negative power of a non-literal")))?;
            target.scalar(s.inverse()?.pow(e.unsigned_abs() as u32))
        }
        ExprTree::Power(base, e) => {
            if let Some(s) = literal_scalar(base) {
                return Ok(target.scalar(s.pow(*e as u32)));
            }
            let v = eval_in(target, base)?;
            let mut acc = target.scalar(ScalarPoly::one());
            for _ in 0..*e {
                acc = target.mul(&acc, &v);
            }
            acc
        }
        ExprTree::Rational(_) | ExprTree::Scalar(_) => target.scalar(literal_scalar(t).expect("literal")),
        ExprTree::Generator(g) => target.generator(*g)?,
    })
}

/// Normal form in `R`. Base variables `p_i`, `q_i` are rejected.
pub fn eval(t: &ExprTree) -> Result<SrcElement, Error> {
    eval_in(&mut SourceTarget(Reorderer::default()), t)
}

/// Evaluation in the local model `W (x) R`.
pub fn eval_local(t: &ExprTree) -> Result<LocalElement, Error> {
    eval_in(&mut LocalTarget(Reorderer::default()), t)
}

/// Evaluates and checks that the result has no `g` component.
pub fn eval_invariant(t: &ExprTree) -> Result<InvariantPoly, Error> {
    InvariantPoly::from_element(&eval(t)?)
}

/// Evaluates and checks that the result is a scalar.
pub fn eval_scalar(t: &ExprTree) -> Result<ScalarPoly, Error> {
    let e = eval(t)?;
    if e.terms().any(|(m, _)| *m != Monomial::ONE) {
        return Err(Error::NotMonomial);
    }
    Ok(e.coeff(&Monomial::ONE))
}

fn power(name: &str, e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// Appends `c * factors` to `out`, joining with ` + ` / ` - `.
fn push_term(out: &mut String, c: &GaussianRational, mut factors: Vec<String>) {
    let (negative, lead, trailing) = match (c.re.is_zero(), c.im.is_zero()) {
        (false, false) => (false, vec![c.to_string()], None),
        (re_zero, _) => {
            let r = if re_zero { &c.im } else { &c.re };
            let abs = r.abs();
            let mut lead = Vec::new();
            let mut trailing = None;
            if abs.is_integer() {
                if !abs.is_one() {
                    lead.push(abs.numer().to_string());
                }
            } else {
                trailing = Some(format!("({abs})"));
            }
            if re_zero {
                lead.push("i".to_string());
            }
            (r.is_negative(), lead, trailing)
        }
    };
    let mut all = lead;
    all.append(&mut factors);
    all.extend(trailing);
    if all.is_empty() {
        all.push("1".to_string());
    }
    let body = all.join("*");
    match (out.is_empty(), negative) {
        (true, false) => {}
        (true, true) => out.push('-'),
        (false, false) => out.push_str(" + "),
        (false, true) => out.push_str(" - "),
    }
    out.push_str(&body);
}

fn hbar_factors(a: i32, b: u32) -> Vec<String> {
    power("h1", a as i64).into_iter().chain(power("h2", b as i64)).collect()
}

fn finish(out: String) -> String {
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

pub fn print_scalar(s: &ScalarPoly) -> String {
    let mut out = String::new();
    for (&(a, b), c) in s.terms() {
        push_term(&mut out, c, hbar_factors(a, b));
    }
    finish(out)
}

pub fn print_element(e: &SrcElement) -> String {
    let mut out = String::new();
    for (m, coeff) in e.terms() {
        for (&(a, b), c) in coeff.terms() {
            let mut factors = hbar_factors(a, b);
            factors.extend(power("z", m.p as i64));
            factors.extend(power("zb", m.q as i64));
            if m.gamma {
                factors.push("g".to_string());
            }
            push_term(&mut out, c, factors);
        }
    }
    finish(out)
}

pub fn print_invariant(f: &InvariantPoly) -> String {
    print_element(&f.to_element())
}

fn base_factors(base: &[u32]) -> Vec<String> {
    base.chunks(2)
        .enumerate()
        .flat_map(|(i, ab)| {
            let p = power(&format!("p{}", i + 1), ab[0] as i64);
            let q = power(&format!("q{}", i + 1), ab.get(1).copied().unwrap_or(0) as i64);
            p.into_iter().chain(q)
        })
        .collect()
}

/// Base polynomials are commutative symbols; the printed product is read as
/// a monomial, not as an ordered Moyal product.
pub fn print_base(f: &BasePoly) -> String {
    let mut out = String::new();
    for (base, coeff) in f.terms() {
        for (&(a, b), c) in coeff.terms() {
            let mut factors = hbar_factors(a, b);
            factors.extend(base_factors(base));
            push_term(&mut out, c, factors);
        }
    }
    finish(out)
}

pub fn print_local(f: &LocalElement) -> String {
    let mut out = String::new();
    for (m, coeff) in f.terms() {
        for (&(a, b), c) in coeff.terms() {
            let mut factors = hbar_factors(a, b);
            factors.extend(base_factors(&m.base));
            factors.extend(power("z", m.fiber.p as i64));
            factors.extend(power("zb", m.fiber.q as i64));
            if m.fiber.gamma {
                factors.push("g".to_string());
            }
            push_term(&mut out, c, factors);
        }
    }
    finish(out)
}

pub fn print_form(f: &FormPoly) -> String {
    let mut out = String::new();
    for (m, coeff) in f.terms() {
        for (&(a, b), c) in coeff.terms() {
            let mut factors = hbar_factors(a, b);
            factors.extend(m.iter().filter_map(|(s, &e)| power(s, e as i64)));
            push_term(&mut out, c, factors);
        }
    }
    finish(out)
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_local(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{arb_element, arb_scalar};
    use crate::scalars::rational;
    use proptest::prelude::*;

    fn ev(s: &str) -> SrcElement {
        eval(&parse(s).unwrap()).unwrap()
    }

    fn err(s: &str) -> ParseError {
        parse(s).unwrap_err()
    }

    #[test]
    fn grammar_examples() {
        let t = parse("z*zb - zb*z").unwrap();
        let zzb = ExprTree::Product(vec![ExprTree::Generator(Generator::Z), ExprTree::Generator(Generator::Zb)]);
        let zbz = ExprTree::Product(vec![ExprTree::Generator(Generator::Zb), ExprTree::Generator(Generator::Z)]);
        assert_eq!(t, ExprTree::Sum(vec![zzb, ExprTree::Neg(Box::new(zbz))]));

        let t = parse("h1^-1 * (z^2*zb^2)").unwrap();
        let ExprTree::Product(fs) = t else { panic!("{t:?}") };
        assert_eq!(fs[0], ExprTree::Power(Box::new(ExprTree::Scalar(ScalarAtom::H1)), -1));

        assert_eq!(err("z^-1"), ParseError { position: 2, kind: ParseErrorKind::NegativeExponent });
    }

    #[test]
    fn error_positions() {
        assert_eq!(err("z zb").position, 2);
        assert_eq!(err("z*").position, 2);
        assert_eq!(err("(z + zb").position, 7);
        assert_eq!(err("z + w").position, 4);
        assert_eq!(err("z^99999999999").kind, ParseErrorKind::ExponentOverflow);
        assert_eq!(err("1/0").kind, ParseErrorKind::ZeroDenominator);
        assert_eq!(err("0^-2").kind, ParseErrorKind::NegativeExponent);
        assert_eq!(err("h2^-1").kind, ParseErrorKind::NegativeExponent);
        assert_eq!(err("z é").position, 2);
        assert_eq!(err("").position, 0);
        assert_eq!(err("--z").position, 1);
        assert_eq!(err(&"(".repeat(MAX_NESTING + 1)).kind, ParseErrorKind::TooDeep);
        let ParseErrorKind::Unexpected { expected, .. } = err("z*+").kind else { panic!() };
        assert_eq!(expected, ATOM.to_vec());
    }

    #[test]
    fn eval_examples() {
        let lhs = ev("y*x - x*y");
        let rhs = ev("h1*(1/2) + h1*h2*g");
        assert_eq!(lhs, rhs);
        assert_eq!(ev("g*g"), SrcElement::one());
        assert_eq!(ev("z*zb - zb*z"), ev("i*h1 + 2*i*h1*h2*g"));
        assert_eq!(ev("h1^-1 * h1"), SrcElement::one());
        assert_eq!(ev("(2/4)^-2"), SrcElement::scalar(ScalarPoly::from_int(4)));
        assert_eq!(ev("i^-1"), SrcElement::scalar(-ScalarPoly::i()));
        assert_eq!(eval(&parse("p1*z").unwrap()), Err(Error::ForeignGenerator("p1".into())));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(SrcElement::one().to_string(), "1");
        assert_eq!(SrcElement::zero().to_string(), "0");
        assert_eq!(ev("z*zb - zb*z").to_string(), "i*h1 + 2*i*h1*h2*g");
        assert_eq!(ev("zb*z*i*(1/2)").to_string(), "h1*(1/2) + i*z*zb*(1/2) + h1*h2*g");
        let phi11 = &ScalarPoly::i_h1() * &(&ScalarPoly::from_rational(rational(1, 2)) + &ScalarPoly::h2());
        assert_eq!(phi11.to_string(), "i*h1*(1/2) + i*h1*h2");
        assert_eq!(ev("-3*z^2 + (1/2 + i)*h1^-2*g").to_string(), "-3*z^2 + (1/2+1*i)*h1^-2*g");
        assert_eq!(ScalarPoly::from_rational(rational(-7, 3)).to_string(), "-(7/3)");
    }

    #[test]
    fn local_eval() {
        let f = eval_local(&parse("p1*q1 - q1*p1").unwrap()).unwrap();
        assert_eq!(f, LocalElement::scalar(ScalarPoly::h1()));
        let g = eval_local(&parse("p2*z").unwrap()).unwrap();
        assert_eq!(print_local(&g), "p2*z");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn element_round_trip(e in arb_element(6)) {
            prop_assert_eq!(ev(&e.to_string()), e);
        }

        #[test]
        fn scalar_round_trip(s in arb_scalar(), shift in -3i32..=3) {
            let s = s.shift(shift, 0);
            prop_assert_eq!(eval_scalar(&parse(&s.to_string()).unwrap()).unwrap(), s);
        }
    }
}
