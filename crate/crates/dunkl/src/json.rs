//! JSON encodings. Rationals are decimal strings such as `"-3/2"`, so any
//! size survives a round trip through ordinary JSON tooling.

use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use dunkl_core::expr::{print_base, print_form, print_invariant, print_scalar};
use dunkl_core::scalars::Rational;
use dunkl_core::{
    BasePoly, Certificate, FormPoly, GaussianRational, InvariantPoly, Monomial, ScalarPoly, SrcElement, Witness,
};
use serde::{Deserialize, Serialize};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScalarTerm {
    pub h1: i32,
    pub h2: u32,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementTerm {
    pub p: u32,
    pub q: u32,
    pub g: bool,
    pub coeff: Vec<ScalarTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InvariantTerm {
    pub p: u32,
    pub q: u32,
    pub coeff: Vec<ScalarTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub coeff: Vec<ScalarTerm>,
    pub left: Vec<InvariantTerm>,
    pub right: Vec<InvariantTerm>,
}

/// Serialized certificate. The `*_text` fields are for readers and are
/// ignored when decoding.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub version: u32,
    pub target: Vec<InvariantTerm>,
    #[serde(default)]
    pub target_text: String,
    pub scalar: Vec<ScalarTerm>,
    #[serde(default)]
    pub scalar_text: String,
    pub witnesses: Vec<WitnessJson>,
}

fn parse_rational(s: &str) -> Result<Rational> {
    let r = Rational::from_str(s.trim()).map_err(|e| anyhow!("bad rational {s:?}: {e}"))?;
    Ok(r)
}

pub fn scalar_to_json(s: &ScalarPoly) -> Vec<ScalarTerm> {
    s.terms().map(|(&(h1, h2), c)| ScalarTerm { h1, h2, re: c.re.to_string(), im: c.im.to_string() }).collect()
}

pub fn scalar_from_json(terms: &[ScalarTerm]) -> Result<ScalarPoly> {
    let mut out = ScalarPoly::zero();
    for t in terms {
        let c = GaussianRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
        out.add_term((t.h1, t.h2), &c);
    }
    Ok(out)
}

pub fn element_to_json(e: &SrcElement) -> Vec<ElementTerm> {
    e.terms().map(|(m, c)| ElementTerm { p: m.p, q: m.q, g: m.gamma, coeff: scalar_to_json(c) }).collect()
}

pub fn element_from_json(terms: &[ElementTerm]) -> Result<SrcElement> {
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        pairs.push((Monomial::new(t.p, t.q, t.g), scalar_from_json(&t.coeff)?));
    }
    Ok(SrcElement::from_terms(pairs))
}

pub fn invariant_to_json(f: &InvariantPoly) -> Vec<InvariantTerm> {
    f.terms().map(|(&(p, q), c)| InvariantTerm { p, q, coeff: scalar_to_json(c) }).collect()
}

pub fn invariant_from_json(terms: &[InvariantTerm]) -> Result<InvariantPoly> {
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        pairs.push(((t.p, t.q), scalar_from_json(&t.coeff)?));
    }
    Ok(InvariantPoly::from_terms(pairs)?)
}

pub fn certificate_to_json(c: &Certificate) -> CertificateJson {
    CertificateJson {
        version: CERTIFICATE_VERSION,
        target: invariant_to_json(&c.target),
        target_text: print_invariant(&c.target),
        scalar: scalar_to_json(&c.scalar),
        scalar_text: print_scalar(&c.scalar),
        witnesses: c
            .witnesses
            .iter()
            .map(|w| WitnessJson {
                coeff: scalar_to_json(&w.coeff),
                left: invariant_to_json(&w.left),
                right: invariant_to_json(&w.right),
            })
            .collect(),
    }
}

pub fn certificate_from_json(c: &CertificateJson) -> Result<Certificate> {
    if c.version != CERTIFICATE_VERSION {
        bail!("unsupported certificate version {} (expected {CERTIFICATE_VERSION})", c.version);
    }
    let witnesses = c
        .witnesses
        .iter()
        .map(|w| -> Result<Witness> {
            Ok(Witness {
                coeff: scalar_from_json(&w.coeff)?,
                left: invariant_from_json(&w.left)?,
                right: invariant_from_json(&w.right)?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .context("decoding witnesses")?;
    Ok(Certificate { target: invariant_from_json(&c.target)?, scalar: scalar_from_json(&c.scalar)?, witnesses })
}

pub fn form_to_json(f: &FormPoly) -> serde_json::Value {
    let terms: Vec<_> =
        f.terms().map(|(m, c)| serde_json::json!({ "symbols": m, "coeff": scalar_to_json(c) })).collect();
    serde_json::json!({ "text": print_form(f), "terms": terms })
}

pub fn base_to_json(f: &BasePoly) -> serde_json::Value {
    let terms: Vec<_> = f.terms().map(|(b, c)| serde_json::json!({ "base": b, "coeff": scalar_to_json(c) })).collect();
    serde_json::json!({ "text": print_base(f), "terms": terms })
}
