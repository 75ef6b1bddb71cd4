//! Verification suites.
//!
//! Each suite combines fixed cases read from a data file in `suites/` with
//! cases generated up to the configured degree or order. A data line is
//!
//! ```text
//! <op> <id> | <argument> | ... | <expected>
//! ```
//!
//! and `#` starts a comment line. Expected values are parsed and printed
//! canonically before comparison, except for `print`, which compares the
//! printed string byte for byte.

use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use dunkl_core::expr::{eval, eval_invariant, eval_scalar, parse, print_invariant, print_scalar};
use dunkl_core::hochschild::{check_certificate, descent_scalar, reduce_certificate};
use dunkl_core::index::a_hat_factor;
use dunkl_core::scalars::{factorial, rational, Rational};
use dunkl_core::spherical::monomials_up_to;
use dunkl_core::trace::{ch_phi, phi, star_power};
use dunkl_core::{GaussianRational, InvariantPoly, Monomial, ScalarPoly, SrcElement, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{CaseResult, Report};
use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Relations,
    Trace,
    Hh0,
    Degeneration,
    Euler,
    Chphi,
    Series,
    Roundtrip,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Relations,
        Suite::Trace,
        Suite::Hh0,
        Suite::Degeneration,
        Suite::Euler,
        Suite::Chphi,
        Suite::Series,
        Suite::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Trace => "trace",
            Suite::Hh0 => "hh0",
            Suite::Degeneration => "degeneration",
            Suite::Euler => "euler",
            Suite::Chphi => "chphi",
            Suite::Series => "series",
            Suite::Roundtrip => "roundtrip",
            Suite::All => "all",
        }
    }

    pub fn embedded_data(self) -> &'static str {
        match self {
            Suite::Relations => include_str!("../suites/relations.txt"),
            Suite::Trace => include_str!("../suites/trace.txt"),
            Suite::Hh0 => include_str!("../suites/hh0.txt"),
            Suite::Degeneration => include_str!("../suites/degeneration.txt"),
            Suite::Euler => include_str!("../suites/euler.txt"),
            Suite::Chphi => include_str!("../suites/chphi.txt"),
            Suite::Series => include_str!("../suites/series.txt"),
            Suite::Roundtrip => include_str!("../suites/roundtrip.txt"),
            Suite::All => "",
        }
    }
}

type Check = Box<dyn Fn() -> Result<(String, String)> + Send + Sync>;

/// A case waiting to run: `check` returns `(expected, actual)` in canonical text.
pub struct Pending {
    pub id: String,
    check: Check,
}

impl Pending {
    fn new(id: String, check: impl Fn() -> Result<(String, String)> + Send + Sync + 'static) -> Self {
        Pending { id, check: Box::new(check) }
    }

    fn run(&self) -> CaseResult {
        match (self.check)() {
            Ok((expected, actual)) => {
                let pass = expected == actual;
                CaseResult { id: self.id.clone(), expected, actual, pass }
            }
            Err(e) => CaseResult {
                id: self.id.clone(),
                expected: "a value".into(),
                actual: format!("error: {e:#}"),
                pass: false,
            },
        }
    }
}

fn element(s: &str) -> Result<SrcElement> {
    let tree = parse(s).map_err(|e| anyhow!("{s:?}: {e}"))?;
    Ok(eval(&tree)?)
}

fn invariant(s: &str) -> Result<InvariantPoly> {
    let tree = parse(s).map_err(|e| anyhow!("{s:?}: {e}"))?;
    Ok(eval_invariant(&tree)?)
}

fn scalar(s: &str) -> Result<ScalarPoly> {
    let tree = parse(s).map_err(|e| anyhow!("{s:?}: {e}"))?;
    Ok(eval_scalar(&tree)?)
}

fn index_arg(s: &str) -> Result<u32> {
    s.parse().with_context(|| format!("expected a nonnegative integer, got {s:?}"))
}

struct DataLine {
    op: String,
    id: String,
    args: Vec<String>,
    expected: String,
}

fn parse_data(text: &str) -> Result<Vec<DataLine>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields: Vec<String> = line.split('|').map(|f| f.trim().to_string()).collect();
        let head = fields.remove(0);
        let (op, id) =
            head.split_once(char::is_whitespace).ok_or_else(|| anyhow!("line {}: missing case id", n + 1))?;
        let expected = fields.pop().ok_or_else(|| anyhow!("line {}: missing expected value", n + 1))?;
        out.push(DataLine { op: op.to_string(), id: id.trim().to_string(), args: fields, expected });
    }
    Ok(out)
}

fn arity(op: &str) -> Option<usize> {
    Some(match op {
        "nf" | "print" | "trace" | "euler" | "descent" | "chphi" | "ahat" | "weyl" => 1,
        "comm" | "mul" | "star" | "starcomm" | "moyal" => 2,
        _ => return None,
    })
}

fn data_cases(suite: &str, text: &str) -> Result<Vec<Pending>> {
    let mut out = Vec::new();
    for line in parse_data(text)? {
        let want = arity(&line.op).ok_or_else(|| anyhow!("unknown operation {:?} in case {}", line.op, line.id))?;
        if line.args.len() != want {
            bail!("case {}: {} takes {want} argument(s), got {}", line.id, line.op, line.args.len());
        }
        let DataLine { op, id, args, expected: e } = line;
        let a = args[0].clone();
        let b = args.get(1).cloned().unwrap_or_default();
        let id = format!("{suite}/{id}");
        let case = match op.as_str() {
            "nf" => Pending::new(id, move || Ok((element(&e)?.to_string(), element(&a)?.to_string()))),
            "print" => Pending::new(id, move || Ok((e.clone(), element(&a)?.to_string()))),
            "comm" => Pending::new(id, move || {
                Ok((element(&e)?.to_string(), element(&a)?.commutator(&element(&b)?).to_string()))
            }),
            "mul" => {
                Pending::new(id, move || Ok((element(&e)?.to_string(), element(&a)?.mul(&element(&b)?).to_string())))
            }
            "star" => Pending::new(id, move || {
                Ok((invariant(&e)?.to_string(), invariant(&a)?.star(&invariant(&b)?).to_string()))
            }),
            "starcomm" => Pending::new(id, move || {
                Ok((invariant(&e)?.to_string(), invariant(&a)?.star_commutator(&invariant(&b)?).to_string()))
            }),
            "moyal" => Pending::new(id, move || {
                Ok((invariant(&e)?.to_string(), invariant(&a)?.moyal_star(&invariant(&b)?).to_string()))
            }),
            "weyl" => {
                Pending::new(id, move || Ok((invariant(&e)?.to_string(), invariant(&a)?.normal_to_weyl().to_string())))
            }
            "trace" => Pending::new(id, move || Ok((scalar(&e)?.to_string(), phi(&invariant(&a)?).to_string()))),
            "euler" => Pending::new(id, move || {
                Ok((invariant(&e)?.to_string(), invariant(&a)?.euler_derivation().to_string()))
            }),
            "descent" => {
                Pending::new(id, move || Ok((scalar(&e)?.to_string(), descent_scalar(index_arg(&a)?)?.to_string())))
            }
            "chphi" => Pending::new(id, move || {
                let k = index_arg(&a)?;
                Ok((scalar(&e)?.to_string(), ch_phi(k as usize).coeff(k as usize).to_string()))
            }),
            "ahat" => Pending::new(id, move || {
                let k = index_arg(&a)? as usize;
                Ok((scalar(&e)?.to_string(), a_hat_factor(k).coeff(k).to_string()))
            }),
            _ => unreachable!("arity checked"),
        };
        out.push(case);
    }
    Ok(out)
}

fn mono(p: u32, q: u32) -> InvariantPoly {
    InvariantPoly::monomial(p, q).expect("p + q even")
}

fn trace_defects(degree: u32) -> Vec<Pending> {
    let mons = monomials_up_to(degree);
    let mut out = Vec::new();
    for &(p1, q1) in &mons {
        for &(p2, q2) in &mons {
            if p1 + q1 + p2 + q2 > degree {
                continue;
            }
            let id = format!("trace/defect-{p1:02}-{q1:02}-{p2:02}-{q2:02}");
            out.push(Pending::new(id, move || {
                let k = mono(p1, q1).star_commutator(&mono(p2, q2));
                Ok(("0".into(), phi(&k).to_string()))
            }));
        }
    }
    out
}

fn hh0_cases(degree: u32) -> Vec<Pending> {
    monomials_up_to(degree)
        .into_iter()
        .map(|(p, q)| {
            Pending::new(format!("hh0/certificate-{p:02}-{q:02}"), move || {
                let cert = reduce_certificate(p, q)?;
                let actual = if check_certificate(&cert) {
                    print_scalar(&cert.scalar)
                } else {
                    format!("certificate does not replay (scalar {})", print_scalar(&cert.scalar))
                };
                Ok((phi(&cert.target).to_string(), actual))
            })
        })
        .collect()
}

fn degeneration_cases(degree: u32) -> Vec<Pending> {
    let mons = monomials_up_to(degree);
    let mut out = Vec::new();
    for &(p1, q1) in &mons {
        for &(p2, q2) in &mons {
            let id = format!("degeneration/weyl-{p1:02}-{q1:02}-{p2:02}-{q2:02}");
            out.push(Pending::new(id, move || {
                let (f, g) = (mono(p1, q1), mono(p2, q2));
                let moyal = f.normal_to_weyl().moyal_star(&g.normal_to_weyl());
                let star = f.star(&g).at_h2_zero().normal_to_weyl();
                Ok((print_invariant(&moyal), print_invariant(&star)))
            }));
        }
    }
    out
}

fn euler_bracket_cases(degree: u32) -> Vec<Pending> {
    monomials_up_to(degree)
        .into_iter()
        .map(|(p, q)| {
            Pending::new(format!("euler/bracket-{p:02}-{q:02}"), move || {
                let m = mono(p, q);
                let weighted = m.scale(&ScalarPoly::i_h1().scale_rational(&rational(p as i64 - q as i64, 1)));
                let bracket = InvariantPoly::z_zb().star_commutator(&m);
                Ok((print_invariant(&weighted), print_invariant(&bracket)))
            })
        })
        .collect()
}

fn star_power_cases(data: &str, order: u32) -> Result<Vec<Pending>> {
    let mut out = Vec::new();
    for line in parse_data(data)? {
        if line.op != "chphi" {
            continue;
        }
        let k = index_arg(line.args.first().map(String::as_str).unwrap_or(""))?;
        if k > order {
            continue;
        }
        let expected = line.expected.clone();
        out.push(Pending::new(format!("chphi/star-power-{k:02}"), move || {
            let v = phi(&star_power(&InvariantPoly::z_zb(), k))
                .0
                .scale_rational(&(Rational::from_integer(1.into()) / factorial(k)));
            Ok((scalar(&expected)?.to_string(), v.to_string()))
        }));
    }
    Ok(out)
}

fn random_scalar(rng: &mut ChaCha8Rng) -> ScalarPoly {
    let re = rational(rng.gen_range(-5..=5), rng.gen_range(1..=4));
    let im = rational(rng.gen_range(-5..=5), rng.gen_range(1..=4));
    ScalarPoly::monomial(GaussianRational::new(re, im), rng.gen_range(-2..=2), rng.gen_range(0..=2))
}

fn random_series(rng: &mut ChaCha8Rng, order: usize, constant: ScalarPoly) -> TruncSeries {
    let mut coeffs = vec![constant];
    coeffs.extend((1..=order).map(|_| random_scalar(rng)));
    TruncSeries::from_coeffs(coeffs, order)
}

fn series_property_cases(order: usize, seed: u64) -> Vec<Pending> {
    let mut out = Vec::new();
    for n in 0..10u64 {
        let case_seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(n);
        out.push(Pending::new(format!("series/exp-sum-{n:02}"), move || {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
            let a = random_series(&mut rng, order, ScalarPoly::zero());
            let b = random_series(&mut rng, order, ScalarPoly::zero());
            Ok((a.exp()?.mul(&b.exp()?).to_string(), a.add(&b).exp()?.to_string()))
        }));
        out.push(Pending::new(format!("series/sqrt-square-{n:02}"), move || {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed ^ 1);
            let f = random_series(&mut rng, order, ScalarPoly::one());
            let r = f.sqrt()?;
            Ok((f.to_string(), r.mul(&r).to_string()))
        }));
        out.push(Pending::new(format!("series/inverse-{n:02}"), move || {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed ^ 2);
            // units are nonzero monomials without h2
            let c = GaussianRational::new(
                rational(rng.gen_range(1..=5), rng.gen_range(1..=4)),
                rational(rng.gen_range(-5..=5), 3),
            );
            let unit = ScalarPoly::monomial(c, rng.gen_range(-2..=2), 0);
            let f = random_series(&mut rng, order, unit);
            Ok((TruncSeries::one(order).to_string(), f.mul(&f.inverse()?).to_string()))
        }));
    }
    out
}

fn random_element(rng: &mut ChaCha8Rng, max_deg: u32) -> SrcElement {
    let mut e = SrcElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let p = rng.gen_range(0..=max_deg);
        let q = rng.gen_range(0..=max_deg - p);
        e = e.add(&SrcElement::term(Monomial::new(p, q, rng.gen_bool(0.5)), random_scalar(rng)));
    }
    e
}

const ROUND_TRIPS: u64 = 500;

fn round_trip_cases(degree: u32, seed: u64) -> Vec<Pending> {
    (0..ROUND_TRIPS)
        .map(|n| {
            Pending::new(format!("roundtrip/random-{n:03}"), move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n));
                let e = random_element(&mut rng, degree);
                let text = e.to_string();
                Ok((text.clone(), element(&text)?.to_string()))
            })
        })
        .collect()
}

/// All cases of one suite. `data` replaces the embedded data file.
pub fn build(suite: Suite, cfg: &RunConfig, data: Option<&str>) -> Result<Vec<Pending>> {
    if suite == Suite::All {
        if data.is_some() {
            bail!("--suite-file needs a single suite, not 'all'");
        }
        let mut all = Vec::new();
        for s in Suite::EACH {
            all.extend(build(s, cfg, None)?);
        }
        return Ok(all);
    }
    let text = data.unwrap_or(suite.embedded_data());
    let mut cases = data_cases(suite.name(), text)?;
    match suite {
        Suite::Trace => cases.extend(trace_defects(cfg.degree)),
        Suite::Hh0 => cases.extend(hh0_cases(cfg.degree)),
        Suite::Degeneration => cases.extend(degeneration_cases(cfg.degree)),
        Suite::Euler => cases.extend(euler_bracket_cases(cfg.degree)),
        Suite::Chphi => cases.extend(star_power_cases(text, cfg.order)?),
        Suite::Series => cases.extend(series_property_cases(cfg.order as usize, cfg.seed)),
        Suite::Roundtrip => cases.extend(round_trip_cases(cfg.degree, cfg.seed)),
        Suite::Relations | Suite::All => {}
    }
    Ok(cases)
}

pub fn run(suite: Suite, cfg: &RunConfig, data: Option<&str>) -> Result<Report> {
    let start = Instant::now();
    let cases = build(suite, cfg, data)?;
    let exec = || cases.par_iter().map(Pending::run).collect::<Vec<_>>();
    let mut results = match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(exec),
        None => exec(),
    };
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Report::new(suite.name(), results, start.elapsed(), cfg))
}
