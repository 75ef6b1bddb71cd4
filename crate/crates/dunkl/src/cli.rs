use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use dunkl_core::expr::{eval, eval_invariant, eval_local, parse, print_base, print_form, ExprTree};
use dunkl_core::hochschild::{check_certificate, hh0_report, reduce_certificate_poly};
use dunkl_core::index::{index_form, local_trace_density};
use dunkl_core::trace::{ch_phi, phi};
use dunkl_core::{FormPoly, InvariantPoly, ScalarPoly, SrcElement, TruncSeries};
use serde_json::json;

use crate::json::{
    base_to_json, certificate_from_json, certificate_to_json, element_to_json, form_to_json, invariant_to_json,
    scalar_to_json, CertificateJson,
};
use crate::suites::{self, Suite};
use crate::{Format, RunConfig};

/// Exact computations in the rank-one symplectic reflection algebra and its
/// spherical subalgebra.
///
/// Expressions use z, zb (the conjugate of z), x, y, g (the reflection),
/// p1..p9 and q1..q9 (base variables of the local model), and the scalars i,
/// h1, h2. Multiplication is always written as '*'.
#[derive(Debug, Parser)]
#[command(name = "dunkl", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Degree bound for hh0 and the generated suite cases.
    #[arg(long, global = true, default_value_t = 8)]
    degree: u32,
    /// Series order for chphi and the series suite.
    #[arg(long, global = true, default_value_t = 6)]
    order: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for verify.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Set h2 = 0 in printed results.
    #[arg(long, global = true)]
    h2_zero: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form z^p zb^q g^e.
    Nf { expr: String },
    /// Product in R.
    Mul { a: String, b: String },
    /// Commutator ab - ba in R.
    Comm { a: String, b: String },
    /// Product of two invariant polynomials in the spherical subalgebra.
    Star { f: String, g: String },
    /// Closed-form trace of an invariant polynomial.
    Trace { f: String },
    /// Emit a JSON certificate reducing F to a scalar modulo commutators, or replay one.
    Certify {
        #[arg(required_unless_present = "check", conflicts_with = "check")]
        f: Option<String>,
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
    },
    /// Certify every invariant monomial up to --degree.
    Hh0,
    /// Closed-form deformed Chern character up to --order.
    Chphi,
    /// Degree-(n-1) index form from formal curvature symbols.
    Index {
        #[arg(long)]
        n: u32,
        /// One symplectic curvature symbol per base pair (n-1 of them); "0" for none.
        #[arg(long, value_name = "SYMBOL")]
        rt: Vec<String>,
        #[arg(long, value_name = "SYMBOL")]
        theta: Option<String>,
        #[arg(long, value_name = "SYMBOL")]
        rn: Option<String>,
    },
    /// Trace density of an element of the local model W_(n-1) (x) R.
    Localtrace {
        expr: String,
        #[arg(long)]
        n: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Replace the built-in data file of a single suite.
        #[arg(long, value_name = "FILE")]
        suite_file: Option<PathBuf>,
    },
}

pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Bad input: exit status 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(InputError(e.into()))
}

fn tree(s: &str) -> Result<ExprTree> {
    parse(s).map_err(|e| input_err(anyhow!("cannot parse {s:?}: {e}")))
}

fn element(s: &str) -> Result<SrcElement> {
    eval(&tree(s)?).map_err(input_err)
}

fn invariant(s: &str) -> Result<InvariantPoly> {
    eval_invariant(&tree(s)?).map_err(input_err)
}

fn symbol(name: Option<&str>, max_degree: u32) -> Result<FormPoly> {
    match name {
        None | Some("0") => Ok(FormPoly::zero(max_degree)),
        Some(s) if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
            Ok(FormPoly::symbol(s, max_degree))
        }
        Some(s) => Err(input_err(anyhow!("invalid curvature symbol {s:?}"))),
    }
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn scalar(&self, s: ScalarPoly) -> ScalarPoly {
        if self.cfg.h2_zero {
            s.at_h2_zero()
        } else {
            s
        }
    }

    fn element(&self, e: SrcElement) -> SrcElement {
        if self.cfg.h2_zero {
            e.at_h2_zero()
        } else {
            e
        }
    }

    fn invariant(&self, f: InvariantPoly) -> InvariantPoly {
        if self.cfg.h2_zero {
            f.at_h2_zero()
        } else {
            f
        }
    }

    fn emit(&self, text: String, value: impl FnOnce() -> serde_json::Value) -> String {
        match self.cfg.format {
            Format::Text => text + "\n",
            Format::Json => pretty(&value()),
        }
    }

    fn show_element(&self, e: SrcElement) -> String {
        let e = self.element(e);
        self.emit(e.to_string(), || json!({ "text": e.to_string(), "terms": element_to_json(&e) }))
    }

    fn show_invariant(&self, f: InvariantPoly) -> String {
        let f = self.invariant(f);
        self.emit(f.to_string(), || json!({ "text": f.to_string(), "terms": invariant_to_json(&f) }))
    }

    fn show_series(&self, s: &TruncSeries) -> String {
        let coeffs: Vec<ScalarPoly> = s.coeffs().iter().map(|c| self.scalar(c.clone())).collect();
        let s = TruncSeries::from_coeffs(coeffs, s.order());
        self.emit(s.to_string(), || {
            let cs: Vec<_> =
                s.coeffs().iter().map(|c| json!({ "text": c.to_string(), "terms": scalar_to_json(c) })).collect();
            json!({ "variable": "tau", "order": s.order(), "coefficients": cs })
        })
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn execute(cli: Cli) -> Result<(u8, String)> {
    let g = cli.global;
    let cfg = RunConfig {
        format: g.format,
        degree: g.degree,
        order: g.order,
        seed: g.seed,
        jobs: g.jobs,
        h2_zero: g.h2_zero,
    };
    let ctx = Ctx { cfg };
    let out = match cli.command {
        Command::Nf { expr } => ctx.show_element(element(&expr)?),
        Command::Mul { a, b } => ctx.show_element(element(&a)?.mul(&element(&b)?)),
        Command::Comm { a, b } => ctx.show_element(element(&a)?.commutator(&element(&b)?)),
        Command::Star { f, g } => ctx.show_invariant(invariant(&f)?.star(&invariant(&g)?)),
        Command::Trace { f } => {
            let v = ctx.scalar(phi(&invariant(&f)?).0);
            ctx.emit(v.to_string(), || json!({ "text": v.to_string(), "terms": scalar_to_json(&v) }))
        }
        Command::Certify { f: Some(f), .. } => {
            let cert = reduce_certificate_poly(&invariant(&f)?).map_err(input_err)?;
            pretty(&certificate_to_json(&cert))
        }
        Command::Certify { f: None, check } => {
            let path = check.expect("clap enforces one of the two");
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(input_err)?;
            let raw: CertificateJson = serde_json::from_str(&text).map_err(input_err)?;
            let cert = certificate_from_json(&raw).map_err(input_err)?;
            let valid = check_certificate(&cert);
            let verdict = if valid { "valid" } else { "invalid" };
            let body = ctx.emit(verdict.to_string(), || json!({ "valid": valid, "witnesses": cert.witnesses.len() }));
            return Ok((if valid { 0 } else { 1 }, body));
        }
        Command::Hh0 => {
            let report = hh0_report(ctx.cfg.degree).map_err(input_err)?;
            let code = if report.all_passed() { 0 } else { 1 };
            let text = report
                .entries
                .iter()
                .map(|e| {
                    let mark = if e.passed() { "ok  " } else { "FAIL" };
                    format!(
                        "{mark} z^{} zb^{}: {} ({} witnesses)",
                        e.p,
                        e.q,
                        e.certificate.scalar,
                        e.certificate.witnesses.len()
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let body = ctx.emit(text, || {
                let entries: Vec<_> = report
                    .entries
                    .iter()
                    .map(|e| {
                        json!({
                            "p": e.p, "q": e.q,
                            "scalar": e.certificate.scalar.to_string(),
                            "phi": e.phi.to_string(),
                            "checked": e.checked,
                            "passed": e.passed(),
                            "witnesses": e.certificate.witnesses.len(),
                        })
                    })
                    .collect();
                json!({ "max_degree": report.max_degree, "all_passed": report.all_passed(), "entries": entries })
            });
            return Ok((code, body));
        }
        Command::Chphi => ctx.show_series(&ch_phi(ctx.cfg.order as usize)),
        Command::Index { n, rt, theta, rn } => {
            let top = 2 * n.saturating_sub(1);
            let rts = rt.iter().map(|s| symbol(Some(s), top)).collect::<Result<Vec<_>>>()?;
            let form = index_form(&rts, &symbol(theta.as_deref(), top)?, &symbol(rn.as_deref(), top)?, n)
                .map_err(input_err)?;
            let form = if ctx.cfg.h2_zero { form.at_h2_zero() } else { form };
            ctx.emit(print_form(&form), || form_to_json(&form))
        }
        Command::Localtrace { expr, n } => {
            let f = eval_local(&tree(&expr)?).map_err(input_err)?;
            let d = local_trace_density(&f, n).map_err(input_err)?;
            let d = if ctx.cfg.h2_zero { d.at_h2_zero() } else { d };
            ctx.emit(print_base(&d), || base_to_json(&d))
        }
        Command::Verify { suite, suite_file } => {
            let data = match &suite_file {
                Some(p) => Some(
                    std::fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))
                        .map_err(input_err)?,
                ),
                None => None,
            };
            let report = suites::run(suite, &ctx.cfg, data.as_deref()).map_err(input_err)?;
            let body = match ctx.cfg.format {
                Format::Text => report.to_text(),
                Format::Json => pretty(&report),
            };
            return Ok((if report.all_passed() { 0 } else { 1 }, body));
        }
    };
    Ok((0, out))
}

/// Runs the command line and returns the exit status and both output streams.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: rendered }
            } else {
                Output { code: 0, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(cli) {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(e) => {
            let code = if e.downcast_ref::<InputError>().is_some() { 2 } else { 1 };
            Output { code, stdout: String::new(), stderr: format!("error: {e:#}\n") }
        }
    }
}
