//! The `hillproj` command-line tool as a library, so that every subcommand
//! can be driven in-process by tests.

pub mod config;
pub mod expr;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hillproj_core::cover::{self, canonical_lift_with, central, CoverClass};
use hillproj_core::hill::{self, MonodromyOptions, Potential, Source};
use hillproj_core::report::{self, curve_report_with};
use hillproj_core::sl2::{self, Mat2, Sl2Class};
use hillproj_core::winding::{self, Interval, OpenCurveClass};
use hillproj_core::{CoverElement, Error, Sign, Tolerances};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ConfigFile, Settings, THREADS_ENV};
use crate::expr::{Bindings, EvalError, ParseError};

pub const SCHEMA_VERSION: u32 = 1;

/// The versioned schema every JSON document validates against.
pub const SCHEMA: &str = include_str!("../schema/hillproj.v1.schema.json");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("cannot evaluate potential: {0}")]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Eval(_) => 2,
            CliError::Numeric(e) => match e {
                Error::InvalidParameter(_)
                | Error::Determinant { .. }
                | Error::DegenerateInterval { .. }
                | Error::InvalidElement(_)
                | Error::NotPeriodic { .. }
                | Error::NotPositive(_) => 2,
                _ => 3,
            },
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hillproj", version, about = "Projective structures on curves from Hill potentials")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Integrator tolerance [default: 1e-10].
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Period of the potential [default: 1].
    #[arg(long, global = true)]
    pub period: Option<f64>,
    /// JSON file with `tol`, `period`, `threads` or `tolerances`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps; falls back to HILLPROJ_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; `-` or absent for stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Hyp,
    Para,
    Ell,
    Central,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monodromy, class and curve report of a potential.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
    },
    /// Samples of the developing map as CSV.
    Develop {
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        #[arg(long, default_value_t = 1.0)]
        tmax: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Classifies a grid of potentials built from a template.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        template: String,
        /// `name=lo:hi:count`, once or twice.
        #[arg(long = "param", required = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Winding number and class of an open interval `a,b`.
    Winding {
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long)]
        oriented: bool,
    },
    /// Decides conjugacy of two matrices `a,b,c,d`, or of their lifts.
    Conjugacy {
        #[arg(long, allow_hyphen_values = true)]
        matrix_a: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix_b: String,
        #[arg(long, allow_hyphen_values = true)]
        k_a: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k_b: Option<i64>,
    },
    /// Curve report with resonance points, from a potential or a class.
    Report {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "kind")]
        potential: Option<String>,
        #[arg(long, value_enum, required_unless_present = "potential")]
        kind: Option<KindArg>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
    },
}

/// Result of one invocation.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// A document and whether it carries a conditioning warning.
struct Doc {
    text: String,
    warned: bool,
}

impl Doc {
    fn json(v: Value) -> Doc {
        let warned = v.get("warning").is_some_and(|w| !w.is_null());
        Doc {
            text: format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
            warned,
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, code, ..Default::default() }
            } else {
                Outcome { stderr: text, code, ..Default::default() }
            };
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    match execute(&cli, env.as_deref()) {
        Ok(doc) => {
            let code = if doc.warned { 4 } else { 0 };
            match &cli.global.output {
                Some(p) if p.as_os_str() != "-" => match std::fs::write(p, &doc.text) {
                    Ok(()) => Outcome { code, ..Default::default() },
                    Err(e) => fail(CliError::Io(e)),
                },
                _ => Outcome { stdout: doc.text, code, ..Default::default() },
            }
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> Outcome {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "error",
        "error": e.to_string(),
        "exit_code": e.exit_code(),
    });
    Outcome {
        stdout: String::new(),
        stderr: format!("{}\n", serde_json::to_string(&doc).unwrap()),
        code: e.exit_code(),
    }
}

fn execute(cli: &Cli, env_threads: Option<&str>) -> Result<Doc, CliError> {
    let g = &cli.global;
    let file = g.config.as_deref().map(ConfigFile::load).transpose()?;
    let s = Settings::resolve(g.tol, g.period, g.threads, env_threads, file.as_ref())?;
    match &cli.command {
        Command::Classify { potential } => classify(potential, &s).map(Doc::json),
        Command::Develop { potential, tmax, samples } => develop(potential, *tmax, *samples, &s),
        Command::Sweep { template, params } => {
            let ranges = params
                .iter()
                .map(|p| sweep::Range::parse(p))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = sweep::SweepSpec::new(template, ranges, s.period)?;
            let text = sweep::run_sweep(&spec, &options(&s), &s.tolerances, s.threads)?;
            Ok(Doc { text, warned: false })
        }
        Command::Winding { interval, oriented } => winding(interval, *oriented, &s).map(Doc::json),
        Command::Conjugacy { matrix_a, matrix_b, k_a, k_b } => {
            conjugacy(matrix_a, matrix_b, *k_a, *k_b, &s).map(Doc::json)
        }
        Command::Report { potential, kind, k, lambda, alpha, sign } => {
            let e = match (potential, kind) {
                (Some(p), _) => hill::integrate_monodromy(&load_potential(p, &s)?, &options(&s))?.cover,
                (None, Some(kind)) => class_from_flags(*kind, *k, *lambda, *alpha, *sign)?.representative()?,
                (None, None) => return Err(CliError::Usage("give --potential or --kind".into())),
            };
            report_doc(&e, potential.as_deref(), &s).map(Doc::json)
        }
    }
}

fn options(s: &Settings) -> MonodromyOptions {
    MonodromyOptions::with_tol(s.tol)
}

/// Parses a potential and checks it on a probe grid, so that domain errors
/// surface as evaluation errors rather than as non-finite numbers.
pub fn load_potential(text: &str, s: &Settings) -> Result<Potential, CliError> {
    let e = expr::parse_potential(text)?;
    let empty = Bindings::new();
    for i in 0..=64 {
        e.eval(s.period * i as f64 / 64.0, &empty)?;
    }
    Ok(Potential::from_fn(
        move |t| e.eval(t, &empty).unwrap_or(f64::NAN),
        s.period,
        Source::Expression(text.to_string()),
    )?)
}

/// The class as JSON, always carrying `k`.
pub fn class_json(c: &CoverClass) -> Value {
    let mut v = serde_json::to_value(c).unwrap();
    v["k"] = json!(c.k());
    v
}

fn warning_json(c: &cover::Classification) -> Value {
    match c.warning {
        Some(w) => json!({
            "margin": w.margin,
            "message": "class boundary within the conditioning band; the label may be unstable",
        }),
        None => Value::Null,
    }
}

fn classify(text: &str, s: &Settings) -> Result<Value, CliError> {
    let p = load_potential(text, s)?;
    let (m, c) = hill::classify_potential_with(&p, &options(s), &s.tolerances)?;
    let report = curve_report_with(&m.cover, &s.tolerances)?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "classify",
        "potential": text,
        "period": s.period,
        "tol": s.tol,
        "monodromy": {
            "matrix": m.matrix,
            "psi1": m.psi1,
            "det_drift": m.det_drift,
            "steps": m.steps,
        },
        "class": class_json(&c.class),
        "report": report,
        "warning": warning_json(&c),
    }))
}

fn develop(text: &str, tmax: f64, samples: usize, s: &Settings) -> Result<Doc, CliError> {
    let p = load_potential(text, s)?;
    let rows = hill::developing_map_with(&p, tmax, samples, &options(s))?;
    let mut out = String::from("t,psi\n");
    for (t, psi) in rows {
        out.push_str(&format!("{t},{psi}\n"));
    }
    Ok(Doc { text: out, warned: false })
}

fn parse_numbers<const N: usize>(text: &str, what: &str) -> Result<[f64; N], CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|x| match x.trim() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            v => v.parse::<f64>(),
        })
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what} `{text}` is not a list of {N} numbers")))?;
    values
        .try_into()
        .map_err(|_| CliError::Usage(format!("{what} `{text}` needs exactly {N} numbers")))
}

fn endpoint(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn winding(text: &str, oriented: bool, s: &Settings) -> Result<Value, CliError> {
    let [a, b] = parse_numbers::<2>(text, "interval")?;
    let u = Interval::new(a, b)?;
    let class = winding::classify_open_with(&u, oriented, &s.tolerances)?;
    let w = match class {
        OpenCurveClass::Bounded(w) => json!(w),
        _ => Value::Null,
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "winding",
        "interval": [endpoint(a), endpoint(b)],
        "oriented": oriented,
        "class": class,
        "winding": w,
    }))
}

/// The lift of `±m` singled out by `k`: the canonical lift (the principal
/// one for elliptic matrices) followed by `ℓ̃_{kπ}`.
pub fn indexed_lift(m: &Mat2, k: i64, tol: &Tolerances) -> Result<CoverElement, CliError> {
    let base = match sl2::classify_sl2_with(m, tol)? {
        Sl2Class::EllipticProper { .. } => CoverElement::lift_near(*m, 0.0),
        _ => canonical_lift_with(m, tol)?,
    };
    Ok(base.compose(&central(k))?)
}

fn conjugacy(a: &str, b: &str, k_a: Option<i64>, k_b: Option<i64>, s: &Settings) -> Result<Value, CliError> {
    let tol = &s.tolerances;
    let [a0, a1, a2, a3] = parse_numbers::<4>(a, "matrix")?;
    let [b0, b1, b2, b3] = parse_numbers::<4>(b, "matrix")?;
    let ma = Mat2::with_tolerance(a0, a1, a2, a3, tol.det)?;
    let mb = Mat2::with_tolerance(b0, b1, b2, b3, tol.det)?;
    let lifted = k_a.is_some() || k_b.is_some();
    let doc = if lifted {
        let ea = indexed_lift(&ma, k_a.unwrap_or(0), tol)?;
        let eb = indexed_lift(&mb, k_b.unwrap_or(0), tol)?;
        let ca = cover::classify_cover_with(&ea, tol)?.class;
        let cb = cover::classify_cover_with(&eb, tol)?.class;
        let (conjugate, witness, residual) = match cover::conjugate_cover_with(&ea, &eb, tol) {
            Ok(w) => {
                let image = w.compose(&ea)?.compose(&w.invert())?;
                (true, json!(w), json!(image.matrix().distance(eb.matrix())))
            }
            Err(Error::NotConjugate(_)) => (false, Value::Null, Value::Null),
            Err(e) => return Err(e.into()),
        };
        json!({
            "lifted": true,
            "class_a": class_json(&ca),
            "class_b": class_json(&cb),
            "conjugate": conjugate,
            "witness": witness,
            "residual": residual,
        })
    } else {
        let ca = sl2::classify_sl2_with(&ma, tol)?;
        let cb = sl2::classify_sl2_with(&mb, tol)?;
        let (conjugate, witness, residual) = match sl2::conjugator_with(&ma, &mb, tol) {
            Ok(c) => (true, json!({ "matrix": c }), json!(c.conjugate(&ma).distance(&mb))),
            Err(Error::NotConjugate(_)) => (false, Value::Null, Value::Null),
            Err(e) => return Err(e.into()),
        };
        json!({
            "lifted": false,
            "class_a": ca,
            "class_b": cb,
            "conjugate": conjugate,
            "witness": witness,
            "residual": residual,
        })
    };
    let mut doc = doc;
    doc["schema_version"] = json!(SCHEMA_VERSION);
    doc["command"] = json!("conjugacy");
    Ok(doc)
}

pub fn class_from_flags(
    kind: KindArg,
    k: i64,
    lambda: Option<f64>,
    alpha: Option<f64>,
    sign: Option<SignArg>,
) -> Result<CoverClass, CliError> {
    let need = |flag: &str| CliError::Usage(format!("--kind {kind:?} needs --{flag}").to_lowercase());
    Ok(match kind {
        KindArg::Hyp => CoverClass::HypK { k, lambda: lambda.ok_or_else(|| need("lambda"))? },
        KindArg::Para => CoverClass::ParaK {
            k,
            parab_sign: match sign.ok_or_else(|| need("sign"))? {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            },
        },
        KindArg::Ell => CoverClass::EllAlpha { alpha: alpha.ok_or_else(|| need("alpha"))? },
        KindArg::Central => CoverClass::CentralK { k },
    })
}

fn report_doc(e: &CoverElement, potential: Option<&str>, s: &Settings) -> Result<Value, CliError> {
    let c = cover::classify_cover_with(e, &s.tolerances)?;
    let r = curve_report_with(e, &s.tolerances)?;
    let points = match report::resonance_points(e) {
        Ok(p) => p,
        Err(Error::NoResonancePoints) => Vec::new(),
        Err(err) => return Err(err.into()),
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "report",
        "potential": potential,
        "class": class_json(&c.class),
        "report": r,
        "resonance_points": points,
        "yamabe_obstructed": r.yamabe_obstructed,
        "warning": warning_json(&c),
    }))
}
