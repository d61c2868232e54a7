//! Parameter sweeps over potential templates.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hillproj_core::cover::CoverClass;
use hillproj_core::hill::{self, MonodromyOptions, Potential, Source};
use hillproj_core::Tolerances;
use rayon::prelude::*;
use serde_json::json;

use crate::expr::{self, Bindings, Expr};
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Range {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    /// Parses `name=lo:hi:count`.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("range `{spec}` is not of the form name=lo:hi:count"));
        let (name, rest) = spec.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad());
        };
        let r = Range {
            name: name.trim().to_string(),
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            count: count.trim().parse().map_err(|_| bad())?,
        };
        if r.count < 2 || !(r.lo < r.hi) {
            return Err(CliError::Usage(format!("range `{spec}` needs lo < hi and count >= 2")));
        }
        Ok(r)
    }

    pub fn value(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub template: Expr,
    pub ranges: Vec<Range>,
    pub period: f64,
}

impl SweepSpec {
    pub fn new(template: &str, ranges: Vec<Range>, period: f64) -> Result<Self, CliError> {
        if ranges.is_empty() || ranges.len() > 2 {
            return Err(CliError::Usage("a sweep takes one or two --param ranges".into()));
        }
        let names: Vec<&str> = ranges.iter().map(|r| r.name.as_str()).collect();
        if names.len() == 2 && names[0] == names[1] {
            return Err(CliError::Usage(format!("parameter `{}` given twice", names[0])));
        }
        let template = expr::parse_with_params(template, &names)?;
        Ok(SweepSpec {
            template,
            ranges,
            period,
        })
    }

    /// All grid points, the first parameter varying slowest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for r in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..r.count).map(move |i| {
                        let mut q = p.clone();
                        q.push(r.value(i));
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// One classified grid point, already formatted.
struct Row {
    line: String,
    kind: &'static str,
}

fn classify_point(
    spec: &SweepSpec,
    values: &[f64],
    opts: &MonodromyOptions,
    tol: &Tolerances,
) -> Result<(f64, CoverClass, f64), String> {
    let bindings: Bindings = spec
        .ranges
        .iter()
        .zip(values)
        .map(|(r, v)| (r.name.clone(), *v))
        .collect();
    let e = spec.template.bind(&bindings).map_err(|e| e.to_string())?;
    let empty = Bindings::new();
    let p = Potential::from_fn(
        move |t| e.eval(t, &empty).unwrap_or(f64::NAN),
        spec.period,
        Source::Function,
    )
    .map_err(|e| e.to_string())?;
    let (m, c) = hill::classify_potential_with(&p, opts, tol).map_err(|e| e.to_string())?;
    Ok((m.matrix.trace(), c.class, m.psi1))
}

fn format_row(values: &[f64], result: Result<(f64, CoverClass, f64), String>) -> Row {
    let mut line = String::new();
    for v in values {
        write!(line, "{v},").unwrap();
    }
    let kind = match result {
        Ok((trace, class, psi1)) => {
            let (param, sign) = match class {
                CoverClass::HypK { lambda, .. } => (lambda.to_string(), String::new()),
                CoverClass::EllAlpha { alpha } => (alpha.to_string(), String::new()),
                CoverClass::ParaK { parab_sign, .. } => (String::new(), parab_sign.to_string()),
                CoverClass::CentralK { .. } => (String::new(), String::new()),
            };
            let kind = class.kind().name();
            write!(line, "{trace},{kind},{},{param},{sign},{psi1}", class.k()).unwrap();
            kind
        }
        Err(_) => {
            line.push_str(",ERROR,,,,");
            "ERROR"
        }
    };
    Row { line, kind }
}

/// Runs the sweep on `threads` workers (or the pool default) and returns
/// the CSV document. Row order does not depend on the thread count.
pub fn run_sweep(
    spec: &SweepSpec,
    opts: &MonodromyOptions,
    tol: &Tolerances,
    threads: Option<usize>,
) -> Result<String, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let points = spec.points();
    let rows: Vec<Row> = pool.install(|| {
        points
            .par_iter()
            .map(|v| format_row(v, classify_point(spec, v, opts, tol)))
            .collect()
    });

    let mut out = String::new();
    for r in &spec.ranges {
        write!(out, "{},", r.name).unwrap();
    }
    out.push_str("trace,kind,k,param,sign,psi1\n");
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &rows {
        out.push_str(&r.line);
        out.push('\n');
        *counts.entry(r.kind).or_default() += 1;
    }
    let summary = json!({ "schema_version": 1, "command": "sweep", "rows": rows.len(), "counts": counts });
    writeln!(out, "# {summary}").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = Range::parse("a=0:15:4").unwrap();
        assert_eq!((r.name.as_str(), r.lo, r.hi, r.count), ("a", 0.0, 15.0, 4));
        assert_eq!(r.value(3), 15.0);
        assert!(Range::parse("a=0:15").is_err());
        assert!(Range::parse("a=1:0:5").is_err());
        assert!(Range::parse("a=0:1:1").is_err());
    }

    #[test]
    fn grid_order() {
        let spec = SweepSpec::new(
            "a + q",
            vec![Range::parse("a=0:1:2").unwrap(), Range::parse("q=0:2:3").unwrap()],
            1.0,
        )
        .unwrap();
        let p = spec.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[1], vec![0.0, 1.0]);
        assert_eq!(p[3], vec![1.0, 0.0]);
    }
}
