use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::value::RawValue;

use super::{Format, Report, Verdict, FAIL_ERROR, HALVING, PASS_ERROR};
use crate::critical::{CriticalPoint, Enumeration};

pub const LEADING_TERM_FORMULA: &str = "c^{-n·a} · b0 · (a_d n)^{(1-d)/2}";

/// 17 significant digits with trailing zeros dropped; plain decimal for
/// moderate magnitudes, exponent form otherwise.
pub(crate) fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let s = format!("{:.*}", (16 - exp).max(0) as usize, x);
        trim_zeros(&s)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

fn num(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_f64(x)).expect("valid JSON number")
}

fn complex(z: Complex64) -> [Box<RawValue>; 2] {
    [num(z.re), num(z.im)]
}

fn coords(p: &CriticalPoint) -> Vec<[Box<RawValue>; 2]> {
    p.coords().iter().map(|&z| complex(z)).collect()
}

pub(crate) fn exact_string(f: &BigRational) -> String {
    if f.is_integer() {
        f.numer().to_string()
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

#[derive(Serialize)]
struct JsonTolerances {
    solver: Box<RawValue>,
    residual: Box<RawValue>,
    torus: Box<RawValue>,
    simple_zero: Box<RawValue>,
    positivity: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonInput<'a> {
    numerator: &'a str,
    denominator: &'a str,
    vars: &'a [String],
    direction: &'a [u64],
    oracle_n: usize,
    emit: Vec<Format>,
    tolerances: JsonTolerances,
    seeds: Vec<Vec<Box<RawValue>>>,
}

#[derive(Serialize)]
struct JsonPoint {
    coords: Vec<[Box<RawValue>; 2]>,
    moduli: Vec<Box<RawValue>>,
    residual: Box<RawValue>,
    is_positive_real: bool,
    is_smooth: bool,
    is_simple_in_last: bool,
}

impl From<&CriticalPoint> for JsonPoint {
    fn from(p: &CriticalPoint) -> Self {
        JsonPoint {
            coords: coords(p),
            moduli: p.torus_moduli.iter().map(|&m| num(m)).collect(),
            residual: num(p.residual),
            is_positive_real: p.is_positive_real,
            is_smooth: p.is_smooth,
            is_simple_in_last: p.is_simple_in_last,
        }
    }
}

#[derive(Serialize)]
struct JsonCritical {
    method: Option<super::SolveMethod>,
    enumeration: Option<Enumeration>,
    residual_tolerance: Box<RawValue>,
    points: Vec<JsonPoint>,
}

#[derive(Serialize)]
struct JsonContrib {
    positive_point: Vec<[Box<RawValue>; 2]>,
    companions_on_torus: Vec<JsonPoint>,
    aperiodic_case: bool,
    contrib_certain: bool,
    enumeration: Enumeration,
    torus_tolerance: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonHessian {
    matrix: Vec<Vec<[Box<RawValue>; 2]>>,
    determinant: [Box<RawValue>; 2],
    symmetric_shortcut_used: bool,
}

#[derive(Serialize)]
struct JsonAsymptotics {
    formula: &'static str,
    growth_per_step: Box<RawValue>,
    b0: [Box<RawValue>; 2],
    exponent: String,
    last_coordinate_weight: u64,
    error_order: String,
    note: &'static str,
}

#[derive(Serialize)]
struct JsonRow {
    n: u64,
    f_exact: String,
    leading_term: Option<Box<RawValue>>,
    ratio: Option<Box<RawValue>>,
}

#[derive(Serialize)]
struct JsonCriteria {
    pass_error: Box<RawValue>,
    halving: Box<RawValue>,
    fail_error: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonOracle {
    n_max: usize,
    bounds: Vec<usize>,
    recurrence_exact: bool,
    recurrence_cells_checked: Option<usize>,
    verdict_criteria: JsonCriteria,
    ratios: Vec<JsonRow>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    input: JsonInput<'a>,
    critical_points: JsonCritical,
    contributing: Option<JsonContrib>,
    hessian: Option<JsonHessian>,
    asymptotics: Option<JsonAsymptotics>,
    oracle: Option<JsonOracle>,
    verdict: Option<Verdict>,
    warnings: Vec<String>,
}

const RELABEL_NOTE: &str = "the last declared variable plays the role of x_d; relabeling changes J_d and H but not the asymptotics";

fn error_order(d: usize) -> String {
    let k = d as i64 + 1;
    if k % 2 == 0 {
        format!("O(n_d^{{-{}}})", k / 2)
    } else {
        format!("O(n_d^{{-{k}/2}})")
    }
}

fn exponent_string(r: &num_rational::Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn to_json(r: &Report) -> JsonReport<'_> {
    let cfg = &r.config;
    let t = &r.tolerances;
    let d = cfg.vars.len();
    JsonReport {
        input: JsonInput {
            numerator: &cfg.numerator,
            denominator: &cfg.denominator,
            vars: &cfg.vars,
            direction: cfg.direction.as_slice(),
            oracle_n: cfg.oracle_n,
            emit: cfg.emit.iter().copied().collect(),
            tolerances: JsonTolerances {
                solver: num(t.solver),
                residual: num(t.residual),
                torus: num(t.torus),
                simple_zero: num(t.simple_zero),
                positivity: num(t.positivity),
            },
            seeds: cfg.seeds.iter().map(|s| s.iter().map(|&v| num(v)).collect()).collect(),
        },
        critical_points: JsonCritical {
            method: r.method,
            enumeration: r.enumeration,
            residual_tolerance: num(t.residual),
            points: r.critical_points.iter().map(JsonPoint::from).collect(),
        },
        contributing: r.contributing.as_ref().map(|c| JsonContrib {
            positive_point: coords(&c.positive_point),
            companions_on_torus: c.companions_on_torus.iter().map(JsonPoint::from).collect(),
            aperiodic_case: c.aperiodic_case,
            contrib_certain: c.contrib_certain,
            enumeration: c.enumeration,
            torus_tolerance: num(t.torus),
        }),
        hessian: r.asymptotics.as_ref().map(|a| JsonHessian {
            matrix: a
                .hessian
                .matrix
                .iter()
                .map(|row| row.iter().map(|&z| complex(z)).collect())
                .collect(),
            determinant: complex(a.hessian.determinant),
            symmetric_shortcut_used: a.hessian.symmetric_shortcut_used,
        }),
        asymptotics: r.asymptotics.as_ref().map(|a| JsonAsymptotics {
            formula: LEADING_TERM_FORMULA,
            growth_per_step: num(a.growth_per_step),
            b0: complex(a.b0),
            exponent: exponent_string(&a.exponent),
            last_coordinate_weight: a.last_coordinate_weight,
            error_order: error_order(d),
            note: RELABEL_NOTE,
        }),
        oracle: r.oracle.as_ref().map(|o| JsonOracle {
            n_max: cfg.oracle_n,
            bounds: o.bounds.clone(),
            recurrence_exact: o.recurrence_cells_checked.is_some(),
            recurrence_cells_checked: o.recurrence_cells_checked,
            verdict_criteria: JsonCriteria {
                pass_error: num(PASS_ERROR),
                halving: num(HALVING),
                fail_error: num(FAIL_ERROR),
            },
            ratios: o
                .rows
                .iter()
                .map(|row| JsonRow {
                    n: row.n,
                    f_exact: exact_string(&row.f_exact),
                    leading_term: row.leading_term.filter(|v| v.is_finite()).map(num),
                    ratio: row.ratio.filter(|v| v.is_finite()).map(num),
                })
                .collect(),
        }),
        verdict: r.verdict,
        warnings: r.warnings.iter().map(|w| w.to_string()).collect(),
    }
}

pub fn render_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(r)).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_csv(r: &Report) -> String {
    let mut s = String::from("n,f_exact,leading_term,ratio\n");
    if let Some(o) = &r.oracle {
        for row in &o.rows {
            let opt = |v: Option<f64>| v.filter(|x| x.is_finite()).map(format_f64).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{}",
                row.n,
                exact_string(&row.f_exact),
                opt(row.leading_term),
                opt(row.ratio)
            );
        }
    }
    s
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else {
        format!("{} {} {}i", format_f64(z.re), if z.im < 0.0 { "-" } else { "+" }, format_f64(z.im.abs()))
    }
}

fn fmt_point(p: &CriticalPoint) -> String {
    let parts: Vec<String> = p.coords().iter().map(|&z| fmt_complex(z)).collect();
    format!("({})", parts.join(", "))
}

pub fn render_markdown(r: &Report) -> String {
    let cfg = &r.config;
    let mut s = String::new();
    let _ = writeln!(s, "# Diagonal asymptotics\n");
    let _ = writeln!(s, "- F = ({}) / ({})", cfg.numerator, cfg.denominator);
    let _ = writeln!(s, "- variables: {}", cfg.vars.join(", "));
    let _ = writeln!(s, "- direction: {}", cfg.direction);
    let _ = writeln!(s, "\n## Critical points\n");
    if let (Some(m), Some(e)) = (r.method, r.enumeration) {
        let _ = writeln!(s, "Method: {m:?}, enumeration: {e:?}, residual tolerance {}.\n", format_f64(r.tolerances.residual));
    }
    if r.critical_points.is_empty() {
        let _ = writeln!(s, "None found.");
    } else {
        let _ = writeln!(s, "| point | residual | positive | smooth | simple in last |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for p in &r.critical_points {
            let _ = writeln!(
                s,
                "| {} | {:.1e} | {} | {} | {} |",
                fmt_point(p),
                p.residual,
                p.is_positive_real,
                p.is_smooth,
                p.is_simple_in_last
            );
        }
    }
    if let Some(c) = &r.contributing {
        let _ = writeln!(s, "\n## Contributing point\n");
        let _ = writeln!(s, "- c = {}", fmt_point(&c.positive_point));
        let _ = writeln!(s, "- companions on the torus of c: {}", c.companions_on_torus.len());
        let _ = writeln!(s, "- aperiodic 1 - P form: {}", c.aperiodic_case);
        let _ = writeln!(s, "- contrib_certain: {}", c.contrib_certain);
    }
    if let Some(a) = &r.asymptotics {
        let _ = writeln!(s, "\n## Leading term\n");
        let _ = writeln!(s, "f_(a n) ~ {LEADING_TERM_FORMULA}\n");
        let _ = writeln!(s, "- h(J, c) = {}{}", fmt_complex(a.hessian.determinant),
            if a.hessian.symmetric_shortcut_used { " (symmetric closed form)" } else { "" });
        let _ = writeln!(s, "- b0 = {}", fmt_complex(a.b0));
        let _ = writeln!(s, "- growth per step = {}", format_f64(a.growth_per_step));
        let _ = writeln!(s, "- exponent of a_d n = {}", exponent_string(&a.exponent));
        let _ = writeln!(s, "- error of the leading term: {}", error_order(cfg.vars.len()));
        let _ = writeln!(s, "- note: {RELABEL_NOTE}");
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(s, "\n## Oracle\n");
        match o.recurrence_cells_checked {
            Some(k) => {
                let _ = writeln!(s, "Recurrence re-checked exactly on {k} cells.\n");
            }
            None => {
                let _ = writeln!(s, "Recurrence check FAILED.\n");
            }
        }
        let _ = writeln!(s, "| n | f exact | leading term | ratio |");
        let _ = writeln!(s, "|---|---|---|---|");
        let n_max = o.rows.len() as u64;
        for row in o.rows.iter().filter(|row| row.n <= 5 || row.n % 10 == 0 || row.n == n_max) {
            let f = exact_string(&row.f_exact);
            let f = if f.len() > 24 { format!("{}…({} digits)", &f[..12], f.len()) } else { f };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                row.n,
                f,
                row.leading_term.map(|v| format!("{v:.6e}")).unwrap_or_else(|| "-".into()),
                row.ratio.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into())
            );
        }
    }
    let _ = writeln!(
        s,
        "\n## Verdict\n\n{}",
        r.verdict.map(|v| v.to_string()).unwrap_or_else(|| "no prediction to check".into())
    );
    if !r.warnings.is_empty() {
        let _ = writeln!(s, "\n## Warnings\n");
        for w in &r.warnings {
            let _ = writeln!(s, "- {w}");
        }
    }
    s
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => render_json(r),
        Format::Markdown => render_markdown(r),
        Format::Csv => render_csv(r),
    }
}

/// Writes `<stem>.<ext>` into `dir` for each format; returns the paths.
pub fn emit_report(r: &Report, formats: &[Format], dir: &Path, stem: &str) -> io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    formats
        .iter()
        .map(|&f| {
            let path = dir.join(format!("{stem}.{}", f.extension()));
            std::fs::write(&path, render(r, f))?;
            Ok(path)
        })
        .collect()
}
