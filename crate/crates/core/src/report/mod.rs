//! End-to-end analysis jobs: config, pipeline, convergence verdict and
//! report rendering.
//!
//! Only config and expression errors abort a job. Every hypothesis failure
//! along the way becomes a [`Warning`] and the affected sections are left
//! empty.

mod config;
mod emit;
mod verdict;

pub use config::{parse_config, ConfigError, Format, JobConfig, ToleranceOverrides, DEFAULT_ORACLE_N};
pub use emit::{emit_report, render, render_csv, render_json, render_markdown, LEADING_TERM_FORMULA};
pub use verdict::{convergence_verdict, doubling_chain, Verdict, VerdictError, FAIL_ERROR, HALVING, PASS_ERROR};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::asymptotics::{assemble_asymptotics, AsymptoticResult, CertaintyPolicy};
use crate::critical::{
    build_critical_system, classify_contributing, solve_bivariate_complete_with, solve_positive_newton_with,
    solve_symmetric_positive, ContribResult, CriticalPoint, Enumeration, SolveError, Tolerances,
};
use crate::hypothesis::Hypothesis;
use crate::poly::Polynomial;
use crate::series::{compute_coefficient_table, diagonal_sequence, ratio_table};

/// How the critical points were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    CompleteBivariate,
    SymmetricDiagonal,
    PositiveNewton,
}

/// A report caveat tied to one method hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub hypothesis: Hypothesis,
    pub message: String,
}

impl Warning {
    fn new(hypothesis: Hypothesis, message: impl Into<String>) -> Self {
        Warning {
            hypothesis,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", self.hypothesis, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub n: u64,
    pub f_exact: BigRational,
    pub leading_term: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSummary {
    pub bounds: Vec<usize>,
    /// Number of cells at which the defining recurrence was re-checked
    /// exactly; `None` if a nonzero residual was found.
    pub recurrence_cells_checked: Option<usize>,
    pub rows: Vec<OracleRow>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: JobConfig,
    pub tolerances: Tolerances,
    pub method: Option<SolveMethod>,
    pub enumeration: Option<Enumeration>,
    pub critical_points: Vec<CriticalPoint>,
    pub contributing: Option<ContribResult>,
    pub asymptotics: Option<AsymptoticResult>,
    pub oracle: Option<OracleSummary>,
    pub verdict: Option<Verdict>,
    pub warnings: Vec<Warning>,
}

fn solve_warning(e: &SolveError) -> Warning {
    Warning::new(e.hypothesis().unwrap_or(Hypothesis::PositivePointUniqueness), e.to_string())
}

struct Solved {
    method: SolveMethod,
    enumeration: Enumeration,
    points: Vec<CriticalPoint>,
}

fn solve(j: &Polynomial, cfg: &JobConfig, tol: &Tolerances, warnings: &mut Vec<Warning>) -> Option<Solved> {
    let a = &cfg.direction;
    let newton = |warnings: &mut Vec<Warning>| -> Option<Solved> {
        let sys = build_critical_system(j, a).map_err(|e| warnings.push(solve_warning(&e))).ok()?;
        match solve_positive_newton_with(&sys, &cfg.seeds, tol) {
            Ok(c) => Some(Solved {
                method: SolveMethod::PositiveNewton,
                enumeration: Enumeration::Partial,
                points: vec![c],
            }),
            Err(SolveError::DistinctPositivePoints(points)) => {
                warnings.push(solve_warning(&SolveError::DistinctPositivePoints(points.clone())));
                Some(Solved {
                    method: SolveMethod::PositiveNewton,
                    enumeration: Enumeration::Partial,
                    points,
                })
            }
            Err(e) => {
                warnings.push(solve_warning(&e));
                None
            }
        }
    };
    if j.dim() == 2 {
        match solve_bivariate_complete_with(j, a, tol) {
            Ok(sol) => {
                let enumeration = if sol.elimination_is_clean() {
                    Enumeration::Complete
                } else {
                    warnings.push(Warning::new(
                        Hypothesis::ContributingSetCertified,
                        format!(
                            "{} resultant root(s) have no finite critical point above them; the enumeration is not certified complete",
                            sol.unmatched_roots.len()
                        ),
                    ));
                    Enumeration::Degenerate
                };
                return Some(Solved {
                    method: SolveMethod::CompleteBivariate,
                    enumeration,
                    points: sol.points,
                });
            }
            Err(e) => {
                warnings.push(solve_warning(&e));
                return newton(warnings);
            }
        }
    }
    if j.is_symmetric() && a.is_uniform() {
        match solve_symmetric_positive(j, a) {
            Ok(c) => {
                return Some(Solved {
                    method: SolveMethod::SymmetricDiagonal,
                    enumeration: Enumeration::Partial,
                    points: vec![c],
                })
            }
            Err(e) => {
                warnings.push(solve_warning(&e));
                return None;
            }
        }
    }
    newton(warnings)
}

/// Runs parse, solve, classify, asymptotics and the oracle comparison.
pub fn run_analysis(cfg: &JobConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    let (i, j) = cfg.polynomials()?;
    let tol = cfg.tolerances();
    let mut warnings = Vec::new();
    let mut report = Report {
        config: cfg.clone(),
        tolerances: tol,
        method: None,
        enumeration: None,
        critical_points: Vec::new(),
        contributing: None,
        asymptotics: None,
        oracle: None,
        verdict: None,
        warnings: Vec::new(),
    };

    if let Some(solved) = solve(&j, cfg, &tol, &mut warnings) {
        report.method = Some(solved.method);
        report.enumeration = Some(solved.enumeration);
        match classify_contributing(&j, &cfg.direction, &solved.points, solved.enumeration, &tol) {
            Ok(contrib) => {
                if !contrib.contrib_certain {
                    let why = match solved.enumeration {
                        Enumeration::Complete => format!(
                            "{} other critical point(s) share the torus of the positive point",
                            contrib.companions_on_torus.len()
                        ),
                        Enumeration::Degenerate => {
                            "J is not of the aperiodic form 1 - P with nonnegative P and the elimination is degenerate"
                                .to_string()
                        }
                        Enumeration::Partial => {
                            "J is not of the aperiodic form 1 - P with nonnegative P and no complete enumeration is available for d >= 3"
                                .to_string()
                        }
                    };
                    warnings.push(Warning::new(
                        Hypothesis::ContributingSetCertified,
                        format!("contrib_certain = false: {why}; asymptotics assume the positive point alone contributes"),
                    ));
                }
                match assemble_asymptotics(&i, &j, &cfg.direction, &contrib, CertaintyPolicy::AllowUncertain) {
                    Ok(res) => report.asymptotics = Some(res),
                    Err(e) => warnings.push(Warning::new(
                        e.hypothesis().unwrap_or(Hypothesis::NonzeroHessian),
                        e.to_string(),
                    )),
                }
                report.contributing = Some(contrib);
            }
            Err(e) => warnings.push(solve_warning(&e)),
        }
        report.critical_points = solved.points;
    }

    if j.constant_term().is_zero() {
        warnings.push(Warning::new(
            Hypothesis::SeriesDefinedAtOrigin,
            "J(0) = 0: no power series expansion at the origin, oracle skipped",
        ));
    } else {
        report.oracle = Some(run_oracle(&i, &j, cfg, report.asymptotics.as_ref(), &mut warnings));
        if let Some(rows) = report.oracle.as_ref().map(|o| &o.rows) {
            let ratios: Vec<(u64, f64)> = rows.iter().filter_map(|r| r.ratio.map(|q| (r.n, q))).collect();
            if !ratios.is_empty() {
                report.verdict = convergence_verdict(&ratios).ok().or(Some(Verdict::Inconclusive));
            }
        }
    }
    report.warnings = warnings;
    Ok(report)
}

fn run_oracle(
    i: &Polynomial,
    j: &Polynomial,
    cfg: &JobConfig,
    asym: Option<&AsymptoticResult>,
    warnings: &mut Vec<Warning>,
) -> OracleSummary {
    let n = cfg.oracle_n;
    let bounds: Vec<usize> = cfg.direction.as_slice().iter().map(|&a| a as usize * n).collect();
    let table = compute_coefficient_table(i, j, &bounds).expect("config validated the box and J(0)");
    let recurrence_cells_checked = match table.verify_recurrence(i, j) {
        Ok(k) => Some(k),
        Err(e) => {
            warnings.push(Warning::new(Hypothesis::SeriesDefinedAtOrigin, e.to_string()));
            None
        }
    };
    let seq = diagonal_sequence(&table, &cfg.direction, n).expect("box holds the ray");
    let ratios = asym.and_then(|a| match ratio_table(&seq, a) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(Warning::new(Hypothesis::NonzeroHessian, e.to_string()));
            None
        }
    });
    let rows = seq
        .values
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, f)| {
            let k = k as u64;
            OracleRow {
                n: k,
                f_exact: f.clone(),
                leading_term: asym.map(|a| crate::asymptotics::evaluate_leading_term(a, k)),
                ratio: ratios.as_ref().map(|r| r[k as usize - 1].ratio),
            }
        })
        .collect();
    OracleSummary {
        bounds,
        recurrence_cells_checked,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(extra: &str) -> JobConfig {
        parse_config(extra).unwrap()
    }

    #[test]
    fn delannoy_pipeline() {
        let r = run_analysis(&job(
            "numerator = \"1\"\ndenominator = \"1 - x - y - x*y\"\ndirection = [1, 1]",
        ))
        .unwrap();
        assert_eq!(r.method, Some(SolveMethod::CompleteBivariate));
        assert_eq!(r.critical_points.len(), 2);
        let a = r.asymptotics.as_ref().unwrap();
        assert!((a.growth_per_step - (2f64.sqrt() + 1.0).powi(2)).abs() < 1e-12);
        assert!((a.b0.re - 0.57268).abs() < 1e-5);
        assert_eq!(r.verdict, Some(Verdict::Pass));
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        let row = &r.oracle.as_ref().unwrap().rows[3];
        assert_eq!(row.f_exact, BigRational::from_integer(321.into()));
        assert!((row.ratio.unwrap() - 0.9715).abs() < 1e-3);
    }

    #[test]
    fn failures_degrade_to_warnings() {
        // no positive critical point: J > 0 on the orthant
        let r = run_analysis(&job(
            "numerator = \"1\"\ndenominator = \"1 + x + y + z\"\ndirection = [1, 1, 1]\noracle_n = 4",
        ))
        .unwrap();
        assert!(r.asymptotics.is_none() && r.verdict.is_none());
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.warnings[0].hypothesis, Hypothesis::PositivePointUniqueness);
        assert!(r.oracle.is_some());

        let r = run_analysis(&job(
            "numerator = \"1\"\ndenominator = \"x + y - x*y\"\ndirection = [1, 1]\noracle_n = 4",
        ))
        .unwrap();
        assert!(r.oracle.is_none());
        assert!(r.warnings.iter().any(|w| w.hypothesis == Hypothesis::SeriesDefinedAtOrigin));
    }

    #[test]
    fn uncertain_contributions_are_flagged() {
        let r = run_analysis(&job(
            "numerator = \"1 - x*y + x^2*y^2\"\ndenominator = \"1 - x*y - (x + y)*(1 - x*y + x^2*y^2)\"\ndirection = [1, 1]",
        ))
        .unwrap();
        assert!(!r.contributing.as_ref().unwrap().contrib_certain);
        assert!(r.asymptotics.is_some());
        assert!(r
            .warnings
            .iter()
            .all(|w| w.hypothesis == Hypothesis::ContributingSetCertified));
        assert!(r.warnings.iter().any(|w| w.message.contains("contrib_certain = false")));
    }
}
