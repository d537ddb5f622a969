use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::poly::Polynomial;

use super::{CriticalPoint, Direction, SolveError, Tolerances};

/// How much of the critical set a list of points is known to cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Enumeration {
    /// Every isolated complex critical point, with every root of the
    /// eliminant accounted for.
    Complete,
    /// Elimination succeeded but some eliminant roots have no finite
    /// critical point above them, so the enumeration is not certified.
    Degenerate,
    /// Only the points a local solver happened to find.
    Partial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContribResult {
    pub positive_point: CriticalPoint,
    /// Other critical points on the torus of the positive point.
    pub companions_on_torus: Vec<CriticalPoint>,
    pub aperiodic_case: bool,
    pub contrib_certain: bool,
    pub enumeration: Enumeration,
}

/// True when `J / J(0) = 1 - P` with `P` nonzero, all coefficients of `P`
/// nonnegative, and the exponents of `P` spanning the full integer lattice.
pub fn is_aperiodic_one_minus_nonneg(denominator: &Polynomial) -> bool {
    let j0 = denominator.constant_term();
    if j0.is_zero() {
        return false;
    }
    let normalized = denominator.scalar_mul(&(BigRational::from_integer(1.into()) / j0));
    let p = &Polynomial::one(denominator.vars()) - &normalized;
    !p.is_zero() && p.terms().all(|(_, c)| !c.is_negative()) && p.support_lattice_spans()
}

/// Picks the positive point out of `points` and filters the rest by torus.
///
/// Certainty comes either from the aperiodic nonnegative form of `J`, or from
/// a complete enumeration in which no other point shares the positive
/// point's torus.
pub fn classify_contributing(
    denominator: &Polynomial,
    direction: &Direction,
    points: &[CriticalPoint],
    enumeration: Enumeration,
    tol: &Tolerances,
) -> Result<ContribResult, SolveError> {
    if direction.dim() != denominator.dim() {
        return Err(SolveError::DirectionDimension {
            expected: denominator.dim(),
            got: direction.dim(),
        });
    }
    let (positive, others): (Vec<&CriticalPoint>, Vec<&CriticalPoint>) =
        points.iter().partition(|p| p.is_positive_real);
    let positive_point = match positive.as_slice() {
        [] => return Err(SolveError::NoPositivePoint),
        [c] => (*c).clone(),
        many => {
            return Err(SolveError::MultiplePositivePoints(
                many.iter().map(|c| (*c).clone()).collect(),
            ))
        }
    };
    let companions_on_torus: Vec<CriticalPoint> = others
        .into_iter()
        .filter(|p| p.point.same_torus(&positive_point.point, tol.torus))
        .cloned()
        .collect();
    let aperiodic_case = is_aperiodic_one_minus_nonneg(denominator);
    let contrib_certain =
        aperiodic_case || (enumeration == Enumeration::Complete && companions_on_torus.is_empty());
    Ok(ContribResult {
        positive_point,
        companions_on_torus,
        aperiodic_case,
        contrib_certain,
        enumeration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::{build_critical_system, solve_bivariate_complete};
    use crate::poly::{parse_polynomial, ComplexPoint};
    use num_complex::Complex64;

    fn vars(d: usize) -> Vec<String> {
        ["x", "y", "z"][..d].iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, d: usize) -> Polynomial {
        parse_polynomial(text, &vars(d)).unwrap()
    }

    fn bivariate(text: &str) -> (Polynomial, Direction, Vec<CriticalPoint>, Enumeration) {
        let j = p(text, 2);
        let a = Direction::ones(2).unwrap();
        let sol = solve_bivariate_complete(&j, &a).unwrap();
        let e = if sol.elimination_is_clean() {
            Enumeration::Complete
        } else {
            Enumeration::Degenerate
        };
        (j, a, sol.points, e)
    }

    #[test]
    fn aperiodic_detection() {
        assert!(is_aperiodic_one_minus_nonneg(&p("1 - x - y - x*y", 2)));
        assert!(is_aperiodic_one_minus_nonneg(&p("1 - x - y - z", 3)));
        assert!(is_aperiodic_one_minus_nonneg(&p("1 - (1/2)*(1+x)*(1+y)*(1+z)", 3)));
        // negative coefficient in P
        assert!(!is_aperiodic_one_minus_nonneg(&p("1 - x - y + x*y - x^2*y^2", 2)));
        // periodic support: x^2, y^2 span only 2Z^2
        assert!(!is_aperiodic_one_minus_nonneg(&p("1 - x^2 - y^2", 2)));
        // support spans a sublattice of index 2
        assert!(!is_aperiodic_one_minus_nonneg(&p("1 - x*y - x^2", 2)));
        assert!(!is_aperiodic_one_minus_nonneg(&p("x - y", 2)));
        assert!(!is_aperiodic_one_minus_nonneg(&p("1", 2)));
    }

    #[test]
    fn delannoy_certain_by_aperiodicity() {
        let (j, a, pts, e) = bivariate("1 - x - y - x*y");
        let r = classify_contributing(&j, &a, &pts, e, &Tolerances::default()).unwrap();
        let c = 2f64.sqrt() - 1.0;
        assert!((r.positive_point.real_coords()[0] - c).abs() < 1e-12);
        assert!(r.aperiodic_case && r.contrib_certain);
        assert!(r.companions_on_torus.is_empty());
    }

    #[test]
    fn zigzag_certain_by_enumeration() {
        let (j, a, pts, e) = bivariate("1 - x - y + x*y - x^2*y^2");
        let r = classify_contributing(&j, &a, &pts, e, &Tolerances::default()).unwrap();
        assert!(!r.aperiodic_case);
        assert_eq!(r.enumeration, Enumeration::Complete);
        assert!(r.companions_on_torus.is_empty() && r.contrib_certain);
    }

    #[test]
    fn block_alignments_not_certain() {
        let (j, a, pts, e) = bivariate("1 - x*y - (x + y)*(1 - x*y + x^2*y^2)");
        let r = classify_contributing(&j, &a, &pts, e, &Tolerances::default()).unwrap();
        assert_eq!(r.enumeration, Enumeration::Degenerate);
        assert!(!r.aperiodic_case && !r.contrib_certain);
        assert!((r.positive_point.real_coords()[0] - 0.4704).abs() < 1e-4);
    }

    #[test]
    fn torus_companions_found() {
        // the four real critical points of a periodic J, entered by hand
        let j = p("1 - x^2 - y^2", 2);
        let a = Direction::ones(2).unwrap();
        let sys = build_critical_system(&j, &a).unwrap();
        let c = 0.5f64.sqrt();
        let tol = Tolerances::default();
        let pts: Vec<CriticalPoint> = [[c, c], [-c, -c], [c, -c], [-c, c]]
            .iter()
            .map(|z| sys.critical_point(ComplexPoint::real(z), &tol))
            .collect();
        let r = classify_contributing(&j, &a, &pts, Enumeration::Complete, &tol).unwrap();
        assert_eq!(r.companions_on_torus.len(), 3);
        assert!(!r.contrib_certain);

        let off = sys.critical_point(
            ComplexPoint::new(vec![Complex64::new(0.0, 2.0), Complex64::new(0.0, 2.0)]),
            &tol,
        );
        let r = classify_contributing(&j, &a, &[pts[0].clone(), off], Enumeration::Complete, &tol).unwrap();
        assert!(r.companions_on_torus.is_empty() && r.contrib_certain);
    }

    #[test]
    fn positive_point_errors() {
        let j = p("1 - x - y", 2);
        let a = Direction::ones(2).unwrap();
        let tol = Tolerances::default();
        let sys = build_critical_system(&j, &a).unwrap();
        let neg = sys.critical_point(ComplexPoint::real(&[-0.5, -0.5]), &tol);
        assert_eq!(
            classify_contributing(&j, &a, &[neg], Enumeration::Partial, &tol),
            Err(SolveError::NoPositivePoint)
        );
        let p1 = sys.critical_point(ComplexPoint::real(&[0.5, 0.5]), &tol);
        let p2 = sys.critical_point(ComplexPoint::real(&[0.25, 0.25]), &tol);
        assert!(matches!(
            classify_contributing(&j, &a, &[p1, p2], Enumeration::Partial, &tol),
            Err(SolveError::MultiplePositivePoints(v)) if v.len() == 2
        ));
    }
}
