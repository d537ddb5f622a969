use crate::poly::{ComplexPoint, Polynomial};

use super::{build_critical_system, CriticalPoint, Direction, SolveError, Tolerances};

/// For symmetric `J` and a uniform direction the positive critical point is
/// `(c, ..., c)` with `c` the unique positive root of `J(x, ..., x)`.
///
/// Roots are isolated exactly with Sturm sequences, so a repeated root or a
/// second positive root is reported rather than silently skipped.
pub fn solve_symmetric_positive(
    denominator: &Polynomial,
    direction: &Direction,
) -> Result<CriticalPoint, SolveError> {
    if !denominator.is_symmetric() || !direction.is_uniform() {
        return Err(SolveError::NotSymmetric);
    }
    let sys = build_critical_system(denominator, direction)?;
    let j = denominator.diagonal_restriction();
    let brackets = j.isolate_positive_roots();
    let roots: Vec<f64> = brackets
        .iter()
        .map(|(lo, hi)| j.refine_root(lo, hi))
        .collect();
    match roots.as_slice() {
        [] => Err(SolveError::NoPositiveRoot),
        [c] => Ok(sys.critical_point(
            ComplexPoint::real(&vec![*c; denominator.dim()]),
            &Tolerances::default(),
        )),
        _ => Err(SolveError::MultiplePositiveRoots(roots)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn vars(d: usize) -> Vec<String> {
        ["x", "y", "z", "w"][..d].iter().map(|s| s.to_string()).collect()
    }

    fn solve(text: &str, d: usize) -> Result<CriticalPoint, SolveError> {
        let j = parse_polynomial(text, &vars(d)).unwrap();
        solve_symmetric_positive(&j, &Direction::ones(d).unwrap())
    }

    #[test]
    fn zigzag() {
        let c = solve("1 - x - y + x*y - x^2*y^2", 2).unwrap();
        let expect = (5f64.sqrt() - 1.0) / 2.0;
        for x in c.real_coords() {
            assert!((x - expect).abs() < 1e-14);
        }
        assert!(c.residual < 1e-14);
    }

    #[test]
    fn alignments_three() {
        let c = solve("1 - (1/2)*(1+x)*(1+y)*(1+z)", 3).unwrap();
        let expect = 2f64.powf(1.0 / 3.0) - 1.0;
        assert!((c.real_coords()[0] - expect).abs() < 1e-14);
        assert!((expect - 0.2599210499).abs() < 1e-10);
    }

    #[test]
    fn ternary() {
        let c = solve("1 - x - y - z", 3).unwrap();
        assert!((c.real_coords()[2] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn failures() {
        assert_eq!(solve("1 + x + y", 2), Err(SolveError::NoPositiveRoot));
        // J(x,x) = (1 - 2x)(1 - 4x) has two positive roots; the
        // off-diagonal critical points are not the point here.
        match solve("1 - 3*x - 3*y + 8*x*y", 2) {
            Err(SolveError::MultiplePositiveRoots(r)) => {
                assert!((r[0] - 0.25).abs() < 1e-14 && (r[1] - 0.5).abs() < 1e-14)
            }
            other => panic!("{other:?}"),
        }
        let j = parse_polynomial("1 - x - 2*y", &vars(2)).unwrap();
        assert_eq!(
            solve_symmetric_positive(&j, &Direction::ones(2).unwrap()),
            Err(SolveError::NotSymmetric)
        );
        let j = parse_polynomial("1 - x - y", &vars(2)).unwrap();
        assert_eq!(
            solve_symmetric_positive(&j, &Direction::new(vec![1, 2]).unwrap()),
            Err(SolveError::NotSymmetric)
        );
    }
}
