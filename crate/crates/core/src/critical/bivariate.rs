//! Complete enumeration of the critical set for `d = 2`.
//!
//! The second variable is eliminated with the Sylvester resultant, computed
//! exactly by evaluating the Sylvester determinant at integer points and
//! interpolating. The distinct roots of the resultant come from companion
//! matrix eigenvalues; each is back-substituted and Newton-polished on the
//! original system.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::polynomial_roots;
use crate::poly::{ComplexPoint, Polynomial, UnivariatePolynomial};

use super::{build_critical_system, point_order, CriticalPoint, CriticalSystem, Direction, SolveError, Tolerances};

/// All isolated critical points for `d = 2`, with the elimination data.
#[derive(Clone, Debug)]
pub struct BivariateSolution {
    pub points: Vec<CriticalPoint>,
    /// Resultant of the two equations with respect to the second variable.
    pub resultant: UnivariatePolynomial,
    /// Roots of the resultant that carry no finite critical point (leading
    /// coefficients vanishing together, i.e. solutions escaping to infinity).
    pub unmatched_roots: Vec<Complex64>,
}

impl BivariateSolution {
    /// Every root of the resultant is accounted for by a finite point.
    pub fn elimination_is_clean(&self) -> bool {
        self.unmatched_roots.is_empty()
    }
}

/// Treats a polynomial in which only variable `var` occurs as univariate.
fn as_univariate(p: &Polynomial, var: usize) -> UnivariatePolynomial {
    let deg = p.degree_in(var) as usize;
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (e, c) in p.terms() {
        coeffs[e.as_slice()[var] as usize] += c;
    }
    UnivariatePolynomial::new(coeffs)
}

fn exact_determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

fn sylvester_at(a: &[UnivariatePolynomial], b: &[UnivariatePolynomial], x: &BigRational) -> BigRational {
    let m = a.len() - 1;
    let k = b.len() - 1;
    let n = m + k;
    if n == 0 {
        return BigRational::one();
    }
    let av: Vec<BigRational> = a.iter().map(|c| c.eval_exact(x)).collect();
    let bv: Vec<BigRational> = b.iter().map(|c| c.eval_exact(x)).collect();
    let mut mat = vec![vec![BigRational::zero(); n]; n];
    for r in 0..k {
        for (j, c) in av.iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in bv.iter().rev().enumerate() {
            mat[k + r][r + j] = c.clone();
        }
    }
    exact_determinant(mat)
}

/// Interpolates exactly through `(x_i, y_i)` (distinct `x_i`).
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> UnivariatePolynomial {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Horner on the Newton form
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for j in 0..n {
            if coeffs[j].is_zero() {
                continue;
            }
            if j + 1 < n {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    UnivariatePolynomial::new(coeffs)
}

/// Sylvester resultant of two bivariate polynomials with respect to
/// variable `elim`, as a polynomial in the remaining variable.
pub fn sylvester_resultant(a: &Polynomial, b: &Polynomial, elim: usize) -> UnivariatePolynomial {
    assert_eq!(a.dim(), 2, "resultant is implemented for two variables");
    let keep = 1 - elim;
    let ac: Vec<UnivariatePolynomial> = a.coefficients_in(elim).iter().map(|c| as_univariate(c, keep)).collect();
    let bc: Vec<UnivariatePolynomial> = b.coefficients_in(elim).iter().map(|c| as_univariate(c, keep)).collect();
    let (m, k) = (ac.len() - 1, bc.len() - 1);
    let max_deg = |cs: &[UnivariatePolynomial]| cs.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let bound = m * max_deg(&bc) + k * max_deg(&ac);
    let xs: Vec<BigRational> = (0..=bound as i64).map(|i| BigRational::from_integer(BigInt::from(i))).collect();
    let ys: Vec<BigRational> = xs.iter().map(|x| sylvester_at(&ac, &bc, x)).collect();
    interpolate(&xs, &ys)
}

fn trimmed_roots(coeffs: Vec<Complex64>) -> Result<Vec<Complex64>, SolveError> {
    Ok(polynomial_roots(&coeffs)?)
}

/// Candidate second coordinates for a first coordinate `x0`: roots in `y`
/// of either equation.
fn candidates(sys: &CriticalSystem, x0: Complex64) -> Result<Vec<Complex64>, SolveError> {
    let mut out = Vec::new();
    for eq in sys.equations() {
        let coeffs: Vec<Complex64> = eq
            .coefficients_in(1)
            .iter()
            .map(|c| c.to_numeric().eval(&[x0, Complex64::new(0.0, 0.0)]))
            .collect();
        let top = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if top <= 1e-12 * eq.scale().max(1.0) {
            continue;
        }
        out.extend(trimmed_roots(coeffs)?);
    }
    Ok(out)
}

pub fn solve_bivariate_complete(
    denominator: &Polynomial,
    direction: &Direction,
) -> Result<BivariateSolution, SolveError> {
    solve_bivariate_complete_with(denominator, direction, &Tolerances::default())
}

pub fn solve_bivariate_complete_with(
    denominator: &Polynomial,
    direction: &Direction,
    tol: &Tolerances,
) -> Result<BivariateSolution, SolveError> {
    if denominator.dim() != 2 {
        return Err(SolveError::NotBivariate(denominator.dim()));
    }
    let sys = build_critical_system(denominator, direction)?;
    let (ea, eb) = (&sys.equations()[0], &sys.equations()[1]);
    if eb.is_zero() {
        return Err(SolveError::DegenerateSecondEquation);
    }
    let res = sylvester_resultant(ea, eb, 1);
    if res.is_zero() {
        return Err(SolveError::NonFiniteCritSet);
    }
    let (zero_order, rest) = res.strip_zero_root();
    let mut roots: Vec<Complex64> = if rest.degree().unwrap_or(0) > 0 {
        let sf = rest.square_free_part();
        let coeffs: Vec<Complex64> = sf.to_f64_coeffs().into_iter().map(|c| Complex64::new(c, 0.0)).collect();
        trimmed_roots(coeffs)?
    } else {
        Vec::new()
    };
    if zero_order > 0 {
        roots.push(Complex64::new(0.0, 0.0));
    }

    let mut found: Vec<ComplexPoint> = Vec::new();
    let mut unmatched = Vec::new();
    for &x0 in &roots {
        let mut matched = false;
        for y0 in candidates(&sys, x0)? {
            let z = sys.polish(&[x0, y0], 30);
            // polishing must refine this root, not wander to another one
            if (z[0] - x0).norm() > 1e-6 * x0.norm().max(1.0) {
                continue;
            }
            let pt = ComplexPoint::new(z);
            if sys.residual(&pt)? > tol.residual {
                continue;
            }
            matched = true;
            if !found.iter().any(|f| f.distance(&pt) <= 1e-8) {
                found.push(pt);
            }
        }
        if !matched {
            unmatched.push(x0);
        }
    }
    found.sort_by(point_order);
    Ok(BivariateSolution {
        points: found.into_iter().map(|p| sys.critical_point(p, tol)).collect(),
        resultant: res,
        unmatched_roots: unmatched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &xy()).unwrap()
    }

    fn has(points: &[CriticalPoint], x: Complex64, y: Complex64) -> bool {
        points
            .iter()
            .any(|c| (c.coords()[0] - x).norm() < 1e-10 && (c.coords()[1] - y).norm() < 1e-10)
    }

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn resultants_match_frozen_values() {
        // frozen from an independent computer-algebra run
        let res = sylvester_resultant(&p("1 - x - y - x*y"), &p("y - x"), 1);
        assert_eq!(res.monic(), UnivariatePolynomial::from_integers(&[-1, 2, 1]));
        let t = "1 - x*y - (x + y)*(1 - x*y + x^2*y^2)";
        let j = p(t);
        let sys = build_critical_system(&j, &Direction::ones(2).unwrap()).unwrap();
        let res = sylvester_resultant(&sys.equations()[0], &sys.equations()[1], 1);
        let expect = UnivariatePolynomial::from_integers(&[0, 0, 0, 0, 0, 0, -1, 2, 1, -2, 0, 2]);
        assert_eq!(res.monic(), expect.monic());
    }

    #[test]
    fn zigzag_has_four_points() {
        let sol = solve_bivariate_complete(&p("1 - x - y + x*y - x^2*y^2"), &Direction::ones(2).unwrap()).unwrap();
        assert_eq!(sol.points.len(), 4);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let s3 = 3f64.sqrt() / 2.0;
        assert!(has(&sol.points, r(1.0 / phi), r(1.0 / phi)));
        assert!(has(&sol.points, r(-phi), r(-phi)));
        assert!(has(&sol.points, Complex64::new(0.5, s3), Complex64::new(0.5, s3)));
        assert!(has(&sol.points, Complex64::new(0.5, -s3), Complex64::new(0.5, -s3)));
        assert!(sol.elimination_is_clean());
        assert!(sol.points.iter().all(|c| c.residual <= 1e-9));
    }

    #[test]
    fn delannoy_points() {
        for &(a, b) in &[(1u64, 1u64), (2, 1), (3, 2)] {
            let sol = solve_bivariate_complete(&p("1 - x - y - x*y"), &Direction::new(vec![a, b]).unwrap()).unwrap();
            assert_eq!(sol.points.len(), 2, "{a},{b}");
            let (af, bf) = (a as f64, b as f64);
            let l = (af * af + bf * bf).sqrt();
            for s in [1.0, -1.0] {
                assert!(has(&sol.points, r((-bf + s * l) / af), r((-af + s * l) / bf)));
            }
        }
    }

    #[test]
    fn block_alignments_eliminate_with_points_at_infinity() {
        let j = p("1 - x*y - (x + y)*(1 - x*y + x^2*y^2)");
        let sol = solve_bivariate_complete(&j, &Direction::ones(2).unwrap()).unwrap();
        assert_eq!(sol.points.len(), 5);
        assert!(!sol.elimination_is_clean());
        assert_eq!(sol.unmatched_roots, vec![r(0.0)]);
        assert!(sol.points.iter().all(|c| (c.coords()[0] - c.coords()[1]).norm() < 1e-10));
    }

    #[test]
    fn degenerate_inputs() {
        // x J_x = y J_y identically for J = 1 - x*y
        assert!(matches!(
            solve_bivariate_complete(&p("1 - x*y"), &Direction::ones(2).unwrap()),
            Err(SolveError::DegenerateSecondEquation)
        ));
        let j = parse_polynomial("1 - x - y - z", &["x".into(), "y".into(), "z".into()]).unwrap();
        assert!(matches!(
            solve_bivariate_complete(&j, &Direction::ones(3).unwrap()),
            Err(SolveError::NotBivariate(3))
        ));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let poly = UnivariatePolynomial::from_integers(&[3, 0, -2, 5]);
        let xs: Vec<BigRational> = (0..6).map(|i| BigRational::from_integer(i.into())).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| poly.eval_exact(x)).collect();
        assert_eq!(interpolate(&xs, &ys), poly);
    }
}
