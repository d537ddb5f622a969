//! Damped Newton on the critical system in log coordinates `u_i = ln x_i`,
//! which keeps every iterate in the positive orthant.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::poly::{ComplexPoint, Polynomial};

use super::{build_critical_system, point_order, CriticalPoint, CriticalSystem, Direction, SolveError, Tolerances};

const GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const MAX_ITER: usize = 200;
const MAX_HALVINGS: usize = 40;

/// Deterministic seeds: the full grid `{0.1, 0.3, 0.5, 0.7, 0.9}^d` for
/// `d <= 3`, the diagonal points `(t, ..., t)` of that grid otherwise.
pub fn seed_grid(d: usize) -> Vec<Vec<f64>> {
    if d > 3 {
        return GRID.iter().map(|&t| vec![t; d]).collect();
    }
    let mut seeds = vec![Vec::new()];
    for _ in 0..d {
        seeds = seeds
            .into_iter()
            .flat_map(|s| {
                GRID.iter().map(move |&t| {
                    let mut n = s.clone();
                    n.push(t);
                    n
                })
            })
            .collect();
    }
    seeds
}

pub fn solve_positive_newton(
    denominator: &Polynomial,
    direction: &Direction,
    extra_seeds: &[Vec<f64>],
) -> Result<CriticalPoint, SolveError> {
    let sys = build_critical_system(denominator, direction)?;
    solve_positive_newton_with(&sys, extra_seeds, &Tolerances::default())
}

struct Outcome {
    point: Option<Vec<f64>>,
    residual: f64,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn run_seed(sys: &CriticalSystem, seed: &[f64], tol: f64) -> Outcome {
    let to_x = |u: &[f64]| -> Vec<Complex64> { u.iter().map(|&v| Complex64::new(v.exp(), 0.0)).collect() };
    let mut u: Vec<f64> = seed.iter().map(|x| x.ln()).collect();
    let mut f = sys.values(&to_x(&u));
    let mut res = max_norm(&f);
    for _ in 0..MAX_ITER {
        if res <= tol {
            break;
        }
        let x = to_x(&u);
        // d/du_i = x_i d/dx_i
        let jac: Vec<Vec<Complex64>> = sys
            .jacobian_at(&x)
            .into_iter()
            .map(|row| row.into_iter().zip(&x).map(|(g, xi)| g * xi).collect())
            .collect();
        let Ok(step) = crate::linalg::solve(&jac, &f) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(ui, s)| ui - t * s.re).collect();
            if trial.iter().all(|v| v.is_finite() && v.abs() < 700.0) {
                let tf = sys.values(&to_x(&trial));
                let tr = max_norm(&tf);
                if tr < res {
                    u = trial;
                    f = tf;
                    res = tr;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if res > tol {
        return Outcome { point: None, residual: res };
    }
    let x = to_x(&u);
    let polished = sys.polish(&x, 4);
    let pres = max_norm(&sys.values(&polished));
    let (x, res) = if pres <= res && polished.iter().all(|z| z.re > 0.0) {
        (polished, pres)
    } else {
        (x, res)
    };
    Outcome {
        point: Some(x.iter().map(|z| z.re).collect()),
        residual: res,
    }
}

/// Multi-start damped Newton. Converged points (residual `<= tol.solver`)
/// are clustered; more than one cluster is a uniqueness violation and is
/// reported with all representatives.
pub fn solve_positive_newton_with(
    sys: &CriticalSystem,
    extra_seeds: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<CriticalPoint, SolveError> {
    let d = sys.dim();
    let mut seeds = seed_grid(d);
    seeds.extend(
        extra_seeds
            .iter()
            .filter(|s| s.len() == d && s.iter().all(|&v| v > 0.0 && v.is_finite()))
            .cloned(),
    );
    let outcomes: Vec<Outcome> = seeds
        .par_iter()
        .map(|s| run_seed(sys, s, tol.solver))
        .collect();

    let best_residual = outcomes
        .iter()
        .map(|o| o.residual)
        .fold(f64::INFINITY, f64::min);
    let mut converged: Vec<ComplexPoint> = outcomes
        .into_iter()
        .filter_map(|o| o.point)
        .map(|p| ComplexPoint::real(&p))
        .collect();
    if converged.is_empty() {
        return Err(SolveError::NoConvergence {
            seeds: seeds.len(),
            best_residual,
        });
    }
    converged.sort_by(point_order);
    let mut clusters: Vec<ComplexPoint> = Vec::new();
    for p in converged {
        if !clusters.iter().any(|c| c.distance(&p) <= 1e-8) {
            clusters.push(p);
        }
    }
    let mut points: Vec<CriticalPoint> = clusters
        .into_iter()
        .map(|p| sys.critical_point(p, tol))
        .collect();
    if points.len() > 1 {
        return Err(SolveError::DistinctPositivePoints(points));
    }
    Ok(points.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn vars(d: usize) -> Vec<String> {
        ["x", "y", "z", "w"][..d].iter().map(|s| s.to_string()).collect()
    }

    fn solve(text: &str, a: &[u64]) -> Result<CriticalPoint, SolveError> {
        let j = parse_polynomial(text, &vars(a.len())).unwrap();
        solve_positive_newton(&j, &Direction::new(a.to_vec()).unwrap(), &[])
    }

    #[test]
    fn delannoy_closed_forms() {
        for &(a, b) in &[(1u64, 1u64), (3, 2), (2, 1)] {
            let c = solve("1 - x - y - x*y", &[a, b]).unwrap();
            let (af, bf) = (a as f64, b as f64);
            let l = (af * af + bf * bf).sqrt();
            let x = c.real_coords();
            assert!((x[0] - (l - bf) / af).abs() < 1e-10, "{a},{b}: {x:?}");
            assert!((x[1] - (l - af) / bf).abs() < 1e-10);
            assert!(c.residual <= 1e-10);
        }
    }

    #[test]
    fn ternary_direction() {
        let c = solve("1 - x - y - z", &[1, 2, 3]).unwrap();
        let x = c.real_coords();
        for (got, expect) in x.iter().zip([1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]) {
            assert!((got - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn four_variables_use_diagonal_seeds() {
        assert_eq!(seed_grid(4).len(), 5);
        assert_eq!(seed_grid(3).len(), 125);
        let c = solve("1 - (1/2)*(1+x)*(1+y)*(1+z)*(1+w)", &[1, 1, 1, 1]).unwrap();
        let expect = 2f64.powf(0.25) - 1.0;
        for x in c.real_coords() {
            assert!((x - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn distinct_positive_points_reported() {
        // (1 - 2x)(1 - 4y) = 0 meets the diagonal system twice in the orthant
        let err = solve("(1 - 3*x - 3*y + 8*x*y)", &[1, 1]).unwrap_err();
        match err {
            SolveError::DistinctPositivePoints(ps) => assert!(ps.len() >= 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn no_convergence() {
        // J > 0 on the orthant
        let err = solve("1 + x + y", &[1, 1]).unwrap_err();
        assert!(matches!(err, SolveError::NoConvergence { seeds: 25, .. }));
    }
}
