//! Critical points of `F = I/J` for a direction `a`: solutions of
//!
//! ```text
//! J(x) = 0,    a_d x_i J_i(x) = a_i x_d J_d(x)    (i < d)
//! ```
//!
//! Three solvers are provided: a univariate shortcut for symmetric `J` on the
//! main diagonal, multi-start damped Newton restricted to the positive
//! orthant, and a complete enumeration for `d = 2` by resultant elimination.
//! [`classify_contributing`] then decides which points contribute.

mod bivariate;
mod classify;
mod newton;
mod symmetric;

pub use bivariate::{
    solve_bivariate_complete, solve_bivariate_complete_with, sylvester_resultant, BivariateSolution,
};
pub use classify::{classify_contributing, is_aperiodic_one_minus_nonneg, ContribResult, Enumeration};
pub use newton::{seed_grid, solve_positive_newton, solve_positive_newton_with};
pub use symmetric::solve_symmetric_positive;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::hypothesis::Hypothesis;
use crate::linalg::LinalgError;
use crate::poly::{ComplexPoint, NumericPoly, PolyError, Polynomial};

/// Positive integer weights `(a_1, ..., a_d)` of a diagonal ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Direction(Vec<u64>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DirectionError {
    #[error("direction entries must be positive, got {0:?}")]
    NonPositive(Vec<i64>),
    #[error("direction must have at least 2 entries, got {0}")]
    TooShort(usize),
}

impl Direction {
    pub fn new(a: Vec<u64>) -> Result<Self, DirectionError> {
        if a.len() < 2 {
            return Err(DirectionError::TooShort(a.len()));
        }
        if a.contains(&0) {
            return Err(DirectionError::NonPositive(
                a.iter().map(|&v| v as i64).collect(),
            ));
        }
        Ok(Direction(a))
    }

    /// Main diagonal `(1, ..., 1)`.
    pub fn ones(d: usize) -> Result<Self, DirectionError> {
        Direction::new(vec![1; d])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("d >= 2")
    }

    pub fn is_uniform(&self) -> bool {
        self.0.iter().all(|&v| v == self.0[0])
    }

    pub fn scaled(&self, k: u64) -> Direction {
        Direction(self.0.iter().map(|v| v * k).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Direction {
        let mut out = vec![0; self.0.len()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.0[i];
        }
        Direction(out)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Tolerances used across the solvers and the classifier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Residual at which Newton declares convergence.
    pub solver: f64,
    /// Residual accepted for points of a complete enumeration.
    pub residual: f64,
    /// Relative modulus tolerance for torus membership.
    pub torus: f64,
    /// `|J_d(c)| > simple_zero * scale(J)` declares a simple zero.
    pub simple_zero: f64,
    /// Imaginary parts below this (relative) count as real.
    pub positivity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            solver: 1e-10,
            residual: 1e-9,
            torus: 1e-8,
            simple_zero: 1e-8,
            positivity: 1e-9,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("critical system needs d >= 2 variables, got {0}")]
    DimensionTooSmall(usize),
    #[error("direction has {got} entries for {expected} variables")]
    DirectionDimension { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("symmetric shortcut requires symmetric J and a uniform direction")]
    NotSymmetric,
    #[error("no positive root of the diagonal restriction J(x,...,x)")]
    NoPositiveRoot,
    #[error("multiple positive roots {0:?}: {h} violated, inspect manually", h = Hypothesis::PositivePointUniqueness)]
    MultiplePositiveRoots(Vec<f64>),
    #[error("Newton did not converge from any of {seeds} seeds (best residual {best_residual:e})")]
    NoConvergence { seeds: usize, best_residual: f64 },
    #[error("Newton converged to {} distinct positive points: {h} violated", .0.len(), h = Hypothesis::PositivePointUniqueness)]
    DistinctPositivePoints(Vec<CriticalPoint>),
    #[error("complete enumeration needs d = 2, got {0}")]
    NotBivariate(usize),
    #[error("second critical equation vanishes identically: critical set is not finite")]
    DegenerateSecondEquation,
    #[error("resultant identically zero: non-finite critical set")]
    NonFiniteCritSet,
    #[error("no positive critical point supplied")]
    NoPositivePoint,
    #[error("{} positive critical points: {h} violated", .0.len(), h = Hypothesis::PositivePointUniqueness)]
    MultiplePositivePoints(Vec<CriticalPoint>),
}

impl SolveError {
    /// The method hypothesis this failure bears on, if any.
    pub fn hypothesis(&self) -> Option<Hypothesis> {
        match self {
            SolveError::MultiplePositiveRoots(_)
            | SolveError::DistinctPositivePoints(_)
            | SolveError::MultiplePositivePoints(_)
            | SolveError::NoPositiveRoot
            | SolveError::NoPositivePoint
            | SolveError::NoConvergence { .. } => Some(Hypothesis::PositivePointUniqueness),
            SolveError::DegenerateSecondEquation | SolveError::NonFiniteCritSet => {
                Some(Hypothesis::FiniteCriticalSet)
            }
            _ => None,
        }
    }
}

/// The `d` polynomial equations defining critical points for a direction.
#[derive(Clone, Debug)]
pub struct CriticalSystem {
    denominator: Polynomial,
    direction: Direction,
    equations: Vec<Polynomial>,
    numeric: Vec<NumericPoly>,
    jacobian: Vec<Vec<NumericPoly>>,
    gradient: Vec<NumericPoly>,
    scale: f64,
}

/// Builds `[J, a_d x_1 J_1 - a_1 x_d J_d, ..., a_d x_{d-1} J_{d-1} - a_{d-1} x_d J_d]`.
pub fn build_critical_system(
    denominator: &Polynomial,
    direction: &Direction,
) -> Result<CriticalSystem, SolveError> {
    let d = denominator.dim();
    if d < 2 {
        return Err(SolveError::DimensionTooSmall(d));
    }
    if direction.dim() != d {
        return Err(SolveError::DirectionDimension {
            expected: d,
            got: direction.dim(),
        });
    }
    let vars = denominator.vars();
    let partials: Vec<Polynomial> = (0..d)
        .map(|i| denominator.differentiate(i))
        .collect::<Result<_, _>>()?;
    let a = direction.as_slice();
    let ad = BigRational::from_integer(BigInt::from(a[d - 1]));
    let xd_jd = &Polynomial::var(vars, d - 1)? * &partials[d - 1];
    let mut equations = vec![denominator.clone()];
    for i in 0..d - 1 {
        let ai = BigRational::from_integer(BigInt::from(a[i]));
        let lhs = (&Polynomial::var(vars, i)? * &partials[i]).scalar_mul(&ad);
        equations.push(&lhs - &xd_jd.scalar_mul(&ai));
    }
    let numeric = equations.iter().map(Polynomial::to_numeric).collect();
    let jacobian = equations
        .iter()
        .map(|eq| {
            (0..d)
                .map(|i| eq.differentiate(i).map(|p| p.to_numeric()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CriticalSystem {
        denominator: denominator.clone(),
        direction: direction.clone(),
        scale: denominator.scale(),
        gradient: partials.iter().map(Polynomial::to_numeric).collect(),
        equations,
        numeric,
        jacobian,
    })
}

impl CriticalSystem {
    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.equations.len()
    }

    pub fn values(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.numeric.iter().map(|p| p.eval(z)).collect()
    }

    /// Jacobian of the equations with respect to the coordinates.
    pub fn jacobian_at(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|p| p.eval(z)).collect())
            .collect()
    }

    /// Max over equations of `|value|`.
    pub fn residual(&self, z: &ComplexPoint) -> Result<f64, PolyError> {
        if z.dim() != self.dim() {
            return Err(PolyError::DimensionMismatch {
                expected: self.dim(),
                got: z.dim(),
            });
        }
        Ok(self
            .values(z.coords())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max))
    }

    pub fn residual_check(&self, z: &ComplexPoint, tol: f64) -> Result<bool, PolyError> {
        Ok(self.residual(z)? <= tol)
    }

    /// Partials `J_i` at `z`.
    pub fn gradient_at(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.gradient.iter().map(|p| p.eval(z)).collect()
    }

    /// Wraps a solution with its residual and classification flags.
    pub fn critical_point(&self, z: ComplexPoint, tol: &Tolerances) -> CriticalPoint {
        let is_positive_real = z.is_positive_real(tol.positivity);
        let z = if is_positive_real {
            // drop the rounding noise left in the imaginary parts
            ComplexPoint::real(&z.coords().iter().map(|c| c.re).collect::<Vec<_>>())
        } else {
            z
        };
        let residual = self
            .values(z.coords())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let grad = self.gradient_at(z.coords());
        let threshold = tol.simple_zero * self.scale.max(f64::MIN_POSITIVE);
        CriticalPoint {
            residual,
            is_positive_real,
            is_smooth: grad.iter().any(|g| g.norm() > threshold),
            is_simple_in_last: grad.last().is_some_and(|g| g.norm() > threshold),
            torus_moduli: z.moduli(),
            point: z,
        }
    }

    /// Newton refinement in ordinary coordinates; stops when the residual
    /// no longer decreases.
    pub(crate) fn polish(&self, z: &[Complex64], max_steps: usize) -> Vec<Complex64> {
        let norm = |v: &[Complex64]| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut cur = z.to_vec();
        let mut res = norm(&self.values(&cur));
        for _ in 0..max_steps {
            if res == 0.0 {
                break;
            }
            let f = self.values(&cur);
            let jac = self.jacobian_at(&cur);
            let Ok(step) = crate::linalg::solve(&jac, &f) else {
                break;
            };
            let next: Vec<Complex64> = cur.iter().zip(&step).map(|(x, s)| x - s).collect();
            let next_res = norm(&self.values(&next));
            if !(next_res < res) {
                break;
            }
            cur = next;
            res = next_res;
        }
        cur
    }
}

/// A solution of the critical system with its diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub point: ComplexPoint,
    pub residual: f64,
    pub is_positive_real: bool,
    pub is_smooth: bool,
    pub is_simple_in_last: bool,
    pub torus_moduli: Vec<f64>,
}

impl CriticalPoint {
    pub fn coords(&self) -> &[Complex64] {
        self.point.coords()
    }

    /// Real parts, for points known to be real.
    pub fn real_coords(&self) -> Vec<f64> {
        self.point.coords().iter().map(|z| z.re).collect()
    }
}

/// Deterministic total order on points (real parts, then imaginary parts).
pub(crate) fn point_order(a: &ComplexPoint, b: &ComplexPoint) -> std::cmp::Ordering {
    for (x, y) in a.coords().iter().zip(b.coords()) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}
