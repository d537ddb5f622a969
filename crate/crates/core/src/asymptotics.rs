//! Smooth-point leading asymptotics
//!
//! ```text
//! f_{a n} ~ prod_i c_i^{-a_i n} * b0 * (a_d n)^{(1-d)/2}
//! b0 = I(c) / (-c_d J_d(c) * sqrt((2 pi)^{d-1} h(J, c)))
//! ```
//!
//! where `h(J, c)` is the determinant of the explicit `(d-1) x (d-1)` matrix
//! built from first and second partials of `J` at `c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::critical::{ContribResult, CriticalPoint, Direction};
use crate::hypothesis::Hypothesis;
use crate::linalg::{determinant, Matrix};
use crate::poly::{PolyError, Polynomial};

/// `|c_d J_d(c)|` and `|h|` below these (relative to the scale of `J`)
/// count as zero.
const VANISHING: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("J_d vanishes at c: {h} fails", h = Hypothesis::NonzeroLastPartial)]
    LastPartialVanishes,
    #[error("c_d = 0: {h} fails", h = Hypothesis::NonzeroLastPartial)]
    ZeroLastCoordinate,
    #[error("h = 0, leading coefficient formula inapplicable: {h} fails", h = Hypothesis::NonzeroHessian)]
    ZeroHessian,
    #[error("symmetric shortcut needs symmetric J and a point on the main diagonal")]
    NotSymmetric,
    #[error("contributing set not certified: {h} unverified", h = Hypothesis::ContributingSetCertified)]
    UncertainContributingSet,
    #[error("contributing point is not smooth: {h} fails", h = Hypothesis::SmoothPoint)]
    NotSmooth,
    #[error("c_d is not a simple zero of the last coordinate: {h} fails", h = Hypothesis::SimpleZeroInLast)]
    NotSimpleZero,
    #[error("point has {got} coordinates for {expected} variables")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl AsymptoticsError {
    pub fn hypothesis(&self) -> Option<Hypothesis> {
        match self {
            AsymptoticsError::LastPartialVanishes | AsymptoticsError::ZeroLastCoordinate => {
                Some(Hypothesis::NonzeroLastPartial)
            }
            AsymptoticsError::ZeroHessian => Some(Hypothesis::NonzeroHessian),
            AsymptoticsError::UncertainContributingSet => Some(Hypothesis::ContributingSetCertified),
            AsymptoticsError::NotSmooth => Some(Hypothesis::SmoothPoint),
            AsymptoticsError::NotSimpleZero => Some(Hypothesis::SimpleZeroInLast),
            _ => None,
        }
    }
}

/// First and second partials of `J` at a point.
struct Partials {
    first: Vec<Complex64>,
    second: Vec<Vec<Complex64>>,
}

fn partials_at(j: &Polynomial, c: &[Complex64]) -> Result<Partials, AsymptoticsError> {
    let d = j.dim();
    if c.len() != d {
        return Err(AsymptoticsError::Dimension {
            expected: d,
            got: c.len(),
        });
    }
    let mut first = Vec::with_capacity(d);
    let mut second = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for i in 0..d {
        let ji = j.differentiate(i)?;
        first.push(ji.to_numeric().eval(c));
        for k in i..d {
            let v = ji.differentiate(k)?.to_numeric().eval(c);
            second[i][k] = v;
            second[k][i] = v;
        }
    }
    Ok(Partials { first, second })
}

fn check_last(j: &Polynomial, c: &[Complex64], jd: Complex64) -> Result<(), AsymptoticsError> {
    let cd = c[c.len() - 1];
    if cd.norm() == 0.0 {
        return Err(AsymptoticsError::ZeroLastCoordinate);
    }
    if (cd * jd).norm() <= VANISHING * j.scale() {
        return Err(AsymptoticsError::LastPartialVanishes);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HessianData {
    pub matrix: Matrix,
    pub determinant: Complex64,
    pub symmetric_shortcut_used: bool,
}

/// The explicit Hessian matrix of the phase at `c` and its determinant.
pub fn hessian_matrix(j: &Polynomial, c: &CriticalPoint) -> Result<HessianData, AsymptoticsError> {
    let z = c.coords();
    let p = partials_at(j, z)?;
    let d = z.len();
    let ld = d - 1;
    let (cd, jd, jdd) = (z[ld], p.first[ld], p.second[ld][ld]);
    check_last(j, z, jd)?;
    let denom = cd * cd * jd * jd;
    let mut h = vec![vec![Complex64::new(0.0, 0.0); ld]; ld];
    for l in 0..ld {
        let jl = p.first[l];
        for m in l..ld {
            let jm = p.first[m];
            h[l][m] = if l == m {
                z[l] * jl / (cd * jd)
                    + z[l] * z[l] / denom
                        * (jl * jl + cd * (jd * p.second[l][l] - 2.0 * jl * p.second[l][ld] + jl * jl / jd * jdd))
            } else {
                z[l] * z[m] / denom
                    * (jm * jl
                        + cd * (jd * p.second[l][m] - jm * p.second[l][ld] - jl * p.second[ld][m]
                            + jl * jm / jd * jdd))
            };
            h[m][l] = h[l][m];
        }
    }
    let det = determinant(&h);
    Ok(HessianData {
        matrix: h,
        determinant: det,
        symmetric_shortcut_used: false,
    })
}

/// Closed form `d (1 + (c / J_d)(J_dd - J_d1))^{d-1}` for symmetric `J` at a
/// point `(c, ..., c)`.
pub fn hessian_det_symmetric(j: &Polynomial, c: &CriticalPoint) -> Result<Complex64, AsymptoticsError> {
    let z = c.coords();
    if !j.is_symmetric() || !on_diagonal(z) {
        return Err(AsymptoticsError::NotSymmetric);
    }
    let p = partials_at(j, z)?;
    let d = z.len();
    let jd = p.first[d - 1];
    check_last(j, z, jd)?;
    let base = 1.0 + z[0] / jd * (p.second[d - 1][d - 1] - p.second[d - 1][0]);
    Ok(d as f64 * base.powu(d as u32 - 1))
}

fn on_diagonal(z: &[Complex64]) -> bool {
    let scale = z[0].norm().max(f64::MIN_POSITIVE);
    z.iter().all(|w| (w - z[0]).norm() <= 1e-12 * scale)
}

/// `I(c) / (-c_d J_d(c) sqrt((2 pi)^{d-1} h))`, principal square root.
pub fn leading_coefficient_b0(
    i: &Polynomial,
    j: &Polynomial,
    c: &CriticalPoint,
    h: Complex64,
) -> Result<Complex64, AsymptoticsError> {
    let z = c.coords();
    let d = z.len();
    if i.dim() != d {
        return Err(AsymptoticsError::Dimension {
            expected: i.dim(),
            got: d,
        });
    }
    let jd = j.differentiate(d - 1)?.to_numeric().eval(z);
    check_last(j, z, jd)?;
    if h.norm() <= VANISHING {
        return Err(AsymptoticsError::ZeroHessian);
    }
    let num = i.to_numeric().eval(z);
    let root = ((2.0 * PI).powi(d as i32 - 1) * h).sqrt();
    Ok(num / (-z[d - 1] * jd * root))
}

/// Whether the pipeline may proceed without a certified contributing set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CertaintyPolicy {
    #[default]
    RequireCertified,
    /// Compute the single-point term anyway; the caller reports the gap.
    AllowUncertain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticResult {
    pub direction: Direction,
    pub point: CriticalPoint,
    pub hessian: HessianData,
    pub b0: Complex64,
    /// `(1 - d) / 2`.
    pub exponent: Rational64,
    /// `prod_i c_i^{-a_i}`.
    pub growth_per_step: f64,
    /// `a_d`, since the power of `n` is taken in `n_d = a_d n`.
    pub last_coordinate_weight: u64,
    ln_growth: f64,
}

/// The leading term at `n` as `sign * exp(ln_abs)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LnTerm {
    pub ln_abs: f64,
    pub sign: f64,
}

impl AsymptoticResult {
    /// Real part of the leading term in log form; never overflows.
    pub fn ln_leading_term(&self, n: u64) -> LnTerm {
        let nd = (self.last_coordinate_weight * n) as f64;
        let e = *self.exponent.numer() as f64 / *self.exponent.denom() as f64;
        let b = self.b0.re;
        LnTerm {
            ln_abs: self.ln_growth * n as f64 + b.abs().ln() + e * nd.ln(),
            sign: if b == 0.0 { 0.0 } else { b.signum() },
        }
    }

    /// Natural log of the growth per step, `-sum_i a_i ln c_i`.
    pub fn ln_growth(&self) -> f64 {
        self.ln_growth
    }
}

/// `prod_i c_i^{-a_i n} * b0 * (a_d n)^{(1-d)/2}`, evaluated in logs.
/// Overflows to infinity only when the value itself exceeds `f64`.
pub fn evaluate_leading_term(res: &AsymptoticResult, n: u64) -> f64 {
    let t = res.ln_leading_term(n);
    t.sign * t.ln_abs.exp()
}

/// Assembles the leading term for the positive contributing point.
///
/// The symmetric closed form is used for `h` when `J` is symmetric and the
/// direction uniform; the general matrix is always returned alongside it.
pub fn assemble_asymptotics(
    numerator: &Polynomial,
    denominator: &Polynomial,
    direction: &Direction,
    contrib: &ContribResult,
    policy: CertaintyPolicy,
) -> Result<AsymptoticResult, AsymptoticsError> {
    if !contrib.contrib_certain && policy == CertaintyPolicy::RequireCertified {
        return Err(AsymptoticsError::UncertainContributingSet);
    }
    let c = &contrib.positive_point;
    if !c.is_smooth {
        return Err(AsymptoticsError::NotSmooth);
    }
    if !c.is_simple_in_last {
        return Err(AsymptoticsError::NotSimpleZero);
    }
    let d = denominator.dim();
    if direction.dim() != d {
        return Err(AsymptoticsError::Dimension {
            expected: d,
            got: direction.dim(),
        });
    }
    let mut hessian = hessian_matrix(denominator, c)?;
    if direction.is_uniform() && denominator.is_symmetric() && on_diagonal(c.coords()) {
        hessian.determinant = hessian_det_symmetric(denominator, c)?;
        hessian.symmetric_shortcut_used = true;
    }
    let b0 = leading_coefficient_b0(numerator, denominator, c, hessian.determinant)?;
    let ln_growth: f64 = -c
        .coords()
        .iter()
        .zip(direction.as_slice())
        .map(|(z, &a)| a as f64 * z.norm().ln())
        .sum::<f64>();
    Ok(AsymptoticResult {
        direction: direction.clone(),
        point: c.clone(),
        hessian,
        b0,
        exponent: Rational64::new(1 - d as i64, 2),
        growth_per_step: ln_growth.exp(),
        last_coordinate_weight: direction.last(),
        ln_growth,
    })
}
