//! Exact power-series coefficients of `F = I/J` from the recurrence implied
//! by `J * F = I`.
//!
//! Both numerator and denominator are first scaled to integer coefficients.
//! With `q = J(0)` after scaling, every cell stores the integer
//! `g_n = f_n * q^(|n|+1)`, which obeys
//!
//! ```text
//! g_n = I_n q^|n| - sum_{k != 0} J_k q^(|k|-1) g_{n-k}
//! ```
//!
//! so the fill uses integer arithmetic only. All cells of total degree `g`
//! depend only on lower degrees, which lets each anti-diagonal be filled in
//! parallel with output identical to the sequential order.

use std::io::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::asymptotics::AsymptoticResult;
use crate::critical::Direction;
use crate::poly::{PolyError, Polynomial};

/// Upper limit on the number of cells in a table.
pub const MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("series undefined at origin: J(0) = 0")]
    UndefinedAtOrigin,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("bounds have {got} entries, expected {expected}")]
    BoundsDimension { expected: usize, got: usize },
    #[error("table of {cells} cells exceeds the limit of {MAX_CELLS}")]
    TooLarge { cells: u128 },
    #[error("diagonal index {index:?} lies outside table bounds {bounds:?}")]
    OutOfBounds { index: Vec<u64>, bounds: Vec<usize> },
    #[error("direction {seq:?} of the sequence differs from {asym:?} of the asymptotic result")]
    DirectionMismatch { seq: Vec<u64>, asym: Vec<u64> },
    #[error("leading term vanishes at n = {0}")]
    LeadingTermZero(u64),
    #[error("recurrence residual nonzero at {index:?}: {residual}")]
    Residual { index: Vec<usize>, residual: BigRational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FillSchedule {
    Sequential,
    #[default]
    AntiDiagonal,
}

/// Exact coefficients `f_n` for `n` in the box `prod [0, bounds_i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    bounds: Vec<usize>,
    strides: Vec<usize>,
    scaled: Vec<BigInt>,
    lead: BigInt,
    lead_powers: Vec<BigInt>,
}

fn strides_for(bounds: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; bounds.len()];
    for i in (0..bounds.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (bounds[i + 1] + 1);
    }
    strides
}

fn integer_of(c: &BigRational) -> BigInt {
    debug_assert!(c.is_integer());
    c.to_integer()
}

pub fn compute_coefficient_table(
    numerator: &Polynomial,
    denominator: &Polynomial,
    bounds: &[usize],
) -> Result<CoefficientTable, OracleError> {
    compute_coefficient_table_with(numerator, denominator, bounds, FillSchedule::default())
}

pub fn compute_coefficient_table_with(
    numerator: &Polynomial,
    denominator: &Polynomial,
    bounds: &[usize],
    schedule: FillSchedule,
) -> Result<CoefficientTable, OracleError> {
    numerator.check_same_vars(denominator)?;
    let d = denominator.dim();
    if bounds.len() != d {
        return Err(OracleError::BoundsDimension {
            expected: d,
            got: bounds.len(),
        });
    }
    if denominator.constant_term().is_zero() {
        return Err(OracleError::UndefinedAtOrigin);
    }
    let cells: u128 = bounds.iter().map(|&b| b as u128 + 1).product();
    if cells > MAX_CELLS as u128 {
        return Err(OracleError::TooLarge { cells });
    }
    let cells = cells as usize;

    // common integer scaling of I and J
    let (ln, _) = numerator.clear_denominators();
    let (ld, _) = denominator.clear_denominators();
    let l = BigRational::from_integer(num_integer::Integer::lcm(&ln, &ld));
    let num = numerator.scalar_mul(&l);
    let den = denominator.scalar_mul(&l);
    let lead = integer_of(&den.constant_term());

    let strides = strides_for(bounds);
    let max_deg: usize = bounds.iter().sum();
    let mut lead_powers = Vec::with_capacity(max_deg + 2);
    lead_powers.push(BigInt::one());
    for k in 1..=max_deg + 1 {
        let next = &lead_powers[k - 1] * &lead;
        lead_powers.push(next);
    }

    let in_box = |e: &[u32]| e.iter().zip(bounds).all(|(&k, &b)| (k as usize) <= b);
    let linear = |e: &[u32]| -> usize {
        e.iter().zip(&strides).map(|(&k, &s)| k as usize * s).sum()
    };

    // (offset vector, linear offset, J'_k q^(|k|-1)) for k != 0 inside the box
    let steps: Vec<(Vec<u32>, usize, BigInt)> = den
        .terms()
        .filter(|(e, _)| !e.is_zero() && in_box(e.as_slice()))
        .map(|(e, c)| {
            let k = e.degree() as usize;
            (
                e.as_slice().to_vec(),
                linear(e.as_slice()),
                integer_of(c) * &lead_powers[k - 1],
            )
        })
        .collect();
    let mut rhs: Vec<Option<BigInt>> = vec![None; cells];
    for (e, c) in num.terms() {
        if in_box(e.as_slice()) {
            rhs[linear(e.as_slice())] = Some(integer_of(c) * &lead_powers[e.degree() as usize]);
        }
    }

    // multi-indices grouped by total degree, each group in graded order
    let mut by_degree: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    let mut idx = vec![0usize; d];
    let mut multi: Vec<Vec<u32>> = Vec::with_capacity(cells);
    for lin in 0..cells {
        multi.push(idx.iter().map(|&v| v as u32).collect());
        by_degree[idx.iter().sum::<usize>()].push(lin);
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] <= bounds[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    for group in by_degree.iter_mut() {
        group.sort_by(|&a, &b| {
            crate::poly::Exponents::new(multi[a].clone())
                .cmp(&crate::poly::Exponents::new(multi[b].clone()))
        });
    }

    let mut scaled = vec![BigInt::zero(); cells];
    let cell_value = |lin: usize, scaled: &[BigInt]| -> BigInt {
        let n = &multi[lin];
        let mut acc = rhs[lin].clone().unwrap_or_else(BigInt::zero);
        for (k, off, coef) in &steps {
            if k.iter().zip(n).all(|(a, b)| a <= b) {
                acc -= coef * &scaled[lin - off];
            }
        }
        acc
    };
    for group in &by_degree {
        match schedule {
            FillSchedule::Sequential => {
                for &lin in group {
                    scaled[lin] = cell_value(lin, &scaled);
                }
            }
            FillSchedule::AntiDiagonal => {
                let vals: Vec<BigInt> = group
                    .par_iter()
                    .map(|&lin| cell_value(lin, &scaled))
                    .collect();
                for (&lin, v) in group.iter().zip(vals) {
                    scaled[lin] = v;
                }
            }
        }
    }

    Ok(CoefficientTable {
        bounds: bounds.to_vec(),
        strides,
        scaled,
        lead,
        lead_powers,
    })
}

impl CoefficientTable {
    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn len(&self) -> usize {
        self.scaled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled.is_empty()
    }

    pub fn contains(&self, n: &[usize]) -> bool {
        n.len() == self.bounds.len() && n.iter().zip(&self.bounds).all(|(a, b)| a <= b)
    }

    fn linear(&self, n: &[usize]) -> usize {
        n.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    /// Exact `f_n`; zero outside the nonnegative orthant is implied by the
    /// index type, and indices beyond the box return `None`.
    pub fn get(&self, n: &[usize]) -> Option<BigRational> {
        if !self.contains(n) {
            return None;
        }
        let deg: usize = n.iter().sum();
        Some(BigRational::new(
            self.scaled[self.linear(n)].clone(),
            self.lead_powers[deg + 1].clone(),
        ))
    }

    fn multi_index(&self, mut lin: usize) -> Vec<usize> {
        let mut n = vec![0; self.dim()];
        for (slot, s) in n.iter_mut().zip(&self.strides) {
            *slot = lin / s;
            lin %= s;
        }
        n
    }

    /// Every multi-index of the box, row-major.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(|lin| self.multi_index(lin))
    }

    /// Re-checks `sum_k J_k f_{n-k} = I_n` exactly at every cell, including
    /// the `k = 0` term the fill solved for. The identity is tested in the
    /// stored integer scaling, `sum_k L J_k q^|k| g_{n-k} = L I_n q^(|n|+1)`,
    /// with `L` recomputed from the polynomials passed in. Returns the number
    /// of cells checked.
    pub fn verify_recurrence(
        &self,
        numerator: &Polynomial,
        denominator: &Polynomial,
    ) -> Result<usize, OracleError> {
        numerator.check_same_vars(denominator)?;
        if denominator.dim() != self.dim() {
            return Err(OracleError::BoundsDimension {
                expected: denominator.dim(),
                got: self.dim(),
            });
        }
        let (ln, _) = numerator.clear_denominators();
        let (ld, _) = denominator.clear_denominators();
        let l = BigRational::from_integer(num_integer::Integer::lcm(&ln, &ld));
        let max_deg = self.lead_powers.len() - 1;
        let power = |k: usize| -> Option<&BigInt> { self.lead_powers.get(k) };
        let terms: Vec<(Vec<usize>, BigInt)> = denominator
            .scalar_mul(&l)
            .terms()
            .filter(|(e, _)| (e.degree() as usize) <= max_deg)
            .map(|(e, c)| {
                let k: Vec<usize> = e.as_slice().iter().map(|&v| v as usize).collect();
                let scale = power(e.degree() as usize).expect("degree within table");
                (k, integer_of(c) * scale)
            })
            .collect();
        let num = numerator.scalar_mul(&l);
        let bad = (0..self.len()).into_par_iter().find_first(|&lin| {
            let n = self.multi_index(lin);
            let deg: usize = n.iter().sum();
            let mut lhs = BigInt::zero();
            for (k, coef) in &terms {
                if k.iter().zip(&n).all(|(a, b)| a <= b) {
                    let m: Vec<usize> = n.iter().zip(k).map(|(b, a)| b - a).collect();
                    lhs += coef * &self.scaled[self.linear(&m)];
                }
            }
            let target = num.coefficient(&n.iter().map(|&v| v as u32).collect::<Vec<_>>());
            lhs != integer_of(&target) * &self.lead_powers[deg + 1]
        });
        match bad {
            None => Ok(self.len()),
            Some(lin) => {
                let n = self.multi_index(lin);
                let target = numerator.coefficient(&n.iter().map(|&v| v as u32).collect::<Vec<_>>());
                let mut sum = BigRational::zero();
                for (e, c) in denominator.terms() {
                    let k = e.as_slice();
                    if k.iter().zip(&n).all(|(&a, &b)| a as usize <= b) {
                        let m: Vec<usize> = n.iter().zip(k).map(|(&b, &a)| b - a as usize).collect();
                        sum += c * self.get(&m).expect("inside box");
                    }
                }
                Err(OracleError::Residual {
                    index: n,
                    residual: sum - target,
                })
            }
        }
    }

    /// CSV dump: `n1,...,nd,numerator,denominator`, one row per cell.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.dim()).map(|i| format!("n{i}")).collect();
        writeln!(out, "{},numerator,denominator", header.join(","))?;
        for n in self.indices() {
            let v = self.get(&n).expect("in box");
            let idx: Vec<String> = n.iter().map(|k| k.to_string()).collect();
            writeln!(out, "{},{},{}", idx.join(","), v.numer(), v.denom())?;
        }
        Ok(())
    }

    /// The internal integer scaling; exposed for diagnostics.
    pub fn leading_scale(&self) -> &BigInt {
        &self.lead
    }
}

/// Exact coefficients along a ray `(a_1 n, ..., a_d n)`, `n = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSequence {
    pub direction: Direction,
    pub values: Vec<BigRational>,
}

impl DiagonalSequence {
    /// Largest `n` present.
    pub fn length(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

pub fn diagonal_sequence(
    table: &CoefficientTable,
    direction: &Direction,
    steps: usize,
) -> Result<DiagonalSequence, OracleError> {
    let a = direction.as_slice();
    let last: Vec<usize> = a.iter().map(|&ai| ai as usize * steps).collect();
    if !table.contains(&last) {
        return Err(OracleError::OutOfBounds {
            index: a.iter().map(|&ai| ai * steps as u64).collect(),
            bounds: table.bounds().to_vec(),
        });
    }
    let values = (0..=steps)
        .map(|n| {
            let idx: Vec<usize> = a.iter().map(|&ai| ai as usize * n).collect();
            table.get(&idx).expect("checked bound")
        })
        .collect();
    Ok(DiagonalSequence {
        direction: direction.clone(),
        values,
    })
}

/// `ln |x|` for a big integer, using its top 64 bits.
pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|` for a rational; `-inf` for zero.
pub fn ln_abs_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioEntry {
    pub n: u64,
    pub ratio: f64,
}

/// `f_{a n} / leading_term(n)` for `n >= 1`, evaluated in log space so
/// neither side has to fit in a float.
pub fn ratio_table(
    seq: &DiagonalSequence,
    asym: &AsymptoticResult,
) -> Result<Vec<RatioEntry>, OracleError> {
    if seq.direction != asym.direction {
        return Err(OracleError::DirectionMismatch {
            seq: seq.direction.as_slice().to_vec(),
            asym: asym.direction.as_slice().to_vec(),
        });
    }
    let mut out = Vec::with_capacity(seq.length());
    for (n, f) in seq.values.iter().enumerate().skip(1) {
        let n = n as u64;
        let term = asym.ln_leading_term(n);
        if term.sign == 0.0 || !term.ln_abs.is_finite() {
            return Err(OracleError::LeadingTermZero(n));
        }
        let ratio = if f.is_zero() {
            0.0
        } else {
            let sign = if f.is_negative() { -1.0 } else { 1.0 } * term.sign;
            sign * (ln_abs_rational(f) - term.ln_abs).exp()
        };
        out.push(RatioEntry { n, ratio });
    }
    Ok(out)
}
