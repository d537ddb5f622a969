//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under a graded
//! order, so two polynomials over the same variables compare equal exactly
//! when their term maps do.

mod parse;
mod point;
mod univariate;

pub use parse::{parse_polynomial, ParseError};
pub use point::ComplexPoint;
pub use univariate::UnivariatePolynomial;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable index {index} out of range for {dim} variables")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("permutation {0:?} is not a permutation of the variable indices")]
    BadPermutation(Vec<usize>),
}

/// Exponent vector of a monomial.
///
/// Ordered by total degree first; within a degree, vectors with larger
/// leading exponents come first, so `x` sorts before `y` and `x^2` before
/// `x*y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponents(exps)
    }

    pub fn zero(dim: usize) -> Self {
        Exponents(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Exponents(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Polynomial {
            vars: vars.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: BigRational) -> Self {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Exponents::zero(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Polynomial::constant(vars, BigRational::one())
    }

    /// The polynomial `x_i`.
    pub fn var(vars: &[String], i: usize) -> Result<Self, PolyError> {
        if i >= vars.len() {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                dim: vars.len(),
            });
        }
        let mut p = Polynomial::zero(vars);
        p.terms
            .insert(Exponents::unit(vars.len(), i), BigRational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Polynomial::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Exponents(e), c);
        }
        p
    }

    fn with_vars(vars: Arc<[String]>) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&Exponents(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&vec![0; self.dim()])
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Exponents::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude, as a float. Zero for the zero polynomial.
    pub fn scale(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    pub fn check_same_vars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Polynomial {
        let mut out = Polynomial::with_vars(self.vars.clone());
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to variable `i` (zero-based).
    pub fn differentiate(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i >= self.dim() {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            });
        }
        let mut out = Polynomial::with_vars(self.vars.clone());
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut ne = e.0.clone();
            ne[i] -= 1;
            out.add_term(Exponents(ne), c * BigRational::from_integer(BigInt::from(k)));
        }
        Ok(out)
    }

    pub fn evaluate(&self, z: &ComplexPoint) -> Result<Complex64, PolyError> {
        self.check_dim(z.dim())?;
        Ok(self.to_numeric().eval(z.coords()))
    }

    /// Exact value at a rational point.
    pub fn evaluate_exact(&self, z: &[BigRational]) -> Result<BigRational, PolyError> {
        self.check_dim(z.len())?;
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in z.iter().zip(&e.0) {
                if k > 0 {
                    t *= num_traits::pow::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    fn check_dim(&self, got: usize) -> Result<(), PolyError> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch {
                expected: self.dim(),
                got,
            })
        }
    }

    /// Float copy for repeated evaluation in solver loops.
    pub fn to_numeric(&self) -> NumericPoly {
        NumericPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.0.clone(), c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    /// Renames coordinates: variable `i` of `self` becomes variable `perm[i]`
    /// of the result. The variable name list is permuted the same way.
    pub fn permute(&self, perm: &[usize]) -> Result<Polynomial, PolyError> {
        let d = self.dim();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(PolyError::BadPermutation(perm.to_vec()));
        }
        let mut names = vec![String::new(); d];
        for (i, &p) in perm.iter().enumerate() {
            names[p] = self.vars[i].clone();
        }
        let mut out = Polynomial::zero(&names);
        for (e, c) in &self.terms {
            out.terms.insert(permute_exponents(e, perm), c.clone());
        }
        Ok(out)
    }

    /// Same terms over a different list of variable names of equal length.
    pub fn renamed(&self, vars: &[String]) -> Polynomial {
        assert_eq!(vars.len(), self.dim(), "renamed: arity mismatch");
        Polynomial {
            vars: vars.into(),
            terms: self.terms.clone(),
        }
    }

    /// True iff invariant under every permutation of the variables.
    /// Adjacent transpositions generate the symmetric group, so only those
    /// are checked.
    pub fn is_symmetric(&self) -> bool {
        let d = self.dim();
        (0..d.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.swap(i, i + 1);
            self.terms.iter().all(|(e, c)| {
                self.terms
                    .get(&permute_exponents(e, &perm))
                    .is_some_and(|other| other == c)
            })
        })
    }

    /// The univariate polynomial `P(x, ..., x)`.
    pub fn diagonal_restriction(&self) -> UnivariatePolynomial {
        let deg = self.total_degree() as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e.degree() as usize] += c;
        }
        UnivariatePolynomial::new(coeffs)
    }

    /// Whether the exponent vectors of the monomials generate all of `Z^d`.
    pub fn support_lattice_spans(&self) -> bool {
        let rows: Vec<Vec<BigInt>> = self
            .terms
            .keys()
            .map(|e| e.0.iter().map(|&k| BigInt::from(k)).collect())
            .collect();
        lattice_is_full(rows, self.dim())
    }

    /// Collects terms by the power of variable `i`: entry `k` holds the
    /// coefficient of `x_i^k`, itself a polynomial over the same variables
    /// (with `x_i` absent).
    pub fn coefficients_in(&self, i: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(i) as usize;
        let mut out = vec![Polynomial::with_vars(self.vars.clone()); deg + 1];
        for (e, c) in &self.terms {
            let k = e.0[i] as usize;
            let mut ne = e.0.clone();
            ne[i] = 0;
            out[k].terms.insert(Exponents(ne), c.clone());
        }
        out
    }

    /// Replaces every coefficient by its product with a common denominator
    /// so all coefficients become integers. Returns the multiplier used.
    pub fn clear_denominators(&self) -> (BigInt, Polynomial) {
        let l = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = self.scalar_mul(&BigRational::from_integer(l.clone()));
        (l, scaled)
    }
}

fn permute_exponents(e: &Exponents, perm: &[usize]) -> Exponents {
    let mut out = vec![0; e.0.len()];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = e.0[i];
    }
    Exponents(out)
}

/// Integer row reduction: the rows generate `Z^dim` iff the reduced basis has
/// `dim` pivots, all equal to ±1.
fn lattice_is_full(mut rows: Vec<Vec<BigInt>>, dim: usize) -> bool {
    let mut pivot_row = 0;
    for col in 0..dim {
        // Euclid on the column until a single nonzero entry remains below pivot_row.
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                return false;
            }
            let best = *nonzero
                .iter()
                .min_by(|&&a, &&b| rows[a][col].abs().cmp(&rows[b][col].abs()))
                .unwrap();
            rows.swap(pivot_row, best);
            if nonzero.len() == 1 {
                break;
            }
            let pivot = rows[pivot_row].clone();
            for r in rows.iter_mut().skip(pivot_row + 1) {
                if r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot[col]);
                for (x, p) in r.iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
        }
        if !rows[pivot_row][col].abs().is_one() {
            return false;
        }
        pivot_row += 1;
    }
    true
}

fn binary_op(a: &Polynomial, b: &Polynomial, negate: bool) -> Polynomial {
    assert!(a.vars == b.vars, "polynomials over different variables");
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(e.clone(), if negate { -c } else { c.clone() });
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        binary_op(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        binary_op(self, rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert!(self.vars == rhs.vars, "polynomials over different variables");
        let mut out = Polynomial::with_vars(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scalar_mul(&-BigRational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Prints in ascending graded order, e.g. `1 - x - y - x*y`. The output is
/// accepted by [`parse_polynomial`].
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if e.is_zero() || !mag.is_one() {
                factors.push(fmt_rational(&mag));
            }
            for (name, &k) in self.vars.iter().zip(&e.0) {
                match k {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Float-coefficient snapshot of a [`Polynomial`].
#[derive(Clone, Debug)]
pub struct NumericPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl NumericPoly {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(z)
                    .filter(|(&k, _)| k > 0)
                    .fold(Complex64::new(*c, 0.0), |acc, (&k, x)| acc * x.powu(k))
            })
            .sum()
    }

    pub fn eval_real(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .filter(|(&k, _)| k > 0)
                    .fold(*c, |acc, (&k, v)| acc * v.powi(k as i32))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(text: &str, names: &[&str]) -> Polynomial {
        parse_polynomial(text, &vars(names)).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let j = p("1 - x - y - x*y", &["x", "y"]);
        assert_eq!(j.differentiate(1).unwrap(), p("-1 - x", &["x", "y"]));
        let z = p("1 - x - y + x*y - x^2*y^2", &["x", "y"]);
        assert_eq!(z.differentiate(1).unwrap(), p("-1 + x - 2*x^2*y", &["x", "y"]));
        let one = p("1", &["x", "y"]);
        assert!(one.differentiate(0).unwrap().is_zero());
        assert!(matches!(
            one.differentiate(2),
            Err(PolyError::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let j = p("1 - x - y - x*y", &["x", "y"]);
        let at0 = j.evaluate(&ComplexPoint::real(&[0.0, 0.0])).unwrap();
        assert_eq!(at0, Complex64::new(1.0, 0.0));
        let c = 2f64.sqrt() - 1.0;
        assert!(j.evaluate(&ComplexPoint::real(&[c, c])).unwrap().norm() < 1e-12);
        let z = p("1 - x - y + x*y - x^2*y^2", &["x", "y"]);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        assert!(z.evaluate(&ComplexPoint::real(&[g, g])).unwrap().norm() < 1e-12);
        assert!(matches!(
            j.evaluate(&ComplexPoint::real(&[1.0])),
            Err(PolyError::DimensionMismatch { expected: 2, got: 1 })
        ));
        let exact = j.evaluate_exact(&[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(exact, q(-1, 4));
    }

    #[test]
    fn symmetry_examples() {
        assert!(p("1 - x - y - z", &["x", "y", "z"]).is_symmetric());
        assert!(p("1 - x - y + x*y - x^2*y^2", &["x", "y"]).is_symmetric());
        assert!(!p("1 - x - 2*y", &["x", "y"]).is_symmetric());
        assert!(!p("x*y^2 + y*z^2 + z*x^2", &["x", "y", "z"]).is_symmetric());
    }

    #[test]
    fn diagonal_restriction_examples() {
        let r = p("1 - x - y - z", &["x", "y", "z"]).diagonal_restriction();
        assert_eq!(r.coeffs(), &[q(1, 1), q(-3, 1)]);
        let r = p("1 - x - y + x*y - x^2*y^2", &["x", "y"]).diagonal_restriction();
        assert_eq!(r.coeffs(), &[q(1, 1), q(-2, 1), q(1, 1), q(0, 1), q(-1, 1)]);
        let r = p("1 - (1/2)*(1+x)*(1+y)*(1+z)", &["x", "y", "z"]).diagonal_restriction();
        assert_eq!(r.coeffs(), &[q(1, 2), q(-3, 2), q(-3, 2), q(-1, 2)]);
    }

    /// Brute-force oracle: gcd of all d x d minors of the exponent matrix.
    fn minors_gcd(rows: &[Vec<i64>], d: usize) -> i64 {
        fn det(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * det(&minor)
                })
                .sum()
        }
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        fn combos(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..m {
                cur.push(i);
                combos(i + 1, m, k, cur, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        combos(0, rows.len(), d, &mut Vec::new(), &mut all);
        all.iter()
            .map(|idx| det(&idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()))
            .fold(0, gcd)
    }

    #[test]
    fn lattice_examples() {
        let a = p("x + y + x*y", &["x", "y"]);
        assert!(a.support_lattice_spans());
        let b = p("x^2 + y^2 + x^2*y^2", &["x", "y"]);
        assert!(!b.support_lattice_spans());
        assert_eq!(minors_gcd(&[vec![2, 0], vec![0, 2], vec![2, 2]], 2), 4);
        let c = p("x + y + z + x*y*z", &["x", "y", "z"]);
        assert!(c.support_lattice_spans());
        // index-2 sublattice without any zero minor
        let e = p("x^2 + x*y + y^2", &["x", "y"]);
        assert_eq!(minors_gcd(&[vec![2, 0], vec![1, 1], vec![0, 2]], 2), 2);
        assert!(!e.support_lattice_spans());
        let f = p("x^3*y + x*y^2", &["x", "y"]);
        assert_eq!(minors_gcd(&[vec![3, 1], vec![1, 2]], 2), 5);
        assert!(!f.support_lattice_spans());
    }

    #[test]
    fn permute_renames_variables() {
        let j = p("1 - x - 2*y + x*y^3", &["x", "y"]);
        let s = j.permute(&[1, 0]).unwrap();
        assert_eq!(s.vars(), &vars(&["y", "x"])[..]);
        assert_eq!(s.coefficient(&[3, 1]), q(1, 1));
        assert_eq!(s.coefficient(&[1, 0]), q(-2, 1));
        assert!(j.permute(&[0, 0]).is_err());
    }

    #[test]
    fn display_is_ascending_graded() {
        let j = p("x*y + y + x - 1 + x^2", &["x", "y"]);
        assert_eq!(j.to_string(), "-1 + x + y + x^2 + x*y");
        let h = p("1 - (1/2)*(1+x)*(1+y)", &["x", "y"]);
        assert_eq!(h.to_string(), "1/2 - 1/2*x - 1/2*y - 1/2*x*y");
        assert_eq!(Polynomial::zero(&vars(&["x"])).to_string(), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(d: usize) -> impl Strategy<Value = Polynomial> {
            proptest::collection::vec(
                (proptest::collection::vec(0u32..4, d), -9i64..10, 1i64..5),
                0..7,
            )
            .prop_map(move |ts| {
                let names: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
                Polynomial::from_terms(&names, ts.into_iter().map(|(e, n, den)| (e, q(n, den))))
            })
        }

        proptest! {
            #[test]
            fn mixed_partials_commute(pol in arb_poly(3), i in 0usize..3, j in 0usize..3) {
                let a = pol.differentiate(i).unwrap().differentiate(j).unwrap();
                let b = pol.differentiate(j).unwrap().differentiate(i).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn derivative_matches_central_differences(
                pol in arb_poly(2),
                i in 0usize..2,
                re in proptest::collection::vec(-1.0f64..1.0, 2),
                im in proptest::collection::vec(-1.0f64..1.0, 2),
            ) {
                let z: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
                let h = 1e-5;
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[i] += h;
                zm[i] -= h;
                let num = pol.to_numeric();
                let fd = (num.eval(&zp) - num.eval(&zm)) / (2.0 * h);
                let exact = pol.differentiate(i).unwrap().to_numeric().eval(&z);
                let scale = exact.norm().max(pol.scale()).max(1.0);
                prop_assert!((fd - exact).norm() <= 1e-6 * scale, "fd {fd} exact {exact}");
            }

            #[test]
            fn print_then_parse_is_identity(pol in arb_poly(3)) {
                let text = pol.to_string();
                let back = parse_polynomial(&text, pol.vars()).unwrap();
                prop_assert_eq!(back, pol);
            }

            #[test]
            fn diagonal_restriction_matches_evaluation(pol in arb_poly(3), n in -20i64..20, den in 1i64..7) {
                let t = q(n, den);
                let direct = pol.evaluate_exact(&[t.clone(), t.clone(), t.clone()]).unwrap();
                prop_assert_eq!(pol.diagonal_restriction().eval_exact(&t), direct);
            }

            #[test]
            fn symmetric_restriction_is_permutation_invariant(pol in arb_poly(3)) {
                let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
                let s = perms.iter().fold(Polynomial::zero(pol.vars()), |acc, perm| {
                    &acc + &pol.permute(perm).unwrap().renamed(pol.vars())
                });
                prop_assert!(s.is_symmetric());
                for perm in &perms {
                    let moved = s.permute(perm).unwrap();
                    prop_assert_eq!(moved.diagonal_restriction(), s.diagonal_restriction());
                }
            }
        }
    }
}
