use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense univariate polynomial over the rationals, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<BigRational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coeffs: Vec::new() }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        UnivariatePolynomial::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * x + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn derivative(&self) -> Self {
        UnivariatePolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let lc = lc.clone();
                UnivariatePolynomial {
                    coeffs: self.coeffs.iter().map(|c| c / &lc).collect(),
                }
            }
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UnivariatePolynomial::new(quot), UnivariatePolynomial::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Order of vanishing at zero and the cofactor `self / x^k`.
    pub fn strip_zero_root(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (
            k,
            UnivariatePolynomial {
                coeffs: self.coeffs[k.min(self.coeffs.len())..].to_vec(),
            },
        )
    }

    fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                return seq;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(UnivariatePolynomial::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
    }

    fn sign_variations(seq: &[Self], x: &BigRational) -> usize {
        let signs: Vec<i8> = seq
            .iter()
            .map(|p| {
                let v = p.eval_exact(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Upper bound on the modulus of every root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let Some(lc) = self.leading() else {
            return BigRational::one();
        };
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lc).abs())
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }

    /// Number of distinct real roots in `(lo, hi]`, for `lo` not a root.
    pub fn count_roots_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        Self::sign_variations(&seq, lo).saturating_sub(Self::sign_variations(&seq, hi))
    }

    /// Disjoint intervals `(lo, hi]`, each holding exactly one distinct
    /// positive root, in increasing order.
    pub fn isolate_positive_roots(&self) -> Vec<(BigRational, BigRational)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let (_, p) = self.strip_zero_root();
        let seq = p.sturm_sequence();
        let var = |x: &BigRational| Self::sign_variations(&seq, x);
        let mut out = Vec::new();
        let mut stack = vec![(BigRational::zero(), p.root_bound())];
        while let Some((lo, hi)) = stack.pop() {
            let count = var(&lo).saturating_sub(var(&hi));
            match count {
                0 => {}
                1 => out.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Narrows an isolating interval `(lo, hi]` by Sturm-count bisection,
    /// then Newton-polishes in floating point inside the bracket.
    pub fn refine_root(&self, lo: &BigRational, hi: &BigRational) -> f64 {
        let (_, p) = self.strip_zero_root();
        let seq = p.sturm_sequence();
        let var = |x: &BigRational| Self::sign_variations(&seq, x);
        let two = BigRational::from_integer(2.into());
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        let v_hi = var(&hi);
        let rel = BigRational::new(1.into(), num_bigint::BigInt::one() << 40usize);
        while (&hi - &lo) > &rel * &hi {
            let mid = (&lo + &hi) / &two;
            if var(&mid) > v_hi {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (flo, fhi) = (lo.to_f64().unwrap(), hi.to_f64().unwrap());
        let f = p.to_f64_coeffs();
        let df = p.derivative().to_f64_coeffs();
        let horner = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
        let mut x = 0.5 * (flo + fhi);
        for _ in 0..50 {
            let d = horner(&df, x);
            if d == 0.0 {
                break;
            }
            let step = horner(&f, x) / d;
            let next = x - step;
            if !(flo..=fhi).contains(&next) {
                break;
            }
            x = next;
            if step.abs() <= 1e-16 * x.abs() {
                break;
            }
        }
        x
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = ["x".to_string()];
        let p = super::Polynomial::from_terms(
            &vars,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c.clone())),
        );
        write!(f, "{p}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_square_free() {
        // (x-1)^2 (x+2)
        let p = UnivariatePolynomial::from_integers(&[2, -3, 0, 1]);
        let sf = p.square_free_part();
        assert_eq!(sf, UnivariatePolynomial::from_integers(&[-2, 1, 1]));
        let a = UnivariatePolynomial::from_integers(&[-1, 0, 1]);
        let b = UnivariatePolynomial::from_integers(&[1, 1]);
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn sturm_counts_and_isolation() {
        // 1 - 2x + x^2 - x^4 = (1 - x - x^2)(1 - x + x^2): one positive root
        let j = UnivariatePolynomial::from_integers(&[1, -2, 1, 0, -1]);
        let roots = j.isolate_positive_roots();
        assert_eq!(roots.len(), 1);
        let r = j.refine_root(&roots[0].0, &roots[0].1);
        assert!((r - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        // (x - 1)(x - 2)(x - 3)
        let c = UnivariatePolynomial::from_integers(&[-6, 11, -6, 1]);
        let roots = c.isolate_positive_roots();
        assert_eq!(roots.len(), 3);
        let vals: Vec<f64> = roots.iter().map(|(l, h)| c.refine_root(l, h)).collect();
        for (v, e) in vals.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v - e).abs() < 1e-14, "{v}");
        }
        // double root counts once
        let d = UnivariatePolynomial::from_integers(&[1, -2, 1]);
        assert_eq!(d.isolate_positive_roots().len(), 1);
        let zero = BigRational::zero();
        assert_eq!(c.count_roots_in(&zero, &BigRational::from_integer(2.into())), 2);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = UnivariatePolynomial::from_integers(&[5, 0, 3, 7, 1]);
        let b = UnivariatePolynomial::from_integers(&[1, 2]);
        let (q, r) = a.div_rem(&b);
        let back: Vec<BigRational> = {
            let mut out = vec![BigRational::zero(); 5];
            for (i, qc) in q.coeffs().iter().enumerate() {
                for (j, bc) in b.coeffs().iter().enumerate() {
                    out[i + j] += qc * bc;
                }
            }
            for (i, rc) in r.coeffs().iter().enumerate() {
                out[i] += rc;
            }
            out
        };
        assert_eq!(UnivariatePolynomial::new(back), a);
    }
}
