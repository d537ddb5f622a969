//! Small dense complex linear algebra: LU with partial pivoting and
//! eigenvalues of upper Hessenberg matrices (companion matrices in
//! particular) by shifted QR.

use num_complex::Complex64;
use thiserror::Error;

pub type Matrix = Vec<Vec<Complex64>>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("QR iteration did not converge within {0} iterations")]
    NoConvergence(usize),
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// In-place LU factorisation with partial pivoting. Returns the row
/// permutation and its parity.
fn lu_in_place(a: &mut Matrix) -> Result<(Vec<usize>, bool), LinalgError> {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut odd = false;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .expect("nonempty");
        if a[p][k].norm() == 0.0 {
            return Err(LinalgError::Singular);
        }
        if p != k {
            a.swap(p, k);
            perm.swap(p, k);
            odd = !odd;
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            a[i][k] = f;
            for j in k + 1..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    Ok((perm, odd))
}

pub fn determinant(a: &Matrix) -> Complex64 {
    let mut m = a.clone();
    match lu_in_place(&mut m) {
        Err(_) => ZERO,
        Ok((_, odd)) => {
            let d = (0..m.len()).fold(ONE, |acc, i| acc * m[i][i]);
            if odd {
                -d
            } else {
                d
            }
        }
    }
}

/// Solves `a x = b`.
pub fn solve(a: &Matrix, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.len();
    let mut m = a.clone();
    let (perm, _) = lu_in_place(&mut m)?;
    let mut y: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let t = m[i][j] * y[j];
            y[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let t = m[i][j] * y[j];
            y[i] -= t;
        }
        y[i] /= m[i][i];
    }
    Ok(y)
}

/// Unitary 2x2 rotation `g` with `g * [a, b]^T = [r, 0]^T`.
fn givens(a: Complex64, b: Complex64) -> [Complex64; 4] {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return [ONE, ZERO, ZERO, ONE];
    }
    [a.conj() / r, b.conj() / r, -b / r, a / r]
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
/// Wilkinson shifts and deflation. `max_iter` bounds the sweeps spent on any
/// one eigenvalue; `tol` is the relative subdiagonal deflation threshold.
pub fn hessenberg_eigenvalues(
    mut h: Matrix,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<Complex64>, LinalgError> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0;
    loop {
        if hi == 0 {
            eig.push(h[0][0]);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let scale = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if h[lo][lo - 1].norm() <= tol * scale {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(LinalgError::NoConvergence(max_iter));
        }
        let (a, b, c, d) = (h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        let mut mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            d + Complex64::new(h[hi][hi - 1].norm(), 0.0) * 0.75
        } else {
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        if !mu.re.is_finite() || !mu.im.is_finite() {
            mu = d;
        }
        for k in lo..=hi {
            h[k][k] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let g = givens(h[k][k], h[k + 1][k]);
            for j in k..=hi {
                let (x, y) = (h[k][j], h[k + 1][j]);
                h[k][j] = g[0] * x + g[1] * y;
                h[k + 1][j] = g[2] * x + g[3] * y;
            }
            rots.push(g);
        }
        for (k, g) in (lo..hi).zip(&rots) {
            for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
                let (x, y) = (row[k], row[k + 1]);
                row[k] = x * g[0].conj() + y * g[1].conj();
                row[k + 1] = x * g[2].conj() + y * g[3].conj();
            }
        }
        for k in lo..=hi {
            h[k][k] += mu;
        }
    }
    Ok(eig)
}

/// Companion matrix of `sum coeffs[k] x^k` (ascending, nonzero leading
/// coefficient), in upper Hessenberg form.
pub fn companion(coeffs: &[Complex64]) -> Matrix {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut m = vec![vec![ZERO; n]; n];
    for j in 0..n {
        m[0][j] = -coeffs[n - 1 - j] / lead;
    }
    for i in 1..n {
        m[i][i - 1] = ONE;
    }
    m
}

pub fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
}

/// All complex roots of a polynomial given by ascending coefficients:
/// companion eigenvalues, each polished by a few Newton steps.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    let mut c = coeffs.to_vec();
    let top = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while c.last().is_some_and(|z| z.norm() <= 1e-14 * top) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let mut roots = hessenberg_eigenvalues(companion(&c), 500, 1e-12)?;
    let dc: Vec<Complex64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &z)| z * k as f64)
        .collect();
    for r in roots.iter_mut() {
        *r = newton_polish(&c, &dc, *r);
    }
    Ok(roots)
}

fn newton_polish(c: &[Complex64], dc: &[Complex64], mut x: Complex64) -> Complex64 {
    let mut best = horner(c, x).norm();
    for _ in 0..8 {
        let d = horner(dc, x);
        if d.norm() == 0.0 {
            break;
        }
        let next = x - horner(c, x) / d;
        let val = horner(c, next).norm();
        if !(val < best) {
            break;
        }
        best = val;
        x = next;
    }
    x
}
