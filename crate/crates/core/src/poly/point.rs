use num_complex::Complex64;

/// A point of `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        ComplexPoint(coords)
    }

    pub fn real(coords: &[f64]) -> Self {
        ComplexPoint(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate-wise moduli; two points share a torus iff these agree.
    pub fn moduli(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }

    /// Every coordinate has negligible imaginary part and positive real part.
    pub fn is_positive_real(&self, tol: f64) -> bool {
        self.0
            .iter()
            .all(|z| z.im.abs() <= tol * z.norm().max(1.0) && z.re > 0.0)
    }

    /// Max over coordinates of `|a_i - b_i| / max(1, |b_i|)`.
    pub fn distance(&self, other: &ComplexPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
            .fold(0.0, f64::max)
    }

    /// Whether `other` lies on the torus of `self`, each modulus compared
    /// with relative tolerance `tol`.
    pub fn same_torus(&self, other: &ComplexPoint, tol: f64) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| (a.norm() - b.norm()).abs() <= tol * a.norm().max(f64::MIN_POSITIVE))
    }

    pub fn permuted(&self, perm: &[usize]) -> ComplexPoint {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.0[i];
        }
        ComplexPoint(out)
    }
}
