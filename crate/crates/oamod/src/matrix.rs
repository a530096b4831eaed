//! Dense complex matrices in row-major order, the shared carrier for
//! algebra elements, module payloads and rank-one operators.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// The matrix unit with a single 1 at (p, q).
    pub fn unit(rows: usize, cols: usize, p: usize, q: usize) -> Self {
        assert!(p < rows && q < cols, "matrix unit index out of range");
        let mut m = Self::zeros(rows, cols);
        m.set(p, q, Complex64::ONE);
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-Complex64::ONE)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * lambda).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product inner dimensions differ"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - self*`; zero exactly when hermitian.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self.at(i, j) - self.at(j, i).conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Hermitian part (a + a*)/2; exactly hermitian entrywise.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.at(i, j) + self.at(j, i).conj()) * 0.5
        })
    }

    /// Skew part divided by i, i.e. (a - a*)/(2i); exactly hermitian entrywise.
    pub fn skew_hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let half_over_i = Complex64::new(0.0, -0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.at(i, j) - self.at(j, i).conj()) * half_over_i
        })
    }

    /// Frobenius norm of `self*self - I`.
    pub fn unitary_deviation(&self) -> f64 {
        assert!(self.is_square());
        let gram = self.adjoint().mul(self);
        gram.sub(&Self::identity(self.rows)).frobenius_norm()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

/// Rank-one operator xi (x) eta: the matrix with (i, j) entry `xi[i] * conj(eta[j])`,
/// acting as v -> (v, eta) xi with the inner product linear in its first slot.
pub fn rank_one(xi: &[Complex64], eta: &[Complex64]) -> Result<CMatrix> {
    if xi.len() != eta.len() {
        return Err(Error::DimensionMismatch(format!(
            "rank-one factors have lengths {} and {}",
            xi.len(),
            eta.len()
        )));
    }
    if xi.is_empty() {
        return Err(Error::DimensionMismatch(
            "rank-one factors must be nonempty".into(),
        ));
    }
    Ok(CMatrix::from_fn(xi.len(), xi.len(), |i, j| {
        xi[i] * eta[j].conj()
    }))
}

/// Inner product linear in the first argument: sum of `a[i] * conj(b[i])`.
pub fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_vectors_give_matrix_unit() {
        let e1 = vec![Complex64::ONE, Complex64::ZERO];
        let e2 = vec![Complex64::ZERO, Complex64::ONE];
        let m = rank_one(&e1, &e2).unwrap();
        assert_eq!(m, CMatrix::unit(2, 2, 0, 1));
    }

    #[test]
    fn rank_one_projection_is_hermitian_idempotent() {
        let xi = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let p = rank_one(&xi, &xi).unwrap();
        assert!(p.hermitian_deviation() < 1e-15);
        let p2 = p.mul(&p);
        assert!(p2.sub(&p).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rank_one_matches_defining_action() {
        let mut rng = rng::seeded(7);
        let xi = rng::random_cvec(&mut rng, 5);
        let eta = rng::random_cvec(&mut rng, 5);
        let m = rank_one(&xi, &eta).unwrap();
        for _ in 0..10 {
            let nu = rng::random_cvec(&mut rng, 5);
            let lhs = m.apply(&nu);
            let scalar = dot_conj(&nu, &eta);
            let rhs: Vec<Complex64> = xi.iter().map(|x| x * scalar).collect();
            let err: f64 = lhs
                .iter()
                .zip(&rhs)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "action deviates by {err}");
        }
    }

    #[test]
    fn rank_one_rejects_length_mismatch() {
        let xi = vec![Complex64::ONE];
        let eta = vec![Complex64::ONE, Complex64::ONE];
        assert!(rank_one(&xi, &eta).is_err());
    }

    #[test]
    fn adjoint_swaps_rank_one_factors() {
        let mut rng = rng::seeded(11);
        let xi = rng::random_cvec(&mut rng, 4);
        let eta = rng::random_cvec(&mut rng, 4);
        let lhs = rank_one(&xi, &eta).unwrap().adjoint();
        let rhs = rank_one(&eta, &xi).unwrap();
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-14);
    }

    #[test]
    fn hermitian_and_skew_parts_recombine() {
        let mut rng = rng::seeded(3);
        let a = rng::random_cmatrix(&mut rng, 4, 4);
        let h = a.hermitian_part();
        let k = a.skew_hermitian_part();
        assert_eq!(h.hermitian_deviation(), 0.0);
        assert_eq!(k.hermitian_deviation(), 0.0);
        let recombined = h.add(&k.scale(Complex64::I));
        assert!(recombined.sub(&a).frobenius_norm() < 1e-14);
    }
}
