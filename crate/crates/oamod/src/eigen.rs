//! Cyclic Jacobi diagonalization for complex hermitian matrices.
//!
//! Deterministic and robust at desk sizes (n <= 64). Each rotation is a
//! unitary plane rotation annihilating one off-diagonal entry; sweeps
//! repeat until all off-diagonal magnitudes fall below the threshold.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;
const HERMITIAN_INPUT_TOL: f64 = 1e-12;

/// Spectral decomposition A = Q diag(values) Q* with values ascending and Q unitary.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    /// Rebuild Q diag(values) Q*.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let q = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| q.at(i, k) * self.values[k] * q.at(j, k).conj())
                .sum()
        })
    }

    /// Map eigenvalues through `f` and rebuild, e.g. positive spectral parts.
    pub fn rebuild_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let mapped = EigenDecomposition {
            values: self.values.iter().map(|&v| f(v)).collect(),
            vectors: self.vectors.clone(),
        };
        mapped.reconstruct()
    }
}

/// Diagonalize a hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(a: &CMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    let tolerance = HERMITIAN_INPUT_TOL * scale.max(1.0);
    let deviation = a.hermitian_deviation();
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }

    let mut work = a.clone();
    let mut q = CMatrix::identity(n);
    if n <= 1 || scale == 0.0 {
        let values = (0..n).map(|i| work.at(i, i).re).collect();
        return Ok(EigenDecomposition { values, vectors: q });
    }

    let threshold = OFF_DIAGONAL_THRESHOLD * scale;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut max_off = 0.0f64;
        for p in 0..n - 1 {
            for qi in p + 1..n {
                let apq = work.at(p, qi);
                let b = apq.norm();
                max_off = max_off.max(b);
                if b <= threshold {
                    continue;
                }
                rotate(&mut work, &mut q, p, qi, apq, b);
            }
        }
        if max_off <= threshold {
            converged = true;
            break;
        }
    }
    if !converged {
        // One final scan: the last sweep may have finished the job.
        let mut max_off = 0.0f64;
        for p in 0..n - 1 {
            for qi in p + 1..n {
                max_off = max_off.max(work.at(p, qi).norm());
            }
        }
        if max_off > threshold {
            return Err(Error::EigenNoConvergence(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        work.at(i, i)
            .re
            .partial_cmp(&work.at(j, j).re)
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| work.at(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| q.at(i, order[j]));
    Ok(EigenDecomposition { values, vectors })
}

/// Apply the unitary plane rotation annihilating work[p][q], updating the
/// accumulated eigenvector matrix in step.
fn rotate(work: &mut CMatrix, q: &mut CMatrix, p: usize, qi: usize, apq: Complex64, b: f64) {
    let n = work.rows();
    let alpha = work.at(p, p).re;
    let gamma = work.at(qi, qi).re;
    let phase = apq / b;

    // tan of the rotation angle, smaller-magnitude root of t^2 + 2*theta*t - 1 = 0.
    let theta = (gamma - alpha) / (2.0 * b);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = phase * s;

    // Columns p and q of work <- work * J.
    for i in 0..n {
        let wip = work.at(i, p);
        let wiq = work.at(i, qi);
        work.set(i, p, wip * c - wiq * s_phase.conj());
        work.set(i, qi, wip * s_phase + wiq * c);
    }
    // Rows p and q of work <- J* * work.
    for j in 0..n {
        let wpj = work.at(p, j);
        let wqj = work.at(qi, j);
        work.set(p, j, wpj * c - wqj * s_phase);
        work.set(qi, j, wpj * s_phase.conj() + wqj * c);
    }
    // Pin the analytically known values to keep the hermitian structure exact.
    work.set(p, p, Complex64::new(alpha - t * b, 0.0));
    work.set(qi, qi, Complex64::new(gamma + t * b, 0.0));
    work.set(p, qi, Complex64::ZERO);
    work.set(qi, p, Complex64::ZERO);

    for i in 0..n {
        let qip = q.at(i, p);
        let qiq = q.at(i, qi);
        q.set(i, p, qip * c - qiq * s_phase.conj());
        q.set(i, qi, qip * s_phase + qiq * c);
    }
}
