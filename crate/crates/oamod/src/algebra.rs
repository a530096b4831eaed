//! Finite-dimensional operator algebras: direct sums of full matrix blocks
//! carrying either the compact-operator norm or the Hilbert-Schmidt norm.
//!
//! In finite dimension the trace class of an H*-algebra (products ab)
//! exhausts the whole algebra, so no separate carrier for it exists here;
//! inner products land directly in the algebra for both flavors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Norm flavor of a block: C*-algebra of compact operators (spectral norm)
/// or H*-algebra of Hilbert-Schmidt operators (Frobenius norm).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    CompactOperator,
    HilbertSchmidt,
}

/// One full matrix block M_dim with its norm flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraBlock {
    pub dim: usize,
    pub flavor: Flavor,
}

/// Direct sum of matrix blocks. In a single-flavor algebra this is the usual
/// c0-sum (compact) or orthogonal sum (Hilbert-Schmidt); mixed flavors are
/// allowed, with the norm taking the max of the two parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub blocks: Vec<AlgebraBlock>,
}

impl AlgebraDescriptor {
    pub fn simple(dim: usize, flavor: Flavor) -> Self {
        Self {
            blocks: vec![AlgebraBlock { dim, flavor }],
        }
    }

    pub fn uniform(dims: &[usize], flavor: Flavor) -> Self {
        Self {
            blocks: dims.iter().map(|&dim| AlgebraBlock { dim, flavor }).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidConfig("algebra has no blocks".into()));
        }
        if self.blocks.iter().any(|b| b.dim == 0) {
            return Err(Error::InvalidConfig("algebra block of dimension 0".into()));
        }
        Ok(())
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Total number of matrix units across all blocks.
    pub fn total_units(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.dim).sum()
    }
}

/// Element of a block direct-sum algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    descriptor: AlgebraDescriptor,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn new(descriptor: AlgebraDescriptor, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != descriptor.blocks.len() {
            return Err(Error::DescriptorMismatch(format!(
                "expected {} blocks, got {}",
                descriptor.blocks.len(),
                blocks.len()
            )));
        }
        for (b, m) in descriptor.blocks.iter().zip(&blocks) {
            if m.rows() != b.dim || m.cols() != b.dim {
                return Err(Error::DescriptorMismatch(format!(
                    "block of size {}x{} does not match descriptor dimension {}",
                    m.rows(),
                    m.cols(),
                    b.dim
                )));
            }
        }
        Ok(Self { descriptor, blocks })
    }

    pub fn zero(descriptor: &AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .blocks
            .iter()
            .map(|b| CMatrix::zeros(b.dim, b.dim))
            .collect();
        Self {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    pub fn identity(descriptor: &AlgebraDescriptor) -> Self {
        let blocks = descriptor
            .blocks
            .iter()
            .map(|b| CMatrix::identity(b.dim))
            .collect();
        Self {
            descriptor: descriptor.clone(),
            blocks,
        }
    }

    /// The matrix unit E_pq of a single block, zero elsewhere.
    pub fn matrix_unit(descriptor: &AlgebraDescriptor, block: usize, p: usize, q: usize) -> Self {
        let mut out = Self::zero(descriptor);
        let dim = descriptor.blocks[block].dim;
        out.blocks[block] = CMatrix::unit(dim, dim, p, q);
        out
    }

    /// Places `m` in block `index`, zeros elsewhere.
    pub fn embed_block(descriptor: &AlgebraDescriptor, index: usize, m: CMatrix) -> Result<Self> {
        let mut out = Self::zero(descriptor);
        let dim = descriptor.blocks[index].dim;
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DescriptorMismatch(format!(
                "embedding a {}x{} matrix into a block of dimension {}",
                m.rows(),
                m.cols(),
                dim
            )));
        }
        out.blocks[index] = m;
        Ok(out)
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn block(&self, index: usize) -> &CMatrix {
        &self.blocks[index]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, CMatrix::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, CMatrix::sub)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, CMatrix::mul)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        assert_eq!(
            self.descriptor, other.descriptor,
            "algebra descriptors differ"
        );
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| f(a, b))
            .collect();
        Self {
            descriptor: self.descriptor.clone(),
            blocks,
        }
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(|m| m.scale(lambda)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-Complex64::ONE)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            descriptor: self.descriptor.clone(),
            blocks: self.blocks.iter().map(CMatrix::adjoint).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| {
                let f = m.frobenius_norm();
                f * f
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(CMatrix::max_abs).fold(0.0, f64::max)
    }

    /// Entry iterator as (block, p, q, value), row-major within each block.
    pub fn unit_coordinates(&self) -> impl Iterator<Item = (usize, usize, usize, Complex64)> + '_ {
        self.blocks.iter().enumerate().flat_map(|(j, m)| {
            let dim = m.rows();
            (0..dim).flat_map(move |p| (0..dim).map(move |q| (j, p, q, m.at(p, q))))
        })
    }
}

/// Spectral norm of one matrix: largest singular value via the hermitian
/// eigenvalues of a*a.
fn spectral_norm(m: &CMatrix) -> f64 {
    if m.frobenius_norm() == 0.0 {
        return 0.0;
    }
    let gram = m.adjoint().mul(m);
    let eig = hermitian_eig(&gram).expect("a*a is hermitian by construction");
    eig.values
        .last()
        .copied()
        .expect("nonempty spectrum")
        .max(0.0)
        .sqrt()
}

/// Algebra norm of an element. Compact blocks contribute the max of their
/// spectral norms, Hilbert-Schmidt blocks the l2 sum of Frobenius norms;
/// a mixed algebra takes the larger of the two parts.
pub fn operator_norm(a: &AlgebraElement) -> f64 {
    let mut compact_part = 0.0f64;
    let mut hs_sq = 0.0f64;
    for (block, m) in a.descriptor().blocks.iter().zip(a.blocks()) {
        match block.flavor {
            Flavor::CompactOperator => compact_part = compact_part.max(spectral_norm(m)),
            Flavor::HilbertSchmidt => {
                let f = m.frobenius_norm();
                hs_sq += f * f;
            }
        }
    }
    compact_part.max(hs_sq.sqrt())
}

/// True when every block is hermitian to `tol` and its spectrum is >= -tol.
pub fn is_positive(a: &AlgebraElement, tol: f64) -> bool {
    assert!(tol >= 0.0);
    for m in a.blocks() {
        if m.hermitian_deviation() > tol {
            return false;
        }
        let h = m.hermitian_part();
        match hermitian_eig(&h) {
            Ok(eig) => {
                if eig.values.iter().any(|&v| v < -tol) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Splits a into four positive parts with a = b1 - b2 + i (b3 - b4):
/// b1, b2 are the positive and negative spectral parts of (a + a*)/2 and
/// b3, b4 those of (a - a*)/(2i).
pub fn four_positive_parts(a: &AlgebraElement) -> Result<[AlgebraElement; 4]> {
    let descriptor = a.descriptor().clone();
    let mut parts: [Vec<CMatrix>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for m in a.blocks() {
        let h = m.hermitian_part();
        let k = m.skew_hermitian_part();
        let eh = hermitian_eig(&h)?;
        let ek = hermitian_eig(&k)?;
        parts[0].push(eh.rebuild_with(|v| v.max(0.0)));
        parts[1].push(eh.rebuild_with(|v| (-v).max(0.0)));
        parts[2].push(ek.rebuild_with(|v| v.max(0.0)));
        parts[3].push(ek.rebuild_with(|v| (-v).max(0.0)));
    }
    let [p0, p1, p2, p3] = parts;
    Ok([
        AlgebraElement::new(descriptor.clone(), p0)?,
        AlgebraElement::new(descriptor.clone(), p1)?,
        AlgebraElement::new(descriptor.clone(), p2)?,
        AlgebraElement::new(descriptor, p3)?,
    ])
}

/// Hilbert-Schmidt inner product: sum over blocks of trace(b_j* a_j),
/// linear in the first argument.
pub fn hs_inner(a: &AlgebraElement, b: &AlgebraElement) -> Result<Complex64> {
    if a.descriptor() != b.descriptor() {
        return Err(Error::DescriptorMismatch(
            "hs_inner requires elements of the same algebra".into(),
        ));
    }
    let mut acc = Complex64::ZERO;
    for (ma, mb) in a.blocks().iter().zip(b.blocks()) {
        for i in 0..ma.rows() {
            for j in 0..ma.cols() {
                acc += mb.at(i, j).conj() * ma.at(i, j);
            }
        }
    }
    Ok(acc)
}
