//! Deterministic random fixtures: standard complex Gaussian entries from a
//! seeded ChaCha8 stream, plus constructive orthogonal pairs.
//!
//! Orthogonal pairs are built by construction (disjoint supports, disjoint
//! blocks, or unitary row splits), never by rejection sampling, so the
//! orthogonality premise holds at rounding level.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraDescriptor, AlgebraElement};
use crate::error::{Error, Result};
use crate::map::GVector;
use crate::matrix::CMatrix;
use crate::module::{
    embed_child, inner_product, ModuleDescriptor, ModuleElement, ModulePayload,
};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
pub fn random_complex(rng: &mut SeededRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_cvec(rng: &mut SeededRng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn random_cmatrix(rng: &mut SeededRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::new(rows, cols, random_cvec(rng, rows * cols)).expect("consistent dimensions")
}

/// Haar-style random unitary via two rounds of modified Gram-Schmidt on a
/// Gaussian matrix.
pub fn random_unitary(rng: &mut SeededRng, n: usize) -> CMatrix {
    let g = random_cmatrix(rng, n, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g.at(i, j)).collect())
        .collect();
    for _pass in 0..2 {
        for j in 0..n {
            let (done, rest) = cols.split_at_mut(j);
            let target = &mut rest[0];
            for pivot in done.iter() {
                let proj = crate::matrix::dot_conj(target, pivot);
                for (t, p) in target.iter_mut().zip(pivot) {
                    *t -= proj * p;
                }
            }
            let norm = crate::matrix::vec_norm(target);
            for v in target.iter_mut() {
                *v /= norm;
            }
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_algebra_element(rng: &mut SeededRng, desc: &AlgebraDescriptor) -> AlgebraElement {
    let blocks = desc
        .blocks
        .iter()
        .map(|b| random_cmatrix(rng, b.dim, b.dim))
        .collect();
    AlgebraElement::new(desc.clone(), blocks).expect("consistent shapes")
}

pub fn random_module_element(rng: &mut SeededRng, desc: &ModuleDescriptor) -> ModuleElement {
    let payload = match desc {
        ModuleDescriptor::AlgebraAsModule { dim, .. } => {
            ModulePayload::Matrix(random_cmatrix(rng, *dim, *dim))
        }
        ModuleDescriptor::Rectangular { rows, cols, .. } => {
            ModulePayload::Matrix(random_cmatrix(rng, *rows, *cols))
        }
        ModuleDescriptor::VectorModule { dim, .. } => {
            ModulePayload::Vector(random_cvec(rng, *dim))
        }
        ModuleDescriptor::PairModule { dim, .. } => {
            ModulePayload::Pair(random_cvec(rng, *dim), random_cvec(rng, *dim))
        }
        ModuleDescriptor::DiagonalModule { dim, .. } => {
            ModulePayload::Diagonal(random_cvec(rng, *dim))
        }
        ModuleDescriptor::DirectSum { children } => ModulePayload::Children(
            children
                .iter()
                .map(|c| random_module_element(rng, c))
                .collect(),
        ),
    };
    ModuleElement::new(desc.clone(), payload).expect("consistent shapes")
}

pub fn random_gvector(rng: &mut SeededRng, dim: usize) -> GVector {
    GVector::new(random_cvec(rng, dim))
}

/// A nonzero orthogonal pair, built so that `<x, y> = 0` holds to rounding.
pub fn random_orthogonal_pair(
    rng: &mut SeededRng,
    desc: &ModuleDescriptor,
) -> Result<(ModuleElement, ModuleElement)> {
    let pair = match desc {
        ModuleDescriptor::VectorModule { .. } => {
            return Err(Error::NoOrthogonalPairs(
                "nonzero vectors in the vector module always pair to a nonzero rank-one".into(),
            ));
        }
        ModuleDescriptor::PairModule { dim, flavor } => {
            // Component-disjoint pair: (xi, 0) and (0, eta).
            let d = ModuleDescriptor::PairModule {
                dim: *dim,
                flavor: *flavor,
            };
            let x = ModuleElement::new(
                d.clone(),
                ModulePayload::Pair(random_cvec(rng, *dim), vec![Complex64::ZERO; *dim]),
            )?;
            let y = ModuleElement::new(
                d,
                ModulePayload::Pair(vec![Complex64::ZERO; *dim], random_cvec(rng, *dim)),
            )?;
            (x, y)
        }
        ModuleDescriptor::DiagonalModule { dim, .. } => {
            if *dim < 2 {
                return Err(Error::NoOrthogonalPairs(
                    "diagonal module needs dimension at least 2".into(),
                ));
            }
            let split = dim / 2;
            let mut xv = vec![Complex64::ZERO; *dim];
            let mut yv = vec![Complex64::ZERO; *dim];
            for entry in xv.iter_mut().take(split) {
                *entry = random_complex(rng);
            }
            for entry in yv.iter_mut().skip(split) {
                *entry = random_complex(rng);
            }
            (
                ModuleElement::new(desc.clone(), ModulePayload::Diagonal(xv))?,
                ModuleElement::new(desc.clone(), ModulePayload::Diagonal(yv))?,
            )
        }
        ModuleDescriptor::AlgebraAsModule { dim, .. } => {
            row_split_pair(rng, desc, *dim, *dim)?
        }
        ModuleDescriptor::Rectangular { rows, cols, .. } => {
            row_split_pair(rng, desc, *rows, *cols)?
        }
        ModuleDescriptor::DirectSum { children } => {
            if children.len() >= 2 {
                let split = children.len() / 2;
                let mut x = ModuleElement::zero(desc);
                let mut y = ModuleElement::zero(desc);
                for (j, child) in children.iter().enumerate() {
                    let elem = random_module_element(rng, child);
                    let embedded = embed_child(desc, j, &elem)?;
                    if j < split {
                        x = x.add(&embedded);
                    } else {
                        y = y.add(&embedded);
                    }
                }
                (x, y)
            } else {
                let (cx, cy) = random_orthogonal_pair(rng, &children[0])?;
                (embed_child(desc, 0, &cx)?, embed_child(desc, 0, &cy)?)
            }
        }
    };

    let gram = inner_product(&pair.0, &pair.1)?;
    debug_assert!(
        crate::algebra::operator_norm(&gram) <= 1e-12,
        "constructed pair is not orthogonal"
    );
    Ok(pair)
}

/// Split the row space of a matrix module along a random unitary: x lives in
/// the span of the first k rotated rows, y in the complement, so x* y = 0.
fn row_split_pair(
    rng: &mut SeededRng,
    desc: &ModuleDescriptor,
    rows: usize,
    cols: usize,
) -> Result<(ModuleElement, ModuleElement)> {
    if rows < 2 {
        return Err(Error::NoOrthogonalPairs(
            "matrix module needs at least 2 rows for a nonzero orthogonal pair".into(),
        ));
    }
    let split = rows / 2;
    let q = random_unitary(rng, rows);
    let a = random_cmatrix(rng, split, cols);
    let b = random_cmatrix(rng, rows - split, cols);
    let q_left = CMatrix::from_fn(rows, split, |i, j| q.at(i, j));
    let q_right = CMatrix::from_fn(rows, rows - split, |i, j| q.at(i, split + j));
    let x = ModuleElement::new(desc.clone(), ModulePayload::Matrix(q_left.mul(&a)))?;
    let y = ModuleElement::new(desc.clone(), ModulePayload::Matrix(q_right.mul(&b)))?;
    Ok((x, y))
}

/// Mix of seeds for deriving independent substreams.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;
    use crate::module::is_orthogonal;

    #[test]
    fn same_seed_reproduces() {
        let a = random_cvec(&mut seeded(5), 6);
        let b = random_cvec(&mut seeded(5), 6);
        assert_eq!(a, b);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded(8);
        for n in [2, 3, 6] {
            let u = random_unitary(&mut rng, n);
            assert!(u.unitary_deviation() < 1e-13, "deviation at n={n}");
        }
    }

    #[test]
    fn orthogonal_pairs_are_orthogonal_and_nonzero() {
        let mut rng = seeded(23);
        let descriptors = [
            ModuleDescriptor::Rectangular {
                rows: 4,
                cols: 2,
                flavor: Flavor::CompactOperator,
            },
            ModuleDescriptor::Rectangular {
                rows: 3,
                cols: 3,
                flavor: Flavor::CompactOperator,
            },
            ModuleDescriptor::AlgebraAsModule {
                dim: 3,
                flavor: Flavor::CompactOperator,
            },
            ModuleDescriptor::PairModule {
                dim: 3,
                flavor: Flavor::CompactOperator,
            },
            ModuleDescriptor::DiagonalModule {
                dim: 4,
                flavor: Flavor::HilbertSchmidt,
            },
            ModuleDescriptor::DirectSum {
                children: vec![
                    ModuleDescriptor::Rectangular {
                        rows: 2,
                        cols: 2,
                        flavor: Flavor::CompactOperator,
                    },
                    ModuleDescriptor::PairModule {
                        dim: 2,
                        flavor: Flavor::HilbertSchmidt,
                    },
                ],
            },
        ];
        for desc in &descriptors {
            for _ in 0..5 {
                let (x, y) = random_orthogonal_pair(&mut rng, desc).unwrap();
                assert!(is_orthogonal(&x, &y, 1e-12).unwrap(), "pair not orthogonal on {desc:?}");
                assert!(!x.is_zero(1e-9));
                assert!(!y.is_zero(1e-9));
            }
        }
    }

    #[test]
    fn vector_module_has_no_orthogonal_pairs() {
        let desc = ModuleDescriptor::VectorModule {
            dim: 3,
            flavor: Flavor::CompactOperator,
        };
        assert!(random_orthogonal_pair(&mut seeded(1), &desc).is_err());
    }

    #[test]
    fn diagonal_pairs_have_disjoint_support() {
        let desc = ModuleDescriptor::DiagonalModule {
            dim: 4,
            flavor: Flavor::CompactOperator,
        };
        let (x, y) = random_orthogonal_pair(&mut seeded(3), &desc).unwrap();
        let xs = x.to_flat_vec();
        let ys = y.to_flat_vec();
        for (a, b) in xs.iter().zip(&ys) {
            assert!(a.norm() == 0.0 || b.norm() == 0.0);
        }
    }
}
