//! Orthonormal bases of module instances: construction, the rebase that
//! moves every basis projection onto a distinct diagonal rank-one, expansion
//! of elements, and the series x = sum_i w_i a.

use num_complex::Complex64;

use crate::algebra::{operator_norm, AlgebraElement};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::module::{
    embed_child, inner_product, module_action, ModuleDescriptor, ModuleElement, ModulePayload,
};

/// Basis \{w_i\} with `<w_i, w_j> = 0` for i != j and each `<w_i, w_i>` a
/// minimal (rank-one) projection of the algebra. `block_of[i]` records the
/// algebra block carrying the i-th projection.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    pub descriptor: ModuleDescriptor,
    pub elements: Vec<ModuleElement>,
    pub projections: Vec<AlgebraElement>,
    pub block_of: Vec<usize>,
}

impl OrthonormalBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Indices of basis elements whose projection lives in algebra block `j`.
    pub fn indices_of_block(&self, j: usize) -> Vec<usize> {
        self.block_of
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (b == j).then_some(i))
            .collect()
    }

    /// Checks pairwise orthogonality and the minimal-projection property.
    pub fn verify(&self, tol: f64) -> Result<()> {
        for (i, w) in self.elements.iter().enumerate() {
            let gram = inner_product(w, w)?;
            if gram.sub(&self.projections[i]).max_abs() > tol {
                return Err(Error::BasisPrecondition(format!(
                    "<w_{i}, w_{i}> differs from the recorded projection"
                )));
            }
            let p = &self.projections[i];
            let idem = p.mul(p).sub(p).max_abs();
            let herm = p.sub(&p.adjoint()).max_abs();
            let trace: Complex64 = p.blocks().iter().map(|m| m.trace()).sum();
            if idem > tol || herm > tol || (trace - Complex64::ONE).norm() > tol {
                return Err(Error::BasisPrecondition(format!(
                    "projection {i} is not a minimal projection"
                )));
            }
            for w2 in &self.elements[i + 1..] {
                let cross = inner_product(w, w2)?;
                if operator_norm(&cross) > tol {
                    return Err(Error::BasisPrecondition(format!(
                        "basis elements starting at {i} are not orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Canonical orthonormal basis. Matrix modules use the column-0 matrix
/// units (uniform projection E_00 within each block); the diagonal module
/// gets one basis element per one-dimensional block; direct sums concatenate
/// their children's bases.
pub fn build_orthonormal_basis(desc: &ModuleDescriptor) -> Result<OrthonormalBasis> {
    desc.validate()?;
    let algebra = desc.algebra();
    let mut elements = Vec::new();
    let mut projections = Vec::new();
    let mut block_of = Vec::new();

    match desc {
        ModuleDescriptor::AlgebraAsModule { dim, .. } => {
            for i in 0..*dim {
                elements.push(ModuleElement::new(
                    desc.clone(),
                    ModulePayload::Matrix(CMatrix::unit(*dim, *dim, i, 0)),
                )?);
                projections.push(AlgebraElement::matrix_unit(&algebra, 0, 0, 0));
                block_of.push(0);
            }
        }
        ModuleDescriptor::Rectangular { rows, cols, .. } => {
            for i in 0..*rows {
                elements.push(ModuleElement::new(
                    desc.clone(),
                    ModulePayload::Matrix(CMatrix::unit(*rows, *cols, i, 0)),
                )?);
                projections.push(AlgebraElement::matrix_unit(&algebra, 0, 0, 0));
                block_of.push(0);
            }
        }
        ModuleDescriptor::VectorModule { dim, .. } => {
            let mut v = vec![Complex64::ZERO; *dim];
            v[0] = Complex64::ONE;
            elements.push(ModuleElement::new(desc.clone(), ModulePayload::Vector(v))?);
            projections.push(AlgebraElement::matrix_unit(&algebra, 0, 0, 0));
            block_of.push(0);
        }
        ModuleDescriptor::PairModule { dim, .. } => {
            let mut first = vec![Complex64::ZERO; *dim];
            first[0] = Complex64::ONE;
            let zero = vec![Complex64::ZERO; *dim];
            elements.push(ModuleElement::new(
                desc.clone(),
                ModulePayload::Pair(first.clone(), zero.clone()),
            )?);
            elements.push(ModuleElement::new(
                desc.clone(),
                ModulePayload::Pair(zero, first),
            )?);
            for _ in 0..2 {
                projections.push(AlgebraElement::matrix_unit(&algebra, 0, 0, 0));
                block_of.push(0);
            }
        }
        ModuleDescriptor::DiagonalModule { dim, .. } => {
            for i in 0..*dim {
                let mut v = vec![Complex64::ZERO; *dim];
                v[i] = Complex64::ONE;
                elements.push(ModuleElement::new(
                    desc.clone(),
                    ModulePayload::Diagonal(v),
                )?);
                projections.push(AlgebraElement::matrix_unit(&algebra, i, 0, 0));
                block_of.push(i);
            }
        }
        ModuleDescriptor::DirectSum { children } => {
            let mut block_offset = 0;
            for (j, child) in children.iter().enumerate() {
                let child_basis = build_orthonormal_basis(child)?;
                for (elem, proj) in child_basis
                    .elements
                    .iter()
                    .zip(&child_basis.projections)
                {
                    elements.push(embed_child(desc, j, elem)?);
                    // Lift the child projection into the direct-sum algebra.
                    let mut lifted = AlgebraElement::zero(&algebra);
                    for (b, m) in proj.blocks().iter().enumerate() {
                        lifted = lifted.add(&AlgebraElement::embed_block(
                            &algebra,
                            block_offset + b,
                            m.clone(),
                        )?);
                    }
                    projections.push(lifted);
                    block_of.push(block_offset);
                }
                block_offset += child.algebra().block_count();
            }
        }
    }

    Ok(OrthonormalBasis {
        descriptor: desc.clone(),
        elements,
        projections,
        block_of,
    })
}

const UNIFORMITY_TOL: f64 = 1e-12;

/// Rebase a uniform-projection basis so that `<w_i, w_i>` becomes the i-th
/// diagonal rank-one: w_i = g_i . E_{anchor, i}. Requires a single-block
/// module whose basis projections all equal E_{anchor, anchor}, and a basis
/// no longer than the block dimension.
pub fn rebase_basis(basis: &OrthonormalBasis, anchor: usize) -> Result<OrthonormalBasis> {
    let algebra = basis.descriptor.algebra();
    if algebra.block_count() != 1 {
        return Err(Error::BasisPrecondition(
            "rebase applies to single-block modules; direct sums rebase per child".into(),
        ));
    }
    let n = algebra.blocks[0].dim;
    if anchor >= n {
        return Err(Error::BasisPrecondition(format!(
            "anchor index {anchor} outside the algebra dimension {n}"
        )));
    }
    if basis.len() > n {
        return Err(Error::BasisPrecondition(format!(
            "basis length {} exceeds the algebra dimension {n}",
            basis.len()
        )));
    }
    let expected = AlgebraElement::matrix_unit(&algebra, 0, anchor, anchor);
    for (i, p) in basis.projections.iter().enumerate() {
        if p.sub(&expected).max_abs() > UNIFORMITY_TOL {
            return Err(Error::BasisPrecondition(format!(
                "projection {i} is not the anchor rank-one E_{anchor}{anchor}"
            )));
        }
    }

    let mut elements = Vec::with_capacity(basis.len());
    let mut projections = Vec::with_capacity(basis.len());
    for (i, g) in basis.elements.iter().enumerate() {
        let shift = AlgebraElement::matrix_unit(&algebra, 0, anchor, i);
        elements.push(module_action(g, &shift)?);
        projections.push(AlgebraElement::matrix_unit(&algebra, 0, i, i));
    }
    Ok(OrthonormalBasis {
        descriptor: basis.descriptor.clone(),
        elements,
        projections,
        block_of: basis.block_of.clone(),
    })
}

/// Coefficients `c_i = <w_i, x>` and the reconstruction `sum_i w_i c_i`.
pub fn basis_expand(
    x: &ModuleElement,
    basis: &OrthonormalBasis,
) -> Result<(Vec<AlgebraElement>, ModuleElement)> {
    if x.descriptor() != &basis.descriptor {
        return Err(Error::DescriptorMismatch(
            "element does not belong to the basis module".into(),
        ));
    }
    let mut coefficients = Vec::with_capacity(basis.len());
    let mut reconstruction = ModuleElement::zero(&basis.descriptor);
    for w in &basis.elements {
        let c = inner_product(w, x)?;
        reconstruction = reconstruction.add(&module_action(w, &c)?);
        coefficients.push(c);
    }
    Ok((coefficients, reconstruction))
}

/// The series `s = sum_i w_i a` over a rebased basis. When the basis
/// projections exhaust the diagonal of each block, `<s, s> = a* a`; a
/// shorter basis yields `a* P a` with P the sum of the covered diagonal
/// rank-ones.
pub fn module_series(basis: &OrthonormalBasis, a: &AlgebraElement) -> Result<ModuleElement> {
    let algebra = basis.descriptor.algebra();
    if a.descriptor() != &algebra {
        return Err(Error::DescriptorMismatch(
            "series coefficient does not belong to the module's algebra".into(),
        ));
    }
    // Rebased-form check: each projection must be a diagonal matrix unit,
    // distinct within its block.
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (i, p) in basis.projections.iter().enumerate() {
        let block = basis.block_of[i];
        let m = p.block(block);
        let dim = m.rows();
        let t = (0..dim)
            .max_by(|&r, &s| {
                m.at(r, r)
                    .norm()
                    .partial_cmp(&m.at(s, s).norm())
                    .expect("finite entries")
            })
            .expect("nonempty block");
        let unit = AlgebraElement::matrix_unit(&algebra, block, t, t);
        if p.sub(&unit).max_abs() > UNIFORMITY_TOL {
            return Err(Error::BasisPrecondition(format!(
                "projection {i} is not a diagonal rank-one; rebase the basis first"
            )));
        }
        if seen.contains(&(block, t)) {
            return Err(Error::BasisPrecondition(format!(
                "projection {i} repeats a diagonal slot"
            )));
        }
        seen.push((block, t));
    }

    let mut s = ModuleElement::zero(&basis.descriptor);
    for w in &basis.elements {
        s = s.add(&module_action(w, a)?);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;
    use crate::module::{is_orthogonal, module_norm};
    use crate::rng;

    fn rect(rows: usize, cols: usize) -> ModuleDescriptor {
        ModuleDescriptor::Rectangular {
            rows,
            cols,
            flavor: Flavor::CompactOperator,
        }
    }

    #[test]
    fn canonical_rectangular_basis() {
        let basis = build_orthonormal_basis(&rect(2, 2)).unwrap();
        assert_eq!(basis.len(), 2);
        basis.verify(1e-12).unwrap();
        for p in &basis.projections {
            assert!(p.sub(&AlgebraElement::matrix_unit(
                &basis.descriptor.algebra(),
                0,
                0,
                0
            ))
            .max_abs()
                .eq(&0.0));
        }
    }

    #[test]
    fn vector_module_has_a_single_basis_element() {
        let desc = ModuleDescriptor::VectorModule {
            dim: 4,
            flavor: Flavor::CompactOperator,
        };
        let basis = build_orthonormal_basis(&desc).unwrap();
        assert_eq!(basis.len(), 1);
        basis.verify(1e-12).unwrap();
    }

    #[test]
    fn pair_module_has_two_basis_elements() {
        let desc = ModuleDescriptor::PairModule {
            dim: 3,
            flavor: Flavor::CompactOperator,
        };
        let basis = build_orthonormal_basis(&desc).unwrap();
        assert_eq!(basis.len(), 2);
        basis.verify(1e-12).unwrap();
    }

    #[test]
    fn rebase_turns_column_units_into_diagonal_units() {
        let basis = build_orthonormal_basis(&rect(2, 2)).unwrap();
        let rebased = rebase_basis(&basis, 0).unwrap();
        rebased.verify(1e-12).unwrap();
        let algebra = basis.descriptor.algebra();
        for (i, (w, p)) in rebased
            .elements
            .iter()
            .zip(&rebased.projections)
            .enumerate()
        {
            assert!(p
                .sub(&AlgebraElement::matrix_unit(&algebra, 0, i, i))
                .max_abs()
                < 1e-14);
            // w_i is the (i, i) matrix unit of the payload.
            let flat = w.to_flat_vec();
            let expect = CMatrix::unit(2, 2, i, i);
            for (a, b) in flat.iter().zip(expect.entries()) {
                assert!((a - b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rebase_after_unitary_rotation_keeps_projections() {
        let mut rng = rng::seeded(31);
        let desc = rect(3, 4);
        let base = build_orthonormal_basis(&desc).unwrap();
        // Rotate the basis by a random unitary recombination of elements:
        // g'_i = sum_k u_ki g_k keeps <g'_i, g'_j> = u*_i u_j E_00 ... only
        // unitary mixing with scalar coefficients preserves uniformity, so
        // rotate payload rows instead.
        let u = rng::random_unitary(&mut rng, 3);
        let rotated: Vec<ModuleElement> = (0..3)
            .map(|i| {
                let mut acc = ModuleElement::zero(&desc);
                for k in 0..3 {
                    acc = acc.add(&base.elements[k].scale(u.at(k, i)));
                }
                acc
            })
            .collect();
        let basis = OrthonormalBasis {
            descriptor: desc.clone(),
            elements: rotated,
            projections: base.projections.clone(),
            block_of: base.block_of.clone(),
        };
        basis.verify(1e-12).unwrap();
        let rebased = rebase_basis(&basis, 0).unwrap();
        rebased.verify(1e-12).unwrap();
        let algebra = desc.algebra();
        for (i, p) in rebased.projections.iter().enumerate() {
            let gram = inner_product(&rebased.elements[i], &rebased.elements[i]).unwrap();
            assert!(gram.sub(p).max_abs() < 1e-12);
            assert!(p
                .sub(&AlgebraElement::matrix_unit(&algebra, 0, i, i))
                .max_abs()
                < 1e-12);
        }
    }

    #[test]
    fn rebase_rejects_oversized_basis() {
        let basis = build_orthonormal_basis(&rect(4, 2)).unwrap();
        assert!(rebase_basis(&basis, 0).is_err());
    }

    #[test]
    fn rebase_single_element_basis() {
        let desc = ModuleDescriptor::VectorModule {
            dim: 3,
            flavor: Flavor::CompactOperator,
        };
        let basis = build_orthonormal_basis(&desc).unwrap();
        let rebased = rebase_basis(&basis, 0).unwrap();
        assert_eq!(rebased.len(), 1);
        let gram = inner_product(&rebased.elements[0], &rebased.elements[0]).unwrap();
        let unit = AlgebraElement::matrix_unit(&desc.algebra(), 0, 0, 0);
        assert!(gram.sub(&unit).max_abs() < 1e-14);
    }

    #[test]
    fn expand_reconstructs_basis_elements_and_zero() {
        let desc = rect(3, 3);
        let basis = build_orthonormal_basis(&desc).unwrap();
        for (k, w) in basis.elements.iter().enumerate() {
            let (coeffs, recon) = basis_expand(w, &basis).unwrap();
            for (i, c) in coeffs.iter().enumerate() {
                if i == k {
                    assert!(c.sub(&basis.projections[k]).max_abs() < 1e-14);
                } else {
                    assert!(c.max_abs() < 1e-14);
                }
            }
            assert!(module_norm(&recon.sub(w)) < 1e-12);
        }
        let zero = ModuleElement::zero(&desc);
        let (coeffs, recon) = basis_expand(&zero, &basis).unwrap();
        assert!(coeffs.iter().all(|c| c.max_abs() == 0.0));
        assert!(recon.is_zero(0.0));
    }

    #[test]
    fn expand_reconstructs_random_elements() {
        let mut rng = rng::seeded(77);
        for desc in [
            rect(3, 3),
            ModuleDescriptor::PairModule {
                dim: 4,
                flavor: Flavor::CompactOperator,
            },
            ModuleDescriptor::DiagonalModule {
                dim: 5,
                flavor: Flavor::HilbertSchmidt,
            },
            ModuleDescriptor::DirectSum {
                children: vec![rect(2, 2), rect(3, 2)],
            },
        ] {
            let basis = build_orthonormal_basis(&desc).unwrap();
            let x = rng::random_module_element(&mut rng, &desc);
            let (_, recon) = basis_expand(&x, &basis).unwrap();
            let err = module_norm(&recon.sub(&x));
            assert!(
                err <= 1e-10 * (1.0 + module_norm(&x)),
                "reconstruction residual {err} on {desc:?}"
            );
        }
    }

    #[test]
    fn series_gram_identity_on_square_modules() {
        let mut rng = rng::seeded(57);
        let desc = rect(3, 3);
        let basis = rebase_basis(&build_orthonormal_basis(&desc).unwrap(), 0).unwrap();
        let algebra = desc.algebra();
        for _ in 0..5 {
            let a = rng::random_algebra_element(&mut rng, &algebra);
            let s = module_series(&basis, &a).unwrap();
            let gram = inner_product(&s, &s).unwrap();
            let target = a.adjoint().mul(&a);
            let scale = 1.0 + operator_norm(&a).powi(2);
            assert!(gram.sub(&target).max_abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn series_single_projection_keeps_one_term() {
        let desc = rect(3, 3);
        let basis = rebase_basis(&build_orthonormal_basis(&desc).unwrap(), 0).unwrap();
        let algebra = desc.algebra();
        let a = AlgebraElement::matrix_unit(&algebra, 0, 1, 1);
        let s = module_series(&basis, &a).unwrap();
        let expected = module_action(&basis.elements[1], &a).unwrap();
        assert!(module_norm(&s.sub(&expected)) < 1e-14);

        let zero = AlgebraElement::zero(&algebra);
        assert!(module_series(&basis, &zero).unwrap().is_zero(0.0));
    }

    #[test]
    fn series_requires_rebased_basis() {
        let desc = rect(3, 3);
        let canonical = build_orthonormal_basis(&desc).unwrap();
        let a = AlgebraElement::identity(&desc.algebra());
        assert!(module_series(&canonical, &a).is_err());
    }

    #[test]
    fn rebase_preserves_span() {
        let mut rng = rng::seeded(91);
        let desc = rect(3, 3);
        let basis = build_orthonormal_basis(&desc).unwrap();
        let rebased = rebase_basis(&basis, 0).unwrap();
        let x = rng::random_module_element(&mut rng, &desc);
        for b in [&basis, &rebased] {
            let (_, recon) = basis_expand(&x, b).unwrap();
            assert!(module_norm(&recon.sub(&x)) <= 1e-10 * (1.0 + module_norm(&x)));
        }
    }

    #[test]
    fn projection_absorption() {
        let desc = rect(3, 2);
        let basis = build_orthonormal_basis(&desc).unwrap();
        for (w, p) in basis.elements.iter().zip(&basis.projections) {
            let absorbed = module_action(w, p).unwrap();
            assert!(module_norm(&absorbed.sub(w)) < 1e-12);
        }
    }

    #[test]
    fn orthogonality_is_symmetric_and_scale_stable() {
        let mut rng = rng::seeded(15);
        let desc = rect(4, 3);
        let (x, y) = rng::random_orthogonal_pair(&mut rng, &desc).unwrap();
        assert!(is_orthogonal(&x, &y, 1e-12).unwrap());
        assert!(is_orthogonal(&y, &x, 1e-12).unwrap());
        let lambda = Complex64::new(-2.5, 1.0);
        assert!(is_orthogonal(&x.scale(lambda), &y, 1e-11).unwrap());
    }
}
