//! The constructive pipeline from a black-box orthogonally additive map f to
//! its representation f(x) = T(x) + Phi(<x, x>).
//!
//! Polarization recovers the symmetric biadditive part B from four
//! evaluations of f; the 1, i recombination upgrades B to a sesquilinear
//! form S with eight evaluations. Probing S at basis elements shifted onto
//! each diagonal rank-one yields the values of Phi on every matrix unit of
//! the coefficient algebra; the table determines Phi by linearity.

use num_complex::Complex64;

use crate::algebra::{operator_norm, AlgebraDescriptor, AlgebraElement};
use crate::error::{Error, Result};
use crate::map::{GVector, OaMap};
use crate::matrix::CMatrix;
use crate::module::{
    embed_child, inner_product, module_action, ModuleDescriptor, ModuleElement, ModulePayload,
};
use crate::basis::{build_orthonormal_basis, OrthonormalBasis};
use crate::rng::{self, SeededRng};

const HALF: Complex64 = Complex64::new(0.5, 0.0);
const EIGHTH: Complex64 = Complex64::new(0.125, 0.0);

/// Symmetric biadditive part of f, recovered by the four-point polarization
/// B(x, y) = (f(x+y) + f(-x-y) - f(x-y) - f(-x+y)) / 8.
#[derive(Clone)]
pub struct BForm {
    f: OaMap,
}

impl BForm {
    pub fn eval(&self, x: &ModuleElement, y: &ModuleElement) -> GVector {
        let sum = x.add(y);
        let diff = x.sub(y);
        self.f
            .eval(&sum)
            .add(&self.f.eval(&sum.neg()))
            .sub(&self.f.eval(&diff))
            .sub(&self.f.eval(&diff.neg()))
            .scale(EIGHTH)
    }
}

pub fn polarize(f: &OaMap) -> BForm {
    BForm { f: f.clone() }
}

/// Sesquilinear part of f: S(x, y) = B(x, y) + i B(x, iy), evaluated by the
/// closed eight-point formula (eight evaluations of f per call). Linear in
/// the first argument, conjugate-linear in the second, and S(x, x) equals
/// the even part of f at x whenever f is orthogonally additive.
#[derive(Clone)]
pub struct SForm {
    f: OaMap,
}

impl SForm {
    pub fn eval(&self, x: &ModuleElement, y: &ModuleElement) -> GVector {
        let iy = y.scale(Complex64::I);
        let sum = x.add(y);
        let diff = x.sub(y);
        let sum_i = x.add(&iy);
        let diff_i = x.sub(&iy);
        let f = &self.f;
        let real_part = f
            .eval(&sum)
            .add(&f.eval(&sum.neg()))
            .sub(&f.eval(&diff))
            .sub(&f.eval(&diff.neg()))
            .scale(EIGHTH);
        let imag_part = f
            .eval(&sum_i)
            .add(&f.eval(&sum_i.neg()))
            .sub(&f.eval(&diff_i))
            .sub(&f.eval(&diff_i.neg()))
            .scale(EIGHTH);
        real_part.add(&imag_part.scale(Complex64::I))
    }
}

pub fn sesquilinearize(f: &OaMap) -> SForm {
    SForm { f: f.clone() }
}

/// Values of the linear map Phi on every matrix unit of the algebra,
/// block by block, row-major within a block. Phi extends to the whole
/// algebra by linearity: Phi(a) = sum over units of a_pq Phi(E_pq).
#[derive(Debug, Clone, PartialEq)]
pub struct PhiTable {
    algebra: AlgebraDescriptor,
    codomain_dim: usize,
    values: Vec<Vec<GVector>>,
}

impl PhiTable {
    pub fn zeros(algebra: AlgebraDescriptor, codomain_dim: usize) -> Self {
        let values = algebra
            .blocks
            .iter()
            .map(|b| vec![GVector::zeros(codomain_dim); b.dim * b.dim])
            .collect();
        Self {
            algebra,
            codomain_dim,
            values,
        }
    }

    /// The table of the trace functional: Phi(E_pq) = delta_pq.
    pub fn trace(algebra: AlgebraDescriptor) -> Self {
        let mut table = Self::zeros(algebra.clone(), 1);
        for (j, b) in algebra.blocks.iter().enumerate() {
            for p in 0..b.dim {
                table.set_unit_value(j, p, p, GVector::new(vec![Complex64::ONE]));
            }
        }
        table
    }

    pub fn algebra(&self) -> &AlgebraDescriptor {
        &self.algebra
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn unit_value(&self, block: usize, p: usize, q: usize) -> &GVector {
        let dim = self.algebra.blocks[block].dim;
        &self.values[block][p * dim + q]
    }

    pub fn set_unit_value(&mut self, block: usize, p: usize, q: usize, v: GVector) {
        assert_eq!(v.dim(), self.codomain_dim);
        let dim = self.algebra.blocks[block].dim;
        self.values[block][p * dim + q] = v;
    }

    /// Apply Phi by linearity in the coordinates of `a`.
    pub fn apply(&self, a: &AlgebraElement) -> GVector {
        assert_eq!(a.descriptor(), &self.algebra, "algebra mismatch");
        let mut out = vec![Complex64::ZERO; self.codomain_dim];
        for (j, p, q, coeff) in a.unit_coordinates() {
            if coeff == Complex64::ZERO {
                continue;
            }
            for (slot, v) in out.iter_mut().zip(self.unit_value(j, p, q).entries()) {
                *slot += coeff * v;
            }
        }
        GVector::new(out)
    }

    /// Largest entrywise distance between two tables.
    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.algebra, other.algebra);
        let mut worst = 0.0f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            for (va, vb) in a.iter().zip(b) {
                for (x, y) in va.entries().iter().zip(vb.entries()) {
                    worst = worst.max((x - y).norm());
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .flat_map(|v| v.entries())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// The local functional a -> S(w_k a, w_k) read off one basis element of a
/// uniform-projection basis. Independent of k when S comes from a continuous
/// orthogonally additive map; requires at least two basis elements so the
/// independence is testable.
pub fn phi_local(
    s: &SForm,
    basis: &OrthonormalBasis,
    k: usize,
    a: &AlgebraElement,
) -> Result<GVector> {
    if basis.len() < 2 {
        return Err(Error::OrthogonalDimension {
            required: 2,
            found: basis.len(),
            context: "the local functional needs two basis elements".into(),
        });
    }
    if k >= basis.len() {
        return Err(Error::BasisPrecondition(format!(
            "basis index {k} out of range {}",
            basis.len()
        )));
    }
    for p in &basis.projections {
        if p.sub(&basis.projections[0]).max_abs() > 1e-12 {
            return Err(Error::BasisPrecondition(
                "local functional requires a uniform-projection basis".into(),
            ));
        }
    }
    let w = &basis.elements[k];
    Ok(s.eval(&module_action(w, a)?, w))
}

/// Result of assembling the Phi table from S.
#[derive(Debug, Clone)]
pub struct PhiAssembly {
    pub table: PhiTable,
    /// Largest normalized disagreement between the values read off two
    /// distinct basis elements; a diagnostic for non-orthogonally-additive
    /// input.
    pub k_independence_max: f64,
}

/// Assemble Phi on every matrix unit: for unit E_pq of block j, shift two
/// canonical basis elements of that block onto the diagonal rank-one e_p and
/// read S(w E_pq, w). Every block must carry at least two basis elements.
pub fn phi_assemble(s: &SForm, desc: &ModuleDescriptor) -> Result<PhiAssembly> {
    desc.validate()?;
    let algebra = desc.algebra();
    let basis = build_orthonormal_basis(desc)?;
    let mut table = PhiTable::zeros(algebra.clone(), s.f.codomain_dim());
    let mut k_dev = 0.0f64;

    for (j, block) in algebra.blocks.iter().enumerate() {
        let indices = basis.indices_of_block(j);
        if indices.len() < 2 {
            return Err(Error::OrthogonalDimension {
                required: 2,
                found: indices.len(),
                context: format!("algebra block {j} of the module"),
            });
        }
        let g1 = &basis.elements[indices[0]];
        let g2 = &basis.elements[indices[1]];
        for p in 0..block.dim {
            // Shift the anchor projection E_00 onto E_pp.
            let shift = AlgebraElement::matrix_unit(&algebra, j, 0, p);
            let w1 = module_action(g1, &shift)?;
            let w2 = module_action(g2, &shift)?;
            for q in 0..block.dim {
                let unit = AlgebraElement::matrix_unit(&algebra, j, p, q);
                let v1 = s.eval(&module_action(&w1, &unit)?, &w1);
                let v2 = s.eval(&module_action(&w2, &unit)?, &w2);
                k_dev = k_dev.max(v1.distance(&v2) / (1.0 + v1.norm()));
                table.set_unit_value(j, p, q, v1);
            }
        }
    }

    Ok(PhiAssembly {
        table,
        k_independence_max: k_dev,
    })
}

/// Residual statistics over a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualStats {
    pub count: usize,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

impl ResidualStats {
    fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self {
                count: 0,
                max: None,
                mean: None,
            };
        }
        Self {
            count: values.len(),
            max: Some(values.iter().copied().fold(0.0, f64::max)),
            mean: Some(values.iter().sum::<f64>() / values.len() as f64),
        }
    }
}

/// Extracted decomposition of a map.
#[derive(Clone)]
pub struct Decomposition {
    descriptor: ModuleDescriptor,
    f: OaMap,
    pub phi: PhiTable,
    pub residual: ResidualStats,
    pub k_independence_max: f64,
    pub eval_budget_used: u64,
}

impl Decomposition {
    pub fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    /// The additive part as the exact complement, T(x) = f(x) - Phi(<x, x>).
    /// For an orthogonally additive f this coincides with the odd part; the
    /// sampled gap between the two is exactly `residual`.
    pub fn t_map(&self) -> OaMap {
        let f = self.f.clone();
        let phi = self.phi.clone();
        OaMap::new(f.codomain_dim(), move |x| {
            let gram = inner_product(x, x).expect("element of the decomposed module");
            f.eval(x).sub(&phi.apply(&gram))
        })
    }

    /// The odd part of the decomposed map.
    pub fn t_odd(&self) -> OaMap {
        self.f.odd_part()
    }

    /// Evaluate Phi by linearity of the extracted table.
    pub fn phi_apply(&self, a: &AlgebraElement) -> GVector {
        self.phi.apply(a)
    }
}

impl std::fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Decomposition")
            .field("descriptor", &self.descriptor)
            .field("residual", &self.residual)
            .field("k_independence_max", &self.k_independence_max)
            .field("eval_budget_used", &self.eval_budget_used)
            .finish()
    }
}

/// Relative residual of one sample: |f(x) - T_odd(x) - Phi(<x,x>)| / (1 + |f(x)|).
fn sample_residual(f: &OaMap, phi: &PhiTable, x: &ModuleElement) -> f64 {
    let fx = f.eval(x);
    let fneg = f.eval(&x.neg());
    let odd = fx.sub(&fneg).scale(HALF);
    let gram = inner_product(x, x).expect("sample from the decomposed module");
    let defect = fx.sub(&odd).sub(&phi.apply(&gram));
    defect.norm() / (1.0 + fx.norm())
}

fn sampled_residuals(
    f: &OaMap,
    phi: &PhiTable,
    desc: &ModuleDescriptor,
    samples: usize,
    rng: &mut SeededRng,
) -> ResidualStats {
    let values: Vec<f64> = (0..samples)
        .map(|_| {
            let x = rng::random_module_element(rng, desc);
            sample_residual(f, phi, &x)
        })
        .collect();
    ResidualStats::from_values(&values)
}

/// Extract the decomposition of `f` over the module `desc`. Each algebra
/// block must carry orthogonal dimension at least 2. Large residuals are
/// reported, not raised: with finitely many evaluations a non-orthogonally-
/// additive input is only detectable after the fact.
pub fn decompose(
    f: &OaMap,
    desc: &ModuleDescriptor,
    samples: usize,
    rng: &mut SeededRng,
) -> Result<Decomposition> {
    desc.validate()?;
    let start = f.eval_count();
    let s = sesquilinearize(f);
    let assembly = phi_assemble(&s, desc)?;
    let residual = sampled_residuals(f, &assembly.table, desc, samples, rng);
    Ok(Decomposition {
        descriptor: desc.clone(),
        f: f.clone(),
        phi: assembly.table,
        residual,
        k_independence_max: assembly.k_independence_max,
        eval_budget_used: f.eval_count() - start,
    })
}

/// Decompose a direct sum block by block: restrict f to each child through
/// the zero-padded embedding, extract the child tables, concatenate, and
/// judge the result by the residual over full-module samples.
pub fn blockwise_decompose(
    f: &OaMap,
    desc: &ModuleDescriptor,
    samples: usize,
    rng: &mut SeededRng,
) -> Result<Decomposition> {
    let children = desc.children().ok_or_else(|| {
        Error::DescriptorMismatch("blockwise decomposition requires a direct sum".into())
    })?;
    desc.validate()?;
    let algebra = desc.algebra();
    let start = f.eval_count();

    let mut table = PhiTable::zeros(algebra.clone(), f.codomain_dim());
    let mut k_dev = 0.0f64;
    let mut block_offset = 0;
    for (j, child) in children.iter().enumerate() {
        let parent = desc.clone();
        let f_outer = f.clone();
        let child_index = j;
        let restricted = OaMap::new(f.codomain_dim(), move |xj| {
            let embedded =
                embed_child(&parent, child_index, xj).expect("child element fits its slot");
            f_outer.eval(&embedded)
        });
        let part = decompose(&restricted, child, 0, rng)?;
        k_dev = k_dev.max(part.k_independence_max);
        let child_algebra = child.algebra();
        for (b, block) in child_algebra.blocks.iter().enumerate() {
            for p in 0..block.dim {
                for q in 0..block.dim {
                    table.set_unit_value(
                        block_offset + b,
                        p,
                        q,
                        part.phi.unit_value(b, p, q).clone(),
                    );
                }
            }
        }
        block_offset += child_algebra.block_count();
    }

    let residual = sampled_residuals(f, &table, desc, samples, rng);
    Ok(Decomposition {
        descriptor: desc.clone(),
        f: f.clone(),
        phi: table,
        residual,
        k_independence_max: k_dev,
        eval_budget_used: f.eval_count() - start,
    })
}

/// Residual statistics of a decomposition over caller-chosen samples.
pub fn residual_stats(f: &OaMap, d: &Decomposition, xs: &[ModuleElement]) -> ResidualStats {
    let values: Vec<f64> = xs.iter().map(|x| sample_residual(f, &d.phi, x)).collect();
    ResidualStats::from_values(&values)
}

const UNITARY_TOL: f64 = 1e-10;

/// A rectangular module doubled along its row space: the inner module V
/// embeds as the top row block of the ambient module, and the morphism
/// phi(x) = U x lands in the complementary bottom block, so phi(V) sits in
/// the orthogonal complement of V.
#[derive(Debug, Clone)]
pub struct DoubledModule {
    inner: ModuleDescriptor,
    ambient: ModuleDescriptor,
    unitary: CMatrix,
}

impl DoubledModule {
    pub fn new(inner: &ModuleDescriptor, unitary: CMatrix) -> Result<Self> {
        let (rows, cols, flavor) = match inner {
            ModuleDescriptor::Rectangular { rows, cols, flavor } => (*rows, *cols, *flavor),
            _ => {
                return Err(Error::DescriptorMismatch(
                    "doubling is defined for rectangular modules".into(),
                ))
            }
        };
        if unitary.rows() != rows || unitary.cols() != rows {
            return Err(Error::DimensionMismatch(format!(
                "doubling unitary must be {rows}x{rows}, got {}x{}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        let deviation = unitary.unitary_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARY_TOL,
            });
        }
        Ok(Self {
            inner: inner.clone(),
            ambient: ModuleDescriptor::Rectangular {
                rows: 2 * rows,
                cols,
                flavor,
            },
            unitary,
        })
    }

    pub fn inner(&self) -> &ModuleDescriptor {
        &self.inner
    }

    pub fn ambient(&self) -> &ModuleDescriptor {
        &self.ambient
    }

    fn payload(x: &ModuleElement) -> &CMatrix {
        match x.payload() {
            ModulePayload::Matrix(m) => m,
            _ => panic!("rectangular payload expected"),
        }
    }

    /// Identity embedding of V into the top rows of the ambient module.
    pub fn embed(&self, x: &ModuleElement) -> Result<ModuleElement> {
        self.place(x, false)
    }

    /// The morphism phi(x) = U x into the bottom rows.
    pub fn morphism(&self, x: &ModuleElement) -> Result<ModuleElement> {
        self.place(x, true)
    }

    fn place(&self, x: &ModuleElement, bottom: bool) -> Result<ModuleElement> {
        if x.descriptor() != &self.inner {
            return Err(Error::DescriptorMismatch(
                "element does not belong to the doubled inner module".into(),
            ));
        }
        let m = if bottom {
            self.unitary.mul(Self::payload(x))
        } else {
            Self::payload(x).clone()
        };
        let rows = m.rows();
        let offset = if bottom { rows } else { 0 };
        let stacked = CMatrix::from_fn(2 * rows, m.cols(), |i, j| {
            if i >= offset && i < offset + rows {
                m.at(i - offset, j)
            } else {
                Complex64::ZERO
            }
        });
        ModuleElement::new(self.ambient.clone(), ModulePayload::Matrix(stacked))
    }

    /// Verify on random elements that phi preserves inner products, that
    /// phi(V) is orthogonal to V, and that (phi + lambda id)(V) is orthogonal
    /// to (phi - lambda id)(V) for lambda in {1, i}.
    pub fn verify_relations(&self, rng: &mut SeededRng, trials: usize) -> Result<DoublingReport> {
        let mut morphism_dev = 0.0f64;
        let mut perp_dev = 0.0f64;
        let mut mixed_dev = 0.0f64;
        for _ in 0..trials {
            let x = rng::random_module_element(rng, &self.inner);
            let y = rng::random_module_element(rng, &self.inner);
            let phix = self.morphism(&x)?;
            let phiy = self.morphism(&y)?;
            let ix = self.embed(&x)?;
            let iy = self.embed(&y)?;

            let kept = inner_product(&phix, &phiy)?;
            let original = inner_product(&x, &y)?;
            morphism_dev = morphism_dev.max(kept.sub(&original).max_abs());

            perp_dev = perp_dev.max(operator_norm(&inner_product(&ix, &phiy)?));

            for lambda in [Complex64::ONE, Complex64::I] {
                let plus = phix.add(&ix.scale(lambda));
                let minus = phiy.sub(&iy.scale(lambda));
                mixed_dev = mixed_dev.max(operator_norm(&inner_product(&plus, &minus)?));
            }
        }
        Ok(DoublingReport {
            trials,
            morphism_dev,
            perp_dev,
            mixed_dev,
        })
    }
}

/// Maximal deviations observed while verifying the doubling relations.
#[derive(Debug, Clone, Copy)]
pub struct DoublingReport {
    pub trials: usize,
    pub morphism_dev: f64,
    pub perp_dev: f64,
    pub mixed_dev: f64,
}

impl DoublingReport {
    pub fn all_within(&self, tol: f64) -> bool {
        self.morphism_dev <= tol && self.perp_dev <= tol && self.mixed_dev <= tol
    }
}

/// Build the doubled module and verify its orthogonality relations.
pub fn doubling_construction(
    inner: &ModuleDescriptor,
    unitary: CMatrix,
    rng: &mut SeededRng,
    trials: usize,
) -> Result<(DoubledModule, DoublingReport)> {
    let doubled = DoubledModule::new(inner, unitary)?;
    let report = doubled.verify_relations(rng, trials)?;
    Ok((doubled, report))
}
