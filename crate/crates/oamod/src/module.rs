//! Concrete Hilbert module instances over matrix algebras.
//!
//! Every instance carries an algebra-valued inner product that is
//! conjugate-linear in the first slot, linear in the second, and satisfies
//! `<x, y a> = <x, y> a` together with `<x, y>* = <y, x>`.
//!
//! The vector module deserves a note. The textbook presentation of a Hilbert
//! space H as a module over its compact operators pairs vectors through a
//! rank-one operator. Read literally on column vectors with the standard
//! scalar action, no compatible right action of M_n exists (the required
//! identity `(eta . a) (x) xi = eta (x) (a* xi)` forces the action to depend
//! on xi). The realizable form treats the payload as a row vector: the inner
//! product is `<x, y>_{ij} = conj(x_i) y_j` (the rank-one pairing written in
//! conjugate coordinates) and the action is `x . a = a^T x`. The module
//! axioms, which are the substance, are enforced by tests; the pair module
//! applies the same convention componentwise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{operator_norm, AlgebraDescriptor, AlgebraElement, Flavor};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Shape of a Hilbert module instance.
///
/// Single-block kinds sit over one matrix block M_n; `DirectSum` pairs child
/// `j` with block `j` of the direct-sum algebra. `DiagonalModule` is the
/// commutative special case: the diagonal algebra acting on itself, which is
/// a direct sum of `dim` one-dimensional blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDescriptor {
    /// The algebra M_dim as a module over itself, `<x, y> = x* y`.
    AlgebraAsModule { dim: usize, flavor: Flavor },
    /// Rectangular matrices rows x cols over M_cols, `<x, y> = x* y`.
    Rectangular {
        rows: usize,
        cols: usize,
        flavor: Flavor,
    },
    /// A Hilbert space of dimension dim over M_dim via the rank-one pairing.
    VectorModule { dim: usize, flavor: Flavor },
    /// Two copies of the vector module, `<x, y> = sum of componentwise pairings`.
    PairModule { dim: usize, flavor: Flavor },
    /// The diagonal algebra acting on itself; dim one-dimensional blocks.
    DiagonalModule { dim: usize, flavor: Flavor },
    /// Outer direct sum; children must be single-block kinds.
    DirectSum { children: Vec<ModuleDescriptor> },
}

impl ModuleDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::AlgebraAsModule { dim, .. }
            | Self::VectorModule { dim, .. }
            | Self::PairModule { dim, .. }
            | Self::DiagonalModule { dim, .. } => {
                if *dim == 0 {
                    return Err(Error::InvalidConfig("module dimension 0".into()));
                }
            }
            Self::Rectangular { rows, cols, .. } => {
                if *rows == 0 || *cols == 0 {
                    return Err(Error::InvalidConfig("rectangular module with a zero side".into()));
                }
            }
            Self::DirectSum { children } => {
                if children.is_empty() {
                    return Err(Error::InvalidConfig("direct sum with no children".into()));
                }
                for child in children {
                    child.validate()?;
                    if matches!(
                        child,
                        Self::DirectSum { .. } | Self::DiagonalModule { .. }
                    ) {
                        return Err(Error::InvalidConfig(
                            "direct sum children must be single-block module kinds".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The coefficient algebra paired with this module.
    pub fn algebra(&self) -> AlgebraDescriptor {
        match self {
            Self::AlgebraAsModule { dim, flavor } | Self::VectorModule { dim, flavor } => {
                AlgebraDescriptor::simple(*dim, *flavor)
            }
            Self::Rectangular { cols, flavor, .. } => AlgebraDescriptor::simple(*cols, *flavor),
            Self::PairModule { dim, flavor } => AlgebraDescriptor::simple(*dim, *flavor),
            Self::DiagonalModule { dim, flavor } => {
                AlgebraDescriptor::uniform(&vec![1; *dim], *flavor)
            }
            Self::DirectSum { children } => AlgebraDescriptor {
                blocks: children
                    .iter()
                    .flat_map(|c| c.algebra().blocks)
                    .collect(),
            },
        }
    }

    /// Orthogonal dimension over each algebra block, in block order.
    pub fn block_dimensions(&self) -> Vec<usize> {
        match self {
            Self::AlgebraAsModule { dim, .. } => vec![*dim],
            Self::Rectangular { rows, .. } => vec![*rows],
            Self::VectorModule { .. } => vec![1],
            Self::PairModule { .. } => vec![2],
            Self::DiagonalModule { dim, .. } => vec![1; *dim],
            Self::DirectSum { children } => children
                .iter()
                .flat_map(|c| c.block_dimensions())
                .collect(),
        }
    }

    /// Total orthonormal basis length.
    pub fn orthogonal_dimension(&self) -> usize {
        self.block_dimensions().iter().sum()
    }

    /// Number of complex coordinates in a payload.
    pub fn flat_dim(&self) -> usize {
        match self {
            Self::AlgebraAsModule { dim, .. } => dim * dim,
            Self::Rectangular { rows, cols, .. } => rows * cols,
            Self::VectorModule { dim, .. } | Self::DiagonalModule { dim, .. } => *dim,
            Self::PairModule { dim, .. } => 2 * dim,
            Self::DirectSum { children } => children.iter().map(|c| c.flat_dim()).sum(),
        }
    }

    /// Whether nonzero orthogonal pairs exist.
    pub fn supports_orthogonal_pairs(&self) -> bool {
        match self {
            Self::VectorModule { .. } => false,
            Self::AlgebraAsModule { dim, .. } => *dim >= 2,
            Self::Rectangular { rows, .. } => *rows >= 2,
            Self::PairModule { .. } => true,
            Self::DiagonalModule { dim, .. } => *dim >= 2,
            Self::DirectSum { children } => {
                children.len() >= 2 || children[0].supports_orthogonal_pairs()
            }
        }
    }

    pub fn children(&self) -> Option<&[ModuleDescriptor]> {
        match self {
            Self::DirectSum { children } => Some(children),
            _ => None,
        }
    }
}

/// Kind-specific payload of a module element.
#[derive(Debug, Clone, PartialEq)]
pub enum ModulePayload {
    Matrix(CMatrix),
    Vector(Vec<Complex64>),
    Pair(Vec<Complex64>, Vec<Complex64>),
    Diagonal(Vec<Complex64>),
    Children(Vec<ModuleElement>),
}

/// Element of a concrete module instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleElement {
    descriptor: ModuleDescriptor,
    payload: ModulePayload,
}

impl ModuleElement {
    pub fn new(descriptor: ModuleDescriptor, payload: ModulePayload) -> Result<Self> {
        let ok = match (&descriptor, &payload) {
            (ModuleDescriptor::AlgebraAsModule { dim, .. }, ModulePayload::Matrix(m)) => {
                m.rows() == *dim && m.cols() == *dim
            }
            (ModuleDescriptor::Rectangular { rows, cols, .. }, ModulePayload::Matrix(m)) => {
                m.rows() == *rows && m.cols() == *cols
            }
            (ModuleDescriptor::VectorModule { dim, .. }, ModulePayload::Vector(v)) => {
                v.len() == *dim
            }
            (ModuleDescriptor::PairModule { dim, .. }, ModulePayload::Pair(a, b)) => {
                a.len() == *dim && b.len() == *dim
            }
            (ModuleDescriptor::DiagonalModule { dim, .. }, ModulePayload::Diagonal(v)) => {
                v.len() == *dim
            }
            (ModuleDescriptor::DirectSum { children }, ModulePayload::Children(elems)) => {
                children.len() == elems.len()
                    && children
                        .iter()
                        .zip(elems)
                        .all(|(c, e)| c == &e.descriptor)
            }
            _ => false,
        };
        if !ok {
            return Err(Error::DescriptorMismatch(
                "payload shape does not match the module descriptor".into(),
            ));
        }
        Ok(Self {
            descriptor,
            payload,
        })
    }

    pub fn zero(descriptor: &ModuleDescriptor) -> Self {
        let payload = match descriptor {
            ModuleDescriptor::AlgebraAsModule { dim, .. } => {
                ModulePayload::Matrix(CMatrix::zeros(*dim, *dim))
            }
            ModuleDescriptor::Rectangular { rows, cols, .. } => {
                ModulePayload::Matrix(CMatrix::zeros(*rows, *cols))
            }
            ModuleDescriptor::VectorModule { dim, .. } => {
                ModulePayload::Vector(vec![Complex64::ZERO; *dim])
            }
            ModuleDescriptor::PairModule { dim, .. } => {
                ModulePayload::Pair(vec![Complex64::ZERO; *dim], vec![Complex64::ZERO; *dim])
            }
            ModuleDescriptor::DiagonalModule { dim, .. } => {
                ModulePayload::Diagonal(vec![Complex64::ZERO; *dim])
            }
            ModuleDescriptor::DirectSum { children } => {
                ModulePayload::Children(children.iter().map(Self::zero).collect())
            }
        };
        Self {
            descriptor: descriptor.clone(),
            payload,
        }
    }

    pub fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    pub fn payload(&self) -> &ModulePayload {
        &self.payload
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.descriptor, other.descriptor, "module descriptors differ");
        let payload = match (&self.payload, &other.payload) {
            (ModulePayload::Matrix(a), ModulePayload::Matrix(b)) => {
                ModulePayload::Matrix(a.add(b))
            }
            (ModulePayload::Vector(a), ModulePayload::Vector(b)) => {
                ModulePayload::Vector(zip_add(a, b))
            }
            (ModulePayload::Pair(a1, a2), ModulePayload::Pair(b1, b2)) => {
                ModulePayload::Pair(zip_add(a1, b1), zip_add(a2, b2))
            }
            (ModulePayload::Diagonal(a), ModulePayload::Diagonal(b)) => {
                ModulePayload::Diagonal(zip_add(a, b))
            }
            (ModulePayload::Children(a), ModulePayload::Children(b)) => {
                ModulePayload::Children(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            }
            _ => unreachable!("payload kinds verified by the descriptor"),
        };
        Self {
            descriptor: self.descriptor.clone(),
            payload,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-Complex64::ONE)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        let payload = match &self.payload {
            ModulePayload::Matrix(m) => ModulePayload::Matrix(m.scale(lambda)),
            ModulePayload::Vector(v) => ModulePayload::Vector(scale_vec(v, lambda)),
            ModulePayload::Pair(a, b) => {
                ModulePayload::Pair(scale_vec(a, lambda), scale_vec(b, lambda))
            }
            ModulePayload::Diagonal(v) => ModulePayload::Diagonal(scale_vec(v, lambda)),
            ModulePayload::Children(elems) => {
                ModulePayload::Children(elems.iter().map(|e| e.scale(lambda)).collect())
            }
        };
        Self {
            descriptor: self.descriptor.clone(),
            payload,
        }
    }

    /// Payload coordinates flattened row-major, children in order.
    pub fn to_flat_vec(&self) -> Vec<Complex64> {
        match &self.payload {
            ModulePayload::Matrix(m) => m.entries().to_vec(),
            ModulePayload::Vector(v) | ModulePayload::Diagonal(v) => v.clone(),
            ModulePayload::Pair(a, b) => a.iter().chain(b).copied().collect(),
            ModulePayload::Children(elems) => {
                elems.iter().flat_map(|e| e.to_flat_vec()).collect()
            }
        }
    }

    /// Child of a direct-sum element.
    pub fn child(&self, index: usize) -> &ModuleElement {
        match &self.payload {
            ModulePayload::Children(elems) => &elems[index],
            _ => panic!("child() requires a direct-sum element"),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.to_flat_vec().iter().all(|z| z.norm() <= tol)
    }
}

fn zip_add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale_vec(v: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    v.iter().map(|x| x * lambda).collect()
}

/// Embed a child element into position `index` of a direct-sum module,
/// zeros elsewhere.
pub fn embed_child(
    parent: &ModuleDescriptor,
    index: usize,
    elem: &ModuleElement,
) -> Result<ModuleElement> {
    let children = parent.children().ok_or_else(|| {
        Error::DescriptorMismatch("embed_child requires a direct-sum parent".into())
    })?;
    if index >= children.len() {
        return Err(Error::DescriptorMismatch(format!(
            "child index {} out of range {}",
            index,
            children.len()
        )));
    }
    if &children[index] != elem.descriptor() {
        return Err(Error::DescriptorMismatch(
            "embedded element does not match the child descriptor".into(),
        ));
    }
    let mut elems: Vec<ModuleElement> = children.iter().map(ModuleElement::zero).collect();
    elems[index] = elem.clone();
    ModuleElement::new(parent.clone(), ModulePayload::Children(elems))
}

/// Generalized inner product, conjugate-linear in `x`, linear in `y`.
pub fn inner_product(x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement> {
    if x.descriptor() != y.descriptor() {
        return Err(Error::DescriptorMismatch(
            "inner product requires elements of the same module".into(),
        ));
    }
    let algebra = x.descriptor().algebra();
    match (x.payload(), y.payload()) {
        (ModulePayload::Matrix(a), ModulePayload::Matrix(b)) => {
            AlgebraElement::new(algebra, vec![a.adjoint().mul(b)])
        }
        (ModulePayload::Vector(a), ModulePayload::Vector(b)) => {
            AlgebraElement::new(algebra, vec![row_pairing(a, b)])
        }
        (ModulePayload::Pair(a1, a2), ModulePayload::Pair(b1, b2)) => {
            let m = row_pairing(a1, b1).add(&row_pairing(a2, b2));
            AlgebraElement::new(algebra, vec![m])
        }
        (ModulePayload::Diagonal(a), ModulePayload::Diagonal(b)) => {
            let blocks = a
                .iter()
                .zip(b)
                .map(|(p, q)| {
                    CMatrix::new(1, 1, vec![p.conj() * q]).expect("1x1 block")
                })
                .collect();
            AlgebraElement::new(algebra, blocks)
        }
        (ModulePayload::Children(xs), ModulePayload::Children(ys)) => {
            let mut blocks = Vec::new();
            for (cx, cy) in xs.iter().zip(ys) {
                blocks.extend(inner_product(cx, cy)?.blocks().to_vec());
            }
            AlgebraElement::new(algebra, blocks)
        }
        _ => unreachable!("payload kinds verified by the descriptor"),
    }
}

/// Matrix with (i, j) entry conj(x_i) y_j: the row-vector pairing x* y.
fn row_pairing(x: &[Complex64], y: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(x.len(), x.len(), |i, j| x[i].conj() * y[j])
}

/// Right action of the algebra on the module.
pub fn module_action(x: &ModuleElement, a: &AlgebraElement) -> Result<ModuleElement> {
    let algebra = x.descriptor().algebra();
    if a.descriptor() != &algebra {
        return Err(Error::DescriptorMismatch(
            "acting element does not belong to the module's algebra".into(),
        ));
    }
    let payload = match x.payload() {
        ModulePayload::Matrix(m) => ModulePayload::Matrix(m.mul(a.block(0))),
        ModulePayload::Vector(v) => ModulePayload::Vector(row_action(v, a.block(0))),
        ModulePayload::Pair(v1, v2) => {
            ModulePayload::Pair(row_action(v1, a.block(0)), row_action(v2, a.block(0)))
        }
        ModulePayload::Diagonal(v) => ModulePayload::Diagonal(
            v.iter()
                .enumerate()
                .map(|(i, z)| z * a.block(i).at(0, 0))
                .collect(),
        ),
        ModulePayload::Children(elems) => {
            let mut out = Vec::with_capacity(elems.len());
            let mut offset = 0;
            for elem in elems {
                let child_algebra = elem.descriptor().algebra();
                let width = child_algebra.block_count();
                let blocks = a.blocks()[offset..offset + width].to_vec();
                let child_a = AlgebraElement::new(child_algebra, blocks)?;
                out.push(module_action(elem, &child_a)?);
                offset += width;
            }
            ModulePayload::Children(out)
        }
    };
    ModuleElement::new(x.descriptor().clone(), payload)
}

/// Row vector times matrix: (x . a)_j = sum_i x_i a_ij. Zero coordinates
/// are skipped, so actions on sparse elements (basis elements, matrix
/// units) stay linear in the dimension.
fn row_action(x: &[Complex64], a: &CMatrix) -> Vec<Complex64> {
    let n = x.len();
    let mut out = vec![Complex64::ZERO; n];
    for (i, &xi) in x.iter().enumerate() {
        if xi == Complex64::ZERO {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += xi * a.at(i, j);
        }
    }
    out
}

/// Module norm `|<x, x>|^(1/2)` under the algebra's flavor norm.
pub fn module_norm(x: &ModuleElement) -> f64 {
    let gram = inner_product(x, x).expect("inner product with self");
    operator_norm(&gram).sqrt()
}

/// True when the flavor norm of `<x, y>` is at most `tol`.
pub fn is_orthogonal(x: &ModuleElement, y: &ModuleElement, tol: f64) -> Result<bool> {
    let g = inner_product(x, y)?;
    Ok(operator_norm(&g) <= tol)
}
