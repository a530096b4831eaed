//! Black-box maps from a module into a complex Euclidean codomain, with an
//! exact evaluation counter.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_complex::Complex64;

use crate::module::ModuleElement;

/// Vector in the codomain, Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct GVector(Vec<Complex64>);

impl GVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::ZERO; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self(self.0.iter().map(|a| a * lambda).collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

type EvalFn = dyn Fn(&ModuleElement) -> GVector + Send + Sync;

struct OaMapInner {
    codomain_dim: usize,
    eval_count: AtomicU64,
    eval: Box<EvalFn>,
}

/// Black-box map f from a module into C^d. Cloning shares the underlying
/// closure and its evaluation counter, so derived maps (odd part, even part,
/// polarizations) bill their evaluations to the original.
#[derive(Clone)]
pub struct OaMap {
    inner: Arc<OaMapInner>,
}

impl OaMap {
    pub fn new(
        codomain_dim: usize,
        eval: impl Fn(&ModuleElement) -> GVector + Send + Sync + 'static,
    ) -> Self {
        Self {
            inner: Arc::new(OaMapInner {
                codomain_dim,
                eval_count: AtomicU64::new(0),
                eval: Box::new(eval),
            }),
        }
    }

    pub fn codomain_dim(&self) -> usize {
        self.inner.codomain_dim
    }

    /// Evaluate, counting the call.
    pub fn eval(&self, x: &ModuleElement) -> GVector {
        self.inner.eval_count.fetch_add(1, Ordering::Relaxed);
        let out = (self.inner.eval)(x);
        assert_eq!(
            out.dim(),
            self.inner.codomain_dim,
            "map produced a vector of the wrong codomain dimension"
        );
        debug_assert!(out.is_finite(), "map produced a non-finite value");
        out
    }

    /// Evaluations of this map so far (derived maps count through to the
    /// map they wrap).
    pub fn eval_count(&self) -> u64 {
        self.inner.eval_count.load(Ordering::Relaxed)
    }

    /// Odd part x -> (f(x) - f(-x)) / 2; two underlying evaluations per call.
    pub fn odd_part(&self) -> OaMap {
        let f = self.clone();
        OaMap::new(self.codomain_dim(), move |x| {
            f.eval(x).sub(&f.eval(&x.neg())).scale(Complex64::new(0.5, 0.0))
        })
    }

    /// Even part x -> (f(x) + f(-x)) / 2.
    pub fn even_part(&self) -> OaMap {
        let f = self.clone();
        OaMap::new(self.codomain_dim(), move |x| {
            f.eval(x).add(&f.eval(&x.neg())).scale(Complex64::new(0.5, 0.0))
        })
    }
}

impl std::fmt::Debug for OaMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OaMap")
            .field("codomain_dim", &self.inner.codomain_dim)
            .field("eval_count", &self.eval_count())
            .finish()
    }
}
