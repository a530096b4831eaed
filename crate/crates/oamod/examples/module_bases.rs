//! Module instances and their orthonormal bases: inner products, the
//! diagonal rebase, expansion of elements, and the series identity
//! <sum w_i a, sum w_i a> = a* a.
//!
//! Run with: cargo run --example module_bases

use oamod::algebra::{operator_norm, Flavor};
use oamod::basis::{basis_expand, build_orthonormal_basis, module_series, rebase_basis};
use oamod::module::{inner_product, module_norm, ModuleDescriptor};
use oamod::rng;

fn main() {
    let mut rng = rng::seeded(11);

    let modules = [
        ModuleDescriptor::Rectangular {
            rows: 3,
            cols: 3,
            flavor: Flavor::CompactOperator,
        },
        ModuleDescriptor::VectorModule {
            dim: 4,
            flavor: Flavor::CompactOperator,
        },
        ModuleDescriptor::PairModule {
            dim: 4,
            flavor: Flavor::CompactOperator,
        },
        ModuleDescriptor::DiagonalModule {
            dim: 4,
            flavor: Flavor::CompactOperator,
        },
    ];
    println!("orthogonal dimensions:");
    for desc in &modules {
        let basis = build_orthonormal_basis(desc).unwrap();
        println!(
            "  {:<18} dim_A = {}",
            kind_name(desc),
            basis.len()
        );
    }

    // Expansion against the canonical basis.
    let desc = modules[0].clone();
    let basis = build_orthonormal_basis(&desc).unwrap();
    let x = rng::random_module_element(&mut rng, &desc);
    let (coefficients, reconstruction) = basis_expand(&x, &basis).unwrap();
    println!("\nexpansion of a random 3x3 element:");
    println!("  {} coefficients <w_i, x>", coefficients.len());
    println!(
        "  reconstruction residual {:.2e}",
        module_norm(&reconstruction.sub(&x))
    );

    // Rebase: all projections uniform E_00 become the distinct diagonal
    // rank-ones E_ii.
    let rebased = rebase_basis(&basis, 0).unwrap();
    println!("\nrebased basis projections:");
    for (i, w) in rebased.elements.iter().enumerate() {
        let gram = inner_product(w, w).unwrap();
        let diag: Vec<f64> = (0..3).map(|k| gram.block(0).at(k, k).re).collect();
        println!("  <w_{i}, w_{i}> has diagonal {diag:?}");
    }

    // The series s = sum w_i a satisfies <s, s> = a* a on a square module.
    let a = rng::random_algebra_element(&mut rng, &desc.algebra());
    let s = module_series(&rebased, &a).unwrap();
    let gram = inner_product(&s, &s).unwrap();
    let defect = gram.sub(&a.adjoint().mul(&a)).max_abs();
    println!("\nseries identity:");
    println!("  || <sum w_i a, sum w_i a> - a*a || = {defect:.2e}");
    println!("  ||a|| = {:.4}, ||s||_W = {:.4}", operator_norm(&a), module_norm(&s));

    // Constructed orthogonal pairs are orthogonal to rounding.
    let (p, q) = rng::random_orthogonal_pair(&mut rng, &desc).unwrap();
    let cross = operator_norm(&inner_product(&p, &q).unwrap());
    println!("\nconstructed orthogonal pair: ||<x, y>|| = {cross:.2e}");
}

fn kind_name(desc: &ModuleDescriptor) -> &'static str {
    match desc {
        ModuleDescriptor::AlgebraAsModule { .. } => "algebra_as_module",
        ModuleDescriptor::Rectangular { .. } => "rectangular",
        ModuleDescriptor::VectorModule { .. } => "vector_module",
        ModuleDescriptor::PairModule { .. } => "pair_module",
        ModuleDescriptor::DiagonalModule { .. } => "diagonal_module",
        ModuleDescriptor::DirectSum { .. } => "direct_sum",
    }
}
