//! Tour of the algebra layer: rank-one operators, flavor norms, positivity,
//! the four-positive split, and the Jacobi eigensolver.
//!
//! Run with: cargo run --example algebra_basics

use num_complex::Complex64;
use oamod::algebra::{
    four_positive_parts, is_positive, operator_norm, AlgebraDescriptor, AlgebraElement, Flavor,
};
use oamod::eigen::hermitian_eig;
use oamod::matrix::{rank_one, CMatrix};
use oamod::rng;

fn main() {
    let mut rng = rng::seeded(7);

    // Rank-one operators: (xi (x) eta) nu = (nu, eta) xi.
    let xi = rng::random_cvec(&mut rng, 3);
    let eta = rng::random_cvec(&mut rng, 3);
    let op = rank_one(&xi, &eta).unwrap();
    println!("rank-one operator from two random vectors:");
    println!("  frobenius norm  {:.6}", op.frobenius_norm());
    println!(
        "  adjoint swaps factors: ||(xi(x)eta)* - eta(x)xi|| = {:.2e}",
        op.adjoint()
            .sub(&rank_one(&eta, &xi).unwrap())
            .frobenius_norm()
    );

    // Norms depend on the flavor: spectral versus Hilbert-Schmidt.
    let d = CMatrix::diagonal(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]);
    let compact = AlgebraElement::new(
        AlgebraDescriptor::simple(2, Flavor::CompactOperator),
        vec![d.clone()],
    )
    .unwrap();
    let hs = AlgebraElement::new(
        AlgebraDescriptor::simple(2, Flavor::HilbertSchmidt),
        vec![d],
    )
    .unwrap();
    println!("\ndiag(3, 4i):");
    println!("  compact-operator norm  {:.1}", operator_norm(&compact));
    println!("  hilbert-schmidt norm   {:.1}", operator_norm(&hs));

    // C*-identity on a random element.
    let desc = AlgebraDescriptor::uniform(&[3, 2], Flavor::CompactOperator);
    let a = rng::random_algebra_element(&mut rng, &desc);
    let norm = operator_norm(&a);
    let gram_norm = operator_norm(&a.adjoint().mul(&a));
    println!("\nC*-identity on a random two-block element:");
    println!(
        "  | ||a*a|| - ||a||^2 | = {:.2e}",
        (gram_norm - norm * norm).abs()
    );

    // Positivity and the four-positive split.
    let gram = a.adjoint().mul(&a);
    println!("\npositivity:");
    println!("  a*a positive: {}", is_positive(&gram, 1e-10));
    println!(
        "  -identity positive: {}",
        is_positive(&AlgebraElement::identity(&desc).neg(), 1e-10)
    );

    let [b1, b2, b3, b4] = four_positive_parts(&a).unwrap();
    let recombined = b1.sub(&b2).add(&b3.sub(&b4).scale(Complex64::I));
    println!("  four positive parts recombine to a with error {:.2e}", {
        recombined.sub(&a).max_abs()
    });

    // Jacobi diagonalization of a random hermitian matrix.
    let h = rng::random_cmatrix(&mut rng, 6, 6).hermitian_part();
    let eig = hermitian_eig(&h).unwrap();
    println!("\njacobi eigensolver on a random 6x6 hermitian matrix:");
    println!(
        "  eigenvalues {:?}",
        eig.values.iter().map(|v| (v * 1e3).round() / 1e3).collect::<Vec<_>>()
    );
    println!(
        "  reconstruction residual {:.2e}, unitarity defect {:.2e}",
        eig.reconstruct().sub(&h).frobenius_norm() / h.frobenius_norm(),
        eig.vectors.unitary_deviation()
    );
}
