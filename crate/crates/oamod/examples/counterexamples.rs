//! The two maps that are orthogonally additive yet escape the
//! representation f = T + Phi(<x, x>): the weighted rank-one map on a
//! dimension-one module, and the odd cube on the commutative diagonal
//! algebra (all blocks one-dimensional).
//!
//! Run with: cargo run --example counterexamples

use num_complex::Complex64;
use oamod::algebra::Flavor;
use oamod::catalog::{
    additivity_violation, check_orthogonal_additivity, instantiate_map, property, property_suite,
    MapKind, MapSpec,
};
use oamod::decompose::{polarize, sesquilinearize};
use oamod::module::{ModuleDescriptor, ModuleElement, ModulePayload};
use oamod::rng;

fn main() {
    let mut rng = rng::seeded(3);

    // Weighted rank-one map on the vector module (orthogonal dimension 1).
    let vector = ModuleDescriptor::VectorModule {
        dim: 3,
        flavor: Flavor::CompactOperator,
    };
    let spec = MapSpec {
        module: vector.clone(),
        kind: MapKind::WeightedRankOne {
            eta0: vec![Complex64::ONE, Complex64::ZERO, Complex64::ZERO],
        },
    };
    let catalog = instantiate_map(&spec).unwrap();

    println!("weighted rank-one map, f(x) = (x, eta0) x (x) x:");
    let oa = check_orthogonal_additivity(&catalog.map, &vector, 50, &mut rng);
    println!("  orthogonal additivity: {}", oa.flag.as_deref().unwrap_or("measured"));

    let e1 = ModuleElement::new(
        vector.clone(),
        ModulePayload::Vector(vec![Complex64::ONE, Complex64::ZERO, Complex64::ZERO]),
    )
    .unwrap();
    let e2 = ModuleElement::new(
        vector.clone(),
        ModulePayload::Vector(vec![Complex64::ZERO, Complex64::ONE, Complex64::ZERO]),
    )
    .unwrap();
    println!(
        "  plain additivity gap at basis vectors: {:.4}",
        additivity_violation(&catalog.map, &e1, &e2)
    );

    // The map is odd, so its polarized forms vanish identically; the
    // representation failure shows up in the additive part instead.
    let s = sesquilinearize(&catalog.map);
    let b = polarize(&catalog.map);
    let x = rng::random_module_element(&mut rng, &vector);
    let y = rng::random_module_element(&mut rng, &vector);
    println!(
        "  polarized forms of an odd map: ||B|| = {:.2e}, ||S|| = {:.2e}",
        b.eval(&x, &y).norm(),
        s.eval(&x, &y).norm()
    );
    let report = property_suite(&catalog.map, &vector, 100, &mut rng);
    let homog = report.entry(property::T_REAL_HOMOGENEITY).unwrap();
    println!(
        "  T real homogeneity violated at {:.3} (expected: the module has orthogonal dimension 1)",
        homog.max_violation
    );

    // Odd cube on the diagonal algebra.
    let diagonal = ModuleDescriptor::DiagonalModule {
        dim: 4,
        flavor: Flavor::CompactOperator,
    };
    let spec = MapSpec {
        module: diagonal.clone(),
        kind: MapKind::OddCube,
    };
    let catalog = instantiate_map(&spec).unwrap();

    println!("\nodd cube on the diagonal algebra, f(x) = x (x*)^2:");
    let oa = check_orthogonal_additivity(&catalog.map, &diagonal, 100, &mut rng);
    println!(
        "  orthogonally additive on disjoint supports: violation {:.2e}",
        oa.max_violation
    );

    let unit = ModuleElement::new(
        diagonal.clone(),
        ModulePayload::Diagonal(vec![
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ]),
    )
    .unwrap();
    println!(
        "  yet f(2e) = 8e while 2 f(e) = 2e: additivity gap {:.1}",
        additivity_violation(&catalog.map, &unit, &unit)
    );
    let report = property_suite(&catalog.map, &diagonal, 100, &mut rng);
    println!("  failing suite entries: {:?}", report.failed_names());
}
