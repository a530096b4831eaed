//! The doubling construction: embed a rectangular module as the top row
//! block of a taller one and map it isometrically onto the bottom block.
//! The resulting pair (identity embedding, morphism) satisfies the
//! orthogonality relations that drive the representation theorems.
//!
//! Run with: cargo run --example doubling

use num_complex::Complex64;
use oamod::algebra::Flavor;
use oamod::decompose::{doubling_construction, DoubledModule};
use oamod::matrix::CMatrix;
use oamod::module::ModuleDescriptor;
use oamod::rng;

fn main() {
    let inner = ModuleDescriptor::Rectangular {
        rows: 4,
        cols: 2,
        flavor: Flavor::CompactOperator,
    };
    let mut rng = rng::seeded(9);

    // Identity pairing of the two row blocks.
    let (_, report) = doubling_construction(&inner, CMatrix::identity(4), &mut rng, 5).unwrap();
    println!("identity unitary:");
    println!(
        "  morphism {:.1e}, perpendicularity {:.1e}, mixed relations {:.1e}",
        report.morphism_dev, report.perp_dev, report.mixed_dev
    );

    // Random unitaries keep all three relations at rounding level.
    println!("\nrandom unitaries:");
    for _ in 0..3 {
        let u = rng::random_unitary(&mut rng, 4);
        let (doubled, report) = doubling_construction(&inner, u, &mut rng, 10).unwrap();
        println!(
            "  morphism {:.1e}, perpendicularity {:.1e}, mixed relations {:.1e} (ambient {:?})",
            report.morphism_dev,
            report.perp_dev,
            report.mixed_dev,
            shape(doubled.ambient())
        );
    }

    // Anything short of a unitary is rejected up front.
    let stretched = CMatrix::identity(4).scale(Complex64::new(2.0, 0.0));
    match DoubledModule::new(&inner, stretched) {
        Err(e) => println!("\nscaled pairing rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}

fn shape(desc: &ModuleDescriptor) -> (usize, usize) {
    match desc {
        ModuleDescriptor::Rectangular { rows, cols, .. } => (*rows, *cols),
        _ => (0, 0),
    }
}
