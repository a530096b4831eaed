//! Why the linear part cannot always extend continuously: on the pair
//! module, the extracted Phi sends the norm-one contraction
//! sum_{k<=n} (1/k) E_kk to the n-th harmonic number, which grows without
//! bound as the truncation increases.
//!
//! Run with: cargo run --example harmonic_growth

use oamod::catalog::harmonic_growth;
use oamod::rng;

fn main() {
    let mut rng = rng::seeded(1);
    let truncation = 32;
    let rows = harmonic_growth(truncation, &mut rng).unwrap();

    println!("truncation dimension {truncation}:");
    println!("{:>4}  {:>12}  {:>12}  {:>10}", "n", "phi(T_n)", "H_n", "||T_n||");
    let mut harmonic = 0.0f64;
    for row in &rows {
        harmonic += 1.0 / row.n as f64;
        if row.n.is_power_of_two() || row.n == truncation {
            println!(
                "{:>4}  {:>12.8}  {:>12.8}  {:>10.1}",
                row.n, row.phi_value.re, harmonic, row.t_norm
            );
        }
    }

    println!("\ndoubling gaps phi(T_2n) - phi(T_n), each at least 1/2:");
    for n in [1usize, 2, 4, 8, 16] {
        let gap = rows[2 * n - 1].phi_value.re - rows[n - 1].phi_value.re;
        println!("  n = {n:>2}: {gap:.6}");
    }
    println!(
        "\nthe ratio phi(T_n) / ||T_n|| grows like ln(n); no continuous linear\n\
         extension of Phi to the full algebra can exist in the untruncated limit."
    );
}
