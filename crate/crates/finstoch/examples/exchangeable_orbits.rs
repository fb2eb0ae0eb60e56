//! Permutation actions on product spaces: orbit structure of {0,1}^3 and
//! {0,1,2}^3, the orbit decomposition of exchangeable measures, and the
//! ergodicity report.
//!
//! Run with: cargo run --example exchangeable_orbits

use finstoch::exchangeable::{
    finite_definetti, hewitt_savage_finite, orbit_count, orbit_structure, ProductSpace,
};
use finstoch::rational::{format_rat, rat};
use finstoch::space::{Dist, FinSpace};

fn main() {
    let binary = FinSpace::new(["0", "1"]).unwrap();
    let structure = orbit_structure(&binary, 3).unwrap();
    println!(
        "{{0,1}}^3 has {} orbits (count formula: {}):",
        structure.orbits.len(),
        orbit_count(2, 3)
    );
    for (b, block) in structure.orbits.blocks().iter().enumerate() {
        println!(
            "  {} with {} states",
            structure.orbits.block_label(b),
            block.len()
        );
    }

    let ternary = FinSpace::new(["0", "1", "2"]).unwrap();
    let ternary_structure = orbit_structure(&ternary, 3).unwrap();
    println!(
        "\n{{0,1,2}}^3 has {} orbits (count formula: {})",
        ternary_structure.orbits.len(),
        orbit_count(3, 3)
    );

    // Uniform measure decomposes with binomial weights.
    let product = ProductSpace::new(binary.clone(), 3).unwrap();
    let uniform = Dist::uniform(product.space().clone());
    println!("\norbit decomposition of the uniform measure on {{0,1}}^3:");
    for (weight, _) in finite_definetti(&binary, 3, &uniform).unwrap() {
        println!("  weight {}", format_rat(&weight));
    }

    // i.i.d. bias-1/3 coins: weights are binomial(3, 1/3).
    let mass: Vec<_> = (0..product.len())
        .map(|index| {
            product
                .tuple(index)
                .iter()
                .map(|&c| if c == 1 { rat(1, 3) } else { rat(2, 3) })
                .fold(rat(1, 1), |acc, w| acc * w)
        })
        .collect();
    let iid = Dist::new(product.space().clone(), mass).unwrap();
    println!("\norbit decomposition of i.i.d. bias-1/3 coins:");
    for (weight, _) in finite_definetti(&binary, 3, &iid).unwrap() {
        println!("  weight {}", format_rat(&weight));
    }

    let report = hewitt_savage_finite(&binary, 3, &iid).unwrap();
    println!(
        "\ni.i.d. measure: ergodic={} (finite n: a genuine product need not be ergodic)",
        report.ergodic
    );
    println!("exact product measure: {}", report.product_measure);
}
