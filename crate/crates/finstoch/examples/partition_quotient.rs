//! Quotienting a probability space by a partition and reducing away the
//! zero-mass block: six points with masses (1/5, 2/5 | 1/10, 3/10 | 0, 0)
//! quotient to (3/5, 2/5, 0) and are isomorphic to the two-point space
//! (3/5, 2/5).
//!
//! Run with: cargo run --example partition_quotient

use finstoch::fixtures;
use finstoch::ps::{find_ps_iso, quotient_by_partition, ProbSpace};
use finstoch::rational::{format_rat, rat};
use finstoch::space::{Dist, FinSpace};

fn main() {
    let fixture = fixtures::six_point_quotient();
    let (quotient, projection) = quotient_by_partition(&fixture.space, &fixture.partition).unwrap();

    println!("block masses:");
    for (b, mass) in quotient.dist().mass().iter().enumerate() {
        println!("  {} -> {}", quotient.space().label(b), format_rat(mass));
    }
    println!(
        "projection is deterministic: {}",
        projection.kernel().is_deterministic()
    );

    let reduced = ProbSpace::new(
        Dist::new(
            FinSpace::new(["1", "2"]).unwrap(),
            vec![rat(3, 5), rat(2, 5)],
        )
        .unwrap(),
    );
    match find_ps_iso(&quotient, &reduced) {
        Some((fwd, _)) => {
            println!("\nisomorphic to the two-point space (3/5, 2/5)");
            println!("forward map (row per block):");
            for (b, row) in fwd.kernel().rows().iter().enumerate() {
                let cells: Vec<String> = row.iter().map(format_rat).collect();
                println!("  {}: [{}]", quotient.space().label(b), cells.join(", "));
            }
        }
        None => println!("unexpected: no isomorphism found"),
    }
}
