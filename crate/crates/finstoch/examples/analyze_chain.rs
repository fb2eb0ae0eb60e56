//! End-to-end analysis of a five-state chain: invariant blocks, the
//! component space, projection/section, the equilibrium idempotent, and the
//! ergodic decomposition.
//!
//! Run with: cargo run --example analyze_chain

use finstoch::dynamics;
use finstoch::fixtures;
use finstoch::rational::format_rat;

fn main() {
    let fixture = fixtures::five_state_chain();
    let sys = &fixture.system;

    println!("states: {:?}", sys.base().space().labels());
    println!(
        "invariant measure: {:?}",
        sys.base()
            .dist()
            .mass()
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
    );

    let inv = dynamics::invariant_object(sys);
    println!("\ninvariant blocks (block label, mass):");
    for (b, _) in inv.partition().blocks().iter().enumerate() {
        println!(
            "  {} -> {}",
            inv.partition().block_label(b),
            format_rat(inv.components().dist().mass_at(b))
        );
    }

    println!("\nprojection rows (state -> block):");
    for x in sys.base().space().indices() {
        let b = inv.partition().block_of(x);
        println!(
            "  {} -> {}",
            sys.base().space().label(x),
            inv.partition().block_label(b)
        );
    }

    println!("\nequilibrium idempotent (row per source state):");
    for (x, row) in inv.equilibrium().kernel().rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(format_rat).collect();
        println!("  {}: [{}]", sys.base().space().label(x), cells.join(", "));
    }

    println!("\nergodic: {}", dynamics::is_ergodic(sys));
    println!("ergodic decomposition:");
    for (weight, component) in dynamics::ergodic_decomposition(sys) {
        let cells: Vec<String> = component.mass().iter().map(format_rat).collect();
        println!("  weight {}: [{}]", format_rat(&weight), cells.join(", "));
    }

    let report = dynamics::equilibrium_checks(sys, 0);
    println!("\nequilibrium checks passed: {}", report.passed());
}
