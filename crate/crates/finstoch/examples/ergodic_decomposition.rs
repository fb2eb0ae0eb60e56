//! Ergodic decomposition of a two-component chain, and reduction of a
//! redundant alternative decomposition (a component listed twice) back to
//! the canonical one.
//!
//! Run with: cargo run --example ergodic_decomposition

use finstoch::dynamics::{self, DynSystem};
use finstoch::kernel::Kernel;
use finstoch::ps::{ProbSpace, PsMorphism};
use finstoch::rational::{format_rat, rat, Rat};
use finstoch::space::{Dist, FinSpace};

fn main() {
    // Two closed components: a 2-cycle on {a, b} and a lazy walk on {c, d}.
    let space = FinSpace::new(["a", "b", "c", "d"]).unwrap();
    let m = Kernel::new(
        space.clone(),
        space.clone(),
        vec![
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
        ],
    )
    .unwrap();
    let p = Dist::new(
        space.clone(),
        vec![rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)],
    )
    .unwrap();
    let sys = DynSystem::new(ProbSpace::new(p), vec![m]).unwrap();

    println!("ergodic: {}", dynamics::is_ergodic(&sys));
    let decomposition = dynamics::ergodic_decomposition(&sys);
    println!("canonical decomposition:");
    for (weight, component) in &decomposition {
        let cells: Vec<String> = component.mass().iter().map(format_rat).collect();
        println!("  weight {}: [{}]", format_rat(weight), cells.join(", "));
    }

    // Mixture identity: the weighted components reassemble p exactly.
    let mut mix = vec![rat(0, 1); 4];
    for (weight, component) in &decomposition {
        for (slot, mass) in mix.iter_mut().zip(component.mass()) {
            *slot += weight * mass;
        }
    }
    println!(
        "mixture reconstructs p: {}",
        mix.as_slice() == sys.base().dist().mass()
    );

    // A redundant decomposition: the first component listed twice with its
    // weight split, plus the second component.
    let index_space = FinSpace::new(["i1", "i1bis", "i2"]).unwrap();
    let weights = Dist::new(index_space.clone(), vec![rat(1, 4), rat(1, 4), rat(1, 2)]).unwrap();
    let rows: Vec<Vec<Rat>> = vec![
        decomposition[0].1.mass().to_vec(),
        decomposition[0].1.mass().to_vec(),
        decomposition[1].1.mass().to_vec(),
    ];
    let k = Kernel::new(index_space, space, rows).unwrap();
    let redundant = PsMorphism::new(ProbSpace::new(weights), sys.base().clone(), k).unwrap();

    let reduction = dynamics::reduce_decomposition(&redundant, &sys).unwrap();
    println!("\nreduction of the redundant decomposition (row per index):");
    for (i, row) in reduction.kernel().rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(format_rat).collect();
        println!(
            "  {}: [{}]",
            reduction.src().space().label(i),
            cells.join(", ")
        );
    }
    println!(
        "reduction is deterministic a.s.: {}",
        reduction.is_as_deterministic()
    );
}
