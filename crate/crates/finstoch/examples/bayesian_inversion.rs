//! Bayesian inversion as a dagger: building a measure-preserving kernel,
//! inverting it, and checking involution and the determinism/retraction
//! equivalence on concrete morphisms.
//!
//! Run with: cargo run --example bayesian_inversion

use finstoch::kernel::Kernel;
use finstoch::ps::{check_dag_id, ProbSpace, PsMorphism};
use finstoch::rational::{format_rat, rat};
use finstoch::space::{Dist, FinSpace};

fn main() {
    let weather = FinSpace::new(["sunny", "rainy"]).unwrap();
    let mood = FinSpace::new(["good", "bad"]).unwrap();

    let climate = ProbSpace::new(Dist::new(weather.clone(), vec![rat(2, 3), rat(1, 3)]).unwrap());
    let response = Kernel::new(
        weather,
        mood.clone(),
        vec![
            vec![rat(9, 10), rat(1, 10)], // sunny -> mostly good
            vec![rat(2, 5), rat(3, 5)],   // rainy -> mostly bad
        ],
    )
    .unwrap();

    // The pushforward measure makes the kernel measure-preserving.
    let mood_dist = response.push(climate.dist()).unwrap();
    println!(
        "mood distribution: good={}, bad={}",
        format_rat(mood_dist.mass_at(0)),
        format_rat(mood_dist.mass_at(1))
    );

    let f = PsMorphism::new(climate, ProbSpace::new(mood_dist), response).unwrap();
    let back = f.dagger();
    println!("\ninference kernel (row per observed mood):");
    for (y, row) in back.kernel().rows().iter().enumerate() {
        let cells: Vec<String> = row.iter().map(format_rat).collect();
        println!("  {}: [{}]", mood.label(y), cells.join(", "));
    }

    println!("\ndagger involution: {}", back.dagger() == f);
    println!("f deterministic a.s.: {}", f.is_as_deterministic());
    println!(
        "determinism <-> f∘f† ≃ id equivalence holds: {}",
        check_dag_id(&f)
    );

    // A deterministic observable: its dagger is a genuine retraction.
    let parity = PsMorphism::new(
        f.src().clone(),
        f.src().clone(),
        Kernel::identity(f.src().space().clone()),
    )
    .unwrap();
    println!(
        "identity is its own Bayesian inverse: {}",
        parity.dagger() == parity
    );
}
