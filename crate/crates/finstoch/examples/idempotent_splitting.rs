//! Strictifying an almost-surely idempotent kernel and splitting it through
//! its invariant object: corrupt the null columns of an equilibrium
//! idempotent, repair it to an exactly idempotent kernel, and split.
//!
//! Run with: cargo run --example idempotent_splitting

use finstoch::dynamics;
use finstoch::fixtures;
use finstoch::idempotent::{is_as_idempotent, split_idempotent, strictify_idempotent};
use finstoch::ps::PsMorphism;
use finstoch::rational::{format_rat, rat};

fn main() {
    let fixture = fixtures::five_state_chain();
    let sys = &fixture.system;
    let inv = dynamics::invariant_object(sys);
    let equilibrium = inv.equilibrium().clone();

    // Corrupt the columns at the null states a and b.
    let corrupted_kernel = equilibrium
        .kernel()
        .with_row(
            0,
            vec![rat(1, 5), rat(1, 5), rat(1, 5), rat(1, 5), rat(1, 5)],
        )
        .unwrap()
        .with_row(
            1,
            vec![rat(1, 2), rat(0, 1), rat(1, 2), rat(0, 1), rat(0, 1)],
        )
        .unwrap();
    let corrupted =
        PsMorphism::new(sys.base().clone(), sys.base().clone(), corrupted_kernel).unwrap();

    println!(
        "corrupted kernel is still a.s. idempotent: {}",
        is_as_idempotent(&corrupted)
    );
    let squared = corrupted.kernel().compose(corrupted.kernel()).unwrap();
    println!(
        "…but not exactly idempotent: {}",
        &squared != corrupted.kernel()
    );

    let strict = strictify_idempotent(&corrupted).unwrap();
    let strict_squared = strict.compose(&strict).unwrap();
    println!(
        "strictified kernel is exactly idempotent: {}",
        strict_squared == strict
    );

    let splitting = split_idempotent(&corrupted).unwrap();
    println!(
        "\nsplits through {} blocks with masses [{}]",
        splitting.mid.len(),
        splitting
            .mid
            .dist()
            .mass()
            .iter()
            .map(format_rat)
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "section is the Bayesian inverse of the retraction: {}",
        splitting.section == splitting.retraction.dagger()
    );
}
