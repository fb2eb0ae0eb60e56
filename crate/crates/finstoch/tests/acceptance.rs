//! Acceptance suite: golden fixtures plus randomized exactness guarantees.
//! Every assertion is exact rational equality; each test prints one
//! PASS line with its measured runtime.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use finstoch::chainspec::ChainSpec;
use finstoch::dynamics::{self, DynSystem};
use finstoch::exchangeable;
use finstoch::fixtures;
use finstoch::generate;
use finstoch::idempotent;
use finstoch::kernel::Kernel;
use finstoch::laws::{self, CaseGen};
use finstoch::ps::{as_equal, find_ps_iso, quotient_by_partition, ProbSpace, PsMorphism};
use finstoch::rational::{rat, Rat};
use finstoch::space::{Dist, FinSpace};

fn report_pass(name: &str, elapsed: Duration, budget: Duration) {
    println!("PASS {name}: exact, {elapsed:.2?} (budget {budget:.2?})");
    assert!(
        elapsed <= budget,
        "{name} exceeded its runtime budget: {elapsed:?}"
    );
}

const FIVE_STATE_SPEC: &str = r#"{
    "states": ["a", "b", "c", "d", "e"],
    "dist": ["0", "0", "1/3", "4/15", "2/5"],
    "generators": [{
        "name": "m",
        "rows": [
            ["1/2", "1/2", "0", "0", "0"],
            ["0", "1", "0", "0", "0"],
            ["0", "0", "1", "0", "0"],
            ["0", "0", "0", "1/2", "1/2"],
            ["0", "0", "0", "1/3", "2/3"]
        ]
    }]
}"#;

/// Five-state chain golden values: positive blocks {c} and {d,e} with
/// masses 1/3 and 2/3, and the equilibrium idempotent matching the known
/// matrix exactly on support columns (almost surely overall).
#[test]
fn five_state_chain_golden_values() {
    let start = Instant::now();
    let built = ChainSpec::parse(FIVE_STATE_SPEC).unwrap().build().unwrap();
    let sys = &built.system;
    let labels = |block: &[usize]| -> Vec<&str> {
        block.iter().map(|&x| sys.base().space().label(x)).collect()
    };

    let partition = dynamics::invariant_partition(sys);
    let positive: Vec<Vec<&str>> = partition
        .blocks()
        .iter()
        .filter(|b| !sys.base().dist().mass_of(b).is_zero())
        .map(|b| labels(b))
        .collect();
    assert_eq!(positive, vec![vec!["c"], vec!["d", "e"]]);

    let inv = dynamics::invariant_object(sys);
    assert_eq!(
        inv.components().dist().mass(),
        &[rat(0, 1), rat(1, 3), rat(2, 3)]
    );

    // Support columns of the equilibrium, exactly.
    let e = inv.equilibrium().kernel();
    assert_eq!(
        e.row(2),
        &[rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)]
    );
    assert_eq!(
        e.row(3),
        &[rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 5), rat(3, 5)]
    );
    assert_eq!(
        e.row(4),
        &[rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 5), rat(3, 5)]
    );

    // Full matrix almost surely equal to the known presentation, which maps
    // both null states to b.
    let space = sys.base().space().clone();
    let known = Kernel::new(
        space.clone(),
        space,
        vec![
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 5), rat(3, 5)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 5), rat(3, 5)],
        ],
    )
    .unwrap();
    assert!(as_equal(e, &known, sys.base().dist()).unwrap());

    // Matches the built-in fixture end to end.
    let fixture = fixtures::five_state_chain();
    assert_eq!(e, &fixture.expected_equilibrium);

    report_pass(
        "five-state chain golden values",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// Orbit figures: {0,1}^3 has exactly 4 orbits graded by the number of
/// ones, the section is exactly 1/3 on the three-element orbits, and
/// {0,1,2}^3 has exactly 10 orbits.
#[test]
fn binary_and_ternary_orbit_figures() {
    let start = Instant::now();
    let binary = FinSpace::new(["0", "1"]).unwrap();
    let structure = exchangeable::orbit_structure(&binary, 3).unwrap();
    assert_eq!(structure.orbits.len(), 4);

    // Blocks are exactly the ones-count classes A_0..A_3.
    for (b, block) in structure.orbits.blocks().iter().enumerate() {
        for &index in block {
            let ones: usize = structure.product.tuple(index).iter().sum();
            assert_eq!(ones, b);
        }
    }
    assert_eq!(
        structure
            .orbits
            .blocks()
            .iter()
            .map(Vec::len)
            .collect::<Vec<_>>(),
        vec![1, 3, 3, 1]
    );

    let uniform = Dist::uniform(structure.product.space().clone());
    let section = exchangeable::uniform_orbit_section(&binary, 3, &uniform).unwrap();
    for (b, block) in structure.orbits.blocks().iter().enumerate() {
        if block.len() == 3 {
            for &member in block {
                assert_eq!(section.kernel().entry(member, b), &rat(1, 3));
            }
        }
    }

    let ternary = FinSpace::new(["0", "1", "2"]).unwrap();
    let ternary_structure = exchangeable::orbit_structure(&ternary, 3).unwrap();
    assert_eq!(ternary_structure.orbits.len(), 10);
    assert_eq!(exchangeable::orbit_count(2, 3).to_string(), "4");
    assert_eq!(exchangeable::orbit_count(3, 3).to_string(), "10");

    report_pass(
        "binary and ternary orbit figures",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// Six points with masses (1/5, 2/5, 1/10, 3/10, 0, 0) quotient to
/// (3/5, 2/5, 0) and are isomorphic to the two-point space (3/5, 2/5).
#[test]
fn six_point_partition_quotient() {
    let start = Instant::now();
    let fixture = fixtures::six_point_quotient();
    let (quotient, projection) = quotient_by_partition(&fixture.space, &fixture.partition).unwrap();
    assert_eq!(quotient.dist().mass(), &[rat(3, 5), rat(2, 5), rat(0, 1)]);
    assert!(projection.is_as_deterministic());

    let reduced = ProbSpace::new(
        Dist::new(
            FinSpace::new(["1", "2"]).unwrap(),
            vec![rat(3, 5), rat(2, 5)],
        )
        .unwrap(),
    );
    let (forward, backward) = find_ps_iso(&quotient, &reduced).expect("quotient reduces");
    assert_eq!(backward, forward.dagger());
    assert_eq!(
        backward.compose(&forward).unwrap(),
        PsMorphism::identity(&quotient)
    );

    report_pass(
        "six-point partition quotient",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// For 200 random systems with at most 10 states, the graph-component
/// partition generates the same invariant sets as exhaustive subset
/// enumeration: every block union satisfies the almost-sure invariance
/// condition, every enumerated invariant set is a block union on the
/// support, and the strictly invariant family is exactly the strict block
/// unions.
#[test]
fn invariant_partition_matches_subset_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for case in 0..200 {
        let sys = laws::rand_system(&mut rng, 10, 16);
        let n = sys.base().len();
        let masks = 1usize << n;
        let support_mask: usize = sys.base().support().iter().map(|&x| 1 << x).sum();

        // Exhaustive oracle via Gray-code enumeration: mass into the
        // current subset, per generator and source state.
        let generators = sys.generators();
        let mut into_subset: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; generators.len()];
        let mut as_invariant = vec![false; masks];
        let mut strict_invariant = vec![false; masks];
        let mut mask = 0usize;
        for step in 0..masks {
            if step > 0 {
                let flip = step.trailing_zeros() as usize;
                mask ^= 1 << flip;
                let added = mask & (1 << flip) != 0;
                for (row, generator) in into_subset.iter_mut().zip(generators) {
                    for (x, cell) in row.iter_mut().enumerate() {
                        let delta = generator.entry(flip, x);
                        if delta.is_zero() {
                            continue;
                        }
                        if added {
                            *cell += delta;
                        } else {
                            *cell -= delta;
                        }
                    }
                }
            }
            let holds_at = |x: usize| -> bool {
                let expected_one = mask & (1 << x) != 0;
                generators.iter().enumerate().all(|(g, _)| {
                    if expected_one {
                        into_subset[g][x].is_one()
                    } else {
                        into_subset[g][x].is_zero()
                    }
                })
            };
            as_invariant[mask] = sys.base().support().iter().all(|&x| holds_at(x));
            strict_invariant[mask] = (0..n).all(holds_at);
        }

        // Almost-sure side. Every union of partition blocks is invariant.
        let partition = dynamics::invariant_partition(&sys);
        let block_masks: Vec<usize> = partition
            .blocks()
            .iter()
            .map(|block| block.iter().map(|&x| 1 << x).sum())
            .collect();
        for selector in 0..(1usize << block_masks.len()) {
            let union: usize = block_masks
                .iter()
                .enumerate()
                .filter(|(b, _)| selector & (1 << b) != 0)
                .map(|(_, m)| m)
                .sum();
            assert!(
                as_invariant[union],
                "case {case}: block union {union:b} is not a.s. invariant"
            );
        }
        // Every enumerated invariant set is a block union on the support.
        let positive_blocks: Vec<usize> = block_masks
            .iter()
            .copied()
            .filter(|&m| m & support_mask != 0)
            .collect();
        for (set, &invariant) in as_invariant.iter().enumerate() {
            if !invariant {
                continue;
            }
            for &block in &positive_blocks {
                let overlap = set & block;
                assert!(
                    overlap == 0 || overlap == block,
                    "case {case}: invariant set {set:b} cuts positive block {block:b}"
                );
            }
        }

        // Strict side: the family equals the strict block unions exactly.
        let strict_partition = dynamics::strict_invariant_partition(&sys);
        let strict_blocks: Vec<usize> = strict_partition
            .blocks()
            .iter()
            .map(|block| block.iter().map(|&x| 1 << x).sum())
            .collect();
        let mut expected = vec![false; masks];
        for selector in 0..(1usize << strict_blocks.len()) {
            let union: usize = strict_blocks
                .iter()
                .enumerate()
                .filter(|(b, _)| selector & (1 << b) != 0)
                .map(|(_, m)| m)
                .sum();
            expected[union] = true;
        }
        assert_eq!(
            strict_invariant, expected,
            "case {case}: strict family mismatch"
        );
    }

    report_pass(
        "invariant partition matches the subset oracle (200 systems)",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

/// Theorem suites at 1000 seeded cases each, zero failures.
#[test]
fn theorem_suites_at_one_thousand_cases() {
    let start = Instant::now();
    // (law, seed): seeds pinned so the sequences are reproducible.
    let suites: &[(&str, u64)] = &[
        ("comonoid", 1),
        ("causality", 5),
        ("positivity", 11),
        ("cauchy-schwarz", 3),
        ("dag-id", 7),
        ("iso-bayesian", 13),
        ("dagger-involution", 17),
        ("as-det-compose", 19),
        ("harmonic-invariant", 23),
        ("section-left-invariant", 29),
        ("colimit-uniqueness", 31),
        ("limit-uniqueness", 37),
        ("time-reversal", 41),
        ("equilibrium-laws", 43),
        ("alt-ergodic", 47),
        ("detailed-balance", 53),
    ];
    for &(law, seed) in suites {
        let report = laws::run_law(law, &CaseGen::with_seed(seed), 1000).unwrap();
        assert!(
            report.passed(),
            "law {law} failed: {:?}",
            report.failures.first()
        );
        println!("  suite {law}: 1000 cases, 0 failures");
    }
    report_pass(
        "theorem suites at 1000 cases",
        start.elapsed(),
        Duration::from_secs(300),
    );
}

/// 500 random almost-sure idempotents (equilibria of random systems with
/// noise injected on null columns) all strictify to exactly idempotent
/// kernels and split with the three dagger-splitting identities.
#[test]
fn idempotent_strictify_and_split_pipeline() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for case in 0..500 {
        let sys = laws::rand_system(&mut rng, 8, 16);
        let inv = dynamics::invariant_object(&sys);
        let mut kernel = inv.equilibrium().kernel().clone();
        for x in sys.base().space().indices() {
            if !sys.base().in_support(x) {
                kernel = kernel
                    .with_row(
                        x,
                        generate::rand_simplex(&mut rng, sys.base().len(), 16, true),
                    )
                    .unwrap();
            }
        }
        let e = PsMorphism::new(sys.base().clone(), sys.base().clone(), kernel).unwrap();
        assert!(idempotent::is_as_idempotent(&e), "case {case}");

        let strict = idempotent::strictify_idempotent(&e).unwrap();
        assert_eq!(strict.compose(&strict).unwrap(), strict, "case {case}");
        assert!(
            as_equal(&strict, e.kernel(), sys.base().dist()).unwrap(),
            "case {case}"
        );

        let splitting = idempotent::split_idempotent(&e).unwrap();
        assert_eq!(
            splitting.section.compose(&splitting.retraction).unwrap(),
            e,
            "case {case}: section ∘ retraction ≄ e"
        );
        assert_eq!(
            splitting.retraction.compose(&splitting.section).unwrap(),
            PsMorphism::identity(&splitting.mid),
            "case {case}: retraction ∘ section ≄ id"
        );
        assert_eq!(
            splitting.section,
            splitting.retraction.dagger(),
            "case {case}: section ≄ retraction†"
        );
        assert!(
            find_ps_iso(&splitting.mid, inv.components()).is_some(),
            "case {case}: mid space not isomorphic to the generating quotient"
        );
    }
    report_pass(
        "idempotent strictify-and-split pipeline (500 cases)",
        start.elapsed(),
        Duration::from_secs(120),
    );
}

/// For 200 random systems: the mixture identity is exact, every component
/// is invariant under every generator and 0/1 on every invariant block, and
/// planted redundant decompositions reduce to the canonical one through a
/// recovered deterministic map.
#[test]
fn ergodic_decomposition_exactness_and_reduction() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    for case in 0..200 {
        let sys = laws::rand_system(&mut rng, 8, 16);
        let decomposition = dynamics::ergodic_decomposition(&sys);
        let n = sys.base().len();

        // Mixture identity.
        let mut mix = vec![Rat::zero(); n];
        let mut total = Rat::zero();
        for (weight, component) in &decomposition {
            total += weight;
            for (slot, mass) in mix.iter_mut().zip(component.mass()) {
                *slot += weight * mass;
            }
        }
        assert!(total.is_one(), "case {case}: weights do not sum to 1");
        assert_eq!(
            mix.as_slice(),
            sys.base().dist().mass(),
            "case {case}: mixture mismatch"
        );

        // Components are exactly invariant and 0/1 on invariant blocks.
        let partition = dynamics::invariant_partition(&sys);
        for (_, component) in &decomposition {
            for generator in sys.generators() {
                assert_eq!(
                    &generator.push(component).unwrap(),
                    component,
                    "case {case}"
                );
            }
            for block in partition.blocks() {
                let mass = component.mass_of(block);
                assert!(
                    mass.is_zero() || mass.is_one(),
                    "case {case}: component not 0/1 on an invariant block"
                );
            }
        }

        // Plant a redundant decomposition: shuffle the components and list
        // one of them twice with its weight split.
        let mut order: Vec<usize> = (0..decomposition.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let duplicated = order[rng.random_range(0..order.len())];
        let split_at = loop {
            let t = generate::rand_unit_rat(&mut rng, 16);
            if !t.is_zero() && !t.is_one() {
                break t;
            }
        };
        let mut weights: Vec<Rat> = Vec::new();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for &i in &order {
            let (weight, component) = &decomposition[i];
            if i == duplicated {
                weights.push(weight * &split_at);
                rows.push(component.mass().to_vec());
                weights.push(weight * (Rat::one() - &split_at));
                rows.push(component.mass().to_vec());
            } else {
                weights.push(weight.clone());
                rows.push(component.mass().to_vec());
            }
        }
        let index_space = FinSpace::new((0..weights.len()).map(|i| format!("i{i}"))).unwrap();
        let planted = PsMorphism::new(
            ProbSpace::new(Dist::new(index_space.clone(), weights).unwrap()),
            sys.base().clone(),
            Kernel::new(index_space, sys.base().space().clone(), rows).unwrap(),
        )
        .unwrap();

        let reduction = dynamics::reduce_decomposition(&planted, &sys).unwrap();
        assert!(
            reduction.is_as_deterministic(),
            "case {case}: reduction not deterministic"
        );
        let inv = dynamics::invariant_object(&sys);
        assert_eq!(
            inv.section().compose(&reduction).unwrap(),
            planted,
            "case {case}: reduction does not reassemble the planted decomposition"
        );
    }
    report_pass(
        "ergodic decomposition exactness and reduction (200 cases)",
        start.elapsed(),
        Duration::from_secs(120),
    );
}

/// The harmonic observable (1, 1/2, 0) on the three-state fixture passes
/// the right-invariance (harmonic) check for every invariant measure of the
/// chain, and fails the strict all-states deterministic-invariance check at
/// the middle state.
#[test]
fn harmonic_observable_strict_vs_almost_sure() {
    let start = Instant::now();
    let fixture = fixtures::harmonic_counterexample();

    // The kernel identity holds at every state, so right-invariance holds
    // for every measure the chain preserves.
    let composed = fixture.observable.compose(&fixture.transition).unwrap();
    assert_eq!(composed, fixture.observable);

    // Every invariant measure is supported on {a, c}: the closed classes
    // exclude the middle state.
    let classes = generate::closed_classes(&fixture.transition);
    assert_eq!(classes, vec![vec![0], vec![2]]);

    for t in [rat(0, 1), rat(1, 1), rat(1, 2), rat(2, 7)] {
        let mass: Vec<Rat> = fixture.extreme_invariant_measures[0]
            .mass()
            .iter()
            .zip(fixture.extreme_invariant_measures[1].mass())
            .map(|(a, c)| &t * a + (Rat::one() - &t) * c)
            .collect();
        let p = Dist::new(fixture.space.clone(), mass).unwrap();
        assert!(p.mass_at(1).is_zero());
        assert_eq!(&fixture.transition.push(&p).unwrap(), &p);

        let base = ProbSpace::new(p);
        let sys = DynSystem::new(base.clone(), vec![fixture.transition.clone()]).unwrap();
        let q = fixture.observable.push(base.dist()).unwrap();
        let f = PsMorphism::new(base, ProbSpace::new(q), fixture.observable.clone()).unwrap();
        assert!(dynamics::is_right_invariant(&f, &sys).unwrap());
        assert!(dynamics::is_det_invariant(&f, &sys).unwrap());

        // The strict check, ignoring the measure, fails exactly at b.
        let witness = dynamics::strict_det_invariance_witness(&fixture.observable, &sys)
            .expect("strict check must fail");
        assert_eq!(fixture.space.label(witness.1), "b");
    }

    report_pass(
        "harmonic observable: strict vs almost-sure invariance",
        start.elapsed(),
        Duration::from_secs(1),
    );
}
