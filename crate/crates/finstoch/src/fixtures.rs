//! Built-in worked examples with their exactly known outputs, used as golden
//! fixtures by the test suites and exposed through the CLI.

use crate::dynamics::DynSystem;
use crate::kernel::Kernel;
use crate::ps::{Partition, ProbSpace};
use crate::rational::{rat, Rat};
use crate::space::{Dist, FinSpace};

/// A five-state chain with a transient pair feeding a null recurrent state,
/// one absorbing state, and one two-state recurrent class; the invariant
/// measure puts mass 1/3 and 2/3 on the two positive classes.
pub struct ChainFixture {
    pub name: &'static str,
    pub system: DynSystem,
    /// Positive blocks of the invariant partition, by label.
    pub expected_positive_blocks: Vec<Vec<&'static str>>,
    /// Zero-mass blocks, by label.
    pub expected_null_blocks: Vec<Vec<&'static str>>,
    /// Component masses in block order (null blocks included).
    pub expected_component_masses: Vec<Rat>,
    /// The equilibrium idempotent, with uniform columns on the null block.
    pub expected_equilibrium: Kernel,
}

/// A three-state chain carrying an observable whose expectation is
/// preserved by the transition (it is harmonic) but which is not constant
/// along every positive-probability transition, so the strict, measure-free
/// invariance check fails at the middle state.
pub struct HarmonicFixture {
    pub name: &'static str,
    pub space: FinSpace,
    pub transition: Kernel,
    /// Observable as a kernel into `{0,1}`: second column is the harmonic
    /// function h.
    pub observable: Kernel,
    pub harmonic_values: Vec<Rat>,
    /// Extreme invariant measures of the chain.
    pub extreme_invariant_measures: Vec<Dist>,
    /// The state at which the strict check fails.
    pub strict_violation_state: &'static str,
}

/// Six points in three blocks of a partition, two of them carrying all the
/// mass: quotients to masses (3/5, 2/5, 0) and reduces to the two-point
/// space (3/5, 2/5).
pub struct QuotientFixture {
    pub name: &'static str,
    pub space: ProbSpace,
    pub partition: Partition,
    pub expected_quotient_masses: Vec<Rat>,
    pub expected_reduced_masses: Vec<Rat>,
}

pub enum Fixture {
    Chain(ChainFixture),
    Harmonic(HarmonicFixture),
    Quotient(QuotientFixture),
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Chain(f) => f.name,
            Fixture::Harmonic(f) => f.name,
            Fixture::Quotient(f) => f.name,
        }
    }
}

/// All built-in fixtures.
pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture::Chain(five_state_chain()),
        Fixture::Harmonic(harmonic_counterexample()),
        Fixture::Quotient(six_point_quotient()),
    ]
}

/// State space {a, b, c, d, e}; from a: 1/2 stay, 1/2 to b; b and c
/// absorbing; d and e exchange mass (1/2, 1/2 from d; 1/3, 2/3 from e).
/// Invariant measure (0, 0, 1/3, 4/15, 2/5).
pub fn five_state_chain() -> ChainFixture {
    let space = FinSpace::new(["a", "b", "c", "d", "e"]).unwrap();
    let transition = Kernel::new(
        space.clone(),
        space.clone(),
        vec![
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 3), rat(2, 3)],
        ],
    )
    .unwrap();
    let invariant = Dist::new(
        space.clone(),
        vec![rat(0, 1), rat(0, 1), rat(1, 3), rat(4, 15), rat(2, 5)],
    )
    .unwrap();
    let system = DynSystem::new(ProbSpace::new(invariant), vec![transition]).unwrap();

    let expected_equilibrium = Kernel::new(
        space.clone(),
        space,
        vec![
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 5), rat(3, 5)],
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 5), rat(3, 5)],
        ],
    )
    .unwrap();

    ChainFixture {
        name: "five-state-chain",
        system,
        expected_positive_blocks: vec![vec!["c"], vec!["d", "e"]],
        expected_null_blocks: vec![vec!["a", "b"]],
        expected_component_masses: vec![rat(0, 1), rat(1, 3), rat(2, 3)],
        expected_equilibrium,
    }
}

/// Three states {a, b, c}: a and c absorbing, b splits evenly between them.
/// The observable h = (1, 1/2, 0) has preserved expectation everywhere, but
/// changes across the positive-probability transitions out of b; every
/// invariant measure gives b mass zero.
pub fn harmonic_counterexample() -> HarmonicFixture {
    let space = FinSpace::new(["a", "b", "c"]).unwrap();
    let transition = Kernel::new(
        space.clone(),
        space.clone(),
        vec![
            vec![rat(1, 1), rat(0, 1), rat(0, 1)],
            vec![rat(1, 2), rat(0, 1), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        ],
    )
    .unwrap();
    let harmonic_values = vec![rat(1, 1), rat(1, 2), rat(0, 1)];
    let binary = FinSpace::new(["0", "1"]).unwrap();
    let observable = Kernel::new(
        space.clone(),
        binary,
        harmonic_values
            .iter()
            .map(|h| vec![rat(1, 1) - h, h.clone()])
            .collect(),
    )
    .unwrap();
    let extreme_invariant_measures =
        vec![Dist::point(space.clone(), 0), Dist::point(space.clone(), 2)];
    HarmonicFixture {
        name: "harmonic-counterexample",
        space,
        transition,
        observable,
        harmonic_values,
        extreme_invariant_measures,
        strict_violation_state: "b",
    }
}

/// Six points with masses (1/5, 2/5, 1/10, 3/10, 0, 0) partitioned into
/// pairs.
pub fn six_point_quotient() -> QuotientFixture {
    let space = FinSpace::new(["x1", "x2", "x3", "x4", "x5", "x6"]).unwrap();
    let dist = Dist::new(
        space.clone(),
        vec![
            rat(1, 5),
            rat(2, 5),
            rat(1, 10),
            rat(3, 10),
            rat(0, 1),
            rat(0, 1),
        ],
    )
    .unwrap();
    let partition = Partition::new(space, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
    QuotientFixture {
        name: "six-point-quotient",
        space: ProbSpace::new(dist),
        partition,
        expected_quotient_masses: vec![rat(3, 5), rat(2, 5), rat(0, 1)],
        expected_reduced_masses: vec![rat(3, 5), rat(2, 5)],
    }
}
