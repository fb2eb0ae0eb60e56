//! Stochastic dynamical systems on finite probability spaces: the
//! almost-surely invariant σ-algebra, the invariant object with its
//! projection/section pair, factorization of invariant morphisms through it,
//! ergodicity, ergodic decomposition, time reversal, and the equilibrium
//! idempotent.
//!
//! A system is a finite list of measure-preserving generator kernels acting
//! on one probability space; the acting monoid is the free monoid on the
//! generators. Since almost-sure equality is a congruence, invariance under
//! the generators is equivalent to invariance under every word, so nothing
//! beyond the generator list is ever stored.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate;
use crate::kernel::Kernel;
use crate::ps::{as_equal, quotient_by_partition, Partition, ProbSpace, PsMorphism};
use crate::rational::Rat;
use crate::space::Dist;

/// A probability space together with measure-preserving generator kernels.
#[derive(Debug, Clone)]
pub struct DynSystem {
    base: ProbSpace,
    generators: Vec<Kernel>,
}

impl DynSystem {
    /// Validates that every generator is an endo-kernel of the base space
    /// that preserves the base measure exactly. Also asserts support
    /// absorption: positive-mass states only transition to positive-mass
    /// states, which follows from measure preservation and is relied on
    /// throughout the invariant-object computation.
    pub fn new(base: ProbSpace, generators: Vec<Kernel>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for (i, generator) in generators.iter().enumerate() {
            if generator.source() != base.space() || generator.target() != base.space() {
                return Err(Error::SpaceMismatch {
                    context: format!("generator {i} must act on the base space"),
                });
            }
            if &generator.push(base.dist())? != base.dist() {
                return Err(Error::NotMeasurePreserving { generator: i });
            }
            for &x in base.support() {
                for y in base.space().indices() {
                    if !generator.entry(y, x).is_zero() && !base.in_support(y) {
                        return Err(Error::Internal(format!(
                            "support absorption violated: generator {i} moves mass from {} to null state {}",
                            base.space().label(x),
                            base.space().label(y)
                        )));
                    }
                }
            }
        }
        Ok(Self { base, generators })
    }

    pub fn base(&self) -> &ProbSpace {
        &self.base
    }

    pub fn generators(&self) -> &[Kernel] {
        &self.generators
    }

    /// Generators wrapped as endo-morphisms of the base space.
    pub fn generator_morphisms(&self) -> Vec<PsMorphism> {
        self.generators
            .iter()
            .map(|m| {
                PsMorphism::new(self.base.clone(), self.base.clone(), m.clone())
                    .expect("generators are validated at construction")
            })
            .collect()
    }
}

fn positive_edge(generators: &[Kernel], x: usize, y: usize) -> bool {
    generators.iter().any(|m| !m.entry(y, x).is_zero())
}

/// Weakly connected components of the positive-transition graph restricted
/// to `nodes`, each sorted, ordered by smallest member.
fn weak_components(nodes: &[usize], generators: &[Kernel]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = nodes.to_vec();
    let mut components = Vec::new();
    while let Some(&seed) = remaining.first() {
        let mut component = vec![seed];
        let mut frontier = vec![seed];
        remaining.retain(|&x| x != seed);
        while let Some(x) = frontier.pop() {
            let linked: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&y| positive_edge(generators, x, y) || positive_edge(generators, y, x))
                .collect();
            for y in linked {
                remaining.retain(|&z| z != y);
                component.push(y);
                frontier.push(y);
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components.sort_by_key(|c| c[0]);
    components
}

/// The finest partition whose block unions generate the almost-surely
/// invariant sets: weakly connected components of the positive-transition
/// graph on the support, plus weakly connected components of the null states
/// under the same rule (kept as zero-mass blocks for reporting; any grouping
/// of null states is almost-surely equal to any other).
pub fn invariant_partition(sys: &DynSystem) -> Partition {
    let support = sys.base.support().to_vec();
    let nulls: Vec<usize> = sys
        .base
        .space()
        .indices()
        .filter(|&x| !sys.base.in_support(x))
        .collect();
    let mut blocks = weak_components(&support, &sys.generators);
    blocks.extend(weak_components(&nulls, &sys.generators));
    Partition::new(sys.base.space().clone(), blocks).expect("components partition the space")
}

/// The partition generating the strictly invariant sets: those `A` with
/// `m(A|x) = 1_A(x)` at every state, not just almost all. Computed as the
/// weakly connected components of the positive-transition graph on all
/// states.
pub fn strict_invariant_partition(sys: &DynSystem) -> Partition {
    let nodes: Vec<usize> = sys.base.space().indices().collect();
    let blocks = weak_components(&nodes, &sys.generators);
    Partition::new(sys.base.space().clone(), blocks).expect("components partition the space")
}

/// The invariant object of a system: the quotient by the invariant
/// partition, with its projection, the section (Bayesian inverse of the
/// projection, with uniform columns on zero-mass blocks), and the
/// equilibrium idempotent `section ∘ projection`.
#[derive(Debug, Clone)]
pub struct InvariantObject {
    partition: Partition,
    components: ProbSpace,
    projection: PsMorphism,
    section: PsMorphism,
    equilibrium: PsMorphism,
}

impl InvariantObject {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// The quotient space: one state per block, carrying the block masses.
    pub fn components(&self) -> &ProbSpace {
        &self.components
    }

    /// `X → X_inv`, the deterministic block map.
    pub fn projection(&self) -> &PsMorphism {
        &self.projection
    }

    /// `X_inv → X`: each positive block goes to its conditional measure,
    /// each zero-mass block to the uniform distribution on the block.
    pub fn section(&self) -> &PsMorphism {
        &self.section
    }

    /// The transition-to-equilibrium idempotent `section ∘ projection`.
    pub fn equilibrium(&self) -> &PsMorphism {
        &self.equilibrium
    }

    /// Indices of positive-mass blocks, in block order.
    pub fn positive_blocks(&self) -> Vec<usize> {
        self.components.support().to_vec()
    }
}

/// Computes the invariant object. The construction is verified before
/// returning: block invariance on the support, `section = projection†` as
/// morphisms, `projection ∘ section ≃ id`, and idempotency of the
/// equilibrium; a violation is an engine bug and panics.
pub fn invariant_object(sys: &DynSystem) -> InvariantObject {
    let partition = invariant_partition(sys);
    let (components, projection) =
        quotient_by_partition(&sys.base, &partition).expect("invariant partition fits the base");

    let n = sys.base.len();
    let section_rows: Vec<Vec<Rat>> = partition
        .blocks()
        .iter()
        .map(|block| {
            let block_mass = sys.base.dist().mass_of(block);
            let mut row = vec![Rat::zero(); n];
            if block_mass.is_zero() {
                let share = crate::rational::rat(1, block.len() as i64);
                for &x in block {
                    row[x] = share.clone();
                }
            } else {
                for &x in block {
                    row[x] = sys.base.dist().mass_at(x) / &block_mass;
                }
            }
            row
        })
        .collect();
    let section_kernel = Kernel::new(
        components.space().clone(),
        sys.base.space().clone(),
        section_rows,
    )
    .expect("conditional rows are stochastic");
    let section = PsMorphism::new(components.clone(), sys.base.clone(), section_kernel)
        .expect("conditional measures reassemble the base measure");
    let equilibrium = section
        .compose(&projection)
        .expect("projection and section compose");

    // Verification of the construction's own invariants.
    for (b, block) in partition.blocks().iter().enumerate() {
        if components.dist().mass_at(b).is_zero() {
            continue;
        }
        for &x in sys.base.support() {
            let inside = block.contains(&x);
            for m in &sys.generators {
                let mass = m.mass_into(block, x);
                let expected = if inside { Rat::one() } else { Rat::zero() };
                assert!(
                    mass == expected,
                    "internal: block {} is not invariant at state {}",
                    partition.block_label(b),
                    sys.base.space().label(x)
                );
            }
        }
    }
    assert!(
        section == projection.dagger(),
        "internal: section must be the Bayesian inverse of the projection"
    );
    assert!(
        projection.compose(&section).expect("composable") == PsMorphism::identity(&components),
        "internal: projection ∘ section must be the identity almost surely"
    );
    assert!(
        equilibrium.compose(&equilibrium).expect("composable") == equilibrium,
        "internal: equilibrium must be almost surely idempotent"
    );

    InvariantObject {
        partition,
        components,
        projection,
        section,
        equilibrium,
    }
}

fn expect_base_source(f: &PsMorphism, sys: &DynSystem, context: &str) -> Result<()> {
    if f.src().dist() != sys.base.dist() {
        return Err(Error::SpaceMismatch {
            context: context.to_owned(),
        });
    }
    Ok(())
}

fn expect_base_target(g: &PsMorphism, sys: &DynSystem, context: &str) -> Result<()> {
    if g.dst().dist() != sys.base.dist() {
        return Err(Error::SpaceMismatch {
            context: context.to_owned(),
        });
    }
    Ok(())
}

/// First `(generator, state)` witnessing that `f ∘ m ≄ f`, if any.
pub fn right_invariance_witness(f: &PsMorphism, sys: &DynSystem) -> Result<Option<(usize, usize)>> {
    expect_base_source(f, sys, "right invariance")?;
    for (i, m) in sys.generators.iter().enumerate() {
        let composed = f.kernel().compose(m)?;
        for &x in sys.base.support() {
            if composed.row(x) != f.kernel().row(x) {
                return Ok(Some((i, x)));
            }
        }
    }
    Ok(None)
}

/// `f ∘ m ≃ f` for every generator (an invariant observable).
pub fn is_right_invariant(f: &PsMorphism, sys: &DynSystem) -> Result<bool> {
    Ok(right_invariance_witness(f, sys)?.is_none())
}

/// First generator witnessing that `m ∘ g ≄ g`, if any.
pub fn left_invariance_witness(g: &PsMorphism, sys: &DynSystem) -> Result<Option<usize>> {
    expect_base_target(g, sys, "left invariance")?;
    for (i, m) in sys.generators.iter().enumerate() {
        let composed = m.compose(g.kernel())?;
        if !as_equal(&composed, g.kernel(), g.src().dist())? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `m ∘ g ≃ g` for every generator (a family of invariant measures).
pub fn is_left_invariant(g: &PsMorphism, sys: &DynSystem) -> Result<bool> {
    Ok(left_invariance_witness(g, sys)?.is_none())
}

/// Deterministic invariance, almost surely: along every positive-probability
/// transition out of the support, the column of `f` does not change.
pub fn is_det_invariant(f: &PsMorphism, sys: &DynSystem) -> Result<bool> {
    expect_base_source(f, sys, "deterministic invariance")?;
    for m in &sys.generators {
        for &x in sys.base.support() {
            for y in sys.base.space().indices() {
                if !m.entry(y, x).is_zero() && f.kernel().row(y) != f.kernel().row(x) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Strict deterministic invariance, ignoring the measure: every state is
/// treated as support. Returns the first violating `(generator, from, to)`.
pub fn strict_det_invariance_witness(f: &Kernel, sys: &DynSystem) -> Option<(usize, usize, usize)> {
    for (i, m) in sys.generators.iter().enumerate() {
        for x in sys.base.space().indices() {
            for y in sys.base.space().indices() {
                if !m.entry(y, x).is_zero() && f.row(y) != f.row(x) {
                    return Some((i, x, y));
                }
            }
        }
    }
    None
}

/// Factors a right-invariant morphism through the invariant object: returns
/// the almost-surely unique `f̃` with `f̃ ∘ projection ≃ f`.
///
/// The column of `f̃` at a positive block is the common column of `f` on
/// that block's support states. Errors carry a witness generator and state
/// when `f` is not right-invariant.
pub fn factor_right_invariant(f: &PsMorphism, sys: &DynSystem) -> Result<PsMorphism> {
    if let Some((generator, state)) = right_invariance_witness(f, sys)? {
        return Err(Error::NotRightInvariant {
            generator,
            state: sys.base.space().label(state).to_owned(),
        });
    }
    let inv = invariant_object(sys);
    let prior = f.dst().dist().mass().to_vec();
    let rows: Vec<Vec<Rat>> = inv
        .partition
        .blocks()
        .iter()
        .map(|block| {
            let members: Vec<usize> = block
                .iter()
                .copied()
                .filter(|&x| sys.base.in_support(x))
                .collect();
            match members.split_first() {
                None => prior.clone(),
                Some((&first, rest)) => {
                    for &x in rest {
                        assert!(
                            f.kernel().row(x) == f.kernel().row(first),
                            "internal: right-invariant morphism is not constant on block support"
                        );
                    }
                    f.kernel().row(first).to_vec()
                }
            }
        })
        .collect();
    let kernel = Kernel::new(
        inv.components.space().clone(),
        f.dst().space().clone(),
        rows,
    )
    .expect("block columns are stochastic");
    let factored = PsMorphism::new(inv.components.clone(), f.dst().clone(), kernel)
        .map_err(|e| Error::Internal(format!("factorization must be measure-preserving: {e}")))?;
    assert!(
        factored.compose(&inv.projection).expect("composable") == *f,
        "internal: factorization must commute with the projection"
    );
    assert!(
        f.is_as_deterministic() == factored.is_as_deterministic(),
        "internal: determinism must transfer through the factorization"
    );
    Ok(factored)
}

/// Factors a left-invariant morphism through the invariant object: returns
/// the almost-surely unique `g̃ = projection ∘ g` with `section ∘ g̃ ≃ g`.
pub fn factor_left_invariant(g: &PsMorphism, sys: &DynSystem) -> Result<PsMorphism> {
    if let Some(generator) = left_invariance_witness(g, sys)? {
        return Err(Error::NotLeftInvariant { generator });
    }
    let inv = invariant_object(sys);
    let factored = inv.projection.compose(g)?;
    assert!(
        inv.section.compose(&factored).expect("composable") == *g,
        "internal: section ∘ factorization must recover the morphism"
    );
    Ok(factored)
}

/// A system is ergodic when its invariant measure concentrates on a single
/// block: the quotient measure is a point mass.
pub fn is_ergodic(sys: &DynSystem) -> bool {
    let partition = invariant_partition(sys);
    partition
        .blocks()
        .iter()
        .filter(|block| !sys.base.dist().mass_of(block).is_zero())
        .count()
        == 1
}

/// The ergodic decomposition: one entry per positive block, with the block
/// mass as weight and the conditional measure on the block as component.
/// The weighted mixture of the components is exactly the base measure.
pub fn ergodic_decomposition(sys: &DynSystem) -> Vec<(Rat, Dist)> {
    let inv = invariant_object(sys);
    inv.positive_blocks()
        .into_iter()
        .map(|b| {
            let weight = inv.components.dist().mass_at(b).clone();
            let component = Dist::new(
                sys.base.space().clone(),
                inv.section.kernel().row(b).to_vec(),
            )
            .expect("section rows are distributions");
            (weight, component)
        })
        .collect()
}

/// Reduces an alternative ergodic decomposition to the canonical one.
///
/// Given `k : (A, b) → (X, p)` with `k` left-invariant and `projection ∘ k`
/// almost surely deterministic (the definition of an a.s. ergodic kernel),
/// returns the a.s.-deterministic reduction `d = projection ∘ k`, which
/// satisfies `section ∘ d ≃ k`.
pub fn reduce_decomposition(k: &PsMorphism, sys: &DynSystem) -> Result<PsMorphism> {
    if let Some(generator) = left_invariance_witness(k, sys)? {
        return Err(Error::NotErgodicDecomposition(format!(
            "kernel is not left-invariant under generator {generator}"
        )));
    }
    let inv = invariant_object(sys);
    let reduction = inv.projection.compose(k)?;
    if !reduction.is_as_deterministic() {
        return Err(Error::NotErgodicDecomposition(
            "kernel components are not almost surely ergodic".to_owned(),
        ));
    }
    assert!(
        inv.section.compose(&reduction).expect("composable") == *k,
        "internal: reduction must reassemble the decomposition through the section"
    );
    Ok(reduction)
}

/// The time-reversed system: same base, generators replaced by their
/// Bayesian inverses.
pub fn reverse_system(sys: &DynSystem) -> DynSystem {
    let generators = sys
        .generator_morphisms()
        .iter()
        .map(|m| m.dagger().kernel().clone())
        .collect();
    DynSystem::new(sys.base.clone(), generators)
        .expect("Bayesian inverses of measure-preserving kernels are measure-preserving")
}

/// Outcome of one sampled two-route comparison in [`equilibrium_checks`].
#[derive(Debug, Clone, Serialize)]
pub struct CriterionSample {
    pub agreements: usize,
    pub total: usize,
    pub counterexample: Option<String>,
}

/// Outcome of the independence characterization of ergodicity.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceCheck {
    pub ergodic: bool,
    pub factorizes: bool,
    pub exhaustive: bool,
    pub pairs_checked: usize,
    pub counterexample: Option<(Vec<String>, Vec<String>)>,
}

/// Results of the equilibrium-idempotent law checks for one system.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    /// Per generator: `e ∘ m ≃ e` and `m ∘ e ≃ e`.
    pub commutation: Vec<(usize, bool, bool)>,
    /// Sampled equivalence: right-invariant ⟺ absorbed by the equilibrium
    /// on the right.
    pub right_criterion: CriterionSample,
    /// Sampled equivalence: left-invariant ⟺ absorbed by the equilibrium
    /// on the left.
    pub left_criterion: CriterionSample,
    /// Ergodicity ⟺ the equilibrium factorizes subset pairs independently.
    pub independence: IndependenceCheck,
    /// Detailed balance: the equilibrium equals its own Bayesian inverse.
    pub self_adjoint: bool,
}

impl EquilibriumReport {
    pub fn passed(&self) -> bool {
        self.commutation.iter().all(|&(_, r, l)| r && l)
            && self.right_criterion.counterexample.is_none()
            && self.left_criterion.counterexample.is_none()
            && self.independence.ergodic == self.independence.factorizes
            && self.self_adjoint
    }
}

const INDEPENDENCE_EXHAUSTIVE_LIMIT: usize = 12;
const INDEPENDENCE_SAMPLES: usize = 10_000;
const CRITERION_SAMPLES: usize = 12;

/// Runs every equilibrium law of the system's idempotent: commutation with
/// the generators, the invariance criteria on sampled morphisms, the
/// independence characterization of ergodicity (exhaustive over subset pairs
/// up to 12 states, sampled above), and detailed balance. All checks are
/// theorems, so a failing report signals a bug, not a property of the input.
pub fn equilibrium_checks(sys: &DynSystem, seed: u64) -> EquilibriumReport {
    let inv = invariant_object(sys);
    let equilibrium = inv.equilibrium();
    let p = sys.base.dist();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let commutation = sys
        .generators
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let em = equilibrium.kernel().compose(m).expect("composable");
            let me = m.compose(equilibrium.kernel()).expect("composable");
            let right = as_equal(&em, equilibrium.kernel(), p).expect("same spaces");
            let left = as_equal(&me, equilibrium.kernel(), p).expect("same spaces");
            (i, right, left)
        })
        .collect();

    let mut right_criterion = CriterionSample {
        agreements: 0,
        total: 0,
        counterexample: None,
    };
    for case in 0..CRITERION_SAMPLES {
        let f = if case % 2 == 0 {
            let h = generate::rand_ps_morphism(&mut rng, &inv.components, 4, 16);
            h.compose(&inv.projection).expect("composable")
        } else {
            generate::rand_ps_morphism(&mut rng, &sys.base, 4, 16)
        };
        let invariant = is_right_invariant(&f, sys).expect("source matches");
        let absorbed = f.compose(equilibrium).expect("composable") == f;
        right_criterion.total += 1;
        if invariant == absorbed {
            right_criterion.agreements += 1;
        } else if right_criterion.counterexample.is_none() {
            right_criterion.counterexample = Some(format!(
                "sampled observable {case}: invariant={invariant} absorbed={absorbed}"
            ));
        }
    }

    let mut left_criterion = CriterionSample {
        agreements: 0,
        total: 0,
        counterexample: None,
    };
    for case in 0..CRITERION_SAMPLES {
        let g = if case % 2 == 0 {
            let h = generate::rand_ps_morphism_into(&mut rng, &inv.components, 4, 16);
            inv.section.compose(&h).expect("composable")
        } else {
            let kernel = generate::rand_preserving_kernel(&mut rng, &sys.base, 16);
            PsMorphism::new(sys.base.clone(), sys.base.clone(), kernel)
                .expect("coupling kernels preserve the measure")
        };
        let invariant = is_left_invariant(&g, sys).expect("target matches");
        let absorbed = equilibrium.compose(&g).expect("composable") == g;
        left_criterion.total += 1;
        if invariant == absorbed {
            left_criterion.agreements += 1;
        } else if left_criterion.counterexample.is_none() {
            left_criterion.counterexample = Some(format!(
                "sampled measure family {case}: invariant={invariant} absorbed={absorbed}"
            ));
        }
    }

    let independence = independence_check(sys, equilibrium, &mut rng);
    let self_adjoint = equilibrium.dagger() == *equilibrium;

    EquilibriumReport {
        commutation,
        right_criterion,
        left_criterion,
        independence,
        self_adjoint,
    }
}

/// Standalone independence characterization: whether the equilibrium
/// factorizes all subset pairs, paired with the ergodicity flag. The two
/// must agree; they are computed by independent routes (subset enumeration
/// vs block counting).
pub fn independence_factorizes(sys: &DynSystem, seed: u64) -> IndependenceCheck {
    let inv = invariant_object(sys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    independence_check(sys, inv.equilibrium(), &mut rng)
}

/// Decides whether `Σ_{x∈A} e(B|x) p(x) = p(A) p(B)` for all state subsets
/// `A`, `B` — via Gray-code enumeration when the space is small enough,
/// sampled otherwise — and pairs the answer with ergodicity.
fn independence_check(
    sys: &DynSystem,
    equilibrium: &PsMorphism,
    rng: &mut ChaCha8Rng,
) -> IndependenceCheck {
    let n = sys.base.len();
    let p = sys.base.dist();
    let e = equilibrium.canonical();
    let ergodic = is_ergodic(sys);

    let labels_of = |mask: usize| -> Vec<String> {
        (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| sys.base.space().label(i).to_owned())
            .collect()
    };

    if n <= INDEPENDENCE_EXHAUSTIVE_LIMIT {
        let masks = 1usize << n;
        let mut mass_of = vec![Rat::zero(); masks];
        for mask in 1..masks {
            let low = mask.trailing_zeros() as usize;
            mass_of[mask] = &mass_of[mask & (mask - 1)] + p.mass_at(low);
        }
        // weighted[y][x] = e(y|x) p(x)
        let weighted: Vec<Vec<Rat>> = (0..n)
            .map(|y| (0..n).map(|x| e.entry(y, x) * p.mass_at(x)).collect())
            .collect();

        let mut pairs_checked = 0;
        let mut row_sum = vec![Rat::zero(); n]; // x ↦ Σ_{y∈B} weighted[y][x]
        let mut bmask = 0usize;
        for bstep in 0..masks {
            if bstep > 0 {
                let flip = bstep.trailing_zeros() as usize;
                bmask ^= 1 << flip;
                if bmask & (1 << flip) != 0 {
                    for (x, cell) in row_sum.iter_mut().enumerate() {
                        *cell += &weighted[flip][x];
                    }
                } else {
                    for (x, cell) in row_sum.iter_mut().enumerate() {
                        *cell -= &weighted[flip][x];
                    }
                }
            }
            let pb = &mass_of[bmask];
            let mut lhs = Rat::zero();
            let mut amask = 0usize;
            for astep in 0..masks {
                if astep > 0 {
                    let flip = astep.trailing_zeros() as usize;
                    amask ^= 1 << flip;
                    if amask & (1 << flip) != 0 {
                        lhs += &row_sum[flip];
                    } else {
                        lhs -= &row_sum[flip];
                    }
                }
                pairs_checked += 1;
                if lhs != &mass_of[amask] * pb {
                    return IndependenceCheck {
                        ergodic,
                        factorizes: false,
                        exhaustive: true,
                        pairs_checked,
                        counterexample: Some((labels_of(amask), labels_of(bmask))),
                    };
                }
            }
        }
        IndependenceCheck {
            ergodic,
            factorizes: true,
            exhaustive: true,
            pairs_checked,
            counterexample: None,
        }
    } else {
        let mut pairs_checked = 0;
        for _ in 0..INDEPENDENCE_SAMPLES {
            let amask: u64 = rng.random_range(0..(1u64 << n.min(63)));
            let bmask: u64 = rng.random_range(0..(1u64 << n.min(63)));
            pairs_checked += 1;
            let a: Vec<usize> = (0..n).filter(|i| amask & (1 << i) != 0).collect();
            let b: Vec<usize> = (0..n).filter(|i| bmask & (1 << i) != 0).collect();
            let lhs: Rat = a
                .iter()
                .map(|&x| e.mass_into(&b, x) * p.mass_at(x))
                .fold(Rat::zero(), |acc, v| acc + v);
            let rhs = p.mass_of(&a) * p.mass_of(&b);
            if lhs != rhs {
                return IndependenceCheck {
                    ergodic,
                    factorizes: false,
                    exhaustive: false,
                    pairs_checked,
                    counterexample: Some((labels_of(amask as usize), labels_of(bmask as usize))),
                };
            }
        }
        IndependenceCheck {
            ergodic,
            factorizes: true,
            exhaustive: false,
            pairs_checked,
            counterexample: None,
        }
    }
}
