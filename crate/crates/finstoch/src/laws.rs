//! Executable law suite: every categorical identity the engine relies on,
//! checked as an exact matrix equation on seeded random instances.
//!
//! Laws whose hypotheses are themselves equations (causality, positivity,
//! the Cauchy-Schwarz property) use constructive generators that satisfy
//! the hypothesis on the nose — uniform random instances essentially never
//! do — plus a rejection-sampling fallback that filters noisy candidates
//! through an exact hypothesis check. Every law here is a theorem of the
//! category: a recorded failure is an engine bug, and the failure record
//! (seed, case index, rendered matrices) reproduces the exact case.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use num_traits::Zero;

use crate::dynamics::{self, DynSystem};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::generate;
use crate::kernel::Kernel;
use crate::ps::{as_equal, check_dag_id, find_ps_iso, ProbSpace, PsMorphism};
use crate::rational::{format_rat, Rat};
use crate::space::{Dist, FinSpace};

/// Deterministic case generation parameters. The same seed and bounds
/// always reproduce the identical case sequence.
#[derive(Debug, Clone, Serialize)]
pub struct CaseGen {
    pub seed: u64,
    pub max_states: usize,
    pub max_denominator: u32,
}

impl Default for CaseGen {
    fn default() -> Self {
        Self {
            seed: 0,
            max_states: 6,
            max_denominator: 32,
        }
    }
}

impl CaseGen {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn case_rng(&self, index: usize) -> ChaCha8Rng {
        let mixed = self
            .seed
            .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        ChaCha8Rng::seed_from_u64(mixed)
    }
}

/// A law violation with everything needed to re-run the case.
#[derive(Debug, Clone, Serialize)]
pub struct LawFailure {
    pub case_index: usize,
    pub seed: u64,
    pub message: String,
    /// Named renderings of every matrix and measure in the case.
    pub artifacts: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub law: String,
    pub cases: usize,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Violation {
    message: String,
    artifacts: Vec<(String, String)>,
}

type CaseOutcome = std::result::Result<(), Violation>;

fn fail(message: impl Into<String>, artifacts: Vec<(String, String)>) -> CaseOutcome {
    Err(Violation {
        message: message.into(),
        artifacts,
    })
}

fn render_kernel(k: &Kernel) -> String {
    k.rows()
        .iter()
        .enumerate()
        .map(|(x, row)| {
            let cells: Vec<String> = row.iter().map(format_rat).collect();
            format!("{}: [{}]", k.source().label(x), cells.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn render_dist(d: &Dist) -> String {
    let cells: Vec<String> = d
        .mass()
        .iter()
        .enumerate()
        .map(|(x, m)| format!("{}={}", d.space().label(x), format_rat(m)))
        .collect();
    cells.join(", ")
}

fn kernel_artifact(name: &str, k: &Kernel) -> (String, String) {
    (name.to_owned(), render_kernel(k))
}

fn dist_artifact(name: &str, d: &Dist) -> (String, String) {
    (name.to_owned(), render_dist(d))
}

/// All registered law names.
pub fn law_names() -> Vec<&'static str> {
    LAWS.iter().map(|(name, _)| *name).collect()
}

type LawFn = fn(&mut ChaCha8Rng, &CaseGen) -> CaseOutcome;

const LAWS: &[(&str, LawFn)] = &[
    ("comonoid", law_comonoid),
    ("tensor-functorial", law_tensor_functorial),
    ("causality", law_causality),
    ("positivity", law_positivity),
    ("cauchy-schwarz", law_cauchy_schwarz),
    ("dag-id", law_dag_id),
    ("iso-bayesian", law_iso_bayesian),
    ("as-det-compose", law_as_det_compose),
    ("dagger-involution", law_dagger_involution),
    ("dagger-contravariance", law_dagger_contravariance),
    ("as-congruence", law_as_congruence),
    ("harmonic-invariant", law_harmonic_invariant),
    ("det-inv-measurable", law_det_inv_measurable),
    ("section-left-invariant", law_section_left_invariant),
    ("colimit-uniqueness", law_colimit_uniqueness),
    ("limit-uniqueness", law_limit_uniqueness),
    ("time-reversal", law_time_reversal),
    ("equilibrium-laws", law_equilibrium),
    ("alt-ergodic", law_alt_ergodic),
    ("detailed-balance", law_detailed_balance),
    ("word-invariance", law_word_invariance),
    ("harmonic-counterexample", law_harmonic_counterexample),
];

/// Runs one law for the given number of seeded cases.
pub fn run_law(name: &str, gen: &CaseGen, cases: usize) -> Result<LawReport> {
    let law = LAWS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| Error::UnknownLaw(name.to_owned()))?;
    let mut failures = Vec::new();
    for index in 0..cases {
        let mut rng = gen.case_rng(index);
        if let Err(violation) = law(&mut rng, gen) {
            failures.push(LawFailure {
                case_index: index,
                seed: gen.seed,
                message: violation.message,
                artifacts: violation.artifacts,
            });
        }
    }
    Ok(LawReport {
        law: name.to_owned(),
        cases,
        failures,
    })
}

/// Runs every registered law.
pub fn run_all(gen: &CaseGen, cases: usize) -> Vec<LawReport> {
    law_names()
        .into_iter()
        .map(|name| run_law(name, gen, cases).expect("registered law names are valid"))
        .collect()
}

/// The built-in fixtures, re-exported alongside the law registry.
pub fn builtin_fixtures() -> Vec<fixtures::Fixture> {
    fixtures::fixtures()
}

/// Random dynamical system: either a random chain with an exactly solved
/// stationary mixture, or a multi-generator system of block couplings.
pub fn rand_system(rng: &mut ChaCha8Rng, max_states: usize, max_den: u32) -> DynSystem {
    if rng.random_ratio(1, 2) {
        let (base, kernel) = generate::rand_chain_with_stationary(rng, 2, max_states, max_den);
        DynSystem::new(base, vec![kernel]).expect("stationary mixture is preserved")
    } else {
        let base = generate::rand_prob_space(rng, 2, max_states, max_den, true);
        let blocks = generate::rand_support_blocks(rng, &base, 3);
        let count = rng.random_range(1..=3usize);
        let generators = (0..count)
            .map(|_| generate::rand_block_preserving_kernel(rng, &base, &blocks, max_den))
            .collect();
        DynSystem::new(base, generators).expect("block couplings preserve the measure")
    }
}

fn rand_morphism_mixed(rng: &mut ChaCha8Rng, src: &ProbSpace, max_den: u32) -> PsMorphism {
    let target = FinSpace::new((0..rng.random_range(1..=4usize)).map(|i| format!("t{i}")))
        .expect("labels distinct");
    let kernel = match rng.random_range(0..3u8) {
        0 => generate::rand_kernel(rng, src.space(), &target, max_den),
        1 => generate::rand_dirac(rng, src.space(), &target),
        _ => {
            // Deterministic on the support, noisy elsewhere.
            let mut k = generate::rand_dirac(rng, src.space(), &target);
            for x in src.space().indices() {
                if !src.in_support(x) {
                    k = k
                        .with_row(x, generate::rand_simplex(rng, target.len(), max_den, true))
                        .expect("replacement row is stochastic");
                }
            }
            k
        }
    };
    generate::morphism_onto_push(src, kernel)
}

/// Right-invariant morphism built as a random map out of the component
/// space composed with the projection; returns the generating map too.
fn rand_right_invariant(
    rng: &mut ChaCha8Rng,
    sys: &DynSystem,
    max_den: u32,
) -> (PsMorphism, PsMorphism) {
    let inv = dynamics::invariant_object(sys);
    let h = generate::rand_ps_morphism(rng, inv.components(), 4, max_den);
    let f = h.compose(inv.projection()).expect("composable");
    (f, h)
}

// ---------------------------------------------------------------------------
// FinStoch structural laws
// ---------------------------------------------------------------------------

fn law_comonoid(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let x = generate::rand_space(rng, 1, gen.max_states);
    let copy = Kernel::copy(&x);
    let id = Kernel::identity(x.clone());

    let left = Kernel::associator(&x, &x, &x)
        .compose(&copy.tensor(&id).compose(&copy).expect("composable"))
        .expect("composable");
    let right = id.tensor(&copy).compose(&copy).expect("composable");
    if left != right {
        return fail(
            "coassociativity failed",
            vec![kernel_artifact("copy", &copy)],
        );
    }

    let counit_left = Kernel::left_unitor(&x)
        .compose(
            &Kernel::del(&x)
                .tensor(&id)
                .compose(&copy)
                .expect("composable"),
        )
        .expect("composable");
    let counit_right = Kernel::right_unitor(&x)
        .compose(
            &id.tensor(&Kernel::del(&x))
                .compose(&copy)
                .expect("composable"),
        )
        .expect("composable");
    if counit_left != id || counit_right != id {
        return fail("counitality failed", vec![kernel_artifact("copy", &copy)]);
    }

    if Kernel::swap(&x, &x).compose(&copy).expect("composable") != copy {
        return fail(
            "cocommutativity failed",
            vec![kernel_artifact("copy", &copy)],
        );
    }

    // del is natural: del ∘ k = del for a random kernel.
    let y = generate::rand_space(rng, 1, gen.max_states);
    let k = generate::rand_kernel(rng, &x, &y, gen.max_denominator);
    if Kernel::del(&y).compose(&k).expect("composable") != Kernel::del(&x) {
        return fail("discard naturality failed", vec![kernel_artifact("k", &k)]);
    }
    Ok(())
}

fn law_tensor_functorial(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let bound = gen.max_states.min(4);
    let (x1, y1, z1) = (
        generate::rand_space(rng, 1, bound),
        generate::rand_space(rng, 1, bound),
        generate::rand_space(rng, 1, bound),
    );
    let (x2, y2, z2) = (
        generate::rand_space(rng, 1, bound),
        generate::rand_space(rng, 1, bound),
        generate::rand_space(rng, 1, bound),
    );
    let k1 = generate::rand_kernel(rng, &x1, &y1, gen.max_denominator);
    let h1 = generate::rand_kernel(rng, &y1, &z1, gen.max_denominator);
    let k2 = generate::rand_kernel(rng, &x2, &y2, gen.max_denominator);
    let h2 = generate::rand_kernel(rng, &y2, &z2, gen.max_denominator);

    let composed_then_tensored = h1
        .compose(&k1)
        .expect("composable")
        .tensor(&h2.compose(&k2).expect("composable"));
    let tensored_then_composed = h1.tensor(&h2).compose(&k1.tensor(&k2)).expect("composable");
    if composed_then_tensored != tensored_then_composed {
        return fail(
            "tensor functoriality failed",
            vec![
                kernel_artifact("k1", &k1),
                kernel_artifact("h1", &h1),
                kernel_artifact("k2", &k2),
                kernel_artifact("h2", &h2),
            ],
        );
    }

    // Composition is associative exactly.
    let w = generate::rand_space(rng, 1, bound);
    let j = generate::rand_kernel(rng, &z1, &w, gen.max_denominator);
    let left = j
        .compose(&h1)
        .expect("composable")
        .compose(&k1)
        .expect("composable");
    let right = j
        .compose(&h1.compose(&k1).expect("composable"))
        .expect("composable");
    if left != right {
        return fail(
            "composition associativity failed",
            vec![
                kernel_artifact("k1", &k1),
                kernel_artifact("h1", &h1),
                kernel_artifact("j", &j),
            ],
        );
    }

    // Deterministic kernels are closed under composition and tensor.
    let d1 = generate::rand_dirac(rng, &x1, &y1);
    let d2 = generate::rand_dirac(rng, &y1, &z1);
    if !d2.compose(&d1).expect("composable").is_deterministic()
        || !d1.tensor(&d2).is_deterministic()
    {
        return fail(
            "determinism closure failed",
            vec![kernel_artifact("d1", &d1)],
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Axioms with equational hypotheses
// ---------------------------------------------------------------------------

fn law_causality(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let bound = gen.max_states.min(4);
    let a_space = generate::rand_space(rng, 1, bound);
    let a = ProbSpace::new(generate::rand_dist(
        rng,
        &a_space,
        gen.max_denominator,
        true,
    ));
    let x = generate::rand_space(rng, 1, bound);
    let y = generate::rand_space(rng, 1, bound);
    let z = generate::rand_space(rng, 1, bound);
    let f = generate::rand_kernel(rng, a.space(), &x, gen.max_denominator);
    let g = generate::rand_kernel(rng, &x, &y, gen.max_denominator);
    let h1 = generate::rand_kernel(rng, &y, &z, gen.max_denominator);

    // Marginal on Y after f, g from the state on A.
    let gf = g.compose(&f).expect("composable");
    let marginal = gf.push(a.dist()).expect("composable");
    let h2 = if rng.random_ratio(1, 3) {
        h1.clone()
    } else {
        let mut h2 = h1.clone();
        for yy in y.indices() {
            if marginal.mass_at(yy).is_zero() {
                h2 = h2
                    .with_row(
                        yy,
                        generate::rand_simplex(rng, z.len(), gen.max_denominator, true),
                    )
                    .expect("replacement row is stochastic");
            }
        }
        h2
    };

    // Hypothesis: equal joints over (Y, Z) pointwise in the source.
    for &aa in a.support() {
        for yy in y.indices() {
            for zz in z.indices() {
                let lhs = gf.entry(yy, aa) * h1.entry(zz, yy);
                let rhs = gf.entry(yy, aa) * h2.entry(zz, yy);
                if lhs != rhs {
                    return fail(
                        "causality generator violated its own hypothesis",
                        vec![kernel_artifact("h1", &h1), kernel_artifact("h2", &h2)],
                    );
                }
            }
        }
    }
    // Conclusion: equal joints over (X, Y, Z).
    for &aa in a.support() {
        for xx in x.indices() {
            for yy in y.indices() {
                let weight = f.entry(xx, aa) * g.entry(yy, xx);
                if weight.is_zero() {
                    continue;
                }
                for zz in z.indices() {
                    if &weight * h1.entry(zz, yy) != &weight * h2.entry(zz, yy) {
                        return fail(
                            "causality conclusion failed",
                            vec![
                                dist_artifact("p", a.dist()),
                                kernel_artifact("f", &f),
                                kernel_artifact("g", &g),
                                kernel_artifact("h1", &h1),
                                kernel_artifact("h2", &h2),
                            ],
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn law_positivity(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let bound = gen.max_states.min(4);
    let x = generate::rand_space(rng, 1, bound);
    let y = generate::rand_space(rng, 1, bound);
    let z = generate::rand_space(rng, 1, bound);

    // Strict version: g ∘ f deterministic by construction.
    let (f, g) = if rng.random_ratio(1, 2) {
        let constant = rng.random_range(0..z.len());
        (
            generate::rand_kernel(rng, &x, &y, gen.max_denominator),
            Kernel::dirac(y.clone(), z.clone(), move |_| constant),
        )
    } else {
        (
            generate::rand_dirac(rng, &x, &y),
            generate::rand_dirac(rng, &y, &z),
        )
    };
    let gf = g.compose(&f).expect("composable");
    if !gf.is_deterministic() {
        return fail(
            "positivity generator produced a non-deterministic composite",
            vec![],
        );
    }
    for xx in x.indices() {
        for yy in y.indices() {
            for zz in z.indices() {
                if gf.entry(zz, xx) * f.entry(yy, xx) != f.entry(yy, xx) * g.entry(zz, yy) {
                    return fail(
                        "positivity equation failed",
                        vec![kernel_artifact("f", &f), kernel_artifact("g", &g)],
                    );
                }
            }
        }
    }

    // Relative version: corrupt f off the support; the composite stays
    // p-a.s. deterministic and the equation must hold at support states.
    let p = ProbSpace::new(generate::rand_dist(rng, &x, gen.max_denominator, true));
    let mut f_noisy = f.clone();
    for xx in x.indices() {
        if !p.in_support(xx) {
            f_noisy = f_noisy
                .with_row(
                    xx,
                    generate::rand_simplex(rng, y.len(), gen.max_denominator, true),
                )
                .expect("replacement row is stochastic");
        }
    }
    let gf_noisy = g.compose(&f_noisy).expect("composable");
    for &xx in p.support() {
        for yy in y.indices() {
            for zz in z.indices() {
                if gf_noisy.entry(zz, xx) * f_noisy.entry(yy, xx)
                    != f_noisy.entry(yy, xx) * g.entry(zz, yy)
                {
                    return fail(
                        "relative positivity equation failed",
                        vec![
                            dist_artifact("p", p.dist()),
                            kernel_artifact("f", &f_noisy),
                            kernel_artifact("g", &g),
                        ],
                    );
                }
            }
        }
    }
    Ok(())
}

fn law_cauchy_schwarz(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let bound = gen.max_states.min(5);
    let x = generate::rand_space(rng, 1, bound);
    let y = generate::rand_space(rng, 1, bound);
    let w = generate::rand_space(rng, 1, bound);
    let p = ProbSpace::new(generate::rand_dist(rng, &x, gen.max_denominator, true));
    let f = generate::rand_kernel(rng, &x, &y, gen.max_denominator);

    // Constructive branch: g = f perturbed off the support. Rejection
    // branch: g = f perturbed anywhere, filtered through the hypothesis.
    let mut g = f.clone();
    let constructive = rng.random_ratio(3, 4);
    for xx in x.indices() {
        let off_support = !p.in_support(xx);
        if (constructive && off_support) || (!constructive && rng.random_ratio(1, 2)) {
            g = g
                .with_row(
                    xx,
                    generate::rand_simplex(rng, y.len(), gen.max_denominator, true),
                )
                .expect("replacement row is stochastic");
        }
    }

    // Hypothesis: E_p[f⊗f] = E_p[f⊗g] = E_p[g⊗g] as joints on Y ⊗ Y.
    let joint = |u: &Kernel, v: &Kernel| -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); y.len()]; y.len()];
        for &xx in p.support() {
            let weight = p.dist().mass_at(xx);
            for y1 in y.indices() {
                if u.entry(y1, xx).is_zero() {
                    continue;
                }
                for y2 in y.indices() {
                    out[y1][y2] += weight * u.entry(y1, xx) * v.entry(y2, xx);
                }
            }
        }
        out
    };
    let ff = joint(&f, &f);
    let fg = joint(&f, &g);
    let gg = joint(&g, &g);
    if ff != fg || fg != gg {
        if constructive {
            return fail(
                "Cauchy-Schwarz generator violated its own hypothesis",
                vec![kernel_artifact("f", &f), kernel_artifact("g", &g)],
            );
        }
        return Ok(()); // rejected candidate: the hypothesis genuinely fails
    }

    // Conclusion: f ≃_p g, hence equal joints against any h.
    if !as_equal(&f, &g, p.dist()).expect("same spaces") {
        return fail(
            "Cauchy-Schwarz conclusion failed: morphisms differ on the support",
            vec![
                dist_artifact("p", p.dist()),
                kernel_artifact("f", &f),
                kernel_artifact("g", &g),
            ],
        );
    }
    let h = generate::rand_kernel(rng, &x, &w, gen.max_denominator);
    for &xx in p.support() {
        for yy in y.indices() {
            for ww in w.indices() {
                let lhs = p.dist().mass_at(xx) * f.entry(yy, xx) * h.entry(ww, xx);
                let rhs = p.dist().mass_at(xx) * g.entry(yy, xx) * h.entry(ww, xx);
                if lhs != rhs {
                    return fail(
                        "Cauchy-Schwarz joint against h failed",
                        vec![kernel_artifact("h", &h)],
                    );
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dagger laws
// ---------------------------------------------------------------------------

fn law_dag_id(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let src = generate::rand_prob_space(rng, 1, gen.max_states, gen.max_denominator, true);
    let f = rand_morphism_mixed(rng, &src, gen.max_denominator);
    if !check_dag_id(&f) {
        return fail(
            "determinism/dagger-retraction equivalence failed",
            vec![
                dist_artifact("p", src.dist()),
                kernel_artifact("f", f.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_iso_bayesian(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let a = generate::rand_prob_space(rng, 1, gen.max_states, gen.max_denominator, true);
    // Same positive masses in a shuffled order, with fresh labels and an
    // optional extra null state.
    let mut masses: Vec<Rat> = a
        .support()
        .iter()
        .map(|&x| a.dist().mass_at(x).clone())
        .collect();
    masses.shuffle(rng);
    if rng.random_ratio(1, 2) {
        let slot = rng.random_range(0..=masses.len());
        masses.insert(slot, Rat::zero());
    }
    let space = FinSpace::new((0..masses.len()).map(|i| format!("u{i}"))).expect("labels distinct");
    let b = ProbSpace::new(Dist::new(space, masses).expect("mass multiset normalizes"));

    let Some((f, g)) = find_ps_iso(&a, &b) else {
        return fail(
            "iso search failed on equal mass multisets",
            vec![dist_artifact("p", a.dist()), dist_artifact("q", b.dist())],
        );
    };
    let ok = g == f.dagger()
        && f == g.dagger()
        && f.is_as_deterministic()
        && g.is_as_deterministic()
        && g.compose(&f).expect("composable") == PsMorphism::identity(&a)
        && f.compose(&g).expect("composable") == PsMorphism::identity(&b);
    if !ok {
        return fail(
            "isomorphism is not a dagger isomorphism",
            vec![
                kernel_artifact("f", f.kernel()),
                kernel_artifact("g", g.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_as_det_compose(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let src = generate::rand_prob_space(rng, 1, gen.max_states, gen.max_denominator, true);
    let y = generate::rand_space(rng, 1, gen.max_states);
    let z = generate::rand_space(rng, 1, gen.max_states);

    // f: deterministic on supp(p), noisy elsewhere.
    let mut fk = generate::rand_dirac(rng, src.space(), &y);
    for x in src.space().indices() {
        if !src.in_support(x) {
            fk = fk
                .with_row(
                    x,
                    generate::rand_simplex(rng, y.len(), gen.max_denominator, true),
                )
                .expect("replacement row is stochastic");
        }
    }
    let f = generate::morphism_onto_push(&src, fk);

    // g: deterministic on supp(f p), noisy elsewhere.
    let mid = f.dst().clone();
    let mut gk = generate::rand_dirac(rng, mid.space(), &z);
    for x in mid.space().indices() {
        if !mid.in_support(x) {
            gk = gk
                .with_row(
                    x,
                    generate::rand_simplex(rng, z.len(), gen.max_denominator, true),
                )
                .expect("replacement row is stochastic");
        }
    }
    let g = generate::morphism_onto_push(&mid, gk);

    if !f.is_as_deterministic() || !g.is_as_deterministic() {
        return fail(
            "generator did not produce a.s. deterministic morphisms",
            vec![],
        );
    }
    let composite = g.compose(&f).expect("composable");
    if !composite.is_as_deterministic() {
        return fail(
            "composition of a.s. deterministic morphisms is not a.s. deterministic",
            vec![
                dist_artifact("p", src.dist()),
                kernel_artifact("f", f.kernel()),
                kernel_artifact("g", g.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_dagger_involution(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let src = generate::rand_prob_space(rng, 1, gen.max_states, gen.max_denominator, true);
    let f = rand_morphism_mixed(rng, &src, gen.max_denominator);
    if f.dagger().dagger() != f {
        return fail(
            "dagger involution failed",
            vec![
                dist_artifact("p", src.dist()),
                kernel_artifact("f", f.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_dagger_contravariance(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let src = generate::rand_prob_space(rng, 1, gen.max_states, gen.max_denominator, true);
    let f = rand_morphism_mixed(rng, &src, gen.max_denominator);
    let g = rand_morphism_mixed(rng, f.dst(), gen.max_denominator);
    let composite = g.compose(&f).expect("composable");
    let lhs = composite.dagger();
    let rhs = f.dagger().compose(&g.dagger()).expect("composable");
    if lhs != rhs {
        return fail(
            "dagger contravariance failed",
            vec![
                kernel_artifact("f", f.kernel()),
                kernel_artifact("g", g.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_as_congruence(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let p = generate::rand_prob_space(rng, 1, gen.max_states, gen.max_denominator, true);
    let y = generate::rand_space(rng, 1, gen.max_states);
    let z = generate::rand_space(rng, 1, gen.max_states);
    let f = generate::rand_kernel(rng, p.space(), &y, gen.max_denominator);
    let mut g = f.clone();
    for x in p.space().indices() {
        if !p.in_support(x) {
            g = g
                .with_row(
                    x,
                    generate::rand_simplex(rng, y.len(), gen.max_denominator, true),
                )
                .expect("replacement row is stochastic");
        }
    }
    let h = generate::rand_kernel(rng, &y, &z, gen.max_denominator);
    let hf = h.compose(&f).expect("composable");
    let hg = h.compose(&g).expect("composable");
    if !as_equal(&hf, &hg, p.dist()).expect("same spaces") {
        return fail(
            "postcomposition congruence failed",
            vec![kernel_artifact("h", &h)],
        );
    }
    let m = generate::rand_ps_morphism_into(rng, &p, gen.max_states, gen.max_denominator);
    let fm = f.compose(m.kernel()).expect("composable");
    let gm = g.compose(m.kernel()).expect("composable");
    if !as_equal(&fm, &gm, m.src().dist()).expect("same spaces") {
        return fail(
            "precomposition congruence failed",
            vec![
                kernel_artifact("m", m.kernel()),
                dist_artifact("w", m.src().dist()),
            ],
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dynamics laws
// ---------------------------------------------------------------------------

fn law_harmonic_invariant(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let (base, kernel) =
        generate::rand_chain_with_stationary(rng, 2, gen.max_states, gen.max_denominator);
    let sys = DynSystem::new(base, vec![kernel]).expect("stationary chain");
    let f = if rng.random_ratio(2, 3) {
        rand_right_invariant(rng, &sys, gen.max_denominator).0
    } else {
        rand_morphism_mixed(rng, sys.base(), gen.max_denominator)
    };
    let invariant = dynamics::is_right_invariant(&f, &sys).expect("source matches");
    let det_invariant = dynamics::is_det_invariant(&f, &sys).expect("source matches");
    if invariant && !det_invariant {
        return fail(
            "right-invariant morphism is not deterministically invariant",
            vec![
                dist_artifact("p", sys.base().dist()),
                kernel_artifact("m", &sys.generators()[0]),
                kernel_artifact("f", f.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_det_inv_measurable(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let f = if rng.random_ratio(1, 2) {
        rand_right_invariant(rng, &sys, gen.max_denominator).0
    } else {
        rand_morphism_mixed(rng, sys.base(), gen.max_denominator)
    };
    let det_invariant = dynamics::is_det_invariant(&f, &sys).expect("source matches");
    // Independent route: constant columns on each positive block.
    let partition = dynamics::invariant_partition(&sys);
    let measurable = partition.blocks().iter().all(|block| {
        let support_members: Vec<usize> = block
            .iter()
            .copied()
            .filter(|&x| sys.base().in_support(x))
            .collect();
        support_members
            .windows(2)
            .all(|pair| f.kernel().row(pair[0]) == f.kernel().row(pair[1]))
    });
    if det_invariant != measurable {
        return fail(
            "deterministic invariance does not match block-measurability",
            vec![
                dist_artifact("p", sys.base().dist()),
                kernel_artifact("f", f.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_section_left_invariant(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let inv = dynamics::invariant_object(&sys);
    if !dynamics::is_left_invariant(inv.section(), &sys).expect("target matches") {
        return fail(
            "section is not left-invariant",
            vec![kernel_artifact("section", inv.section().kernel())],
        );
    }
    Ok(())
}

fn law_colimit_uniqueness(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let (f, h) = rand_right_invariant(rng, &sys, gen.max_denominator);
    let factored = match dynamics::factor_right_invariant(&f, &sys) {
        Ok(m) => m,
        Err(e) => {
            return fail(
                format!("factorization rejected a right-invariant morphism: {e}"),
                vec![],
            )
        }
    };
    if factored != h {
        return fail(
            "factorization does not recover the generating map",
            vec![
                kernel_artifact("h", h.kernel()),
                kernel_artifact("factored", factored.kernel()),
            ],
        );
    }
    // Uniqueness: corrupting h on null blocks leaves the same morphism.
    let mut corrupted = h.kernel().clone();
    for b in h.src().space().indices() {
        if !h.src().in_support(b) {
            corrupted = corrupted
                .with_row(
                    b,
                    generate::rand_simplex(rng, h.dst().len(), gen.max_denominator, true),
                )
                .expect("replacement row is stochastic");
        }
    }
    let alternative = PsMorphism::new(h.src().clone(), h.dst().clone(), corrupted)
        .expect("null-column noise preserves the measure");
    if alternative != factored {
        return fail("null-column noise changed the factorization class", vec![]);
    }
    Ok(())
}

fn law_limit_uniqueness(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let inv = dynamics::invariant_object(&sys);
    let h =
        generate::rand_ps_morphism_into(rng, inv.components(), gen.max_states, gen.max_denominator);
    let g = inv.section().compose(&h).expect("composable");
    let factored = match dynamics::factor_left_invariant(&g, &sys) {
        Ok(m) => m,
        Err(e) => {
            return fail(
                format!("factorization rejected a left-invariant morphism: {e}"),
                vec![],
            )
        }
    };
    if factored != h {
        return fail(
            "limit factorization does not recover the generating map",
            vec![
                kernel_artifact("h", h.kernel()),
                kernel_artifact("factored", factored.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_time_reversal(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let reversed = dynamics::reverse_system(&sys);
    let f = if rng.random_ratio(1, 2) {
        rand_right_invariant(rng, &sys, gen.max_denominator).0
    } else {
        rand_morphism_mixed(rng, sys.base(), gen.max_denominator)
    };
    let forward = dynamics::is_right_invariant(&f, &sys).expect("source matches");
    let backward = dynamics::is_right_invariant(&f, &reversed).expect("source matches");
    if forward != backward {
        return fail(
            "invariance is not preserved under time reversal",
            vec![
                dist_artifact("p", sys.base().dist()),
                kernel_artifact("f", f.kernel()),
            ],
        );
    }
    // Positive blocks of the two invariant partitions agree.
    let positive = |system: &DynSystem| -> Vec<Vec<usize>> {
        dynamics::invariant_partition(system)
            .blocks()
            .iter()
            .filter(|b| !system.base().dist().mass_of(b).is_zero())
            .cloned()
            .collect()
    };
    if positive(&sys) != positive(&reversed) {
        return fail("positive blocks changed under time reversal", vec![]);
    }
    Ok(())
}

fn law_equilibrium(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states.min(7), gen.max_denominator);
    let seed: u64 = rng.random();
    let report = dynamics::equilibrium_checks(&sys, seed);
    if !report.passed() {
        return fail(
            format!("equilibrium checks failed: {report:?}"),
            vec![dist_artifact("p", sys.base().dist())],
        );
    }
    Ok(())
}

fn law_alt_ergodic(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states.min(7), gen.max_denominator);
    let check = dynamics::independence_factorizes(&sys, rng.random());
    if check.ergodic != check.factorizes {
        return fail(
            format!("independence characterization disagrees with ergodicity: {check:?}"),
            vec![dist_artifact("p", sys.base().dist())],
        );
    }
    Ok(())
}

fn law_detailed_balance(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let inv = dynamics::invariant_object(&sys);
    let equilibrium = inv.equilibrium();
    if equilibrium.dagger() != *equilibrium {
        return fail(
            "equilibrium idempotent is not self-adjoint",
            vec![kernel_artifact("equilibrium", equilibrium.kernel())],
        );
    }
    Ok(())
}

fn law_word_invariance(rng: &mut ChaCha8Rng, gen: &CaseGen) -> CaseOutcome {
    let sys = rand_system(rng, gen.max_states, gen.max_denominator);
    let (f, _) = rand_right_invariant(rng, &sys, gen.max_denominator);
    // Invariance under generators extends to arbitrary words.
    let mut word = Kernel::identity(sys.base().space().clone());
    for _ in 0..rng.random_range(1..=4usize) {
        let m = &sys.generators()[rng.random_range(0..sys.generators().len())];
        word = word.compose(m).expect("composable");
    }
    let pushed = f.kernel().compose(&word).expect("composable");
    if !as_equal(&pushed, f.kernel(), sys.base().dist()).expect("same spaces") {
        return fail(
            "right invariance does not extend to words",
            vec![
                kernel_artifact("word", &word),
                kernel_artifact("f", f.kernel()),
            ],
        );
    }
    Ok(())
}

fn law_harmonic_counterexample(rng: &mut ChaCha8Rng, _gen: &CaseGen) -> CaseOutcome {
    let fixture = fixtures::harmonic_counterexample();

    // The kernel identity f ∘ m = f holds strictly, so the observable is
    // right-invariant for every invariant measure.
    let composed = fixture
        .observable
        .compose(&fixture.transition)
        .expect("composable");
    if composed != fixture.observable {
        return fail("observable is not strictly harmonic", vec![]);
    }

    // Random mixture of the extreme invariant measures.
    let t = generate::rand_unit_rat(rng, 32);
    let complement = Rat::from_integer(1.into()) - &t;
    let mass: Vec<Rat> = fixture.extreme_invariant_measures[0]
        .mass()
        .iter()
        .zip(fixture.extreme_invariant_measures[1].mass())
        .map(|(a, c)| &t * a + &complement * c)
        .collect();
    let p = Dist::new(fixture.space.clone(), mass).expect("mixture normalizes");
    let base = ProbSpace::new(p);
    let sys =
        DynSystem::new(base.clone(), vec![fixture.transition.clone()]).expect("invariant mixture");
    let q = fixture.observable.push(base.dist()).expect("composable");
    let f = PsMorphism::new(base, ProbSpace::new(q), fixture.observable.clone())
        .expect("measure-preserving onto its pushforward");

    if !dynamics::is_right_invariant(&f, &sys).expect("source matches") {
        return fail(
            "observable fails the harmonic check on an invariant measure",
            vec![],
        );
    }
    if !dynamics::is_det_invariant(&f, &sys).expect("source matches") {
        return fail("observable fails a.s. deterministic invariance", vec![]);
    }
    match dynamics::strict_det_invariance_witness(&fixture.observable, &sys) {
        Some((_, from, _)) => {
            let label = fixture.space.label(from);
            if label != fixture.strict_violation_state {
                return fail(
                    format!(
                        "strict violation at {label}, expected {}",
                        fixture.strict_violation_state
                    ),
                    vec![],
                );
            }
        }
        None => return fail("strict invariance check unexpectedly passed", vec![]),
    }
    Ok(())
}
