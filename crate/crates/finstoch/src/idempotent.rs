//! Almost-sure idempotents and their splittings: absorbing-set extraction,
//! strictification to an exactly idempotent kernel, dagger splitting through
//! the invariant object, and equalizer/coequalizer verification.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics::{invariant_object, DynSystem};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::ps::{ProbSpace, PsMorphism};
use crate::rational::{format_rat, Rat};

/// A splitting `e = section ∘ retraction` with `retraction ∘ section ≃ id`,
/// where the section is the Bayesian inverse of the retraction.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub mid: ProbSpace,
    /// `X → mid`.
    pub retraction: PsMorphism,
    /// `mid → X`.
    pub section: PsMorphism,
}

/// `e ∘ e ≃ e`.
pub fn is_as_idempotent(e: &PsMorphism) -> bool {
    if e.src().dist() != e.dst().dist() {
        return false;
    }
    e.compose(e).expect("endomorphism composes with itself") == *e
}

/// Shrinks a full-measure set to an absorbing full-measure subset: a set
/// `A` with `p(A) = 1` and `k(A|a) = 1` for every `a ∈ A` — every member,
/// not just almost every member.
///
/// Iterates `A_{n+1} = {x ∈ A_n : k(A_n|x) = 1}`, which stabilizes within
/// `|X|` steps; measure preservation keeps each iterate at full measure.
pub fn absorbing_subset(k: &PsMorphism, start: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    let p = k.src().dist();
    let start_mass: Rat = start.iter().fold(Rat::zero(), |acc, &x| acc + p.mass_at(x));
    if !start_mass.is_one() {
        return Err(Error::NotFullMeasure {
            mass: format_rat(&start_mass),
        });
    }
    let mut current = start.clone();
    loop {
        let members: Vec<usize> = current.iter().copied().collect();
        let next: BTreeSet<usize> = current
            .iter()
            .copied()
            .filter(|&x| k.kernel().mass_into(&members, x).is_one())
            .collect();
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}

/// Absorbing subset starting from the support, the canonical full-measure
/// set.
pub fn absorbing_subset_from_support(k: &PsMorphism) -> BTreeSet<usize> {
    let support: BTreeSet<usize> = k.src().support().iter().copied().collect();
    absorbing_subset(k, &support).expect("the support has full measure")
}

/// Replaces an almost-surely idempotent kernel by an almost-surely equal
/// kernel that is idempotent at every state.
///
/// The construction keeps `e` on an absorbing subset of the set where
/// pointwise idempotency already holds, and puts the identity column
/// everywhere else.
pub fn strictify_idempotent(e: &PsMorphism) -> Result<Kernel> {
    if !is_as_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let ee = e.kernel().compose(e.kernel())?;
    let pointwise: BTreeSet<usize> = e
        .src()
        .space()
        .indices()
        .filter(|&x| ee.row(x) == e.kernel().row(x))
        .collect();
    let absorbing = absorbing_subset(e, &pointwise)?;
    let n = e.src().len();
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|x| {
            if absorbing.contains(&x) {
                e.kernel().row(x).to_vec()
            } else {
                let mut row = vec![Rat::zero(); n];
                row[x] = Rat::one();
                row
            }
        })
        .collect();
    let strict = Kernel::new(e.src().space().clone(), e.src().space().clone(), rows)
        .expect("rows copied from a kernel or identity are stochastic");
    let strict_squared = strict.compose(&strict)?;
    if strict_squared != strict {
        return Err(Error::Internal(
            "strictified kernel is not exactly idempotent".to_owned(),
        ));
    }
    if !crate::ps::as_equal(&strict, e.kernel(), e.src().dist())? {
        return Err(Error::Internal(
            "strictification changed the almost-sure class".to_owned(),
        ));
    }
    Ok(strict)
}

/// Splits an almost-sure idempotent through the invariant object of the
/// system it generates. Every almost-sure idempotent equals the equilibrium
/// of its own dynamics, so the projection/section pair of that invariant
/// object is a dagger splitting. All three splitting identities are
/// verified before returning.
pub fn split_idempotent(e: &PsMorphism) -> Result<Splitting> {
    if !is_as_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let sys = DynSystem::new(e.src().clone(), vec![e.kernel().clone()])?;
    let inv = invariant_object(&sys);
    let splitting = Splitting {
        mid: inv.components().clone(),
        retraction: inv.projection().clone(),
        section: inv.section().clone(),
    };
    let composite = splitting.section.compose(&splitting.retraction)?;
    if composite != *e {
        return Err(Error::Internal(
            "splitting does not reassemble the idempotent".to_owned(),
        ));
    }
    let round = splitting.retraction.compose(&splitting.section)?;
    if round != PsMorphism::identity(&splitting.mid) {
        return Err(Error::Internal(
            "retraction ∘ section is not the identity".to_owned(),
        ));
    }
    if splitting.section != splitting.retraction.dagger() {
        return Err(Error::Internal(
            "section is not the Bayesian inverse of the retraction".to_owned(),
        ));
    }
    Ok(splitting)
}

/// A probe for [`verify_equalizer_coequalizer`].
#[derive(Debug, Clone)]
pub enum Probe {
    /// `f : (W, w) → (X, p)` with hypothesis `e ∘ f ≃ f`; factors through
    /// the section.
    Into(PsMorphism),
    /// `g : (X, p) → (Z, z)` with hypothesis `g ∘ e ≃ g`; factors through
    /// the retraction.
    OutOf(PsMorphism),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ProbeOutcome {
    /// Hypothesis held; the factorization exists, commutes, and is unique.
    Factored,
    /// The probe does not satisfy the hypothesis equation; nothing to check.
    HypothesisFailed,
    /// Hypothesis held but a factorization identity failed (engine bug).
    Failed(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub index: usize,
    pub outcome: ProbeOutcome,
}

/// Verifies the (co)equalizer universal property of a splitting on concrete
/// probes: each probe satisfying its hypothesis is factored through the
/// splitting, the factorization is checked to commute, and uniqueness is
/// checked against the canonical construction.
pub fn verify_equalizer_coequalizer(
    e: &PsMorphism,
    splitting: &Splitting,
    probes: &[Probe],
) -> Vec<ProbeReport> {
    probes
        .iter()
        .enumerate()
        .map(|(index, probe)| {
            let outcome = match probe {
                Probe::Into(f) => check_into_probe(e, splitting, f),
                Probe::OutOf(g) => check_out_of_probe(e, splitting, g),
            };
            ProbeReport { index, outcome }
        })
        .collect()
}

fn check_into_probe(e: &PsMorphism, splitting: &Splitting, f: &PsMorphism) -> ProbeOutcome {
    let absorbed = match e.compose(f) {
        Ok(m) => m,
        Err(err) => return ProbeOutcome::Failed(format!("probe does not compose: {err}")),
    };
    if absorbed != *f {
        return ProbeOutcome::HypothesisFailed;
    }
    let mediating = splitting
        .retraction
        .compose(f)
        .expect("probe composes with retraction");
    let recovered = splitting
        .section
        .compose(&mediating)
        .expect("mediating composes");
    if recovered != *f {
        return ProbeOutcome::Failed("section ∘ mediating ≠ probe".to_owned());
    }
    // Uniqueness: any u with section ∘ u ≃ f equals retraction ∘ section ∘ u
    // ≃ retraction ∘ f, the canonical mediating morphism.
    let alt = splitting
        .retraction
        .compose(&recovered)
        .expect("recovered probe composes with retraction");
    if alt != mediating {
        return ProbeOutcome::Failed("mediating morphism is not unique".to_owned());
    }
    ProbeOutcome::Factored
}

fn check_out_of_probe(e: &PsMorphism, splitting: &Splitting, g: &PsMorphism) -> ProbeOutcome {
    let absorbed = match g.compose(e) {
        Ok(m) => m,
        Err(err) => return ProbeOutcome::Failed(format!("probe does not compose: {err}")),
    };
    if absorbed != *g {
        return ProbeOutcome::HypothesisFailed;
    }
    let mediating = g
        .compose(&splitting.section)
        .expect("probe composes with section");
    let recovered = mediating
        .compose(&splitting.retraction)
        .expect("mediating composes");
    if recovered != *g {
        return ProbeOutcome::Failed("mediating ∘ retraction ≠ probe".to_owned());
    }
    let alt = recovered
        .compose(&splitting.section)
        .expect("recovered probe composes");
    if alt != mediating {
        return ProbeOutcome::Failed("mediating morphism is not unique".to_owned());
    }
    ProbeOutcome::Factored
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::space::{Dist, FinSpace};

    fn prob(labels: &[&str], mass: &[(i64, i64)]) -> ProbSpace {
        let space = FinSpace::new(labels.iter().copied()).unwrap();
        let mass = mass.iter().map(|&(n, d)| rat(n, d)).collect();
        ProbSpace::new(Dist::new(space, mass).unwrap())
    }

    #[test]
    fn identity_is_idempotent_and_splits_through_itself() {
        let x = prob(&["a", "b"], &[(1, 2), (1, 2)]);
        let id = PsMorphism::identity(&x);
        assert!(is_as_idempotent(&id));
        let splitting = split_idempotent(&id).unwrap();
        assert_eq!(splitting.mid.dist().mass(), x.dist().mass());
    }

    #[test]
    fn absorbing_subset_drops_leaky_null_state() {
        // Null state a0 leaks into a1, which the starting set excludes, so
        // one iteration lands on the support {b}.
        let x = prob(&["a0", "a1", "b"], &[(0, 1), (0, 1), (1, 1)]);
        let rows = vec![
            vec![rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        ];
        let k = Kernel::new(x.space().clone(), x.space().clone(), rows).unwrap();
        let m = PsMorphism::new(x.clone(), x, k).unwrap();
        let start: BTreeSet<usize> = [0, 2].into_iter().collect();
        let absorbing = absorbing_subset(&m, &start).unwrap();
        assert_eq!(absorbing, [2].into_iter().collect());
        assert_eq!(absorbing_subset_from_support(&m), [2].into_iter().collect());
    }

    #[test]
    fn absorbing_subset_of_identity_is_the_whole_start() {
        let x = prob(&["a", "b", "c"], &[(0, 1), (1, 2), (1, 2)]);
        let id = PsMorphism::identity(&x);
        let all: BTreeSet<usize> = [0, 1, 2].into_iter().collect();
        assert_eq!(absorbing_subset(&id, &all).unwrap(), all);
    }

    #[test]
    fn absorbing_subset_requires_full_measure_start() {
        let x = prob(&["a", "b"], &[(1, 2), (1, 2)]);
        let id = PsMorphism::identity(&x);
        let partial: BTreeSet<usize> = [0].into_iter().collect();
        assert!(matches!(
            absorbing_subset(&id, &partial),
            Err(Error::NotFullMeasure { .. })
        ));
    }

    #[test]
    fn strictify_restores_exact_idempotency_after_null_noise() {
        // Averaging idempotent on {b, c}, identity elsewhere; then corrupt
        // the null column at a.
        let x = prob(&["a", "b", "c"], &[(0, 1), (1, 2), (1, 2)]);
        let rows = vec![
            vec![rat(1, 3), rat(1, 3), rat(1, 3)], // corrupted null column
            vec![rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(1, 2), rat(1, 2)],
        ];
        let e = PsMorphism::new(
            x.clone(),
            x.clone(),
            Kernel::new(x.space().clone(), x.space().clone(), rows).unwrap(),
        )
        .unwrap();
        assert!(is_as_idempotent(&e));
        let ee = e.kernel().compose(e.kernel()).unwrap();
        assert_ne!(&ee, e.kernel()); // not exactly idempotent before repair

        let strict = strictify_idempotent(&e).unwrap();
        assert_eq!(strict.compose(&strict).unwrap(), strict);
        assert!(crate::ps::as_equal(&strict, e.kernel(), x.dist()).unwrap());
    }

    #[test]
    fn non_idempotent_is_rejected() {
        let x = prob(&["a", "b"], &[(1, 2), (1, 2)]);
        let swap = PsMorphism::new(
            x.clone(),
            x.clone(),
            Kernel::dirac(x.space().clone(), x.space().clone(), |i| 1 - i),
        )
        .unwrap();
        assert!(!is_as_idempotent(&swap));
        assert!(matches!(
            strictify_idempotent(&swap),
            Err(Error::NotIdempotent)
        ));
        assert!(matches!(split_idempotent(&swap), Err(Error::NotIdempotent)));
    }

    #[test]
    fn partition_quotient_idempotent_splits_through_the_quotient() {
        // For any partition, the idempotent projection† ∘ projection splits
        // through the quotient space.
        let x = prob(&["a", "b", "c", "d"], &[(1, 6), (1, 3), (1, 2), (0, 1)]);
        let partition =
            crate::ps::Partition::new(x.space().clone(), vec![vec![0, 1], vec![2, 3]]).unwrap();
        let (quotient, projection) = crate::ps::quotient_by_partition(&x, &partition).unwrap();
        let e = projection.dagger().compose(&projection).unwrap();
        assert!(is_as_idempotent(&e));
        let splitting = split_idempotent(&e).unwrap();
        assert!(crate::ps::find_ps_iso(&splitting.mid, &quotient).is_some());
    }

    #[test]
    fn splittings_agree_up_to_isomorphism_under_relabeling() {
        let x = prob(&["a", "b", "c", "d"], &[(1, 4), (1, 4), (1, 4), (1, 4)]);
        let rows = vec![
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)],
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
        ];
        let e = PsMorphism::new(
            x.clone(),
            x.clone(),
            Kernel::new(x.space().clone(), x.space().clone(), rows).unwrap(),
        )
        .unwrap();
        let splitting = split_idempotent(&e).unwrap();

        // The same idempotent transported along a relabeling permutation.
        let relabeled_space = crate::space::FinSpace::new(["d2", "c2", "b2", "a2"]).unwrap();
        let y = ProbSpace::new(
            crate::space::Dist::new(
                relabeled_space.clone(),
                x.dist().mass().iter().rev().cloned().collect(),
            )
            .unwrap(),
        );
        let relabel = PsMorphism::new(
            x.clone(),
            y.clone(),
            Kernel::dirac(x.space().clone(), relabeled_space, |i| 3 - i),
        )
        .unwrap();
        let transported = relabel
            .compose(&e)
            .unwrap()
            .compose(&relabel.dagger())
            .unwrap();
        let other = split_idempotent(&transported).unwrap();

        // The canonical comparison map is an isomorphism commuting with the
        // retractions and sections.
        let comparison = other
            .retraction
            .compose(&relabel)
            .unwrap()
            .compose(&splitting.section)
            .unwrap();
        assert_eq!(
            comparison.compose(&comparison.dagger()).unwrap(),
            PsMorphism::identity(&other.mid)
        );
        assert_eq!(
            comparison.dagger().compose(&comparison).unwrap(),
            PsMorphism::identity(&splitting.mid)
        );
        assert_eq!(
            comparison.compose(&splitting.retraction).unwrap(),
            other.retraction.compose(&relabel).unwrap()
        );
        assert_eq!(
            other.section.compose(&comparison).unwrap(),
            relabel.compose(&splitting.section).unwrap()
        );
        assert!(crate::ps::find_ps_iso(&splitting.mid, &other.mid).is_some());
    }

    #[test]
    fn probes_factor_through_the_splitting() {
        let x = prob(&["a", "b", "c", "d"], &[(1, 4), (1, 4), (1, 4), (1, 4)]);
        // Average within {a, b} and within {c, d}.
        let rows = vec![
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)],
            vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(0, 1), rat(0, 1), rat(1, 2), rat(1, 2)],
        ];
        let e = PsMorphism::new(
            x.clone(),
            x.clone(),
            Kernel::new(x.space().clone(), x.space().clone(), rows).unwrap(),
        )
        .unwrap();
        let splitting = split_idempotent(&e).unwrap();

        let reports = verify_equalizer_coequalizer(
            &e,
            &splitting,
            &[
                Probe::Into(splitting.section.clone()),
                Probe::OutOf(splitting.retraction.clone()),
                Probe::OutOf(e.clone()),
                Probe::OutOf(PsMorphism::identity(&x)), // hypothesis fails: id ∘ e ≠ id
            ],
        );
        assert_eq!(reports[0].outcome, ProbeOutcome::Factored);
        assert_eq!(reports[1].outcome, ProbeOutcome::Factored);
        assert_eq!(reports[2].outcome, ProbeOutcome::Factored);
        assert_eq!(reports[3].outcome, ProbeOutcome::HypothesisFailed);
    }
}
