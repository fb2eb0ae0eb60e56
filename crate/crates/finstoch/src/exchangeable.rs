//! Finite permutation actions on product spaces: orbit structure, systems
//! generated by adjacent transpositions, the orbit decomposition of
//! exchangeable measures, and the finite equivalences between ergodicity
//! and determinism of the quotient measure.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics::{self, DynSystem};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::ps::{Partition, ProbSpace, PsMorphism};
use crate::rational::Rat;
use crate::space::{Dist, FinSpace};

/// Hard cap on the size of a product space; dense exact matrices beyond
/// this are not useful at desk scale.
pub const PRODUCT_SIZE_LIMIT: usize = 65_536;

/// The n-fold product of a finite base space, with flat tuple labels
/// `(x1,…,xn)` in lexicographic order (left factor major).
#[derive(Debug, Clone)]
pub struct ProductSpace {
    base: FinSpace,
    n: usize,
    space: FinSpace,
}

impl ProductSpace {
    pub fn new(base: FinSpace, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "product exponent must be at least 1".to_owned(),
            ));
        }
        let mut size: u128 = 1;
        for _ in 0..n {
            size = size.saturating_mul(base.len() as u128);
            if size > PRODUCT_SIZE_LIMIT as u128 {
                return Err(Error::SizeLimit {
                    size: size.min(usize::MAX as u128) as usize,
                    limit: PRODUCT_SIZE_LIMIT,
                });
            }
        }
        let size = size as usize;
        let labels: Vec<String> = (0..size)
            .map(|index| {
                let tuple = decode(index, base.len(), n);
                let parts: Vec<&str> = tuple.iter().map(|&c| base.label(c)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        // Tuple labels can only collide when base labels contain commas.
        let space = FinSpace::new(labels).map_err(|_| {
            Error::InvalidInput(
                "base labels produce ambiguous tuple labels (commas in state names)".to_owned(),
            )
        })?;
        Ok(Self { base, n, space })
    }

    pub fn base(&self) -> &FinSpace {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinates of the tuple at a flat index.
    pub fn tuple(&self, index: usize) -> Vec<usize> {
        decode(index, self.base.len(), self.n)
    }

    /// Flat index of a coordinate tuple.
    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &c| acc * self.base.len() + c)
    }

    /// The permutation of flat indices that swaps coordinates `i` and `i+1`.
    pub fn adjacent_transposition(&self, i: usize) -> Kernel {
        let k = self.base.len();
        let n = self.n;
        Kernel::dirac(self.space.clone(), self.space.clone(), move |index| {
            let mut tuple = decode(index, k, n);
            tuple.swap(i, i + 1);
            tuple.iter().fold(0, |acc, &c| acc * k + c)
        })
    }
}

fn decode(mut index: usize, k: usize, n: usize) -> Vec<usize> {
    let mut tuple = vec![0; n];
    for slot in (0..n).rev() {
        tuple[slot] = index % k;
        index /= k;
    }
    tuple
}

/// The orbit partition of the permutation action: tuples with equal
/// coordinate multisets form one block (a type class).
#[derive(Debug, Clone)]
pub struct OrbitStructure {
    pub product: ProductSpace,
    pub orbits: Partition,
}

/// Groups the product space into type classes. The number of orbits equals
/// the number of size-n multisets over the base, `C(n+k-1, n)`.
pub fn orbit_structure(base: &FinSpace, n: usize) -> Result<OrbitStructure> {
    let product = ProductSpace::new(base.clone(), n)?;
    let mut by_type: std::collections::BTreeMap<Vec<usize>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for index in 0..product.len() {
        let mut key = product.tuple(index);
        key.sort_unstable();
        by_type.entry(key).or_default().push(index);
    }
    let blocks: Vec<Vec<usize>> = by_type.into_values().collect();
    let orbits = Partition::new(product.space().clone(), blocks)?;
    Ok(OrbitStructure { product, orbits })
}

/// Number of orbits of the permutation action on n-tuples over k states:
/// the multiset count `C(n+k-1, n)`.
pub fn orbit_count(k: usize, n: usize) -> BigUint {
    // C(n+k-1, n) computed exactly.
    let mut result = BigUint::one();
    for i in 0..n {
        result = result * BigUint::from(k + i) / BigUint::from(i + 1);
    }
    result
}

/// Cap on products for which the permutation system is materialized: each
/// transposition becomes a dense `k^n × k^n` kernel, which is only sensible
/// well below the plain product-space limit.
pub const PERMUTATION_SYSTEM_LIMIT: usize = 1024;

/// Builds the dynamical system of the permutation action: the n−1 adjacent
/// transpositions as generators (they generate the full symmetric group,
/// and almost-sure invariance extends from generators to all words). For
/// n = 1 the action is trivial and the identity is the sole generator.
///
/// Errors unless `p` is exchangeable, reporting a violating transposition
/// and tuple pair. Orbit enumeration and the orbit decomposition do not
/// build kernels and work up to [`PRODUCT_SIZE_LIMIT`]; this constructor is
/// capped at [`PERMUTATION_SYSTEM_LIMIT`] states.
pub fn permutation_system(base: &FinSpace, n: usize, p: &Dist) -> Result<DynSystem> {
    let product = ProductSpace::new(base.clone(), n)?;
    if product.len() > PERMUTATION_SYSTEM_LIMIT {
        return Err(Error::SizeLimit {
            size: product.len(),
            limit: PERMUTATION_SYSTEM_LIMIT,
        });
    }
    if p.space() != product.space() {
        return Err(Error::SpaceMismatch {
            context: "permutation system measure".to_owned(),
        });
    }
    check_exchangeable(&product, p)?;
    let generators: Vec<Kernel> = if n == 1 {
        vec![Kernel::identity(product.space().clone())]
    } else {
        (0..n - 1)
            .map(|i| product.adjacent_transposition(i))
            .collect()
    };
    DynSystem::new(ProbSpace::new(p.clone()), generators)
}

fn check_exchangeable(product: &ProductSpace, p: &Dist) -> Result<()> {
    for i in 0..product.n().saturating_sub(1) {
        for index in 0..product.len() {
            let mut tuple = product.tuple(index);
            tuple.swap(i, i + 1);
            let image = product.index(&tuple);
            if p.mass_at(index) != p.mass_at(image) {
                return Err(Error::NotExchangeable {
                    position: i + 1,
                    from: product.space().label(index).to_owned(),
                    to: product.space().label(image).to_owned(),
                });
            }
        }
    }
    Ok(())
}

/// Orbit decomposition of an exchangeable measure: one entry per
/// positive-mass orbit with the orbit mass as weight and the uniform
/// distribution on the orbit as component. The mixture reconstructs `p`
/// exactly. These orbit-uniform measures are the extreme points of the
/// finite exchangeable simplex; an i.i.d. decomposition is exact only in
/// the infinite limit, which is out of range here.
pub fn finite_definetti(base: &FinSpace, n: usize, p: &Dist) -> Result<Vec<(Rat, Dist)>> {
    let structure = orbit_structure(base, n)?;
    let product = &structure.product;
    check_exchangeable(product, p)?;
    let mut parts = Vec::new();
    for block in structure.orbits.blocks() {
        let weight = p.mass_of(block);
        if weight.is_zero() {
            continue;
        }
        let share = crate::rational::rat(1, block.len() as i64);
        let mut mass = vec![Rat::zero(); product.len()];
        for &x in block {
            mass[x] = share.clone();
        }
        let component = Dist::new(product.space().clone(), mass)
            .expect("uniform distribution on an orbit normalizes");
        parts.push((weight, component));
    }
    Ok(parts)
}

/// The section of the permutation system: maps every orbit to the uniform
/// distribution on it, regardless of `p` (exchangeability forces `p` to be
/// uniform within each orbit, so the conditional on a positive orbit is
/// uniform; on null orbits uniform is the chosen convention).
pub fn uniform_orbit_section(base: &FinSpace, n: usize, p: &Dist) -> Result<PsMorphism> {
    let structure = orbit_structure(base, n)?;
    let product = &structure.product;
    check_exchangeable(product, p)?;
    let orbit_masses: Vec<Rat> = structure
        .orbits
        .blocks()
        .iter()
        .map(|block| p.mass_of(block))
        .collect();
    let components = ProbSpace::new(Dist::new(structure.orbits.quotient_space(), orbit_masses)?);
    let rows: Vec<Vec<Rat>> = structure
        .orbits
        .blocks()
        .iter()
        .map(|block| {
            let share = crate::rational::rat(1, block.len() as i64);
            let mut row = vec![Rat::zero(); product.len()];
            for &x in block {
                row[x] = share.clone();
            }
            row
        })
        .collect();
    let kernel = Kernel::new(components.space().clone(), product.space().clone(), rows)
        .expect("uniform orbit rows are stochastic");
    PsMorphism::new(components, ProbSpace::new(p.clone()), kernel)
}

/// The finite equivalences around ergodicity of an exchangeable measure,
/// plus informational flags.
#[derive(Debug, Clone, Serialize)]
pub struct ExchangeabilityReport {
    pub orbit_count: usize,
    pub positive_orbits: usize,
    /// The measure is ergodic for the permutation action.
    pub ergodic: bool,
    /// The quotient measure on the orbit space is a point mass.
    pub quotient_deterministic: bool,
    /// Every almost-surely deterministic right-invariant map pushes `p` to
    /// a point mass; checked over deterministic maps out of the orbit space.
    pub deterministic_pushforwards_are_points: bool,
    /// How many deterministic maps the sweep covered, and whether it was
    /// exhaustive over all functions into spaces of size ≤ orbit count.
    pub maps_checked: usize,
    pub sweep_exhaustive: bool,
    /// Finite characterization: the measure is uniform on a single orbit.
    pub uniform_on_single_orbit: bool,
    /// Informational: whether `p` is an exact product of its (identical)
    /// coordinate marginals. At finite n this is generally NOT equivalent
    /// to ergodicity.
    pub product_measure: bool,
}

const SWEEP_LIMIT: usize = 65_536;

/// Verifies, exactly, the finite equivalences: `p` ergodic ⟺ the quotient
/// measure is deterministic ⟺ all a.s.-deterministic right-invariant
/// pushforwards of `p` are point masses. Reports the single-orbit and
/// product-measure characterizations alongside.
pub fn hewitt_savage_finite(base: &FinSpace, n: usize, p: &Dist) -> Result<ExchangeabilityReport> {
    let structure = orbit_structure(base, n)?;
    let product = &structure.product;
    check_exchangeable(product, p)?;
    let sys = permutation_system(base, n, p)?;
    let inv = dynamics::invariant_object(&sys);

    let ergodic = dynamics::is_ergodic(&sys);
    let quotient_deterministic = inv.components().dist().is_point_mass();

    // Sweep deterministic maps out of the component space: every
    // a.s.-deterministic right-invariant morphism factors through the
    // projection as such a map. Exhaustive when the function count is
    // small; otherwise indicator maps plus the identity already decide the
    // equivalence (a non-point quotient measure is witnessed by an
    // indicator).
    let blocks = inv.partition().len();
    let orbit_count = structure.orbits.len();
    let mut maps: Vec<(usize, Vec<usize>)> = Vec::new(); // (target size, images)
    let mut sweep_exhaustive = true;
    let mut total: usize = 0;
    for size in 1..=orbit_count {
        match (size as u128).checked_pow(blocks as u32) {
            Some(c) if (total as u128 + c) <= SWEEP_LIMIT as u128 => total += c as usize,
            _ => {
                sweep_exhaustive = false;
                break;
            }
        }
    }
    if sweep_exhaustive {
        for size in 1..=orbit_count {
            let mut images = vec![0usize; blocks];
            loop {
                maps.push((size, images.clone()));
                let mut slot = 0;
                loop {
                    if slot == blocks {
                        break;
                    }
                    images[slot] += 1;
                    if images[slot] < size {
                        break;
                    }
                    images[slot] = 0;
                    slot += 1;
                }
                if slot == blocks {
                    break;
                }
            }
        }
    } else {
        // Indicators of block subsets, capped, plus the identity map.
        maps.push((blocks, (0..blocks).collect()));
        let subsets = 1usize << blocks.min(14);
        for mask in 0..subsets {
            let images: Vec<usize> = (0..blocks)
                .map(|b| usize::from(mask & (1 << b) != 0))
                .collect();
            maps.push((2, images));
        }
    }

    let mut deterministic_pushforwards_are_points = true;
    for (size, images) in &maps {
        let target = ProbSpaceTarget::new(*size);
        let kernel = Kernel::dirac(
            inv.components().space().clone(),
            target.space.clone(),
            |b| images[b],
        );
        let pushed = kernel
            .push(inv.components().dist())
            .expect("deterministic map out of the component space");
        if !pushed.is_point_mass() {
            deterministic_pushforwards_are_points = false;
            break;
        }
    }

    let positive_orbits = structure
        .orbits
        .blocks()
        .iter()
        .filter(|block| !p.mass_of(block).is_zero())
        .count();
    let uniform_on_single_orbit = positive_orbits == 1; // exchangeable ⇒ uniform within orbits

    let product_measure = is_product_measure(product, p);

    Ok(ExchangeabilityReport {
        orbit_count,
        positive_orbits,
        ergodic,
        quotient_deterministic,
        deterministic_pushforwards_are_points,
        maps_checked: maps.len(),
        sweep_exhaustive,
        uniform_on_single_orbit,
        product_measure,
    })
}

struct ProbSpaceTarget {
    space: FinSpace,
}

impl ProbSpaceTarget {
    fn new(size: usize) -> Self {
        let space =
            FinSpace::new((0..size).map(|i| format!("v{i}"))).expect("target labels are distinct");
        Self { space }
    }
}

fn is_product_measure(product: &ProductSpace, p: &Dist) -> bool {
    // Coordinate marginal from the first coordinate (all coordinates agree
    // for exchangeable p).
    let k = product.base().len();
    let mut marginal = vec![Rat::zero(); k];
    for index in 0..product.len() {
        let tuple = product.tuple(index);
        marginal[tuple[0]] += p.mass_at(index);
    }
    (0..product.len()).all(|index| {
        let expected: Rat = product
            .tuple(index)
            .iter()
            .map(|&c| marginal[c].clone())
            .fold(Rat::one(), |acc, v| acc * v);
        p.mass_at(index) == &expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn binary() -> FinSpace {
        FinSpace::new(["0", "1"]).unwrap()
    }

    #[test]
    fn orbit_counts_match_multiset_numbers() {
        assert_eq!(orbit_count(2, 3), BigUint::from(4u32));
        assert_eq!(orbit_count(3, 3), BigUint::from(10u32));
        let structure = orbit_structure(&binary(), 3).unwrap();
        assert_eq!(structure.orbits.len(), 4);
        let sizes: Vec<usize> = structure.orbits.blocks().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);

        let ternary = FinSpace::new(["0", "1", "2"]).unwrap();
        assert_eq!(orbit_structure(&ternary, 3).unwrap().orbits.len(), 10);

        let singletons = orbit_structure(&binary(), 1).unwrap();
        assert_eq!(singletons.orbits.len(), 2);
        assert!(singletons.orbits.blocks().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn iid_measures_are_exchangeable_and_concentrated_ones_are_not() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        let uniform = Dist::uniform(product.space().clone());
        assert!(permutation_system(&binary(), 3, &uniform).is_ok());

        // i.i.d. with bias 1/3: mass (2/3)^(zeros) (1/3)^(ones).
        let iid = iid_measure(&product, &[rat(2, 3), rat(1, 3)]);
        assert!(permutation_system(&binary(), 3, &iid).is_ok());

        let concentrated = Dist::point(product.space().clone(), product.index(&[0, 0, 1]));
        match permutation_system(&binary(), 3, &concentrated) {
            Err(Error::NotExchangeable {
                position: 2,
                from,
                to,
            }) => {
                assert_eq!(from, "(0,0,1)");
                assert_eq!(to, "(0,1,0)");
            }
            other => panic!("expected exchangeability failure, got {other:?}"),
        }
    }

    fn iid_measure(product: &ProductSpace, weights: &[Rat]) -> Dist {
        let mass: Vec<Rat> = (0..product.len())
            .map(|index| {
                product
                    .tuple(index)
                    .iter()
                    .map(|&c| weights[c].clone())
                    .fold(rat(1, 1), |acc, w| acc * w)
            })
            .collect();
        Dist::new(product.space().clone(), mass).unwrap()
    }

    #[test]
    fn uniform_measure_decomposes_by_binomial_weights() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        let uniform = Dist::uniform(product.space().clone());
        let parts = finite_definetti(&binary(), 3, &uniform).unwrap();
        let weights: Vec<Rat> = parts.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(weights, vec![rat(1, 8), rat(3, 8), rat(3, 8), rat(1, 8)]);

        // Mixture identity.
        let mut mixed = vec![rat(0, 1); product.len()];
        for (w, component) in &parts {
            for (slot, m) in mixed.iter_mut().zip(component.mass()) {
                *slot += w * m;
            }
        }
        assert_eq!(mixed.as_slice(), uniform.mass());
    }

    #[test]
    fn biased_iid_weights_are_binomial() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        let iid = iid_measure(&product, &[rat(2, 3), rat(1, 3)]);
        let parts = finite_definetti(&binary(), 3, &iid).unwrap();
        let weights: Vec<Rat> = parts.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(
            weights,
            vec![rat(8, 27), rat(12, 27), rat(6, 27), rat(1, 27)]
        );
    }

    #[test]
    fn point_mass_at_constant_tuple_has_single_component() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        let delta = Dist::point(product.space().clone(), product.index(&[1, 1, 1]));
        let parts = finite_definetti(&binary(), 3, &delta).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, rat(1, 1));
        assert_eq!(&parts[0].1, &delta);
    }

    #[test]
    fn section_is_uniform_on_orbits_and_matches_the_dagger() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        let uniform = Dist::uniform(product.space().clone());
        let section = uniform_orbit_section(&binary(), 3, &uniform).unwrap();
        // Orbit of a single 1 has three members, each with probability 1/3.
        let row = section.kernel().row(1);
        let one_third: Vec<usize> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
            .collect();
        assert_eq!(one_third.len(), 3);
        for i in one_third {
            assert_eq!(&row[i], &rat(1, 3));
        }

        // Cross-module consistency: equals the Bayesian inverse of the
        // projection of the permutation system.
        let sys = permutation_system(&binary(), 3, &uniform).unwrap();
        let inv = dynamics::invariant_object(&sys);
        assert_eq!(&section, &inv.projection().dagger());
        assert_eq!(&section, inv.section());
    }

    #[test]
    fn ergodicity_report_on_three_measures() {
        let product = ProductSpace::new(binary(), 3).unwrap();

        // Uniform on the two-ones orbit: ergodic, not a product.
        let orbit = orbit_structure(&binary(), 3).unwrap();
        let two_ones = &orbit.orbits.blocks()[2];
        let mut mass = vec![rat(0, 1); product.len()];
        for &x in two_ones {
            mass[x] = rat(1, 3);
        }
        let p = Dist::new(product.space().clone(), mass).unwrap();
        let report = hewitt_savage_finite(&binary(), 3, &p).unwrap();
        assert!(report.ergodic && report.quotient_deterministic);
        assert!(report.deterministic_pushforwards_are_points);
        assert!(report.uniform_on_single_orbit);
        assert!(!report.product_measure);

        // Point mass at (0,0,0): ergodic and a product.
        let delta = Dist::point(product.space().clone(), 0);
        let report = hewitt_savage_finite(&binary(), 3, &delta).unwrap();
        assert!(report.ergodic && report.product_measure);

        // Half-half mixture of the all-zeros and all-ones orbits: not ergodic.
        let mut mass = vec![rat(0, 1); product.len()];
        mass[0] = rat(1, 2);
        mass[7] = rat(1, 2);
        let mix = Dist::new(product.space().clone(), mass).unwrap();
        let report = hewitt_savage_finite(&binary(), 3, &mix).unwrap();
        assert!(!report.ergodic && !report.quotient_deterministic);
        assert!(!report.deterministic_pushforwards_are_points);
    }

    #[test]
    fn product_size_guard() {
        let base = FinSpace::new(["0", "1"]).unwrap();
        assert!(ProductSpace::new(base, 17).is_err());
    }

    #[test]
    fn comma_labels_are_rejected_when_ambiguous() {
        let base = FinSpace::new(["a", "a,a"]).unwrap();
        assert!(matches!(
            ProductSpace::new(base, 2),
            Err(crate::error::Error::InvalidInput(_))
        ));
    }

    #[test]
    fn transpositions_are_permutation_matrices() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        for i in 0..2 {
            let swap = product.adjacent_transposition(i);
            assert!(swap.is_deterministic());
            // An involution: composing with itself gives the identity.
            assert_eq!(
                swap.compose(&swap).unwrap(),
                Kernel::identity(product.space().clone())
            );
        }
    }

    #[test]
    fn orbit_blocks_are_invariant_and_match_the_graph_partition() {
        let product = ProductSpace::new(binary(), 3).unwrap();
        // One measure with all orbits positive, one with a null orbit.
        let mut skewed = vec![rat(0, 1); product.len()];
        skewed[0] = rat(1, 2); // all-zeros orbit
        for &x in &orbit_structure(&binary(), 3).unwrap().orbits.blocks()[1] {
            skewed[x] = rat(1, 6); // single-one orbit
        }
        let measures = vec![
            Dist::uniform(product.space().clone()),
            Dist::new(product.space().clone(), skewed).unwrap(),
        ];
        for p in measures {
            let sys = permutation_system(&binary(), 3, &p).unwrap();
            let structure = orbit_structure(&binary(), 3).unwrap();
            // Every orbit block is almost surely invariant.
            for block in structure.orbits.blocks() {
                for &x in sys.base().support() {
                    let expected = if block.contains(&x) {
                        rat(1, 1)
                    } else {
                        rat(0, 1)
                    };
                    for m in sys.generators() {
                        assert_eq!(m.mass_into(block, x), expected);
                    }
                }
            }
            // The graph-component computation reproduces the type classes.
            let partition = dynamics::invariant_partition(&sys);
            assert_eq!(partition.blocks(), structure.orbits.blocks());
            // The equilibrium averages uniformly within each orbit.
            let inv = dynamics::invariant_object(&sys);
            for block in structure.orbits.blocks() {
                for &x in block {
                    if !sys.base().in_support(x) {
                        continue;
                    }
                    let share = rat(1, block.len() as i64);
                    for &y in block {
                        assert_eq!(inv.equilibrium().kernel().entry(y, x), &share);
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_blocks_match_transposition_closure_up_to_4096_states() {
        // Map-level oracle, no dense kernels: closing the product space
        // under adjacent transpositions reproduces exactly the type
        // classes, for every product with at most 4096 states.
        for (k, n) in [(2usize, 12usize), (3, 7), (4, 5), (8, 4)] {
            let base = FinSpace::new((0..k).map(|i| format!("v{i}"))).unwrap();
            let product = ProductSpace::new(base.clone(), n).unwrap();
            assert!(product.len() <= 4096);

            // Union-find over x ~ swap_i(x).
            let mut parent: Vec<usize> = (0..product.len()).collect();
            fn root(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for i in 0..n - 1 {
                for index in 0..product.len() {
                    let mut tuple = product.tuple(index);
                    tuple.swap(i, i + 1);
                    let image = product.index(&tuple);
                    let (a, b) = (root(&mut parent, index), root(&mut parent, image));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
            let mut closure: std::collections::BTreeMap<usize, Vec<usize>> =
                std::collections::BTreeMap::new();
            for index in 0..product.len() {
                let r = root(&mut parent, index);
                closure.entry(r).or_default().push(index);
            }
            let mut closure_blocks: Vec<Vec<usize>> = closure.into_values().collect();
            closure_blocks.sort_by_key(|b| b[0]);

            let structure = orbit_structure(&base, n).unwrap();
            assert_eq!(
                structure.orbits.blocks(),
                closure_blocks.as_slice(),
                "closure mismatch at k={k}, n={n}"
            );
        }
    }

    #[test]
    fn permutation_system_is_capped_below_the_product_limit() {
        let product = ProductSpace::new(binary(), 11).unwrap();
        let uniform = Dist::uniform(product.space().clone());
        assert!(matches!(
            permutation_system(&binary(), 11, &uniform),
            Err(Error::SizeLimit { .. })
        ));
        // Orbit enumeration still works at that size.
        assert_eq!(orbit_structure(&binary(), 11).unwrap().orbits.len(), 12);
    }

    #[test]
    fn orbit_counts_cross_checked_by_enumeration() {
        for (k, n) in [
            (2, 1),
            (2, 5),
            (2, 12),
            (3, 4),
            (4, 5),
            (5, 4),
            (8, 4),
            (16, 3),
        ] {
            let base = FinSpace::new((0..k).map(|i| format!("v{i}"))).unwrap();
            let structure = orbit_structure(&base, n).unwrap();
            assert_eq!(
                BigUint::from(structure.orbits.len()),
                orbit_count(k, n),
                "orbit count mismatch at k={k}, n={n}"
            );
        }
    }
}
