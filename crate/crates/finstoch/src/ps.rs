//! Probability spaces and measure-preserving kernels modulo almost-sure
//! equality, with Bayesian inversion as the dagger.
//!
//! Two kernels out of `(X, p)` are almost surely equal when they agree on
//! every source state of positive mass. A [`PsMorphism`] is a
//! measure-preserving kernel together with the canonical representative of
//! its a.s.-equality class: all columns outside the support are overwritten
//! with the target prior, so morphism equality is plain matrix equality of
//! canonical forms. The originally supplied kernel is kept alongside for
//! rendering and for conventions that pick specific null-column values.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::rational::Rat;
use crate::space::{Dist, FinSpace};

/// A finite space equipped with an exact probability distribution.
/// The support is computed once and cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbSpace {
    dist: Dist,
    support: Vec<usize>,
    in_support: Vec<bool>,
}

impl ProbSpace {
    pub fn new(dist: Dist) -> Self {
        let support = dist.support();
        let mut in_support = vec![false; dist.space().len()];
        for &x in &support {
            in_support[x] = true;
        }
        Self {
            dist,
            support,
            in_support,
        }
    }

    pub fn space(&self) -> &FinSpace {
        self.dist.space()
    }

    pub fn dist(&self) -> &Dist {
        &self.dist
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn in_support(&self, x: usize) -> bool {
        self.in_support[x]
    }

    pub fn len(&self) -> usize {
        self.space().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Almost-sure equality of two kernels out of `(X, p)`: agreement on every
/// positive-mass source state.
pub fn as_equal(f: &Kernel, g: &Kernel, p: &Dist) -> Result<bool> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::SpaceMismatch {
            context: "almost-sure equality".to_owned(),
        });
    }
    if f.source() != p.space() {
        return Err(Error::SpaceMismatch {
            context: "almost-sure equality measure".to_owned(),
        });
    }
    Ok(p.support().into_iter().all(|x| f.row(x) == g.row(x)))
}

/// A measure-preserving kernel between probability spaces, taken modulo
/// almost-sure equality.
#[derive(Debug, Clone)]
pub struct PsMorphism {
    src: ProbSpace,
    dst: ProbSpace,
    kernel: Kernel,
    canonical: Kernel,
}

impl PsMorphism {
    /// Wraps a kernel, checking exact measure preservation
    /// (`push(kernel, src.p) = dst.p`) and computing the canonical
    /// representative.
    pub fn new(src: ProbSpace, dst: ProbSpace, kernel: Kernel) -> Result<Self> {
        if kernel.source() != src.space() || kernel.target() != dst.space() {
            return Err(Error::SpaceMismatch {
                context: "morphism construction".to_owned(),
            });
        }
        if &kernel.push(src.dist())? != dst.dist() {
            return Err(Error::NotMeasurePreserving { generator: 0 });
        }
        let canonical = canonicalize(&kernel, &src, &dst);
        Ok(Self {
            src,
            dst,
            kernel,
            canonical,
        })
    }

    pub fn identity(x: &ProbSpace) -> Self {
        let kernel = Kernel::identity(x.space().clone());
        Self::new(x.clone(), x.clone(), kernel).expect("identity preserves every measure")
    }

    pub fn src(&self) -> &ProbSpace {
        &self.src
    }

    pub fn dst(&self) -> &ProbSpace {
        &self.dst
    }

    /// The representative kernel as supplied at construction.
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// The canonical representative: columns off the source support replaced
    /// by the target prior.
    pub fn canonical(&self) -> &Kernel {
        &self.canonical
    }

    /// Sequential composition `self ∘ other`.
    pub fn compose(&self, other: &PsMorphism) -> Result<PsMorphism> {
        if other.dst.dist() != self.src.dist() {
            return Err(Error::SpaceMismatch {
                context: "morphism composition".to_owned(),
            });
        }
        let kernel = self.kernel.compose(&other.kernel)?;
        PsMorphism::new(other.src.clone(), self.dst.clone(), kernel)
    }

    /// The Bayesian inverse `f†(x|y) = p(x) f(y|x) / q(y)` for positive `q(y)`;
    /// columns at null target states are set to the prior `p`.
    ///
    /// The result is measure-preserving `(Y, q) → (X, p)` by construction.
    pub fn dagger(&self) -> PsMorphism {
        let p = self.src.dist();
        let q = self.dst.dist();
        let n = self.src.len();
        let rows: Vec<Vec<Rat>> = self
            .dst
            .space()
            .indices()
            .map(|y| {
                let qy = q.mass_at(y);
                if qy.is_zero() {
                    p.mass().to_vec()
                } else {
                    (0..n)
                        .map(|x| {
                            let px = p.mass_at(x);
                            if px.is_zero() {
                                Rat::zero()
                            } else {
                                px * self.kernel.entry(y, x) / qy
                            }
                        })
                        .collect()
                }
            })
            .collect();
        let kernel = Kernel::new(self.dst.space().clone(), self.src.space().clone(), rows)
            .expect("Bayesian inverse rows are stochastic by construction");
        PsMorphism::new(self.dst.clone(), self.src.clone(), kernel)
            .expect("Bayesian inverse is measure-preserving by construction")
    }

    /// True iff every column at a positive-mass source state is a point mass.
    pub fn is_as_deterministic(&self) -> bool {
        self.src
            .support()
            .iter()
            .all(|&x| self.kernel.row(x).iter().any(|e| e.is_one()))
    }

    /// Almost-sure equality with another morphism (canonical-form equality).
    pub fn as_eq(&self, other: &PsMorphism) -> bool {
        self == other
    }
}

/// Morphism equality is equality of source, target, and canonical form —
/// i.e. equality in the quotient by almost-sure equality.
impl PartialEq for PsMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.src.dist() == other.src.dist()
            && self.dst.dist() == other.dst.dist()
            && self.canonical == other.canonical
    }
}

impl Eq for PsMorphism {}

fn canonicalize(kernel: &Kernel, src: &ProbSpace, dst: &ProbSpace) -> Kernel {
    let prior = dst.dist().mass().to_vec();
    let rows = src
        .space()
        .indices()
        .map(|x| {
            if src.in_support(x) {
                kernel.row(x).to_vec()
            } else {
                prior.clone()
            }
        })
        .collect();
    Kernel::new(src.space().clone(), dst.space().clone(), rows)
        .expect("canonicalization preserves stochasticity")
}

/// Bayesian inversion as a free function.
pub fn bayesian_inverse(f: &PsMorphism) -> PsMorphism {
    f.dagger()
}

/// Checks the equivalence "f is a.s. deterministic ⟺ f ∘ f† ≃ id" on a
/// concrete morphism. This is a theorem of the category, so the function
/// must return `true` on every input; a `false` signals an engine bug.
pub fn check_dag_id(f: &PsMorphism) -> bool {
    let retract = f.compose(&f.dagger()).expect("f ∘ f† is always composable");
    let identity = PsMorphism::identity(f.dst());
    f.is_as_deterministic() == (retract == identity)
}

/// Searches for a PS-isomorphism between two probability spaces.
///
/// Finite spaces are PS-isomorphic exactly when the multisets of positive
/// masses agree; in that case a mass-preserving support bijection is returned
/// as a pair of mutually a.s.-inverse, a.s.-deterministic morphisms. Equal
/// masses are matched in sorted order with label-lexicographic tie-breaking,
/// so the output is deterministic.
pub fn find_ps_iso(a: &ProbSpace, b: &ProbSpace) -> Option<(PsMorphism, PsMorphism)> {
    let sorted_support = |s: &ProbSpace| -> Vec<usize> {
        let mut idx = s.support().to_vec();
        idx.sort_by(|&i, &j| {
            s.dist()
                .mass_at(i)
                .cmp(s.dist().mass_at(j))
                .then_with(|| s.space().label(i).cmp(s.space().label(j)))
        });
        idx
    };
    let sa = sorted_support(a);
    let sb = sorted_support(b);
    if sa.len() != sb.len() {
        return None;
    }
    for (&x, &y) in sa.iter().zip(&sb) {
        if a.dist().mass_at(x) != b.dist().mass_at(y) {
            return None;
        }
    }

    let deterministic_on_support =
        |src: &ProbSpace, dst: &ProbSpace, pairs: &[(usize, usize)]| -> PsMorphism {
            let prior = dst.dist().mass().to_vec();
            let mut rows = vec![prior; src.len()];
            for &(x, y) in pairs {
                let mut row = vec![Rat::zero(); dst.len()];
                row[y] = Rat::one();
                rows[x] = row;
            }
            let kernel = Kernel::new(src.space().clone(), dst.space().clone(), rows)
                .expect("support bijection rows are stochastic");
            PsMorphism::new(src.clone(), dst.clone(), kernel)
                .expect("mass-preserving support bijection is measure-preserving")
        };

    let forward: Vec<(usize, usize)> = sa.iter().copied().zip(sb.iter().copied()).collect();
    let backward: Vec<(usize, usize)> = sb.iter().copied().zip(sa.iter().copied()).collect();
    Some((
        deterministic_on_support(a, b, &forward),
        deterministic_on_support(b, a, &backward),
    ))
}

/// A partition of a finite space into disjoint nonempty blocks covering it.
/// Blocks are ordered by smallest member index; finite σ-algebras on the
/// space correspond exactly to such partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    space: FinSpace,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(space: FinSpace, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".to_owned()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x >= n {
                    return Err(Error::InvalidPartition(format!(
                        "state index {x} out of range"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!(
                        "state {} appears in two blocks",
                        space.label(x)
                    )));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|covered| !covered) {
            return Err(Error::InvalidPartition(format!(
                "state {} is not covered",
                space.label(x)
            )));
        }
        blocks.sort_by_key(|block| block[0]);
        let mut block_of = vec![0; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                block_of[x] = b;
            }
        }
        Ok(Self {
            space,
            blocks,
            block_of,
        })
    }

    pub fn from_labels(space: FinSpace, blocks: &[Vec<String>]) -> Result<Self> {
        let index_blocks = blocks
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|label| {
                        space
                            .position(label)
                            .ok_or_else(|| Error::UnknownLabel(label.clone()))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, index_blocks)
    }

    pub fn singletons(space: FinSpace) -> Self {
        let blocks = space.indices().map(|x| vec![x]).collect();
        Self::new(space, blocks).expect("singleton blocks always partition")
    }

    pub fn one_block(space: FinSpace) -> Self {
        let blocks = vec![space.indices().collect()];
        Self::new(space, blocks).expect("single block always partitions")
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Deterministic block label, e.g. `{a,b}`.
    pub fn block_label(&self, b: usize) -> String {
        let members: Vec<&str> = self.blocks[b]
            .iter()
            .map(|&x| self.space.label(x))
            .collect();
        format!("{{{}}}", members.join(","))
    }

    /// The quotient space, one state per block. Block labels collide only
    /// when state labels themselves contain commas; the fallback qualifies
    /// every label with its block index.
    pub fn quotient_space(&self) -> FinSpace {
        let labels: Vec<String> = (0..self.len()).map(|b| self.block_label(b)).collect();
        match FinSpace::new(labels.clone()) {
            Ok(space) => space,
            Err(_) => FinSpace::new(
                labels
                    .into_iter()
                    .enumerate()
                    .map(|(b, label)| format!("{b}:{label}")),
            )
            .expect("index-qualified block labels are distinct"),
        }
    }

    /// True iff every block of `self` is contained in a single block of
    /// `coarse`.
    pub fn refines(&self, coarse: &Partition) -> bool {
        self.space == coarse.space
            && self.blocks.iter().all(|block| {
                block
                    .iter()
                    .all(|&x| coarse.block_of(x) == coarse.block_of(block[0]))
            })
    }
}

/// Quotients a probability space by a partition: one state per block with
/// the block's total mass, together with the projection morphism sending
/// each state to its block.
pub fn quotient_by_partition(
    x: &ProbSpace,
    partition: &Partition,
) -> Result<(ProbSpace, PsMorphism)> {
    if partition.space() != x.space() {
        return Err(Error::SpaceMismatch {
            context: "partition quotient".to_owned(),
        });
    }
    let quotient_space = partition.quotient_space();
    let mass = partition
        .blocks()
        .iter()
        .map(|block| x.dist().mass_of(block))
        .collect();
    let quotient = ProbSpace::new(Dist::new(quotient_space.clone(), mass)?);
    let projection_kernel = Kernel::dirac(x.space().clone(), quotient_space, |state| {
        partition.block_of(state)
    });
    let projection = PsMorphism::new(x.clone(), quotient.clone(), projection_kernel)
        .expect("block masses make the projection measure-preserving");
    Ok((quotient, projection))
}

/// For `fine` refining `coarse`, decides whether every fine block agrees
/// with some coarse block up to a null symmetric difference. When this
/// holds, the two quotient spaces are PS-isomorphic.
pub fn partitions_as_isomorphic(
    x: &ProbSpace,
    fine: &Partition,
    coarse: &Partition,
) -> Result<bool> {
    if fine.space() != x.space() || coarse.space() != x.space() {
        return Err(Error::SpaceMismatch {
            context: "partition comparison".to_owned(),
        });
    }
    if !fine.refines(coarse) {
        let offending = fine
            .blocks()
            .iter()
            .find(|block| {
                block
                    .iter()
                    .any(|&s| coarse.block_of(s) != coarse.block_of(block[0]))
            })
            .expect("refinement failure has a witness block");
        let members: Vec<&str> = offending.iter().map(|&s| x.space().label(s)).collect();
        return Err(Error::CoarsenessViolated {
            block: members.join(","),
        });
    }
    let null_symmetric_difference = |a: &[usize], b: &[usize]| -> bool {
        let in_b = |s: &usize| b.contains(s);
        let in_a = |s: &usize| a.contains(s);
        a.iter()
            .filter(|s| !in_b(s))
            .all(|&s| x.dist().mass_at(s).is_zero())
            && b.iter()
                .filter(|s| !in_a(s))
                .all(|&s| x.dist().mass_at(s).is_zero())
    };
    Ok(fine.blocks().iter().all(|fine_block| {
        coarse
            .blocks()
            .iter()
            .any(|coarse_block| null_symmetric_difference(fine_block, coarse_block))
    }))
}
