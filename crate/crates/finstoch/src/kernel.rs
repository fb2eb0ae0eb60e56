//! The Markov category of finite spaces and exact-rational stochastic
//! matrices: composition, tensor, copy/discard, Dirac kernels, determinism.
//!
//! A kernel `k: X → Y` stores one row per source state; `row(x)[y]` is the
//! transition probability `k(y|x)`. Rows sum to exactly 1. Composition is the
//! Chapman-Kolmogorov sum, evaluated in exact rational arithmetic, so row
//! sums never drift.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rat, sum, Rat};
use crate::space::{Dist, FinSpace};

/// An exact-rational stochastic matrix between two finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    source: FinSpace,
    target: FinSpace,
    rows: Vec<Vec<Rat>>,
}

impl Kernel {
    /// Builds a kernel from one row per source state, validating
    /// nonnegativity and exact stochasticity of every row.
    pub fn new(source: FinSpace, target: FinSpace, rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: rows.len(),
            });
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != target.len() {
                return Err(Error::DimensionMismatch {
                    expected: target.len(),
                    found: row.len(),
                });
            }
            for entry in row {
                if entry < &Rat::zero() {
                    return Err(Error::NegativeEntry {
                        label: source.label(x).to_owned(),
                        value: format_rat(entry),
                    });
                }
            }
            let total = sum(row);
            if !total.is_one() {
                return Err(Error::RowNotStochastic {
                    label: source.label(x).to_owned(),
                    sum: format_rat(&total),
                });
            }
        }
        Ok(Self {
            source,
            target,
            rows,
        })
    }

    pub fn identity(space: FinSpace) -> Self {
        let n = space.len();
        let rows = (0..n)
            .map(|x| {
                let mut row = vec![Rat::zero(); n];
                row[x] = Rat::one();
                row
            })
            .collect();
        Self {
            source: space.clone(),
            target: space,
            rows,
        }
    }

    /// Deterministic kernel from an index-level function.
    pub fn dirac(source: FinSpace, target: FinSpace, map: impl Fn(usize) -> usize) -> Self {
        let rows = source
            .indices()
            .map(|x| {
                let mut row = vec![Rat::zero(); target.len()];
                row[map(x)] = Rat::one();
                row
            })
            .collect();
        Self {
            source,
            target,
            rows,
        }
    }

    /// Deterministic kernel from a total function on labels.
    ///
    /// Errors if the function maps some state to a label not in the target.
    pub fn dirac_from_labels(
        source: FinSpace,
        target: FinSpace,
        map: impl Fn(&str) -> String,
    ) -> Result<Self> {
        let mut indices = Vec::with_capacity(source.len());
        for x in source.indices() {
            let image = map(source.label(x));
            let y = target.position(&image).ok_or(Error::UnknownLabel(image))?;
            indices.push(y);
        }
        Ok(Self::dirac(source, target, |x| indices[x]))
    }

    /// Copy map `X → X ⊗ X`.
    pub fn copy(space: &FinSpace) -> Self {
        let target = space.tensor(space);
        let n = space.len();
        Self::dirac(space.clone(), target, |x| x * n + x)
    }

    /// Discard map `X → I` (single column of ones).
    pub fn del(space: &FinSpace) -> Self {
        Self::dirac(space.clone(), FinSpace::unit(), |_| 0)
    }

    /// Braiding `X ⊗ Z → Z ⊗ X`.
    pub fn swap(x: &FinSpace, z: &FinSpace) -> Self {
        let source = x.tensor(z);
        let target = z.tensor(x);
        let (nx, nz) = (x.len(), z.len());
        Self::dirac(source, target, move |i| {
            let (a, b) = (i / nz, i % nz);
            b * nx + a
        })
    }

    /// Unitor `I ⊗ X → X`. Index-wise the identity; only the labels change.
    pub fn left_unitor(x: &FinSpace) -> Self {
        Self::dirac(FinSpace::unit().tensor(x), x.clone(), |i| i)
    }

    /// Unitor `X ⊗ I → X`.
    pub fn right_unitor(x: &FinSpace) -> Self {
        Self::dirac(x.tensor(&FinSpace::unit()), x.clone(), |i| i)
    }

    /// Associator `(X ⊗ Y) ⊗ Z → X ⊗ (Y ⊗ Z)`. With left-major lexicographic
    /// indexing the underlying index map is the identity.
    pub fn associator(x: &FinSpace, y: &FinSpace, z: &FinSpace) -> Self {
        let source = x.tensor(y).tensor(z);
        let target = x.tensor(&y.tensor(z));
        Self::dirac(source, target, |i| i)
    }

    /// Sequential composition `self ∘ other` by the Chapman-Kolmogorov
    /// formula: `(h ∘ k)(z|x) = Σ_y h(z|y) k(y|x)`.
    pub fn compose(&self, other: &Kernel) -> Result<Kernel> {
        if other.target != self.source {
            return Err(Error::SpaceMismatch {
                context: "kernel composition".to_owned(),
            });
        }
        let rows = other
            .rows
            .iter()
            .map(|krow| {
                let mut out = vec![Rat::zero(); self.target.len()];
                for (y, weight) in krow.iter().enumerate() {
                    if weight.is_zero() {
                        continue;
                    }
                    for (z, h) in self.rows[y].iter().enumerate() {
                        if !h.is_zero() {
                            out[z] += weight * h;
                        }
                    }
                }
                out
            })
            .collect();
        Ok(Kernel {
            source: other.source.clone(),
            target: self.target.clone(),
            rows,
        })
    }

    /// Parallel composition: `(k ⊗ h)((y,w)|(x,z)) = k(y|x) · h(w|z)`.
    pub fn tensor(&self, other: &Kernel) -> Kernel {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        let mut rows = Vec::with_capacity(source.len());
        for xrow in &self.rows {
            for zrow in &other.rows {
                let mut row = Vec::with_capacity(target.len());
                for a in xrow {
                    for b in zrow {
                        row.push(a * b);
                    }
                }
                rows.push(row);
            }
        }
        Kernel {
            source,
            target,
            rows,
        }
    }

    /// Pushforward of a distribution: `(k p)(y) = Σ_x k(y|x) p(x)`.
    pub fn push(&self, p: &Dist) -> Result<Dist> {
        if p.space() != &self.source {
            return Err(Error::SpaceMismatch {
                context: "pushforward".to_owned(),
            });
        }
        let mut mass = vec![Rat::zero(); self.target.len()];
        for (x, row) in self.rows.iter().enumerate() {
            let weight = p.mass_at(x);
            if weight.is_zero() {
                continue;
            }
            for (y, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    mass[y] += weight * entry;
                }
            }
        }
        Dist::new(self.target.clone(), mass)
    }

    /// True iff every entry is 0 or 1. In this category that is equivalent
    /// to the copy-commutation equation `copy ∘ k = (k ⊗ k) ∘ copy`.
    pub fn is_deterministic(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|e| e.is_zero() || e.is_one())
    }

    pub fn source(&self) -> &FinSpace {
        &self.source
    }

    pub fn target(&self) -> &FinSpace {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// The outgoing distribution of a source state.
    pub fn row(&self, x: usize) -> &[Rat] {
        &self.rows[x]
    }

    /// Transition probability `k(y|x)` (target given source).
    pub fn entry(&self, y: usize, x: usize) -> &Rat {
        &self.rows[x][y]
    }

    /// Mass a source state sends into a set of target states.
    pub fn mass_into(&self, targets: &[usize], x: usize) -> Rat {
        targets
            .iter()
            .fold(Rat::zero(), |acc, &y| acc + &self.rows[x][y])
    }

    /// Replaces one row, revalidating it.
    pub fn with_row(&self, x: usize, row: Vec<Rat>) -> Result<Kernel> {
        let mut rows = self.rows.clone();
        rows[x] = row;
        Kernel::new(self.source.clone(), self.target.clone(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn two_space() -> FinSpace {
        FinSpace::new(["a", "b"]).unwrap()
    }

    fn flip() -> Kernel {
        Kernel::new(
            two_space(),
            two_space(),
            vec![vec![rat(1, 3), rat(2, 3)], vec![rat(3, 4), rat(1, 4)]],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let err = Kernel::new(
            two_space(),
            two_space(),
            vec![vec![rat(1, 2), rat(1, 3)], vec![rat(0, 1), rat(1, 1)]],
        );
        match err {
            Err(Error::RowNotStochastic { label, sum }) => {
                assert_eq!(label, "a");
                assert_eq!(sum, "5/6");
            }
            other => panic!("expected row error, got {other:?}"),
        }
    }

    #[test]
    fn identity_laws() {
        let k = flip();
        let id = Kernel::identity(two_space());
        assert_eq!(k.compose(&id).unwrap(), k);
        assert_eq!(id.compose(&k).unwrap(), k);
    }

    #[test]
    fn composition_is_chapman_kolmogorov() {
        let k = flip();
        let kk = k.compose(&k).unwrap();
        // (k∘k)(a|a) = 1/3·1/3 + 2/3·3/4 = 11/18
        assert_eq!(kk.entry(0, 0), &rat(11, 18));
        assert_eq!(sum(kk.row(0)), rat(1, 1));
    }

    #[test]
    fn push_of_point_mass_is_row() {
        let k = flip();
        let q = k.push(&Dist::point(two_space(), 1)).unwrap();
        assert_eq!(q.mass(), k.row(1));
    }

    #[test]
    fn del_is_natural() {
        let k = flip();
        let del_y = Kernel::del(k.target());
        let del_x = Kernel::del(k.source());
        assert_eq!(del_y.compose(&k).unwrap(), del_x);
    }

    #[test]
    fn copy_is_deterministic_and_counital() {
        let x = two_space();
        let copy = Kernel::copy(&x);
        assert!(copy.is_deterministic());
        // (del ⊗ id) ∘ copy = id up to the left unitor.
        let projected = Kernel::del(&x).tensor(&Kernel::identity(x.clone()));
        let round = Kernel::left_unitor(&x)
            .compose(&projected.compose(&copy).unwrap())
            .unwrap();
        assert_eq!(round, Kernel::identity(x));
    }

    #[test]
    fn determinism_matches_copy_commutation() {
        for k in [flip(), Kernel::dirac(two_space(), two_space(), |x| 1 - x)] {
            let lhs = Kernel::copy(k.target()).compose(&k).unwrap();
            let rhs = k.tensor(&k).compose(&Kernel::copy(k.source())).unwrap();
            assert_eq!(lhs == rhs, k.is_deterministic());
        }
    }

    #[test]
    fn determinism_matches_copy_commutation_on_random_kernels() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for case in 0..200 {
            let x = crate::generate::rand_space(&mut rng, 1, 4);
            let y = crate::generate::rand_space(&mut rng, 1, 4);
            let k = if case % 2 == 0 {
                crate::generate::rand_kernel(&mut rng, &x, &y, 8)
            } else {
                crate::generate::rand_dirac(&mut rng, &x, &y)
            };
            let lhs = Kernel::copy(k.target()).compose(&k).unwrap();
            let rhs = k.tensor(&k).compose(&Kernel::copy(k.source())).unwrap();
            assert_eq!(lhs == rhs, k.is_deterministic(), "case {case}");
        }
    }

    #[test]
    fn tensor_of_identities_is_the_product_identity() {
        let x = two_space();
        let z = FinSpace::new(["0", "1", "2"]).unwrap();
        let tensored = Kernel::identity(x.clone()).tensor(&Kernel::identity(z.clone()));
        assert_eq!(tensored, Kernel::identity(x.tensor(&z)));
    }

    #[test]
    fn discard_tensor_identity_projects_onto_the_second_factor() {
        let x = two_space();
        let z = FinSpace::new(["0", "1", "2"]).unwrap();
        let projected = Kernel::del(&x).tensor(&Kernel::identity(z.clone()));
        let as_projection = Kernel::left_unitor(&z).compose(&projected).unwrap();
        let nz = z.len();
        let expected = Kernel::dirac(x.tensor(&z), z, move |i| i % nz);
        assert_eq!(as_projection, expected);
    }

    #[test]
    fn unit_space_structure_collapses() {
        let unit = FinSpace::unit();
        assert_eq!(Kernel::del(&unit), Kernel::identity(unit.clone()));
        let copied = Kernel::left_unitor(&unit)
            .compose(&Kernel::copy(&unit))
            .unwrap();
        assert_eq!(copied, Kernel::identity(unit));
    }

    #[test]
    fn dirac_from_labels_builds_functions() {
        let x = FinSpace::new(["a", "b", "c"]).unwrap();
        let id = Kernel::dirac_from_labels(x.clone(), x.clone(), |label| label.to_owned());
        assert_eq!(id.unwrap(), Kernel::identity(x.clone()));

        let constant = Kernel::dirac_from_labels(x.clone(), x.clone(), |_| "b".to_owned()).unwrap();
        for row in constant.rows() {
            assert_eq!(row, &[rat(0, 1), rat(1, 1), rat(0, 1)]);
        }

        let unknown = Kernel::dirac_from_labels(x.clone(), x, |_| "zz".to_owned());
        assert!(matches!(unknown, Err(Error::UnknownLabel(label)) if label == "zz"));
    }

    #[test]
    fn tensor_marginalizes_to_factors() {
        let k = flip();
        let h = Kernel::new(
            two_space(),
            two_space(),
            vec![vec![rat(1, 5), rat(4, 5)], vec![rat(1, 2), rat(1, 2)]],
        )
        .unwrap();
        let kh = k.tensor(&h);
        // Marginal over the second output recovers k.
        for x in 0..2 {
            for z in 0..2 {
                let row = kh.row(x * 2 + z);
                for y in 0..2 {
                    let marg = &row[y * 2] + &row[y * 2 + 1];
                    assert_eq!(&marg, k.entry(y, x));
                }
            }
        }
    }
}
