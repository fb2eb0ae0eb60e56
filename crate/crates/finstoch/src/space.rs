//! Finite state spaces and exact probability distributions.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rat, sum, Rat};

/// A finite set of labeled states. The label order is fixed and defines the
/// index ↔ label correspondence used by every matrix in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    labels: Vec<String>,
}

impl FinSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// The monoidal unit: a one-point space.
    pub fn unit() -> Self {
        Self {
            labels: vec!["*".to_owned()],
        }
    }

    /// Product space with pair labels `(x,z)`, lexicographic, left factor major.
    pub fn tensor(&self, other: &FinSpace) -> Self {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for x in &self.labels {
            for z in &other.labels {
                labels.push(format!("({x},{z})"));
            }
        }
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a FinSpace always has at least one state
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }
}

/// An exact probability distribution on a [`FinSpace`].
///
/// Entries are nonnegative rationals summing to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist {
    space: FinSpace,
    mass: Vec<Rat>,
}

impl Dist {
    pub fn new(space: FinSpace, mass: Vec<Rat>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: mass.len(),
            });
        }
        for (i, m) in mass.iter().enumerate() {
            if m < &Rat::zero() {
                return Err(Error::NegativeEntry {
                    label: space.label(i).to_owned(),
                    value: format_rat(m),
                });
            }
        }
        let total = sum(&mass);
        if !total.is_one() {
            return Err(Error::DistNotNormalized {
                sum: format_rat(&total),
            });
        }
        Ok(Self { space, mass })
    }

    pub fn uniform(space: FinSpace) -> Self {
        let n = space.len() as i64;
        let mass = vec![crate::rational::rat(1, n); space.len()];
        Self { space, mass }
    }

    /// Point mass at the given state index.
    pub fn point(space: FinSpace, index: usize) -> Self {
        let mut mass = vec![Rat::zero(); space.len()];
        mass[index] = Rat::one();
        Self { space, mass }
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn mass(&self) -> &[Rat] {
        &self.mass
    }

    pub fn mass_at(&self, index: usize) -> &Rat {
        &self.mass[index]
    }

    /// Indices of positive-mass states, in label order.
    pub fn support(&self) -> Vec<usize> {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Total mass of a set of state indices.
    pub fn mass_of(&self, indices: &[usize]) -> Rat {
        indices
            .iter()
            .fold(Rat::zero(), |acc, &i| acc + &self.mass[i])
    }

    /// True iff the distribution is a point mass.
    pub fn is_point_mass(&self) -> bool {
        self.mass.iter().any(|m| m.is_one())
    }
}
