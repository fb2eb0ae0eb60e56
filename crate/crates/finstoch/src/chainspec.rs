//! JSON chain-spec ingestion and emission.
//!
//! The wire format carries every probability as a rational-valued string
//! ("a/b" or "a"), never a binary float, so a spec round-trips exactly.
//! Matrices are row-per-source-state. A minimal spec:
//!
//! ```json
//! {
//!   "states": ["a", "b"],
//!   "dist": ["1/2", "1/2"],
//!   "generators": [
//!     { "name": "m", "rows": [["0", "1"], ["1", "0"]] }
//!   ]
//! }
//! ```
//!
//! Optional sections: `"partition"` (blocks of state labels) and
//! `"probes"` (named kernels out of the state space, row-per-source).
//! A generator may carry `"idempotent": true` to mark it for splitting.

use serde::{Deserialize, Serialize};

use crate::dynamics::DynSystem;
use crate::error::{Error, Result};
use crate::generate::morphism_onto_push;
use crate::kernel::Kernel;
use crate::ps::{Partition, ProbSpace, PsMorphism};
use crate::rational::{format_rat, parse_rat, Rat};
use crate::space::{Dist, FinSpace};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainSpec {
    pub states: Vec<String>,
    pub dist: Vec<String>,
    /// May be empty for specs that only describe a probability space
    /// (e.g. isomorphism queries).
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<Vec<ProbeSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub idempotent: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub name: String,
    pub target_states: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A validated chain spec: the dynamical system plus the optional sections,
/// resolved against the state space.
#[derive(Debug, Clone)]
pub struct BuiltSpec {
    pub system: DynSystem,
    pub generator_names: Vec<String>,
    pub idempotent_generator: Option<usize>,
    pub partition: Option<Partition>,
    pub probes: Vec<(String, PsMorphism)>,
}

impl ChainSpec {
    /// Parses the JSON text; syntax errors carry line/column positions.
    pub fn parse(text: &str) -> Result<ChainSpec> {
        Ok(serde_json::from_str(text)?)
    }

    /// Serializes back to pretty JSON.
    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain spec serializes")
    }

    /// Validates everything: distinct states, exact normalization, exact
    /// row stochasticity, measure preservation of every generator, and the
    /// optional partition/probe sections.
    pub fn build(&self) -> Result<BuiltSpec> {
        let space = FinSpace::new(self.states.iter().cloned())?;
        let mass = parse_rat_list(&self.dist, space.len())?;
        let dist = Dist::new(space.clone(), mass)?;
        let base = ProbSpace::new(dist);

        let mut kernels = Vec::with_capacity(self.generators.len());
        let mut names = Vec::with_capacity(self.generators.len());
        let mut idempotent_generator = None;
        for (i, generator) in self.generators.iter().enumerate() {
            let rows = parse_matrix(&generator.rows, space.len(), space.len())?;
            kernels.push(Kernel::new(space.clone(), space.clone(), rows)?);
            names.push(generator.name.clone());
            if generator.idempotent {
                if idempotent_generator.is_some() {
                    return Err(Error::InvalidInput(
                        "more than one generator is flagged idempotent".to_owned(),
                    ));
                }
                idempotent_generator = Some(i);
            }
        }
        let system = DynSystem::new(base.clone(), kernels)?;

        let partition = match &self.partition {
            None => None,
            Some(blocks) => Some(Partition::from_labels(space.clone(), blocks)?),
        };

        let mut probes = Vec::new();
        if let Some(specs) = &self.probes {
            for probe in specs {
                let target = FinSpace::new(probe.target_states.iter().cloned())?;
                let rows = parse_matrix(&probe.rows, space.len(), target.len())?;
                let kernel = Kernel::new(space.clone(), target, rows)?;
                probes.push((probe.name.clone(), morphism_onto_push(&base, kernel)));
            }
        }

        Ok(BuiltSpec {
            system,
            generator_names: names,
            idempotent_generator,
            partition,
            probes,
        })
    }

    /// Validates just the probability space (states and measure), ignoring
    /// generators.
    pub fn build_space(&self) -> Result<ProbSpace> {
        let space = FinSpace::new(self.states.iter().cloned())?;
        let mass = parse_rat_list(&self.dist, space.len())?;
        Ok(ProbSpace::new(Dist::new(space, mass)?))
    }

    /// Builds a spec from an in-memory system, e.g. to re-analyze a computed
    /// kernel. Rationals are emitted in lowest terms.
    pub fn from_system(system: &DynSystem, names: &[String]) -> ChainSpec {
        let space = system.base().space();
        ChainSpec {
            states: space.labels().to_vec(),
            dist: system.base().dist().mass().iter().map(format_rat).collect(),
            generators: system
                .generators()
                .iter()
                .zip(names)
                .map(|(kernel, name)| GeneratorSpec {
                    name: name.clone(),
                    rows: kernel
                        .rows()
                        .iter()
                        .map(|row| row.iter().map(format_rat).collect())
                        .collect(),
                    idempotent: false,
                })
                .collect(),
            partition: None,
            probes: None,
        }
    }
}

fn parse_rat_list(cells: &[String], expected: usize) -> Result<Vec<Rat>> {
    if cells.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: cells.len(),
        });
    }
    cells.iter().map(|cell| parse_rat(cell)).collect()
}

fn parse_matrix(rows: &[Vec<String>], sources: usize, targets: usize) -> Result<Vec<Vec<Rat>>> {
    if rows.len() != sources {
        return Err(Error::DimensionMismatch {
            expected: sources,
            found: rows.len(),
        });
    }
    rows.iter()
        .map(|row| parse_rat_list(row, targets))
        .collect()
}
