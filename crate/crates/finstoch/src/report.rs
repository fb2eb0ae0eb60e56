//! Analysis reports and their renderings: structured (machine, JSON) and
//! human-readable, plus DOT graph emission.
//!
//! Machine reports carry matrices row-per-source with rational strings in
//! lowest terms, so they re-parse to exactly the computed values. The human
//! rendering prints matrices column-stochastically (columns are source
//! states).

use num_traits::Zero;
use serde::Serialize;

use crate::chainspec::BuiltSpec;
use crate::dynamics::{self, DynSystem, EquilibriumReport};
use crate::error::Result;
use crate::idempotent::{self, Probe, ProbeOutcome};
use crate::kernel::Kernel;
use crate::ps::{find_ps_iso, quotient_by_partition, Partition, ProbSpace, PsMorphism};
use crate::rational::{format_rat, parse_rat};
use crate::space::Dist;

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    pub source_states: Vec<String>,
    pub target_states: Vec<String>,
    /// Row per source state; entries are rationals in lowest terms.
    pub rows: Vec<Vec<String>>,
}

impl MatrixReport {
    pub fn from_kernel(kernel: &Kernel) -> Self {
        Self {
            source_states: kernel.source().labels().to_vec(),
            target_states: kernel.target().labels().to_vec(),
            rows: kernel
                .rows()
                .iter()
                .map(|row| row.iter().map(format_rat).collect())
                .collect(),
        }
    }

    /// Re-parses the report into an exact kernel (round-trip check).
    pub fn to_kernel(&self) -> Result<Kernel> {
        let source = crate::space::FinSpace::new(self.source_states.iter().cloned())?;
        let target = crate::space::FinSpace::new(self.target_states.iter().cloned())?;
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|cell| parse_rat(cell)).collect())
            .collect::<Result<Vec<_>>>()?;
        Kernel::new(source, target, rows)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub label: String,
    pub members: Vec<String>,
    pub mass: String,
    pub positive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub weight: String,
    pub measure: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictComparison {
    pub blocks: Vec<BlockReport>,
    /// Whether the strict and almost-sure quotient spaces are isomorphic as
    /// probability spaces.
    pub quotients_isomorphic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionAnalysis {
    pub quotient_masses: Vec<String>,
    pub reduced_masses: Vec<String>,
    pub isomorphic_to_reduced: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeAnalysis {
    pub name: String,
    pub right_invariant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<MatrixReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub states: Vec<String>,
    pub dist: Vec<String>,
    pub blocks: Vec<BlockReport>,
    pub component_masses: Vec<String>,
    pub projection: MatrixReport,
    pub section: MatrixReport,
    pub equilibrium: MatrixReport,
    pub ergodic: bool,
    pub decomposition: Vec<ComponentReport>,
    pub equilibrium_checks: EquilibriumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<StrictComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_analysis: Option<PartitionAnalysis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<ProbeAnalysis>,
}

impl AnalysisReport {
    /// Exit-status relevant outcome: all embedded theorem checks.
    pub fn checks_passed(&self) -> bool {
        self.equilibrium_checks.passed()
    }
}

fn block_reports(base: &ProbSpace, partition: &Partition) -> Vec<BlockReport> {
    partition
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let mass = base.dist().mass_of(block);
            BlockReport {
                label: partition.block_label(b),
                members: block
                    .iter()
                    .map(|&x| base.space().label(x).to_owned())
                    .collect(),
                positive: !mass.is_zero(),
                mass: format_rat(&mass),
            }
        })
        .collect()
}

/// Full analysis of a built chain spec.
pub fn analyze(built: &BuiltSpec, strict: bool, seed: u64) -> AnalysisReport {
    let sys = &built.system;
    let base = sys.base();
    let inv = dynamics::invariant_object(sys);

    let decomposition = dynamics::ergodic_decomposition(sys)
        .into_iter()
        .map(|(weight, measure)| ComponentReport {
            weight: format_rat(&weight),
            measure: measure.mass().iter().map(format_rat).collect(),
        })
        .collect();

    let strict_report = strict.then(|| {
        let strict_partition = dynamics::strict_invariant_partition(sys);
        let (strict_quotient, _) =
            quotient_by_partition(base, &strict_partition).expect("partition fits the base");
        let quotients_isomorphic = find_ps_iso(&strict_quotient, inv.components()).is_some();
        StrictComparison {
            blocks: block_reports(base, &strict_partition),
            quotients_isomorphic,
        }
    });

    let partition_analysis = built.partition.as_ref().map(|partition| {
        let (quotient, _) =
            quotient_by_partition(base, partition).expect("partition fits the base");
        let reduced_masses: Vec<_> = quotient
            .support()
            .iter()
            .map(|&b| quotient.dist().mass_at(b).clone())
            .collect();
        let reduced_space =
            crate::space::FinSpace::new((0..reduced_masses.len().max(1)).map(|i| format!("r{i}")))
                .expect("labels distinct");
        let isomorphic = if reduced_masses.is_empty() {
            false
        } else {
            let reduced = ProbSpace::new(
                Dist::new(reduced_space, reduced_masses.clone()).expect("positive masses sum to 1"),
            );
            find_ps_iso(&quotient, &reduced).is_some()
        };
        PartitionAnalysis {
            quotient_masses: quotient.dist().mass().iter().map(format_rat).collect(),
            reduced_masses: reduced_masses.iter().map(format_rat).collect(),
            isomorphic_to_reduced: isomorphic,
        }
    });

    let probes = built
        .probes
        .iter()
        .map(|(name, probe)| {
            let right_invariant =
                dynamics::is_right_invariant(probe, sys).expect("probe sources match");
            let factorization = right_invariant.then(|| {
                let factored = dynamics::factor_right_invariant(probe, sys)
                    .expect("right-invariant probes factor");
                MatrixReport::from_kernel(factored.kernel())
            });
            ProbeAnalysis {
                name: name.clone(),
                right_invariant,
                factorization,
            }
        })
        .collect();

    AnalysisReport {
        states: base.space().labels().to_vec(),
        dist: base.dist().mass().iter().map(format_rat).collect(),
        blocks: block_reports(base, inv.partition()),
        component_masses: inv
            .components()
            .dist()
            .mass()
            .iter()
            .map(format_rat)
            .collect(),
        projection: MatrixReport::from_kernel(inv.projection().kernel()),
        section: MatrixReport::from_kernel(inv.section().kernel()),
        equilibrium: MatrixReport::from_kernel(inv.equilibrium().kernel()),
        ergodic: dynamics::is_ergodic(sys),
        decomposition,
        equilibrium_checks: dynamics::equilibrium_checks(sys, seed),
        strict: strict_report,
        partition_analysis,
        probes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitChecks {
    pub reassembles_idempotent: bool,
    pub retraction_section_is_identity: bool,
    pub section_is_bayesian_inverse: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub generator: String,
    pub strictified: MatrixReport,
    pub mid_states: Vec<String>,
    pub mid_dist: Vec<String>,
    pub retraction: MatrixReport,
    pub section: MatrixReport,
    pub checks: SplitChecks,
    pub probes: Vec<ProbeSplitOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSplitOutcome {
    pub name: String,
    pub outcome: ProbeOutcome,
}

impl SplitReport {
    pub fn checks_passed(&self) -> bool {
        self.checks.reassembles_idempotent
            && self.checks.retraction_section_is_identity
            && self.checks.section_is_bayesian_inverse
            && self
                .probes
                .iter()
                .all(|p| !matches!(p.outcome, ProbeOutcome::Failed(_)))
    }
}

/// Strictifies and splits the flagged idempotent generator, verifying the
/// splitting identities and factoring the spec's probes through it.
pub fn split(built: &BuiltSpec, generator_index: usize) -> Result<SplitReport> {
    let sys = &built.system;
    let kernel = sys.generators()[generator_index].clone();
    let name = built.generator_names[generator_index].clone();
    let e = PsMorphism::new(sys.base().clone(), sys.base().clone(), kernel)
        .expect("generators are measure-preserving");

    let strictified = idempotent::strictify_idempotent(&e)?;
    let splitting = idempotent::split_idempotent(&e)?;

    let composite = splitting
        .section
        .compose(&splitting.retraction)
        .expect("composable");
    let round = splitting
        .retraction
        .compose(&splitting.section)
        .expect("composable");
    let checks = SplitChecks {
        reassembles_idempotent: composite == e,
        retraction_section_is_identity: round == PsMorphism::identity(&splitting.mid),
        section_is_bayesian_inverse: splitting.section == splitting.retraction.dagger(),
    };

    let mut probe_list: Vec<(String, Probe)> =
        vec![("section".to_owned(), Probe::Into(splitting.section.clone()))];
    for (probe_name, probe) in &built.probes {
        probe_list.push((probe_name.clone(), Probe::OutOf(probe.clone())));
    }
    let outcomes = idempotent::verify_equalizer_coequalizer(
        &e,
        &splitting,
        &probe_list
            .iter()
            .map(|(_, p)| p.clone())
            .collect::<Vec<_>>(),
    );
    let probes = probe_list
        .into_iter()
        .zip(outcomes)
        .map(|((probe_name, _), report)| ProbeSplitOutcome {
            name: probe_name,
            outcome: report.outcome,
        })
        .collect();

    Ok(SplitReport {
        generator: name,
        strictified: MatrixReport::from_kernel(&strictified),
        mid_states: splitting.mid.space().labels().to_vec(),
        mid_dist: splitting.mid.dist().mass().iter().map(format_rat).collect(),
        retraction: MatrixReport::from_kernel(splitting.retraction.kernel()),
        section: MatrixReport::from_kernel(splitting.section.kernel()),
        checks,
        probes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forward: Option<MatrixReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward: Option<MatrixReport>,
}

/// Searches for a PS-isomorphism between the probability spaces of two
/// specs (generators are ignored).
pub fn iso(a: &ProbSpace, b: &ProbSpace) -> IsoReport {
    match find_ps_iso(a, b) {
        None => IsoReport {
            isomorphic: false,
            forward: None,
            backward: None,
        },
        Some((f, g)) => IsoReport {
            isomorphic: true,
            forward: Some(MatrixReport::from_kernel(f.kernel())),
            backward: Some(MatrixReport::from_kernel(g.kernel())),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExchangeReport {
    pub base: Vec<String>,
    pub n: usize,
    pub orbit_count: String,
    pub orbits: Vec<BlockReport>,
    pub decomposition: Vec<ComponentReport>,
    /// The uniform-on-orbit section matrix, included for small products.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<MatrixReport>,
    pub ergodicity: crate::exchangeable::ExchangeabilityReport,
}

/// Orbit structure, orbit decomposition, and ergodicity report for an
/// exchangeable measure on a product space.
pub fn exchange(base: &crate::space::FinSpace, n: usize, p: &Dist) -> Result<ExchangeReport> {
    let structure = crate::exchangeable::orbit_structure(base, n)?;
    let product_space = ProbSpace::new(p.clone());
    let orbits = block_reports(&product_space, &structure.orbits);
    let decomposition = crate::exchangeable::finite_definetti(base, n, p)?
        .into_iter()
        .map(|(weight, measure)| ComponentReport {
            weight: format_rat(&weight),
            measure: measure.mass().iter().map(format_rat).collect(),
        })
        .collect();
    let section = (structure.product.len() <= 64)
        .then(|| crate::exchangeable::uniform_orbit_section(base, n, p))
        .transpose()?
        .map(|s| MatrixReport::from_kernel(s.kernel()));
    let ergodicity = crate::exchangeable::hewitt_savage_finite(base, n, p)?;
    Ok(ExchangeReport {
        base: base.labels().to_vec(),
        n,
        orbit_count: crate::exchangeable::orbit_count(base.len(), n).to_string(),
        orbits,
        decomposition,
        section,
        ergodicity,
    })
}

// ---------------------------------------------------------------------------
// Human rendering
// ---------------------------------------------------------------------------

/// Renders a matrix column-stochastically: columns are source states.
fn render_matrix_columns(out: &mut String, title: &str, m: &MatrixReport) {
    out.push_str(&format!("{title} (columns = source states):\n"));
    let width = m
        .rows
        .iter()
        .flatten()
        .map(String::len)
        .chain(m.source_states.iter().map(String::len))
        .chain(m.target_states.iter().map(String::len))
        .max()
        .unwrap_or(1)
        + 2;
    out.push_str(&" ".repeat(width));
    for s in &m.source_states {
        out.push_str(&format!("{s:>width$}"));
    }
    out.push('\n');
    for (y, t) in m.target_states.iter().enumerate() {
        out.push_str(&format!("{t:>width$}"));
        for row in &m.rows {
            out.push_str(&format!("{:>width$}", row[y]));
        }
        out.push('\n');
    }
}

pub fn render_analysis(report: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str("states: ");
    out.push_str(&report.states.join(", "));
    out.push('\n');
    out.push_str("measure: ");
    out.push_str(&report.dist.join(", "));
    out.push_str("\n\ninvariant blocks:\n");
    for block in &report.blocks {
        let kind = if block.positive { "positive" } else { "null" };
        out.push_str(&format!("  {} mass {} ({kind})\n", block.label, block.mass));
    }
    out.push_str(&format!("\nergodic: {}\n", report.ergodic));
    out.push_str("component masses: ");
    out.push_str(&report.component_masses.join(", "));
    out.push_str("\n\n");
    render_matrix_columns(&mut out, "projection", &report.projection);
    out.push('\n');
    render_matrix_columns(&mut out, "section", &report.section);
    out.push('\n');
    render_matrix_columns(&mut out, "equilibrium", &report.equilibrium);
    out.push_str("\nergodic decomposition:\n");
    for part in &report.decomposition {
        out.push_str(&format!(
            "  weight {}: [{}]\n",
            part.weight,
            part.measure.join(", ")
        ));
    }
    let checks = &report.equilibrium_checks;
    out.push_str(&format!(
        "\nequilibrium checks: {}\n",
        if checks.passed() {
            "all passed"
        } else {
            "FAILED"
        }
    ));
    out.push_str(&format!(
        "  commutation with generators: {}\n",
        checks.commutation.iter().all(|&(_, r, l)| r && l)
    ));
    out.push_str(&format!(
        "  right-invariance criterion: {}/{} samples agree\n",
        checks.right_criterion.agreements, checks.right_criterion.total
    ));
    out.push_str(&format!(
        "  left-invariance criterion: {}/{} samples agree\n",
        checks.left_criterion.agreements, checks.left_criterion.total
    ));
    out.push_str(&format!(
        "  independence ⟺ ergodicity: ergodic={} factorizes={} ({} pairs{})\n",
        checks.independence.ergodic,
        checks.independence.factorizes,
        checks.independence.pairs_checked,
        if checks.independence.exhaustive {
            ", exhaustive"
        } else {
            ", sampled"
        }
    ));
    out.push_str(&format!("  detailed balance: {}\n", checks.self_adjoint));
    if let Some(strict) = &report.strict {
        out.push_str("\nstrictly invariant blocks:\n");
        for block in &strict.blocks {
            out.push_str(&format!("  {} mass {}\n", block.label, block.mass));
        }
        out.push_str(&format!(
            "strict/almost-sure quotients isomorphic: {}\n",
            strict.quotients_isomorphic
        ));
    }
    if let Some(partition) = &report.partition_analysis {
        out.push_str(&format!(
            "\npartition quotient masses: {}\nreduced space masses: {}\nisomorphic to reduced: {}\n",
            partition.quotient_masses.join(", "),
            partition.reduced_masses.join(", "),
            partition.isomorphic_to_reduced
        ));
    }
    for probe in &report.probes {
        out.push_str(&format!(
            "\nprobe {}: right-invariant: {}\n",
            probe.name, probe.right_invariant
        ));
        if let Some(factored) = &probe.factorization {
            render_matrix_columns(&mut out, "  factorization", factored);
        }
    }
    out
}

pub fn render_split(report: &SplitReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("splitting generator {}\n\n", report.generator));
    render_matrix_columns(&mut out, "strictified idempotent", &report.strictified);
    out.push_str(&format!(
        "\nmid space: {} with masses {}\n\n",
        report.mid_states.join(", "),
        report.mid_dist.join(", ")
    ));
    render_matrix_columns(&mut out, "retraction", &report.retraction);
    out.push('\n');
    render_matrix_columns(&mut out, "section", &report.section);
    out.push_str(&format!(
        "\nchecks: section∘retraction = idempotent: {}; retraction∘section = id: {}; section = retraction†: {}\n",
        report.checks.reassembles_idempotent,
        report.checks.retraction_section_is_identity,
        report.checks.section_is_bayesian_inverse
    ));
    for probe in &report.probes {
        out.push_str(&format!("probe {}: {:?}\n", probe.name, probe.outcome));
    }
    out
}

pub fn render_iso(report: &IsoReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("isomorphic: {}\n", report.isomorphic));
    if let Some(forward) = &report.forward {
        render_matrix_columns(&mut out, "forward", forward);
    }
    if let Some(backward) = &report.backward {
        render_matrix_columns(&mut out, "backward", backward);
    }
    out
}

pub fn render_exchange(report: &ExchangeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "base: {}; exponent: {}; orbits: {}\n\n",
        report.base.join(", "),
        report.n,
        report.orbit_count
    ));
    for orbit in &report.orbits {
        out.push_str(&format!(
            "  orbit {} ({} states) mass {}\n",
            orbit.label,
            orbit.members.len(),
            orbit.mass
        ));
    }
    out.push_str("\norbit decomposition:\n");
    for part in &report.decomposition {
        out.push_str(&format!("  weight {}\n", part.weight));
    }
    if let Some(section) = &report.section {
        out.push('\n');
        render_matrix_columns(&mut out, "section", section);
    }
    let e = &report.ergodicity;
    out.push_str(&format!(
        "\nergodic: {}; quotient deterministic: {}; deterministic pushforwards are points: {}\n",
        e.ergodic, e.quotient_deterministic, e.deterministic_pushforwards_are_points
    ));
    out.push_str(&format!(
        "uniform on a single orbit: {}; exact product measure: {}\n",
        e.uniform_on_single_orbit, e.product_measure
    ));
    out
}

pub fn render_laws(reports: &[crate::laws::LawReport]) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&format!(
            "law {}: {} cases, {} failures\n",
            report.law,
            report.cases,
            report.failures.len()
        ));
        for failure in &report.failures {
            out.push_str(&format!(
                "  case {} (seed {}): {}\n",
                failure.case_index, failure.seed, failure.message
            ));
            for (name, rendering) in &failure.artifacts {
                out.push_str(&format!("    {name}:\n"));
                for line in rendering.lines() {
                    out.push_str(&format!("      {line}\n"));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// DOT graph emission
// ---------------------------------------------------------------------------

const PALETTE: &[&str] = &[
    "lightblue",
    "lightgreen",
    "lightsalmon",
    "plum",
    "khaki",
    "lightcyan",
    "mistyrose",
];

/// Emits the positive-transition graph in DOT format: nodes carry state
/// label and mass, node colors follow invariant blocks, and edges carry the
/// exact transition probabilities (prefixed with the generator name when
/// there is more than one generator).
pub fn dot(built: &BuiltSpec) -> String {
    let sys = &built.system;
    let base = sys.base();
    let partition = dynamics::invariant_partition(sys);
    let mut out =
        String::from("digraph chain {\n  rankdir=LR;\n  node [shape=circle, style=filled];\n");
    for x in base.space().indices() {
        let color = PALETTE[partition.block_of(x) % PALETTE.len()];
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\n{}\", fillcolor=\"{}\"];\n",
            base.space().label(x),
            base.space().label(x),
            format_rat(base.dist().mass_at(x)),
            color
        ));
    }
    let multi = sys.generators().len() > 1;
    for (name, generator) in built.generator_names.iter().zip(sys.generators()) {
        for x in base.space().indices() {
            for y in base.space().indices() {
                let weight = generator.entry(y, x);
                if weight.is_zero() {
                    continue;
                }
                let label = if multi {
                    format!("{name}: {}", format_rat(weight))
                } else {
                    format_rat(weight)
                };
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    base.space().label(x),
                    base.space().label(y),
                    label
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// DOT for a bare system without a spec (used by examples).
pub fn dot_system(sys: &DynSystem, names: &[String]) -> String {
    let spec = crate::chainspec::ChainSpec::from_system(sys, names);
    let built = spec.build().expect("emitted specs rebuild");
    dot(&built)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainspec::ChainSpec;
    use crate::fixtures;

    fn fixture_built() -> BuiltSpec {
        let fixture = fixtures::five_state_chain();
        ChainSpec::from_system(&fixture.system, &["m".to_owned()])
            .build()
            .unwrap()
    }

    #[test]
    fn analysis_report_round_trips_matrices() {
        let built = fixture_built();
        let report = analyze(&built, true, 7);
        assert!(report.checks_passed());
        let inv = dynamics::invariant_object(&built.system);
        assert_eq!(
            &report.equilibrium.to_kernel().unwrap(),
            inv.equilibrium().kernel()
        );
        assert_eq!(
            &report.projection.to_kernel().unwrap(),
            inv.projection().kernel()
        );
        assert_eq!(&report.section.to_kernel().unwrap(), inv.section().kernel());
        assert!(report.strict.as_ref().unwrap().quotients_isomorphic);

        // Machine format serializes and the key values survive.
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"2/5\""));
        assert!(json.contains("\"ergodic\":false"));
    }

    #[test]
    fn dot_output_carries_exact_edge_labels() {
        let built = fixture_built();
        let graph = dot(&built);
        assert!(graph.contains("\"a\" -> \"b\" [label=\"1/2\"]"));
        assert!(graph.contains("\"e\" -> \"d\" [label=\"1/3\"]"));
        assert!(graph.contains("\"e\" -> \"e\" [label=\"2/3\"]"));
        assert!(graph.starts_with("digraph chain {"));
    }

    #[test]
    fn human_rendering_prints_column_stochastic_equilibrium() {
        let built = fixture_built();
        let report = analyze(&built, false, 7);
        let text = render_analysis(&report);
        assert!(text.contains("equilibrium (columns = source states):"));
        assert!(text.contains("ergodic: false"));
        assert!(text.contains("weight 1/3"));
        assert!(text.contains("weight 2/3"));
    }
}
