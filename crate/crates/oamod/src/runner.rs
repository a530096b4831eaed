//! Config-driven runner: build a module, instantiate a catalog map, run the
//! decomposition and the property suites, and emit a machine-readable
//! report. Deterministic given (config, seed) apart from the wall-clock
//! field; complex numbers serialize as [re, im] pairs.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    self, check_orthogonal_additivity_with_tol, expected_failures, instantiate_map, property_suite,
    CatalogMap, MapKind, MapSpec, RealLinearMap, SuiteEntry,
};
use crate::decompose::{decompose, Decomposition};
use crate::error::{Error, Result};
use crate::map::GVector;
use crate::module::{ModuleDescriptor, ModuleElement, ModulePayload};
use crate::rng::{self, derive_seed};

pub const SCHEMA_VERSION: u32 = 1;

/// Named tables selectable in config files instead of a seed-generated one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSpec {
    /// Phi(E_pq) = delta_pq; requires codomain dimension 1.
    Trace,
}

/// Catalog map selection as it appears in config files. Randomly generated
/// parts (tables, linear parts) are drawn deterministically from the run
/// seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapConfig {
    PureQuadratic {
        codomain_dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<TableSpec>,
    },
    AdditivePlusQuadratic {
        codomain_dim: usize,
    },
    WeightedRankOne {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta0: Option<Vec<[f64; 2]>>,
    },
    NormSquareSum,
    OddCube,
    Perturbed {
        base: Box<MapConfig>,
        epsilon: f64,
    },
}

fn default_residual_threshold() -> f64 {
    1e-6
}

fn default_oa_tolerance() -> f64 {
    1e-8
}

/// Optional tolerance overrides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_residual_threshold")]
    pub residual_threshold: f64,
    #[serde(default = "default_oa_tolerance")]
    pub orthogonal_additivity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual_threshold: default_residual_threshold(),
            orthogonal_additivity: default_oa_tolerance(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub module: ModuleDescriptor,
    pub map: MapConfig,
    pub seed: u64,
    pub samples: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config does not match the schema: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.module.validate()?;
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be positive".into()));
        }
        if !(self.tolerances.residual_threshold.is_finite()
            && self.tolerances.residual_threshold > 0.0)
        {
            return Err(Error::InvalidConfig(
                "residual_threshold must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

fn complex_wire(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn gvector_wire(v: &GVector) -> Vec<[f64; 2]> {
    v.entries().iter().map(|&z| complex_wire(z)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteEntryWire {
    pub name: String,
    pub samples: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

impl From<&SuiteEntry> for SuiteEntryWire {
    fn from(e: &SuiteEntry) -> Self {
        Self {
            name: e.name.clone(),
            samples: e.samples,
            max_violation: e.max_violation,
            tolerance: e.tolerance,
            passed: e.passed,
            flag: e.flag.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitValueWire {
    pub p: usize,
    pub q: usize,
    pub value: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockTableWire {
    pub block: usize,
    pub dim: usize,
    pub units: Vec<UnitValueWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualWire {
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionWire {
    pub phi_table: Vec<BlockTableWire>,
    pub residual: ResidualWire,
    pub k_independence_max: f64,
    pub eval_budget_used: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessWire {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    OkExpectedFailures,
    InvariantBreach,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionWire>,
    pub orthogonal_additivity: SuiteEntryWire,
    pub properties: Vec<SuiteEntryWire>,
    pub witnesses: Vec<WitnessWire>,
    pub expected_failures: Vec<String>,
    pub unexpected_failures: Vec<String>,
    pub notes: Vec<String>,
    pub errors: Vec<String>,
    pub verdict: Verdict,
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Ok | Verdict::OkExpectedFailures => 0,
            Verdict::InvariantBreach => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn decomposition_wire(d: &Decomposition, threshold: f64) -> DecompositionWire {
    let table = &d.phi;
    let algebra = table.algebra().clone();
    let phi_table = algebra
        .blocks
        .iter()
        .enumerate()
        .map(|(j, b)| BlockTableWire {
            block: j,
            dim: b.dim,
            units: (0..b.dim)
                .flat_map(|p| {
                    (0..b.dim).map(move |q| (p, q))
                })
                .map(|(p, q)| UnitValueWire {
                    p,
                    q,
                    value: gvector_wire(table.unit_value(j, p, q)),
                })
                .collect(),
        })
        .collect();
    let max = d.residual.max;
    DecompositionWire {
        phi_table,
        residual: ResidualWire {
            count: d.residual.count,
            max,
            mean: d.residual.mean,
            threshold,
            passed: max.is_none_or(|m| m <= threshold),
        },
        k_independence_max: d.k_independence_max,
        eval_budget_used: d.eval_budget_used,
    }
}

/// Instantiate the configured map, deriving random parts from the seed.
pub fn build_map_spec(config: &RunConfig) -> Result<MapSpec> {
    let mut map_rng = rng::seeded(derive_seed(config.seed, 0));
    let kind = build_map_kind(&config.map, &config.module, &mut map_rng)?;
    Ok(MapSpec {
        module: config.module.clone(),
        kind,
    })
}

fn build_map_kind(
    map: &MapConfig,
    module: &ModuleDescriptor,
    map_rng: &mut rng::SeededRng,
) -> Result<MapKind> {
    Ok(match map {
        MapConfig::PureQuadratic {
            codomain_dim,
            table,
        } => {
            if *codomain_dim == 0 {
                return Err(Error::InvalidConfig("codomain_dim must be positive".into()));
            }
            let phi0 = match table {
                Some(TableSpec::Trace) => {
                    if *codomain_dim != 1 {
                        return Err(Error::InvalidConfig(
                            "the trace table has codomain dimension 1".into(),
                        ));
                    }
                    crate::decompose::PhiTable::trace(module.algebra())
                }
                None => catalog::random_phi_table(map_rng, &module.algebra(), *codomain_dim),
            };
            MapKind::PureQuadratic { phi0 }
        }
        MapConfig::AdditivePlusQuadratic { codomain_dim } => {
            if *codomain_dim == 0 {
                return Err(Error::InvalidConfig("codomain_dim must be positive".into()));
            }
            MapKind::AdditivePlusQuadratic {
                t0: RealLinearMap::random(map_rng, *codomain_dim, module.flat_dim()),
                phi0: catalog::random_phi_table(map_rng, &module.algebra(), *codomain_dim),
            }
        }
        MapConfig::WeightedRankOne { eta0 } => {
            let dim = match module {
                ModuleDescriptor::VectorModule { dim, .. } => *dim,
                _ => {
                    return Err(Error::InvalidConfig(
                        "weighted_rank_one requires a vector module".into(),
                    ))
                }
            };
            let eta0 = match eta0 {
                Some(entries) => entries
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect(),
                None => {
                    let mut v = vec![Complex64::ZERO; dim];
                    v[0] = Complex64::ONE;
                    v
                }
            };
            MapKind::WeightedRankOne { eta0 }
        }
        MapConfig::NormSquareSum => MapKind::NormSquareSum,
        MapConfig::OddCube => MapKind::OddCube,
        MapConfig::Perturbed { base, epsilon } => MapKind::Perturbed {
            base: Box::new(build_map_kind(base, module, map_rng)?),
            epsilon: *epsilon,
        },
    })
}

/// Witness checks recorded for the counterexample kinds.
fn witnesses(kind: &MapKind, module: &ModuleDescriptor, catalog: &CatalogMap) -> Vec<WitnessWire> {
    match kind {
        MapKind::OddCube => {
            let dim = module.flat_dim();
            let mut v = vec![Complex64::ZERO; dim];
            v[0] = Complex64::ONE;
            let x = ModuleElement::new(module.clone(), ModulePayload::Diagonal(v))
                .expect("diagonal payload");
            let gap = catalog::additivity_violation(&catalog.map, &x, &x);
            let threshold = 6.0 - 1e-9;
            vec![WitnessWire {
                name: "additivity_gap_at_doubled_unit".into(),
                value: gap,
                threshold,
                satisfied: gap >= threshold,
            }]
        }
        MapKind::WeightedRankOne { .. } => {
            let dim = module.flat_dim();
            let mut e1 = vec![Complex64::ZERO; dim];
            e1[0] = Complex64::ONE;
            let mut e2 = vec![Complex64::ZERO; dim];
            if dim > 1 {
                e2[1] = Complex64::ONE;
            }
            let x = ModuleElement::new(module.clone(), ModulePayload::Vector(e1))
                .expect("vector payload");
            let y = ModuleElement::new(module.clone(), ModulePayload::Vector(e2))
                .expect("vector payload");
            let gap = catalog::additivity_violation(&catalog.map, &x, &y);
            vec![WitnessWire {
                name: "additivity_gap_at_basis_vectors".into(),
                value: gap,
                threshold: 1.0,
                satisfied: gap >= 1.0,
            }]
        }
        _ => Vec::new(),
    }
}

/// Execute a validated configuration. Configuration problems surface as
/// `Err` (exit code 2); everything past validation lands in the report,
/// with unexpected defects downgrading the verdict instead of aborting.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();

    let spec = build_map_spec(config)?;
    let catalog_map = instantiate_map(&spec).map_err(|e| match e {
        Error::InvalidMapSpec(msg) => Error::InvalidConfig(msg),
        other => other,
    })?;

    let mut notes = Vec::new();
    let mut errors = Vec::new();
    let mut sample_rng = rng::seeded(derive_seed(config.seed, 1));

    let decomposable = config
        .module
        .block_dimensions()
        .iter()
        .all(|&d| d >= 2);
    let decomposition = if decomposable {
        match decompose(&catalog_map.map, &config.module, config.samples, &mut sample_rng) {
            Ok(d) => Some(d),
            Err(e) => {
                errors.push(format!("decomposition failed: {e}"));
                None
            }
        }
    } else {
        notes.push(
            "decomposition skipped: some algebra block carries orthogonal dimension below 2"
                .to_string(),
        );
        None
    };

    let oa_entry = check_orthogonal_additivity_with_tol(
        &catalog_map.map,
        &config.module,
        config.samples,
        &mut sample_rng,
        config.tolerances.orthogonal_additivity,
    );
    let suite = property_suite(
        &catalog_map.map,
        &config.module,
        config.samples,
        &mut sample_rng,
    );
    let witness_list = witnesses(&spec.kind, &config.module, &catalog_map);

    // Partition failures into the documented ones for this map kind and
    // the unexpected rest.
    let expected = expected_failures(&spec.kind);
    let mut expected_failed = Vec::new();
    let mut unexpected_failed = Vec::new();
    for entry in std::iter::once(&oa_entry).chain(suite.entries.iter()) {
        if !entry.passed {
            if expected.contains(&entry.name.as_str()) {
                expected_failed.push(entry.name.clone());
            } else {
                unexpected_failed.push(entry.name.clone());
            }
        }
    }
    if let Some(w) = witness_list.iter().find(|w| !w.satisfied) {
        unexpected_failed.push(w.name.clone());
    }

    let residual_expected_high = matches!(spec.kind, MapKind::Perturbed { .. });
    let decomposition_wire = decomposition
        .as_ref()
        .map(|d| decomposition_wire(d, config.tolerances.residual_threshold));
    if let Some(dw) = &decomposition_wire {
        if !dw.residual.passed {
            if residual_expected_high {
                expected_failed.push("residual_threshold".into());
                notes.push("perturbation detected through the decomposition residual".into());
            } else {
                unexpected_failed.push("residual_threshold".into());
            }
        }
    }

    let verdict = if !errors.is_empty() || !unexpected_failed.is_empty() {
        Verdict::InvariantBreach
    } else if expected_failed.is_empty() {
        Verdict::Ok
    } else {
        Verdict::OkExpectedFailures
    };

    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        decomposition: decomposition_wire,
        orthogonal_additivity: SuiteEntryWire::from(&oa_entry),
        properties: suite.entries.iter().map(SuiteEntryWire::from).collect(),
        witnesses: witness_list,
        expected_failures: expected_failed,
        unexpected_failures: unexpected_failed,
        notes,
        errors,
        verdict,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}
