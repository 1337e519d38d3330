//! Scenario-file schema and loading.
//!
//! A scenario file is a JSON document with four sections:
//!
//! ```json
//! {
//!   "scenario":  { "phase_hours": {..}, "coord_hours": .., "team_size": ..,
//!                  "capacity_hours": .., "cost_rate": ..,
//!                  "stated_base_hours": .. },
//!   "model":     { "oversight_factor": .., "coord_retention": ..,
//!                  "ai_time_factor": {..} },
//!   "optimizer": { .. },
//!   "sweep":     { .. }
//! }
//! ```
//!
//! `model`, `optimizer`, and `sweep` are optional; omitted fields take the
//! documented defaults. Unknown keys are rejected with the offending path
//! named. Loading resolves everything into core types and computes a stable
//! digest of the resolved configuration (seed excluded, so reruns of the
//! same problem share a digest).

use std::fs;
use std::path::Path;

use serde::Deserialize;

use stackopt_core::evo::{OptimizerConfig, ViolationScales};
use stackopt_core::labor::{AutomationVector, ScenarioParams};
use stackopt_core::phase::{Phase, PhaseMap};
use stackopt_core::sweep::{SweepMode, SweepSpec};

use crate::error::CliError;

/// A fully resolved scenario file.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub params: ScenarioParams,
    pub optimizer: OptimizerConfig,
    /// Seed given in the file, if any; the CLI flag takes precedence and a
    /// random seed is drawn when both are absent.
    pub file_seed: Option<u64>,
    pub sweep: Option<SweepSpec>,
    /// FNV-1a hash (hex) of the resolved configuration.
    pub digest: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    scenario: ScenarioSection,
    #[serde(default)]
    model: ModelSection,
    #[serde(default)]
    optimizer: OptimizerSection,
    #[serde(default)]
    sweep: Option<SweepSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSection {
    phase_hours: PhaseValues,
    coord_hours: f64,
    team_size: u32,
    capacity_hours: f64,
    cost_rate: f64,
    #[serde(default)]
    stated_base_hours: Option<f64>,
}

/// Six required per-phase values.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseValues {
    requirements: f64,
    design: f64,
    development: f64,
    testing: f64,
    deployment: f64,
    maintenance: f64,
}

impl PhaseValues {
    fn to_map(&self) -> PhaseMap {
        PhaseMap::from([
            self.requirements,
            self.design,
            self.development,
            self.testing,
            self.deployment,
            self.maintenance,
        ])
    }
}

/// Six optional per-phase values with a shared default.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialPhaseValues {
    requirements: Option<f64>,
    design: Option<f64>,
    development: Option<f64>,
    testing: Option<f64>,
    deployment: Option<f64>,
    maintenance: Option<f64>,
}

impl PartialPhaseValues {
    fn get(&self, phase: Phase) -> Option<f64> {
        match phase {
            Phase::Requirements => self.requirements,
            Phase::Design => self.design,
            Phase::Development => self.development,
            Phase::Testing => self.testing,
            Phase::Deployment => self.deployment,
            Phase::Maintenance => self.maintenance,
        }
    }

    fn to_map_with_default(&self, default: f64) -> PhaseMap {
        PhaseMap::from_fn(|p| self.get(p).unwrap_or(default))
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    oversight_factor: Option<f64>,
    coord_retention: Option<f64>,
    ai_time_factor: Option<PartialPhaseValues>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizerSection {
    population_size: Option<usize>,
    generations: Option<usize>,
    crossover_prob: Option<f64>,
    mutation_sigma: Option<f64>,
    real_mutation_prob: Option<f64>,
    int_perturb_prob: Option<f64>,
    team_min: Option<u32>,
    team_max: Option<u32>,
    fixed_phases: Option<PartialPhaseValues>,
    seed: Option<u64>,
    quality_floor: Option<f64>,
    violation_scales: Option<ScalesSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalesSection {
    capacity: Option<f64>,
    quality: Option<f64>,
    tipping: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    beta_grid: Option<Vec<f64>>,
    alpha_grid: Option<Vec<f64>>,
    mode: Option<SweepModeName>,
    vector: Option<PhaseValues>,
    seeds: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SweepModeName {
    FixedVector,
    Reoptimize,
}

/// Loads, validates, and resolves a scenario file.
pub fn load_scenario(path: &Path) -> Result<LoadedScenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text, &path.display().to_string())
}

/// Parses scenario text; `origin` names the source in error messages.
pub fn parse_scenario(text: &str, origin: &str) -> Result<LoadedScenario, CliError> {
    let mut deserializer = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile =
        serde_path_to_error::deserialize(&mut deserializer).map_err(|e| CliError::Parse {
            path: origin.to_string(),
            message: format!("{} (at {})", e.inner(), e.path()),
        })?;
    resolve(file)
}

fn resolve(file: ScenarioFile) -> Result<LoadedScenario, CliError> {
    let params = resolve_params(&file)?;
    let (optimizer, file_seed) = resolve_optimizer(&file.optimizer)?;
    let sweep = match &file.sweep {
        Some(section) => Some(resolve_sweep(section, &optimizer, file_seed)?),
        None => None,
    };
    let digest = digest(&params, &optimizer, &sweep);
    Ok(LoadedScenario {
        params,
        optimizer,
        file_seed,
        sweep,
        digest,
    })
}

fn resolve_params(file: &ScenarioFile) -> Result<ScenarioParams, CliError> {
    let scenario = &file.scenario;
    let model = &file.model;
    let mut builder = ScenarioParams::builder(
        scenario.phase_hours.to_map(),
        scenario.coord_hours,
        scenario.team_size,
        scenario.capacity_hours,
        scenario.cost_rate,
    )
    .oversight_factor(model.oversight_factor.unwrap_or(0.20))
    .coord_retention(model.coord_retention.unwrap_or(0.40));
    if let Some(factors) = &model.ai_time_factor {
        builder = builder.ai_time_factor(factors.to_map_with_default(1.0));
    }
    if let Some(stated) = scenario.stated_base_hours {
        builder = builder.stated_base_hours(stated);
    }
    builder.build().map_err(|e| validation_with_path(&e))
}

/// Prefixes a core validation error with the file section it came from.
fn validation_with_path(err: &stackopt_core::Error) -> CliError {
    let message = match err {
        stackopt_core::Error::InvalidParam { field, message } => {
            let section = match field.split('.').next().unwrap_or("") {
                "oversight_factor" | "coord_retention" | "ai_time_factor" => "model",
                "beta_grid" | "alpha_grid" | "vector" | "optimizer" | "seeds" => "sweep",
                _ => "scenario",
            };
            format!("{section}.{field}: {message}")
        }
        other => other.to_string(),
    };
    CliError::Validation(message)
}

fn resolve_optimizer(section: &OptimizerSection) -> Result<(OptimizerConfig, Option<u64>), CliError> {
    let defaults = OptimizerConfig::default();
    let default_scales = ViolationScales::default();
    let scales = section.violation_scales.as_ref().cloned().unwrap_or_default();
    let fixed_phases = match &section.fixed_phases {
        Some(partial) => PhaseMap::from_fn(|p| partial.get(p)),
        None => defaults.fixed_phases,
    };
    let config = OptimizerConfig {
        population_size: section.population_size.unwrap_or(defaults.population_size),
        generations: section.generations.unwrap_or(defaults.generations),
        crossover_prob: section.crossover_prob.unwrap_or(defaults.crossover_prob),
        mutation_sigma: section.mutation_sigma.unwrap_or(defaults.mutation_sigma),
        real_mutation_prob: section
            .real_mutation_prob
            .unwrap_or(defaults.real_mutation_prob),
        int_perturb_prob: section.int_perturb_prob.unwrap_or(defaults.int_perturb_prob),
        team_min: section.team_min.unwrap_or(defaults.team_min),
        team_max: section.team_max.unwrap_or(defaults.team_max),
        fixed_phases,
        seed: section.seed.unwrap_or(0),
        quality_floor: section.quality_floor.unwrap_or(defaults.quality_floor),
        violation_scales: ViolationScales {
            capacity: scales.capacity.unwrap_or(default_scales.capacity),
            quality: scales.quality.unwrap_or(default_scales.quality),
            tipping: scales.tipping.unwrap_or(default_scales.tipping),
        },
    };
    config
        .validate()
        .map_err(|e| CliError::Validation(format!("optimizer: {e}")))?;
    Ok((config, section.seed))
}

fn resolve_sweep(
    section: &SweepSection,
    optimizer: &OptimizerConfig,
    file_seed: Option<u64>,
) -> Result<SweepSpec, CliError> {
    let defaults = SweepSpec::default();
    let mode = match section.mode {
        Some(SweepModeName::FixedVector) | None => SweepMode::FixedVector,
        Some(SweepModeName::Reoptimize) => SweepMode::Reoptimize,
    };
    let vector = match &section.vector {
        Some(values) => Some(
            AutomationVector::new(values.to_map())
                .map_err(|e| validation_with_path_in_sweep(&e))?,
        ),
        None => defaults.vector,
    };
    let spec = SweepSpec {
        beta_grid: section.beta_grid.clone().unwrap_or(defaults.beta_grid),
        alpha_grid: section.alpha_grid.clone().unwrap_or(defaults.alpha_grid),
        mode,
        vector,
        optimizer: match mode {
            SweepMode::Reoptimize => Some(optimizer.clone()),
            SweepMode::FixedVector => None,
        },
        seeds: section
            .seeds
            .clone()
            .unwrap_or_else(|| vec![file_seed.unwrap_or(0)]),
    };
    spec.validate().map_err(|e| validation_with_path_in_sweep(&e))?;
    Ok(spec)
}

fn validation_with_path_in_sweep(err: &stackopt_core::Error) -> CliError {
    match err {
        stackopt_core::Error::InvalidParam { field, message } => {
            let field = field.replace("fractions.", "vector.");
            CliError::Validation(format!("sweep.{field}: {message}"))
        }
        other => CliError::Validation(other.to_string()),
    }
}

/// Stable 64-bit FNV-1a digest (hex) of the resolved configuration with the
/// seed zeroed out; run seeds are reported separately.
fn digest(
    params: &ScenarioParams,
    optimizer: &OptimizerConfig,
    sweep: &Option<SweepSpec>,
) -> String {
    let unseeded = OptimizerConfig {
        seed: 0,
        ..optimizer.clone()
    };
    let blob = serde_json::to_string(&(params, &unseeded, sweep))
        .expect("resolved config serializes");
    format!("{:016x}", fnv1a64(blob.as_bytes()))
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
