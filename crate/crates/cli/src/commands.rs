//! The five subcommands: `evaluate`, `optimize`, `tipping`, `sweep`, `hv`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};

use stackopt_core::evo::{self, OptimizerConfig};
use stackopt_core::labor::{
    baseline_cost, collapsed_labor, model_heuristic_cost, naive_heuristic_cost, quality_ratio,
    tipping, tipping_from_fraction, AutomationVector,
};
use stackopt_core::metrics::{
    hypervolume_2d, normalize_front, relative_improvement, summarize, NormalizedPoint,
};
use stackopt_core::phase::PhaseMap;
use stackopt_core::sweep::{run_sweep, SweepMode};

use crate::config::{load_scenario, LoadedScenario};
use crate::error::CliError;
use crate::report::{
    evaluate_table, front_csv, sweep_csv, tipping_table, to_json_pretty, EvaluateReport,
    HeuristicComparison, RunReport, SummaryReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

/// Per-phase automation fraction flags shared by `evaluate` and `tipping`.
#[derive(Debug, Clone, Copy, Default, Args)]
pub struct FractionFlags {
    /// Requirements automation fraction (default 0)
    #[arg(long, value_name = "F")]
    pub f_req: Option<f64>,
    /// Design automation fraction (default 0)
    #[arg(long, value_name = "F")]
    pub f_design: Option<f64>,
    /// Development automation fraction (default 0)
    #[arg(long, value_name = "F")]
    pub f_dev: Option<f64>,
    /// Testing automation fraction (default 0)
    #[arg(long, value_name = "F")]
    pub f_test: Option<f64>,
    /// Deployment automation fraction (default 0)
    #[arg(long, value_name = "F")]
    pub f_deploy: Option<f64>,
    /// Maintenance automation fraction (default 0)
    #[arg(long, value_name = "F")]
    pub f_maint: Option<f64>,
}

impl FractionFlags {
    pub fn any_set(&self) -> bool {
        [
            self.f_req,
            self.f_design,
            self.f_dev,
            self.f_test,
            self.f_deploy,
            self.f_maint,
        ]
        .iter()
        .any(Option::is_some)
    }

    pub fn to_vector(&self) -> Result<AutomationVector, CliError> {
        let values = PhaseMap::from([
            self.f_req.unwrap_or(0.0),
            self.f_design.unwrap_or(0.0),
            self.f_dev.unwrap_or(0.0),
            self.f_test.unwrap_or(0.0),
            self.f_deploy.unwrap_or(0.0),
            self.f_maint.unwrap_or(0.0),
        ]);
        AutomationVector::new(values).map_err(|e| match e {
            stackopt_core::Error::InvalidParam { field, message } => {
                let flag = match field.strip_prefix("fractions.") {
                    Some("requirements") => "--f-req",
                    Some("design") => "--f-design",
                    Some("development") => "--f-dev",
                    Some("testing") => "--f-test",
                    Some("deployment") => "--f-deploy",
                    Some("maintenance") => "--f-maint",
                    _ => "--f-*",
                };
                CliError::Validation(format!("{flag}: {message}"))
            }
            other => CliError::Validation(other.to_string()),
        })
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Scenario file
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
    #[command(flatten)]
    pub fractions: FractionFlags,
}

/// Evaluates a fixed automation vector: labor breakdown, quality ratio, and
/// tipping analysis.
pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<(), CliError> {
    let loaded = load_scenario(&args.config)?;
    let vector = args.fractions.to_vector()?;
    let breakdown = collapsed_labor(&loaded.params, &vector);
    let report = EvaluateReport {
        quality_ratio: quality_ratio(&loaded.params, &vector).ok(),
        tipping: tipping(&loaded.params, &breakdown),
        breakdown,
    };
    match args.format {
        OutputFormat::Json => print!("{}", to_json_pretty(&report)),
        OutputFormat::Table => print!("{}", evaluate_table(&report)),
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct TippingArgs {
    /// Scenario file
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    pub format: OutputFormat,
    /// Scalar overall automation fraction; bypasses the phase-level model
    #[arg(long, value_name = "F")]
    pub fraction: Option<f64>,
    #[command(flatten)]
    pub fractions: FractionFlags,
}

/// Tipping-point analysis from either a scalar fraction or a phase vector.
pub fn cmd_tipping(args: &TippingArgs) -> Result<(), CliError> {
    let loaded = load_scenario(&args.config)?;
    let report = match args.fraction {
        Some(fraction) => {
            if args.fractions.any_set() {
                return Err(CliError::Validation(
                    "--fraction conflicts with per-phase --f-* flags; pass one or the other".into(),
                ));
            }
            if !fraction.is_finite() || fraction > 1.0 {
                return Err(CliError::Validation("--fraction: must be a finite value <= 1".into()));
            }
            tipping_from_fraction(&loaded.params, fraction)
        }
        None => {
            let vector = args.fractions.to_vector()?;
            let breakdown = collapsed_labor(&loaded.params, &vector);
            tipping(&loaded.params, &breakdown)
        }
    };
    match args.format {
        OutputFormat::Json => print!("{}", to_json_pretty(&report)),
        OutputFormat::Table => print!("{}", tipping_table(&report)),
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Scenario file
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory for run_<k>.json, front_<k>.csv, summary.json
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Number of independent runs; run k uses seed SEED + k
    #[arg(long, default_value_t = 1)]
    pub runs: u32,
    /// Base seed; falls back to the file seed, then to a random draw
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Uniform fraction for the heuristic baselines in the summary
    #[arg(long, default_value_t = 0.3, value_name = "F")]
    pub heuristic_f: f64,
}

/// Runs R independent seeded optimizations and writes per-run reports plus a
/// summary. Partial outputs are removed on failure.
pub fn cmd_optimize(args: &OptimizeArgs) -> Result<(), CliError> {
    if args.runs < 1 {
        return Err(CliError::Validation("--runs: must be >= 1".into()));
    }
    if !(0.0..=1.0).contains(&args.heuristic_f) {
        return Err(CliError::Validation("--heuristic-f: must lie in [0, 1]".into()));
    }
    let loaded = load_scenario(&args.config)?;
    let base_seed = match args.seed.or(loaded.file_seed) {
        Some(seed) => seed,
        None => {
            let seed: u64 = rand::random();
            println!("seed: {seed} (randomly drawn)");
            seed
        }
    };

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", args.out.display())))?;

    let mut written: Vec<PathBuf> = Vec::new();
    let result = run_batch(args, &loaded, base_seed, &mut written);
    if result.is_err() {
        for path in &written {
            let _ = fs::remove_file(path);
        }
    }
    result
}

fn run_batch(
    args: &OptimizeArgs,
    loaded: &LoadedScenario,
    base_seed: u64,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let c_base = baseline_cost(&loaded.params);
    let mut seeds = Vec::with_capacity(args.runs as usize);
    let mut best_costs = Vec::with_capacity(args.runs as usize);
    let mut hypervolumes = Vec::with_capacity(args.runs as usize);
    let mut team_sizes = Vec::with_capacity(args.runs as usize);

    for k in 0..u64::from(args.runs) {
        let seed = base_seed.wrapping_add(k);
        let config = OptimizerConfig {
            seed,
            ..loaded.optimizer.clone()
        };
        let started = Instant::now();
        let engine = evo::run(&loaded.params, &config)
            .map_err(|e| CliError::Runtime(format!("run {k}: {e}")))?;
        let wall_time = started.elapsed().as_secs_f64();
        let report = RunReport::from_engine(&engine, &loaded.digest, c_base, wall_time);

        write_output(
            &args.out.join(format!("run_{k}.json")),
            &to_json_pretty(&report),
            written,
        )?;
        write_output(
            &args.out.join(format!("front_{k}.csv")),
            &front_csv(&report.front),
            written,
        )?;

        let best = report
            .best
            .as_ref()
            .ok_or_else(|| CliError::Runtime(format!("run {k}: no feasible solution found")))?;
        seeds.push(seed);
        best_costs.push(best.cost);
        hypervolumes.push(report.hv);
        team_sizes.push(f64::from(best.team_size));
        println!(
            "run {k}: seed {seed}, best cost {:.2}, quality {:.4}, team {}, hv {:.4}",
            best.cost, best.quality, best.team_size, report.hv
        );
    }

    let ec_mean_best_cost = best_costs.iter().sum::<f64>() / best_costs.len() as f64;
    let naive_linear_cost = naive_heuristic_cost(&loaded.params, args.heuristic_f);
    let model_uniform_cost = model_heuristic_cost(&loaded.params, args.heuristic_f)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let summary = SummaryReport {
        scenario_digest: loaded.digest.clone(),
        runs: args.runs as usize,
        seeds,
        best_cost: summarize(&best_costs).map_err(|e| CliError::Runtime(e.to_string()))?,
        hypervolume: summarize(&hypervolumes).map_err(|e| CliError::Runtime(e.to_string()))?,
        team_size: summarize(&team_sizes).map_err(|e| CliError::Runtime(e.to_string()))?,
        heuristics: HeuristicComparison {
            uniform_fraction: args.heuristic_f,
            naive_linear_cost,
            model_uniform_cost,
            ec_mean_best_cost,
            improvement_vs_naive_pct: 100.0
                * relative_improvement(naive_linear_cost, ec_mean_best_cost),
            improvement_vs_model_pct: 100.0
                * relative_improvement(model_uniform_cost, ec_mean_best_cost),
        },
    };
    write_output(&args.out.join("summary.json"), &to_json_pretty(&summary), written)?;
    println!(
        "summary: mean best cost {:.2} (std {:.2}), mean hv {:.4}, {:.1}% below naive heuristic",
        summary.best_cost.mean,
        summary.best_cost.std,
        summary.hypervolume.mean,
        summary.heuristics.improvement_vs_naive_pct
    );
    Ok(())
}

fn write_output(path: &Path, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    written.push(path.to_path_buf());
    Ok(())
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Scenario file
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory for sweep.csv
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Override the sweep mode from the file
    #[arg(long, value_enum)]
    pub mode: Option<SweepModeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepModeArg {
    FixedVector,
    Reoptimize,
}

/// Evaluates the oversight/coordination grid and writes `sweep.csv`.
pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let loaded = load_scenario(&args.config)?;
    let mut spec = loaded.sweep.clone().unwrap_or_default();
    if let Some(mode) = args.mode {
        spec.mode = match mode {
            SweepModeArg::FixedVector => SweepMode::FixedVector,
            SweepModeArg::Reoptimize => SweepMode::Reoptimize,
        };
    }
    if spec.mode == SweepMode::Reoptimize {
        if spec.optimizer.is_none() {
            spec.optimizer = Some(loaded.optimizer.clone());
        }
        if spec.seeds.is_empty() {
            spec.seeds = vec![loaded.file_seed.unwrap_or(0)];
        }
    }
    spec.validate().map_err(CliError::from)?;

    let cells = run_sweep(&loaded.params, &spec)
        .map_err(|e| CliError::Runtime(format!("sweep failed: {e}")))?;
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", args.out.display())))?;
    let path = args.out.join("sweep.csv");
    fs::write(&path, sweep_csv(&cells))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {} rows to {}", cells.len(), path.display());
    Ok(())
}

#[derive(Debug, Args)]
pub struct HvArgs {
    /// Front CSV with `cost` and `quality` columns
    #[arg(value_name = "FRONT_CSV")]
    pub front: PathBuf,
    /// Reference point as `u,v` in normalized coordinates
    #[arg(long = "ref", value_name = "U,V", default_value = "1.1,1.0", value_parser = parse_reference)]
    pub reference: NormalizedPoint,
    /// Baseline cost used to normalize the cost column
    #[arg(long, default_value_t = 1.0, value_name = "COST")]
    pub c_base: f64,
}

fn parse_reference(raw: &str) -> Result<NormalizedPoint, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated numbers, e.g. 1.1,1.0".into());
    }
    let u: f64 = parts[0].trim().parse().map_err(|e| format!("bad u coordinate: {e}"))?;
    let v: f64 = parts[1].trim().parse().map_err(|e| format!("bad v coordinate: {e}"))?;
    if !u.is_finite() || !v.is_finite() || u <= 0.0 || v <= 0.0 {
        return Err("reference coordinates must be finite and positive".into());
    }
    Ok(NormalizedPoint { u, v })
}

/// Prints the normalized hypervolume of a front CSV.
pub fn cmd_hv(args: &HvArgs) -> Result<(), CliError> {
    if args.c_base.is_nan() || args.c_base <= 0.0 {
        return Err(CliError::Validation("--c-base: must be > 0".into()));
    }
    let text = fs::read_to_string(&args.front)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", args.front.display())))?;
    let pairs = parse_front_csv(&text, &args.front.display().to_string())?;
    let points = normalize_front(&pairs, args.c_base).map_err(|e| CliError::Runtime(e.to_string()))?;
    let hv = hypervolume_2d(&points, args.reference);
    println!("{hv}");
    Ok(())
}

fn parse_front_csv(text: &str, origin: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let parse_err = |message: String| CliError::Parse {
        path: origin.to_string(),
        message,
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err("empty file, expected a CSV header".into()))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let cost_idx = columns
        .iter()
        .position(|c| *c == "cost")
        .ok_or_else(|| parse_err("header has no `cost` column".into()))?;
    let quality_idx = columns
        .iter()
        .position(|c| *c == "quality")
        .ok_or_else(|| parse_err("header has no `quality` column".into()))?;

    let mut pairs = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let needed = cost_idx.max(quality_idx);
        if fields.len() <= needed {
            return Err(parse_err(format!("line {}: expected at least {} fields", lineno + 2, needed + 1)));
        }
        let cost: f64 = fields[cost_idx]
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("line {}: bad cost: {e}", lineno + 2)))?;
        let quality: f64 = fields[quality_idx]
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("line {}: bad quality: {e}", lineno + 2)))?;
        pairs.push((cost, quality));
    }
    Ok(pairs)
}
