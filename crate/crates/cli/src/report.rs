//! Report shapes and emission: per-run JSON reports, front and sweep CSVs,
//! the multi-run summary, and plain-text tables for the query commands.

use serde::{Deserialize, Serialize};

use stackopt_core::evo::{EvoRunReport, Individual};
use stackopt_core::labor::{LaborBreakdown, TippingReport};
use stackopt_core::metrics::{
    hypervolume_2d, normalize_front, MultiRunSummary, DEFAULT_REFERENCE,
};
use stackopt_core::phase::Phase;
use stackopt_core::sweep::SweepCell;

pub const FRONT_CSV_HEADER: &str =
    "f_req,f_design,f_dev,f_test,f_deploy,f_maint,team_size,cost,quality,feasible";
pub const SWEEP_CSV_HEADER: &str =
    "beta,alpha,automation_fraction,max_safe_reduction,stable_reduction,per_person_load,cost";

/// One solution as persisted in fronts and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub f_req: f64,
    pub f_design: f64,
    pub f_dev: f64,
    pub f_test: f64,
    pub f_deploy: f64,
    pub f_maint: f64,
    pub team_size: u32,
    pub cost: f64,
    pub quality: f64,
    pub feasible: bool,
}

impl SolutionRecord {
    pub fn from_individual(ind: &Individual) -> Self {
        let f = |p: Phase| ind.genome.automation.get(p);
        SolutionRecord {
            f_req: f(Phase::Requirements),
            f_design: f(Phase::Design),
            f_dev: f(Phase::Development),
            f_test: f(Phase::Testing),
            f_deploy: f(Phase::Deployment),
            f_maint: f(Phase::Maintenance),
            team_size: ind.genome.team_size,
            cost: ind.objectives.cost,
            quality: ind.objectives.quality,
            feasible: ind.is_feasible(),
        }
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.f_req,
            self.f_design,
            self.f_dev,
            self.f_test,
            self.f_deploy,
            self.f_maint,
            self.team_size,
            self.cost,
            self.quality,
            self.feasible
        )
    }
}

/// Persisted result of one optimization run (`run_<k>.json`).
///
/// `wall_time` is measured, not derived, and is excluded from determinism
/// comparisons and from the scenario digest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario_digest: String,
    pub seed: u64,
    pub front: Vec<SolutionRecord>,
    pub best: Option<SolutionRecord>,
    pub tipping: Option<TippingReport>,
    pub hv: f64,
    pub generations_trace: Vec<Option<f64>>,
    pub wall_time: f64,
}

impl RunReport {
    /// Wraps an engine report, computing the front hypervolume against the
    /// scenario baseline cost (zero when the baseline cost is zero).
    pub fn from_engine(
        engine: &EvoRunReport,
        scenario_digest: &str,
        c_base: f64,
        wall_time: f64,
    ) -> Self {
        let front: Vec<SolutionRecord> = engine
            .front
            .iter()
            .map(SolutionRecord::from_individual)
            .collect();
        let pairs: Vec<(f64, f64)> = front.iter().map(|r| (r.cost, r.quality)).collect();
        let hv = match normalize_front(&pairs, c_base) {
            Ok(points) => hypervolume_2d(&points, DEFAULT_REFERENCE),
            Err(_) => 0.0,
        };
        RunReport {
            scenario_digest: scenario_digest.to_string(),
            seed: engine.seed,
            front,
            best: engine.best.as_ref().map(SolutionRecord::from_individual),
            tipping: engine.tipping.clone(),
            hv,
            generations_trace: engine.best_cost_trace.clone(),
            wall_time,
        }
    }
}

/// Heuristic baselines compared against the optimizer (`summary.json`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicComparison {
    /// Uniform automation fraction fed to both heuristics.
    pub uniform_fraction: f64,
    /// Baseline cost scaled linearly by `1 - fraction`.
    pub naive_linear_cost: f64,
    /// The same fraction pushed through the full labor model.
    pub model_uniform_cost: f64,
    /// Mean best feasible cost across the runs.
    pub ec_mean_best_cost: f64,
    /// `(naive - ec) / naive`, in percent.
    pub improvement_vs_naive_pct: f64,
    /// `(model - ec) / model`, in percent.
    pub improvement_vs_model_pct: f64,
}

/// Aggregate statistics over a batch of runs (`summary.json`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub scenario_digest: String,
    pub runs: usize,
    pub seeds: Vec<u64>,
    pub best_cost: MultiRunSummary,
    pub hypervolume: MultiRunSummary,
    pub team_size: MultiRunSummary,
    pub heuristics: HeuristicComparison,
}

/// Renders a front as CSV with the stable column set.
pub fn front_csv(records: &[SolutionRecord]) -> String {
    let mut out = String::from(FRONT_CSV_HEADER);
    out.push('\n');
    for record in records {
        out.push_str(&record.csv_row());
        out.push('\n');
    }
    out
}

/// Renders sweep cells as CSV in grid order.
pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for cell in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            cell.beta,
            cell.alpha,
            cell.automation_fraction,
            cell.max_safe_reduction,
            cell.stable_reduction,
            cell.per_person_load,
            cell.cost
        ));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

/// Combined output of the `evaluate` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluateReport {
    pub breakdown: LaborBreakdown,
    /// `None` when development hours vanish and the ratio is undefined.
    pub quality_ratio: Option<f64>,
    pub tipping: TippingReport,
}

pub fn evaluate_table(report: &EvaluateReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14}{:>14}{:>14}\n",
        "phase", "human_h", "oversight_h"
    ));
    for phase in Phase::ALL {
        out.push_str(&format!(
            "{:<14}{:>14.2}{:>14.2}\n",
            phase.name(),
            report.breakdown.human_hours[phase],
            report.breakdown.oversight_hours[phase]
        ));
    }
    out.push_str(&format!(
        "{:<14}{:>14.2}\n",
        "coordination", report.breakdown.coord_hours_residual
    ));
    out.push('\n');
    out.push_str(&format!("{:<22}{:>14.2}\n", "total_hours", report.breakdown.total_hours));
    out.push_str(&format!("{:<22}{:>14.2}\n", "cost", report.breakdown.cost));
    out.push_str(&format!("{:<22}{:>14.2}\n", "labor_saved", report.breakdown.labor_saved));
    out.push_str(&format!(
        "{:<22}{:>14.4}\n",
        "automation_fraction", report.breakdown.automation_fraction
    ));
    match report.quality_ratio {
        Some(q) => out.push_str(&format!("{:<22}{:>14.4}\n", "quality_ratio", q)),
        None => out.push_str(&format!("{:<22}{:>14}\n", "quality_ratio", "undefined")),
    }
    out.push('\n');
    out.push_str(&tipping_table(&report.tipping));
    out
}

pub fn tipping_table(report: &TippingReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<22}{:>14.4}\n", "fte_absorbed", report.fte_absorbed));
    out.push_str(&format!("{:<22}{:>14}\n", "tipping_reached", report.tipping_reached));
    out.push_str(&format!(
        "{:<22}{:>14}\n",
        "max_safe_reduction", report.max_safe_reduction
    ));
    out.push_str(&format!(
        "{:<22}{:>14}\n",
        "stable_reduction", report.stable_reduction
    ));
    out.push_str(&format!(
        "{:<22}{:>14.2}\n",
        "per_person_load_after", report.per_person_load_after
    ));
    out
}
