//! Sensitivity sweeps over the oversight factor and coordination retention.
//!
//! Each grid cell re-evaluates the scenario with `(beta, alpha)` replaced,
//! either for a fixed automation vector or by re-optimizing at that point.
//! Iteration order is deterministic: beta outer ascending, alpha inner
//! ascending.

use serde::Serialize;

use crate::error::Error;
use crate::evo::{self, OptimizerConfig};
use crate::labor::{collapsed_labor, tipping, AutomationVector, ScenarioParams};
use crate::phase::PhaseMap;

/// How each grid cell obtains its automation vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Evaluate one fixed vector at every grid point.
    FixedVector,
    /// Run the optimizer at every grid point and evaluate its best feasible
    /// solution.
    Reoptimize,
}

/// Sweep definition: factor grids, mode, and the mode-specific inputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub beta_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub mode: SweepMode,
    /// Required in fixed-vector mode.
    pub vector: Option<AutomationVector>,
    /// Required in reoptimize mode.
    pub optimizer: Option<OptimizerConfig>,
    /// Seeds for reoptimize mode; the best feasible solution across seeds
    /// fills the cell.
    pub seeds: Vec<u64>,
}

impl Default for SweepSpec {
    /// Default sweep: oversight 0.05..=0.35 step 0.05, coordination
    /// retention 0.2..=0.6 step 0.1, fixed-vector mode with the aggressive
    /// deployment vector (0.6, 0.5, 0.5, 0.7, 0.8, 0.1).
    fn default() -> Self {
        let vector =
            AutomationVector::new(PhaseMap::from([0.6, 0.5, 0.5, 0.7, 0.8, 0.1])).unwrap();
        SweepSpec {
            beta_grid: vec![0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35],
            alpha_grid: vec![0.2, 0.3, 0.4, 0.5, 0.6],
            mode: SweepMode::FixedVector,
            vector: Some(vector),
            optimizer: None,
            seeds: Vec::new(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), Error> {
        for (name, grid) in [("beta_grid", &self.beta_grid), ("alpha_grid", &self.alpha_grid)] {
            if grid.is_empty() {
                return Err(Error::invalid(name, "grid must be non-empty"));
            }
            if grid.iter().any(|v| !v.is_finite() || !(0.0..=1.0).contains(v)) {
                return Err(Error::invalid(name, "grid values must lie in [0, 1]"));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(name, "grid must be strictly increasing"));
            }
        }
        match self.mode {
            SweepMode::FixedVector => {
                if self.vector.is_none() {
                    return Err(Error::invalid("vector", "required in fixed_vector mode"));
                }
            }
            SweepMode::Reoptimize => {
                let config = self
                    .optimizer
                    .as_ref()
                    .ok_or_else(|| Error::invalid("optimizer", "required in reoptimize mode"))?;
                config.validate()?;
                if self.seeds.is_empty() {
                    return Err(Error::invalid("seeds", "required in reoptimize mode"));
                }
            }
        }
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub beta: f64,
    pub alpha: f64,
    pub automation_fraction: f64,
    pub max_safe_reduction: u32,
    pub stable_reduction: u32,
    pub per_person_load: f64,
    pub cost: f64,
}

/// Evaluates every `(beta, alpha)` pair and returns the cells in grid order.
pub fn run_sweep(params: &ScenarioParams, spec: &SweepSpec) -> Result<Vec<SweepCell>, Error> {
    spec.validate()?;
    let mut cells = Vec::with_capacity(spec.beta_grid.len() * spec.alpha_grid.len());
    for &beta in &spec.beta_grid {
        for &alpha in &spec.alpha_grid {
            let cell_params = params.with_factors(beta, alpha);
            let vector = match spec.mode {
                SweepMode::FixedVector => *spec.vector.as_ref().unwrap(),
                SweepMode::Reoptimize => reoptimized_vector(&cell_params, spec)?,
            };
            let breakdown = collapsed_labor(&cell_params, &vector);
            let report = tipping(&cell_params, &breakdown);
            cells.push(SweepCell {
                beta,
                alpha,
                automation_fraction: breakdown.automation_fraction,
                max_safe_reduction: report.max_safe_reduction,
                stable_reduction: report.stable_reduction,
                per_person_load: report.per_person_load_after,
                cost: breakdown.cost,
            });
        }
    }
    Ok(cells)
}

fn reoptimized_vector(
    cell_params: &ScenarioParams,
    spec: &SweepSpec,
) -> Result<AutomationVector, Error> {
    let base_config = spec.optimizer.as_ref().unwrap();
    let mut best: Option<evo::Individual> = None;
    for &seed in &spec.seeds {
        let config = OptimizerConfig {
            seed,
            ..base_config.clone()
        };
        let report = evo::run(cell_params, &config)?;
        if let Some(candidate) = report.best {
            let better = match &best {
                None => true,
                Some(current) => candidate.objectives.cost < current.objectives.cost,
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best.map(|ind| ind.genome.automation)
        .ok_or(Error::NoFeasibleSolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labor::baseline_labor;

    fn scenario() -> ScenarioParams {
        let hours = PhaseMap::from([200.0, 300.0, 800.0, 600.0, 100.0, 300.0]);
        ScenarioParams::builder(hours, 500.0, 20, 135.0, 75.0)
            .build()
            .unwrap()
    }

    #[test]
    fn default_grid_has_35_cells_in_order() {
        let cells = run_sweep(&scenario(), &SweepSpec::default()).unwrap();
        assert_eq!(cells.len(), 35);
        assert_eq!((cells[0].beta, cells[0].alpha), (0.05, 0.2));
        assert_eq!((cells[4].beta, cells[4].alpha), (0.05, 0.6));
        assert_eq!((cells[5].beta, cells[5].alpha), (0.10, 0.2));
        assert_eq!((cells[34].beta, cells[34].alpha), (0.35, 0.6));
    }

    #[test]
    fn low_oversight_cell_matches_hand_evaluation() {
        // beta = 0.05, alpha = 0.4 on the summed baseline (2800 h): total
        // 1360 h, fraction about 0.514, ten safe reductions.
        let spec = SweepSpec {
            beta_grid: vec![0.05],
            alpha_grid: vec![0.4],
            ..SweepSpec::default()
        };
        let cells = run_sweep(&scenario(), &spec).unwrap();
        let cell = &cells[0];
        assert!((cell.cost / 75.0 - 1360.0).abs() < 1e-9);
        assert!((cell.automation_fraction - (1.0 - 1360.0 / 2800.0)).abs() < 1e-12);
        assert_eq!(cell.max_safe_reduction, 10);
    }

    #[test]
    fn full_oversight_and_retention_recover_baseline() {
        let params = scenario();
        let spec = SweepSpec {
            beta_grid: vec![1.0],
            alpha_grid: vec![1.0],
            vector: Some(AutomationVector::uniform(0.83).unwrap()),
            ..SweepSpec::default()
        };
        let cells = run_sweep(&params, &spec).unwrap();
        let cell = &cells[0];
        assert!((cell.cost / 75.0 - baseline_labor(&params)).abs() < 1e-9);
        assert!(cell.automation_fraction.abs() < 1e-12);
        assert_eq!(cell.max_safe_reduction, 0);
    }

    #[test]
    fn single_cell_equals_direct_model_calls() {
        let params = scenario();
        let vector = AutomationVector::new(PhaseMap::from([0.6, 0.5, 0.5, 0.7, 0.8, 0.1])).unwrap();
        let spec = SweepSpec {
            beta_grid: vec![0.2],
            alpha_grid: vec![0.4],
            vector: Some(vector),
            ..SweepSpec::default()
        };
        let cells = run_sweep(&params, &spec).unwrap();

        let breakdown = collapsed_labor(&params, &vector);
        let report = tipping(&params, &breakdown);
        assert_eq!(cells[0].cost, breakdown.cost);
        assert_eq!(cells[0].automation_fraction, breakdown.automation_fraction);
        assert_eq!(cells[0].max_safe_reduction, report.max_safe_reduction);
        assert_eq!(cells[0].stable_reduction, report.stable_reduction);
        assert_eq!(cells[0].per_person_load, report.per_person_load_after);
    }

    #[test]
    fn fraction_and_reductions_are_monotone_in_both_factors() {
        let cells = run_sweep(&scenario(), &SweepSpec::default()).unwrap();
        let alpha_len = 5;
        for (i, cell) in cells.iter().enumerate() {
            // Next alpha in the same beta row.
            if (i + 1) % alpha_len != 0 {
                let next = &cells[i + 1];
                assert!(next.automation_fraction <= cell.automation_fraction + 1e-12);
                assert!(next.max_safe_reduction <= cell.max_safe_reduction);
            }
            // Same alpha, next beta.
            if i + alpha_len < cells.len() {
                let next = &cells[i + alpha_len];
                assert!(next.automation_fraction <= cell.automation_fraction + 1e-12);
                assert!(next.max_safe_reduction <= cell.max_safe_reduction);
            }
            assert!(cell.stable_reduction <= cell.max_safe_reduction);
        }
    }

    #[test]
    fn sweep_spec_rejects_bad_grids_and_missing_fields() {
        let decreasing = SweepSpec {
            beta_grid: vec![0.3, 0.2],
            ..SweepSpec::default()
        };
        assert!(decreasing.validate().is_err());

        let empty = SweepSpec {
            alpha_grid: vec![],
            ..SweepSpec::default()
        };
        assert!(empty.validate().is_err());

        let missing_vector = SweepSpec {
            vector: None,
            ..SweepSpec::default()
        };
        assert!(missing_vector.validate().is_err());

        let missing_optimizer = SweepSpec {
            mode: SweepMode::Reoptimize,
            optimizer: None,
            ..SweepSpec::default()
        };
        assert!(missing_optimizer.validate().is_err());
    }

    #[test]
    fn reoptimize_mode_is_consistent_with_fixed_evaluation() {
        // A tiny budget is enough: the cell only needs some feasible vector,
        // and the cell fields must match a direct evaluation of it.
        let params = scenario();
        let spec = SweepSpec {
            beta_grid: vec![0.2],
            alpha_grid: vec![0.4],
            mode: SweepMode::Reoptimize,
            vector: None,
            optimizer: Some(OptimizerConfig {
                population_size: 20,
                generations: 10,
                ..OptimizerConfig::default()
            }),
            seeds: vec![1, 2],
        };
        let cells = run_sweep(&params, &spec).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(cells[0].cost > 0.0);
        assert!(cells[0].stable_reduction <= cells[0].max_safe_reduction);
    }
}
