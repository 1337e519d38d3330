//! Lifecycle labor model: baseline hours, AI-collapsed hours, cost, the
//! test/dev quality ratio, and tipping-point headcount analysis.
//!
//! All functions here are pure and deterministic. Hours are `f64`; currency
//! is plain floating units of `cost_rate` per hour.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::phase::{Phase, PhaseMap};

/// Calibrated inputs for one project scenario.
///
/// Validity is enforced at construction through [`ScenarioParams::builder`]:
/// hours are nonnegative, the team has at least one member, per-person
/// capacity is positive, the oversight and coordination-retention factors lie
/// in `[0, 1]`, and every AI time factor is positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioParams {
    phase_hours: PhaseMap,
    coord_hours: f64,
    team_size: u32,
    capacity_hours: f64,
    cost_rate: f64,
    oversight_factor: f64,
    coord_retention: f64,
    ai_time_factor: PhaseMap,
    stated_base_hours: Option<f64>,
}

impl ScenarioParams {
    /// Starts a builder from the five required inputs. Oversight defaults to
    /// 0.20, coordination retention to 0.40, and AI time factors to 1.0.
    pub fn builder(
        phase_hours: PhaseMap,
        coord_hours: f64,
        team_size: u32,
        capacity_hours: f64,
        cost_rate: f64,
    ) -> ScenarioBuilder {
        ScenarioBuilder {
            phase_hours,
            coord_hours,
            team_size,
            capacity_hours,
            cost_rate,
            oversight_factor: 0.20,
            coord_retention: 0.40,
            ai_time_factor: PhaseMap::splat(1.0),
            stated_base_hours: None,
        }
    }

    pub fn phase_hours(&self) -> &PhaseMap {
        &self.phase_hours
    }

    pub fn coord_hours(&self) -> f64 {
        self.coord_hours
    }

    pub fn team_size(&self) -> u32 {
        self.team_size
    }

    pub fn capacity_hours(&self) -> f64 {
        self.capacity_hours
    }

    pub fn cost_rate(&self) -> f64 {
        self.cost_rate
    }

    pub fn oversight_factor(&self) -> f64 {
        self.oversight_factor
    }

    pub fn coord_retention(&self) -> f64 {
        self.coord_retention
    }

    pub fn ai_time_factor(&self) -> &PhaseMap {
        &self.ai_time_factor
    }

    pub fn stated_base_hours(&self) -> Option<f64> {
        self.stated_base_hours
    }

    /// Same scenario with the oversight and coordination-retention factors
    /// replaced. Both must lie in `[0, 1]`; sweep grids are validated before
    /// they reach this point.
    pub fn with_factors(&self, oversight_factor: f64, coord_retention: f64) -> ScenarioParams {
        assert!(
            (0.0..=1.0).contains(&oversight_factor) && (0.0..=1.0).contains(&coord_retention),
            "factors must lie in [0, 1]"
        );
        ScenarioParams {
            oversight_factor,
            coord_retention,
            ..self.clone()
        }
    }
}

/// Builder for [`ScenarioParams`]; `build` performs all validation.
#[derive(Debug, Clone)]
pub struct ScenarioBuilder {
    phase_hours: PhaseMap,
    coord_hours: f64,
    team_size: u32,
    capacity_hours: f64,
    cost_rate: f64,
    oversight_factor: f64,
    coord_retention: f64,
    ai_time_factor: PhaseMap,
    stated_base_hours: Option<f64>,
}

impl ScenarioBuilder {
    pub fn oversight_factor(mut self, value: f64) -> Self {
        self.oversight_factor = value;
        self
    }

    pub fn coord_retention(mut self, value: f64) -> Self {
        self.coord_retention = value;
        self
    }

    pub fn ai_time_factor(mut self, value: PhaseMap) -> Self {
        self.ai_time_factor = value;
        self
    }

    pub fn stated_base_hours(mut self, value: f64) -> Self {
        self.stated_base_hours = Some(value);
        self
    }

    pub fn build(self) -> Result<ScenarioParams, Error> {
        for (phase, &hours) in self.phase_hours.iter() {
            if !hours.is_finite() || hours < 0.0 {
                return Err(Error::invalid(
                    format!("phase_hours.{phase}"),
                    "hours must be finite and >= 0",
                ));
            }
        }
        if !self.coord_hours.is_finite() || self.coord_hours < 0.0 {
            return Err(Error::invalid("coord_hours", "hours must be finite and >= 0"));
        }
        if self.team_size < 1 {
            return Err(Error::invalid("team_size", "team must have at least one member"));
        }
        if !self.capacity_hours.is_finite() || self.capacity_hours <= 0.0 {
            return Err(Error::invalid("capacity_hours", "capacity must be > 0"));
        }
        if !self.cost_rate.is_finite() || self.cost_rate < 0.0 {
            return Err(Error::invalid("cost_rate", "cost rate must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.oversight_factor) {
            return Err(Error::invalid("oversight_factor", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.coord_retention) {
            return Err(Error::invalid("coord_retention", "must lie in [0, 1]"));
        }
        for (phase, &factor) in self.ai_time_factor.iter() {
            if !factor.is_finite() || factor <= 0.0 {
                return Err(Error::invalid(
                    format!("ai_time_factor.{phase}"),
                    "factor must be finite and > 0",
                ));
            }
        }
        if let Some(stated) = self.stated_base_hours {
            if !stated.is_finite() || stated <= 0.0 {
                return Err(Error::invalid("stated_base_hours", "must be > 0 when present"));
            }
        }
        Ok(ScenarioParams {
            phase_hours: self.phase_hours,
            coord_hours: self.coord_hours,
            team_size: self.team_size,
            capacity_hours: self.capacity_hours,
            cost_rate: self.cost_rate,
            oversight_factor: self.oversight_factor,
            coord_retention: self.coord_retention,
            ai_time_factor: self.ai_time_factor,
            stated_base_hours: self.stated_base_hours,
        })
    }
}

/// Per-phase automation fractions, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AutomationVector(PhaseMap);

impl AutomationVector {
    pub fn new(fractions: PhaseMap) -> Result<Self, Error> {
        for (phase, &f) in fractions.iter() {
            if !f.is_finite() || !(0.0..=1.0).contains(&f) {
                return Err(Error::invalid(
                    format!("fractions.{phase}"),
                    "fraction must lie in [0, 1]",
                ));
            }
        }
        Ok(AutomationVector(fractions))
    }

    /// All phases at zero automation.
    pub fn zero() -> Self {
        AutomationVector(PhaseMap::zero())
    }

    /// The same fraction for every phase.
    pub fn uniform(fraction: f64) -> Result<Self, Error> {
        Self::new(PhaseMap::splat(fraction))
    }

    pub fn get(&self, phase: Phase) -> f64 {
        *self.0.get(phase)
    }

    /// Sets a fraction, clamping into `[0, 1]` so the vector invariant is
    /// preserved under arbitrary operator noise.
    pub fn set_clamped(&mut self, phase: Phase, value: f64) {
        self.0.set(phase, value.clamp(0.0, 1.0));
    }

    pub fn fractions(&self) -> &PhaseMap {
        &self.0
    }
}

/// Hours and cost after collapsing work onto AI agents with human oversight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaborBreakdown {
    /// Remaining non-oversight human hours per phase: `(1 - f_p) * hours_p`.
    pub human_hours: PhaseMap,
    /// Human oversight of AI-executed work per phase:
    /// `oversight_factor * f_p * ai_time_factor_p * hours_p`.
    pub oversight_hours: PhaseMap,
    /// Coordination overhead surviving integration: `coord_retention * coord_hours`.
    pub coord_hours_residual: f64,
    /// Total human hours across phases plus residual coordination.
    pub total_hours: f64,
    /// `cost_rate * total_hours`.
    pub cost: f64,
    /// Effective baseline minus `total_hours`; negative when automation
    /// overhead outweighs the work it displaces.
    pub labor_saved: f64,
    /// `labor_saved / effective_base`, the overall automation fraction.
    /// Zero when the effective baseline is zero.
    pub automation_fraction: f64,
}

/// Headcount-reduction analysis for one labor breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TippingReport {
    /// Full-time equivalents absorbed by automation: `fraction * team_size`.
    pub fte_absorbed: f64,
    /// Whether at least one full position is absorbed (`fte_absorbed >= 1`).
    pub tipping_reached: bool,
    /// `floor(fraction * team_size)`, clamped so at least one person remains.
    pub max_safe_reduction: u32,
    /// Largest reduction within `max_safe_reduction` that keeps per-person
    /// load at or below the baseline per-person load.
    pub stable_reduction: u32,
    /// Per-person hours after applying `stable_reduction`.
    pub per_person_load_after: f64,
}

/// Total baseline hours: the sum of the six phase-hour entries plus
/// coordination overhead, each counted once. Ignores any stated override;
/// see [`effective_base`] for the value downstream ratios use.
pub fn baseline_labor(params: &ScenarioParams) -> f64 {
    params.phase_hours().sum() + params.coord_hours()
}

/// Baseline hours used for ratios: the stated override when present,
/// otherwise the summed baseline.
pub fn effective_base(params: &ScenarioParams) -> f64 {
    params
        .stated_base_hours()
        .unwrap_or_else(|| baseline_labor(params))
}

/// Baseline cost: `cost_rate * effective_base`.
pub fn baseline_cost(params: &ScenarioParams) -> f64 {
    params.cost_rate() * effective_base(params)
}

/// Applies the automation vector to the scenario, producing residual human
/// hours, oversight hours, total hours, cost, and the overall automation
/// fraction.
///
/// Coordination retention applies unconditionally, including at zero
/// automation; a fully manual plan therefore still books only
/// `coord_retention * coord_hours` of coordination.
pub fn collapsed_labor(params: &ScenarioParams, f: &AutomationVector) -> LaborBreakdown {
    let human_hours = PhaseMap::from_fn(|p| (1.0 - f.get(p)) * params.phase_hours()[p]);
    let oversight_hours = PhaseMap::from_fn(|p| {
        params.oversight_factor() * f.get(p) * params.ai_time_factor()[p] * params.phase_hours()[p]
    });
    let coord_hours_residual = params.coord_retention() * params.coord_hours();
    let total_hours = human_hours.sum() + oversight_hours.sum() + coord_hours_residual;
    let base = effective_base(params);
    let labor_saved = base - total_hours;
    let automation_fraction = if base > 0.0 { labor_saved / base } else { 0.0 };
    LaborBreakdown {
        human_hours,
        oversight_hours,
        coord_hours_residual,
        total_hours,
        cost: params.cost_rate() * total_hours,
        labor_saved,
        automation_fraction,
    }
}

/// Ratio of post-automation testing hours to post-automation development
/// hours, both counted as human work plus oversight.
///
/// Errors with [`Error::DegenerateDenominator`] when no development hours
/// remain after automation.
pub fn quality_ratio(params: &ScenarioParams, f: &AutomationVector) -> Result<f64, Error> {
    let breakdown = collapsed_labor(params, f);
    let phase_load = |p: Phase| breakdown.human_hours[p] + breakdown.oversight_hours[p];
    let dev = phase_load(Phase::Development);
    if dev <= 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(phase_load(Phase::Testing) / dev)
}

/// Tipping analysis for a breakdown computed from the same scenario.
pub fn tipping(params: &ScenarioParams, breakdown: &LaborBreakdown) -> TippingReport {
    tipping_inner(params, breakdown.automation_fraction, breakdown.total_hours)
}

/// Tipping analysis for a scalar overall automation fraction, bypassing the
/// phase-level model: remaining hours are taken as `(1 - fraction) * base`.
pub fn tipping_from_fraction(params: &ScenarioParams, fraction: f64) -> TippingReport {
    let base = effective_base(params);
    tipping_inner(params, fraction, (1.0 - fraction) * base)
}

fn tipping_inner(params: &ScenarioParams, fraction: f64, total_hours: f64) -> TippingReport {
    let team = params.team_size();
    let team_f = f64::from(team);
    let fte_absorbed = fraction * team_f;
    let tipping_reached = fte_absorbed >= 1.0;
    let max_safe_reduction = (fte_absorbed.floor() as i64).clamp(0, i64::from(team) - 1) as u32;

    // Largest cut that keeps per-person hours at or below the baseline
    // per-person load, scanned directly; a negative fraction yields zero.
    let baseline_load = effective_base(params) / team_f;
    let mut stable_reduction = 0;
    for cut in (1..=max_safe_reduction).rev() {
        if total_hours / (team_f - f64::from(cut)) <= baseline_load {
            stable_reduction = cut;
            break;
        }
    }
    let per_person_load_after = total_hours / (team_f - f64::from(stable_reduction));

    TippingReport {
        fte_absorbed,
        tipping_reached,
        max_safe_reduction,
        stable_reduction,
        per_person_load_after,
    }
}

/// Whether `total_hours` fits within `n` people at the scenario capacity.
pub fn feasible_capacity(params: &ScenarioParams, breakdown: &LaborBreakdown, n: u32) -> bool {
    debug_assert!(n >= 1);
    breakdown.total_hours <= f64::from(n) * params.capacity_hours()
}

/// Cost of the naive uniform-automation heuristic: baseline cost scaled
/// linearly by `1 - f_uniform`, with no oversight or coordination modeling.
pub fn naive_heuristic_cost(params: &ScenarioParams, f_uniform: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&f_uniform));
    (1.0 - f_uniform) * baseline_cost(params)
}

/// Cost of applying the same fraction to every phase through the full
/// collapsed-labor model; the second heuristic reported alongside the naive
/// linear one.
pub fn model_heuristic_cost(params: &ScenarioParams, f_uniform: f64) -> Result<f64, Error> {
    Ok(collapsed_labor(params, &AutomationVector::uniform(f_uniform)?).cost)
}
