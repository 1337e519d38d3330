//! Property tests for the labor model: monotonicity, conservation, scale
//! equivariance, tipping consistency, and cost linkage.

use proptest::prelude::*;

use stackopt_core::labor::{
    baseline_labor, collapsed_labor, effective_base, quality_ratio, tipping, AutomationVector,
    ScenarioParams,
};
use stackopt_core::phase::{Phase, PhaseMap};

#[derive(Debug, Clone)]
struct Inputs {
    phase_hours: [f64; 6],
    coord_hours: f64,
    team_size: u32,
    capacity_hours: f64,
    cost_rate: f64,
    oversight: f64,
    retention: f64,
    ai_factors: [f64; 6],
    stated: Option<f64>,
}

impl Inputs {
    fn build(&self) -> ScenarioParams {
        let mut builder = ScenarioParams::builder(
            PhaseMap::from(self.phase_hours),
            self.coord_hours,
            self.team_size,
            self.capacity_hours,
            self.cost_rate,
        )
        .oversight_factor(self.oversight)
        .coord_retention(self.retention)
        .ai_time_factor(PhaseMap::from(self.ai_factors));
        if let Some(stated) = self.stated {
            builder = builder.stated_base_hours(stated);
        }
        builder.build().expect("generated inputs are valid")
    }

    fn scaled(&self, k: f64) -> Inputs {
        Inputs {
            phase_hours: self.phase_hours.map(|h| h * k),
            coord_hours: self.coord_hours * k,
            capacity_hours: self.capacity_hours * k,
            stated: self.stated.map(|s| s * k),
            ..self.clone()
        }
    }
}

fn inputs() -> impl Strategy<Value = Inputs> {
    (
        prop::array::uniform6(0.0..2000.0f64),
        0.0..1000.0f64,
        1u32..=30,
        1.0..500.0f64,
        0.0..200.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
        prop::array::uniform6(0.1..3.0f64),
        prop::option::of(100.0..4000.0f64),
    )
        .prop_map(
            |(
                phase_hours,
                coord_hours,
                team_size,
                capacity_hours,
                cost_rate,
                oversight,
                retention,
                ai_factors,
                stated,
            )| Inputs {
                phase_hours,
                coord_hours,
                team_size,
                capacity_hours,
                cost_rate,
                oversight,
                retention,
                ai_factors,
                stated,
            },
        )
}

fn fractions() -> impl Strategy<Value = AutomationVector> {
    prop::array::uniform6(0.0..=1.0f64)
        .prop_map(|f| AutomationVector::new(PhaseMap::from(f)).unwrap())
}

proptest! {
    /// Raising one phase fraction moves total hours in the direction of
    /// `oversight * ai_factor - 1` for that phase.
    #[test]
    fn per_phase_monotonicity_follows_oversight_balance(
        base in inputs(),
        f in fractions(),
        phase_idx in 0usize..6,
        bump in 0.05..0.5f64,
    ) {
        let phase = Phase::ALL[phase_idx];
        let mut base = base;
        // Keep the derivative clearly signed and the phase busy.
        base.phase_hours[phase_idx] = base.phase_hours[phase_idx].max(10.0);
        let params = base.build();
        let slope = params.oversight_factor() * params.ai_time_factor()[phase] - 1.0;
        prop_assume!(slope.abs() > 0.01);
        prop_assume!(f.get(phase) + bump <= 1.0);

        let before = collapsed_labor(&params, &f).total_hours;
        let mut raised = f;
        raised.set_clamped(phase, f.get(phase) + bump);
        let after = collapsed_labor(&params, &raised).total_hours;

        if slope < 0.0 {
            prop_assert!(after < before, "raising f should shrink hours: {before} -> {after}");
        } else {
            prop_assert!(after > before, "raising f should grow hours: {before} -> {after}");
        }
    }

    /// Total hours never decrease when oversight or coordination retention
    /// increase, everything else fixed.
    #[test]
    fn totals_nondecreasing_in_oversight_and_retention(
        base in inputs(),
        f in fractions(),
        lo in 0.0..=1.0f64,
        hi in 0.0..=1.0f64,
    ) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let params = base.build();

        let beta_lo = collapsed_labor(&params.with_factors(lo, params.coord_retention()), &f);
        let beta_hi = collapsed_labor(&params.with_factors(hi, params.coord_retention()), &f);
        prop_assert!(beta_hi.total_hours >= beta_lo.total_hours - 1e-9);

        let alpha_lo = collapsed_labor(&params.with_factors(params.oversight_factor(), lo), &f);
        let alpha_hi = collapsed_labor(&params.with_factors(params.oversight_factor(), hi), &f);
        prop_assert!(alpha_hi.total_hours >= alpha_lo.total_hours - 1e-9);
    }

    /// With zero automation and full coordination retention the collapsed
    /// total reproduces the raw baseline exactly.
    #[test]
    fn conservation_at_zero_automation(base in inputs()) {
        let mut base = base;
        base.retention = 1.0;
        let params = base.build();
        let breakdown = collapsed_labor(&params, &AutomationVector::zero());
        prop_assert_eq!(breakdown.total_hours, baseline_labor(&params));
    }

    /// Tipping bookkeeping: bounds, threshold equivalence, and workload
    /// stability after the reported reduction.
    #[test]
    fn tipping_is_internally_consistent(base in inputs(), f in fractions()) {
        let params = base.build();
        let breakdown = collapsed_labor(&params, &f);
        let report = tipping(&params, &breakdown);

        prop_assert!(report.stable_reduction <= report.max_safe_reduction);
        prop_assert!(report.max_safe_reduction < params.team_size());
        prop_assert_eq!(report.tipping_reached, report.fte_absorbed >= 1.0);

        if report.stable_reduction > 0 {
            let baseline_load = effective_base(&params) / f64::from(params.team_size());
            prop_assert!(report.per_person_load_after <= baseline_load * (1.0 + 1e-12));
        }
    }

    /// Scaling all hour inputs by a power of two scales hours and leaves
    /// every dimensionless output bit-identical.
    #[test]
    fn scale_equivariance(base in inputs(), f in fractions(), exp in -2i32..=3) {
        let k = 2.0f64.powi(exp);
        let params = base.build();
        let scaled = base.scaled(k).build();

        let b1 = collapsed_labor(&params, &f);
        let b2 = collapsed_labor(&scaled, &f);
        prop_assert_eq!(b2.total_hours, b1.total_hours * k);
        prop_assert_eq!(b2.labor_saved, b1.labor_saved * k);
        prop_assert_eq!(b2.automation_fraction, b1.automation_fraction);

        let q1 = quality_ratio(&params, &f);
        let q2 = quality_ratio(&scaled, &f);
        prop_assert_eq!(q1, q2);

        let t1 = tipping(&params, &b1);
        let t2 = tipping(&scaled, &b2);
        prop_assert_eq!(t1.max_safe_reduction, t2.max_safe_reduction);
        prop_assert_eq!(t1.stable_reduction, t2.stable_reduction);
    }

    /// Cost is always the rate times total hours.
    #[test]
    fn cost_linkage(base in inputs(), f in fractions()) {
        let params = base.build();
        let breakdown = collapsed_labor(&params, &f);
        let expected = params.cost_rate() * breakdown.total_hours;
        let scale = expected.abs().max(1.0);
        prop_assert!((breakdown.cost - expected).abs() <= 1e-9 * scale);
    }

    /// The breakdown total always equals its parts.
    #[test]
    fn totals_equal_component_sums(base in inputs(), f in fractions()) {
        let params = base.build();
        let b = collapsed_labor(&params, &f);
        let recomputed = b.human_hours.sum() + b.oversight_hours.sum() + b.coord_hours_residual;
        let scale = recomputed.abs().max(1.0);
        prop_assert!((b.total_hours - recomputed).abs() <= 1e-9 * scale);
    }
}
