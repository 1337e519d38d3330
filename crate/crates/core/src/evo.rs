//! Mixed real/integer NSGA-II over automation fractions and team size.
//!
//! The genome couples six automation fractions in `[0, 1]` with an integer
//! headcount. Objectives are labor cost (minimized) and the test/dev quality
//! ratio (maximized); capacity, quality-floor, and tipping-coherence
//! constraints are handled with feasibility-first domination. A run is fully
//! deterministic for a fixed seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::labor::{
    collapsed_labor, quality_ratio, tipping, AutomationVector, ScenarioParams, TippingReport,
};
use crate::phase::{Phase, PhaseMap};

/// Decision vector: per-phase automation fractions plus an integer team size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Genome {
    pub automation: AutomationVector,
    pub team_size: u32,
}

/// Raw objective values; cost is minimized, quality maximized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveVector {
    pub cost: f64,
    pub quality: f64,
}

/// Nonnegative constraint violations; zero everywhere means feasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintStatus {
    /// Hours beyond what the genome's team can absorb: `max(0, total - N*H)`.
    pub capacity_violation: f64,
    /// Shortfall against the quality floor: `max(0, floor - quality)`.
    pub quality_violation: f64,
    /// FTE cut below baseline beyond what the automation fraction absorbs:
    /// `max(0, (N_base - N) - max_safe_reduction)`.
    pub tipping_violation: f64,
    /// Sum of the three components, each divided by its configured scale.
    pub total_violation: f64,
}

impl ConstraintStatus {
    pub fn is_feasible(&self) -> bool {
        self.total_violation == 0.0
    }
}

/// A genome with its cached evaluation and NSGA-II bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub objectives: ObjectiveVector,
    pub constraints: ConstraintStatus,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    /// Builds an individual by evaluating `genome` against the scenario.
    pub fn evaluated(genome: Genome, params: &ScenarioParams, config: &OptimizerConfig) -> Self {
        let (objectives, constraints) = evaluate(&genome, params, config);
        Individual {
            genome,
            objectives,
            constraints,
            rank: 0,
            crowding: 0.0,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.constraints.is_feasible()
    }
}

/// Normalization scales for the three constraint-violation components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationScales {
    pub capacity: f64,
    pub quality: f64,
    pub tipping: f64,
}

impl Default for ViolationScales {
    fn default() -> Self {
        // One unit of violation is roughly 100 hours over capacity, a 0.1
        // quality shortfall, or one FTE cut too deep.
        ViolationScales {
            capacity: 100.0,
            quality: 0.1,
            tipping: 1.0,
        }
    }
}

/// NSGA-II settings. `Default` yields the reference configuration:
/// population 50, 100 generations, uniform crossover at 0.5, Gaussian
/// mutation with sigma 0.05, +/-1 team perturbation with probability 0.2,
/// team bounds 1..=30, quality floor 0.6.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_sigma: f64,
    /// Per-gene probability that a free fraction receives Gaussian noise.
    pub real_mutation_prob: f64,
    /// Probability that the team size moves by one step.
    pub int_perturb_prob: f64,
    pub team_min: u32,
    pub team_max: u32,
    /// Phases pinned to a constant fraction instead of evolving.
    pub fixed_phases: PhaseMap<Option<f64>>,
    pub seed: u64,
    /// Minimum acceptable quality ratio; zero disables the constraint.
    pub quality_floor: f64,
    pub violation_scales: ViolationScales,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population_size: 50,
            generations: 100,
            crossover_prob: 0.5,
            mutation_sigma: 0.05,
            real_mutation_prob: 1.0 / 6.0,
            int_perturb_prob: 0.2,
            team_min: 1,
            team_max: 30,
            fixed_phases: PhaseMap::from_fn(|_| None),
            seed: 0,
            quality_floor: 0.6,
            violation_scales: ViolationScales::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(Error::ConfigInvalid(format!(
                "population_size must be even and >= 4, got {}",
                self.population_size
            )));
        }
        if self.generations == 0 {
            return Err(Error::ConfigInvalid("generations must be >= 1".into()));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("real_mutation_prob", self.real_mutation_prob),
            ("int_perturb_prob", self.int_perturb_prob),
        ] {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::ConfigInvalid(format!("{name} must lie in [0, 1]")));
            }
        }
        if !self.mutation_sigma.is_finite() || self.mutation_sigma <= 0.0 {
            return Err(Error::ConfigInvalid("mutation_sigma must be > 0".into()));
        }
        if self.team_min < 1 || self.team_min > self.team_max {
            return Err(Error::ConfigInvalid(format!(
                "team bounds must satisfy 1 <= team_min <= team_max, got [{}, {}]",
                self.team_min, self.team_max
            )));
        }
        for (phase, fixed) in self.fixed_phases.iter() {
            if let Some(c) = fixed {
                if !c.is_finite() || !(0.0..=1.0).contains(c) {
                    return Err(Error::ConfigInvalid(format!(
                        "fixed fraction for {phase} must lie in [0, 1]"
                    )));
                }
            }
        }
        if !self.quality_floor.is_finite() || self.quality_floor < 0.0 {
            return Err(Error::ConfigInvalid("quality_floor must be >= 0".into()));
        }
        let s = &self.violation_scales;
        if [s.capacity, s.quality, s.tipping]
            .iter()
            .any(|v| !v.is_finite() || *v <= 0.0)
        {
            return Err(Error::ConfigInvalid("violation scales must be > 0".into()));
        }
        Ok(())
    }
}

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvoRunReport {
    pub seed: u64,
    /// Final non-dominated set, sorted by ascending cost.
    pub front: Vec<Individual>,
    /// Cheapest feasible individual (ties: higher quality, smaller team,
    /// lexicographically smaller fractions), if any exists.
    pub best: Option<Individual>,
    /// Tipping analysis for `best`.
    pub tipping: Option<TippingReport>,
    /// Best feasible cost after each generation; `None` until a feasible
    /// individual exists.
    pub best_cost_trace: Vec<Option<f64>>,
}

/// Evaluates a genome: objectives from the labor model, constraint
/// violations from capacity, the quality floor, and tipping coherence.
///
/// A degenerate quality denominator (no development hours left) is treated
/// as quality zero, i.e. the maximal quality violation.
pub fn evaluate(
    genome: &Genome,
    params: &ScenarioParams,
    config: &OptimizerConfig,
) -> (ObjectiveVector, ConstraintStatus) {
    let breakdown = collapsed_labor(params, &genome.automation);
    let quality = quality_ratio(params, &genome.automation).unwrap_or(0.0);
    let quality_violation = (config.quality_floor - quality).max(0.0);

    let capacity_violation =
        (breakdown.total_hours - f64::from(genome.team_size) * params.capacity_hours()).max(0.0);

    let report = tipping(params, &breakdown);
    let cut = i64::from(params.team_size()) - i64::from(genome.team_size);
    let tipping_violation = ((cut - i64::from(report.max_safe_reduction)) as f64).max(0.0);

    let scales = &config.violation_scales;
    let total_violation = capacity_violation / scales.capacity
        + quality_violation / scales.quality
        + tipping_violation / scales.tipping;

    (
        ObjectiveVector {
            cost: breakdown.cost,
            quality,
        },
        ConstraintStatus {
            capacity_violation,
            quality_violation,
            tipping_violation,
            total_violation,
        },
    )
}

/// Feasibility-first constrained domination: a feasible individual beats any
/// infeasible one, infeasible individuals compare by total violation, and
/// feasible ones compare by Pareto dominance on (cost min, quality max).
pub fn constrained_dominates(a: &Individual, b: &Individual) -> bool {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.constraints.total_violation < b.constraints.total_violation,
        (true, true) => {
            let no_worse =
                a.objectives.cost <= b.objectives.cost && a.objectives.quality >= b.objectives.quality;
            let strictly_better =
                a.objectives.cost < b.objectives.cost || a.objectives.quality > b.objectives.quality;
            no_worse && strictly_better
        }
    }
}

/// Fast non-dominated sorting under [`constrained_dominates`]. Returns the
/// fronts as index lists and writes each individual's front index into its
/// `rank` field.
pub fn fast_nondominated_sort(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut current: Vec<usize> = Vec::new();

    for i in 0..n {
        for j in (i + 1)..n {
            if constrained_dominates(&pop[i], &pop[j]) {
                dominated[i].push(j);
                domination_count[j] += 1;
            } else if constrained_dominates(&pop[j], &pop[i]) {
                dominated[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    for (i, &count) in domination_count.iter().enumerate() {
        if count == 0 {
            pop[i].rank = 0;
            current.push(i);
        }
    }

    let mut fronts = Vec::new();
    let mut front_index = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    pop[j].rank = front_index + 1;
                    next.push(j);
                }
            }
        }
        fronts.push(current);
        current = next;
        front_index += 1;
    }
    fronts
}

/// Crowding distance over one front: per objective, boundary individuals get
/// infinity and interior ones accumulate the normalized gap between their
/// neighbors; a zero objective range contributes nothing. Ties in the
/// objective sort break by index order.
pub fn crowding_distance(front: &[Individual]) -> Vec<f64> {
    let points: Vec<(f64, f64)> = front
        .iter()
        .map(|ind| (ind.objectives.cost, ind.objectives.quality))
        .collect();
    crowding_from_points(&points)
}

pub(crate) fn crowding_from_points(points: &[(f64, f64)]) -> Vec<f64> {
    let n = points.len();
    let mut distance = vec![0.0f64; n];
    if n == 0 {
        return distance;
    }
    for objective in 0..2 {
        let value = |i: usize| if objective == 0 { points[i].0 } else { points[i].1 };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));

        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = value(order[n - 1]) - value(order[0]);
        if range > 0.0 {
            for w in 1..n.saturating_sub(1) {
                let i = order[w];
                if distance[i].is_finite() {
                    distance[i] += (value(order[w + 1]) - value(order[w - 1])) / range;
                }
            }
        }
    }
    distance
}

/// Binary tournament: two draws with replacement; lower rank wins, ties go
/// to the larger crowding distance, full ties to the first draw.
pub fn tournament_select<'a>(pop: &'a [Individual], rng: &mut impl Rng) -> &'a Individual {
    let first = &pop[rng.gen_range(0..pop.len())];
    let second = &pop[rng.gen_range(0..pop.len())];
    tournament_winner(first, second)
}

fn tournament_winner<'a>(first: &'a Individual, second: &'a Individual) -> &'a Individual {
    if second.rank < first.rank || (second.rank == first.rank && second.crowding > first.crowding) {
        second
    } else {
        first
    }
}

/// Uniform crossover: with probability `crossover_prob` each free gene
/// position (six fractions plus team size) swaps independently with
/// probability 0.5; otherwise the children are copies of the parents.
pub fn uniform_crossover(
    a: &Genome,
    b: &Genome,
    rng: &mut impl Rng,
    config: &OptimizerConfig,
) -> (Genome, Genome) {
    let mut child_a = a.clone();
    let mut child_b = b.clone();
    if rng.gen::<f64>() < config.crossover_prob {
        for phase in Phase::ALL {
            if config.fixed_phases[phase].is_some() {
                continue;
            }
            if rng.gen::<f64>() < 0.5 {
                let (fa, fb) = (child_a.automation.get(phase), child_b.automation.get(phase));
                child_a.automation.set_clamped(phase, fb);
                child_b.automation.set_clamped(phase, fa);
            }
        }
        if rng.gen::<f64>() < 0.5 {
            std::mem::swap(&mut child_a.team_size, &mut child_b.team_size);
        }
    }
    (child_a, child_b)
}

/// Gaussian mutation on free fractions (clamped to `[0, 1]`) and a +/-1 step
/// on team size (clamped to the configured bounds). Fixed phases are left
/// untouched.
pub fn mutate(genome: &Genome, rng: &mut impl Rng, config: &OptimizerConfig) -> Genome {
    let mut out = genome.clone();
    for phase in Phase::ALL {
        if config.fixed_phases[phase].is_some() {
            continue;
        }
        if rng.gen::<f64>() < config.real_mutation_prob {
            let noise: f64 = rng.sample(StandardNormal);
            out.automation
                .set_clamped(phase, out.automation.get(phase) + noise * config.mutation_sigma);
        }
    }
    if rng.gen::<f64>() < config.int_perturb_prob {
        let step: i64 = if rng.gen::<bool>() { 1 } else { -1 };
        let moved = (i64::from(out.team_size) + step)
            .clamp(i64::from(config.team_min), i64::from(config.team_max));
        out.team_size = moved as u32;
    }
    out
}

/// mu+lambda environmental selection: fill by front, truncating the boundary
/// front by descending crowding distance (ties by index). Recomputes rank and
/// crowding on the survivors.
pub fn environmental_selection(mut merged: Vec<Individual>, target: usize) -> Vec<Individual> {
    let fronts = fast_nondominated_sort(&mut merged);
    let mut next: Vec<Individual> = Vec::with_capacity(target);
    for front in fronts {
        if next.len() >= target {
            break;
        }
        if next.len() + front.len() <= target {
            next.extend(front.iter().map(|&i| merged[i].clone()));
        } else {
            let members: Vec<Individual> = front.iter().map(|&i| merged[i].clone()).collect();
            let distances = crowding_distance(&members);
            let mut order: Vec<usize> = (0..members.len()).collect();
            order.sort_by(|&x, &y| distances[y].total_cmp(&distances[x]).then(x.cmp(&y)));
            let remaining = target - next.len();
            next.extend(order.into_iter().take(remaining).map(|w| members[w].clone()));
        }
    }
    assign_rank_and_crowding(&mut next);
    next
}

fn assign_rank_and_crowding(pop: &mut [Individual]) {
    let fronts = fast_nondominated_sort(pop);
    for front in fronts {
        let members: Vec<Individual> = front.iter().map(|&i| pop[i].clone()).collect();
        let distances = crowding_distance(&members);
        for (&i, d) in front.iter().zip(distances) {
            pop[i].crowding = d;
        }
    }
}

fn random_genome(rng: &mut impl Rng, config: &OptimizerConfig) -> Genome {
    let mut automation = AutomationVector::zero();
    for phase in Phase::ALL {
        let fraction = match config.fixed_phases[phase] {
            Some(constant) => constant,
            None => rng.gen::<f64>(),
        };
        automation.set_clamped(phase, fraction);
    }
    Genome {
        automation,
        team_size: rng.gen_range(config.team_min..=config.team_max),
    }
}

fn compare_best(a: &Individual, b: &Individual) -> std::cmp::Ordering {
    a.objectives
        .cost
        .total_cmp(&b.objectives.cost)
        .then(b.objectives.quality.total_cmp(&a.objectives.quality))
        .then(a.genome.team_size.cmp(&b.genome.team_size))
        .then_with(|| {
            let fa = a.genome.automation.fractions().as_array();
            let fb = b.genome.automation.fractions().as_array();
            fa.iter()
                .zip(fb)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
}

fn best_feasible(pop: &[Individual]) -> Option<&Individual> {
    pop.iter()
        .filter(|ind| ind.is_feasible())
        .min_by(|a, b| compare_best(a, b))
}

/// Runs the full NSGA-II loop and reports the final front, the best feasible
/// solution with its tipping analysis, and the per-generation best-cost
/// trace. Identical inputs (including the seed) produce identical reports.
pub fn run(params: &ScenarioParams, config: &OptimizerConfig) -> Result<EvoRunReport, Error> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut pop: Vec<Individual> = (0..config.population_size)
        .map(|_| Individual::evaluated(random_genome(&mut rng, config), params, config))
        .collect();
    assign_rank_and_crowding(&mut pop);

    let mut best_cost_trace = Vec::with_capacity(config.generations);
    for _ in 0..config.generations {
        let mut offspring = Vec::with_capacity(config.population_size);
        while offspring.len() < config.population_size {
            let parent_a = tournament_select(&pop, &mut rng).genome.clone();
            let parent_b = tournament_select(&pop, &mut rng).genome.clone();
            let (child_a, child_b) = uniform_crossover(&parent_a, &parent_b, &mut rng, config);
            let child_a = mutate(&child_a, &mut rng, config);
            let child_b = mutate(&child_b, &mut rng, config);
            offspring.push(Individual::evaluated(child_a, params, config));
            if offspring.len() < config.population_size {
                offspring.push(Individual::evaluated(child_b, params, config));
            }
        }
        pop.extend(offspring);
        pop = environmental_selection(pop, config.population_size);
        best_cost_trace.push(best_feasible(&pop).map(|ind| ind.objectives.cost));
    }

    let fronts = fast_nondominated_sort(&mut pop);
    let mut front: Vec<Individual> = fronts
        .first()
        .map(|f| f.iter().map(|&i| pop[i].clone()).collect())
        .unwrap_or_default();
    front.sort_by(compare_best);

    let best = best_feasible(&pop).cloned();
    let tipping_report = best.as_ref().map(|ind| {
        let breakdown = collapsed_labor(params, &ind.genome.automation);
        tipping(params, &breakdown)
    });

    Ok(EvoRunReport {
        seed: config.seed,
        front,
        best,
        tipping: tipping_report,
        best_cost_trace,
    })
}
