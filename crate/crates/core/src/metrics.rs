//! Pareto-front quality indicators and multi-run statistics.
//!
//! Fronts are normalized into a minimization square: `u = cost / c_base`,
//! `v = 1 - quality` (quality clamped to `[0, 1]` first). The 2-D hypervolume
//! is the staircase area dominated by the non-dominated subset and bounded by
//! the reference point, divided by the reference box area `ref.u * ref.v` so
//! the result lands in `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A front point in normalized minimization coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPoint {
    /// Cost relative to the baseline cost.
    pub u: f64,
    /// One minus the (clamped) quality ratio.
    pub v: f64,
}

/// Default hypervolume reference point: 1.1x baseline cost, zero quality.
pub const DEFAULT_REFERENCE: NormalizedPoint = NormalizedPoint { u: 1.1, v: 1.0 };

/// Statistics over per-run values; `std` is the population standard
/// deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiRunSummary {
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Maps `(cost, quality)` pairs into normalized minimization coordinates.
/// Qualities above 1 clamp to 1 (and below 0 to 0); costs beyond the
/// reference are kept and simply contribute no hypervolume.
pub fn normalize_front(
    front: &[(f64, f64)],
    c_base: f64,
) -> Result<Vec<NormalizedPoint>, Error> {
    if c_base.is_nan() || c_base <= 0.0 {
        return Err(Error::NonpositiveBase(c_base));
    }
    Ok(front
        .iter()
        .map(|&(cost, quality)| NormalizedPoint {
            u: cost / c_base,
            v: 1.0 - quality.clamp(0.0, 1.0),
        })
        .collect())
}

/// Staircase hypervolume of the non-dominated subset of `points`, bounded by
/// `reference` (both coordinates minimizing), divided by the reference box
/// area. Points outside the box contribute nothing; an empty input yields 0.
pub fn hypervolume_2d(points: &[NormalizedPoint], reference: NormalizedPoint) -> f64 {
    let mut inside: Vec<NormalizedPoint> = points
        .iter()
        .copied()
        .filter(|p| p.u < reference.u && p.v < reference.v)
        .collect();
    inside.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));

    // Sweep in ascending u, keeping only strict improvements in v: the
    // non-dominated staircase. Duplicates and dominated points drop out.
    let mut staircase: Vec<NormalizedPoint> = Vec::new();
    for p in inside {
        if staircase.last().is_none_or(|last| p.v < last.v) {
            staircase.push(p);
        }
    }

    let mut area = 0.0;
    for (i, p) in staircase.iter().enumerate() {
        let u_next = staircase.get(i + 1).map_or(reference.u, |next| next.u);
        area += (u_next - p.u) * (reference.v - p.v);
    }
    area / (reference.u * reference.v)
}

/// Mean, population standard deviation, min, and max of a non-empty list.
pub fn summarize(values: &[f64]) -> Result<MultiRunSummary, Error> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MultiRunSummary {
        values: values.to_vec(),
        mean,
        std: variance.sqrt(),
        min,
        max,
    })
}

/// Relative improvement of `achieved` over `reference`:
/// `(reference - achieved) / reference`.
pub fn relative_improvement(reference: f64, achieved: f64) -> f64 {
    (reference - achieved) / reference
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tolerance: f64) {
        assert!(
            (actual - expected).abs() <= tolerance,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn normalization_maps_cost_and_quality() {
        let points = normalize_front(&[(202_500.0, 0.75)], 202_500.0).unwrap();
        assert_eq!(points[0], NormalizedPoint { u: 1.0, v: 0.25 });

        let ideal = normalize_front(&[(0.0, 1.0)], 100.0).unwrap();
        assert_eq!(ideal[0], NormalizedPoint { u: 0.0, v: 0.0 });

        let clamped = normalize_front(&[(50.0, 1.2)], 100.0).unwrap();
        assert_eq!(clamped[0].v, 0.0);

        assert_eq!(
            normalize_front(&[(1.0, 1.0)], 0.0),
            Err(Error::NonpositiveBase(0.0))
        );
    }

    #[test]
    fn hypervolume_staircase_matches_hand_areas() {
        let reference = DEFAULT_REFERENCE;

        // A point at the reference dominates nothing.
        assert_eq!(
            hypervolume_2d(&[NormalizedPoint { u: 1.1, v: 1.0 }], reference),
            0.0
        );

        let single = [NormalizedPoint { u: 0.25, v: 0.25 }];
        assert_close(hypervolume_2d(&single, reference), 0.6375 / 1.1, 1e-12);

        let pair = [
            NormalizedPoint { u: 0.2, v: 0.8 },
            NormalizedPoint { u: 0.6, v: 0.3 },
        ];
        assert_close(hypervolume_2d(&pair, reference), 0.43 / 1.1, 1e-12);

        assert_eq!(hypervolume_2d(&[], reference), 0.0);
    }

    #[test]
    fn hypervolume_ignores_dominated_and_outside_points() {
        let reference = DEFAULT_REFERENCE;
        let pair = [
            NormalizedPoint { u: 0.2, v: 0.8 },
            NormalizedPoint { u: 0.6, v: 0.3 },
        ];
        let with_noise = [
            pair[0],
            pair[1],
            NormalizedPoint { u: 0.7, v: 0.9 },  // dominated
            NormalizedPoint { u: 1.2, v: 0.1 },  // outside in u
            NormalizedPoint { u: 0.2, v: 0.8 },  // duplicate
        ];
        assert_close(
            hypervolume_2d(&with_noise, reference),
            hypervolume_2d(&pair, reference),
            1e-15,
        );
    }

    #[test]
    fn summary_matches_hand_arithmetic() {
        let flat = summarize(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(flat.mean, 1.0);
        assert_eq!(flat.std, 0.0);

        let spread = summarize(&[0.0, 2.0]).unwrap();
        assert_eq!(spread.mean, 1.0);
        assert_eq!(spread.std, 1.0);
        assert_eq!(spread.min, 0.0);
        assert_eq!(spread.max, 2.0);

        let hv_like = summarize(&[0.912, 0.910, 0.913]).unwrap();
        assert_close(hv_like.mean, 0.911666666666, 1e-9);
        assert_close(hv_like.std, 0.00124721913, 1e-9);

        assert_eq!(summarize(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn relative_improvement_is_the_reporting_formula() {
        assert_close(relative_improvement(141_750.0, 101_207.0), 0.2860176367, 1e-9);
        assert_eq!(relative_improvement(100.0, 100.0), 0.0);
    }
}
