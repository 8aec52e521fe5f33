use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::state::ProbabilityDistribution;
use crate::stochastic::DistributionSeries;

/// Below this resultant length the circular mean direction is undefined.
pub const DEGENERATE_RESULTANT: f64 = 1e-12;

/// Signed representative of `v` modulo `d`, in `[-d/2, d/2]`.
pub fn wrap_signed(v: f64, d: usize) -> f64 {
    let d = d as f64;
    v - d * (v / d).round()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularMean {
    /// Displacement from the origin in `(-d/2, d/2]`; 0 when degenerate.
    pub displacement: f64,
    /// Length of the mean resultant vector, in `[0, 1]`.
    pub resultant: f64,
    pub degenerate: bool,
}

fn circular_mean_of(p: &[f64], x0: usize) -> CircularMean {
    let d = p.len();
    let z: Complex64 = p
        .iter()
        .enumerate()
        .map(|(x, &w)| {
            let k = (x + d - x0 % d) % d;
            Complex64::cis(TAU * k as f64 / d as f64) * w
        })
        .sum();
    let resultant = z.norm();
    if resultant < DEGENERATE_RESULTANT {
        return CircularMean {
            displacement: 0.0,
            resultant,
            degenerate: true,
        };
    }
    CircularMean {
        displacement: d as f64 / TAU * z.arg(),
        resultant,
        degenerate: false,
    }
}

/// Circular mean position relative to `x0`: `(d/2π)·arg Σ p(x) e^{i2π(x−x0)/d}`.
pub fn circular_mean_displacement(dist: &ProbabilityDistribution, x0: usize) -> CircularMean {
    circular_mean_of(dist.probabilities(), x0)
}

/// Signed circular distance of every site from `x0 + center`.
pub(crate) fn signed_offsets(d: usize, x0: usize, center: f64) -> impl Iterator<Item = f64> {
    (0..d).map(move |x| wrap_signed(x as f64 - x0 as f64 - center, d))
}

/// Variance about the circular mean, using signed circular distances.
pub fn circular_variance(p: &[f64], x0: usize, center: f64) -> f64 {
    p.iter()
        .zip(signed_offsets(p.len(), x0, center))
        .map(|(w, dx)| w * dx * dx)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    pub t: Vec<usize>,
    /// Unwrapped over time, in sites relative to the origin.
    pub mean_displacement: Vec<f64>,
    pub variance: Vec<f64>,
    pub degenerate: Vec<bool>,
}

impl MomentSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Circular mean (unwrapped over `t`) and variance of every row.
pub fn moment_series(series: &DistributionSeries, x0: usize) -> MomentSeries {
    let d = series.d();
    let n = series.len();
    let mut out = MomentSeries {
        t: (0..n).collect(),
        mean_displacement: Vec::with_capacity(n),
        variance: Vec::with_capacity(n),
        degenerate: Vec::with_capacity(n),
    };
    let mut prev: Option<f64> = None;
    for row in series.rows() {
        let cm = circular_mean_of(row, x0);
        out.variance
            .push(circular_variance(row, x0, cm.displacement));
        let m = match prev {
            Some(p) => p + wrap_signed(cm.displacement - p, d),
            None => cm.displacement,
        };
        prev = Some(m);
        out.mean_displacement.push(m);
        out.degenerate.push(cm.degenerate);
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use proptest::prelude::*;

    use super::*;
    use crate::config::{FieldKind, WalkConfig};
    use crate::state::StateVector;
    use crate::stochastic::run_realization;

    fn delta(d: usize, x: usize) -> ProbabilityDistribution {
        let mut p = vec![0.0; d];
        p[x] = 1.0;
        ProbabilityDistribution::new(p, 0).unwrap()
    }

    #[test]
    fn delta_distributions() {
        let cm = circular_mean_displacement(&delta(501, 250), 250);
        assert!(cm.displacement.abs() < 1e-12 && !cm.degenerate);
        let cm = circular_mean_displacement(&delta(501, 255), 250);
        assert!((cm.displacement - 5.0).abs() < 1e-10);
        let cm = circular_mean_displacement(&delta(501, 245), 250);
        assert!((cm.displacement + 5.0).abs() < 1e-10);
        // across the seam
        let cm = circular_mean_displacement(&delta(501, 2), 498);
        assert!((cm.displacement - 5.0).abs() < 1e-10);
    }

    #[test]
    fn uniform_is_degenerate() {
        let d = 40;
        let u = ProbabilityDistribution::new(vec![1.0 / d as f64; d], 0).unwrap();
        let cm = circular_mean_displacement(&u, 3);
        assert!(cm.degenerate);
        assert_eq!(cm.displacement, 0.0);
    }

    #[test]
    fn two_point_variance() {
        let mut p = vec![0.0; 101];
        p[47] = 0.5;
        p[53] = 0.5;
        let cm = circular_mean_of(&p, 50);
        assert!(cm.displacement.abs() < 1e-10);
        assert!((circular_variance(&p, 50, cm.displacement) - 9.0).abs() < 1e-9);
    }

    #[test]
    fn single_site_start_has_zero_moments() {
        let cfg = WalkConfig {
            d: 101,
            field: FieldKind::None,
            steps: 10,
            realizations: 1,
            ..WalkConfig::default()
        };
        let init = StateVector::init_single_site(101).unwrap();
        let run = run_realization(&cfg, &init, 0).unwrap();
        let m = moment_series(&run.distributions, 50);
        assert_eq!(m.mean_displacement[0], 0.0);
        assert!(m.variance[0].abs() < 1e-20);
    }

    #[test]
    fn ballistic_variance_grows_monotonically() {
        // field-free walk from the two-site state, checked for t < d/4
        let d = 501;
        let cfg = WalkConfig {
            d,
            theta: FRAC_PI_4,
            field: FieldKind::None,
            steps: 125,
            realizations: 1,
            ..WalkConfig::default()
        };
        let init = StateVector::init_two_site(d).unwrap();
        let run = run_realization(&cfg, &init, 0).unwrap();
        let m = moment_series(&run.distributions, d / 2);
        for w in m.variance.windows(2).skip(1) {
            assert!(w[1] > w[0], "{} !> {}", w[1], w[0]);
        }
    }

    #[test]
    fn unwrapping_follows_a_drifting_peak() {
        let d = 30;
        let mut values = Vec::new();
        for t in 0..100 {
            let mut row = vec![0.0; d];
            row[(5 + t) % d] = 1.0;
            values.extend(row);
        }
        let s = DistributionSeries::new(d, values).unwrap();
        let m = moment_series(&s, 5);
        for (t, v) in m.mean_displacement.iter().enumerate() {
            assert!((v - t as f64).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn unwrapped_mean_does_not_depend_on_the_origin_representative(
            start in 0usize..60, steps in prop::collection::vec(-3i64..=3, 1..80), shift in 0usize..60
        ) {
            let d = 60;
            let mut values = Vec::new();
            let mut pos = start as i64;
            for s in std::iter::once(0).chain(steps.iter().copied()) {
                pos += s;
                let mut row = vec![0.0; d];
                row[pos.rem_euclid(d as i64) as usize] = 1.0;
                values.extend(row);
            }
            let series = DistributionSeries::new(d, values).unwrap();
            let a = moment_series(&series, start);
            let b = moment_series(&series, (start + shift * d) % d);
            for (x, y) in a.mean_displacement.iter().zip(&b.mean_displacement) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
