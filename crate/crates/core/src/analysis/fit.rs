use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::moments::{circular_mean_displacement, signed_offsets, MomentSeries};
use crate::error::{Error, Result};
use crate::state::ProbabilityDistribution;

/// Sites with `p(x)` above this fraction of the maximum enter the log-parabola fit.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-2;
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    pub sigma2: f64,
    /// Fitted peak position, an absolute site coordinate in `[0, d)`.
    pub center: f64,
    pub r2: f64,
    pub n_points: usize,
}

/// Least-squares fit of `ln p(x)` to a parabola in the signed circular
/// distance from the circular mean.
pub fn fit_gaussian_logparabola(dist: &ProbabilityDistribution) -> Result<GaussianFit> {
    fit_gaussian_logparabola_with(dist, DEFAULT_SUPPORT_THRESHOLD)
}

pub fn fit_gaussian_logparabola_with(
    dist: &ProbabilityDistribution,
    threshold: f64,
) -> Result<GaussianFit> {
    let p = dist.probabilities();
    let d = p.len();
    let x0 = dist.origin();
    let cm = circular_mean_displacement(dist, x0);
    let pmax = p.iter().copied().fold(0.0, f64::max);
    let cut = threshold * pmax;

    let (dx, y): (Vec<f64>, Vec<f64>) = signed_offsets(d, x0, cm.displacement)
        .zip(p)
        .filter(|(_, &w)| w > cut && w > 0.0)
        .map(|(o, &w)| (o, w.ln()))
        .unzip();
    let n = dx.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::InsufficientSupport {
            found: n,
            needed: MIN_FIT_POINTS,
        });
    }

    let ymean = y.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - ymean).powi(2)).sum();
    if ss_tot <= f64::EPSILON * ymean.abs().max(1.0) * n as f64 {
        return Err(Error::NotGaussian { quadratic: 0.0 });
    }

    // scaled abscissa for conditioning
    let scale = dx.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let design = DMatrix::from_fn(n, 3, |i, j| (dx[i] / scale).powi(j as i32));
    let rhs = DVector::from_vec(y.clone());
    let coef = design
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::domain(format!("least squares failed: {e}")))?;
    let (b, c) = (coef[1] / scale, coef[2] / (scale * scale));
    if c >= 0.0 {
        return Err(Error::NotGaussian { quadratic: c });
    }
    let fitted = &design * &coef;
    let ss_res: f64 = fitted.iter().zip(&y).map(|(f, v)| (f - v).powi(2)).sum();
    let r2 = (1.0 - ss_res / ss_tot).clamp(0.0, 1.0);

    let peak = cm.displacement - b / (2.0 * c);
    Ok(GaussianFit {
        sigma2: -1.0 / (2.0 * c),
        center: (x0 as f64 + peak).rem_euclid(d as f64),
        r2,
        n_points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Ballistic,
    Intermediate,
    Diffusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
    pub t_min: usize,
    pub t_max: usize,
}

impl ScalingFit {
    /// Reporting bands: above 1.6 ballistic, below 1.3 diffusive.
    pub fn regime(&self) -> Regime {
        if self.exponent > 1.6 {
            Regime::Ballistic
        } else if self.exponent < 1.3 {
            Regime::Diffusive
        } else {
            Regime::Intermediate
        }
    }
}

/// Slope of `ln σ²` against `ln t` over `[t_min, t_max]`.
pub fn fit_scaling_exponent(
    series: &MomentSeries,
    t_min: usize,
    t_max: usize,
) -> Result<ScalingFit> {
    if t_min < 1 || t_max <= t_min {
        return Err(Error::domain(format!(
            "need 1 <= t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    let pts: Vec<(f64, f64)> = series
        .t
        .iter()
        .zip(&series.variance)
        .filter(|(t, _)| (t_min..=t_max).contains(*t))
        .map(|(&t, &v)| {
            if v > 0.0 {
                Ok(((t as f64).ln(), v.ln()))
            } else {
                Err(Error::domain(format!(
                    "nonpositive variance {v} at t = {t}"
                )))
            }
        })
        .collect::<Result<_>>()?;
    if pts.len() < 2 {
        return Err(Error::domain(format!(
            "window [{t_min}, {t_max}] holds fewer than 2 samples"
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ScalingFit {
        exponent: slope,
        intercept: my - slope * mx,
        r2,
        t_min,
        t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn discrete_gaussian(d: usize, center: usize, sigma2: f64) -> ProbabilityDistribution {
        let mut p: Vec<f64> = (0..d)
            .map(|x| {
                let dx = x as f64 - center as f64;
                (-dx * dx / (2.0 * sigma2)).exp()
            })
            .collect();
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= z);
        ProbabilityDistribution::new(p, center).unwrap()
    }

    #[test]
    fn recovers_an_exact_gaussian() {
        let fit = fit_gaussian_logparabola(&discrete_gaussian(501, 250, 25.0)).unwrap();
        assert!((fit.sigma2 - 25.0).abs() < 0.5, "{fit:?}");
        assert!(fit.r2 > 0.999);
        assert!((fit.center - 250.0).abs() < 1e-6);
    }

    #[test]
    fn recovers_sigma_across_widths() {
        for sigma2 in [4.0, 16.0, 100.0, 400.0] {
            let d = ((20.0 * f64::sqrt(sigma2)).ceil() as usize).max(40) | 1;
            let fit = fit_gaussian_logparabola(&discrete_gaussian(d, d / 2, sigma2)).unwrap();
            assert!(
                (fit.sigma2 / sigma2 - 1.0).abs() < 0.02,
                "sigma2 {sigma2}: {fit:?}"
            );
        }
    }

    #[test]
    fn center_crossing_the_seam() {
        let d = 200;
        let g = discrete_gaussian(d, 100, 36.0);
        let mut p = g.probabilities().to_vec();
        p.rotate_left(100); // peak now at site 0
        let dist = ProbabilityDistribution::new(p, 0).unwrap();
        let fit = fit_gaussian_logparabola(&dist).unwrap();
        assert!((fit.sigma2 - 36.0).abs() < 0.5);
        assert!(fit.center < 1e-6 || (d as f64 - fit.center) < 1e-6);
    }

    #[test]
    fn uniform_is_not_gaussian() {
        let d = 100;
        let u = ProbabilityDistribution::new(vec![1.0 / d as f64; d], 0).unwrap();
        assert!(matches!(
            fit_gaussian_logparabola(&u),
            Err(Error::NotGaussian { .. })
        ));
    }

    #[test]
    fn convex_profile_is_not_gaussian() {
        let d = 61;
        // confined to an interior window so the ends do not meet across the seam
        let mut p: Vec<f64> = (0..d)
            .map(|x| {
                if (10..=50).contains(&x) {
                    (0.002 * (x as f64 - 30.0).powi(2)).exp()
                } else {
                    0.0
                }
            })
            .collect();
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= z);
        let dist = ProbabilityDistribution::new(p, 30).unwrap();
        assert!(matches!(
            fit_gaussian_logparabola(&dist),
            Err(Error::NotGaussian { .. })
        ));
    }

    #[test]
    fn narrow_support_is_rejected() {
        let mut p = vec![0.0; 50];
        p[10] = 0.5;
        p[11] = 0.5;
        let dist = ProbabilityDistribution::new(p, 10).unwrap();
        assert!(matches!(
            fit_gaussian_logparabola(&dist),
            Err(Error::InsufficientSupport { found: 2, .. })
        ));
    }

    fn series(var: impl Fn(f64) -> f64, n: usize) -> MomentSeries {
        MomentSeries {
            t: (0..n).collect(),
            mean_displacement: vec![0.0; n],
            variance: (0..n).map(|t| var(t as f64)).collect(),
            degenerate: vec![false; n],
        }
    }

    #[test]
    fn exact_power_laws() {
        let fit = fit_scaling_exponent(&series(|t| 3.0 * t, 401), 100, 400).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-6);
        assert_eq!(fit.regime(), Regime::Diffusive);
        let fit = fit_scaling_exponent(&series(|t| 0.5 * t * t, 101), 20, 100).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!((fit.intercept - 0.5f64.ln()).abs() < 1e-9);
        assert_eq!(fit.regime(), Regime::Ballistic);
    }

    #[test]
    fn scaling_domain_errors() {
        let s = series(|t| t, 50);
        assert!(fit_scaling_exponent(&s, 0, 10).is_err());
        assert!(fit_scaling_exponent(&s, 10, 10).is_err());
        let zero = series(|_| 0.0, 50);
        assert!(fit_scaling_exponent(&zero, 1, 10).is_err());
    }
}
