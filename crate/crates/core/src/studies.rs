//! Convergence studies: mass scaling against the lowest-order formulas, kappa
//! sweeps, and the small-angle chain.
//!
//! Mass scaling keeps every radius and angle fixed in meters and varies only
//! `M`, so `kappa / R_E^2` stays fixed for segments built from constants and
//! the differences isolate the `O(eps^3)` remainder.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WignerError};
use crate::frames::GaugeChoice;
use crate::geodesics::{kappa_max, kappa_small_angle, solve_kappa_with, GeodesicSegment, NullConstants, Sign};
use crate::geometry::{Point, SpacetimeParams};
use crate::numerics::{loglog_fit, Tolerances};
use crate::schemes::{evaluate_scheme_with, phase_one_satellite, phase_one_satellite_smallangle, SchemePath, Waypoint};
use crate::transport::{wigner_phase_closed, wigner_phase_numeric_with, wigner_rate_numeric, wigner_rate_perturbative};

/// `M / R_E` values of the standard scaling study.
pub const DEFAULT_MASS_RATIOS: [f64; 3] = [1e-3, 1e-4, 1e-5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingQuantity {
    Rate,
    SegmentPhase,
    SchemeTotal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub mass_ratio: f64,
    pub epsilon: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub difference: f64,
    pub error_estimate: f64,
}

/// Outcome of a mass-scaling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub quantity: ScalingQuantity,
    pub points: Vec<ScalingPoint>,
    /// Log-log slope of `|difference|` against `eps`; `None` when some
    /// difference vanishes exactly.
    pub slope: Option<f64>,
    /// `max |difference| / eps^3` over the points, widened by the change of
    /// that ratio between the two smallest `eps`. The ratio converges
    /// geometrically as `eps -> 0`, so this covers its limit.
    pub c_bound: f64,
}

impl ScalingStudy {
    /// Whether the fitted slope lies within `3 +- tolerance`.
    pub fn is_third_order(&self, tolerance: f64) -> bool {
        self.slope.is_some_and(|s| (s - 3.0).abs() <= tolerance)
    }
}

/// Runs `eval(params) -> (numeric, closed_form, error_estimate)` for every
/// mass ratio at the surface radius of `base`.
pub fn epsilon_scaling<F>(base: &SpacetimeParams, ratios: &[f64], quantity: ScalingQuantity, mut eval: F) -> Result<ScalingStudy>
where
    F: FnMut(&SpacetimeParams) -> Result<(f64, f64, f64)>,
{
    if ratios.len() < 2 {
        return Err(WignerError::InvalidParameter("a scaling study needs at least two mass ratios".into()));
    }
    let mut points = Vec::with_capacity(ratios.len());
    for &ratio in ratios {
        if !(ratio > 0.0 && ratio < 0.5) {
            return Err(WignerError::InvalidParameter(format!("mass ratio must be in (0, 0.5), got {ratio}")));
        }
        let p = base.with_mass_ratio(ratio)?;
        let (numeric, closed_form, error_estimate) = eval(&p)?;
        points.push(ScalingPoint {
            mass_ratio: ratio,
            epsilon: p.epsilon(),
            numeric,
            closed_form,
            difference: numeric - closed_form,
            error_estimate,
        });
    }
    let fit = loglog_fit(&points.iter().map(|p| (p.epsilon, p.difference.abs())).collect::<Vec<_>>());
    let mut ratios_c: Vec<(f64, f64)> = points.iter().map(|p| (p.epsilon, p.difference.abs() / p.epsilon.powi(3))).collect();
    ratios_c.sort_by(|a, b| a.0.total_cmp(&b.0));
    let c_max = ratios_c.iter().map(|c| c.1).fold(0.0, f64::max);
    let c_bound = c_max + (ratios_c[0].1 - ratios_c[1].1).abs();
    Ok(ScalingStudy { quantity, points, slope: fit.map(|f| f.slope), c_bound })
}

/// Rate at `(r, theta)` on a constant-phi ray with Carter constant `kappa`.
pub fn rate_scaling(base: &SpacetimeParams, kappa: f64, r: f64, theta: f64, ratios: &[f64]) -> Result<ScalingStudy> {
    let c = NullConstants::planar(1.0, kappa, Sign::Plus, Sign::Plus)?;
    epsilon_scaling(base, ratios, ScalingQuantity::Rate, |p| {
        let num = wigner_rate_numeric(p, &c, &Point::spatial(r, theta, 0.0), &GaugeChoice::chosen())?;
        Ok((num, wigner_rate_perturbative(p, &c, r)?, 0.0))
    })
}

/// Segment geometry held fixed during a scaling study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub r_start: f64,
    pub r_end: f64,
    pub theta_start: f64,
    pub kappa: f64,
    #[serde(default = "plus")]
    pub eps_theta: Sign,
}

fn plus() -> Sign {
    Sign::Plus
}

impl SegmentSpec {
    pub fn build(&self, params: SpacetimeParams) -> Result<GeodesicSegment> {
        let c = NullConstants::planar(1.0, self.kappa, Sign::of(self.r_end - self.r_start), self.eps_theta)?;
        GeodesicSegment::new(params, c, self.r_start, self.r_end, self.theta_start, 0.0)
    }
}

/// Numeric segment phase (chosen gauge) against its closed form.
pub fn segment_scaling(base: &SpacetimeParams, spec: &SegmentSpec, ratios: &[f64], tol: &Tolerances) -> Result<ScalingStudy> {
    epsilon_scaling(base, ratios, ScalingQuantity::SegmentPhase, |p| {
        let seg = spec.build(*p)?;
        let num = wigner_phase_numeric_with(&seg, &GaugeChoice::chosen(), tol)?;
        Ok((num.phase, wigner_phase_closed(&seg)?.phase, num.error_estimate))
    })
}

/// Scaling of a scheme total together with each of its geodesic segments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeScaling {
    pub total: ScalingStudy,
    /// One study per geodesic segment, in path order.
    pub segments: Vec<ScalingStudy>,
}

/// Numeric scheme totals and segment phases against their closed forms,
/// waypoints fixed in meters.
pub fn scheme_scaling(
    base: &SpacetimeParams,
    waypoints: &[Waypoint],
    gauge: &GaugeChoice,
    ratios: &[f64],
    tol: &Tolerances,
) -> Result<SchemeScaling> {
    let mut runs = Vec::with_capacity(ratios.len());
    let total = epsilon_scaling(base, ratios, ScalingQuantity::SchemeTotal, |p| {
        let path = SchemePath::from_waypoints_with(*p, 1.0, waypoints, 0.0, tol)?;
        let b = evaluate_scheme_with(&path, gauge, tol)?;
        let closed = b
            .closed_form_total
            .ok_or_else(|| WignerError::InvalidParameter(format!("no closed form is known in the {} gauge", gauge.label())))?;
        let out = (b.total, closed, b.total_error);
        runs.push(b.segments);
        Ok(out)
    })?;
    let n = runs.first().map_or(0, Vec::len);
    let segments = (0..n)
        .map(|i| {
            let mut k = 0;
            epsilon_scaling(base, ratios, ScalingQuantity::SegmentPhase, |_| {
                let s = &runs[k][i];
                k += 1;
                let closed = s.closed_form.as_ref().map_or(f64::NAN, |c| c.phase);
                Ok((s.numeric.phase, closed, s.numeric.error_estimate))
            })
        })
        .collect::<Result<_>>()?;
    Ok(SchemeScaling { total, segments })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaSweepPoint {
    pub kappa: f64,
    pub delta_theta: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub error_estimate: f64,
}

/// Segment phases for `kappa = fraction * kappa_max` at each fraction.
pub fn kappa_sweep(
    params: &SpacetimeParams,
    r_start: f64,
    r_end: f64,
    theta_start: f64,
    fractions: &[f64],
    tol: &Tolerances,
) -> Result<Vec<KappaSweepPoint>> {
    let bound = kappa_max(params, r_start, r_end)?;
    fractions
        .iter()
        .map(|&fr| {
            if !(0.0..1.0).contains(&fr) {
                return Err(WignerError::InvalidParameter(format!("kappa fraction must be in [0, 1), got {fr}")));
            }
            let spec = SegmentSpec { r_start, r_end, theta_start, kappa: fr * bound, eps_theta: Sign::Plus };
            let seg = spec.build(*params)?;
            let num = wigner_phase_numeric_with(&seg, &GaugeChoice::chosen(), tol)?;
            Ok(KappaSweepPoint {
                kappa: spec.kappa,
                delta_theta: seg.theta_at(r_end, tol)? - theta_start,
                numeric: num.phase,
                closed_form: wigner_phase_closed(&seg)?.phase,
                error_estimate: num.error_estimate,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallAnglePoint {
    /// `max(|dtheta|, |dtheta'|) / dtheta_c`.
    pub ratio: f64,
    pub d_theta: f64,
    pub d_theta_prime: f64,
    pub kappa: f64,
    pub kappa_prime: f64,
    /// Relative error of the small-angle `kappa'` estimate.
    pub kappa_rel_error: f64,
    pub phase: f64,
    pub phase_small_angle: f64,
    pub phase_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallAngleStudy {
    pub r_s: f64,
    pub points: Vec<SmallAnglePoint>,
    pub phase_slope: Option<f64>,
    pub kappa_slope: Option<f64>,
}

/// Compares the one-satellite total built from solved `kappa` values with its
/// small-angle form, for `dtheta = a s dtheta_c`, `dtheta' = b s dtheta_c`
/// at each scale `s`.
pub fn small_angle_chain(params: &SpacetimeParams, r_s: f64, a: f64, b: f64, scales: &[f64], tol: &Tolerances) -> Result<SmallAngleStudy> {
    let re = params.surface_radius;
    if a.abs() == b.abs() {
        return Err(WignerError::InvalidParameter("the chain needs |a| != |b|, otherwise both forms vanish".into()));
    }
    let critical = (r_s - re).abs() / r_s.max(re);
    let mut points = Vec::with_capacity(scales.len());
    for &s in scales {
        let (dt, dtp) = (a * s * critical, b * s * critical);
        let kappa = solve_kappa_with(params, re, r_s, dt.abs(), tol)?;
        let kappa_prime = solve_kappa_with(params, r_s, re, dtp.abs(), tol)?;
        let approx = kappa_small_angle(r_s, re, dtp)?;
        let phase = phase_one_satellite(params, r_s, kappa, kappa_prime)?;
        let phase_small_angle = phase_one_satellite_smallangle(params, r_s, dt, dtp);
        points.push(SmallAnglePoint {
            ratio: dt.abs().max(dtp.abs()) / critical,
            d_theta: dt,
            d_theta_prime: dtp,
            kappa,
            kappa_prime,
            kappa_rel_error: ((approx - kappa_prime) / kappa_prime).abs(),
            phase,
            phase_small_angle,
            phase_rel_error: ((phase_small_angle - phase) / phase).abs(),
        });
    }
    let slope = |f: fn(&SmallAnglePoint) -> f64| loglog_fit(&points.iter().map(|p| (p.ratio, f(p))).collect::<Vec<_>>()).map(|f| f.slope);
    Ok(SmallAngleStudy { r_s, phase_slope: slope(|p| p.phase_rel_error), kappa_slope: slope(|p| p.kappa_rel_error), points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> SpacetimeParams {
        SpacetimeParams::new(1e-4, 1.0).unwrap()
    }

    #[test]
    fn rate_remainder_is_third_order() {
        let s = rate_scaling(&unit(), 0.5, 1.3, 0.9, &DEFAULT_MASS_RATIOS).unwrap();
        assert!(s.is_third_order(0.2), "{:?}", s.slope);
        assert!(s.c_bound > 0.0);
    }

    #[test]
    fn segment_remainder_is_third_order() {
        let spec = SegmentSpec { r_start: 1.0, r_end: 3.0, theta_start: 1.0, kappa: 0.4, eps_theta: Sign::Plus };
        let s = segment_scaling(&unit(), &spec, &DEFAULT_MASS_RATIOS, &Tolerances::default()).unwrap();
        assert!(s.is_third_order(0.2), "{:?}", s.slope);
        for p in &s.points {
            assert!(p.difference.abs() <= s.c_bound * p.epsilon.powi(3) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn scheme_remainder_is_third_order() {
        let w = [
            Waypoint::Lab { r: 1.0, theta: 1.0 },
            Waypoint::Satellite { r: 3.0, theta: 1.1, energy_factor: 1.0 },
            Waypoint::Lab { r: 1.0, theta: 1.3 },
            Waypoint::Lab { r: 1.0, theta: 1.0 },
        ];
        let s = scheme_scaling(&unit(), &w, &GaugeChoice::chosen(), &DEFAULT_MASS_RATIOS, &Tolerances::default()).unwrap();
        assert!(s.total.is_third_order(0.2), "{:?}", s.total.slope);
        assert_eq!(s.segments.len(), 2);
        for seg in &s.segments {
            assert!(seg.is_third_order(0.2), "{:?}", seg.slope);
        }
        let zero = scheme_scaling(&unit(), &w, &GaugeChoice::zero(), &DEFAULT_MASS_RATIOS, &Tolerances::default()).unwrap();
        assert!(zero.total.points.iter().all(|p| p.numeric == 0.0 && p.closed_form == 0.0));
        assert_eq!(zero.total.slope, None);
    }

    #[test]
    fn scaling_input_checks() {
        let f = |_: &SpacetimeParams| Ok((0.0, 0.0, 0.0));
        assert!(epsilon_scaling(&unit(), &[1e-3], ScalingQuantity::Rate, f).is_err());
        assert!(epsilon_scaling(&unit(), &[1e-3, 0.7], ScalingQuantity::Rate, f).is_err());
        let zero = epsilon_scaling(&unit(), &[1e-3, 1e-4], ScalingQuantity::Rate, f).unwrap();
        assert_eq!(zero.slope, None);
        assert_eq!(zero.c_bound, 0.0);
    }

    #[test]
    fn kappa_sweep_tracks_closed_form() {
        let p = unit();
        // Near kappa_max the closed form's K(kappa) blows up as kappa -> R^2,
        // so the remainder coefficient grows; stay in the regular regime.
        let pts = kappa_sweep(&p, 1.0, 3.0, 1.0, &[0.0, 0.1, 0.3, 0.5], &Tolerances::default()).unwrap();
        assert_eq!(pts[0].numeric, 0.0);
        assert_eq!(pts[0].delta_theta, 0.0);
        for w in pts.windows(2) {
            assert!(w[1].delta_theta > w[0].delta_theta);
        }
        for pt in &pts {
            assert!((pt.numeric - pt.closed_form).abs() < 10.0 * p.epsilon().powi(3), "{pt:?}");
        }
        assert!(kappa_sweep(&p, 1.0, 3.0, 1.0, &[1.0], &Tolerances::default()).is_err());
    }

    #[test]
    fn small_angle_chain_converges() {
        let p = SpacetimeParams::earth();
        let scales = [1e-1, 1e-2, 1e-3, 1e-4];
        let s = small_angle_chain(&p, 4.216e7, 0.5, 1.0, &scales, &Tolerances::default()).unwrap();
        for w in s.points.windows(2) {
            assert!(w[1].phase_rel_error < w[0].phase_rel_error, "{:?}", s.points);
        }
        assert!(s.phase_slope.unwrap() > 0.8, "{:?}", s.phase_slope);
        assert!(s.kappa_slope.unwrap() > 0.8, "{:?}", s.kappa_slope);
        assert!(small_angle_chain(&p, 4.216e7, 1.0, -1.0, &scales, &Tolerances::default()).is_err());
    }
}
