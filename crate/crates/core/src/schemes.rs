//! Closed Earth–satellite–Earth light paths.
//!
//! A path is a list of waypoints (laboratories on the surface and reflecting
//! satellites) traversed in order. Consecutive waypoints at different radii
//! are joined by a constant-longitude geodesic; two laboratories on the
//! surface are joined by a ground link that carries no phase. Reflections
//! only reset the directional constants and, for satellites, rescale the
//! photon energy; helicity is left untouched at the mirror.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WignerError};
use crate::frames::{GaugeChoice, GaugeFunction};
use crate::geodesics::{solve_kappa_with, GeodesicSegment, NullConstants, Sign};
use crate::geometry::SpacetimeParams;
use crate::numerics::Tolerances;
use crate::transport::{k_term, wigner_phase_closed, wigner_phase_numeric_with, PhaseMethod, PhaseResult};

/// Endpoint mismatch tolerated between consecutive legs, in radians and in
/// units of the radius.
const JOIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReflectorKind {
    StaticMirror,
    OrbitingSatellite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionEvent {
    pub r: f64,
    pub theta: f64,
    pub kind: ReflectorKind,
    /// Multiplicative change of `E_p`; always 1 for a static mirror.
    pub energy_factor: f64,
}

impl ReflectionEvent {
    pub fn static_mirror(r: f64, theta: f64) -> Self {
        Self { r, theta, kind: ReflectorKind::StaticMirror, energy_factor: 1.0 }
    }

    pub fn satellite(r: f64, theta: f64, energy_factor: f64) -> Result<Self> {
        if !(energy_factor > 0.0 && energy_factor.is_finite()) {
            return Err(WignerError::InvalidParameter(format!("energy factor must be > 0, got {energy_factor}")));
        }
        Ok(Self { r, theta, kind: ReflectorKind::OrbitingSatellite, energy_factor })
    }
}

/// Outgoing constants after a reflection at `event` aimed at `next_target = (r, theta)`.
pub fn reflect(
    params: &SpacetimeParams,
    incoming: &NullConstants,
    event: &ReflectionEvent,
    next_target: (f64, f64),
) -> Result<NullConstants> {
    reflect_with(params, incoming, event, next_target, &Tolerances::default())
}

pub fn reflect_with(
    params: &SpacetimeParams,
    incoming: &NullConstants,
    event: &ReflectionEvent,
    next_target: (f64, f64),
    tol: &Tolerances,
) -> Result<NullConstants> {
    if event.kind == ReflectorKind::StaticMirror && event.energy_factor != 1.0 {
        return Err(WignerError::InvalidParameter("a static mirror does not change the photon energy".into()));
    }
    let d_theta = next_target.1 - event.theta;
    let kappa = solve_kappa_with(params, event.r, next_target.0, d_theta.abs(), tol)?;
    NullConstants::new(incoming.energy * event.energy_factor, 0.0, kappa, Sign::of(next_target.0 - event.r), Sign::of(d_theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Waypoint {
    /// A laboratory with a static mirror at radius `r`.
    Lab { r: f64, theta: f64 },
    /// A reflecting satellite at radius `r`.
    Satellite {
        r: f64,
        theta: f64,
        #[serde(default = "unit")]
        energy_factor: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl Waypoint {
    pub fn position(&self) -> (f64, f64) {
        match *self {
            Waypoint::Lab { r, theta } | Waypoint::Satellite { r, theta, .. } => (r, theta),
        }
    }

    fn event(&self) -> Result<ReflectionEvent> {
        match *self {
            Waypoint::Lab { r, theta } => Ok(ReflectionEvent::static_mirror(r, theta)),
            Waypoint::Satellite { r, theta, energy_factor } => ReflectionEvent::satellite(r, theta, energy_factor),
        }
    }
}

/// One leg of a path.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Leg {
    Geodesic {
        segment: GeodesicSegment,
    },
    /// Surface-to-surface link, treated as a zero-length connector.
    GroundLink {
        from: (f64, f64),
        to: (f64, f64),
    },
}

impl Leg {
    fn endpoints(&self) -> Result<((f64, f64), (f64, f64))> {
        match self {
            Leg::Geodesic { segment } => Ok(((segment.r_start, segment.theta_start), (segment.r_end, segment.theta_end()?))),
            Leg::GroundLink { from, to } => Ok((*from, *to)),
        }
    }
}

/// The geometry of a path matching one of the two standard schemes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "template", rename_all = "snake_case")]
pub enum SchemeTemplate {
    OneSatellite { r_s: f64, kappa: f64, kappa_prime: f64 },
    TwoSatellites { r_s1: f64, r_s2: f64, kappa: f64, kappa_prime: f64, kappa_double_prime: f64 },
}

impl SchemeTemplate {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeTemplate::OneSatellite { .. } => "one_satellite",
            SchemeTemplate::TwoSatellites { .. } => "two_satellites",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemePath {
    pub params: SpacetimeParams,
    pub legs: Vec<Leg>,
    /// Reflection at the end of each leg except, for open paths, the last.
    pub reflections: Vec<ReflectionEvent>,
    pub closed: bool,
}

impl SchemePath {
    /// Builds the path through `waypoints`, solving each geodesic's `kappa`.
    /// A path whose last waypoint repeats the first is closed.
    pub fn from_waypoints(params: SpacetimeParams, energy: f64, waypoints: &[Waypoint], phi0: f64) -> Result<Self> {
        Self::from_waypoints_with(params, energy, waypoints, phi0, &Tolerances::default())
    }

    pub fn from_waypoints_with(params: SpacetimeParams, energy: f64, waypoints: &[Waypoint], phi0: f64, tol: &Tolerances) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(WignerError::InvalidParameter("a path needs at least two waypoints".into()));
        }
        if !(energy > 0.0) {
            return Err(WignerError::InvalidParameter(format!("photon energy must be > 0, got {energy}")));
        }
        let closed = waypoints.first().map(Waypoint::position) == waypoints.last().map(Waypoint::position);
        let mut legs = Vec::with_capacity(waypoints.len() - 1);
        let mut reflections = Vec::new();
        let mut e = energy;
        for (i, pair) in waypoints.windows(2).enumerate() {
            let (from, to) = (pair[0].position(), pair[1].position());
            if i > 0 {
                let ev = pair[0].event()?;
                e *= ev.energy_factor;
                reflections.push(ev);
            }
            let leg = match (pair[0], pair[1]) {
                (Waypoint::Lab { .. }, Waypoint::Lab { .. }) if from.0 == to.0 => Leg::GroundLink { from, to },
                _ => Leg::Geodesic {
                    segment: GeodesicSegment::between_with(params, e, from, to, phi0, tol).map_err(|err| err.in_segment(i))?,
                },
            };
            legs.push(leg);
        }
        if closed {
            reflections.push(waypoints[waypoints.len() - 1].event()?);
        }
        let path = Self { params, legs, reflections, closed };
        path.validate()?;
        Ok(path)
    }

    /// Emitter at `lab_a`, satellite at `(r_s, theta_s)`, receiver at `lab_b`,
    /// then back to the emitter over the ground.
    pub fn one_satellite(params: SpacetimeParams, energy: f64, lab_a: f64, sat: (f64, f64), lab_b: f64, phi0: f64) -> Result<Self> {
        let re = params.surface_radius;
        Self::from_waypoints(
            params,
            energy,
            &[
                Waypoint::Lab { r: re, theta: lab_a },
                Waypoint::Satellite { r: sat.0, theta: sat.1, energy_factor: 1.0 },
                Waypoint::Lab { r: re, theta: lab_b },
                Waypoint::Lab { r: re, theta: lab_a },
            ],
            phi0,
        )
    }

    /// Emitter, first satellite, second satellite, then either straight back
    /// (`lab_b = None`) or via a second laboratory.
    pub fn two_satellites(
        params: SpacetimeParams,
        energy: f64,
        lab_a: f64,
        sat1: (f64, f64),
        sat2: (f64, f64),
        lab_b: Option<f64>,
        phi0: f64,
    ) -> Result<Self> {
        let re = params.surface_radius;
        let mut w = vec![
            Waypoint::Lab { r: re, theta: lab_a },
            Waypoint::Satellite { r: sat1.0, theta: sat1.1, energy_factor: 1.0 },
            Waypoint::Satellite { r: sat2.0, theta: sat2.1, energy_factor: 1.0 },
        ];
        if let Some(b) = lab_b {
            w.push(Waypoint::Lab { r: re, theta: b });
        }
        w.push(Waypoint::Lab { r: re, theta: lab_a });
        Self::from_waypoints(params, energy, &w, phi0)
    }

    pub fn segments(&self) -> impl Iterator<Item = &GeodesicSegment> {
        self.legs.iter().filter_map(|l| match l {
            Leg::Geodesic { segment } => Some(segment),
            Leg::GroundLink { .. } => None,
        })
    }

    /// Checks that legs join up, that a closed path returns to its start, and
    /// that the closing mirror restores the first leg's direction.
    pub fn validate(&self) -> Result<()> {
        if self.legs.is_empty() {
            return Err(WignerError::InvalidParameter("path has no legs".into()));
        }
        let ends: Vec<_> = self.legs.iter().map(Leg::endpoints).collect::<Result<_>>()?;
        let near = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() <= JOIN_TOL * a.0.abs() && (a.1 - b.1).abs() <= JOIN_TOL;
        for (i, w) in ends.windows(2).enumerate() {
            if !near(w[0].1, w[1].0) {
                return Err(WignerError::InvalidParameter(format!("leg {} does not start where leg {i} ends", i + 1)));
            }
        }
        let expected = if self.closed { self.legs.len() } else { self.legs.len() - 1 };
        if self.reflections.len() != expected {
            return Err(WignerError::InvalidParameter(format!("expected {expected} reflection events, found {}", self.reflections.len())));
        }
        if self.closed {
            if !near(ends[ends.len() - 1].1, ends[0].0) {
                return Err(WignerError::InvalidParameter("closed path does not return to its start".into()));
            }
            if let Some(first) = self.segments().next() {
                let mirror = self.reflections[self.reflections.len() - 1];
                let restored = reflect(&self.params, &first.consts, &mirror, (first.r_end, first.theta_end()?))?;
                let f = &first.consts;
                if restored.eps_r != f.eps_r
                    || restored.eps_theta != f.eps_theta
                    || (restored.kappa - f.kappa).abs() > JOIN_TOL * f.kappa.max(f64::MIN_POSITIVE)
                {
                    return Err(WignerError::InvalidParameter("closing mirror does not restore the initial direction".into()));
                }
            }
        }
        Ok(())
    }

    /// The matching standard scheme, if any.
    pub fn template(&self) -> Option<SchemeTemplate> {
        if !self.closed {
            return None;
        }
        let re = self.params.surface_radius;
        let segs: Vec<&GeodesicSegment> = self.segments().collect();
        let on_surface = |r: f64| r == re;
        match segs.as_slice() {
            [up, down] if on_surface(up.r_start) && on_surface(down.r_end) && up.r_end == down.r_start && up.r_end > re => {
                Some(SchemeTemplate::OneSatellite { r_s: up.r_end, kappa: up.consts.kappa, kappa_prime: down.consts.kappa })
            }
            [up, cross, down]
                if on_surface(up.r_start)
                    && on_surface(down.r_end)
                    && up.r_end == cross.r_start
                    && cross.r_end == down.r_start
                    && up.r_end > re
                    && down.r_start > re =>
            {
                Some(SchemeTemplate::TwoSatellites {
                    r_s1: up.r_end,
                    r_s2: down.r_start,
                    kappa: up.consts.kappa,
                    kappa_prime: cross.consts.kappa,
                    kappa_double_prime: down.consts.kappa,
                })
            }
            _ => None,
        }
    }

    /// Lowest-order total of the matching template.
    pub fn template_total(&self) -> Result<f64> {
        match self.template() {
            Some(t) => template_phase(&self.params, &t),
            None => Err(WignerError::SchemeTemplateMismatch("one_satellite or two_satellites".into())),
        }
    }
}

/// Lowest-order total phase for a template geometry.
pub fn template_phase(params: &SpacetimeParams, t: &SchemeTemplate) -> Result<f64> {
    match *t {
        SchemeTemplate::OneSatellite { r_s, kappa, kappa_prime } => phase_one_satellite(params, r_s, kappa, kappa_prime),
        SchemeTemplate::TwoSatellites { r_s1, r_s2, kappa, kappa_prime, kappa_double_prime } => {
            phase_two_satellites(params, r_s1, r_s2, kappa, kappa_prime, kappa_double_prime)
        }
    }
}

fn delta_k(radius: f64, y: f64, z: f64) -> Result<f64> {
    Ok(k_term(radius, y)? - k_term(radius, z)?)
}

/// `[sqrt(R_E/R_s) dK_s(kappa, kappa') + dK_E(kappa', kappa)] eps`.
pub fn phase_one_satellite(params: &SpacetimeParams, r_s: f64, kappa: f64, kappa_prime: f64) -> Result<f64> {
    let re = params.surface_radius;
    Ok(((re / r_s).sqrt() * delta_k(r_s, kappa, kappa_prime)? + delta_k(re, kappa_prime, kappa)?) * params.epsilon())
}

/// `[sqrt(R_E/R_s2) dK_s2(kappa', kappa'') + sqrt(R_E/R_s1) dK_s1(kappa, kappa') + dK_E(kappa'', kappa)] eps`.
pub fn phase_two_satellites(
    params: &SpacetimeParams,
    r_s1: f64,
    r_s2: f64,
    kappa: f64,
    kappa_prime: f64,
    kappa_double_prime: f64,
) -> Result<f64> {
    let re = params.surface_radius;
    let total = (re / r_s2).sqrt() * delta_k(r_s2, kappa_prime, kappa_double_prime)?
        + (re / r_s1).sqrt() * delta_k(r_s1, kappa, kappa_prime)?
        + delta_k(re, kappa_double_prime, kappa)?;
    Ok(total * params.epsilon())
}

/// Small-angle form of the one-satellite phase,
/// `sqrt(2) (|dtheta'| - |dtheta|) (1 - (R_E/R_s)^{3/2}) / (1 - R_E/R_s) eps`.
pub fn phase_one_satellite_smallangle(params: &SpacetimeParams, r_s: f64, d_theta: f64, d_theta_prime: f64) -> f64 {
    let x = params.surface_radius / r_s;
    std::f64::consts::SQRT_2 * (d_theta_prime.abs() - d_theta.abs()) * (1.0 - x.powf(1.5)) / (1.0 - x) * params.epsilon()
}

/// `max(|dtheta|, |dtheta'|) / dtheta_c` with `dtheta_c = (R_s - R_E) / R_s`;
/// the small-angle form needs this to be small.
pub fn small_angle_ratio(params: &SpacetimeParams, r_s: f64, d_theta: f64, d_theta_prime: f64) -> f64 {
    let critical = (r_s - params.surface_radius).abs() / r_s.max(params.surface_radius);
    d_theta.abs().max(d_theta_prime.abs()) / critical
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentPhase {
    pub index: usize,
    pub r_start: f64,
    pub r_end: f64,
    pub theta_start: f64,
    pub theta_end: f64,
    pub kappa: f64,
    pub energy: f64,
    pub numeric: PhaseResult,
    /// Lowest-order segment phase in the same gauge, when one is known.
    pub closed_form: Option<PhaseResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemePhaseBreakdown {
    pub segments: Vec<SegmentPhase>,
    pub template: Option<SchemeTemplate>,
    /// Sum of the numeric segment phases.
    pub total: f64,
    /// Sum of the segment error estimates.
    pub total_error: f64,
    /// Template total (or sum of segment closed forms) in the evaluated gauge.
    pub closed_form_total: Option<f64>,
}

/// Lowest-order segment phase in `gauge`, when known in closed form.
fn closed_segment(seg: &GeodesicSegment, gauge: &GaugeChoice) -> Result<Option<PhaseResult>> {
    let zero = |g: &GaugeChoice| PhaseResult { phase: 0.0, method: PhaseMethod::ClosedForm, gauge: g.clone(), error_estimate: 0.0 };
    Ok(match gauge.b {
        GaugeFunction::Chosen if gauge.eta1 == Sign::Plus && gauge.eta2 == Sign::Plus => Some(wigner_phase_closed(seg)?),
        GaugeFunction::Zero | GaugeFunction::PlusInvR | GaugeFunction::MinusInvR => Some(zero(gauge)),
        _ => None,
    })
}

/// Numeric phase of every geodesic leg, their sum, and the closed-form total.
pub fn evaluate_scheme(path: &SchemePath, gauge: &GaugeChoice) -> Result<SchemePhaseBreakdown> {
    evaluate_scheme_with(path, gauge, &Tolerances::default())
}

pub fn evaluate_scheme_with(path: &SchemePath, gauge: &GaugeChoice, tol: &Tolerances) -> Result<SchemePhaseBreakdown> {
    let mut segments = Vec::new();
    for (index, leg) in path.legs.iter().enumerate() {
        let Leg::Geodesic { segment } = leg else { continue };
        let run = || -> Result<SegmentPhase> {
            Ok(SegmentPhase {
                index,
                r_start: segment.r_start,
                r_end: segment.r_end,
                theta_start: segment.theta_start,
                theta_end: segment.theta_end()?,
                kappa: segment.consts.kappa,
                energy: segment.consts.energy,
                numeric: wigner_phase_numeric_with(segment, gauge, tol)?,
                closed_form: closed_segment(segment, gauge)?,
            })
        };
        segments.push(run().map_err(|e| e.in_segment(index))?);
    }
    let total = segments.iter().map(|s| s.numeric.phase).sum();
    let total_error = segments.iter().map(|s| s.numeric.error_estimate).sum();
    let template = path.template();
    let closed_form_total = match (&template, segments.iter().all(|s| s.closed_form.is_some())) {
        (_, false) => None,
        (Some(t), true) if gauge.is_default_chosen() => Some(template_phase(&path.params, t)?),
        (_, true) => Some(segments.iter().filter_map(|s| s.closed_form.as_ref()).map(|c| c.phase).sum()),
    };
    Ok(SchemePhaseBreakdown { segments, template, total, total_error, closed_form_total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SpacetimeParams {
        SpacetimeParams::new(1e-4, 1.0).unwrap()
    }

    /// Segment-wise lowest-order sum, independent of the template formulas.
    fn segment_sum(p: &SpacetimeParams, legs: &[(f64, f64, f64)]) -> f64 {
        let g = |r: f64, k: f64| (p.surface_radius / r).sqrt() * (2.0 * k / (r * r - k)).sqrt();
        legs.iter().map(|&(r1, r2, k)| (g(r2, k) - g(r1, k)) * p.epsilon()).sum()
    }

    #[test]
    fn one_satellite_formula_matches_segment_sum() {
        let p = params();
        let (rs, k, kp) = (3.0, 0.2, 0.35);
        let direct = phase_one_satellite(&p, rs, k, kp).unwrap();
        let oracle = segment_sum(&p, &[(1.0, rs, k), (rs, 1.0, kp)]);
        assert!((direct - oracle).abs() < 1e-16);
        assert_eq!(phase_one_satellite(&p, rs, k, k).unwrap(), 0.0);
        let kx = |r: f64, y: f64| (2.0 * y / (r * r - y)).sqrt();
        let below = phase_one_satellite(&p, rs, k, 0.0).unwrap();
        assert!((below - ((1.0 / rs).sqrt() * kx(rs, k) - kx(1.0, k)) * p.epsilon()).abs() < 1e-16);
    }

    #[test]
    fn two_satellite_formula_matches_segment_sum() {
        let p = params();
        let direct = phase_two_satellites(&p, 2.0, 4.0, 0.1, 0.6, 0.3).unwrap();
        let oracle = segment_sum(&p, &[(1.0, 2.0, 0.1), (2.0, 4.0, 0.6), (4.0, 1.0, 0.3)]);
        assert!((direct - oracle).abs() < 1e-16);
        assert_eq!(phase_two_satellites(&p, 2.0, 4.0, 0.0, 0.0, 0.0).unwrap(), 0.0);
        // equal satellite radii: the middle term telescopes away
        let eq = phase_two_satellites(&p, 3.0, 3.0, 0.2, 0.9, 0.2).unwrap();
        assert!(eq.abs() < 1e-18);
    }

    #[test]
    fn small_angle_symmetry_is_exact() {
        let p = SpacetimeParams::earth();
        assert_eq!(phase_one_satellite_smallangle(&p, 4.216e7, 0.01, -0.01), 0.0);
        assert_eq!(phase_one_satellite_smallangle(&p, 4.216e7, 0.0, 0.0), 0.0);
    }

    #[test]
    fn geostationary_example_value() {
        // sqrt(2) * 0.01 * (1 - x^1.5) / (1 - x) * eps with x = R_E / R_s
        let p = SpacetimeParams::new(4.435e-3, 6.371e6).unwrap();
        let v = phase_one_satellite_smallangle(&p, 4.216e7, 0.0, 0.01);
        assert!((v - 4.137e-7).abs() < 1e-10, "{v}");
    }

    #[test]
    fn reflection_rules() {
        let p = params();
        let c = NullConstants::planar(2.0, 0.1, Sign::Plus, Sign::Plus).unwrap();
        let sat = ReflectionEvent::satellite(3.0, 1.2, 0.9).unwrap();
        let out = reflect(&p, &c, &sat, (1.0, 1.5)).unwrap();
        assert_eq!(out.energy, 1.8);
        assert_eq!((out.eps_r, out.eps_theta), (Sign::Minus, Sign::Plus));
        // retro-reflection to the origin keeps kappa and flips both signs
        let seg = GeodesicSegment::between(p, 2.0, (1.0, 1.0), (3.0, 1.2), 0.0).unwrap();
        let back = reflect(&p, &seg.consts, &ReflectionEvent::static_mirror(3.0, 1.2), (1.0, 1.0)).unwrap();
        assert_eq!(back.kappa, seg.consts.kappa);
        assert_eq!((back.eps_r, back.eps_theta), (Sign::Minus, Sign::Minus));
        let bad = ReflectionEvent { energy_factor: 2.0, ..ReflectionEvent::static_mirror(1.0, 1.0) };
        assert!(reflect(&p, &c, &bad, (3.0, 1.0)).is_err());
    }

    #[test]
    fn one_satellite_path_structure() {
        let p = params();
        let path = SchemePath::one_satellite(p, 1.0, 1.0, (3.0, 1.1), 1.3, 0.0).unwrap();
        assert_eq!(path.legs.len(), 3);
        assert!(matches!(path.legs[2], Leg::GroundLink { .. }));
        assert_eq!(path.reflections.len(), 3);
        assert!(path.closed);
        let Some(SchemeTemplate::OneSatellite { r_s, kappa, kappa_prime }) = path.template() else { panic!() };
        assert_eq!(r_s, 3.0);
        assert!(kappa_prime > kappa);
    }

    #[test]
    fn open_path_has_no_template() {
        let p = params();
        let path = SchemePath::from_waypoints(
            p,
            1.0,
            &[Waypoint::Lab { r: 1.0, theta: 1.0 }, Waypoint::Satellite { r: 3.0, theta: 1.1, energy_factor: 1.0 }],
            0.0,
        )
        .unwrap();
        assert!(!path.closed);
        assert!(matches!(path.template_total(), Err(WignerError::SchemeTemplateMismatch(_))));
        let b = evaluate_scheme(&path, &GaugeChoice::chosen()).unwrap();
        assert_eq!(b.closed_form_total, Some(b.segments[0].closed_form.as_ref().unwrap().phase));
    }

    #[test]
    fn retro_reflection_gives_zero_total() {
        let p = params();
        let w = [
            Waypoint::Lab { r: 1.0, theta: 1.0 },
            Waypoint::Satellite { r: 3.0, theta: 1.2, energy_factor: 1.0 },
            Waypoint::Lab { r: 1.0, theta: 1.0 },
        ];
        let path = SchemePath::from_waypoints(p, 1.0, &w, 0.0).unwrap();
        let b = evaluate_scheme(&path, &GaugeChoice::chosen()).unwrap();
        assert!(b.total.abs() <= 3.0 * b.total_error + 1e-18, "{}", b.total);
        assert_eq!(b.closed_form_total, Some(0.0));
    }

    #[test]
    fn closed_path_is_nonzero_in_chosen_gauge_only() {
        let p = params();
        let path = SchemePath::one_satellite(p, 1.0, 1.0, (3.0, 1.1), 1.3, 0.0).unwrap();
        let chosen = evaluate_scheme(&path, &GaugeChoice::chosen()).unwrap();
        assert!(chosen.total.abs() > 10.0 * chosen.total_error);
        let cf = chosen.closed_form_total.unwrap();
        assert!((chosen.total - cf).abs() < 10.0 * p.epsilon().powi(3), "{} vs {cf}", chosen.total);
        let zero = evaluate_scheme(&path, &GaugeChoice::zero()).unwrap();
        assert!(zero.total.abs() <= zero.total_error.max(1e-15));
        assert_eq!(zero.closed_form_total, Some(0.0));
    }

    #[test]
    fn satellite_energy_does_not_change_phases() {
        let p = params();
        let mk = |f: f64| {
            SchemePath::from_waypoints(
                p,
                1.0,
                &[
                    Waypoint::Lab { r: 1.0, theta: 1.0 },
                    Waypoint::Satellite { r: 3.0, theta: 1.1, energy_factor: f },
                    Waypoint::Lab { r: 1.0, theta: 1.3 },
                    Waypoint::Lab { r: 1.0, theta: 1.0 },
                ],
                0.0,
            )
            .unwrap()
        };
        let (a, b) = (mk(1.0), mk(0.999_999_9));
        let (ea, eb) = (evaluate_scheme(&a, &GaugeChoice::chosen()).unwrap(), evaluate_scheme(&b, &GaugeChoice::chosen()).unwrap());
        assert_eq!(ea.total, eb.total);
        assert_ne!(ea.segments[1].energy, eb.segments[1].energy);
    }

    #[test]
    fn direct_return_matches_two_lab_variant() {
        let p = params();
        let direct = SchemePath::two_satellites(p, 1.0, 1.0, (2.0, 1.1), (4.0, 1.3), None, 0.0).unwrap();
        let via = SchemePath::two_satellites(p, 1.0, 1.0, (2.0, 1.1), (4.0, 1.3), Some(1.0), 0.0);
        // a second lab at the same spot degenerates into a zero-length ground link
        let via = via.unwrap();
        let a = evaluate_scheme(&direct, &GaugeChoice::chosen()).unwrap();
        let b = evaluate_scheme(&via, &GaugeChoice::chosen()).unwrap();
        assert_eq!(a.total, b.total);
        assert_eq!(a.closed_form_total, b.closed_form_total);
        assert!(matches!(direct.template(), Some(SchemeTemplate::TwoSatellites { .. })));
    }

    #[test]
    fn radial_scheme_has_zero_phase() {
        let p = params();
        let path = SchemePath::two_satellites(p, 1.0, 1.0, (2.0, 1.0), (4.0, 1.0), None, 0.0).unwrap();
        for g in [GaugeChoice::chosen(), GaugeChoice::zero(), GaugeChoice::plus_inv_r()] {
            let b = evaluate_scheme(&path, &g).unwrap();
            assert_eq!(b.total, 0.0);
            assert_eq!(b.closed_form_total, Some(0.0));
        }
    }

    #[test]
    fn equal_radius_satellites_are_rejected() {
        let p = params();
        let r = SchemePath::two_satellites(p, 1.0, 1.0, (3.0, 1.1), (3.0, 1.3), None, 0.0);
        assert!(matches!(r, Err(WignerError::InSegment { index: 1, .. })));
    }
}
