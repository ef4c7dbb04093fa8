//! Wigner rotation rate, segment phases and polarization transport.
//!
//! The rate is `g(e1, nabla_u e2)` where `u = k / k^0hat` is the tangent
//! normalised by the static observer's frequency. Derivatives of the frame
//! legs along `u` come from dual numbers, so the numeric rate carries no
//! finite-difference error. All radial integrals use `r = r_min + t^2`,
//! which keeps integrands bounded at a radial turning point.

use serde::{Deserialize, Serialize};

use crate::dual::Dual;
use crate::error::{Result, WignerError};
use crate::frames::{transverse_legs, GaugeChoice, PolarizationState};
use crate::geodesics::{rescaled_tangent, GeodesicSegment, NullConstants};
use crate::geometry::{christoffel_at, metric_at, FourVector, Point, SpacetimeParams};
use crate::numerics::{ode, quadrature, Tolerances};

/// Rate at one radius along a segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WignerRotationSample {
    pub r: f64,
    pub theta: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    /// Adaptive quadrature of the exact rate.
    Numeric,
    /// Lowest-order closed form.
    ClosedForm,
    /// Quadrature of the lowest-order rate.
    PerturbativeRate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseResult {
    pub phase: f64,
    pub method: PhaseMethod,
    pub gauge: GaugeChoice,
    /// Absolute error estimate of the evaluation itself; zero for closed forms.
    pub error_estimate: f64,
}

/// Connection matrix `w[A][B] = g(e_A, nabla_u e_B)` for `A, B` in `{1, 2}`.
pub fn wigner_connection(params: &SpacetimeParams, c: &NullConstants, p: &Point, gauge: &GaugeChoice) -> Result<[[f64; 2]; 2]> {
    let u = FourVector(rescaled_tangent(params, c, p.r, p.theta)?);
    // The legs do not depend on t or phi, so seeding r and theta is enough.
    let legs = transverse_legs(params, c, gauge, Dual::new(p.r, u[1]), Dual::new(p.theta, u[2]))?;
    let e = legs.map(|leg| FourVector(leg.map(|x| x.re)));
    let de = legs.map(|leg| FourVector(leg.map(|x| x.eps)));
    let gamma = christoffel_at(params, p)?;
    let g = metric_at(params, p)?;
    let nabla = [0, 1].map(|b| de[b].plus(&gamma.contract(&u, &e[b])));
    Ok([[g.dot(&e[0], &nabla[0]), g.dot(&e[0], &nabla[1])], [g.dot(&e[1], &nabla[0]), g.dot(&e[1], &nabla[1])]])
}

fn require_planar(c: &NullConstants) -> Result<()> {
    if c.l_phi != 0.0 {
        return Err(WignerError::InvalidParameter(format!(
            "the Wigner rate is defined here for constant-phi rays only, got l_phi = {}",
            c.l_phi
        )));
    }
    Ok(())
}

/// Exact Wigner rotation rate `u^mu w_mu^1_2` at a point of a constant-phi ray.
pub fn wigner_rate_numeric(params: &SpacetimeParams, c: &NullConstants, p: &Point, gauge: &GaugeChoice) -> Result<f64> {
    require_planar(c)?;
    Ok(wigner_connection(params, c, p, gauge)?[0][1])
}

/// Lowest-order rate in the chosen gauge:
/// `-(eps_r / r) (3r^2 - kappa) / (r^2 - kappa) sqrt(kappa R_E / (2 r^3)) eps`.
pub fn wigner_rate_perturbative(params: &SpacetimeParams, c: &NullConstants, r: f64) -> Result<f64> {
    params.check_radius(r)?;
    let k = c.kappa;
    if k >= r * r {
        return Err(WignerError::DegenerateKappa { kappa: k, bound: r * r });
    }
    let shape = (3.0 * r * r - k) / (r * r - k) * (k * params.surface_radius / (2.0 * r * r * r)).sqrt();
    Ok(-c.eps_r.value() / r * shape * params.epsilon())
}

/// `K_X(y) = sqrt(2 y / (R_X^2 - y))`, the building block of the closed forms.
pub fn k_term(radius: f64, y: f64) -> Result<f64> {
    let r2 = radius * radius;
    if !(y >= 0.0) || y >= r2 {
        return Err(WignerError::DegenerateKappa { kappa: y, bound: r2 });
    }
    Ok((2.0 * y / (r2 - y)).sqrt())
}

/// Lowest-order segment phase
/// `[sqrt(R_E/R2) K_2(kappa) - sqrt(R_E/R1) K_1(kappa)] eps` with `R1 = r_start`, `R2 = r_end`.
pub fn wigner_phase_closed(seg: &GeodesicSegment) -> Result<PhaseResult> {
    let p = &seg.params;
    let g = |r: f64| -> Result<f64> { Ok((p.surface_radius / r).sqrt() * k_term(r, seg.consts.kappa)?) };
    let phase = if seg.consts.kappa == 0.0 { 0.0 } else { (g(seg.r_end)? - g(seg.r_start)?) * p.epsilon() };
    Ok(PhaseResult { phase, method: PhaseMethod::ClosedForm, gauge: GaugeChoice::chosen(), error_estimate: 0.0 })
}

/// `theta` at radius `r` along the segment, and the rate there divided by `u^r`.
fn rate_per_radius(seg: &GeodesicSegment, gauge: &GaugeChoice, r: f64, tol: &Tolerances) -> Result<f64> {
    let theta = seg.theta_at(r, tol)?;
    let p = Point::spatial(r, theta, seg.phi0);
    let u = rescaled_tangent(&seg.params, &seg.consts, r, theta)?;
    let rate = wigner_rate_numeric(&seg.params, &seg.consts, &p, gauge)?;
    if rate == 0.0 {
        return Ok(0.0);
    }
    Ok(rate / u[1])
}

/// Integrates `h(r) dr` from `a` to `b` inside the segment using `r = r_min + t^2`.
fn integrate_radial<F>(seg: &GeodesicSegment, a: f64, b: f64, tol: &Tolerances, mut h: F) -> Result<quadrature::QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r_min = seg.r_min();
    let mut failure = None;
    let mut q = quadrature::integrate(
        |t| {
            if failure.is_some() {
                return 0.0;
            }
            match h(r_min + t * t) {
                Ok(v) => 2.0 * t * v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        (a - r_min).max(0.0).sqrt(),
        (b - r_min).max(0.0).sqrt(),
        tol.quad(),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    q.abs_error = q.abs_error.abs();
    Ok(q)
}

/// Numeric segment phase `int rate dr / u^r` between radii `a` and `b` of the segment.
pub fn wigner_phase_between(seg: &GeodesicSegment, gauge: &GaugeChoice, a: f64, b: f64, tol: &Tolerances) -> Result<PhaseResult> {
    let q = integrate_radial(seg, a, b, tol, |r| rate_per_radius(seg, gauge, r, tol))?;
    Ok(PhaseResult { phase: q.value, method: PhaseMethod::Numeric, gauge: gauge.clone(), error_estimate: q.abs_error })
}

/// Numeric phase along the whole segment.
pub fn wigner_phase_numeric(seg: &GeodesicSegment, gauge: &GaugeChoice) -> Result<PhaseResult> {
    wigner_phase_numeric_with(seg, gauge, &Tolerances::default())
}

pub fn wigner_phase_numeric_with(seg: &GeodesicSegment, gauge: &GaugeChoice, tol: &Tolerances) -> Result<PhaseResult> {
    require_planar(&seg.consts)?;
    if seg.consts.kappa == 0.0 {
        // The rate vanishes identically on radial rays; still validate the gauge at both ends.
        rate_per_radius(seg, gauge, seg.r_start, tol)?;
        rate_per_radius(seg, gauge, seg.r_end, tol)?;
        return Ok(PhaseResult { phase: 0.0, method: PhaseMethod::Numeric, gauge: gauge.clone(), error_estimate: 0.0 });
    }
    wigner_phase_between(seg, gauge, seg.r_start, seg.r_end, tol)
}

/// Quadrature of the lowest-order rate against the exact `u^r`.
pub fn wigner_phase_perturbative_rate(seg: &GeodesicSegment, tol: &Tolerances) -> Result<PhaseResult> {
    let q = integrate_radial(seg, seg.r_start, seg.r_end, tol, |r| {
        let u = rescaled_tangent(&seg.params, &seg.consts, r, seg.theta_start)?;
        Ok(wigner_rate_perturbative(&seg.params, &seg.consts, r)? / u[1])
    })?;
    Ok(PhaseResult { phase: q.value, method: PhaseMethod::PerturbativeRate, gauge: GaugeChoice::chosen(), error_estimate: q.abs_error })
}

/// Rate samples at `n` equally spaced radii.
pub fn rate_profile(seg: &GeodesicSegment, gauge: &GaugeChoice, n: usize) -> Result<Vec<WignerRotationSample>> {
    let tol = Tolerances::default();
    crate::geodesics::sample_segment_with(seg, n, &tol)?
        .into_iter()
        .map(|p| Ok(WignerRotationSample { r: p.r, theta: p.theta, rate: wigner_rate_numeric(&seg.params, &seg.consts, &p, gauge)? }))
        .collect()
}

/// Transported polarization with integration diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportOutcome {
    pub state: PolarizationState,
    /// Signed rotation from the initial to the final state.
    pub rotation_angle: f64,
    /// `| |psi_end| - |psi_0| |`.
    pub norm_drift: f64,
    pub theta_end: f64,
    pub steps: u32,
}

/// Transports `(psi^1, psi^2)` along the segment by integrating the coupled
/// rotation equations together with `theta(r)`.
pub fn transport_polarization(seg: &GeodesicSegment, psi0: PolarizationState, gauge: &GaugeChoice) -> Result<PolarizationState> {
    Ok(transport_polarization_with(seg, psi0, gauge, &Tolerances::default())?.state)
}

pub fn transport_polarization_with(
    seg: &GeodesicSegment,
    psi0: PolarizationState,
    gauge: &GaugeChoice,
    tol: &Tolerances,
) -> Result<TransportOutcome> {
    require_planar(&seg.consts)?;
    if !(psi0.psi1.is_finite() && psi0.psi2.is_finite()) {
        return Err(WignerError::InvalidParameter("initial polarization must be finite".into()));
    }
    crate::geodesics::check_monotone_arc(&seg.params, seg.consts.kappa, seg.r_start, seg.r_end)?;
    let r_min = seg.r_min();
    let t0 = (seg.r_start - r_min).sqrt();
    let t1 = (seg.r_end - r_min).sqrt();
    let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let r = r_min + t * t;
        let p = Point::spatial(r, y[0], seg.phi0);
        let u = rescaled_tangent(&seg.params, &seg.consts, r, y[0])?;
        if u[1] == 0.0 {
            return Err(WignerError::Numerical(format!("radial velocity vanishes at r = {r}")));
        }
        let jac = 2.0 * t / u[1];
        let rate = if seg.consts.kappa == 0.0 { 0.0 } else { wigner_rate_numeric(&seg.params, &seg.consts, &p, gauge)? };
        Ok([u[2] * jac, -rate * y[2] * jac, rate * y[1] * jac])
    };
    let sol = ode::integrate(rhs, t0, t1, [seg.theta_start, psi0.psi1, psi0.psi2], tol.ode())?;
    let state = PolarizationState::new(sol.y[1], sol.y[2]);
    Ok(TransportOutcome {
        state,
        rotation_angle: psi0.angle_to(&state),
        norm_drift: (state.norm() - psi0.norm()).abs(),
        theta_end: sol.y[0],
        steps: sol.steps,
    })
}
