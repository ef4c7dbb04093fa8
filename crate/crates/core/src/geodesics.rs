//! Null geodesics: tangent vectors from the constants of motion, the polar
//! sweep of a constant-longitude ray and the inverse problem of finding the
//! angular-momentum-like constant `kappa` that connects two endpoints.

use serde::{Deserialize, Serialize};

use crate::dual::Scalar;
use crate::error::{Result, WignerError};
use crate::geometry::{check_polar, FourVector, Point, SpacetimeParams};
use crate::numerics::quadrature::{self, QuadResult};
use crate::numerics::roots::{brent, RootTolerance};
use crate::numerics::Tolerances;

/// Relative slack below zero tolerated in a radicand before it is treated as
/// a genuine turning-point violation.
const RADICAND_SLACK: f64 = 1e-13;

/// Upper bracket used when solving for `kappa`, as a fraction of the bound.
const KAPPA_BRACKET: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `Plus` for `x >= 0`.
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

/// Constants of motion of a null geodesic.
///
/// `l_phi = L_phi / E_p` and `kappa = K / E_p^2` do not depend on the photon
/// energy; `eps_r` and `eps_theta` fix the direction of travel in `r` and
/// `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullConstants {
    pub energy: f64,
    pub l_phi: f64,
    pub kappa: f64,
    pub eps_r: Sign,
    pub eps_theta: Sign,
}

impl NullConstants {
    pub fn new(energy: f64, l_phi: f64, kappa: f64, eps_r: Sign, eps_theta: Sign) -> Result<Self> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(WignerError::InvalidParameter(format!("photon energy must be > 0, got {energy}")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(WignerError::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
        }
        if !l_phi.is_finite() {
            return Err(WignerError::InvalidParameter("l_phi must be finite".into()));
        }
        Ok(Self { energy, l_phi, kappa, eps_r, eps_theta })
    }

    /// A ray in a constant-longitude plane.
    pub fn planar(energy: f64, kappa: f64, eps_r: Sign, eps_theta: Sign) -> Result<Self> {
        Self::new(energy, 0.0, kappa, eps_r, eps_theta)
    }

    /// Unscaled azimuthal angular momentum `L_phi = l_phi E_p`.
    pub fn angular_momentum(&self) -> f64 {
        self.l_phi * self.energy
    }

    /// Unscaled Carter-like constant `K = kappa E_p^2`.
    pub fn carter(&self) -> f64 {
        self.kappa * self.energy * self.energy
    }

    pub fn with_energy(&self, energy: f64) -> Result<Self> {
        Self::new(energy, self.l_phi, self.kappa, self.eps_r, self.eps_theta)
    }
}

pub(crate) fn checked_root<S: Scalar>(x: S, scale: f64, quantity: &'static str) -> Result<S> {
    let v = x.value();
    if v >= 0.0 {
        Ok(x.sqrt())
    } else if v >= -RADICAND_SLACK * scale {
        Ok(S::cst(0.0))
    } else {
        Err(WignerError::ForbiddenRegion { quantity, radicand: v / scale })
    }
}

/// `1 - f(r) (l_phi^2 + kappa) / r^2`.
pub(crate) fn radial_radicand<S: Scalar>(mass: f64, c: &NullConstants, r: S) -> S {
    let f = S::cst(1.0) - S::cst(2.0 * mass) / r;
    S::cst(1.0) - f * S::cst(c.l_phi * c.l_phi + c.kappa) / (r * r)
}

/// `kappa - l_phi^2 cot^2(theta)`.
pub(crate) fn polar_radicand<S: Scalar>(c: &NullConstants, theta: S) -> S {
    if c.l_phi == 0.0 {
        return S::cst(c.kappa);
    }
    let cot = theta.cos() / theta.sin();
    S::cst(c.kappa) - S::cst(c.l_phi * c.l_phi) * cot * cot
}

/// Tangent with the energy scaled out: `u = k / k^0hat`, where
/// `k^0hat = E_p / sqrt(f)` is the static observer's frequency.
///
/// `u` never touches `E_p`, so anything built from it is bit-for-bit
/// independent of the photon energy.
pub(crate) fn rescaled_tangent<S: Scalar>(params: &SpacetimeParams, c: &NullConstants, r: S, theta: S) -> Result<[S; 4]> {
    let bare = bare_tangent(params, c, r, theta)?;
    let sqrt_f = (S::cst(1.0) - S::cst(2.0 * params.mass) / r).sqrt();
    Ok(bare.map(|x| x * sqrt_f))
}

/// `k / E_p`.
fn bare_tangent<S: Scalar>(params: &SpacetimeParams, c: &NullConstants, r: S, theta: S) -> Result<[S; 4]> {
    params.check_radius(r.value())?;
    if c.l_phi != 0.0 {
        check_polar(theta.value())?;
    }
    let f = S::cst(1.0) - S::cst(2.0 * params.mass) / r;
    let radial = checked_root(radial_radicand(params.mass, c, r), 1.0, "radial")?;
    let polar_scale = c.kappa + c.l_phi * c.l_phi;
    let polar = checked_root(polar_radicand(c, theta), polar_scale.max(f64::MIN_POSITIVE), "polar")?;
    let s = theta.sin();
    let r2 = r * r;
    let phi = if c.l_phi == 0.0 { S::cst(0.0) } else { S::cst(c.l_phi) / (r2 * s * s) };
    Ok([S::cst(1.0) / f, S::cst(c.eps_r.value()) * radial, S::cst(c.eps_theta.value()) * polar / r2, phi])
}

/// General null tangent for arbitrary `(E_p, l_phi, kappa)`.
pub fn null_vector_general(params: &SpacetimeParams, c: &NullConstants, p: &Point) -> Result<FourVector> {
    let k = bare_tangent(params, c, p.r, p.theta)?;
    Ok(FourVector(k).scaled(c.energy))
}

/// Null tangent of a ray confined to a constant-longitude plane (`l_phi = 0`).
pub fn null_vector_constphi(params: &SpacetimeParams, c: &NullConstants, p: &Point) -> Result<FourVector> {
    if c.l_phi != 0.0 {
        return Err(WignerError::InvalidParameter(format!("constant-phi ray needs l_phi = 0, got {}", c.l_phi)));
    }
    null_vector_general(params, c, p)
}

fn orbit_bound(params: &SpacetimeParams, r: f64) -> Result<f64> {
    Ok(r * r / params.lapse(r)?)
}

/// Largest `kappa` for which neither endpoint is beyond a radial turning
/// point: `min(R1^2 / f(R1), R2^2 / f(R2))`.
pub fn kappa_max(params: &SpacetimeParams, r1: f64, r2: f64) -> Result<f64> {
    Ok(orbit_bound(params, r1)?.min(orbit_bound(params, r2)?))
}

/// Minimum of `r^2 / f(r)` over `[lo, hi]`; the function dips to `27 M^2`
/// at the photon sphere `r = 3M` and grows monotonically outside it.
fn orbit_bound_min(params: &SpacetimeParams, lo: f64, hi: f64) -> Result<f64> {
    let photon_sphere = 3.0 * params.mass;
    if lo < photon_sphere && photon_sphere < hi {
        Ok(27.0 * params.mass * params.mass)
    } else {
        kappa_max(params, lo, hi)
    }
}

pub(crate) fn check_monotone_arc(params: &SpacetimeParams, kappa: f64, a: f64, b: f64) -> Result<()> {
    params.check_radius(a)?;
    params.check_radius(b)?;
    let (lo, hi) = (a.min(b), a.max(b));
    if kappa > orbit_bound_min(params, lo, hi)? {
        return Err(WignerError::TurningPointInside { r_min: lo, r_max: hi, kappa });
    }
    Ok(())
}

/// Signed polar sweep `int_a^b sqrt(kappa) / (r^2 sqrt(1 - f kappa / r^2)) dr`.
///
/// The substitution `r = min(a, b) + t^2` removes the inverse square-root
/// singularity when the lower radius sits at a turning point.
pub(crate) fn polar_sweep(params: &SpacetimeParams, kappa: f64, a: f64, b: f64, tol: &Tolerances) -> Result<QuadResult> {
    if kappa == 0.0 || a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, intervals: 0 });
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let sk = kappa.sqrt();
    let m = params.mass;
    // Radicand written as R(lo) + kappa t^2 g(r), so that nothing cancels
    // when lo sits at (or next to) the turning point.
    let r0 = (1.0 - (1.0 - 2.0 * m / lo) * kappa / (lo * lo)).max(0.0);
    let integrand = |t: f64| {
        let r = lo + t * t;
        let g = (r + lo) / (lo * lo * r * r) - 2.0 * m * (r * r + r * lo + lo * lo) / (lo * lo * lo * r * r * r);
        let rad = r0 + kappa * t * t * g;
        if rad <= 0.0 {
            return 0.0;
        }
        2.0 * t * sk / (r * r * rad.sqrt())
    };
    let mut q = quadrature::integrate(integrand, 0.0, (hi - lo).sqrt(), tol.quad())?;
    if b < a {
        q.value = -q.value;
    }
    Ok(q)
}

/// Polar angle swept by a monotone-`r` ray between radii `r1` and `r2`.
pub fn delta_theta_of_kappa(params: &SpacetimeParams, r1: f64, r2: f64, kappa: f64) -> Result<f64> {
    delta_theta_of_kappa_with(params, r1, r2, kappa, &Tolerances::default())
}

pub fn delta_theta_of_kappa_with(params: &SpacetimeParams, r1: f64, r2: f64, kappa: f64, tol: &Tolerances) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(WignerError::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
    }
    check_monotone_arc(params, kappa, r1, r2)?;
    Ok(polar_sweep(params, kappa, r1.min(r2), r1.max(r2), tol)?.value)
}

/// Finds `kappa` such that a monotone-`r` ray between `r1` and `r2` sweeps the
/// polar angle `delta_theta`.
pub fn solve_kappa(params: &SpacetimeParams, r1: f64, r2: f64, delta_theta: f64) -> Result<f64> {
    solve_kappa_with(params, r1, r2, delta_theta, &Tolerances::default())
}

pub fn solve_kappa_with(params: &SpacetimeParams, r1: f64, r2: f64, delta_theta: f64, tol: &Tolerances) -> Result<f64> {
    if !(delta_theta >= 0.0 && delta_theta.is_finite()) {
        return Err(WignerError::InvalidParameter(format!("target sweep must be >= 0, got {delta_theta}")));
    }
    params.check_radius(r1)?;
    params.check_radius(r2)?;
    if delta_theta == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = (r1.min(r2), r1.max(r2));
    if lo == hi {
        return Err(WignerError::Unreachable { delta_theta, max_sweep: 0.0 });
    }
    let kappa_hi = orbit_bound_min(params, lo, hi)? * KAPPA_BRACKET;
    let max_sweep = polar_sweep(params, kappa_hi, lo, hi, tol)?.value;
    if delta_theta >= max_sweep {
        return Err(WignerError::Unreachable { delta_theta, max_sweep });
    }
    // Solve in s = sqrt(kappa): the sweep is close to linear in s.
    let root_tol = RootTolerance { f_tol: 0.5 * tol.root_rel * delta_theta.max(1e-9), x_tol: 0.0, max_iter: 200 };
    let s = brent(|s| Ok(polar_sweep(params, s * s, lo, hi, tol)?.value - delta_theta), 0.0, kappa_hi.sqrt(), root_tol)?;
    Ok(s * s)
}

/// Small-angle estimate `kappa ~ R1^2 R2^2 dtheta^2 / (R1 - R2)^2`, valid for
/// `|dtheta| << |R1 - R2| / max(R1, R2)`.
pub fn kappa_small_angle(r1: f64, r2: f64, delta_theta: f64) -> Result<f64> {
    if r1 == r2 {
        return Err(WignerError::DegenerateRadii { r: r1 });
    }
    let d = r1 - r2;
    Ok(r1 * r1 * r2 * r2 * delta_theta * delta_theta / (d * d))
}

/// Validity scale `|R1 - R2| / max(R1, R2)` of [`kappa_small_angle`].
pub fn small_angle_scale(r1: f64, r2: f64) -> f64 {
    (r1 - r2).abs() / r1.max(r2)
}

/// A monotone-`r` arc of a constant-longitude null geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSegment {
    pub params: SpacetimeParams,
    pub consts: NullConstants,
    pub r_start: f64,
    pub r_end: f64,
    pub theta_start: f64,
    pub phi0: f64,
}

impl GeodesicSegment {
    pub fn new(params: SpacetimeParams, consts: NullConstants, r_start: f64, r_end: f64, theta_start: f64, phi0: f64) -> Result<Self> {
        params.check_radius(r_start)?;
        params.check_radius(r_end)?;
        check_polar(theta_start)?;
        if r_start == r_end {
            return Err(WignerError::DegenerateRadii { r: r_start });
        }
        if consts.l_phi != 0.0 {
            return Err(WignerError::InvalidParameter("segments are restricted to constant-phi rays (l_phi = 0)".into()));
        }
        if consts.eps_r != Sign::of(r_end - r_start) {
            return Err(WignerError::InvalidParameter("eps_r must point from r_start towards r_end".into()));
        }
        check_monotone_arc(&params, consts.kappa, r_start, r_end)?;
        let bound = kappa_max(&params, r_start, r_end)?;
        if consts.kappa >= bound {
            return Err(WignerError::TurningPointInside { r_min: r_start.min(r_end), r_max: r_start.max(r_end), kappa: consts.kappa });
        }
        Ok(Self { params, consts, r_start, r_end, theta_start, phi0 })
    }

    /// The segment joining `(r, theta)` endpoints in the plane `phi = phi0`.
    pub fn between(params: SpacetimeParams, energy: f64, from: (f64, f64), to: (f64, f64), phi0: f64) -> Result<Self> {
        Self::between_with(params, energy, from, to, phi0, &Tolerances::default())
    }

    pub fn between_with(
        params: SpacetimeParams,
        energy: f64,
        from: (f64, f64),
        to: (f64, f64),
        phi0: f64,
        tol: &Tolerances,
    ) -> Result<Self> {
        let d_theta = to.1 - from.1;
        let kappa = solve_kappa_with(&params, from.0, to.0, d_theta.abs(), tol)?;
        let consts = NullConstants::planar(energy, kappa, Sign::of(to.0 - from.0), Sign::of(d_theta))?;
        Self::new(params, consts, from.0, to.0, from.1, phi0)
    }

    pub fn r_min(&self) -> f64 {
        self.r_start.min(self.r_end)
    }

    pub fn r_max(&self) -> f64 {
        self.r_start.max(self.r_end)
    }

    /// Polar angle reached at radius `r` along the segment.
    pub fn theta_at(&self, r: f64, tol: &Tolerances) -> Result<f64> {
        let sweep = polar_sweep(&self.params, self.consts.kappa, self.r_start, r, tol)?.value;
        // sweep carries sign(r - r_start) = eps_r; the polar direction is eps_theta.
        Ok(self.theta_start + self.consts.eps_theta.value() * sweep.abs())
    }

    pub fn theta_end(&self) -> Result<f64> {
        self.theta_at(self.r_end, &Tolerances::default())
    }

    pub fn start(&self) -> Point {
        Point::spatial(self.r_start, self.theta_start, self.phi0)
    }

    /// The same arc traversed backwards.
    pub fn reversed(&self) -> Result<Self> {
        let c = NullConstants { eps_r: self.consts.eps_r.flip(), eps_theta: self.consts.eps_theta.flip(), ..self.consts };
        Self::new(self.params, c, self.r_end, self.r_start, self.theta_end()?, self.phi0)
    }
}

/// `n` points equally spaced in `r` from `r_start` to `r_end`, with `theta`
/// advanced by cumulative quadrature of `d theta / d r`.
pub fn sample_segment(seg: &GeodesicSegment, n: usize) -> Result<Vec<Point>> {
    sample_segment_with(seg, n, &Tolerances::default())
}

pub fn sample_segment_with(seg: &GeodesicSegment, n: usize, tol: &Tolerances) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(WignerError::InvalidParameter(format!("need at least 2 samples, got {n}")));
    }
    check_monotone_arc(&seg.params, seg.consts.kappa, seg.r_start, seg.r_end)?;
    let span = seg.r_end - seg.r_start;
    let radii: Vec<f64> = (0..n).map(|i| if i + 1 == n { seg.r_end } else { seg.r_start + span * i as f64 / (n - 1) as f64 }).collect();
    let mut out = Vec::with_capacity(n);
    let mut swept = 0.0;
    for (i, &r) in radii.iter().enumerate() {
        if i > 0 {
            swept += polar_sweep(&seg.params, seg.consts.kappa, radii[i - 1], r, tol)?.value.abs();
        }
        let theta = seg.theta_start + seg.consts.eps_theta.value() * swept;
        check_polar(theta)?;
        out.push(Point::spatial(r, theta, seg.phi0));
    }
    Ok(out)
}
