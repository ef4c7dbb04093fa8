//! Static-observer tetrads adapted to a light ray.
//!
//! `e0` is the static observer, `e3` the unit spatial direction of the ray
//! seen by that observer, and `(e1, e2)` span the transverse plane. The
//! transverse pair is fixed up to a free function `B` and two signs; those
//! are the [`GaugeChoice`].
//!
//! The leg formulas are written once over [`Scalar`] so that the rate
//! computation can differentiate them exactly with dual numbers.

use serde::{Deserialize, Serialize};

use crate::dual::Scalar;
use crate::error::{Result, WignerError};
use crate::geodesics::{checked_root, null_vector_general, rescaled_tangent, NullConstants, Sign};
use crate::geometry::{check_polar, metric_at, FourVector, MetricDiag, Point, SpacetimeParams};

/// Relative slack for the gauge radicand `Q - r^5 B^2 sin^2(theta)`.
const GAUGE_SLACK: f64 = 1e-12;

/// Natural cubic spline through `(r, B)` knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplineKnots", into = "SplineKnots")]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SplineKnots {
    knots: Vec<(f64, f64)>,
}

impl TryFrom<SplineKnots> for CubicSpline {
    type Error = WignerError;
    fn try_from(k: SplineKnots) -> Result<Self> {
        CubicSpline::new(&k.knots)
    }
}

impl From<CubicSpline> for SplineKnots {
    fn from(s: CubicSpline) -> Self {
        SplineKnots { knots: s.x.into_iter().zip(s.y).collect() }
    }
}

impl CubicSpline {
    /// Knots must be finite with strictly increasing abscissae; two knots give
    /// linear interpolation.
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(WignerError::InvalidParameter("custom gauge needs at least two knots".into()));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(WignerError::InvalidParameter("custom gauge knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(WignerError::InvalidParameter("custom gauge knots must have increasing r".into()));
        }
        let (x, y): (Vec<f64>, Vec<f64>) = knots.iter().copied().unzip();
        let n = x.len();
        // Tridiagonal solve for the interior second derivatives (Thomas algorithm).
        let mut m = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = 2.0 * (h0 + h1) - h0 * c_prime[i - 1];
            c_prime[i] = h1 / denom;
            d_prime[i] = (rhs - h0 * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn eval<S: Scalar>(&self, r: S) -> Result<S> {
        let v = r.value();
        let (lo, hi) = self.domain();
        if !(v >= lo && v <= hi) {
            return Err(WignerError::InvalidParameter(format!("custom gauge table covers [{lo}, {hi}] m, evaluated at r = {v} m")));
        }
        let i = self.x.partition_point(|&x| x <= v).clamp(1, self.x.len() - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let a = (S::cst(self.x[i + 1]) - r) / S::cst(h);
        let b = (r - S::cst(self.x[i])) / S::cst(h);
        let cubic = |t: S| t * t * t - t;
        Ok(a * S::cst(self.y[i])
            + b * S::cst(self.y[i + 1])
            + (cubic(a) * S::cst(self.m[i]) + cubic(b) * S::cst(self.m[i + 1])) * S::cst(h * h / 6.0))
    }
}

/// The free transverse-frame element `B` (units 1/m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeFunction {
    /// `B = sqrt(1 - kappa / r^2) / r`.
    Chosen,
    /// `B = 0`.
    Zero,
    /// `B = +sqrt(Q) / (r^{5/2} sin(theta))`, the largest admissible value.
    /// On radial rays this is `+1/r`.
    PlusInvR,
    /// `B = -sqrt(Q) / (r^{5/2} sin(theta))`, the most negative admissible value.
    MinusInvR,
    /// Tabulated `B(r)`.
    Custom(CubicSpline),
}

/// Residual tetrad freedom after adaptation: `B` and the signs `eta1`, `eta2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeChoice {
    pub b: GaugeFunction,
    #[serde(default = "plus")]
    pub eta1: Sign,
    #[serde(default = "plus")]
    pub eta2: Sign,
}

fn plus() -> Sign {
    Sign::Plus
}

impl Default for GaugeChoice {
    fn default() -> Self {
        Self::chosen()
    }
}

impl GaugeChoice {
    pub fn new(b: GaugeFunction, eta1: Sign, eta2: Sign) -> Self {
        Self { b, eta1, eta2 }
    }

    pub fn chosen() -> Self {
        Self::new(GaugeFunction::Chosen, Sign::Plus, Sign::Plus)
    }

    pub fn zero() -> Self {
        Self::new(GaugeFunction::Zero, Sign::Plus, Sign::Plus)
    }

    pub fn plus_inv_r() -> Self {
        Self::new(GaugeFunction::PlusInvR, Sign::Plus, Sign::Plus)
    }

    pub fn minus_inv_r() -> Self {
        Self::new(GaugeFunction::MinusInvR, Sign::Plus, Sign::Plus)
    }

    pub fn custom(knots: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::new(GaugeFunction::Custom(CubicSpline::new(knots)?), Sign::Plus, Sign::Plus))
    }

    /// Short machine-readable label.
    pub fn label(&self) -> &'static str {
        match self.b {
            GaugeFunction::Chosen => "chosen",
            GaugeFunction::Zero => "zero",
            GaugeFunction::PlusInvR => "plus_inv_r",
            GaugeFunction::MinusInvR => "minus_inv_r",
            GaugeFunction::Custom(_) => "custom",
        }
    }

    pub(crate) fn is_default_chosen(&self) -> bool {
        self.b == GaugeFunction::Chosen && self.eta1 == Sign::Plus && self.eta2 == Sign::Plus
    }
}

/// `(1/sqrt(f)) d/dt`.
pub fn static_velocity(params: &SpacetimeParams, r: f64) -> Result<FourVector> {
    let f = params.lapse(r)?;
    Ok(FourVector::new(1.0 / f.sqrt(), 0.0, 0.0, 0.0))
}

/// `e3 = k / k^0hat - e0`: the unit direction of the ray in the static frame.
pub fn third_leg(params: &SpacetimeParams, c: &NullConstants, p: &Point) -> Result<FourVector> {
    let u = rescaled_tangent(params, c, p.r, p.theta)?;
    // u^t equals e0^t identically, so the time component is exactly zero.
    Ok(FourVector::new(0.0, u[1], u[2], u[3]))
}

/// Transverse legs `(e1, e2)` for any gauge, via the general closed forms.
pub(crate) fn general_legs<S: Scalar>(
    params: &SpacetimeParams,
    c: &NullConstants,
    gauge: &GaugeChoice,
    r: S,
    theta: S,
) -> Result<[[S; 4]; 2]> {
    params.check_radius(r.value())?;
    check_polar(theta.value())?;
    let one = S::cst(1.0);
    let zero = S::cst(0.0);
    let l = c.l_phi;
    let lsq = l * l;
    let (er, et) = (S::cst(c.eps_r.value()), S::cst(c.eps_theta.value()));
    let eta2 = S::cst(c_eta(gauge.eta2));
    let rm = r - S::cst(2.0 * params.mass);
    let (s, co) = (theta.sin(), theta.cos());
    let s2 = s * s;
    let r2 = r * r;
    let r3 = r2 * r;
    let sqrt_r = r.sqrt();
    let r52 = r2 * sqrt_r;

    let a2 = r3 - rm * S::cst(c.kappa + lsq);
    let a = checked_root(a2, r3.value(), "radial")?;
    let c2 = if l == 0.0 { S::cst(c.kappa) } else { S::cst(c.kappa) - S::cst(lsq) * co * co / s2 };
    let cc = checked_root(c2, (c.kappa + lsq).max(f64::MIN_POSITIVE), "polar")?;
    let q = a2 * s2 + S::cst(lsq) * rm;
    if !(q.value() > 0.0) {
        return Err(WignerError::GaugeDomainViolation { r: r.value(), radicand: q.value() });
    }

    let (b, s_res) = match &gauge.b {
        GaugeFunction::Chosen => {
            let x = one - S::cst(c.kappa) / r2;
            if x.value() < -GAUGE_SLACK {
                return Err(WignerError::GaugeDomainViolation { r: r.value(), radicand: x.value() });
            }
            let b = if x.value() <= 0.0 { zero } else { x.sqrt() / r };
            // Q - r^5 B^2 sin^2 simplifies to this sum of nonnegative terms.
            let res2 = S::cst(2.0 * params.mass * c.kappa) * s2 + S::cst(lsq) * rm * co * co;
            (b, gauge_root(res2, q.value(), r.value())?)
        }
        GaugeFunction::Zero => (zero, q.sqrt()),
        GaugeFunction::PlusInvR => (q.sqrt() / (r52 * s), zero),
        GaugeFunction::MinusInvR => (-(q.sqrt() / (r52 * s)), zero),
        GaugeFunction::Custom(spline) => {
            let b = spline.eval(r)?;
            let res2 = q - r2 * r3 * b * b * s2;
            (b, gauge_root(res2, q.value(), r.value())?)
        }
    };

    let lb = S::cst(l);
    let r4 = r2 * r2;
    let e1_r = -(er * rm * s * (r4 * lb * b - eta2 * et * a * cc * s_res)) / (r2 * q);
    let e1_th = -(eta2 * s_res) / (r52 * s);
    let e1_ph = (r4 * b * s2 * a + eta2 * et * lb * rm * cc * s_res) / (r52 * s * q);
    let e2_r = -(er * rm * (et * r * b * s2 * a * cc + eta2 * lb * s_res)) / (sqrt_r * q);
    let e2_ph = (-(et * r * b * lb * rm * cc) + eta2 * a * s_res) / (r * q);

    let eta1 = S::cst(c_eta(gauge.eta1));
    Ok([[zero, eta1 * e1_r, eta1 * e1_th, eta1 * e1_ph], [zero, e2_r, b, e2_ph]])
}

fn c_eta(s: Sign) -> f64 {
    s.value()
}

fn gauge_root<S: Scalar>(res2: S, q: f64, r: f64) -> Result<S> {
    let v = res2.value();
    if v >= 0.0 {
        Ok(res2.sqrt())
    } else if v >= -GAUGE_SLACK * q {
        Ok(S::cst(0.0))
    } else {
        Err(WignerError::GaugeDomainViolation { r, radicand: v })
    }
}

/// Transverse legs in the chosen gauge for a constant-longitude ray, using the
/// simplified closed forms (no `Q` cancellations).
pub(crate) fn chosen_legs<S: Scalar>(params: &SpacetimeParams, c: &NullConstants, r: S, theta: S) -> Result<[[S; 4]; 2]> {
    if c.l_phi != 0.0 {
        return Err(WignerError::InvalidParameter("the chosen-gauge closed forms need l_phi = 0".into()));
    }
    params.check_radius(r.value())?;
    check_polar(theta.value())?;
    let one = S::cst(1.0);
    let zero = S::cst(0.0);
    let m2 = S::cst(2.0 * params.mass);
    let kappa = S::cst(c.kappa);
    let r2 = r * r;
    let f = one - m2 / r;
    let d = checked_root(one - f * kappa / r2, 1.0, "radial")?;
    let sk = checked_root(one - kappa / r2, 1.0, "chosen gauge")?;
    let n = (m2 * kappa / (r2 * r)).sqrt();
    let csc = one / theta.sin();
    let sign = S::cst(c.eps_r.value() * c.eps_theta.value());
    let rd = r * d;
    Ok([
        [zero, sign * kappa / r2 * (m2 / r).sqrt() * f / d, -(n / r), csc * sk / rd],
        [zero, -(sign * kappa.sqrt() / r * f * sk / d), sk / r, csc * n / rd],
    ])
}

/// Transverse legs, routed to the simplified forms when they apply.
pub(crate) fn transverse_legs<S: Scalar>(
    params: &SpacetimeParams,
    c: &NullConstants,
    gauge: &GaugeChoice,
    r: S,
    theta: S,
) -> Result<[[S; 4]; 2]> {
    if gauge.is_default_chosen() && c.l_phi == 0.0 {
        chosen_legs(params, c, r, theta)
    } else {
        general_legs(params, c, gauge, r, theta)
    }
}

/// Orthonormal frame `(e0, e1, e2, e3)` at a point, with the metric there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub point: Point,
    pub e0: FourVector,
    pub e1: FourVector,
    pub e2: FourVector,
    pub e3: FourVector,
    pub metric: MetricDiag,
}

impl Tetrad {
    pub fn legs(&self) -> [FourVector; 4] {
        [self.e0, self.e1, self.e2, self.e3]
    }

    /// Largest deviation of `g(e_a, e_b)` from `diag(-1, 1, 1, 1)`.
    pub fn orthonormality_residual(&self) -> f64 {
        let legs = self.legs();
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in a..4 {
                let target = match (a, b) {
                    (0, 0) => -1.0,
                    _ if a == b => 1.0,
                    _ => 0.0,
                };
                worst = worst.max((self.metric.dot(&legs[a], &legs[b]) - target).abs());
            }
        }
        worst
    }

    /// Frame components `v^a = eta^{aa} g(e_a, v)`.
    pub fn frame_components(&self, v: &FourVector) -> [f64; 4] {
        let g = |e: &FourVector| self.metric.dot(e, v);
        [-g(&self.e0), g(&self.e1), g(&self.e2), g(&self.e3)]
    }
}

fn assemble(params: &SpacetimeParams, c: &NullConstants, p: &Point, legs: [[f64; 4]; 2]) -> Result<Tetrad> {
    Ok(Tetrad {
        point: *p,
        e0: static_velocity(params, p.r)?,
        e1: FourVector(legs[0]),
        e2: FourVector(legs[1]),
        e3: third_leg(params, c, p)?,
        metric: metric_at(params, p)?,
    })
}

/// Adapted tetrad for arbitrary constants and gauge.
pub fn adapted_tetrad_general(params: &SpacetimeParams, c: &NullConstants, p: &Point, gauge: &GaugeChoice) -> Result<Tetrad> {
    let legs = general_legs(params, c, gauge, p.r, p.theta)?;
    assemble(params, c, p, legs)
}

/// Adapted tetrad in the chosen gauge with `eta1 = eta2 = +1`, for a
/// constant-longitude ray with `kappa <= r^2`.
pub fn adapted_tetrad_chosen(params: &SpacetimeParams, c: &NullConstants, p: &Point) -> Result<Tetrad> {
    let legs = chosen_legs(params, c, p.r, p.theta)?;
    assemble(params, c, p, legs)
}

/// Adapted tetrad using the best-conditioned formulas for the gauge.
pub fn adapted_tetrad(params: &SpacetimeParams, c: &NullConstants, p: &Point, gauge: &GaugeChoice) -> Result<Tetrad> {
    let legs = transverse_legs(params, c, gauge, p.r, p.theta)?;
    assemble(params, c, p, legs)
}

/// Transverse polarization components `(psi^1hat, psi^2hat)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationState {
    pub psi1: f64,
    pub psi2: f64,
}

impl PolarizationState {
    pub fn new(psi1: f64, psi2: f64) -> Self {
        Self { psi1, psi2 }
    }

    pub fn norm(&self) -> f64 {
        self.psi1.hypot(self.psi2)
    }

    /// Counterclockwise rotation by `angle` in the `(1, 2)` plane.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { psi1: c * self.psi1 - s * self.psi2, psi2: s * self.psi1 + c * self.psi2 }
    }

    /// Signed angle from `self` to `other`, in `(-pi, pi]`.
    pub fn angle_to(&self, other: &PolarizationState) -> f64 {
        let cross = self.psi1 * other.psi2 - self.psi2 * other.psi1;
        let dot = self.psi1 * other.psi1 + self.psi2 * other.psi2;
        cross.atan2(dot)
    }
}

/// `psi^A = g(e_A, psi)` for `A = 1, 2`.
pub fn project_polarization(tetrad: &Tetrad, psi: &FourVector) -> PolarizationState {
    PolarizationState::new(tetrad.metric.dot(&tetrad.e1, psi), tetrad.metric.dot(&tetrad.e2, psi))
}

/// `psi + C k`: the residual gauge freedom of a transverse polarization vector.
pub fn gauge_shift(psi: &FourVector, k: &FourVector, c: f64) -> FourVector {
    psi.plus(&k.scaled(c))
}

/// Null tangent at a point together with its adapted frame.
pub fn tangent_and_frame(params: &SpacetimeParams, c: &NullConstants, p: &Point, gauge: &GaugeChoice) -> Result<(FourVector, Tetrad)> {
    Ok((null_vector_general(params, c, p)?, adapted_tetrad(params, c, p, gauge)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> SpacetimeParams {
        SpacetimeParams::new(0.05, 1.0).unwrap()
    }

    fn planar(kappa: f64) -> NullConstants {
        NullConstants::planar(1.7, kappa, Sign::Plus, Sign::Minus).unwrap()
    }

    #[test]
    fn static_velocity_is_unit_timelike() {
        let flat = SpacetimeParams::new(0.0, 1.0).unwrap();
        assert_eq!(static_velocity(&flat, 3.0).unwrap().0, [1.0, 0.0, 0.0, 0.0]);
        let p = params();
        for r in [0.2, 1.0, 7.5] {
            let v = static_velocity(&p, r).unwrap();
            let g = metric_at(&p, &Point::spatial(r, 1.0, 0.0)).unwrap();
            assert!((g.dot(&v, &v) + 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn frequency_seen_by_static_observer() {
        let p = params();
        let c = planar(0.3);
        let pt = Point::spatial(2.0, 1.1, 0.0);
        let k = null_vector_general(&p, &c, &pt).unwrap();
        let g = metric_at(&p, &pt).unwrap();
        let k0 = -g.dot(&k, &static_velocity(&p, 2.0).unwrap());
        assert!((k0 - 1.7 / p.lapse(2.0).unwrap().sqrt()).abs() < 1e-14);
    }

    #[test]
    fn third_leg_properties() {
        let p = params();
        let radial = NullConstants::planar(1.0, 0.0, Sign::Minus, Sign::Plus).unwrap();
        let e3 = third_leg(&p, &radial, &Point::spatial(2.0, 1.0, 0.0)).unwrap();
        assert_eq!(e3.0, [0.0, -p.lapse(2.0).unwrap().sqrt(), 0.0, 0.0]);

        let c = planar(0.8);
        let pt = Point::spatial(2.0, 1.0, 0.0);
        let e3 = third_leg(&p, &c, &pt).unwrap();
        let e0 = static_velocity(&p, 2.0).unwrap();
        let g = metric_at(&p, &pt).unwrap();
        assert!((g.dot(&e3, &e3) - 1.0).abs() < 1e-12);
        assert!(g.dot(&e3, &e0).abs() < 1e-12);
        let k = null_vector_general(&p, &c, &pt).unwrap();
        let k0 = -g.dot(&k, &e0);
        assert!(e3.plus(&e0).max_abs_diff(&k.scaled(1.0 / k0)) < 1e-12);
    }

    #[test]
    fn flat_radial_chosen_frame() {
        let flat = SpacetimeParams::new(0.0, 1.0).unwrap();
        let c = NullConstants::planar(1.0, 0.0, Sign::Plus, Sign::Plus).unwrap();
        let th = 0.7;
        let t = adapted_tetrad_chosen(&flat, &c, &Point::spatial(2.0, th, 0.0)).unwrap();
        assert_eq!(t.e1.0, [0.0, 0.0, 0.0, 1.0 / (2.0 * th.sin())]);
        assert_eq!(t.e2.0, [0.0, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn general_reduces_to_chosen() {
        let p = params();
        for (kappa, eps_r, eps_t) in [(0.0, 1.0, 1.0), (0.3, 1.0, -1.0), (0.9, -1.0, 1.0), (1.4, -1.0, -1.0)] {
            let c = NullConstants::planar(1.0, kappa, Sign::of(eps_r), Sign::of(eps_t)).unwrap();
            let pt = Point::spatial(1.3, 0.9, 0.0);
            let a = adapted_tetrad_general(&p, &c, &pt, &GaugeChoice::chosen()).unwrap();
            let b = adapted_tetrad_chosen(&p, &c, &pt).unwrap();
            assert!(a.e1.max_abs_diff(&b.e1) < 1e-12, "{kappa}: {:?} vs {:?}", a.e1, b.e1);
            assert!(a.e2.max_abs_diff(&b.e2) < 1e-12);
        }
    }

    #[test]
    fn eta1_flip_negates_e1_exactly() {
        let p = params();
        let c = NullConstants::new(1.0, 0.4, 0.9, Sign::Plus, Sign::Plus).unwrap();
        let pt = Point::spatial(1.8, 1.2, 0.0);
        for b in [GaugeFunction::Chosen, GaugeFunction::Zero, GaugeFunction::PlusInvR] {
            let g1 = GaugeChoice::new(b.clone(), Sign::Plus, Sign::Minus);
            let g2 = GaugeChoice::new(b, Sign::Minus, Sign::Minus);
            let t1 = adapted_tetrad_general(&p, &c, &pt, &g1).unwrap();
            let t2 = adapted_tetrad_general(&p, &c, &pt, &g2).unwrap();
            assert_eq!(t1.e1.scaled(-1.0), t2.e1);
            assert_eq!(t1.e2, t2.e2);
        }
    }

    #[test]
    fn saturating_gauges_reduce_to_inverse_radius_on_radial_rays() {
        let p = params();
        let c = NullConstants::planar(1.0, 0.0, Sign::Plus, Sign::Plus).unwrap();
        let pt = Point::spatial(2.5, 1.0, 0.0);
        let plus = adapted_tetrad_general(&p, &c, &pt, &GaugeChoice::plus_inv_r()).unwrap();
        let minus = adapted_tetrad_general(&p, &c, &pt, &GaugeChoice::minus_inv_r()).unwrap();
        assert!((plus.e2[2] - 0.4).abs() < 1e-15);
        assert!((minus.e2[2] + 0.4).abs() < 1e-15);
    }

    #[test]
    fn custom_gauge_outside_domain_is_rejected() {
        let p = params();
        let c = planar(0.5);
        let pt = Point::spatial(2.0, 1.0, 0.0);
        let big = GaugeChoice::custom(&[(1.0, 5.0), (3.0, 5.0)]).unwrap();
        assert!(matches!(adapted_tetrad_general(&p, &c, &pt, &big), Err(WignerError::GaugeDomainViolation { .. })));
        let short = GaugeChoice::custom(&[(2.5, 0.1), (3.0, 0.1)]).unwrap();
        assert!(adapted_tetrad_general(&p, &c, &pt, &short).is_err());
    }

    #[test]
    fn spline_interpolates_and_round_trips_through_json() {
        let knots: Vec<(f64, f64)> = (0..8).map(|i| 1.0 + i as f64 * 0.5).map(|r| (r, (r * 0.7).sin())).collect();
        let s = CubicSpline::new(&knots).unwrap();
        for &(r, b) in &knots {
            assert!((s.eval(r).unwrap() - b).abs() < 1e-15);
        }
        assert!((s.eval(2.2).unwrap() - (2.2f64 * 0.7).sin()).abs() < 1e-3);
        let g = GaugeChoice::new(GaugeFunction::Custom(s), Sign::Minus, Sign::Plus);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<GaugeChoice>(&json).unwrap(), g);
        let parsed: GaugeChoice = serde_json::from_str(r#"{"b":"zero"}"#).unwrap();
        assert_eq!(parsed, GaugeChoice::zero());
        assert!(CubicSpline::new(&[(1.0, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn projections() {
        let p = params();
        let c = planar(0.6);
        let pt = Point::spatial(1.6, 1.0, 0.0);
        let t = adapted_tetrad_chosen(&p, &c, &pt).unwrap();
        let e1 = project_polarization(&t, &t.e1);
        assert!((e1.psi1 - 1.0).abs() < 1e-14 && e1.psi2.abs() < 1e-14);
        let k = null_vector_general(&p, &c, &pt).unwrap();
        let pk = project_polarization(&t, &k);
        assert!(pk.psi1.abs() < 1e-12 && pk.psi2.abs() < 1e-12);
        let psi = t.e1.scaled(0.3).plus(&t.e2.scaled(-0.8));
        let base = project_polarization(&t, &psi);
        for cc in [-10.0, 1.0, 10.0] {
            let shifted = project_polarization(&t, &gauge_shift(&psi, &k, cc));
            assert!((shifted.psi1 - base.psi1).abs() < 1e-12);
            assert!((shifted.psi2 - base.psi2).abs() < 1e-12);
        }
        assert_eq!(gauge_shift(&psi, &k, 0.0), psi);
    }

    #[test]
    fn rotation_helpers() {
        let a = PolarizationState::new(1.0, 0.0);
        let b = a.rotated(0.3);
        assert!((a.angle_to(&b) - 0.3).abs() < 1e-15);
        assert!((b.norm() - 1.0).abs() < 1e-15);
    }

    fn admissible(m: f64, r: f64, theta: f64, l: f64, fk: f64) -> Option<NullConstants> {
        let p = SpacetimeParams::new(m, 0.5).ok()?;
        let cot = theta.cos() / theta.sin();
        let lo = l * l * cot * cot;
        let hi = r * r / p.lapse(r).ok()? - l * l;
        if hi <= lo {
            return None;
        }
        NullConstants::new(1.0, l, lo + (hi - lo) * fk, Sign::Minus, Sign::Plus).ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn general_tetrads_are_orthonormal_and_adapted(
            m in 0.0f64..0.2,
            r in 0.5f64..10.0,
            theta in 0.1f64..3.04,
            l in -1.5f64..1.5,
            fk in 0.0f64..1.0,
            which in 0usize..4,
            e1 in any::<bool>(),
            e2 in any::<bool>(),
        ) {
            let c = admissible(m, r, theta, l, fk);
            prop_assume!(c.is_some());
            let mut c = c.unwrap();
            let p = SpacetimeParams::new(m, 0.5).unwrap();
            let b = [GaugeFunction::Chosen, GaugeFunction::Zero, GaugeFunction::PlusInvR, GaugeFunction::MinusInvR][which].clone();
            prop_assume!(which != 0 || c.kappa <= r * r);
            c.eps_theta = Sign::of(if e1 { 1.0 } else { -1.0 });
            let gauge = GaugeChoice::new(b, if e2 { Sign::Plus } else { Sign::Minus }, Sign::of(if e1 == e2 { 1.0 } else { -1.0 }));
            let pt = Point::spatial(r, theta, 0.0);
            let t = adapted_tetrad_general(&p, &c, &pt, &gauge).unwrap();
            prop_assert!(t.orthonormality_residual() <= 1e-10, "{}", t.orthonormality_residual());
            let k = null_vector_general(&p, &c, &pt).unwrap();
            let fc = t.frame_components(&k);
            prop_assert!(fc[1].abs() <= 1e-10 && fc[2].abs() <= 1e-10);
            prop_assert!((fc[3] - fc[0]).abs() <= 1e-10 * c.energy / p.lapse(r).unwrap().sqrt());
        }
    }
}
