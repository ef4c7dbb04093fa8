//! Schwarzschild metric, Christoffel symbols, units and frequency relations.
//!
//! Geometric units throughout: lengths in meters and the mass as `GM/c^2`
//! in meters. Coordinate order is `(t, r, theta, phi)` everywhere.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WignerError};

/// Newtonian constant of gravitation (CODATA 2018), m^3 kg^-1 s^-2.
pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Geocentric gravitational constant GM of the Earth, m^3 s^-2.
pub const EARTH_GM: f64 = 3.986_004_418e14;
/// Mean Earth radius, m.
pub const EARTH_RADIUS: f64 = 6.371e6;
/// Operations touching `csc(theta)` or `cot(theta)` require
/// `theta` in `(POLE_EXCLUSION, pi - POLE_EXCLUSION)`.
pub const POLE_EXCLUSION: f64 = 1e-6;

/// Converts a mass in kilograms to its geometric length `GM/c^2`.
pub fn geometric_mass(mass_kg: f64) -> f64 {
    GRAVITATIONAL_CONSTANT * mass_kg / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// Mass and reference radius of the central body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeParams {
    /// Geometric mass `M` in meters. `M = 0` is flat space.
    pub mass: f64,
    /// Surface radius `R_E` in meters.
    pub surface_radius: f64,
}

impl SpacetimeParams {
    pub fn new(mass: f64, surface_radius: f64) -> Result<Self> {
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(WignerError::InvalidParameter(format!("mass must be finite and >= 0, got {mass}")));
        }
        if !(surface_radius.is_finite() && surface_radius > 2.0 * mass && surface_radius > 0.0) {
            return Err(WignerError::RadiusInsideHorizon { r: surface_radius, horizon: 2.0 * mass });
        }
        Ok(Self { mass, surface_radius })
    }

    /// Builds the parameters from a mass in kilograms and a radius in meters.
    pub fn from_si(mass_kg: f64, surface_radius: f64) -> Result<Self> {
        Self::new(geometric_mass(mass_kg), surface_radius)
    }

    /// The Earth with `M = GM/c^2` from the geocentric constant.
    pub fn earth() -> Self {
        Self { mass: EARTH_GM / (SPEED_OF_LIGHT * SPEED_OF_LIGHT), surface_radius: EARTH_RADIUS }
    }

    /// Same radius, mass chosen so that `M / R_E = ratio`.
    pub fn with_mass_ratio(&self, ratio: f64) -> Result<Self> {
        Self::new(ratio * self.surface_radius, self.surface_radius)
    }

    /// Expansion parameter `sqrt(M / R_E)`.
    pub fn epsilon(&self) -> f64 {
        (self.mass / self.surface_radius).sqrt()
    }

    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.mass
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        if r > 2.0 * self.mass && r.is_finite() {
            Ok(())
        } else {
            Err(WignerError::RadiusInsideHorizon { r, horizon: 2.0 * self.mass })
        }
    }

    /// `f(r) = 1 - 2M/r`.
    pub fn lapse(&self, r: f64) -> Result<f64> {
        self.check_radius(r)?;
        Ok(1.0 - 2.0 * self.mass / r)
    }
}

pub(crate) fn check_polar(theta: f64) -> Result<()> {
    if theta > POLE_EXCLUSION && theta < std::f64::consts::PI - POLE_EXCLUSION {
        Ok(())
    } else {
        Err(WignerError::PolarSingularity { theta })
    }
}

/// A spacetime event in Schwarzschild coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Point {
    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        Self { t, r, theta, phi }
    }

    /// A point at `t = 0`.
    pub fn spatial(r: f64, theta: f64, phi: f64) -> Self {
        Self { t: 0.0, r, theta, phi }
    }
}

/// Contravariant components in the coordinate basis `(t, r, theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        Self([t, r, theta, phi])
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.map(|x| c * x))
    }

    pub fn plus(&self, other: &FourVector) -> Self {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0) {
            *o += b;
        }
        Self(out)
    }

    pub fn minus(&self, other: &FourVector) -> Self {
        self.plus(&other.scaled(-1.0))
    }

    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Diagonal metric components at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricDiag {
    pub g_tt: f64,
    pub g_rr: f64,
    pub g_thth: f64,
    pub g_phph: f64,
}

impl MetricDiag {
    pub fn components(&self) -> [f64; 4] {
        [self.g_tt, self.g_rr, self.g_thth, self.g_phph]
    }

    /// `g(u, v)`.
    pub fn dot(&self, u: &FourVector, v: &FourVector) -> f64 {
        self.components().iter().enumerate().map(|(i, g)| g * u[i] * v[i]).sum()
    }

    /// Index-lowered components `g_{mu nu} v^nu`.
    pub fn lower(&self, v: &FourVector) -> [f64; 4] {
        let g = self.components();
        [g[0] * v[0], g[1] * v[1], g[2] * v[2], g[3] * v[3]]
    }
}

/// `diag(-f, 1/f, r^2, r^2 sin^2 theta)`.
pub fn metric_at(params: &SpacetimeParams, p: &Point) -> Result<MetricDiag> {
    let f = params.lapse(p.r)?;
    let s = p.theta.sin();
    Ok(MetricDiag { g_tt: -f, g_rr: 1.0 / f, g_thth: p.r * p.r, g_phph: p.r * p.r * s * s })
}

/// Christoffel symbols `Gamma^sigma_{mu rho}` indexed `[sigma][mu][rho]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelTable(pub [[[f64; 4]; 4]; 4]);

impl ChristoffelTable {
    pub fn get(&self, sigma: usize, mu: usize, rho: usize) -> f64 {
        self.0[sigma][mu][rho]
    }

    /// `Gamma^sigma_{mu rho} u^mu v^rho`.
    pub fn contract(&self, u: &FourVector, v: &FourVector) -> FourVector {
        let mut out = [0.0; 4];
        for (s, o) in out.iter_mut().enumerate() {
            for m in 0..4 {
                for r in 0..4 {
                    *o += self.0[s][m][r] * u[m] * v[r];
                }
            }
        }
        FourVector(out)
    }
}

pub fn christoffel_at(params: &SpacetimeParams, p: &Point) -> Result<ChristoffelTable> {
    let f = params.lapse(p.r)?;
    check_polar(p.theta)?;
    let (m, r) = (params.mass, p.r);
    let (s, c) = p.theta.sin_cos();
    let mut g = [[[0.0; 4]; 4]; 4];
    let mut set = |a: usize, b: usize, d: usize, v: f64| {
        g[a][b][d] = v;
        g[a][d][b] = v;
    };
    set(0, 0, 1, m / (r * r * f));
    set(1, 0, 0, m * f / (r * r));
    set(1, 1, 1, -m / (r * r * f));
    set(1, 2, 2, -r * f);
    set(1, 3, 3, -r * f * s * s);
    set(2, 1, 2, 1.0 / r);
    set(2, 3, 3, -s * c);
    set(3, 1, 3, 1.0 / r);
    set(3, 2, 3, c / s);
    Ok(ChristoffelTable(g))
}

/// Frequency (times hbar) measured by the static observer at `r` for a photon
/// of energy constant `energy`: `E_p / sqrt(f(r))`.
pub fn frequency_at(params: &SpacetimeParams, energy: f64, r: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(WignerError::InvalidParameter(format!("photon energy must be > 0, got {energy}")));
    }
    Ok(energy / params.lapse(r)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Metric through a path independent of `metric_at`.
    fn metric_oracle(m: f64, r: f64, th: f64) -> [f64; 4] {
        let f = (r - 2.0 * m) / r;
        [-f, r / (r - 2.0 * m), r.powi(2), (r * th.sin()).powi(2)]
    }

    /// Christoffels from central differences of the metric and its inverse.
    fn christoffel_oracle(m: f64, r: f64, th: f64) -> [[[f64; 4]; 4]; 4] {
        let dg = |k: usize| -> [f64; 4] {
            let mut out = [0.0; 4];
            let (h, plus, minus) = match k {
                1 => {
                    let h = r * 1e-5;
                    (h, metric_oracle(m, r + h, th), metric_oracle(m, r - h, th))
                }
                2 => {
                    let h = 1e-5;
                    (h, metric_oracle(m, r, th + h), metric_oracle(m, r, th - h))
                }
                _ => return out,
            };
            for i in 0..4 {
                out[i] = (plus[i] - minus[i]) / (2.0 * h);
            }
            out
        };
        let d: Vec<[f64; 4]> = (0..4).map(dg).collect();
        let g = metric_oracle(m, r, th);
        let mut out = [[[0.0; 4]; 4]; 4];
        for s in 0..4 {
            for mu in 0..4 {
                for rho in 0..4 {
                    // diagonal metric: only nu = s contributes
                    let dmu = if s == mu { d[rho][s] } else { 0.0 };
                    let drho = if s == rho { d[mu][s] } else { 0.0 };
                    let dnu = if mu == rho { d[s][mu] } else { 0.0 };
                    out[s][mu][rho] = 0.5 / g[s] * (dmu + drho - dnu);
                }
            }
        }
        out
    }

    #[test]
    fn flat_limit_metric() {
        let params = SpacetimeParams::new(0.0, 0.5).unwrap();
        let g = metric_at(&params, &Point::spatial(1.0, PI / 2.0, 0.0)).unwrap();
        assert_eq!(g.components(), [-1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn horizon_limit_and_rejection() {
        let params = SpacetimeParams::new(1.0, 3.0).unwrap();
        let near = metric_at(&params, &Point::spatial(2.0 * (1.0 + 1e-9), 1.0, 0.0)).unwrap();
        assert!(near.g_tt < 0.0 && near.g_tt > -1e-8);
        assert!(matches!(metric_at(&params, &Point::spatial(2.0, 1.0, 0.0)), Err(WignerError::RadiusInsideHorizon { .. })));
        assert!(SpacetimeParams::new(1.0, 1.5).is_err());
    }

    #[test]
    fn earth_lapse_matches_exact_evaluation() {
        // 40-digit evaluation of 1 - 2M/r: 0.99999999860775388479045675718...
        let params = SpacetimeParams::new(4.435e-3, 6.371e6).unwrap();
        let f = params.lapse(6.371e6).unwrap();
        assert!((f - 0.999_999_998_607_753_884_790_456_757).abs() <= f64::EPSILON);
        let g = metric_at(&params, &Point::spatial(6.371e6, 1.0, 0.0)).unwrap();
        assert_eq!(g.g_tt * g.g_rr, -1.0);
    }

    #[test]
    fn earth_constants_give_small_epsilon() {
        let e = SpacetimeParams::earth();
        assert!((e.mass - 4.435e-3).abs() < 1e-6);
        // r_S ~ 9 mm and R_E ~ 6341 km
        let quoted = SpacetimeParams::new(4.5e-3, 6.341e6).unwrap();
        for p in [e, quoted] {
            let eps = p.epsilon();
            assert!(eps > 1e-5 && eps < 1e-4, "{eps}");
        }
        assert!((SpacetimeParams::from_si(5.972e24, 6.371e6).unwrap().mass - 4.435e-3).abs() < 1e-5);
    }

    #[test]
    fn christoffel_closed_forms() {
        let params = SpacetimeParams::new(0.3, 1.0).unwrap();
        let (r, th) = (2.0, 0.8);
        let gam = christoffel_at(&params, &Point::spatial(r, th, 0.0)).unwrap();
        let f = 1.0 - 0.6 / r;
        assert!((gam.get(0, 0, 1) - 0.3 / (r * r * f)).abs() < 1e-15);
        assert_eq!(gam.get(1, 0, 2), 0.0);
        for s in 0..4 {
            for m in 0..4 {
                for q in 0..4 {
                    assert_eq!(gam.get(s, m, q), gam.get(s, q, m));
                }
            }
        }
    }

    #[test]
    fn christoffel_flat_space_keeps_only_sphere_terms() {
        let params = SpacetimeParams::new(0.0, 1.0).unwrap();
        let th = 0.7;
        let gam = christoffel_at(&params, &Point::spatial(3.0, th, 0.0)).unwrap();
        assert_eq!(gam.get(0, 0, 1), 0.0);
        assert_eq!(gam.get(1, 0, 0), 0.0);
        assert_eq!(gam.get(1, 1, 1), 0.0);
        assert_eq!(gam.get(2, 3, 3), -th.sin() * th.cos());
    }

    #[test]
    fn metric_and_christoffels_match_finite_difference_oracle() {
        let params = SpacetimeParams::new(0.05, 1.0).unwrap();
        for i in 0..10 {
            let r = 1.0 + 9.0 * i as f64 / 9.0;
            for j in 0..7 {
                let th = 0.1 + (PI - 0.2) * j as f64 / 6.0;
                let p = Point::spatial(r, th, 0.3);
                let g = metric_at(&params, &p).unwrap().components();
                let go = metric_oracle(params.mass, r, th);
                for k in 0..4 {
                    assert!((g[k] - go[k]).abs() <= 1e-12 * go[k].abs());
                }
                let gam = christoffel_at(&params, &p).unwrap();
                let oracle = christoffel_oracle(params.mass, r, th);
                for s in 0..4 {
                    for m in 0..4 {
                        for q in 0..4 {
                            let (a, b) = (gam.get(s, m, q), oracle[s][m][q]);
                            assert!((a - b).abs() <= 1e-6 * b.abs().max(1e-8), "[{s}][{m}][{q}] {a} vs {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lapse_times_inverse_is_one() {
        let params = SpacetimeParams::new(0.2, 1.0).unwrap();
        for r in [1.0, 1.7, 3.3, 10.0, 1e4] {
            let g = metric_at(&params, &Point::spatial(r, 1.0, 0.0)).unwrap();
            assert!((-g.g_tt * g.g_rr - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn frequency_relations() {
        let flat = SpacetimeParams::new(0.0, 1.0).unwrap();
        assert_eq!(frequency_at(&flat, 2.5, 4.0).unwrap(), 2.5);
        let params = SpacetimeParams::new(0.1, 1.0).unwrap();
        let at_surface = frequency_at(&params, 1.0, 1.0).unwrap();
        assert!((at_surface - 1.0 / (1.0f64 - 0.2).sqrt()).abs() < 1e-15);
        assert!(frequency_at(&params, 1.0, 1.5).unwrap() > frequency_at(&params, 1.0, 2.5).unwrap());
        assert!(frequency_at(&params, 0.0, 1.5).is_err());
    }
}
