//! Scenario configuration: SI inputs, explicit angle units, and validation.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frames::GaugeChoice;
use crate::geometry::{geometric_mass, SpacetimeParams, POLE_EXCLUSION, SPEED_OF_LIGHT};
use crate::numerics::Tolerances;
use crate::quantum::{HelicityState, MultiPhotonKind};
use crate::schemes::Waypoint;
use crate::studies::DEFAULT_MASS_RATIOS;

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Polar angle in radians. Files may give a bare number (radians) or a string
/// with an explicit `deg` or `rad` suffix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleInput", into = "f64")]
pub struct Angle(pub f64);

#[derive(Deserialize)]
#[serde(untagged)]
enum AngleInput {
    Radians(f64),
    Text(String),
}

impl TryFrom<AngleInput> for Angle {
    type Error = String;
    fn try_from(a: AngleInput) -> Result<Self, String> {
        match a {
            AngleInput::Radians(x) => Ok(Angle(x)),
            AngleInput::Text(s) => s.parse(),
        }
    }
}

impl std::str::FromStr for Angle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let (num, scale) = if let Some(v) = t.strip_suffix("deg") {
            (v, std::f64::consts::PI / 180.0)
        } else if let Some(v) = t.strip_suffix("rad") {
            (v, 1.0)
        } else {
            return Err(format!("angle \"{s}\" needs a unit suffix: deg or rad"));
        };
        let x: f64 = num.trim().parse().map_err(|_| format!("cannot parse angle \"{s}\""))?;
        Ok(Angle(x * scale))
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// Central body in SI units: exactly one of `mass_kg` or `gm` (m^3/s^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gm: Option<f64>,
    pub radius_m: f64,
}

impl SpacetimeConfig {
    pub fn params(&self) -> Result<SpacetimeParams, CliError> {
        let mass = match (self.mass_kg, self.gm) {
            (Some(kg), None) => geometric_mass(kg),
            (None, Some(gm)) => gm / (SPEED_OF_LIGHT * SPEED_OF_LIGHT),
            _ => return Err(CliError::config("spacetime", "give exactly one of mass_kg or gm")),
        };
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(CliError::config("spacetime", "mass must be positive and finite"));
        }
        if !(self.radius_m.is_finite() && self.radius_m > 2.0 * mass) {
            return Err(CliError::config(
                "spacetime.radius_m",
                &format!("radius {} m is not outside the Schwarzschild radius {} m", self.radius_m, 2.0 * mass),
            ));
        }
        SpacetimeParams::new(mass, self.radius_m).map_err(|e| CliError::config("spacetime", &e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteConfig {
    pub r: f64,
    pub theta: Angle,
    #[serde(default = "one")]
    pub energy_factor: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WaypointConfig {
    /// Laboratory; `r` defaults to the surface radius.
    Lab {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
        theta: Angle,
    },
    Satellite {
        r: f64,
        theta: Angle,
        #[serde(default = "one")]
        energy_factor: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "template", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeConfig {
    OneSatellite {
        lab_a: Angle,
        satellite: SatelliteConfig,
        lab_b: Angle,
    },
    TwoSatellites {
        lab_a: Angle,
        satellite_1: SatelliteConfig,
        satellite_2: SatelliteConfig,
        /// Omitted for the direct-return variant.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lab_b: Option<Angle>,
    },
    CustomPath {
        waypoints: Vec<WaypointConfig>,
    },
}

impl SchemeConfig {
    pub fn waypoints(&self, surface_radius: f64) -> Vec<Waypoint> {
        let lab = |t: Angle| Waypoint::Lab { r: surface_radius, theta: t.0 };
        let sat = |s: &SatelliteConfig| Waypoint::Satellite { r: s.r, theta: s.theta.0, energy_factor: s.energy_factor };
        match self {
            SchemeConfig::OneSatellite { lab_a, satellite, lab_b } => vec![lab(*lab_a), sat(satellite), lab(*lab_b), lab(*lab_a)],
            SchemeConfig::TwoSatellites { lab_a, satellite_1, satellite_2, lab_b } => {
                let mut w = vec![lab(*lab_a), sat(satellite_1), sat(satellite_2)];
                w.extend(lab_b.map(lab));
                w.push(lab(*lab_a));
                w
            }
            SchemeConfig::CustomPath { waypoints } => waypoints
                .iter()
                .map(|w| match *w {
                    WaypointConfig::Lab { r, theta } => Waypoint::Lab { r: r.unwrap_or(surface_radius), theta: theta.0 },
                    WaypointConfig::Satellite { r, theta, energy_factor } => Waypoint::Satellite { r, theta: theta.0, energy_factor },
                })
                .collect(),
        }
    }
}

/// Initial helicity state the total phase is applied to.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    #[default]
    EqualSuperposition,
    /// Amplitudes as `[re, im]`; normalized on use.
    Superposition {
        a_plus: [f64; 2],
        a_minus: [f64; 2],
    },
    BellPlus,
    BellMinus,
    Ghz {
        m: usize,
    },
    Product {
        m: usize,
    },
}

impl StateConfig {
    pub fn multi_photon_kind(&self) -> Option<(MultiPhotonKind, usize)> {
        match *self {
            StateConfig::BellPlus => Some((MultiPhotonKind::BellPlus, 2)),
            StateConfig::BellMinus => Some((MultiPhotonKind::BellMinus, 2)),
            StateConfig::Ghz { m } => Some((MultiPhotonKind::Ghz, m)),
            StateConfig::Product { m } => Some((MultiPhotonKind::ProductQubits, m)),
            _ => None,
        }
    }

    pub fn single_photon(&self) -> Option<Result<HelicityState, CliError>> {
        let c = |a: [f64; 2]| Complex64::new(a[0], a[1]);
        match *self {
            StateConfig::EqualSuperposition => Some(Ok(HelicityState::equal_superposition())),
            StateConfig::Superposition { a_plus, a_minus } => {
                Some(HelicityState::superposition(c(a_plus), c(a_minus)).map_err(|e| CliError::config("state", &e.to_string())))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonScalingConfig {
    #[serde(default = "default_ratios")]
    pub mass_ratios: Vec<f64>,
}

fn default_ratios() -> Vec<f64> {
    DEFAULT_MASS_RATIOS.to_vec()
}

impl Default for EpsilonScalingConfig {
    fn default() -> Self {
        Self { mass_ratios: default_ratios() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaSweepConfig {
    /// Index among the geodesic segments of the path.
    #[serde(default)]
    pub segment: usize,
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_scaling: Option<EpsilonScalingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_sweep: Option<KappaSweepConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(default)]
    pub segment: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    101
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self { segment: 0, samples: default_samples() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub spacetime: SpacetimeConfig,
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub gauge: GaugeChoice,
    #[serde(default)]
    pub state: StateConfig,
    /// Photon energy at the emitter (arbitrary units; phases do not depend on it).
    #[serde(default = "one")]
    pub energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
}

const MAX_PROFILE_SAMPLES: usize = 1_000_000;

fn check_polar(path: &str, theta: f64) -> Result<(), CliError> {
    if !(theta > POLE_EXCLUSION && theta < std::f64::consts::PI - POLE_EXCLUSION) {
        return Err(CliError::config(path, &format!("polar angle {theta} rad is outside ({POLE_EXCLUSION}, pi - {POLE_EXCLUSION})")));
    }
    Ok(())
}

pub(crate) fn check_relative_tolerance(rel: f64) -> Result<(), CliError> {
    if !(1e-15..=1e-3).contains(&rel) {
        return Err(CliError::config("tolerance", &format!("relative tolerance must be in [1e-15, 1e-3], got {rel}")));
    }
    Ok(())
}

impl ScenarioConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::config("", &e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<SpacetimeParams, CliError> {
        self.spacetime.params()
    }

    pub fn waypoints(&self) -> Result<Vec<Waypoint>, CliError> {
        Ok(self.scheme.waypoints(self.params()?.surface_radius))
    }

    pub fn phi0(&self) -> f64 {
        self.phi0.map_or(0.0, |a| a.0)
    }

    /// Tolerances from the file, overridden by `override_rel` when given.
    pub fn tolerances(&self, override_rel: Option<f64>) -> Result<Tolerances, CliError> {
        match override_rel.or(self.tolerances.map(|t| t.relative)) {
            Some(rel) => {
                check_relative_tolerance(rel)?;
                Ok(Tolerances::with_relative(rel))
            }
            None => Ok(Tolerances::default()),
        }
    }

    /// Static checks: versions, units, horizon and pole exclusions, sizes.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(
                "schema_version",
                &format!("unsupported schema_version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let params = self.params()?;
        let horizon = params.schwarzschild_radius();
        let waypoints = self.waypoints()?;
        if waypoints.len() < 2 {
            return Err(CliError::config("scheme.waypoints", "a path needs at least two waypoints"));
        }
        for (i, w) in waypoints.iter().enumerate() {
            let (r, theta) = w.position();
            if !(r.is_finite() && r > horizon) {
                return Err(CliError::config(
                    &format!("scheme.waypoints[{i}].r"),
                    &format!("radius {r} m is not outside 2M = {horizon} m"),
                ));
            }
            check_polar(&format!("scheme.waypoints[{i}].theta"), theta)?;
            if let Waypoint::Satellite { energy_factor, .. } = w {
                if !(*energy_factor > 0.0 && energy_factor.is_finite()) {
                    return Err(CliError::config(&format!("scheme.waypoints[{i}].energy_factor"), "energy_factor must be positive"));
                }
            }
        }
        if !(self.energy > 0.0 && self.energy.is_finite()) {
            return Err(CliError::config("energy", "photon energy must be positive"));
        }
        if let Some(phi) = self.phi0 {
            if !phi.0.is_finite() {
                return Err(CliError::config("phi0", "phi0 must be finite"));
            }
        }
        if let crate::frames::GaugeFunction::Custom(spline) = &self.gauge.b {
            let (lo, hi) = spline.domain();
            let (rmin, rmax) = waypoints.iter().map(|w| w.position().0).fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r), b.max(r)));
            if lo > rmin || hi < rmax {
                return Err(CliError::config(
                    "gauge.b.custom",
                    &format!("knots cover [{lo}, {hi}] m but the path spans [{rmin}, {rmax}] m"),
                ));
            }
        }
        if let Some((_, m)) = self.state.multi_photon_kind() {
            if m == 0 || m > 20 {
                return Err(CliError::config("state.m", "photon count must be in 1..=20"));
            }
        }
        if let Some(s) = self.state.single_photon() {
            s?;
        }
        if let Some(study) = &self.study {
            if let Some(eps) = &study.epsilon_scaling {
                if eps.mass_ratios.len() < 2 || eps.mass_ratios.iter().any(|r| !(*r > 0.0 && *r < 0.5)) {
                    return Err(CliError::config("study.epsilon_scaling.mass_ratios", "need at least two ratios in (0, 0.5)"));
                }
            }
            if let Some(k) = &study.kappa_sweep {
                if k.fractions.is_empty() || k.fractions.iter().any(|f| !(0.0..1.0).contains(f)) {
                    return Err(CliError::config("study.kappa_sweep.fractions", "fractions must lie in [0, 1)"));
                }
            }
        }
        if let Some(p) = &self.profile {
            if !(2..=MAX_PROFILE_SAMPLES).contains(&p.samples) {
                return Err(CliError::config("profile.samples", &format!("samples must be in 2..={MAX_PROFILE_SAMPLES}")));
            }
        }
        self.tolerances(None)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> serde_json::Value {
        serde_json::json!({
            "schema_version": 1,
            "spacetime": { "gm": 3.986004418e14, "radius_m": 6.371e6 },
            "scheme": {
                "template": "one_satellite",
                "lab_a": 1.0,
                "satellite": { "r": 4.216e7, "theta": "57.8deg" },
                "lab_b": "1.02rad"
            }
        })
    }

    #[test]
    fn angles_need_units_in_strings() {
        assert_eq!("90deg".parse::<Angle>().unwrap().0, std::f64::consts::FRAC_PI_2);
        assert_eq!(" 0.5 rad".parse::<Angle>().unwrap().0, 0.5);
        assert!("0.5".parse::<Angle>().is_err());
        assert!("abc deg".parse::<Angle>().is_err());
        let a: Angle = serde_json::from_str("0.25").unwrap();
        assert_eq!(a.0, 0.25);
    }

    #[test]
    fn minimal_config_defaults() {
        let cfg = ScenarioConfig::from_json(&minimal().to_string()).unwrap();
        assert_eq!(cfg.gauge, GaugeChoice::chosen());
        assert_eq!(cfg.state, StateConfig::EqualSuperposition);
        assert_eq!(cfg.energy, 1.0);
        assert_eq!(cfg.waypoints().unwrap().len(), 4);
        assert_eq!(cfg.tolerances(None).unwrap(), Tolerances::default());
        assert_eq!(cfg.tolerances(Some(1e-10)).unwrap().quad_rel, 1e-10);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = |f: &dyn Fn(&mut serde_json::Value)| {
            let mut v = minimal();
            f(&mut v);
            ScenarioConfig::from_json(&v.to_string()).unwrap_err()
        };
        assert!(matches!(bad(&|v| v["schema_version"] = 2.into()), CliError::ConfigInvalid { .. }));
        bad(&|v| v["spacetime"]["mass_kg"] = 1.0.into());
        bad(&|v| v["spacetime"]["radius_m"] = 1e-3.into());
        bad(&|v| v["scheme"]["lab_a"] = "1.0".into());
        bad(&|v| v["scheme"]["lab_a"] = 0.0.into());
        bad(&|v| v["scheme"]["satellite"]["r"] = 1e-3.into());
        bad(&|v| v["unknown"] = 1.into());
        bad(&|v| v["state"] = serde_json::json!({"kind": "ghz", "m": 0}));
        bad(&|v| v["tolerances"] = serde_json::json!({"relative": 0.5}));
        bad(&|v| v["study"] = serde_json::json!({"kappa_sweep": {"fractions": [1.0]}}));
        bad(&|v| v["gauge"] = serde_json::json!({"b": {"custom": {"knots": [[6.4e6, 0.0], [7e6, 0.0]]}}}));
        let e = bad(&|v| v["scheme"]["template"] = "three_satellites".into());
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn two_satellite_and_custom_waypoints() {
        let mut v = minimal();
        v["scheme"] = serde_json::json!({
            "template": "two_satellites",
            "lab_a": 1.0,
            "satellite_1": { "r": 2.0e7, "theta": 1.05 },
            "satellite_2": { "r": 3.0e7, "theta": 1.1 }
        });
        let cfg = ScenarioConfig::from_json(&v.to_string()).unwrap();
        assert_eq!(cfg.waypoints().unwrap().len(), 4);
        v["scheme"] = serde_json::json!({
            "template": "custom_path",
            "waypoints": [
                { "kind": "lab", "theta": 1.0 },
                { "kind": "satellite", "r": 2.0e7, "theta": 1.05, "energy_factor": 0.5 }
            ]
        });
        let cfg = ScenarioConfig::from_json(&v.to_string()).unwrap();
        assert_eq!(cfg.waypoints().unwrap()[0], Waypoint::Lab { r: 6.371e6, theta: 1.0 });
    }
}
