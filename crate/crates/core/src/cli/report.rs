//! Scenario execution and the JSON report.

use serde::Serialize;

use crate::frames::GaugeChoice;
use crate::geodesics::GeodesicSegment;
use crate::numerics::Tolerances;
use crate::quantum::{
    apply_wigner_phase, bell_invariance_check, ghz_relative_phase, interference_visibility, wrap_angle, InterferenceReadout,
    MultiPhotonKind, MultiPhotonState,
};
use crate::schemes::{evaluate_scheme_with, SchemePath, SchemePhaseBreakdown, SchemeTemplate};
use crate::studies::{
    kappa_sweep, rate_scaling, scheme_scaling, segment_scaling, KappaSweepPoint, ScalingStudy, SchemeScaling, SegmentSpec,
    DEFAULT_MASS_RATIOS,
};
use crate::transport::PhaseMethod;

use super::config::{ScenarioConfig, StudyConfig};
use super::CliError;

pub const REPORT_VERSION: u32 = 1;

/// A phase value with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseEntry {
    pub value: f64,
    pub method: PhaseMethod,
    pub error_estimate: f64,
}

/// Numeric phase, its closed form when known, and the acceptance bound
/// `C eps^3 + 3 error_estimate`.
///
/// This dominates `max(3 error_estimate, C eps^3)`. The sum is needed when the
/// truncation term dominates: rounding in the numeric phase then adds to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseComparison {
    pub numeric: PhaseEntry,
    pub closed_form: Option<PhaseEntry>,
    pub difference: Option<f64>,
    /// `C` from the mass-scaling study of the same geometry.
    pub c_bound: Option<f64>,
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

impl PhaseComparison {
    fn new(numeric: PhaseEntry, closed: Option<f64>, c_bound: Option<f64>, epsilon: f64) -> Self {
        let closed_form = closed.map(|value| PhaseEntry { value, method: PhaseMethod::ClosedForm, error_estimate: 0.0 });
        let difference = closed.map(|c| numeric.value - c);
        let bound = c_bound.map(|c| c * epsilon.powi(3) + 3.0 * numeric.error_estimate);
        let within_bound = difference.zip(bound).map(|(d, b)| d.abs() <= b);
        Self { numeric, closed_form, difference, c_bound, bound, within_bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentRow {
    pub index: usize,
    pub r_start: f64,
    pub r_end: f64,
    pub theta_start: f64,
    pub theta_end: f64,
    pub kappa: f64,
    pub energy: f64,
    pub phase: PhaseComparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacetimeSummary {
    pub mass_m: f64,
    pub surface_radius_m: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSummary {
    pub template: Option<SchemeTemplate>,
    pub closed: bool,
    pub legs: usize,
    pub reflections: usize,
    /// Effect of a reflection on helicity amplitudes.
    pub reflection_model: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantumOutcome {
    SinglePhoton {
        psi: f64,
        readout: InterferenceReadout,
        /// `2 psi` wrapped to `(-pi, pi]`.
        expected_phase: f64,
    },
    Bell {
        state: MultiPhotonKind,
        psi: f64,
        fidelity: f64,
    },
    MultiPhoton {
        state: MultiPhotonKind,
        m: usize,
        psi: f64,
        relative_phase: f64,
        relative_phase_wrapped: f64,
        observed_phase: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonScalingReport {
    pub rate: ScalingStudy,
    pub segment: ScalingStudy,
    pub scheme: ScalingStudy,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StudiesReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_scaling: Option<EpsilonScalingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_sweep: Option<Vec<KappaSweepPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub package: &'static str,
    pub version: &'static str,
    pub report_version: u32,
    pub tolerances: Tolerances,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub spacetime: SpacetimeSummary,
    pub gauge: GaugeChoice,
    pub path: PathSummary,
    pub segments: Vec<SegmentRow>,
    pub total: PhaseComparison,
    /// Mass-scaling study behind the `C` values; absent when the gauge has
    /// no closed form.
    pub scaling: Option<ScalingStudy>,
    pub quantum: QuantumOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub studies: Option<StudiesReport>,
    pub provenance: Provenance,
}

impl Report {
    /// Whether every phase with a closed form sits within its bound.
    pub fn all_within_bounds(&self) -> bool {
        self.segments.iter().map(|s| &s.phase).chain([&self.total]).all(|p| p.within_bound != Some(false))
    }
}

/// The scheme path described by `config`.
pub fn build_path(config: &ScenarioConfig, tol: &Tolerances) -> Result<SchemePath, CliError> {
    let params = config.params()?;
    Ok(SchemePath::from_waypoints_with(params, config.energy, &config.waypoints()?, config.phi0(), tol)?)
}

/// Geodesic segment `index` of the configured path.
pub fn path_segment(config: &ScenarioConfig, index: usize, tol: &Tolerances) -> Result<GeodesicSegment, CliError> {
    let path = build_path(config, tol)?;
    let n = path.segments().count();
    let seg = path.segments().nth(index).copied();
    seg.ok_or_else(|| CliError::config("segment", &format!("segment index {index} out of range, the path has {n} geodesic segments")))
}

fn quantum_outcome(config: &ScenarioConfig, psi: f64) -> Result<QuantumOutcome, CliError> {
    if let Some(state) = config.state.single_photon() {
        let out = apply_wigner_phase(&state?, psi);
        return Ok(QuantumOutcome::SinglePhoton { psi, readout: interference_visibility(&out), expected_phase: wrap_angle(2.0 * psi) });
    }
    let (kind, m) = config.state.multi_photon_kind().expect("state is single- or multi-photon");
    Ok(match kind {
        MultiPhotonKind::BellPlus | MultiPhotonKind::BellMinus => {
            QuantumOutcome::Bell { state: kind, psi, fidelity: bell_invariance_check(kind, psi)? }
        }
        _ => {
            let g = ghz_relative_phase(m, psi)?;
            let evolved = MultiPhotonState::new(kind, m)?.apply_wigner_phase(psi);
            QuantumOutcome::MultiPhoton {
                state: kind,
                m,
                psi,
                relative_phase: g.unwrapped,
                relative_phase_wrapped: g.wrapped,
                observed_phase: evolved.observed_relative_phase(),
            }
        }
    })
}

fn closed_form_known(b: &SchemePhaseBreakdown) -> bool {
    b.closed_form_total.is_some()
}

/// Runs the configured studies (or the default scaling study when `study` is `None`).
pub fn run_studies(config: &ScenarioConfig, study: Option<&StudyConfig>, tol: &Tolerances) -> Result<StudiesReport, CliError> {
    let default = StudyConfig { epsilon_scaling: Some(Default::default()), kappa_sweep: None };
    let study = study.unwrap_or(&default);
    let params = config.params()?;
    let mut out = StudiesReport::default();
    if let Some(eps) = &study.epsilon_scaling {
        let ratios = &eps.mass_ratios;
        let seg = path_segment(config, 0, tol)?;
        let r_mid = 0.5 * (seg.r_start + seg.r_end);
        let spec = SegmentSpec {
            r_start: seg.r_start,
            r_end: seg.r_end,
            theta_start: seg.theta_start,
            kappa: seg.consts.kappa,
            eps_theta: seg.consts.eps_theta,
        };
        out.epsilon_scaling = Some(EpsilonScalingReport {
            rate: rate_scaling(&params, seg.consts.kappa, r_mid, seg.theta_at(r_mid, tol)?, ratios)?,
            segment: segment_scaling(&params, &spec, ratios, tol)?,
            scheme: scheme_scaling(&params, &config.waypoints()?, &GaugeChoice::chosen(), ratios, tol)?.total,
        });
    }
    if let Some(k) = &study.kappa_sweep {
        let seg = path_segment(config, k.segment, tol)?;
        out.kappa_sweep = Some(kappa_sweep(&params, seg.r_start, seg.r_end, seg.theta_start, &k.fractions, tol)?);
    }
    Ok(out)
}

/// Evaluates the configured scheme and assembles the report.
pub fn run_scenario(config: &ScenarioConfig, tol: &Tolerances) -> Result<Report, CliError> {
    let params = config.params()?;
    let eps = params.epsilon();
    let path = build_path(config, tol)?;
    let breakdown = evaluate_scheme_with(&path, &config.gauge, tol)?;
    let scaling: Option<SchemeScaling> = if closed_form_known(&breakdown) {
        Some(scheme_scaling(&params, &config.waypoints()?, &config.gauge, &DEFAULT_MASS_RATIOS, tol)?)
    } else {
        None
    };
    let segments = breakdown
        .segments
        .iter()
        .enumerate()
        .map(|(k, s)| SegmentRow {
            index: s.index,
            r_start: s.r_start,
            r_end: s.r_end,
            theta_start: s.theta_start,
            theta_end: s.theta_end,
            kappa: s.kappa,
            energy: s.energy,
            phase: PhaseComparison::new(
                PhaseEntry { value: s.numeric.phase, method: s.numeric.method, error_estimate: s.numeric.error_estimate },
                s.closed_form.as_ref().map(|c| c.phase),
                scaling.as_ref().map(|sc| sc.segments[k].c_bound),
                eps,
            ),
        })
        .collect();
    let total = PhaseComparison::new(
        PhaseEntry { value: breakdown.total, method: PhaseMethod::Numeric, error_estimate: breakdown.total_error },
        breakdown.closed_form_total,
        scaling.as_ref().map(|sc| sc.total.c_bound),
        eps,
    );
    let studies = match &config.study {
        Some(s) => Some(run_studies(config, Some(s), tol)?),
        None => None,
    };
    Ok(Report {
        spacetime: SpacetimeSummary { mass_m: params.mass, surface_radius_m: params.surface_radius, epsilon: eps },
        gauge: config.gauge.clone(),
        path: PathSummary {
            template: breakdown.template,
            closed: path.closed,
            legs: path.legs.len(),
            reflections: path.reflections.len(),
            reflection_model: "identity_on_helicity",
        },
        segments,
        total,
        scaling: scaling.map(|s| s.total),
        quantum: quantum_outcome(config, breakdown.total)?,
        studies,
        provenance: Provenance {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            report_version: REPORT_VERSION,
            tolerances: *tol,
            config: config.clone(),
        },
    })
}
