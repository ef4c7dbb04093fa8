use thiserror::Error;

pub type Result<T, E = WignerError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WignerError {
    #[error("radius {r} m is not outside the horizon 2M = {horizon} m")]
    RadiusInsideHorizon { r: f64, horizon: f64 },

    #[error("polar angle {theta} rad is inside the excluded pole band")]
    PolarSingularity { theta: f64 },

    #[error("point lies beyond a turning point: {quantity} radicand is {radicand:e}")]
    ForbiddenRegion { quantity: &'static str, radicand: f64 },

    #[error("radial turning point inside ({r_min}, {r_max}) for kappa = {kappa:e}")]
    TurningPointInside { r_min: f64, r_max: f64, kappa: f64 },

    #[error("polar sweep {delta_theta:e} rad is unreachable (at most {max_sweep:e} rad without a turning point)")]
    Unreachable { delta_theta: f64, max_sweep: f64 },

    #[error("degenerate radii: both endpoints at r = {r} m")]
    DegenerateRadii { r: f64 },

    #[error("kappa = {kappa:e} m^2 reaches the bound {bound:e} m^2")]
    DegenerateKappa { kappa: f64, bound: f64 },

    #[error("gauge outside its domain at r = {r} m: Q - r^5 B^2 sin^2(theta) = {radicand:e}")]
    GaugeDomainViolation { r: f64, radicand: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("path does not match the {0} template")]
    SchemeTemplateMismatch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("segment {index}: {source}")]
    InSegment {
        index: usize,
        #[source]
        source: Box<WignerError>,
    },
}

impl WignerError {
    pub(crate) fn in_segment(self, index: usize) -> Self {
        WignerError::InSegment { index, source: Box::new(self) }
    }
}
