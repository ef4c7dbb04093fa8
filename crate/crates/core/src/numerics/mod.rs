//! Numerical building blocks: quadrature, root finding, ODE integration and fits.

pub mod fit;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use fit::{loglog_fit, PowerLawFit};
pub use ode::OdeTolerance;
pub use quadrature::{QuadResult, QuadTolerance};
pub use roots::RootTolerance;

/// Tolerances shared by every numerical path in the crate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    pub quad_rel: f64,
    pub quad_abs: f64,
    pub ode_rel: f64,
    pub ode_abs: f64,
    pub root_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quad_rel: 1e-12, quad_abs: 1e-14, ode_rel: 1e-12, ode_abs: 1e-14, root_rel: 1e-12 }
    }
}

impl Tolerances {
    /// Overrides every relative tolerance with `rel`.
    pub fn with_relative(rel: f64) -> Self {
        Self { quad_rel: rel, ode_rel: rel, root_rel: rel, ..Self::default() }
    }

    pub fn quad(&self) -> QuadTolerance {
        QuadTolerance { abs: self.quad_abs, rel: self.quad_rel, max_intervals: 2000 }
    }

    pub fn ode(&self) -> OdeTolerance {
        OdeTolerance { rel: self.ode_rel, abs: self.ode_abs }
    }
}
