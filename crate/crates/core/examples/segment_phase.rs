//! Segment phase by quadrature, by the closed form, and by transporting a
//! polarization vector with the ODE integrator.

use wigner_phase::frames::{GaugeChoice, PolarizationState};
use wigner_phase::geodesics::GeodesicSegment;
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};
use wigner_phase::numerics::Tolerances;
use wigner_phase::transport::{transport_polarization_with, wigner_phase_closed, wigner_phase_numeric};

fn main() -> wigner_phase::Result<()> {
    let params = SpacetimeParams::earth();
    let gauge = GaugeChoice::chosen();
    for dtheta in [1e-3, 1e-2, 3e-2] {
        let seg = GeodesicSegment::between(params, 1.0, (EARTH_RADIUS, 1.0), (4.216e7, 1.0 + dtheta), 0.0)?;
        let numeric = wigner_phase_numeric(&seg, &gauge)?;
        let closed = wigner_phase_closed(&seg)?;
        let out = transport_polarization_with(&seg, PolarizationState::new(1.0, 0.0), &gauge, &Tolerances::default())?;
        println!(
            "dtheta {dtheta:.0e}: quadrature {:.12e} (+/- {:.1e}), closed {:.12e}, transport {:.12e}, norm drift {:.1e}",
            numeric.phase, numeric.error_estimate, closed.phase, out.rotation_angle, out.norm_drift
        );
    }
    Ok(())
}
