//! Solve for the Carter-like constant that joins a ground station to a GEO
//! satellite, and compare with the small-angle estimate.

use wigner_phase::geodesics::{kappa_max, kappa_small_angle, small_angle_scale, solve_kappa, GeodesicSegment};
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};

fn main() -> wigner_phase::Result<()> {
    let params = SpacetimeParams::earth();
    let (r1, r2) = (EARTH_RADIUS, 4.216e7);
    println!("kappa_max = {:.6e} m^2", kappa_max(&params, r1, r2)?);
    println!("angle scale = {:.6e} rad", small_angle_scale(r1, r2));
    for dtheta in [1e-4, 1e-3, 1e-2, 5e-2] {
        let exact = solve_kappa(&params, r1, r2, dtheta)?;
        let approx = kappa_small_angle(r1, r2, dtheta)?;
        println!("dtheta {dtheta:.0e}: kappa {exact:.10e}, small-angle {approx:.10e}, rel. diff {:.2e}", (approx - exact).abs() / exact);
    }

    let seg = GeodesicSegment::between(params, 1.0, (r1, 1.0), (r2, 1.01), 0.0)?;
    println!("segment: kappa {:.6e}, theta_end {:.12}", seg.consts.kappa, seg.theta_end()?);
    Ok(())
}
