//! Shrink the mass at fixed geometry and watch the numeric minus closed-form
//! difference fall as the cube of M/R.

use wigner_phase::frames::GaugeChoice;
use wigner_phase::geodesics::Sign;
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};
use wigner_phase::numerics::Tolerances;
use wigner_phase::schemes::Waypoint;
use wigner_phase::studies::{scheme_scaling, segment_scaling, small_angle_chain, SegmentSpec, DEFAULT_MASS_RATIOS};

fn main() -> wigner_phase::Result<()> {
    let base = SpacetimeParams::earth();
    let tol = Tolerances::default();
    let re = EARTH_RADIUS;
    let spec = SegmentSpec { r_start: re, r_end: 4.0 * re, theta_start: 1.0, kappa: 0.4 * re * re, eps_theta: Sign::Plus };
    let seg = segment_scaling(&base, &spec, &DEFAULT_MASS_RATIOS, &tol)?;
    for p in &seg.points {
        println!("M/R {:.0e}: difference {:+.6e}", p.mass_ratio, p.difference);
    }
    println!("segment slope {:.4}, C = {:.4e}", seg.slope.unwrap_or(f64::NAN), seg.c_bound);

    let waypoints = [
        Waypoint::Lab { r: re, theta: 1.0 },
        Waypoint::Satellite { r: 4.216e7, theta: 1.15, energy_factor: 1.0 },
        Waypoint::Lab { r: re, theta: 1.4 },
        Waypoint::Lab { r: re, theta: 1.0 },
    ];
    let scheme = scheme_scaling(&base, &waypoints, &GaugeChoice::chosen(), &DEFAULT_MASS_RATIOS, &tol)?;
    println!("scheme total slope {:.4}", scheme.total.slope.unwrap_or(f64::NAN));

    let chain = small_angle_chain(&base, 4.216e7, 0.5, 1.0, &[1e-1, 1e-2, 1e-3, 1e-4], &tol)?;
    for p in &chain.points {
        println!("angle ratio {:.0e}: phase rel. error {:.3e}, kappa rel. error {:.3e}", p.ratio, p.phase_rel_error, p.kappa_rel_error);
    }
    Ok(())
}
