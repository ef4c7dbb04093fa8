//! Wigner rotation rate along a ray: exact connection against the
//! lowest-order formula, and the reference gauges that do not rotate.

use wigner_phase::frames::GaugeChoice;
use wigner_phase::geodesics::{solve_kappa, GeodesicSegment, NullConstants, Sign};
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};
use wigner_phase::transport::{rate_profile, wigner_rate_perturbative};

fn main() -> wigner_phase::Result<()> {
    let params = SpacetimeParams::earth();
    let (r1, r2) = (EARTH_RADIUS, 4.216e7);
    let kappa = solve_kappa(&params, r1, r2, 0.01)?;
    let consts = NullConstants::planar(1.0, kappa, Sign::Plus, Sign::Plus)?;
    let seg = GeodesicSegment::new(params, consts, r1, r2, 1.0, 0.0)?;

    println!("{:>14} {:>16} {:>16}", "r [m]", "numeric", "perturbative");
    for s in rate_profile(&seg, &GaugeChoice::chosen(), 6)? {
        println!("{:>14.6e} {:>16.8e} {:>16.8e}", s.r, s.rate, wigner_rate_perturbative(&params, &consts, s.r)?);
    }
    for gauge in [GaugeChoice::zero(), GaugeChoice::plus_inv_r()] {
        let max = rate_profile(&seg, &gauge, 6)?.iter().map(|s| s.rate.abs()).fold(0.0, f64::max);
        println!("{} gauge: max |rate| = {max:e}", gauge.label());
    }
    Ok(())
}
