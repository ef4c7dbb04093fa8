//! A relay through two satellites at different altitudes.

use wigner_phase::frames::GaugeChoice;
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};
use wigner_phase::schemes::{evaluate_scheme, SchemePath};

fn main() -> wigner_phase::Result<()> {
    let params = SpacetimeParams::earth();
    let path = SchemePath::two_satellites(params, 1.0, 1.0, (2.0e7, 1.1), (4.216e7, 1.25), Some(1.2), 0.0)?;
    let b = evaluate_scheme(&path, &GaugeChoice::chosen())?;
    for s in &b.segments {
        println!(
            "segment {}: {:.3} R_E -> {:.3} R_E, phase {:+.10e}",
            s.index,
            s.r_start / EARTH_RADIUS,
            s.r_end / EARTH_RADIUS,
            s.numeric.phase
        );
    }
    println!("total {:+.13e}, closed form {:+.13e}", b.total, b.closed_form_total.unwrap_or(f64::NAN));
    Ok(())
}
