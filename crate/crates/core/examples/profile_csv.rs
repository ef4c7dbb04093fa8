//! Write the rate and cumulative phase along a GEO uplink as CSV to stdout.

use wigner_phase::cli::profile::{emit_profile, write_profile_csv};
use wigner_phase::frames::GaugeChoice;
use wigner_phase::geodesics::GeodesicSegment;
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};
use wigner_phase::numerics::Tolerances;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seg = GeodesicSegment::between(SpacetimeParams::earth(), 1.0, (EARTH_RADIUS, 1.0), (4.216e7, 1.01), 0.0)?;
    let rows = emit_profile(&seg, &GaugeChoice::chosen(), 11, &Tolerances::default())?;
    write_profile_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
