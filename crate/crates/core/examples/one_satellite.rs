//! Earth to GEO and back to a second ground station, closed back to the
//! emitter: the total Wigner phase in the chosen and the zero gauge.

use wigner_phase::frames::GaugeChoice;
use wigner_phase::geometry::SpacetimeParams;
use wigner_phase::schemes::{evaluate_scheme, phase_one_satellite_smallangle, SchemePath};

fn main() -> wigner_phase::Result<()> {
    let params = SpacetimeParams::earth();
    let r_s = 4.216e7;
    let path = SchemePath::one_satellite(params, 1.0, 1.0, (r_s, 1.0), 1.01, 0.0)?;
    for gauge in [GaugeChoice::chosen(), GaugeChoice::zero()] {
        let b = evaluate_scheme(&path, &gauge)?;
        println!("{} gauge", gauge.label());
        for s in &b.segments {
            println!(
                "  segment {}: r {:.4e} -> {:.4e}, kappa {:.6e}, phase {:+.10e}",
                s.index, s.r_start, s.r_end, s.kappa, s.numeric.phase
            );
        }
        println!("  total {:+.13e} (+/- {:.1e}), closed form {:?}", b.total, b.total_error, b.closed_form_total);
    }
    println!("small-angle form: {:+.13e}", phase_one_satellite_smallangle(&params, r_s, 0.0, 0.01));
    Ok(())
}
