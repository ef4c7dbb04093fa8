//! Build adapted tetrads in several gauges and check their algebra.

use wigner_phase::frames::{adapted_tetrad_general, gauge_shift, project_polarization, GaugeChoice};
use wigner_phase::geodesics::{null_vector_general, NullConstants, Sign};
use wigner_phase::geometry::{Point, SpacetimeParams};

fn main() -> wigner_phase::Result<()> {
    let params = SpacetimeParams::new(0.05, 1.0)?;
    let consts = NullConstants::new(1.0, 0.4, 2.0, Sign::Plus, Sign::Minus)?;
    let p = Point::spatial(3.0, 1.1, 0.2);
    let k = null_vector_general(&params, &consts, &p)?;

    for gauge in [GaugeChoice::chosen(), GaugeChoice::zero(), GaugeChoice::plus_inv_r(), GaugeChoice::minus_inv_r()] {
        let t = adapted_tetrad_general(&params, &consts, &p, &gauge)?;
        let psi = t.e1.scaled(0.3).plus(&t.e2.scaled(-0.7));
        let before = project_polarization(&t, &psi);
        let after = project_polarization(&t, &gauge_shift(&psi, &k, 10.0));
        println!(
            "{:<12} residual {:.1e}  components ({:+.6}, {:+.6})  shift change {:.1e}",
            gauge.label(),
            t.orthonormality_residual(),
            before.psi1,
            before.psi2,
            (after.psi1 - before.psi1).abs().max((after.psi2 - before.psi2).abs())
        );
    }
    Ok(())
}
