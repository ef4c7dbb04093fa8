//! Cross-module invariants on random geometry.

use proptest::prelude::*;

use num_complex::Complex64;
use wigner_phase::frames::{GaugeChoice, PolarizationState};
use wigner_phase::geodesics::{kappa_max, GeodesicSegment, NullConstants, Sign};
use wigner_phase::geometry::{SpacetimeParams, EARTH_RADIUS};
use wigner_phase::numerics::Tolerances;
use wigner_phase::quantum::{apply_wigner_phase, interference_visibility, wrap_angle, HelicityState};
use wigner_phase::transport::{transport_polarization_with, wigner_phase_between, wigner_phase_closed, wigner_phase_numeric};

fn segment(m_ratio: f64, r1: f64, r2: f64, frac: f64, energy: f64) -> GeodesicSegment {
    let p = SpacetimeParams::earth().with_mass_ratio(m_ratio).unwrap();
    let (a, b) = (r1 * EARTH_RADIUS, r2 * EARTH_RADIUS);
    let c = NullConstants::planar(energy, frac * kappa_max(&p, a, b).unwrap(), Sign::of(b - a), Sign::Plus).unwrap();
    GeodesicSegment::new(p, c, a, b, 1.2, 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phase_is_additive_over_split_points(r1 in 1.0..2.0f64, r2 in 3.0..7.0f64, frac in 0.0..0.9f64, split in 0.05..0.95f64) {
        let seg = segment(7e-10, r1, r2, frac, 1.0);
        let tol = Tolerances::default();
        let g = GaugeChoice::chosen();
        let mid = seg.r_start + split * (seg.r_end - seg.r_start);
        let whole = wigner_phase_numeric(&seg, &g).unwrap();
        let first = wigner_phase_between(&seg, &g, seg.r_start, mid, &tol).unwrap();
        let second = wigner_phase_between(&seg, &g, mid, seg.r_end, &tol).unwrap();
        let err = whole.error_estimate + first.error_estimate + second.error_estimate;
        prop_assert!((first.phase + second.phase - whole.phase).abs() <= 3.0 * err + 1e-15 * whole.phase.abs());
    }

    #[test]
    fn energy_drops_out_bit_for_bit(frac in 0.0..0.9f64, inbound: bool, e in 1e-6..1e6f64) {
        let (r1, r2) = if inbound { (5.0, 1.3) } else { (1.3, 5.0) };
        let a = segment(1e-4, r1, r2, frac, 1.0);
        let b = segment(1e-4, r1, r2, frac, e);
        let g = GaugeChoice::chosen();
        prop_assert_eq!(wigner_phase_numeric(&a, &g).unwrap().phase.to_bits(), wigner_phase_numeric(&b, &g).unwrap().phase.to_bits());
        prop_assert_eq!(wigner_phase_closed(&a).unwrap().phase.to_bits(), wigner_phase_closed(&b).unwrap().phase.to_bits());
    }

    #[test]
    fn closed_form_tracks_numeric_at_earth_mass(r1 in 1.0..2.0f64, r2 in 3.0..7.0f64, q in 0.0..0.5f64, inbound: bool) {
        let p = SpacetimeParams::earth();
        let (a, b) = if inbound { (r2, r1) } else { (r1, r2) };
        let (a, b) = (a * EARTH_RADIUS, b * EARTH_RADIUS);
        // away from kappa -> r_min^2, where the lowest-order form is not uniform
        let c = NullConstants::planar(1.0, q * a.min(b).powi(2), Sign::of(b - a), Sign::Plus).unwrap();
        let seg = GeodesicSegment::new(p, c, a, b, 1.2, 0.0).unwrap();
        let numeric = wigner_phase_numeric(&seg, &GaugeChoice::chosen()).unwrap();
        let closed = wigner_phase_closed(&seg).unwrap().phase;
        let bound = p.epsilon() * closed.abs() + 3.0 * numeric.error_estimate;
        prop_assert!((numeric.phase - closed).abs() <= bound, "{} vs {}", numeric.phase - closed, bound);
    }

    #[test]
    fn transport_rotates_without_stretching(frac in 0.0..0.9f64, psi1 in -1.0..1.0f64, psi2 in -1.0..1.0f64) {
        prop_assume!(psi1.hypot(psi2) > 1e-3);
        let seg = segment(1e-3, 1.2, 4.0, frac, 1.0);
        let start = PolarizationState::new(psi1, psi2);
        let out = transport_polarization_with(&seg, start, &GaugeChoice::chosen(), &Tolerances::default()).unwrap();
        prop_assert!(out.norm_drift <= 1e-12);
        let expected = start.rotated(out.rotation_angle);
        prop_assert!((out.state.psi1 - expected.psi1).abs() <= 1e-12 && (out.state.psi2 - expected.psi2).abs() <= 1e-12);
    }

    #[test]
    fn superposition_readout_is_twice_the_phase(re in -1.0..1.0f64, im in -1.0..1.0f64, psi in -1.5..1.5f64) {
        prop_assume!(re.hypot(im) > 1e-3);
        let state = HelicityState::superposition(Complex64::new(1.0, 0.0), Complex64::new(re, im)).unwrap();
        let before = interference_visibility(&state);
        let after = interference_visibility(&apply_wigner_phase(&state, psi));
        prop_assert!((after.visibility - before.visibility).abs() <= 1e-12);
        prop_assert!(wrap_angle(after.phase - before.phase - 2.0 * psi).abs() <= 1e-12);
    }
}
