//! What a Wigner phase does to helicity states: a relative phase for a
//! superposition, nothing for Bell states, 2m-fold amplification for GHZ.

use num_complex::Complex64;
use wigner_phase::quantum::{
    apply_mode_phases, apply_wigner_phase, bell_invariance_check, ghz_relative_phase, interference_visibility, Helicity, HelicityMode,
    HelicityState, MultiPhotonKind,
};

fn main() -> wigner_phase::Result<()> {
    let psi = 4.1375051226254465e-7;

    let out = apply_wigner_phase(&HelicityState::equal_superposition(), psi);
    let readout = interference_visibility(&out);
    println!("superposition: phase {:.6e} (2 psi = {:.6e}), visibility {:.12}", readout.phase, 2.0 * psi, readout.visibility);

    for kind in [MultiPhotonKind::BellPlus, MultiPhotonKind::BellMinus] {
        println!("{kind:?}: fidelity {:.15}", bell_invariance_check(kind, psi)?);
    }
    for m in [1, 2, 5, 10] {
        println!("GHZ m = {m}: relative phase {:.6e}", ghz_relative_phase(m, psi)?.unwrapped);
    }

    // Two momentum modes picking up different phases lose helicity purity.
    let a = Complex64::new(0.5, 0.0);
    let state = HelicityState::new(vec![
        HelicityMode { amplitude: a, helicity: Helicity::Plus, mode_id: 0 },
        HelicityMode { amplitude: a, helicity: Helicity::Minus, mode_id: 0 },
        HelicityMode { amplitude: a, helicity: Helicity::Plus, mode_id: 1 },
        HelicityMode { amplitude: a, helicity: Helicity::Minus, mode_id: 1 },
    ])?;
    for spread in [0.0, 0.5, 1.0] {
        let out = apply_mode_phases(&state, |id| id as f64 * spread);
        println!("mode phase spread {spread}: helicity purity {:.6}", out.helicity_purity());
    }
    Ok(())
}
