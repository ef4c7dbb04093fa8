//! Helicity states and the action of a Wigner phase on them.
//!
//! A helicity eigenstate picks up `exp(i s Psi)`, so superpositions of
//! opposite helicities acquire a relative phase `2 Psi`. Momentum wave packets
//! are represented by a finite list of discrete modes.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WignerError};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn value(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

impl From<Helicity> for i8 {
    fn from(h: Helicity) -> i8 {
        match h {
            Helicity::Plus => 1,
            Helicity::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Helicity {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            other => Err(format!("helicity must be +1 or -1, got {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelicityMode {
    pub amplitude: Complex64,
    pub helicity: Helicity,
    pub mode_id: u32,
}

/// Single-photon state over discrete momentum modes and both helicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelicityState {
    pub modes: Vec<HelicityMode>,
}

impl HelicityState {
    /// Normalizes the given amplitudes; each `(mode_id, helicity)` may appear once.
    pub fn new(modes: Vec<HelicityMode>) -> Result<Self> {
        for (i, a) in modes.iter().enumerate() {
            if !(a.amplitude.re.is_finite() && a.amplitude.im.is_finite()) {
                return Err(WignerError::InvalidParameter("amplitudes must be finite".into()));
            }
            if modes[..i].iter().any(|b| b.mode_id == a.mode_id && b.helicity == a.helicity) {
                return Err(WignerError::InvalidParameter(format!("duplicate entry for mode {}", a.mode_id)));
            }
        }
        let n = modes.iter().map(|m| m.amplitude.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(WignerError::InvalidParameter("state has zero norm".into()));
        }
        Ok(Self { modes: modes.into_iter().map(|m| HelicityMode { amplitude: m.amplitude / n, ..m }).collect() })
    }

    /// `a_+ |+> + a_- |->` in a single mode.
    pub fn superposition(a_plus: Complex64, a_minus: Complex64) -> Result<Self> {
        Self::new(vec![
            HelicityMode { amplitude: a_plus, helicity: Helicity::Plus, mode_id: 0 },
            HelicityMode { amplitude: a_minus, helicity: Helicity::Minus, mode_id: 0 },
        ])
    }

    /// `(|+> + |->) / sqrt(2)`.
    pub fn equal_superposition() -> Self {
        Self::superposition(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).expect("nonzero state")
    }

    pub fn norm_sqr(&self) -> f64 {
        self.modes.iter().map(|m| m.amplitude.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    fn amplitude(&self, mode_id: u32, h: Helicity) -> Complex64 {
        self.modes.iter().find(|m| m.mode_id == mode_id && m.helicity == h).map_or(Complex64::new(0.0, 0.0), |m| m.amplitude)
    }

    fn mode_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.modes.iter().map(|m| m.mode_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Reduced helicity density matrix `rho[s][s']` (index 0 is `+`).
    pub fn reduced_helicity(&self) -> [[Complex64; 2]; 2] {
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for id in self.mode_ids() {
            let a = [self.amplitude(id, Helicity::Plus), self.amplitude(id, Helicity::Minus)];
            for i in 0..2 {
                for j in 0..2 {
                    rho[i][j] += a[i] * a[j].conj();
                }
            }
        }
        rho
    }

    /// `tr(rho^2)` of the reduced helicity state; 1 when helicity and momentum
    /// are unentangled.
    pub fn helicity_purity(&self) -> f64 {
        let rho = self.reduced_helicity();
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                tr += rho[i][j] * rho[j][i];
            }
        }
        tr.re / self.norm_sqr().powi(2)
    }
}

/// Multiplies each amplitude by `exp(i s Psi)`.
pub fn apply_wigner_phase(state: &HelicityState, psi: f64) -> HelicityState {
    apply_mode_phases(state, |_| psi)
}

/// Mode-dependent phases `Psi(mode_id)`.
pub fn apply_mode_phases<F: Fn(u32) -> f64>(state: &HelicityState, psi: F) -> HelicityState {
    HelicityState {
        modes: state
            .modes
            .iter()
            .map(|m| HelicityMode { amplitude: m.amplitude * Complex64::cis(m.helicity.value() * psi(m.mode_id)), ..*m })
            .collect(),
    }
}

/// Outcome of projecting onto `(|+> +- |->) / sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceReadout {
    pub p_plus: f64,
    pub p_minus: f64,
    pub visibility: f64,
    /// `arg(sum_m a_+ conj(a_-))` in `(-pi, pi]`.
    pub phase: f64,
}

pub fn interference_visibility(state: &HelicityState) -> InterferenceReadout {
    let norm = state.norm_sqr();
    let (mut p_plus, mut p_minus) = (0.0, 0.0);
    let mut coherence = Complex64::new(0.0, 0.0);
    for id in state.mode_ids() {
        let (a, b) = (state.amplitude(id, Helicity::Plus), state.amplitude(id, Helicity::Minus));
        p_plus += (a + b).norm_sqr() / 2.0;
        p_minus += (a - b).norm_sqr() / 2.0;
        coherence += a * b.conj();
    }
    InterferenceReadout {
        p_plus: p_plus / norm,
        p_minus: p_minus / norm,
        visibility: 2.0 * coherence.norm() / norm,
        phase: coherence.arg(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiPhotonKind {
    BellPlus,
    BellMinus,
    Ghz,
    ProductQubits,
}

/// `m` photons sharing one momentum mode each, as amplitudes over the `2^m`
/// helicity configurations. Bit `i` of the index set means photon `i` has
/// helicity `-`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiPhotonState {
    pub kind: MultiPhotonKind,
    pub m: usize,
    pub amplitudes: Vec<Complex64>,
    /// Unwrapped phase accumulated between `|+...+>` and `|-...->`.
    pub relative_phase: f64,
}

const MAX_PHOTONS: usize = 20;

impl MultiPhotonState {
    pub fn new(kind: MultiPhotonKind, m: usize) -> Result<Self> {
        let m = match kind {
            MultiPhotonKind::BellPlus | MultiPhotonKind::BellMinus => 2,
            _ => m,
        };
        if m == 0 || m > MAX_PHOTONS {
            return Err(WignerError::InvalidParameter(format!("photon count must be in 1..={MAX_PHOTONS}, got {m}")));
        }
        let dim = 1usize << m;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match kind {
            MultiPhotonKind::BellPlus | MultiPhotonKind::BellMinus => {
                // |+-> is index 0b10 (photon 1 is '-'), |-+> is 0b01
                amplitudes[0b10] = h;
                amplitudes[0b01] = if kind == MultiPhotonKind::BellPlus { h } else { -h };
            }
            MultiPhotonKind::Ghz => {
                amplitudes[0] = h;
                amplitudes[dim - 1] = h;
            }
            MultiPhotonKind::ProductQubits => {
                let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
                amplitudes.iter_mut().for_each(|x| *x = a);
            }
        }
        Ok(Self { kind, m, amplitudes, relative_phase: 0.0 })
    }

    pub fn bell_plus() -> Self {
        Self::new(MultiPhotonKind::BellPlus, 2).expect("valid size")
    }

    pub fn bell_minus() -> Self {
        Self::new(MultiPhotonKind::BellMinus, 2).expect("valid size")
    }

    pub fn ghz(m: usize) -> Result<Self> {
        Self::new(MultiPhotonKind::Ghz, m)
    }

    pub fn product(m: usize) -> Result<Self> {
        Self::new(MultiPhotonKind::ProductQubits, m)
    }

    fn helicity_sum(&self, index: usize, phases: &[f64]) -> f64 {
        (0..self.m).map(|i| if index >> i & 1 == 1 { -phases[i] } else { phases[i] }).sum()
    }

    /// Each photon `i` acquires `exp(i s_i Psi_i)`.
    pub fn apply_phases(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.m {
            return Err(WignerError::InvalidParameter(format!("expected {} phases, got {}", self.m, phases.len())));
        }
        let amplitudes = self.amplitudes.iter().enumerate().map(|(idx, a)| a * Complex64::cis(self.helicity_sum(idx, phases))).collect();
        Ok(Self { amplitudes, relative_phase: self.relative_phase + 2.0 * phases.iter().sum::<f64>(), ..self.clone() })
    }

    /// Every photon acquires the same Wigner phase.
    pub fn apply_wigner_phase(&self, psi: f64) -> Self {
        self.apply_phases(&vec![psi; self.m]).expect("one phase per photon")
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &MultiPhotonState) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `arg(a_{+...+} conj(a_{-...-}))` read off the amplitudes, in `(-pi, pi]`.
    pub fn observed_relative_phase(&self) -> f64 {
        (self.amplitudes[0] * self.amplitudes[self.amplitudes.len() - 1].conj()).arg()
    }
}

/// Fidelity of a Bell state with itself after both photons acquire `psi`.
pub fn bell_invariance_check(kind: MultiPhotonKind, psi: f64) -> Result<f64> {
    let s = match kind {
        MultiPhotonKind::BellPlus => MultiPhotonState::bell_plus(),
        MultiPhotonKind::BellMinus => MultiPhotonState::bell_minus(),
        other => return Err(WignerError::InvalidParameter(format!("{other:?} is not a Bell state"))),
    };
    Ok(s.fidelity(&s.apply_wigner_phase(psi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhzPhase {
    pub unwrapped: f64,
    /// `unwrapped` reduced to `[0, 2 pi)`.
    pub wrapped: f64,
}

/// Relative phase `2 m Psi` of an `m`-photon GHZ state.
pub fn ghz_relative_phase(m: usize, psi: f64) -> Result<GhzPhase> {
    if m == 0 {
        return Err(WignerError::InvalidParameter("GHZ state needs at least one photon".into()));
    }
    let unwrapped = 2.0 * m as f64 * psi;
    Ok(GhzPhase { unwrapped, wrapped: unwrapped.rem_euclid(TAU) })
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w > std::f64::consts::PI {
        w - TAU
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_phase_is_identity() {
        let s = HelicityState::superposition(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.9)).unwrap();
        assert_eq!(apply_wigner_phase(&s, 0.0), s);
    }

    #[test]
    fn eigenstate_acquires_global_sign_at_pi() {
        let s = HelicityState::superposition(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let out = apply_wigner_phase(&s, PI);
        assert!((out.modes[0].amplitude + Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn superposition_relative_phase_is_twice_psi() {
        let out = apply_wigner_phase(&HelicityState::equal_superposition(), 0.21);
        let r = out.modes[0].amplitude / out.modes[1].amplitude;
        assert!((r.arg() - 0.42).abs() < 1e-15);
    }

    #[test]
    fn readout_ports() {
        let s = HelicityState::equal_superposition();
        let r0 = interference_visibility(&s);
        assert!((r0.p_plus - 1.0).abs() < 1e-15 && r0.p_minus.abs() < 1e-15);
        let r = interference_visibility(&apply_wigner_phase(&s, PI / 4.0));
        assert!((r.p_plus - 0.5).abs() < 1e-15);
        assert!((r.visibility - 1.0).abs() < 1e-15);
        assert!((r.phase - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn mode_dependent_phases_entangle_helicity_with_momentum() {
        let c = Complex64::new(0.5, 0.0);
        let s = HelicityState::new(vec![
            HelicityMode { amplitude: c, helicity: Helicity::Plus, mode_id: 0 },
            HelicityMode { amplitude: c, helicity: Helicity::Minus, mode_id: 0 },
            HelicityMode { amplitude: c, helicity: Helicity::Plus, mode_id: 1 },
            HelicityMode { amplitude: c, helicity: Helicity::Minus, mode_id: 1 },
        ])
        .unwrap();
        assert!((s.helicity_purity() - 1.0).abs() < 1e-12);
        let same = apply_mode_phases(&s, |_| 0.4);
        assert!((same.helicity_purity() - 1.0).abs() < 1e-12);
        let diff = apply_mode_phases(&s, |id| if id == 0 { 0.0 } else { 0.6 });
        assert!(diff.helicity_purity() < 1.0 - 1e-3);
        assert!(interference_visibility(&diff).visibility < 1.0);
    }

    #[test]
    fn invalid_states() {
        assert!(HelicityState::superposition(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
        let m = HelicityMode { amplitude: Complex64::new(1.0, 0.0), helicity: Helicity::Plus, mode_id: 3 };
        assert!(HelicityState::new(vec![m, m]).is_err());
        assert!(serde_json::from_str::<Helicity>("0").is_err());
        assert!(MultiPhotonState::ghz(0).is_err());
        assert!(ghz_relative_phase(0, 0.1).is_err());
    }

    #[test]
    fn bell_states_are_invariant() {
        for kind in [MultiPhotonKind::BellPlus, MultiPhotonKind::BellMinus] {
            for psi in [0.0, 0.37, PI] {
                assert!((bell_invariance_check(kind, psi).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        assert!(bell_invariance_check(MultiPhotonKind::Ghz, 0.1).is_err());
    }

    #[test]
    fn ghz_and_product_amplify() {
        assert_eq!(ghz_relative_phase(1, 0.2).unwrap().unwrapped, 0.4);
        assert!((ghz_relative_phase(3, 0.1).unwrap().unwrapped - 0.6).abs() < 1e-15);
        assert_eq!(ghz_relative_phase(5, 0.0).unwrap().unwrapped, 0.0);
        let g = MultiPhotonState::ghz(3).unwrap().apply_wigner_phase(0.1);
        assert!((g.observed_relative_phase() - 0.6).abs() < 1e-12);
        assert!((g.relative_phase - 0.6).abs() < 1e-15);
        let p = MultiPhotonState::product(4).unwrap().apply_wigner_phase(0.05);
        assert!((p.observed_relative_phase() - 0.4).abs() < 1e-12);
        assert!((p.norm_sqr() - 1.0).abs() < 1e-15);
        let big = ghz_relative_phase(4, 1.0).unwrap();
        assert!((big.wrapped - (8.0 - TAU)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn phases_preserve_norm(re in -1.0f64..1.0, im in -1.0f64..1.0, psi in -10.0f64..10.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let s = HelicityState::superposition(Complex64::new(re, im), Complex64::new(0.4, -0.1)).unwrap();
            let out = apply_wigner_phase(&s, psi);
            prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-15);
        }

        #[test]
        fn readout_recovers_twice_psi(psi in -1.5f64..1.5) {
            let r = interference_visibility(&apply_wigner_phase(&HelicityState::equal_superposition(), psi));
            prop_assert!((wrap_angle(r.phase - 2.0 * psi)).abs() < 1e-12);
        }
    }
}
