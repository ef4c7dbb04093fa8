//! Plot-ready rate and cumulative-phase profiles along one segment.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::frames::GaugeChoice;
use crate::geodesics::{sample_segment_with, GeodesicSegment};
use crate::numerics::Tolerances;
use crate::transport::{wigner_phase_between, wigner_rate_numeric, wigner_rate_perturbative};

pub const PROFILE_HEADER: [&str; 5] = ["r", "theta", "wigner_rate_numeric", "wigner_rate_perturbative", "cumulative_phase"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub theta: f64,
    pub wigner_rate_numeric: f64,
    pub wigner_rate_perturbative: f64,
    /// Numeric phase accumulated from `r_start` to `r`.
    pub cumulative_phase: f64,
}

/// `n` rows at equally spaced radii from `r_start` to `r_end`.
pub fn emit_profile(seg: &GeodesicSegment, gauge: &GaugeChoice, n: usize, tol: &Tolerances) -> Result<Vec<ProfileRow>> {
    sample_segment_with(seg, n, tol)?
        .into_iter()
        .map(|p| {
            let radial = seg.consts.kappa == 0.0;
            Ok(ProfileRow {
                r: p.r,
                theta: p.theta,
                wigner_rate_numeric: wigner_rate_numeric(&seg.params, &seg.consts, &p, gauge)?,
                wigner_rate_perturbative: wigner_rate_perturbative(&seg.params, &seg.consts, p.r)?,
                cumulative_phase: if radial { 0.0 } else { wigner_phase_between(seg, gauge, seg.r_start, p.r, tol)?.phase },
            })
        })
        .collect()
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the profile with its fixed header.
pub fn write_profile_csv<W: Write>(rows: &[ProfileRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    for r in rows {
        w.write_record([r.r, r.theta, r.wigner_rate_numeric, r.wigner_rate_perturbative, r.cumulative_phase].map(format_float))?;
    }
    w.flush()
}
