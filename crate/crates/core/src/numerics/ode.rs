//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4), FSAL).

use crate::error::{Result, WignerError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self { rel: 1e-12, abs: 1e-14 }
    }
}

/// Outcome of one integration run.
#[derive(Debug, Clone, Copy)]
pub struct OdeSolution<const N: usize> {
    pub y: [f64; N],
    pub steps: u32,
    pub evaluations: u32,
}

const MAX_STEPS: u32 = 1_000_000;
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], tol: OdeTolerance) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = tol.abs + tol.rel * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
pub fn integrate<F, const N: usize>(f: F, x0: f64, x1: f64, y0: [f64; N], tol: OdeTolerance) -> Result<OdeSolution<N>>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if x0 == x1 {
        return Ok(OdeSolution { y: y0, steps: 0, evaluations: 0 });
    }
    if !(tol.rel > 0.0 && tol.abs >= 0.0) {
        return Err(WignerError::InvalidParameter("ODE tolerances must be positive".into()));
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(x, &y)?;
    let mut evaluations = 1;
    // Conservative start; the controller grows it quickly.
    let mut h = span * tol.rel.powf(0.2).min(0.1);
    let mut steps = 0;
    let mut rejected_last = false;
    loop {
        if steps >= MAX_STEPS {
            return Err(WignerError::Numerical(format!("ODE integration exceeded {MAX_STEPS} steps at x = {x}")));
        }
        let remaining = (x1 - x) * dir;
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        let hs = step * dir;
        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                *yi += hs * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            k[s] = f(x + C[s] * hs, &ys)?;
        }
        evaluations += 6;
        let mut y_new = y;
        let mut err = [0.0; N];
        for i in 0..N {
            y_new[i] += hs * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>();
            err[i] = hs * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
        }
        let en = error_norm(&err, &y, &y_new, tol);
        if !en.is_finite() {
            return Err(WignerError::Numerical(format!("non-finite ODE state near x = {x}")));
        }
        let factor = if en == 0.0 { FAC_MAX } else { (SAFETY * en.powf(-0.2)).clamp(FAC_MIN, FAC_MAX) };
        if en <= 1.0 {
            steps += 1;
            x = if last { x1 } else { x + hs };
            y = y_new;
            k[0] = k[6];
            if last {
                return Ok(OdeSolution { y, steps, evaluations });
            }
            h = step * if rejected_last { factor.min(1.0) } else { factor };
            rejected_last = false;
        } else {
            h = step * factor.min(1.0);
            rejected_last = true;
        }
        if h <= 8.0 * f64::EPSILON * x.abs().max(span) {
            return Err(WignerError::Numerical(format!("ODE step size underflow at x = {x}")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_full_period() {
        let sol =
            integrate(|_x, y: &[f64; 2]| Ok([y[1], -y[0]]), 0.0, 2.0 * std::f64::consts::PI, [1.0, 0.0], OdeTolerance::default()).unwrap();
        assert!((sol.y[0] - 1.0).abs() < 1e-11);
        assert!(sol.y[1].abs() < 1e-11);
    }

    #[test]
    fn explicit_time_dependence() {
        for rel in [1e-6, 1e-9, 1e-12] {
            let sol = integrate(|t, _y: &[f64; 1]| Ok([(3.0 * t).cos()]), 0.0, 10.0, [0.0], OdeTolerance { rel, abs: rel * 1e-2 }).unwrap();
            assert!((sol.y[0] - 30f64.sin() / 3.0).abs() < 100.0 * rel, "{rel}");
            // fifth order: step count grows like rel^(-1/5)
            assert!(sol.steps < (60.0 * rel.powf(-0.2)) as u32, "{rel}: {} steps", sol.steps);
        }
    }

    #[test]
    fn integrates_backwards() {
        let sol = integrate(|_x, y: &[f64; 1]| Ok([y[0]]), 1.0, 0.0, [1.0f64.exp()], OdeTolerance::default()).unwrap();
        assert!((sol.y[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn propagates_rhs_failure() {
        let r = integrate(
            |x, y: &[f64; 1]| {
                if x > 0.5 {
                    Err(WignerError::Numerical("boom".into()))
                } else {
                    Ok([y[0]])
                }
            },
            0.0,
            1.0,
            [1.0],
            OdeTolerance::default(),
        );
        assert!(matches!(r, Err(WignerError::Numerical(m)) if m == "boom"));
    }
}
