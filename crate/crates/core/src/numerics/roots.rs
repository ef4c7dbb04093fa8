//! Bracketed root finding (Brent's method).

use crate::error::{Result, WignerError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerance {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than `x_tol + 4 eps |x|`.
    pub x_tol: f64,
    pub max_iter: usize,
}

/// Finds a root of `f` in `[a, b]`; `f(a)` and `f(b)` must differ in sign.
pub fn brent<F>(mut f: F, a: f64, b: f64, tol: RootTolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(WignerError::Numerical(format!("root not bracketed: f({a:e}) = {fa:e}, f({b:e}) = {fb:e}")));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let m = 0.5 * (c - b);
        let xtol = tol.x_tol + 4.0 * f64::EPSILON * b.abs();
        if fb.abs() <= tol.f_tol || m.abs() <= xtol {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b)?;
    }
    Err(WignerError::Numerical("Brent iteration limit reached".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let tol = RootTolerance { f_tol: 0.0, x_tol: 1e-15, max_iter: 100 };
        let x = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, tol).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn finds_root_of_transcendental() {
        let tol = RootTolerance { f_tol: 0.0, x_tol: 1e-15, max_iter: 100 };
        let x = brent(|x: f64| Ok(x.cos() - x), 0.0, 1.0, tol).unwrap();
        assert!((x.cos() - x).abs() < 1e-15);
    }

    #[test]
    fn rejects_unbracketed_interval() {
        let tol = RootTolerance { f_tol: 0.0, x_tol: 1e-12, max_iter: 100 };
        assert!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, tol).is_err());
    }
}
