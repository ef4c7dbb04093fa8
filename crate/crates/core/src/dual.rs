//! Forward-mode differentiation for the closed-form frame fields.
//!
//! The tetrad components are written once, generically over [`Scalar`].
//! Evaluating them on plain `f64` gives the frame at a point; evaluating them
//! on [`Dual`] numbers seeded with a tangent vector gives the exact
//! directional derivative of every component along that tangent.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the closed-form frame expressions.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self> {
    fn cst(x: f64) -> Self;
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn scale(self, k: f64) -> Self {
        self * Self::cst(k)
    }

    fn square(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// A value together with its derivative along one seeded direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub const fn new(re: f64, eps: f64) -> Self {
        Self { re, eps }
    }

    pub const fn constant(re: f64) -> Self {
        Self { re, eps: 0.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.eps * o.re + self.re * o.eps)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let q = self.re / o.re;
        Dual::new(q, (self.eps - q * o.eps) / o.re)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Scalar for Dual {
    fn cst(x: f64) -> Self {
        Dual::constant(x)
    }
    fn value(self) -> f64 {
        self.re
    }
    fn sqrt(self) -> Self {
        // An identically vanishing radicand (flat limit, saturated gauges)
        // arrives as (0, 0); its root is identically zero as well.
        if self.re == 0.0 && self.eps == 0.0 {
            return Dual::constant(0.0);
        }
        let s = self.re.sqrt();
        Dual::new(s, 0.5 * self.eps / s)
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -self.eps * self.re.sin())
    }
}
