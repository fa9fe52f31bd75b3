//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries `(value, d1, d2)` — a function value together with its
//! first and second derivative with respect to a single scalar variable.
//! Arithmetic propagates all three components through the exact product,
//! quotient and chain rules, so evaluating a parsed expression at
//! `Jet2::variable(t)` yields `(f(t), f'(t), f''(t))` with no truncation
//! error beyond ordinary floating-point rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn constant(c: f64) -> Self {
        Jet2 { value: c, d1: 0.0, d2: 0.0 }
    }

    /// The identity function at `t`: value `t`, slope 1, curvature 0.
    pub const fn variable(t: f64) -> Self {
        Jet2 { value: t, d1: 1.0, d2: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        Jet2 {
            value: e,
            d1: e * self.d1,
            d2: e * (self.d1 * self.d1 + self.d2),
        }
    }

    pub fn ln(self) -> Self {
        let v = self.value;
        let r = self.d1 / v;
        Jet2 {
            value: v.ln(),
            d1: r,
            d2: self.d2 / v - r * r,
        }
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        let d1 = self.d1 / (2.0 * s);
        Jet2 {
            value: s,
            d1,
            d2: self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * self.value * s),
        }
    }

    /// Power with a constant exponent: `u^c`.
    pub fn powc(self, c: f64) -> Self {
        let u = self.value;
        let val = u.powf(c);
        let um1 = u.powf(c - 1.0);
        let um2 = u.powf(c - 2.0);
        Jet2 {
            value: val,
            d1: c * um1 * self.d1,
            d2: c * (c - 1.0) * um2 * self.d1 * self.d1 + c * um1 * self.d2,
        }
    }

    /// General power `u^w = exp(w ln u)`; requires `u > 0`.
    pub fn pow(self, w: Jet2) -> Self {
        (w * self.ln()).exp()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + rhs.value,
            d1: self.d1 + rhs.d1,
            d2: self.d2 + rhs.d2,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value - rhs.value,
            d1: self.d1 - rhs.d1,
            d2: self.d2 - rhs.d2,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value * rhs.value,
            d1: self.d1 * rhs.value + self.value * rhs.d1,
            d2: self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        // From f = v·g: v' = (f' - v g')/g, v'' = (f'' - 2 v' g' - v g'')/g.
        let v = self.value / rhs.value;
        let d1 = (self.d1 - v * rhs.d1) / rhs.value;
        let d2 = (self.d2 - 2.0 * d1 * rhs.d1 - v * rhs.d2) / rhs.value;
        Jet2 { value: v, d1, d2 }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 { value: -self.value, d1: -self.d1, d2: -self.d2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn exp_jet_matches_closed_form() {
        let t = Jet2::variable(1.0);
        let j = t.exp();
        let e = std::f64::consts::E;
        assert!(close(j.value, e, 1e-15));
        assert!(close(j.d1, e, 1e-15));
        assert!(close(j.d2, e, 1e-15));
    }

    #[test]
    fn quotient_rule() {
        // h(t) = exp(t)/(1+t^2); hand-derived at t = 0.7.
        let t = 0.7;
        let j = Jet2::variable(t).exp() / (Jet2::constant(1.0) + Jet2::variable(t) * Jet2::variable(t));
        let e = t.exp();
        let g = 1.0 + t * t;
        let h = e / g;
        let h1 = e * (g - 2.0 * t) / (g * g);
        // h'' = e (g^2 - 4tg + 8t^2 - 2g) / g^3
        let h2 = e * (g * g - 4.0 * t * g + 8.0 * t * t - 2.0 * g) / (g * g * g);
        assert!(close(j.value, h, 1e-14));
        assert!(close(j.d1, h1, 1e-14));
        assert!(close(j.d2, h2, 1e-14));
    }

    #[test]
    fn powc_and_general_pow_agree_on_positive_base() {
        for &t in &[0.3, 1.0, 2.5, 8.0] {
            let base = Jet2::constant(1.0) + Jet2::variable(t);
            let a = base.powc(2.5);
            let b = base.pow(Jet2::constant(2.5));
            assert!(close(a.value, b.value, 1e-13));
            assert!(close(a.d1, b.d1, 1e-13));
            assert!(close(a.d2, b.d2, 1e-13));
        }
    }

    #[test]
    fn ln_sqrt_chain() {
        // sqrt(ln(t)) at t = 5
        let t = 5.0_f64;
        let j = Jet2::variable(t).ln().sqrt();
        let l = t.ln();
        let s = l.sqrt();
        assert!(close(j.value, s, 1e-15));
        assert!(close(j.d1, 1.0 / (2.0 * t * s), 1e-14));
        // d2 = -(1/(2t^2)) (1/(2 sqrt l) + 1/(4 l^{3/2}))... derive:
        // g = ln t, g' = 1/t, g'' = -1/t^2
        // (sqrt g)'' = g''/(2 sqrt g) - g'^2/(4 g^{3/2})
        let d2 = (-1.0 / (t * t)) / (2.0 * s) - (1.0 / (t * t)) / (4.0 * l * s);
        assert!(close(j.d2, d2, 1e-14));
    }
}
