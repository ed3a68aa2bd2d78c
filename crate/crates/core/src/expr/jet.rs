//! Truncated Taylor arithmetic.
//!
//! Jets store Taylor coefficients, not derivatives; the accessors convert.

use std::ops::{Add, Mul, Neg, Sub};

/// Operations shared by every truncated Taylor algebra, plus plain `f64`
/// (the order-zero case).
pub trait Taylor:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn scale(self, c: f64) -> Self;
    /// True when every non-constant coefficient is zero.
    fn is_constant(&self) -> bool;
    fn is_finite(&self) -> bool;
    /// Highest retained total order.
    const ORDER: usize;

    /// `phi(self)` given `phi` and its derivatives at `self.value()`.
    /// Entries past [`Self::ORDER`] are ignored.
    fn compose(self, derivs: [f64; 5]) -> Self {
        let delta = self - Self::constant(self.value());
        let mut out = Self::constant(derivs[0]);
        let mut power = Self::constant(1.0);
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate().skip(1).take(Self::ORDER) {
            power = power * delta;
            fact *= k as f64;
            out = out + power.scale(d / fact);
        }
        out
    }
}

impl Taylor for f64 {
    const ORDER: usize = 0;
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn is_constant(&self) -> bool {
        true
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Univariate jet in `s` truncated after the fourth order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet1x4 {
    c: [f64; 5],
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

impl Jet1x4 {
    pub fn variable(s0: f64) -> Self {
        Jet1x4 {
            c: [s0, 1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Build from derivatives `[f, f', f'', f''', f'''']`.
    pub fn from_derivatives(d: [f64; 5]) -> Self {
        Jet1x4 {
            c: std::array::from_fn(|k| d[k] / FACT[k]),
        }
    }

    /// The `k`-th derivative, `k <= 4`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * FACT[k]
    }

    pub fn derivatives(&self) -> [f64; 5] {
        std::array::from_fn(|k| self.derivative(k))
    }
}

impl Add for Jet1x4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet1x4 {
            c: std::array::from_fn(|k| self.c[k] + o.c[k]),
        }
    }
}

impl Sub for Jet1x4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet1x4 {
            c: std::array::from_fn(|k| self.c[k] - o.c[k]),
        }
    }
}

impl Neg for Jet1x4 {
    type Output = Self;
    fn neg(self) -> Self {
        Jet1x4 {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Jet1x4 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet1x4 {
            c: std::array::from_fn(|k| (0..=k).map(|i| self.c[i] * o.c[k - i]).sum()),
        }
    }
}

impl Taylor for Jet1x4 {
    const ORDER: usize = 4;
    fn constant(c: f64) -> Self {
        Jet1x4 {
            c: [c, 0.0, 0.0, 0.0, 0.0],
        }
    }
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn scale(self, c: f64) -> Self {
        Jet1x4 {
            c: self.c.map(|x| x * c),
        }
    }
    fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|x| *x == 0.0)
    }
    fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }
}

/// Bivariate jet in `(t, w)` truncated after the second order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2x2 {
    // 1, dt, dw, dt^2, dt dw, dw^2
    c: [f64; 6],
}

impl Jet2x2 {
    pub fn var_t(t0: f64) -> Self {
        Jet2x2 {
            c: [t0, 1.0, 0.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn var_w(w0: f64) -> Self {
        Jet2x2 {
            c: [w0, 0.0, 1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn d_t(&self) -> f64 {
        self.c[1]
    }
    pub fn d_w(&self) -> f64 {
        self.c[2]
    }
    pub fn d_tt(&self) -> f64 {
        2.0 * self.c[3]
    }
    pub fn d_tw(&self) -> f64 {
        self.c[4]
    }
    pub fn d_ww(&self) -> f64 {
        2.0 * self.c[5]
    }
}

impl Add for Jet2x2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet2x2 {
            c: std::array::from_fn(|k| self.c[k] + o.c[k]),
        }
    }
}

impl Sub for Jet2x2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet2x2 {
            c: std::array::from_fn(|k| self.c[k] - o.c[k]),
        }
    }
}

impl Neg for Jet2x2 {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2x2 {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Jet2x2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self.c, o.c);
        Jet2x2 {
            c: [
                a[0] * b[0],
                a[0] * b[1] + a[1] * b[0],
                a[0] * b[2] + a[2] * b[0],
                a[0] * b[3] + a[1] * b[1] + a[3] * b[0],
                a[0] * b[4] + a[1] * b[2] + a[2] * b[1] + a[4] * b[0],
                a[0] * b[5] + a[2] * b[2] + a[5] * b[0],
            ],
        }
    }
}

impl Taylor for Jet2x2 {
    const ORDER: usize = 2;
    fn constant(c: f64) -> Self {
        Jet2x2 {
            c: [c, 0.0, 0.0, 0.0, 0.0, 0.0],
        }
    }
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn scale(self, c: f64) -> Self {
        Jet2x2 {
            c: self.c.map(|x| x * c),
        }
    }
    fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|x| *x == 0.0)
    }
    fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_to_fourth_order() {
        let s = Jet1x4::variable(3.0);
        let cube = s * s * s;
        assert_eq!(cube.derivatives(), [27.0, 27.0, 18.0, 6.0, 0.0]);
    }

    #[test]
    fn compose_exp() {
        let x = Jet1x4::variable(0.0).scale(2.0);
        let e = x.compose([1.0; 5]);
        assert_eq!(e.derivatives(), [1.0, 2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn bivariate_product() {
        let t = Jet2x2::var_t(2.0);
        let w = Jet2x2::var_w(5.0);
        let p = t * w * w;
        assert_eq!(p.value(), 50.0);
        assert_eq!(p.d_t(), 25.0);
        assert_eq!(p.d_w(), 20.0);
        assert_eq!(p.d_tt(), 0.0);
        assert_eq!(p.d_tw(), 10.0);
        assert_eq!(p.d_ww(), 4.0);
    }

    #[test]
    fn from_derivatives_round_trips() {
        let d = [1.0, -2.0, 3.0, -4.0, 5.0];
        assert_eq!(Jet1x4::from_derivatives(d).derivatives(), d);
    }
}
