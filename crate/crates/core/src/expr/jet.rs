use std::ops::{Add, Mul, Neg, Sub};

/// Value and first three derivatives of a scalar function at a point.
///
/// Arithmetic propagates derivatives exactly (Leibniz for products,
/// Faà di Bruno for composition), so polynomials of degree ≤ 3 come out
/// exact up to roundoff.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScalarJet {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl ScalarJet {
    pub const fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        ScalarJet { c0, c1, c2, c3 }
    }

    pub const fn constant(c: f64) -> Self {
        ScalarJet::new(c, 0.0, 0.0, 0.0)
    }

    /// The independent variable at `t`.
    pub const fn variable(t: f64) -> Self {
        ScalarJet::new(t, 1.0, 0.0, 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.c1 == 0.0 && self.c2 == 0.0 && self.c3 == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.is_finite() && self.c2.is_finite() && self.c3.is_finite()
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.c0, self.c1, self.c2, self.c3]
    }

    /// `φ ∘ self`, given `φ` and its first three derivatives evaluated at
    /// `self.c0`.
    pub fn compose(&self, phi: [f64; 4]) -> Self {
        let [p0, p1, p2, p3] = phi;
        let (u1, u2, u3) = (self.c1, self.c2, self.c3);
        ScalarJet {
            c0: p0,
            c1: p1 * u1,
            c2: p2 * u1 * u1 + p1 * u2,
            c3: p3 * u1 * u1 * u1 + 3.0 * p2 * u1 * u2 + p1 * u3,
        }
    }

    pub fn recip(&self) -> Self {
        let u = self.c0;
        let r = 1.0 / u;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn scale(&self, s: f64) -> Self {
        ScalarJet::new(self.c0 * s, self.c1 * s, self.c2 * s, self.c3 * s)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.c0.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.c0.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(&self) -> Self {
        let y = self.c0.tan();
        let sec2 = 1.0 + y * y;
        self.compose([y, sec2, 2.0 * y * sec2, 2.0 * sec2 * (1.0 + 3.0 * y * y)])
    }

    pub fn exp(&self) -> Self {
        let e = self.c0.exp();
        self.compose([e; 4])
    }

    /// Caller guarantees `c0 > 0`.
    pub fn ln(&self) -> Self {
        let u = self.c0;
        let r = 1.0 / u;
        self.compose([u.ln(), r, -r * r, 2.0 * r * r * r])
    }

    /// Caller guarantees `c0 > 0`.
    pub fn sqrt(&self) -> Self {
        let s = self.c0.sqrt();
        let r = 1.0 / self.c0;
        self.compose([s, 0.5 / s, -0.25 / s * r, 0.375 / s * r * r])
    }

    pub fn atan(&self) -> Self {
        let u = self.c0;
        let q = 1.0 / (1.0 + u * u);
        self.compose([
            u.atan(),
            q,
            -2.0 * u * q * q,
            (6.0 * u * u - 2.0) * q * q * q,
        ])
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.c0.sinh(), self.c0.cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.c0.sinh(), self.c0.cosh());
        self.compose([c, s, c, s])
    }

    /// `self^n` for an integer exponent. For `n ≥ 0` this is a polynomial and
    /// is well defined at a zero base.
    pub fn powi(&self, n: i32) -> Self {
        let u = self.c0;
        let nf = f64::from(n);
        let term = |k: i32, coeff: f64| {
            if coeff == 0.0 {
                0.0
            } else {
                coeff * u.powi(n - k)
            }
        };
        self.compose([
            term(0, 1.0),
            term(1, nf),
            term(2, nf * (nf - 1.0)),
            term(3, nf * (nf - 1.0) * (nf - 2.0)),
        ])
    }

    /// `self^p` for a real constant exponent; caller guarantees `c0 > 0`.
    pub fn powf(&self, p: f64) -> Self {
        let u = self.c0;
        let v = u.powf(p);
        let r = 1.0 / u;
        self.compose([
            v,
            p * v * r,
            p * (p - 1.0) * v * r * r,
            p * (p - 1.0) * (p - 2.0) * v * r * r * r,
        ])
    }
}

impl Add for ScalarJet {
    type Output = ScalarJet;

    fn add(self, o: ScalarJet) -> ScalarJet {
        ScalarJet::new(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)
    }
}

impl Sub for ScalarJet {
    type Output = ScalarJet;

    fn sub(self, o: ScalarJet) -> ScalarJet {
        ScalarJet::new(self.c0 - o.c0, self.c1 - o.c1, self.c2 - o.c2, self.c3 - o.c3)
    }
}

impl Neg for ScalarJet {
    type Output = ScalarJet;

    fn neg(self) -> ScalarJet {
        self.scale(-1.0)
    }
}

impl Mul for ScalarJet {
    type Output = ScalarJet;

    fn mul(self, o: ScalarJet) -> ScalarJet {
        let (f, g) = (self, o);
        ScalarJet {
            c0: f.c0 * g.c0,
            c1: f.c1 * g.c0 + f.c0 * g.c1,
            c2: f.c2 * g.c0 + 2.0 * f.c1 * g.c1 + f.c0 * g.c2,
            c3: f.c3 * g.c0 + 3.0 * f.c2 * g.c1 + 3.0 * f.c1 * g.c2 + f.c0 * g.c3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ScalarJet, b: [f64; 4], tol: f64) {
        for (x, y) in a.as_array().iter().zip(b) {
            assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn cube_at_two() {
        let t = ScalarJet::variable(2.0);
        close(t * t * t, [8.0, 12.0, 12.0, 6.0], 0.0);
        close(t.powi(3), [8.0, 12.0, 12.0, 6.0], 1e-15);
    }

    #[test]
    fn powi_at_zero_base() {
        let t = ScalarJet::variable(0.0);
        close(t.powi(2), [0.0, 0.0, 2.0, 0.0], 0.0);
        close(t.powi(0), [1.0, 0.0, 0.0, 0.0], 0.0);
    }

    #[test]
    fn recip_matches_closed_form() {
        // d^k/dt^k 1/t = (-1)^k k! / t^(k+1)
        let t = ScalarJet::variable(2.0);
        close(t.recip(), [0.5, -0.25, 0.25, -0.375], 1e-15);
    }

    #[test]
    fn sqrt_matches_powf() {
        let t = ScalarJet::variable(1.7);
        close(t.sqrt(), t.powf(0.5).as_array(), 1e-14);
    }

    #[test]
    fn log_exp_inverse() {
        let t = ScalarJet::new(0.3, 1.0, 0.0, 0.0);
        close(t.exp().ln(), [0.3, 1.0, 0.0, 0.0], 1e-14);
    }
}
