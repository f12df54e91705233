use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

/// Value and the four first-order Wirtinger partials of a complex quantity,
/// treating `z` and `conj(z)` as independent variables.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct WirtingerJet {
    pub val: Complex64,
    pub d_z1: Complex64,
    pub d_z1bar: Complex64,
    pub d_z2: Complex64,
    pub d_z2bar: Complex64,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl WirtingerJet {
    pub fn constant(val: Complex64) -> Self {
        WirtingerJet {
            val,
            ..Default::default()
        }
    }

    pub fn z1(val: Complex64) -> Self {
        WirtingerJet { val, d_z1: ONE, ..Default::default() }
    }

    pub fn z1bar(val: Complex64) -> Self {
        WirtingerJet { val, d_z1bar: ONE, ..Default::default() }
    }

    pub fn z2(val: Complex64) -> Self {
        WirtingerJet { val, d_z2: ONE, ..Default::default() }
    }

    pub fn z2bar(val: Complex64) -> Self {
        WirtingerJet { val, d_z2bar: ONE, ..Default::default() }
    }

    fn map_partials(self, val: Complex64, k: Complex64) -> Self {
        WirtingerJet {
            val,
            d_z1: self.d_z1 * k,
            d_z1bar: self.d_z1bar * k,
            d_z2: self.d_z2 * k,
            d_z2bar: self.d_z2bar * k,
        }
    }

    /// Partials in the order `(d/dz1, d/dz1bar, d/dz2, d/dz2bar)`.
    pub fn partials(&self) -> [Complex64; 4] {
        [self.d_z1, self.d_z1bar, self.d_z2, self.d_z2bar]
    }

    /// Jet of the complex conjugate: `d conj(g)/dz = conj(dg/dzbar)`.
    pub fn conj(self) -> Self {
        WirtingerJet {
            val: self.val.conj(),
            d_z1: self.d_z1bar.conj(),
            d_z1bar: self.d_z1.conj(),
            d_z2: self.d_z2bar.conj(),
            d_z2bar: self.d_z2.conj(),
        }
    }

    pub fn powu(self, n: u32) -> Self {
        match n {
            0 => WirtingerJet::constant(ONE),
            _ => self.map_partials(self.val.powu(n), self.val.powu(n - 1) * n as f64),
        }
    }

    /// Quotient rule. The caller is responsible for rejecting tiny denominators.
    pub fn div(self, rhs: Self) -> Self {
        let inv = ONE / rhs.val;
        let q = self.val * inv;
        let d = |a: Complex64, b: Complex64| (a - q * b) * inv;
        WirtingerJet {
            val: q,
            d_z1: d(self.d_z1, rhs.d_z1),
            d_z1bar: d(self.d_z1bar, rhs.d_z1bar),
            d_z2: d(self.d_z2, rhs.d_z2),
            d_z2bar: d(self.d_z2bar, rhs.d_z2bar),
        }
    }

    pub fn scale(self, k: Complex64) -> Self {
        self.map_partials(self.val * k, k)
    }

    /// Largest modulus among the value and the partials.
    pub fn max_abs(&self) -> f64 {
        [self.val, self.d_z1, self.d_z1bar, self.d_z2, self.d_z2bar]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        [self.val, self.d_z1, self.d_z1bar, self.d_z2, self.d_z2bar]
            .iter()
            .all(|c| c.is_finite())
    }
}

impl Add for WirtingerJet {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        WirtingerJet {
            val: self.val + r.val,
            d_z1: self.d_z1 + r.d_z1,
            d_z1bar: self.d_z1bar + r.d_z1bar,
            d_z2: self.d_z2 + r.d_z2,
            d_z2bar: self.d_z2bar + r.d_z2bar,
        }
    }
}

impl Sub for WirtingerJet {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        self + (-r)
    }
}

impl Neg for WirtingerJet {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_partials(-self.val, -ONE)
    }
}

impl Mul for WirtingerJet {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let d = |a: Complex64, b: Complex64| a * r.val + self.val * b;
        WirtingerJet {
            val: self.val * r.val,
            d_z1: d(self.d_z1, r.d_z1),
            d_z1bar: d(self.d_z1bar, r.d_z1bar),
            d_z2: d(self.d_z2, r.d_z2),
            d_z2bar: d(self.d_z2bar, r.d_z2bar),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_rule_on_modulus_squared() {
        let z = c(2.0, 1.0);
        let j = WirtingerJet::z1(z) * WirtingerJet::z1bar(z.conj());
        assert_eq!(j.val, c(5.0, 0.0));
        assert_eq!(j.d_z1, c(2.0, -1.0));
        assert_eq!(j.d_z1bar, c(2.0, 1.0));
        assert_eq!(j.d_z2, c(0.0, 0.0));
    }

    #[test]
    fn conj_swaps_partials() {
        let j = WirtingerJet::z1(c(1.0, 2.0)).scale(c(0.0, 1.0));
        let k = j.conj();
        assert_eq!(k.val, j.val.conj());
        assert_eq!(k.d_z1bar, c(0.0, -1.0));
        assert_eq!(k.d_z1, c(0.0, 0.0));
    }

    #[test]
    fn power_and_quotient() {
        let z = c(1.0, 1.0);
        let sq = WirtingerJet::z2(z).powu(2);
        assert_eq!(sq.d_z2, c(2.0, 2.0));
        let q = WirtingerJet::constant(c(1.0, 0.0)).div(WirtingerJet::z2(z));
        // d(1/z)/dz = -1/z^2
        let want = -(c(1.0, 0.0) / (z * z));
        assert!((q.d_z2 - want).norm() < 1e-15);
    }
}
