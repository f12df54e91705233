//! Quaternions as pairs of complex numbers.
//!
//! A quaternion `q = z1 + z2 j` is stored as the pair `(z1, z2)`. The unit `j`
//! anticommutes with `i`, which in this representation reads `z j = j conj(z)`.
//! Multiplication is the noncommutative product
//!
//! ```text
//! (z1 + z2 j)(w1 + w2 j) = (z1 w1 - z2 conj(w2)) + (z1 w2 + z2 conj(w1)) j
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QfcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    pub const ONE: Quaternion = Quaternion::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    pub const J: Quaternion = Quaternion::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));

    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Quaternion { z1, z2 }
    }

    /// Embeds a complex number as `z + 0 j`.
    pub const fn complex(z: Complex64) -> Self {
        Quaternion::new(z, Complex64::new(0.0, 0.0))
    }

    pub const fn real(x: f64) -> Self {
        Quaternion::complex(Complex64::new(x, 0.0))
    }

    /// Quaternionic conjugate `conj(z1) - z2 j`.
    pub fn conj(self) -> Self {
        Quaternion::new(self.z1.conj(), -self.z2)
    }

    /// `|z1|^2 + |z2|^2`, which equals `q * conj(q)`.
    pub fn norm_sq(self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn modulus(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Right inverse `norm_sq(q)^-1 conj(q)`; it is also a left inverse.
    pub fn rinv(self) -> Result<Self> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(QfcError::ZeroQuaternion);
        }
        let c = self.conj();
        Ok(Quaternion::new(c.z1 / n, c.z2 / n))
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.z1 * s, self.z2 * s)
    }

    pub fn is_finite(self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }

    pub fn pow(self, n: u32) -> Self {
        (0..n).fold(Quaternion::ONE, |acc, _| acc * self)
    }
}

pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.z1 * b.z1 - a.z2 * b.z2.conj(),
        a.z1 * b.z2 + a.z2 * b.z1.conj(),
    )
}

pub fn quat_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn rinv(q: Quaternion) -> Result<Quaternion> {
    q.rinv()
}

pub fn norm_sq(q: Quaternion) -> f64 {
    q.norm_sq()
}

pub fn modulus(q: Quaternion) -> f64 {
    q.modulus()
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        quat_mul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.z1 + rhs.z1, self.z2 + rhs.z2)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.z1 - rhs.z1, self.z2 - rhs.z2)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.z1, -self.z2)
    }
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Renders as `a+bi + (c+di)j`.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})j", fmt_complex(self.z1), fmt_complex(self.z2))
    }
}

/// A point of `H = C^2`, given by its two complex coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point4 {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Point4 {
    pub const ORIGIN: Point4 = Point4 {
        z1: Complex64::new(0.0, 0.0),
        z2: Complex64::new(0.0, 0.0),
    };

    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Point4 { z1, z2 }
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Point4::new(Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3]))
    }

    /// Real coordinates `(x1, y1, x2, y2)`.
    pub fn coords(&self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    /// Shifts real coordinate `axis` (0..4) by `h`.
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut c = self.coords();
        c[axis] += h;
        Point4::from_coords(c)
    }

    /// `self + r * dir` with `dir` given in real coordinates.
    pub fn offset(&self, r: f64, dir: [f64; 4]) -> Self {
        let c = self.coords();
        Point4::from_coords([c[0] + r * dir[0], c[1] + r * dir[1], c[2] + r * dir[2], c[3] + r * dir[3]])
    }

    pub fn is_finite(&self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }

    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::new(self.z1, self.z2)
    }
}

impl fmt::Display for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_complex(self.z1), fmt_complex(self.z2))
    }
}
