use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::qexpr::QFunction;
use crate::quaternion::{Point4, Quaternion};
use crate::wirtinger::{fd_jet, WirtingerJet};

/// Jets of both components of `f` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionJets {
    pub f1: WirtingerJet,
    pub f2: WirtingerJet,
}

impl FunctionJets {
    pub fn at(f: &QFunction, p: &Point4) -> Result<Self> {
        Ok(FunctionJets {
            f1: f.f1.tape().jet(p)?,
            f2: f.f2.tape().jet(p)?,
        })
    }

    /// Same jets from central differences (independent of the tape).
    pub fn fd(f: &QFunction, p: &Point4, h: f64) -> Result<Self> {
        Ok(FunctionJets {
            f1: fd_jet(&f.f1, p, h)?,
            f2: fd_jet(&f.f2, p, h)?,
        })
    }

    pub fn value(&self) -> Quaternion {
        Quaternion::new(self.f1.val, self.f2.val)
    }

    /// Largest modulus among values and partials of both components.
    pub fn magnitude(&self) -> f64 {
        self.f1.max_abs().max(self.f2.max_abs())
    }

    /// Jets of the quaternionic conjugate `conj(f1) - f2 j`.
    pub fn conj(&self) -> Self {
        FunctionJets {
            f1: self.f1.conj(),
            f2: -self.f2,
        }
    }
}

/// `a + j b` for complex `a`, `b`, using `j b = conj(b) j`.
pub(crate) fn a_plus_jb(a: Complex64, b: Complex64) -> Quaternion {
    Quaternion::new(a, b.conj())
}

/// Value of `Df = 1/2 (d/dz1bar + j d/dz2bar) f` at a point.
///
/// Writing `Df = b1 + j b2`, `brackets` holds `b1` and `b2`:
/// `b1 = 1/2 (df1/dz1bar - d conj(f2)/dz2)` and
/// `b2 = 1/2 (df1/dz2bar + d conj(f2)/dz1)`. Since `j b2 = conj(b2) j`,
/// `value` is the quaternion `(b1, conj(b2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DValue {
    pub value: Quaternion,
    pub brackets: [Complex64; 2],
}

impl DValue {
    pub fn from_jets(j: &FunctionJets) -> Self {
        // d conj(f2)/dz = conj(d f2/dzbar)
        let b1 = 0.5 * (j.f1.d_z1bar - j.f2.d_z2bar.conj());
        let b2 = 0.5 * (j.f1.d_z2bar + j.f2.d_z1bar.conj());
        DValue {
            value: a_plus_jb(b1, b2),
            brackets: [b1, b2],
        }
    }

    pub fn norm(&self) -> f64 {
        self.value.modulus()
    }
}

pub fn cauchy_fueter(f: &QFunction, p: &Point4) -> Result<DValue> {
    Ok(DValue::from_jets(&FunctionJets::at(f, p)?))
}

/// `Df` from finite-difference jets with step `h`.
pub fn cauchy_fueter_fd(f: &QFunction, p: &Point4, h: f64) -> Result<DValue> {
    Ok(DValue::from_jets(&FunctionJets::fd(f, p, h)?))
}

/// `D N` for the real function `N = norm_sq(h) = |h1|^2 + |h2|^2`.
/// It does not vanish in general, even for hyperholomorphic `h`.
pub fn cauchy_fueter_norm_sq(h: &QFunction, p: &Point4) -> Result<DValue> {
    let n = h.norm_sq_expr().tape().jet(p)?;
    let zero = WirtingerJet::constant(Complex64::new(0.0, 0.0));
    Ok(DValue::from_jets(&FunctionJets { f1: n, f2: zero }))
}
