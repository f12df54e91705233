//! Central-difference Wirtinger partials, computed from the recursive
//! evaluator rather than the tape so it shares no code with forward mode.

use num_complex::Complex64;

use crate::error::Result;
use crate::qexpr::ast::CExpr;
use crate::quaternion::Point4;
use crate::wirtinger::jet::WirtingerJet;
use crate::wirtinger::tape::DEFAULT_POLE_EPS;

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Wirtinger jet by central differences in `(x1, y1, x2, y2)` with step `h`.
pub fn fd_jet(e: &CExpr, p: &Point4, h: f64) -> Result<WirtingerJet> {
    let val = e.eval(p, DEFAULT_POLE_EPS)?;
    let mut real = [Complex64::default(); 4];
    for (axis, d) in real.iter_mut().enumerate() {
        let fwd = e.eval(&p.shifted(axis, h), DEFAULT_POLE_EPS)?;
        let back = e.eval(&p.shifted(axis, -h), DEFAULT_POLE_EPS)?;
        *d = (fwd - back) / (2.0 * h);
    }
    let i = Complex64::i();
    let [dx1, dy1, dx2, dy2] = real;
    Ok(WirtingerJet {
        val,
        d_z1: 0.5 * (dx1 - i * dy1),
        d_z1bar: 0.5 * (dx1 + i * dy1),
        d_z2: 0.5 * (dx2 - i * dy2),
        d_z2bar: 0.5 * (dx2 + i * dy2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexpr::QFunction;

    #[test]
    fn identity_and_square() {
        let p = Point4::new(Complex64::new(0.3, -0.2), Complex64::new(1.0, 1.0));
        let z1 = QFunction::parse("z1").unwrap().f1;
        let j = fd_jet(&z1, &p, 1e-5).unwrap();
        assert!((j.d_z1 - 1.0).norm() < 1e-9);
        assert!(j.d_z1bar.norm() < 1e-9);
        let sq = QFunction::parse("z2^2").unwrap().f1;
        let j = fd_jet(&sq, &p, 1e-5).unwrap();
        assert!((j.d_z2 - Complex64::new(2.0, 2.0)).norm() < 1e-8);
    }

    #[test]
    fn stencil_pole_is_an_error() {
        let e = QFunction::parse("1 / z1").unwrap().f1;
        let p = Point4::new(Complex64::new(1e-11, 0.0), Complex64::new(1.0, 0.0));
        assert!(fd_jet(&e, &p, 1e-5).is_ok());
        let p = Point4::ORIGIN;
        assert!(fd_jet(&e, &p, 1e-5).is_err());
    }
}
