//! Quaternionic functions `f = f1 + f2 j` as pairs of complex components,
//! and the lowering of [`QExpr`] trees to that form.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::Result;
use crate::qexpr::ast::{CExpr, QExpr, Var};
use crate::quaternion::{Point4, Quaternion};

/// `f = f1 + f2 j` with complex components in `z1, conj(z1), z2, conj(z2)`.
#[derive(Clone)]
pub struct QFunction {
    pub f1: CExpr,
    pub f2: CExpr,
    norm_sq: OnceLock<CExpr>,
}

impl fmt::Debug for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QFunction")
            .field("f1", &self.f1.to_string())
            .field("f2", &self.f2.to_string())
            .finish()
    }
}

impl fmt::Display for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})j", self.f1, self.f2)
    }
}

impl PartialEq for QFunction {
    fn eq(&self, other: &Self) -> bool {
        self.f1 == other.f1 && self.f2 == other.f2
    }
}

impl QFunction {
    pub fn new(f1: CExpr, f2: CExpr) -> Self {
        QFunction {
            f1,
            f2,
            norm_sq: OnceLock::new(),
        }
    }

    /// `f1 + 0 j`.
    pub fn complex(f1: CExpr) -> Self {
        QFunction::new(f1, CExpr::zero())
    }

    pub fn constant(q: Quaternion) -> Self {
        QFunction::new(CExpr::complex(q.z1), CExpr::complex(q.z2))
    }

    pub fn zero() -> Self {
        QFunction::complex(CExpr::zero())
    }

    pub fn one() -> Self {
        QFunction::complex(CExpr::one())
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(lower(&super::parse::parse(text)?))
    }

    pub fn components(&self) -> [&CExpr; 2] {
        [&self.f1, &self.f2]
    }

    /// `f1 conj(f1) + f2 conj(f2)` as a (real-valued) expression. Cached.
    pub fn norm_sq_expr(&self) -> &CExpr {
        self.norm_sq.get_or_init(|| {
            self.f1
                .mul(&self.f1.conj())
                .add(&self.f2.mul(&self.f2.conj()))
        })
    }

    /// Pointwise value as a quaternion.
    pub fn eval(&self, p: &Point4) -> Result<Quaternion> {
        Ok(Quaternion::new(self.f1.tape().value(p)?, self.f2.tape().value(p)?))
    }

    /// Quaternionic conjugate `conj(f1) - f2 j`.
    pub fn conj(&self) -> QFunction {
        QFunction::new(self.f1.conj(), self.f2.neg())
    }

    pub fn neg(&self) -> QFunction {
        QFunction::new(self.f1.neg(), self.f2.neg())
    }

    pub fn sub(&self, other: &QFunction) -> QFunction {
        QFunction::new(self.f1.sub(&other.f1), self.f2.sub(&other.f2))
    }

    /// `alpha * f` for a real scalar.
    pub fn scale(&self, alpha: f64) -> QFunction {
        let a = CExpr::real(alpha);
        QFunction::new(a.mul(&self.f1), a.mul(&self.f2))
    }

    /// `f * lambda` for a quaternion constant (right scalar multiplication).
    pub fn mul_right(&self, lambda: Quaternion) -> QFunction {
        product_qf(self, &QFunction::constant(lambda))
    }

    /// True when the second component is structurally zero.
    pub fn is_complex(&self) -> bool {
        self.f2.is_zero()
    }
}

pub fn sum_qf(f: &QFunction, g: &QFunction) -> QFunction {
    QFunction::new(f.f1.add(&g.f1), f.f2.add(&g.f2))
}

/// `(f1 g1 - f2 conj(g2)) + (f1 g2 + f2 conj(g1)) j`.
pub fn product_qf(f: &QFunction, g: &QFunction) -> QFunction {
    let c1 = f.f1.mul(&g.f1).sub(&f.f2.mul(&g.f2.conj()));
    let c2 = f.f1.mul(&g.f2).add(&f.f2.mul(&g.f1.conj()));
    QFunction::new(c1, c2)
}

/// `(conj(f1) / N) - (f2 / N) j` with `N = f1 conj(f1) + f2 conj(f2)`.
///
/// For a complex function (`f2 = 0`) this is simply `1 / f1`.
pub fn inverse_qf(f: &QFunction) -> QFunction {
    if f.is_complex() {
        return QFunction::complex(CExpr::one().div(&f.f1));
    }
    let n = f.norm_sq_expr();
    QFunction::new(f.f1.conj().div(n), f.f2.neg().div(n))
}

/// Rewrites a quaternionic expression into its pair of complex components.
///
/// Products follow the quaternion product formula, so every `j` is pushed to
/// the right using `z j = j conj(z)`. `p / q` becomes `p * inverse(q)` and
/// `conj` maps `(f1, f2)` to `(conj(f1), -f2)`.
pub fn lower(e: &QExpr) -> QFunction {
    match e {
        QExpr::Var(v) => QFunction::complex(CExpr::var(*v)),
        QExpr::ConjVar(v) => QFunction::complex(CExpr::conj_var(*v)),
        QExpr::UnitI => QFunction::complex(CExpr::unit_i()),
        QExpr::UnitJ => QFunction::new(CExpr::zero(), CExpr::one()),
        QExpr::Real(c) => QFunction::complex(CExpr::real(*c)),
        QExpr::Add(a, b) => sum_qf(&lower(a), &lower(b)),
        QExpr::Sub(a, b) => lower(a).sub(&lower(b)),
        QExpr::Neg(a) => lower(a).neg(),
        QExpr::Mul(a, b) => product_qf(&lower(a), &lower(b)),
        QExpr::Div(a, b) => product_qf(&lower(a), &inverse_qf(&lower(b))),
        QExpr::Pow(a, n) => {
            let base = lower(a);
            if base.is_complex() {
                QFunction::complex(base.f1.pow(*n))
            } else {
                (1..*n).fold(base.clone(), |acc, _| product_qf(&acc, &base))
            }
        }
        QExpr::Conj(a) => lower(a).conj(),
    }
}

impl From<&QExpr> for QFunction {
    fn from(e: &QExpr) -> Self {
        lower(e)
    }
}

/// Shorthand for building component expressions in code.
pub fn z(v: Var) -> CExpr {
    CExpr::var(v)
}

pub fn zbar(v: Var) -> CExpr {
    CExpr::conj_var(v)
}

pub fn c(re: f64, im: f64) -> CExpr {
    CExpr::complex(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexpr::parse::parse;

    fn pt(x1: f64, y1: f64, x2: f64, y2: f64) -> Point4 {
        Point4::from_coords([x1, y1, x2, y2])
    }

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).modulus() <= tol * (1.0 + a.modulus().max(b.modulus()))
    }

    #[test]
    fn j_times_z1_moves_conjugate() {
        let f = QFunction::parse("j*z1").unwrap();
        assert!(f.f1.is_zero());
        assert_eq!(f.f2, zbar(Var::Z1));
    }

    #[test]
    fn plain_variable() {
        let f = QFunction::parse("z1").unwrap();
        assert_eq!(f, QFunction::complex(z(Var::Z1)));
    }

    #[test]
    fn square_of_quaternion_variable() {
        let f = QFunction::parse("(z1 + z2*j)*(z1 + z2*j)").unwrap();
        let want1 = z(Var::Z1).mul(&z(Var::Z1)).sub(&z(Var::Z2).mul(&zbar(Var::Z2)));
        let want2 = z(Var::Z1).mul(&z(Var::Z2)).add(&z(Var::Z2).mul(&zbar(Var::Z1)));
        assert_eq!(f.f1, want1);
        assert_eq!(f.f2, want2);
    }

    #[test]
    fn sums() {
        let f = QFunction::parse("z1*z2 + conj(z1)*j").unwrap();
        assert_eq!(sum_qf(&f, &QFunction::zero()), f);
        let s = sum_qf(&QFunction::complex(z(Var::Z1)), &QFunction::new(CExpr::zero(), z(Var::Z2)));
        assert_eq!(s, QFunction::new(z(Var::Z1), z(Var::Z2)));
    }

    #[test]
    fn sum_with_constant_shifts_example() {
        let base = QFunction::parse("z1 + conj(z1) + z2 + conj(z2)").unwrap();
        let base = QFunction::new(
            base.f1,
            QFunction::parse("-z1 - conj(z1) + z2 + conj(z2)").unwrap().f1,
        );
        let (a, b) = (1.5, -2.0);
        let shifted = sum_qf(&base, &QFunction::new(CExpr::real(a), CExpr::real(b)));
        let want = QFunction::parse("z1 + conj(z1) + z2 + conj(z2) + 1.5 + (-z1 - conj(z1) + z2 + conj(z2) - 2)*j")
            .unwrap();
        let p = pt(0.3, -0.7, 0.2, 0.9);
        assert!(close(shifted.eval(&p).unwrap(), want.eval(&p).unwrap(), 1e-14));
    }

    #[test]
    fn products() {
        let f = QFunction::parse("z1 + conj(z2)*j").unwrap();
        assert_eq!(product_qf(&f, &QFunction::one()), f);
        let j = QFunction::new(CExpr::zero(), CExpr::one());
        assert_eq!(product_qf(&j, &j), QFunction::complex(CExpr::real(-1.0)));
    }

    #[test]
    fn product_with_inverse_is_one() {
        let f = QFunction::parse("z1*z2 + 2 + (conj(z1) - i)*j").unwrap();
        let g = product_qf(&f, &inverse_qf(&f));
        let h = product_qf(&inverse_qf(&f), &f);
        for p in [pt(0.3, -0.7, 0.2, 0.9), pt(-1.2, 0.4, 1.1, -0.5)] {
            assert!(close(g.eval(&p).unwrap(), Quaternion::ONE, 1e-13));
            assert!(close(h.eval(&p).unwrap(), Quaternion::ONE, 1e-13));
        }
    }

    #[test]
    fn inverse_of_complex_function() {
        let f1 = z(Var::Z1).mul(&z(Var::Z2)).add(&CExpr::real(3.0));
        let inv = inverse_qf(&QFunction::complex(f1.clone()));
        assert_eq!(inv, QFunction::complex(CExpr::one().div(&f1)));
        assert_eq!(inverse_qf(&QFunction::one()), QFunction::one());
    }

    #[test]
    fn inverse_of_conjugate_pair() {
        let f = QFunction::parse("conj(z1) + conj(z2)*j").unwrap();
        let inv = inverse_qf(&f);
        // (z1 - conj(z2) j) / (|z1|^2 + |z2|^2)
        let n = z(Var::Z1).mul(&zbar(Var::Z1)).add(&z(Var::Z2).mul(&zbar(Var::Z2)));
        let want = QFunction::new(z(Var::Z1).div(&n), zbar(Var::Z2).neg().div(&n));
        for p in [pt(0.3, -0.7, 0.2, 0.9), pt(1.0, 0.0, 1.0, 0.0)] {
            assert!(close(inv.eval(&p).unwrap(), want.eval(&p).unwrap(), 1e-15));
        }
    }

    #[test]
    fn conj_lowering_matches_quaternion_conjugate() {
        let e = parse("conj(z1*j + z2*i - 3)").unwrap();
        let f = lower(&e);
        let p = pt(0.4, 1.3, -0.6, 0.25);
        let raw = e.eval_quaternion(&p).unwrap();
        assert!(close(f.eval(&p).unwrap(), raw, 1e-15));
    }

    #[test]
    fn division_is_right_division() {
        let e = parse("(z1 + j) / (z2 + conj(z1)*j)").unwrap();
        let f = lower(&e);
        let p = pt(0.4, 1.3, -0.6, 0.25);
        let a = Quaternion::new(p.z1, Complex64::new(1.0, 0.0));
        let b = Quaternion::new(p.z2, p.z1.conj());
        assert!(close(f.eval(&p).unwrap(), a * b.rinv().unwrap(), 1e-14));
    }
}
