//! Pointwise residuals of the PDE systems characterizing hyperholomorphy,
//! its inverse, sums and products.
//!
//! Every residual keeps its raw magnitudes and a per-equation scale
//! `(1 + M)^d`, where `M` is the largest jet modulus involved and `d` the
//! polynomial degree of the expression in those jets. Tolerances apply to
//! `raw / scale`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{QfcError, Result};
use crate::fueter::operator::{a_plus_jb, cauchy_fueter, DValue, FunctionJets};
use crate::qexpr::{product_qf, QFunction};
use crate::quaternion::{Point4, Quaternion};
use crate::wirtinger::WirtingerJet;

/// Components count as real when `|Im| <= REAL_TOL * (1 + |value|)`.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub raw: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Residual {
    fn new(raw: Vec<f64>, degrees: &[i32], magnitude: f64) -> Self {
        debug_assert_eq!(raw.len(), degrees.len());
        let scale = degrees.iter().map(|&d| (1.0 + magnitude).powi(d)).collect();
        Residual { raw, scale }
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.raw.iter().zip(&self.scale).map(|(r, s)| r / s).collect()
    }

    pub fn max_normalized(&self) -> f64 {
        self.normalized().into_iter().fold(0.0, f64::max)
    }

    pub fn max_raw(&self) -> f64 {
        self.raw.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.raw.iter().chain(&self.scale).all(|v| v.is_finite())
    }
}

fn check_real(j: &FunctionJets, p: &Point4) -> Result<()> {
    for (k, c) in [j.f1.val, j.f2.val].into_iter().enumerate() {
        if c.im.abs() > REAL_TOL * (1.0 + c.norm()) {
            return Err(QfcError::NotReal {
                component: k + 1,
                imag: c.im,
                at: *p,
            });
        }
    }
    Ok(())
}

/// The two hyperholomorphy equations
/// `df1/dz1bar - d conj(f2)/dz2` and `df1/dz2bar + d conj(f2)/dz1`.
pub fn residual_eq1(f: &QFunction, p: &Point4) -> Result<Residual> {
    Ok(eq1_from_jets(&FunctionJets::at(f, p)?))
}

pub(crate) fn eq1_from_jets(j: &FunctionJets) -> Residual {
    let d = DValue::from_jets(j);
    let raw = vec![2.0 * d.brackets[0].norm(), 2.0 * d.brackets[1].norm()];
    Residual::new(raw, &[1, 1], j.magnitude())
}

/// Second-order system equivalent to "f and its right inverse are both
/// hyperholomorphic".
pub fn residual_inverse_system(f: &QFunction, p: &Point4) -> Result<Residual> {
    let j = FunctionJets::at(f, p)?;
    let (f1, f2) = (j.f1, j.f2);
    let (c1, c2) = (f1.conj(), f2.conj());
    let d = c1.val - f1.val;
    let e1 = d * c1.d_z1 - c2.val * f2.d_z1 - f2.val * c1.d_z2bar;
    let e2 = c2.val * f1.d_z1 + c2.d_z1 * d - f2.val * c2.d_z2bar;
    Ok(Residual::new(vec![e1.norm(), e2.norm()], &[2, 2], j.magnitude()))
}

/// Linear system `df2/dz1 + df1/dz2bar = 0`, `df1/dz1 - df2/dz2bar = 0`
/// for functions with real components.
pub fn residual_real_linear_system(f: &QFunction, p: &Point4) -> Result<Residual> {
    let j = FunctionJets::at(f, p)?;
    check_real(&j, p)?;
    let r1 = j.f2.d_z1 + j.f1.d_z2bar;
    let r2 = j.f1.d_z1 - j.f2.d_z2bar;
    Ok(Residual::new(vec![r1.norm(), r2.norm()], &[1, 1], j.magnitude()))
}

/// Norm of `-(dN/dz1bar + j dN/dz2bar) conj(h) + N (d/dz1bar + j d/dz2bar) conj(h)`
/// with `N = h1 conj(h1) + h2 conj(h2)`. It equals `2 N^2 |D(h^-1)|`.
pub fn residual_sum_pde(h: &QFunction, p: &Point4) -> Result<Residual> {
    Ok(sum_pde_value(h, p)?.1)
}

/// The quaternion value of the sum PDE expression together with its residual.
pub fn sum_pde_value(h: &QFunction, p: &Point4) -> Result<(Quaternion, Residual)> {
    let hj = FunctionJets::at(h, p)?;
    let n = h.norm_sq_expr().tape().jet(p)?;
    let hbar = hj.conj();
    let grad_n = a_plus_jb(n.d_z1bar, n.d_z2bar);
    let two_d_hbar = DValue::from_jets(&hbar).value.scale(2.0);
    let e = two_d_hbar.scale(n.val.re) - grad_n * hbar.value();
    Ok((e, Residual::new(vec![e.modulus()], &[3], hj.magnitude())))
}

/// Which branch of the real-sum condition holds at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Algebraic,
    Derivative,
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    /// `-h1^2 dh1/dz1bar + 3 h2^2 dh2/dz2` and `-h1^2 dh2/dz2 + h2^2 dh1/dz1bar`.
    pub reduced: Residual,
    /// `h1^4 - 3 h2^4`.
    pub algebraic: Residual,
    /// `dh1/dz1bar`, `dh2/dz2`, `dh1/dz2 + dh2/dz1bar`.
    pub derivative: Residual,
    pub branch: Branch,
}

/// Branch analysis of the reduced real-sum system for real-component `h`.
pub fn real_sum_branch(h: &QFunction, p: &Point4, tol: f64) -> Result<BranchReport> {
    let j = FunctionJets::at(h, p)?;
    check_real(&j, p)?;
    let m = j.magnitude();
    let (h1, h2) = (j.f1, j.f2);
    let sq1 = h1.val * h1.val;
    let sq2 = h2.val * h2.val;
    let r1 = -sq1 * h1.d_z1bar + 3.0 * sq2 * h2.d_z2;
    let r2 = -sq1 * h2.d_z2 + sq2 * h1.d_z1bar;
    let reduced = Residual::new(vec![r1.norm(), r2.norm()], &[3, 3], m);
    let algebraic = Residual::new(vec![(sq1 * sq1 - 3.0 * sq2 * sq2).norm()], &[4], m);
    let derivative = Residual::new(
        vec![
            h1.d_z1bar.norm(),
            h2.d_z2.norm(),
            (h1.d_z2 + h2.d_z1bar).norm(),
        ],
        &[1, 1, 1],
        m,
    );
    let alg = algebraic.max_normalized() <= tol;
    let der = derivative.max_normalized() <= tol;
    let branch = match (alg, der) {
        (true, true) => Branch::Both,
        (true, false) => Branch::Algebraic,
        (false, true) => Branch::Derivative,
        (false, false) => Branch::Neither,
    };
    Ok(BranchReport { reduced, algebraic, derivative, branch })
}

/// The two-equation product system in the jets of `f` and `g`.
pub fn residual_product_system(f: &QFunction, g: &QFunction, p: &Point4) -> Result<Residual> {
    let fj = FunctionJets::at(f, p)?;
    let gj = FunctionJets::at(g, p)?;
    let (f1, f2, g1) = (fj.f1, fj.f2, gj.f1);
    let (cf1, cf2, cg2) = (f1.conj(), f2.conj(), gj.f2.conj());
    let im = f1.val - cf1.val;
    let e1 = g1.val * (f1.d_z1bar + cf2.d_z2) + im * g1.d_z1bar + cf2.val * g1.d_z2
        - f2.val * cg2.d_z1bar;
    let e2 = g1.val * (f1.d_z2bar - cf2.d_z1) + im * g1.d_z2bar
        - cf2.val * g1.d_z1
        - f2.val * cg2.d_z2bar;
    let m = fj.magnitude().max(gj.magnitude());
    Ok(Residual::new(vec![e1.norm(), e2.norm()], &[2, 2], m))
}

/// `df1/dz1 dg2/dz2 + df1/dz2 dg2/dz1` for real-component `f`, `g`.
pub fn residual_real_product(f: &QFunction, g: &QFunction, p: &Point4) -> Result<Residual> {
    let fj = FunctionJets::at(f, p)?;
    let gj = FunctionJets::at(g, p)?;
    check_real(&fj, p)?;
    check_real(&gj, p)?;
    let r = fj.f1.d_z1 * gj.f2.d_z2 + fj.f1.d_z2 * gj.f2.d_z1;
    let m = fj.magnitude().max(gj.magnitude());
    Ok(Residual::new(vec![r.norm()], &[2], m))
}

fn unbarred_linear_pair(a: &WirtingerJet, b: &WirtingerJet) -> [Complex64; 2] {
    [b.d_z1 + a.d_z2, a.d_z1 - b.d_z2]
}

/// Combined real system: the two linear equations for `f`, the same for
/// `g`, and the bilinear relation `df1/dz1 dg1/dz1 - df1/dz2 dg1/dz2`.
pub fn residual_real_combined(f: &QFunction, g: &QFunction, p: &Point4) -> Result<Residual> {
    let fj = FunctionJets::at(f, p)?;
    let gj = FunctionJets::at(g, p)?;
    check_real(&fj, p)?;
    check_real(&gj, p)?;
    let [a, b] = unbarred_linear_pair(&fj.f1, &fj.f2);
    let [c, d] = unbarred_linear_pair(&gj.f1, &gj.f2);
    let bil = fj.f1.d_z1 * gj.f1.d_z1 - fj.f1.d_z2 * gj.f1.d_z2;
    let m = fj.magnitude().max(gj.magnitude());
    Ok(Residual::new(
        vec![a.norm(), b.norm(), c.norm(), d.norm(), bil.norm()],
        &[1, 1, 1, 1, 2],
        m,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductRuleCheck {
    /// `D(f * g)` from the lowered product.
    pub lhs: Quaternion,
    /// `first_term + second_term`.
    pub rhs: Quaternion,
    /// Contribution of differentiating the factors of `f`.
    pub first_term: Quaternion,
    /// Contribution of differentiating the factors of `g`.
    pub second_term: Quaternion,
    pub gap: f64,
    pub scale: f64,
}

impl ProductRuleCheck {
    pub fn normalized_gap(&self) -> f64 {
        self.gap / self.scale
    }
}

/// Compares `D(f * g)` with the sum of the two terms obtained by
/// differentiating the factors of `f` and those of `g` separately.
pub fn product_rule_check(f: &QFunction, g: &QFunction, p: &Point4) -> Result<ProductRuleCheck> {
    let lhs = cauchy_fueter(&product_qf(f, g), p)?.value;
    let fj = FunctionJets::at(f, p)?;
    let gj = FunctionJets::at(g, p)?;
    let (f1, f2) = (fj.f1, fj.f2);
    let (g1, g2) = (gj.f1, gj.f2);
    let j = Quaternion::J;

    // 1/2 (df1/dz1bar + j df1/dz2bar) g + 1/2 (df2/dz1bar + j df2/dz2bar) j j (conj g2 - conj g1 j)
    let tail = Quaternion::new(g2.val.conj(), -g1.val.conj());
    let first_term = (a_plus_jb(f1.d_z1bar, f1.d_z2bar) * gj.value()
        + a_plus_jb(f2.d_z1bar, f2.d_z2bar) * j * j * tail)
        .scale(0.5);

    // d/dzbar_k of (f1 g1 - f2 conj(g2)) + (f1 g2 + f2 conj(g1)) j with f held fixed
    let (cg1, cg2) = (g1.conj(), g2.conj());
    let s = |d1: Complex64, d2: Complex64, dc1: Complex64, dc2: Complex64| {
        Quaternion::new(f1.val * d1 - f2.val * dc2, f1.val * d2 + f2.val * dc1)
    };
    let s1 = s(g1.d_z1bar, g2.d_z1bar, cg1.d_z1bar, cg2.d_z1bar);
    let s2 = s(g1.d_z2bar, g2.d_z2bar, cg1.d_z2bar, cg2.d_z2bar);
    let second_term = (s1 + j * s2).scale(0.5);

    let rhs = first_term + second_term;
    let m = fj.magnitude().max(gj.magnitude());
    Ok(ProductRuleCheck {
        lhs,
        rhs,
        first_term,
        second_term,
        gap: (lhs - rhs).modulus(),
        scale: (1.0 + m).powi(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fueter::operator::cauchy_fueter;
    use crate::qexpr::inverse_qf;

    fn qf(s: &str) -> QFunction {
        QFunction::parse(s).unwrap()
    }

    fn example(a: f64, b: f64) -> QFunction {
        qf(&format!(
            "z1 + conj(z1) + z2 + conj(z2) + {a} + (-z1 - conj(z1) + z2 + conj(z2) + {b})*j"
        ))
    }

    fn pts() -> Vec<Point4> {
        vec![
            Point4::from_coords([0.3, -0.7, 1.1, 0.4]),
            Point4::from_coords([-0.9, 0.2, 0.5, -1.3]),
            Point4::from_coords([1.5, 1.0, -0.25, 0.75]),
        ]
    }

    #[test]
    fn eq1_examples() {
        for p in pts() {
            assert_eq!(residual_eq1(&example(0.0, 0.0), &p).unwrap().max_raw(), 0.0);
            assert_eq!(residual_eq1(&example(1.0, 2.0), &p).unwrap().max_raw(), 0.0);
            assert_eq!(residual_eq1(&qf("z1*z2"), &p).unwrap().max_raw(), 0.0);
            let r = residual_eq1(&qf("conj(z2)"), &p).unwrap();
            assert_eq!(r.raw, vec![0.0, 1.0]);
        }
    }

    #[test]
    fn inverse_system_examples() {
        for p in pts() {
            for f in [qf("z1*z2 + 3"), qf("1/(z1 - 2*z2)"), example(0.0, 0.0), example(1.0, 2.0)] {
                assert!(residual_inverse_system(&f, &p).unwrap().max_normalized() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_system_of_conjugate_pair_vanishes_only_on_real_points() {
        let f = qf("conj(z1) + conj(z2)*j");
        let one = Point4::from_coords([1.0, 0.0, 1.0, 0.0]);
        assert_eq!(residual_inverse_system(&f, &one).unwrap().max_raw(), 0.0);
        assert_eq!(cauchy_fueter(&inverse_qf(&f), &one).unwrap().norm(), 0.0);
        let p = Point4::from_coords([1.0, 1.0, 1.0, 0.0]);
        assert!(residual_inverse_system(&f, &p).unwrap().raw[0] > 1.0);
        assert!(cauchy_fueter(&inverse_qf(&f), &p).unwrap().norm() > 0.1);
    }

    #[test]
    fn real_linear_system_examples() {
        let p = pts()[0];
        assert_eq!(residual_real_linear_system(&example(0.0, 0.0), &p).unwrap().max_raw(), 0.0);
        assert_eq!(residual_real_linear_system(&qf("1 + 1*j"), &p).unwrap().max_raw(), 0.0);
        let r = residual_real_linear_system(&qf("(z1 + conj(z1))/2"), &p).unwrap();
        assert!((r.raw[1] - 0.5).abs() < 1e-15);
        assert!(matches!(
            residual_real_linear_system(&qf("z1"), &p),
            Err(QfcError::NotReal { component: 1, .. })
        ));
    }

    #[test]
    fn sum_pde_matches_inverse_operator() {
        for p in pts() {
            for h in [qf("z1*z2 + 1"), example(0.0, 0.0), qf("conj(z1) + conj(z2)*j"), qf("z1*conj(z2) + (z2 + z1^2)*j")] {
                let r = residual_sum_pde(&h, &p).unwrap().raw[0];
                let n = h.eval(&p).unwrap().norm_sq();
                let direct = 2.0 * n * n * cauchy_fueter(&inverse_qf(&h), &p).unwrap().norm();
                assert!((r - direct).abs() <= 1e-10 * (1.0 + direct), "{h}: {r} vs {direct}");
            }
        }
    }

    #[test]
    fn sum_branch_examples() {
        let p = pts()[1];
        let r = real_sum_branch(&qf("2 + 5*j"), &p, 1e-10).unwrap();
        assert_eq!(r.branch, Branch::Derivative);
        let c = 3f64.powf(0.25);
        let h = qf(&format!("{c}*(z1 + conj(z1)) + (z1 + conj(z1))*j"));
        let r = real_sum_branch(&h, &p, 1e-10).unwrap();
        assert_eq!(r.branch, Branch::Algebraic);
        let r = real_sum_branch(&example(0.0, 0.0), &p, 1e-10).unwrap();
        assert_eq!(r.reduced.raw.len(), 2);
        assert_eq!(r.derivative.raw, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn product_system_examples() {
        let p = pts()[2];
        assert_eq!(residual_product_system(&qf("z1^2"), &qf("1/(z2 + 3)"), &p).unwrap().max_raw(), 0.0);
        assert_eq!(residual_product_system(&qf("1"), &qf("1"), &p).unwrap().max_raw(), 0.0);
        let r = residual_product_system(&example(0.0, 0.0), &qf("conj(z2)"), &p).unwrap();
        assert!(r.max_raw() > 0.1);
    }

    #[test]
    fn real_product_examples() {
        let p = pts()[0];
        let e = example(0.0, 0.0);
        assert_eq!(residual_real_product(&e, &qf("3 + 4*j"), &p).unwrap().raw, vec![0.0]);
        assert_eq!(residual_real_product(&e, &e, &p).unwrap().raw, vec![0.0]);
        let sq = qf("(z1 + conj(z1))^2 + (z2 + conj(z2))*(z1 + conj(z1))*j");
        assert!(residual_real_product(&sq, &sq, &p).unwrap().raw[0] > 0.1);
    }

    #[test]
    fn real_combined_examples() {
        let p = pts()[0];
        let e = example(1.0, 2.0);
        assert_eq!(residual_real_combined(&qf("1"), &qf("2 + 2*j"), &p).unwrap().max_raw(), 0.0);
        assert_eq!(residual_real_combined(&e, &e, &p).unwrap().max_raw(), 0.0);
        let g = qf("z1 + conj(z1) + 3*(z2 + conj(z2))");
        let r = residual_real_combined(&e, &g, &p).unwrap();
        assert!(r.raw[4] > 0.1);
    }

    #[test]
    fn product_rule_on_samples() {
        for p in pts() {
            for (f, g) in [
                (qf("z1"), qf("z2^2")),
                (qf("conj(z1)*z2 + z1*j"), qf("(z1 - conj(z2))*j + z1*conj(z1)")),
                (example(1.0, 2.0), qf("conj(z1) + conj(z2)*j")),
            ] {
                let c = product_rule_check(&f, &g, &p).unwrap();
                assert!(c.normalized_gap() < 1e-13, "{f} * {g}: {c:?}");
            }
            let c = product_rule_check(&qf("z1"), &qf("z2^2"), &p).unwrap();
            assert_eq!(c.lhs, Quaternion::ZERO);
            assert_eq!(c.rhs, Quaternion::ZERO);
        }
    }
}
