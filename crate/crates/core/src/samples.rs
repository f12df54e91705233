//! Curated functions and seeded random generators used by the verification
//! suite, the tests and the bindings.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::fueter::Domain;
use crate::qexpr::{CExpr, QExpr, QFunction, Var};
use crate::quaternion::{Point4, Quaternion};

fn qf(text: &str) -> QFunction {
    QFunction::parse(text).expect("built-in sample parses")
}

fn x(v: Var) -> CExpr {
    CExpr::var(v).add(&CExpr::conj_var(v)).mul(&CExpr::real(0.5))
}

/// `f1 = z1 + conj(z1) + z2 + conj(z2) + a`,
/// `f2 = -z1 - conj(z1) + z2 + conj(z2) + b`.
pub fn real_affine_example(a: f64, b: f64) -> QFunction {
    let s1 = x(Var::Z1).mul(&CExpr::real(2.0));
    let s2 = x(Var::Z2).mul(&CExpr::real(2.0));
    let f1 = CExpr::var(Var::Z1)
        .add(&CExpr::conj_var(Var::Z1))
        .add(&CExpr::var(Var::Z2))
        .add(&CExpr::conj_var(Var::Z2))
        .add(&CExpr::real(a));
    let f2 = s2.sub(&s1).add(&CExpr::real(b));
    QFunction::new(f1, f2)
}

/// Source text of [`real_affine_example`].
pub fn real_affine_example_text(a: f64, b: f64) -> String {
    format!("z1 + conj(z1) + z2 + conj(z2) + ({a}) + (-z1 - conj(z1) + z2 + conj(z2) + ({b}))*j")
}

/// `conj(z1) + conj(z2) j`: hyperholomorphic, with a non-hyperholomorphic inverse.
pub fn conjugate_pair() -> QFunction {
    qf("conj(z1) + conj(z2)*j")
}

/// Named holomorphic functions (second component zero).
pub fn holomorphic_samples() -> Vec<(&'static str, QFunction)> {
    vec![
        ("z1*z2", qf("z1*z2")),
        ("z1^2 + 3*z2 + 1", qf("z1^2 + 3*z2 + 1")),
        ("(z1 + i*z2)^3 - 2", qf("(z1 + i*z2)^3 - 2")),
        ("1/(z1 - 3)", qf("1/(z1 - 3)")),
        ("(z1 + 2)/(z2^2 + 4)", qf("(z1 + 2)/(z2^2 + 4)")),
    ]
}

/// `(x1 + x2 j)^n`, a real-component hyperholomorphic function.
pub fn w_power(n: u32) -> QFunction {
    qf(&format!("((z1 + conj(z1))/2 + (z2 + conj(z2))/2*j)^{n}"))
}

/// Hyperholomorphic functions used for linearity checks.
pub fn curated_hyperholomorphic() -> Vec<(String, QFunction)> {
    let mut out: Vec<(String, QFunction)> = vec![
        ("example(0,0)".into(), real_affine_example(0.0, 0.0)),
        ("example(1,2)".into(), real_affine_example(1.0, 2.0)),
        ("conjugate-pair".into(), conjugate_pair()),
        ("w^2".into(), w_power(2)),
        ("w^3".into(), w_power(3)),
    ];
    out.extend(holomorphic_samples().into_iter().map(|(n, f)| (n.to_string(), f)));
    out
}

/// The curated classification set: holomorphic samples, the real affine
/// example and the conjugate pair.
pub fn curated_classification_set() -> Vec<(String, QFunction)> {
    let mut out: Vec<(String, QFunction)> = holomorphic_samples()
        .into_iter()
        .map(|(n, f)| (n.to_string(), f))
        .collect();
    out.push(("example(0,0)".into(), real_affine_example(0.0, 0.0)));
    out.push(("example(1,2)".into(), real_affine_example(1.0, 2.0)));
    out.push(("conjugate-pair".into(), conjugate_pair()));
    out
}

pub fn random_complex(rng: &mut impl Rng, r: f64) -> Complex64 {
    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(random_complex(rng, 1.0), random_complex(rng, 1.0))
}

/// Uniform point of the box of `d`.
pub fn random_point_in(rng: &mut impl Rng, d: &Domain) -> Point4 {
    Point4::from_coords(std::array::from_fn(|k| rng.random_range(d.lo[k]..d.hi[k])))
}

/// Uniform point of `[lo, hi]^4`.
pub fn random_point(rng: &mut impl Rng, lo: f64, hi: f64) -> Point4 {
    Point4::from_coords(std::array::from_fn(|_| rng.random_range(lo..hi)))
}

fn monomial(vars: &[CExpr], exps: &[u32]) -> CExpr {
    vars.iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .fold(CExpr::one(), |acc, (v, &e)| acc.mul(&v.pow(e)))
}

/// Random polynomial in `vars` of total degree at most `degree`.
fn random_poly(rng: &mut impl Rng, vars: &[CExpr], degree: u32, terms: usize, complex: bool) -> CExpr {
    let mut acc = CExpr::zero();
    for _ in 0..terms {
        let mut left = degree;
        let exps: Vec<u32> = vars
            .iter()
            .map(|_| {
                let e = rng.random_range(0..=left);
                left -= e;
                e
            })
            .collect();
        let c = if complex {
            CExpr::complex(random_complex(rng, 1.0))
        } else {
            CExpr::real(rng.random_range(-1.0..1.0))
        };
        acc = acc.add(&c.mul(&monomial(vars, &exps)));
    }
    acc
}

fn all_vars() -> [CExpr; 4] {
    [
        CExpr::var(Var::Z1),
        CExpr::conj_var(Var::Z1),
        CExpr::var(Var::Z2),
        CExpr::conj_var(Var::Z2),
    ]
}

/// Both components random complex polynomials in `z1, conj(z1), z2, conj(z2)`.
pub fn random_polynomial(rng: &mut impl Rng) -> QFunction {
    let v = all_vars();
    let d1 = rng.random_range(1..=3);
    let d2 = rng.random_range(1..=3);
    QFunction::new(random_poly(rng, &v, d1, 4, true), random_poly(rng, &v, d2, 4, true))
}

/// Random holomorphic polynomial in `z1, z2`.
pub fn random_holomorphic_polynomial(rng: &mut impl Rng, degree: u32) -> CExpr {
    let v = [CExpr::var(Var::Z1), CExpr::var(Var::Z2)];
    random_poly(rng, &v, degree, 4, true)
}

/// `P / Q` with random holomorphic polynomials; second component zero.
pub fn random_holomorphic_rational(rng: &mut impl Rng) -> QFunction {
    let dp = rng.random_range(1..=3);
    let dq = rng.random_range(1..=2);
    let p = random_holomorphic_polynomial(rng, dp);
    let q = random_holomorphic_polynomial(rng, dq).add(&CExpr::complex(random_complex(rng, 2.0)));
    QFunction::complex(p.div(&q))
}

/// Components real polynomials in `x1 = Re z1` and `x2 = Re z2` only.
pub fn random_real_x_polynomial(rng: &mut impl Rng) -> QFunction {
    let v = [x(Var::Z1), x(Var::Z2)];
    let d1 = rng.random_range(1..=3);
    let d2 = rng.random_range(1..=3);
    QFunction::new(random_poly(rng, &v, d1, 3, false), random_poly(rng, &v, d2, 3, false))
}

fn random_leaf(rng: &mut impl Rng, allow_j: bool) -> QExpr {
    let n = if allow_j { 6 } else { 5 };
    match rng.random_range(0..n) {
        0 => QExpr::Var(Var::Z1),
        1 => QExpr::Var(Var::Z2),
        2 => QExpr::ConjVar(if rng.random_bool(0.5) { Var::Z1 } else { Var::Z2 }),
        3 => QExpr::UnitI,
        4 => QExpr::Real((rng.random_range(0.0..3.0f64) * 100.0).round() / 100.0),
        _ => QExpr::UnitJ,
    }
}

fn random_tree(rng: &mut impl Rng, depth: usize, allow_j: bool) -> QExpr {
    if depth <= 1 || rng.random_bool(0.25) {
        return random_leaf(rng, allow_j);
    }
    let op = rng.random_range(0..9);
    let exp = rng.random_range(1..=3);
    let a = Arc::new(random_tree(rng, depth - 1, allow_j));
    let mut sub = || Arc::new(random_tree(rng, depth - 1, allow_j));
    match op {
        0 | 1 => QExpr::Add(a, sub()),
        2 => QExpr::Sub(a, sub()),
        3 | 4 => QExpr::Mul(a, sub()),
        5 => QExpr::Div(a, sub()),
        6 => QExpr::Neg(a),
        7 => QExpr::Pow(a, exp),
        _ => match &*a {
            // conj of a variable is written as a ConjVar leaf
            QExpr::Var(v) => QExpr::ConjVar(*v),
            _ => QExpr::Conj(a),
        },
    }
}

/// Random quaternionic expression of depth at most `depth`. Trees are in
/// the form the parser produces, so `parse(print(e)) == e`.
pub fn random_qexpr(rng: &mut impl Rng, depth: usize) -> QExpr {
    random_tree(rng, depth, true)
}

/// Random complex expression (no `j`) of depth at most `depth`.
pub fn random_cexpr(rng: &mut impl Rng, depth: usize) -> CExpr {
    CExpr::new(random_tree(rng, depth, false)).expect("no j node")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fueter::residuals::{residual_eq1, residual_real_linear_system};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn affine_example_matches_its_text() {
        let p = Point4::from_coords([0.3, -0.2, 0.7, 1.1]);
        for (a, b) in [(0.0, 0.0), (1.0, 2.0), (-1.5, 0.25)] {
            let f = real_affine_example(a, b);
            let g = QFunction::parse(&real_affine_example_text(a, b)).unwrap();
            assert!((f.eval(&p).unwrap() - g.eval(&p).unwrap()).modulus() < 1e-14);
        }
    }

    #[test]
    fn curated_functions_are_hyperholomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (name, f) in curated_hyperholomorphic() {
            for _ in 0..10 {
                let p = random_point(&mut rng, -1.0, 1.0);
                let r = residual_eq1(&f, &p).unwrap();
                assert!(r.max_normalized() < 1e-13, "{name}");
            }
        }
    }

    #[test]
    fn x_polynomials_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = random_real_x_polynomial(&mut rng);
            let p = random_point(&mut rng, -1.0, 1.0);
            assert!(residual_real_linear_system(&f, &p).is_ok());
        }
    }

    #[test]
    fn random_trees_respect_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            assert!(random_qexpr(&mut rng, 6).depth() <= 6);
            assert!(!random_cexpr(&mut rng, 6).expr().contains_j());
        }
    }
}
