use num_complex::Complex64;
use proptest::prelude::*;
use qfc_core::fueter::{cauchy_fueter, cauchy_fueter_fd, residual_eq1, FunctionJets};
use qfc_core::samples::{
    curated_hyperholomorphic, random_cexpr, random_holomorphic_rational, random_point, random_qexpr,
};
use qfc_core::wirtinger::{eval_jet, fd_jet};
use qfc_core::{lower, parse, print, Point4, QFunction, QfcError, Quaternion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hamilton product on `(a, b, c, d) = a + b i + c j + d k`.
fn hamilton(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// `z1 + z2 j` with `z2 = c + d i` is `a + b i + c j + d k`.
fn real4(q: Quaternion) -> [f64; 4] {
    [q.z1.re, q.z1.im, q.z2.re, q.z2.im]
}

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(|[a, b, c, d]| {
        Quaternion::new(Complex64::new(a, b), Complex64::new(c, d))
    })
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).modulus() <= tol * (1.0 + a.modulus().max(b.modulus()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn product_matches_hamilton(a in quat(), b in quat()) {
        let h = hamilton(real4(a), real4(b));
        let p = real4(a * b);
        for k in 0..4 {
            prop_assert!((h[k] - p[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn product_is_associative(a in quat(), b in quat(), c in quat()) {
        prop_assert!(close((a * b) * c, a * (b * c), 1e-13));
    }

    #[test]
    fn j_commutes_to_conjugate(re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(Quaternion::complex(z) * Quaternion::J, Quaternion::J * Quaternion::complex(z.conj()));
    }

    #[test]
    fn norm_is_multiplicative(a in quat(), b in quat()) {
        let lhs = (a * b).norm_sq();
        prop_assert!((lhs - a.norm_sq() * b.norm_sq()).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn norm_matches_conjugate_product(a in quat()) {
        let p = a * a.conj();
        prop_assert!((p.z1.re - a.norm_sq()).abs() < 1e-12 && p.z1.im.abs() < 1e-12 && p.z2.norm() < 1e-12);
    }

    #[test]
    fn inverse_is_two_sided(a in quat()) {
        prop_assume!(a.norm_sq() > 1e-6);
        let inv = a.rinv().unwrap();
        prop_assert!(close(a * inv, Quaternion::ONE, 1e-12));
        prop_assert!(close(inv * a, Quaternion::ONE, 1e-12));
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_qexpr(&mut rng, 5);
        let text = print(&e);
        prop_assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn lowering_matches_quaternion_evaluation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_qexpr(&mut rng, 4);
        let p = random_point(&mut rng, -1.5, 1.5);
        let reference = match e.eval_quaternion(&p) {
            Ok(q) if q.is_finite() && q.modulus() < 1e6 => q,
            _ => return Ok(()),
        };
        match lower(&e).eval(&p) {
            Ok(v) => prop_assert!(close(v, reference, 1e-10), "{}: {} vs {}", e, v, reference),
            Err(QfcError::Singular(_)) => {}
            Err(err) => prop_assert!(false, "{}", err),
        }
    }

    #[test]
    fn conj_lowering_is_quaternion_conjugate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = QFunction::from(&random_qexpr(&mut rng, 3));
        let p = random_point(&mut rng, -1.0, 1.0);
        if let (Ok(a), Ok(b)) = (f.conj().eval(&p), f.eval(&p)) {
            prop_assert!(close(a, b.conj(), 1e-12));
        }
    }

    #[test]
    fn jets_are_linear(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_cexpr(&mut rng, 3);
        let b = random_cexpr(&mut rng, 3);
        let p = random_point(&mut rng, -1.0, 1.0);
        let k = Complex64::new(re, im);
        let combo = a.mul(&qfc_core::CExpr::complex(k)).add(&b);
        if let (Ok(ja), Ok(jb), Ok(jc)) = (eval_jet(&a, &p), eval_jet(&b, &p), eval_jet(&combo, &p)) {
            let expect = ja.scale(k) + jb;
            let tol = 1e-11 * (1.0 + expect.max_abs());
            for (x, y) in jc.partials().iter().zip(expect.partials()) {
                prop_assert!((x - y).norm() <= tol);
            }
        }
    }

    #[test]
    fn holomorphic_functions_have_no_conjugate_derivatives(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_holomorphic_rational(&mut rng);
        let p = random_point(&mut rng, -1.0, 1.0);
        if let Ok(j) = eval_jet(&f.f1, &p) {
            prop_assert!(j.d_z1bar.norm() <= 1e-12 * (1.0 + j.max_abs()));
            prop_assert!(j.d_z2bar.norm() <= 1e-12 * (1.0 + j.max_abs()));
        }
    }

    #[test]
    fn forward_mode_matches_central_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_cexpr(&mut rng, 4);
        let p = random_point(&mut rng, -2.0, 2.0);
        if let (Ok(ad), Ok(fd), Ok(fd2)) = (eval_jet(&e, &p), fd_jet(&e, &p, 1e-5), fd_jet(&e, &p, 2e-5)) {
            let scale = 1.0 + ad.max_abs();
            // Close to a pole the difference quotient itself has not converged.
            prop_assume!(fd.partials().iter().zip(fd2.partials()).all(|(x, y)| (x - y).norm() <= 1e-7 * scale));
            for (x, y) in ad.partials().iter().zip(fd.partials()) {
                prop_assert!((x - y).norm() <= 1e-6 * scale, "{}", e.expr());
            }
        }
    }

    #[test]
    fn operator_is_right_linear(seed in any::<u64>(), a in quat(), b in quat()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = curated_hyperholomorphic();
        let f = &fs[(seed % fs.len() as u64) as usize].1;
        let g = QFunction::from(&random_qexpr(&mut rng, 3));
        let p = random_point(&mut rng, -1.0, 1.0);
        let h = qfc_core::sum_qf(&f.mul_right(a), &g.mul_right(b));
        if let (Ok(df), Ok(dg), Ok(dh)) = (cauchy_fueter(f, &p), cauchy_fueter(&g, &p), cauchy_fueter(&h, &p)) {
            let expect = df.value * a + dg.value * b;
            prop_assert!(close(dh.value, expect, 1e-10));
        }
    }

    #[test]
    fn operator_matches_finite_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = QFunction::from(&random_qexpr(&mut rng, 4));
        let p = random_point(&mut rng, -1.0, 1.0);
        if let (Ok(ad), Ok(fd), Ok(fd2)) = (cauchy_fueter(&f, &p), cauchy_fueter_fd(&f, &p, 1e-5), cauchy_fueter_fd(&f, &p, 2e-5)) {
            let m = FunctionJets::at(&f, &p).unwrap().magnitude();
            prop_assume!((fd.value - fd2.value).modulus() <= 1e-7 * (1.0 + m));
            prop_assert!((ad.value - fd.value).modulus() <= 1e-6 * (1.0 + m));
        }
    }

    #[test]
    fn curated_functions_stay_hyperholomorphic(k in 0usize..10, x in prop::array::uniform4(-1.0f64..1.0)) {
        let fs = curated_hyperholomorphic();
        let (name, f) = &fs[k % fs.len()];
        let p = Point4::from_coords(x);
        if let Ok(r) = residual_eq1(f, &p) {
            prop_assert!(r.max_normalized() < 1e-12, "{}", name);
        }
    }
}

#[test]
fn round_trip_on_a_thousand_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let e = random_qexpr(&mut rng, 6);
        assert_eq!(parse(&print(&e)).unwrap(), e);
    }
}
