//! Cross-cutting invariants checked against independent oracles: the
//! eigensolver against reconstruction and polynomial evaluation, the block
//! positivity test against the assembled-matrix test, and the algebraic
//! laws of (E(H), 0, I, ⊕) and the sequential products on it.

use num_complex::Complex64;
use proptest::prelude::*;
use seqeff::effect::{
    complement, is_sharp, leq, make_effect, oplus, rank_one_projection, Effect,
};
use seqeff::family::{
    borel_family, borel_g, family_product, sqrt_family, standard_product, ProductFamily,
    ProductSpec,
};
use seqeff::matrix::{ComplexMatrix, RectMatrix, Tolerance};
use seqeff::spectral::{block_psd_check, eigh, is_psd, phase_equal, sqrt_psd};
use seqeff::verify::gen::{gen_effect, gen_ginibre, gen_projection, gen_unit_vector};
use seqeff::verify::{sample_rng, SampleConfig};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn cfg(dim: usize) -> SampleConfig {
    SampleConfig::new(dim, 1, 0, tol(), ProductSpec::standard())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hermitian matrix from free real parameters: diagonal + upper triangle.
fn hermitian_from(params: &[f64], dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    let mut k = 0;
    for i in 0..dim {
        m[(i, i)] = c(params[k], 0.0);
        k += 1;
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let z = c(params[k], params[k + 1]);
            k += 2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

fn herm_params(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim * dim)
}

/// Polynomial evaluation by Horner's rule — the oracle for functional
/// calculus on polynomial functions.
fn horner(m: &ComplexMatrix, coeffs: &[f64]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(m.dim());
    for &a in coeffs.iter().rev() {
        acc = acc.mul(m).add(&ComplexMatrix::scalar(m.dim(), a));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs(params in herm_params(3)) {
        let m = hermitian_from(&params, 3);
        let s = eigh(&m, &tol()).unwrap();
        prop_assert!(s.reconstruct().distance(&m) < 1e-10 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn functional_calculus_matches_horner(
        params in herm_params(3),
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..5),
    ) {
        let m = hermitian_from(&params, 3);
        let s = eigh(&m, &tol()).unwrap();
        let via_spectral = s.apply_total(|t| {
            let mut acc = 0.0;
            for &a in coeffs.iter().rev() {
                acc = acc * t + a;
            }
            c(acc, 0.0)
        });
        let via_horner = horner(&m, &coeffs);
        let scale = via_horner.frobenius_norm().max(1.0);
        prop_assert!(via_spectral.distance(&via_horner) < 1e-10 * scale);
    }

    #[test]
    fn borel_g_is_multiplicative(t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0, lambda in -3.0f64..3.0) {
        let lhs = borel_g(t1 * t2, lambda);
        let rhs = borel_g(t1, lambda) * borel_g(t2, lambda);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        prop_assert!((borel_g(t1, lambda).norm() - t1.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn phase_equal_recovers_planted_phase(params in herm_params(2), theta in 0.0f64..6.28) {
        let b = hermitian_from(&params, 2);
        prop_assume!(b.frobenius_norm() > 1e-3);
        let xi = Complex64::from_polar(1.0, theta);
        let a = b.scale(xi);
        let found = phase_equal(&a, &b, &tol()).unwrap().expect("phase exists");
        prop_assert!((found - xi).norm() < 1e-9);
    }
}

#[test]
fn sqrt_psd_squares_back() {
    for i in 0..100 {
        let mut rng = sample_rng(11, "properties", i);
        let dim = 2 + (i % 4) as usize;
        let a = gen_effect(&cfg(dim), &mut rng);
        let root = sqrt_psd(a.matrix(), &tol()).unwrap();
        let squared = root.mul(&root);
        let scale = a.matrix().frobenius_norm().max(1.0);
        assert!(
            squared.distance(a.matrix()) < 1e-10 * scale,
            "sample {i}: {:.3e}",
            squared.distance(a.matrix())
        );
    }
}

#[test]
fn block_psd_check_agrees_with_assembled_is_psd() {
    let t = tol();
    let mut agreements = 0;
    for i in 0..200 {
        let mut rng = sample_rng(12, "properties", i);
        let (d1, d2) = if i % 2 == 0 { (2, 2) } else { (3, 3) };
        // Mix clearly-PSD samples (Gram matrices) with generic Hermitian
        // ones so both verdicts occur.
        let full = if i % 3 == 0 {
            let g = gen_ginibre(d1 + d2, &mut rng);
            g.mul(&g.adjoint()).scale_re(0.25).hermitize()
        } else {
            let g = gen_ginibre(d1 + d2, &mut rng);
            g.hermitize()
        };
        let mut a11 = ComplexMatrix::zeros(d1);
        let mut a22 = ComplexMatrix::zeros(d2);
        let mut a12 = RectMatrix::zeros(d1, d2);
        let mut a21 = RectMatrix::zeros(d2, d1);
        for r in 0..d1 {
            for cc in 0..d1 {
                a11[(r, cc)] = full[(r, cc)];
            }
            for cc in 0..d2 {
                a12.set(r, cc, full[(r, d1 + cc)]);
            }
        }
        for r in 0..d2 {
            for cc in 0..d2 {
                a22[(r, cc)] = full[(d1 + r, d1 + cc)];
            }
            for cc in 0..d1 {
                a21.set(r, cc, full[(d1 + r, cc)]);
            }
        }
        let via_blocks = block_psd_check(&a11, &a12, &a21, &a22, &t).unwrap();
        let via_assembled = is_psd(&full, &t).unwrap();
        assert_eq!(via_blocks, via_assembled, "sample {i}");
        agreements += 1;
    }
    assert_eq!(agreements, 200);
}

#[test]
fn effect_algebra_laws() {
    let t = tol();
    for i in 0..60 {
        let mut rng = sample_rng(13, "properties", i);
        let dim = 2 + (i % 3) as usize;
        let a = gen_effect(&cfg(dim), &mut rng);
        let b = gen_effect(&cfg(dim), &mut rng);

        // a ⊕ a' = I and (a')' = a
        let ac = complement(&a);
        let sum = oplus(&a, &ac).unwrap().expect("a ⊕ a' is defined");
        assert!(sum.matrix().distance(&ComplexMatrix::identity(dim)) < 1e-12);
        assert!(complement(&ac).matrix().distance(a.matrix()) < 1e-13);

        // ⊕ is commutative where defined
        match (oplus(&a, &b).unwrap(), oplus(&b, &a).unwrap()) {
            (Some(x), Some(y)) => assert!(x.matrix().distance(y.matrix()) < 1e-13),
            (None, None) => {}
            _ => panic!("⊕ definedness must be symmetric"),
        }

        // zero law and order bridging: a <= b iff b = a ⊕ d for some effect d
        let zero = Effect::zero(dim, &t);
        let z = oplus(&a, &zero).unwrap().unwrap();
        assert!(z.matrix().distance(a.matrix()) < 1e-15);
        if leq(&a, &b, &t).unwrap() {
            let d = b.matrix().sub(a.matrix()).hermitize();
            assert!(make_effect(&d, &t).is_ok(), "difference of ordered effects is an effect");
        }

        // sharpness ⇔ idempotency
        let idem = a.matrix().mul(a.matrix()).distance(a.matrix()) < 1e-9;
        assert_eq!(is_sharp(&a, &t), idem);
        let p = gen_projection(&cfg(dim), 1 + i % (dim - 1), &mut rng);
        assert!(is_sharp(p.effect(), &t));
    }
}

fn families_under_test() -> Vec<ProductFamily> {
    vec![sqrt_family(), borel_family(1.0), borel_family(-2.5)]
}

#[test]
fn products_annihilate_zero_and_fix_identity() {
    let t = tol();
    for i in 0..30 {
        let mut rng = sample_rng(14, "properties", i);
        let dim = 2 + (i % 3) as usize;
        let a = gen_effect(&cfg(dim), &mut rng);
        let zero = Effect::zero(dim, &t);
        let one = Effect::one(dim, &t);
        for f in families_under_test() {
            let label = f.label().to_string();
            let az = family_product(&f, &a, &zero).unwrap();
            assert!(az.matrix().frobenius_norm() < 1e-12, "{label}: A◇0");
            let za = family_product(&f, &zero, &a).unwrap();
            assert!(za.matrix().frobenius_norm() < 1e-12, "{label}: 0◇A");
            let ai = family_product(&f, &a, &one).unwrap();
            assert!(ai.matrix().distance(a.matrix()) < 1e-10, "{label}: A◇I");
            let ia = family_product(&f, &one, &a).unwrap();
            assert!(ia.matrix().distance(a.matrix()) < 1e-12, "{label}: I◇A");
        }
        let sz = standard_product(&a, &zero).unwrap();
        assert!(sz.matrix().frobenius_norm() < 1e-12);
    }
}

#[test]
fn rank_one_action_matches_closed_form() {
    // A◇P_x = ‖f_A(A)x‖²·P_y with y the normalized image of x.
    let t = tol();
    for i in 0..30 {
        let mut rng = sample_rng(15, "properties", i);
        let dim = 2 + (i % 3) as usize;
        let a = gen_effect(&cfg(dim), &mut rng);
        let x = gen_unit_vector(dim, &mut rng);
        let px = rank_one_projection(&x, &t).unwrap();
        for f in families_under_test() {
            let fa = f.apply(&a).unwrap();
            let fax = fa.apply_vec(&x);
            let norm = fax.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            let y: Vec<Complex64> = fax.iter().map(|z| z / norm).collect();
            let expected = ComplexMatrix::outer(&y).scale_re(norm * norm);
            let out = family_product(&f, &a, px.effect()).unwrap();
            assert!(
                out.matrix().distance(&expected) < 1e-10,
                "{}: {:.3e}",
                f.label(),
                out.matrix().distance(&expected)
            );
        }
    }
}

#[test]
fn standard_product_matches_sqrt_family_route() {
    // Two independent code paths for A^{1/2}·B·A^{1/2} must agree.
    for i in 0..40 {
        let mut rng = sample_rng(16, "properties", i);
        let dim = 2 + (i % 4) as usize;
        let a = gen_effect(&cfg(dim), &mut rng);
        let b = gen_effect(&cfg(dim), &mut rng);
        let via_standard = standard_product(&a, &b).unwrap();
        let via_family = family_product(&sqrt_family(), &a, &b).unwrap();
        assert!(via_standard.matrix().distance(via_family.matrix()) < 1e-10);
    }
}

#[test]
fn failure_records_reload_and_refail() {
    // A recorded counterexample must still be a counterexample after a
    // serde round trip: run a suite known to produce witnesses and
    // re-evaluate each witness from its serialized inputs.
    use seqeff::verify::suites::run_thm_4_1;
    let c = SampleConfig::new(2, 20, 7, tol(), ProductSpec::standard());
    let report = run_thm_4_1(&c);
    let json = serde_json::to_string(&report).unwrap();
    let back: seqeff::verify::VerificationReport = serde_json::from_str(&json).unwrap();
    let f = sqrt_family();
    let mut revalidated = 0;
    for w in &back.witnesses {
        if w.clause != "associativity-violated" {
            continue;
        }
        let [a, b, middle] = &w.inputs[..] else {
            panic!("witness carries (A, B, C)");
        };
        let bc = family_product(&f, b, middle).unwrap();
        let lhs = family_product(&f, a, &bc).unwrap();
        let ab = family_product(&f, a, b).unwrap();
        let rhs = family_product(&f, &ab, middle).unwrap();
        assert!(
            lhs.matrix().distance(rhs.matrix()) > 100.0 * tol().eq_tol,
            "reloaded witness no longer violates associativity"
        );
        revalidated += 1;
    }
    assert!(revalidated > 0, "suite recorded no witnesses to revalidate");
}

#[test]
fn tolerance_validation() {
    assert!(Tolerance::new(1e-9, 1e-10, 1e-8).is_ok());
    assert!(Tolerance::new(0.0, 1e-10, 1e-8).is_err());
    assert!(Tolerance::new(1e-9, -1.0, 1e-8).is_err());
    // cluster_gap must dominate eq_tol
    assert!(Tolerance::new(1e-6, 1e-10, 1e-8).is_err());
}
