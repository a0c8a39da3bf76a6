//! Sample generators. Each one guarantees the algebraic precondition its
//! consumers rely on (commutation, summability, orthogonal supports, ...)
//! up to machine rounding, far inside every tolerance band.

use crate::effect::{make_effect, oplus, Effect, Projection};
use crate::matrix::{ComplexMatrix, Tolerance};
use crate::spectral::{eigh, sqrt_psd};
use crate::verify::SampleConfig;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn gauss(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Ginibre matrix: iid complex Gaussian entries.
pub fn gen_ginibre(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let entries = (0..dim * dim)
        .map(|_| Complex64::new(gauss(rng), gauss(rng)))
        .collect();
    ComplexMatrix::from_entries(dim, entries).unwrap()
}

/// Haar-ish random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn gen_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let g = gen_ginibre(dim, rng);
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|j| (0..dim).map(|i| g[(i, j)]).collect())
            .collect();
        let mut ok = true;
        for j in 0..dim {
            for k in 0..j {
                let prev = cols[k].clone();
                let inner: Complex64 = cols[j]
                    .iter()
                    .zip(&prev)
                    .map(|(a, b)| b.conj() * a)
                    .sum();
                for (a, b) in cols[j].iter_mut().zip(&prev) {
                    *a -= inner * b;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for a in cols[j].iter_mut() {
                *a /= norm;
            }
        }
        if !ok {
            continue;
        }
        let mut u = ComplexMatrix::zeros(dim);
        for j in 0..dim {
            for i in 0..dim {
                u[(i, j)] = cols[j][i];
            }
        }
        return u;
    }
}

/// Random unit vector.
pub fn gen_unit_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(gauss(rng), gauss(rng)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Effect with the given eigenvalues in a random eigenbasis.
pub fn effect_with_spectrum(
    values: &[f64],
    tol: &Tolerance,
    rng: &mut impl Rng,
) -> Effect {
    let u = gen_unitary(values.len(), rng);
    let d = ComplexMatrix::diag(values);
    let m = u.mul(&d).mul(&u.adjoint()).hermitize();
    make_effect(&m, tol).expect("spectrum in [0,1] yields an effect")
}

/// Generic random effect: Hermitian part of a Ginibre sample, rescaled
/// affinely into a random sub-interval of [0, 1].
pub fn gen_effect(cfg: &SampleConfig, rng: &mut impl Rng) -> Effect {
    let h = gen_ginibre(cfg.dim, rng).hermitize();
    let s = eigh(&h, &cfg.tol).expect("hermitized sample");
    let (min, max) = (s.min_eigenvalue(), s.max_eigenvalue());
    if max - min < 1e-9 {
        return make_effect(&ComplexMatrix::scalar(cfg.dim, 0.5), &cfg.tol).unwrap();
    }
    let lo = rng.gen_range(0.0..0.25);
    let hi = rng.gen_range(0.75..1.0);
    let a = lo + (hi - lo) / (max - min);
    let m = h
        .sub(&ComplexMatrix::scalar(cfg.dim, min))
        .scale_re((hi - lo) / (max - min))
        .add(&ComplexMatrix::scalar(cfg.dim, lo));
    let _ = a;
    make_effect(&m.hermitize(), &cfg.tol).expect("rescaled spectrum in [lo,hi]")
}

/// Random projection of the given rank.
pub fn gen_projection(cfg: &SampleConfig, rank: usize, rng: &mut impl Rng) -> Projection {
    assert!(rank <= cfg.dim);
    let mut values = vec![0.0; cfg.dim];
    for v in values.iter_mut().take(rank) {
        *v = 1.0;
    }
    let e = effect_with_spectrum(&values, &cfg.tol, rng);
    Projection::from_effect(&e, &cfg.tol).expect("spectrum {0,1} is sharp")
}

/// Pair of effects that commute exactly: two real diagonals in one shared
/// random eigenbasis.
pub fn gen_commuting_pair(cfg: &SampleConfig, rng: &mut impl Rng) -> (Effect, Effect) {
    let u = gen_unitary(cfg.dim, rng);
    let mut mk = || -> Vec<f64> { (0..cfg.dim).map(|_| rng.gen_range(0.0..=1.0)).collect() };
    let (va, vb) = (mk(), mk());
    let diag = |values: &[f64]| {
        u.mul(&ComplexMatrix::diag(values)).mul(&u.adjoint()).hermitize()
    };
    let a = make_effect(&diag(&va), &cfg.tol).unwrap();
    let b = make_effect(&diag(&vb), &cfg.tol).unwrap();
    (a, b)
}

/// Pair (B, C) with B ⊕ C defined: C = (I-B)^{1/2}·Z·(I-B)^{1/2} for a
/// random effect Z, so B + C <= B + (I-B) = I.
pub fn gen_summable_pair(cfg: &SampleConfig, rng: &mut impl Rng) -> (Effect, Effect) {
    let b = gen_effect(cfg, rng);
    let z = gen_effect(cfg, rng);
    let root = sqrt_psd(
        &ComplexMatrix::identity(cfg.dim).sub(b.matrix()),
        &cfg.tol,
    )
    .expect("I - B is PSD");
    let c = root.mul(z.matrix()).mul(&root).hermitize();
    let c = make_effect(&c, &cfg.tol).expect("compressed effect stays in E(H)");
    (b, c)
}

/// Pair with orthogonal supports: A lives inside a random projection P,
/// B inside I - P, so A·B = 0.
pub fn gen_orthogonal_supports(cfg: &SampleConfig, rng: &mut impl Rng) -> (Effect, Effect) {
    let rank = rng.gen_range(1..cfg.dim);
    let p = gen_projection(cfg, rank, rng);
    let q = ComplexMatrix::identity(cfg.dim).sub(p.matrix());
    let x = gen_effect(cfg, rng);
    let y = gen_effect(cfg, rng);
    let a = p.matrix().mul(x.matrix()).mul(p.matrix()).hermitize();
    let b = q.mul(y.matrix()).mul(&q).hermitize();
    (
        make_effect(&a, &cfg.tol).unwrap(),
        make_effect(&b, &cfg.tol).unwrap(),
    )
}

/// Triple (A, B, C) with C commuting with both A and B while A and B stay
/// generically non-commuting (for dim >= 3): A and B are block diagonal
/// with respect to a random projection P, and C = αP + β(I-P). A and B are
/// halved so A ⊕ B is always defined.
pub fn gen_block_triple(cfg: &SampleConfig, rng: &mut impl Rng) -> (Effect, Effect, Effect) {
    let rank = rng.gen_range(1..cfg.dim);
    let p = gen_projection(cfg, rank, rng);
    let pm = p.matrix();
    let qm = ComplexMatrix::identity(cfg.dim).sub(pm);
    fn block(
        cfg: &SampleConfig,
        pm: &ComplexMatrix,
        qm: &ComplexMatrix,
        rng: &mut impl Rng,
    ) -> Effect {
        let x = gen_effect(cfg, rng);
        let y = gen_effect(cfg, rng);
        let m = pm
            .mul(x.matrix())
            .mul(pm)
            .add(&qm.mul(y.matrix()).mul(qm))
            .scale_re(0.5)
            .hermitize();
        make_effect(&m, &cfg.tol).unwrap()
    }
    let a = block(cfg, pm, &qm, rng);
    let b = block(cfg, pm, &qm, rng);
    let alpha = rng.gen_range(0.0..=1.0);
    let beta = rng.gen_range(0.0..=1.0);
    let c = pm.scale_re(alpha).add(&qm.scale_re(beta)).hermitize();
    (a, b, make_effect(&c, &cfg.tol).unwrap())
}

/// Invertible effect: εI + (1-ε)R with ε >= 0.05.
pub fn gen_invertible(cfg: &SampleConfig, rng: &mut impl Rng) -> Effect {
    let eps = rng.gen_range(0.05..0.4);
    let r = gen_effect(cfg, rng);
    let m = ComplexMatrix::scalar(cfg.dim, eps)
        .add(&r.matrix().scale_re(1.0 - eps))
        .hermitize();
    make_effect(&m, &cfg.tol).unwrap()
}

/// Pair (B, C) with B <= C: C = B ⊕ D for a compressed effect D scaled to
/// stay summable.
pub fn gen_leq_pair(cfg: &SampleConfig, rng: &mut impl Rng) -> (Effect, Effect) {
    let (b, d) = gen_summable_pair(cfg, rng);
    let s = rng.gen_range(0.1..=1.0);
    let d = make_effect(&d.matrix().scale_re(s), &cfg.tol).unwrap();
    let c = oplus(&b, &d)
        .expect("same dim")
        .expect("scaled summand stays summable");
    (b, c)
}

/// Effect with an exact eigenvalue-1 eigenspace of rank `unit_rank`; the
/// remaining eigenvalues stay below 0.9. Returns the effect and the
/// projection onto its unit eigenspace.
pub fn gen_unit_face_effect(
    cfg: &SampleConfig,
    unit_rank: usize,
    rng: &mut impl Rng,
) -> (Effect, Projection) {
    assert!(unit_rank >= 1 && unit_rank < cfg.dim);
    let mut values = vec![1.0; unit_rank];
    for _ in unit_rank..cfg.dim {
        values.push(rng.gen_range(0.0..0.9));
    }
    let u = gen_unitary(cfg.dim, rng);
    let a = u
        .mul(&ComplexMatrix::diag(&values))
        .mul(&u.adjoint())
        .hermitize();
    let mut proj_values = vec![1.0; unit_rank];
    proj_values.resize(cfg.dim, 0.0);
    let p = u
        .mul(&ComplexMatrix::diag(&proj_values))
        .mul(&u.adjoint())
        .hermitize();
    let a = make_effect(&a, &cfg.tol).unwrap();
    let p = make_effect(&p, &cfg.tol).unwrap();
    (
        a,
        Projection::from_effect(&p, &cfg.tol).expect("spectrum {0,1}"),
    )
}

/// Effect commuting with the given projection: block diagonal in its
/// eigenbasis.
pub fn gen_commuting_with_projection(
    cfg: &SampleConfig,
    p: &Projection,
    rng: &mut impl Rng,
) -> Effect {
    let pm = p.matrix();
    let qm = ComplexMatrix::identity(cfg.dim).sub(pm);
    let x = gen_effect(cfg, rng);
    let y = gen_effect(cfg, rng);
    let m = pm
        .mul(x.matrix())
        .mul(pm)
        .add(&qm.mul(y.matrix()).mul(&qm))
        .hermitize();
    make_effect(&m, &cfg.tol).unwrap()
}

/// Pair that genuinely fails to commute (commutator norm above 1e-3).
pub fn gen_noncommuting_pair(cfg: &SampleConfig, rng: &mut impl Rng) -> (Effect, Effect) {
    loop {
        let a = gen_effect(cfg, rng);
        let b = gen_effect(cfg, rng);
        if a.matrix().commutator_norm(b.matrix()) > 1e-3 {
            return (a, b);
        }
    }
}
