use nalgebra::DMatrix;
use proptest::prelude::*;
use riemann_svp::geometry::{
    independent_components, independent_count, reconstruct_from_independent, verify_tensor_symmetries,
};
use riemann_svp::svp::{jacobian, residual};
use riemann_svp::{CurvatureData, Quadruple, Signature, Tensor4};

/// Kulkarni–Nomizu product `h ⊙ k`, an algebraic curvature tensor.
fn kulkarni_nomizu(h: &DMatrix<f64>, k: &DMatrix<f64>) -> Tensor4 {
    Tensor4::from_fn(h.nrows(), |i, j, a, b| {
        h[(i, a)] * k[(j, b)] + h[(j, b)] * k[(i, a)] - h[(i, b)] * k[(j, a)] - h[(j, a)] * k[(i, b)]
    })
}

fn symmetric(n: usize, vals: &[f64]) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |i, j| vals[i * n + j]);
    (&m + m.transpose()) * 0.5
}

fn curvature(n: usize, lorentz: bool, vals: &[f64]) -> CurvatureData {
    let h1 = symmetric(n, &vals[..n * n]);
    let h2 = symmetric(n, &vals[n * n..2 * n * n]);
    let h3 = symmetric(n, &vals[2 * n * n..3 * n * n]);
    let mut r = kulkarni_nomizu(&h1, &h2);
    let extra = kulkarni_nomizu(&h3, &h3);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    r[(i, j, k, l)] += extra[(i, j, k, l)];
                }
            }
        }
    }
    let mut g = DMatrix::identity(n, n);
    let sig = if lorentz {
        g[(0, 0)] = -1.0;
        Signature::lorentzian(n)
    } else {
        Signature::riemannian(n)
    };
    CurvatureData::from_lowered(sig, g, r).unwrap()
}

fn case() -> impl Strategy<Value = (usize, bool, Vec<f64>, Vec<f64>, f64)> {
    (2usize..=5, any::<bool>()).prop_flat_map(|(n, lorentz)| {
        (
            Just(n),
            Just(lorentz),
            prop::collection::vec(-1.0..1.0f64, 3 * n * n),
            prop::collection::vec(-1.5..1.5f64, 4 * n),
            -2.0..2.0f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residual_is_affine_in_sigma((n, lorentz, vals, q, s) in case(), t in -2.0..2.0f64) {
        let cd = curvature(n, lorentz, &vals);
        let quad = Quadruple::from_flat(&q, n, [1, 1, 1, 1]);
        let a = residual(&cd, &quad, s);
        let b = residual(&cd, &quad, t);
        for (k, (ra, rb)) in a.iter().zip(&b).enumerate() {
            let expect = if k < 4 * n { -(s - t) * q[k] } else { 0.0 };
            prop_assert!((ra - rb - expect).abs() < 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn jacobian_matches_finite_differences((n, lorentz, vals, q, s) in case()) {
        let cd = curvature(n, lorentz, &vals);
        let signs = [1, 1, 1, 1];
        let quad = Quadruple::from_flat(&q, n, signs);
        let j = jacobian(&cd, &quad, s);
        let h = 1e-6;
        let mut u = q.clone();
        u.push(s);
        let f = |u: &[f64]| residual(&cd, &Quadruple::from_flat(&u[..4 * n], n, signs), u[4 * n]);
        for c in 0..u.len() {
            let (mut up, mut dn) = (u.clone(), u.clone());
            up[c] += h;
            dn[c] -= h;
            let (fp, fm) = (f(&up), f(&dn));
            for r in 0..fp.len() {
                let fd = (fp[r] - fm[r]) / (2.0 * h);
                prop_assert!((fd - j[(r, c)]).abs() < 1e-6 * (1.0 + fd.abs()), "entry ({}, {}): {} vs {}", r, c, fd, j[(r, c)]);
            }
        }
    }

    #[test]
    fn independent_components_reconstruct((n, lorentz, vals, _q, _s) in case()) {
        let cd = curvature(n, lorentz, &vals);
        let comps = independent_components(&cd.riemann_lowered);
        prop_assert_eq!(comps.len(), independent_count(n));
        let back = reconstruct_from_independent(n, &comps);
        prop_assert!(back.max_abs_diff(&cd.riemann_lowered) < 1e-12);
    }

    #[test]
    fn algebraic_curvature_passes_symmetry_checks((n, lorentz, vals, _q, _s) in case()) {
        let cd = curvature(n, lorentz, &vals);
        prop_assert!(verify_tensor_symmetries(&cd, 1e-12).passed);
    }
}
