use std::f64::consts::PI;

use approx::assert_relative_eq;
use riemann_svp::algebra::{kretschmann, np_scalars, ricci_scalar};
use riemann_svp::catalog::{self, kerr_psi2, schwarzschild_riemann};
use riemann_svp::geometry::{riemann, riemann_with, verify_tensor_symmetries, CurvaturePath};
use riemann_svp::svp::{kerr_reduced_solve, schwarzschild_reduced_solve};
use riemann_svp::{DiffOptions, Point};

fn pt(v: &[f64]) -> Point {
    Point::new(v.to_vec()).unwrap()
}

#[test]
fn numeric_sphere_matches_closed_form() {
    let e = catalog::sphere2();
    for theta in [0.3, 1.0, PI / 2.0, 2.5] {
        let p = pt(&[theta, 0.7]);
        let opts = DiffOptions::default();
        let num = riemann_with(&e.spec, &p, CurvaturePath::Numeric, &opts).unwrap();
        let ana = riemann_with(&e.spec, &p, CurvaturePath::Analytic, &opts).unwrap();
        assert!(num.riemann_lowered.max_abs_diff(&ana.riemann_lowered) < 1e-9);
        assert_relative_eq!(num.riemann_lowered[(0, 1, 0, 1)], theta.sin().powi(2), epsilon = 1e-9);
    }
}

#[test]
fn numeric_schwarzschild_matches_table() {
    let e = catalog::schwarzschild(1.5).unwrap();
    for (r, theta) in [(4.0, 0.4), (7.5, 1.2), (20.0, 2.9)] {
        let p = pt(&[1.0, r, theta, -2.0]);
        let num = riemann_with(&e.spec, &p, CurvaturePath::Numeric, &DiffOptions::default()).unwrap();
        let table = schwarzschild_riemann(1.5, r, theta);
        let rel = num.riemann_mixed.max_abs_diff(&table) / table.max_abs();
        assert!(rel < 1e-6, "r {r}: {rel:e}");
    }
}

#[test]
fn schwarzschild_is_ricci_flat_with_known_kretschmann() {
    let e = catalog::schwarzschild(2.0).unwrap();
    let cd = riemann(&e.spec, &pt(&[0.0, 7.0, 1.1, 0.0])).unwrap();
    assert!(ricci_scalar(&cd).abs() < 1e-14);
    assert_relative_eq!(kretschmann(&cd), 48.0 * 4.0 / 7f64.powi(6), max_relative = 1e-12);
}

#[test]
fn catalog_curvature_has_riemann_symmetries() {
    let entries = [
        (catalog::sphere2(), 1e-12),
        (catalog::space_form(-1.5, 5).unwrap(), 1e-12),
        (catalog::minkowski(), 1e-12),
        (catalog::schwarzschild(1.0).unwrap(), 1e-12),
        (catalog::kerr(1.0, 0.7).unwrap(), 1e-6),
    ];
    for (e, tol) in entries {
        let cd = riemann(&e.spec, &e.default_point).unwrap();
        let rep = verify_tensor_symmetries(&cd, tol);
        assert!(rep.passed, "{}: {rep:?}", e.id());
    }
}

#[test]
fn kerr_small_spin_approaches_schwarzschild() {
    let (m, r, theta) = (1.0, 5.0, 0.9);
    let a = 1e-6;
    let kerr = catalog::kerr(m, a).unwrap();
    let schw = catalog::schwarzschild(m).unwrap();
    let p = pt(&[0.0, r, theta, 0.0]);
    let ck = riemann(&kerr.spec, &p).unwrap();
    let cs = riemann(&schw.spec, &p).unwrap();
    assert_relative_eq!(kretschmann(&ck), kretschmann(&cs), max_relative = 1e-8);

    let psi = np_scalars(&ck, &kerr.tetrad(&p).unwrap().unwrap()).unwrap();
    assert!((psi[2] - kerr_psi2(m, a, r, theta)).norm() < 1e-8);
    assert!((psi[2].re - m / r.powi(3)).abs() < 1e-8);

    let sk = kerr_reduced_solve(m, a, r, theta).unwrap();
    let ss = schwarzschild_reduced_solve(m, r, theta).unwrap();
    assert!((sk.sigma - ss.sigma).abs() < 1e-8);
    assert!(sk.residual < 1e-8);
}

#[test]
fn out_of_domain_points_are_rejected() {
    let e = catalog::kerr(1.0, 0.5).unwrap();
    let inside_horizon = pt(&[0.0, 1.5, 1.0, 0.0]);
    assert!(e.check_point(&inside_horizon).is_err());
    assert!(kerr_reduced_solve(1.0, 0.5, 1.5, 1.0).is_err());
}
