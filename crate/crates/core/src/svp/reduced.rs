//! Reduced systems: the M-eigenvalue specialization and the black-hole
//! ansätze.

use nalgebra::DMatrix;

use super::multistart::{run, MultistartReport};
use super::newton::{gauss_newton, NewtonOptions};
use super::solve::{orthonormal_frame, solve_newton, RUNAWAY_NORM};
use super::{jacobian, residual, Origin, Quadruple, SignPattern, Signs, SolverConfig, SvpSolution};
use crate::algebra::{np_scalars, NpTetrad};
use crate::catalog::{kerr, schwarzschild, schwarzschild_abcd};
use crate::error::{Error, Result};
use crate::geometry::{riemann, CurvatureData, Point};

/// Newton on `(y, z, σ)` for `R(Y,Z)Z = σY`, `R(Z,Y)Y = σZ` with
/// `⟨Y,Y⟩ = s_Y`, `⟨Z,Z⟩ = s_Z`, embedded as `(Y, Z, Y, Z, σ)`.
fn solve_meigen(cd: &CurvatureData, y0: &[f64], z0: &[f64], sigma0: f64, signs: [i8; 2], cfg: &SolverConfig) -> Result<SvpSolution> {
    let n = cd.dim();
    let full_signs: Signs = [signs[0], signs[1], signs[0], signs[1]];
    let embed = |u: &[f64]| {
        let y = u[0..n].to_vec();
        let z = u[n..2 * n].to_vec();
        (
            Quadruple {
                w: y.clone(),
                x: z.clone(),
                y,
                z,
                signs: full_signs,
            },
            u[2 * n],
        )
    };
    let mut u0 = Vec::with_capacity(2 * n + 1);
    u0.extend_from_slice(y0);
    u0.extend_from_slice(z0);
    u0.push(sigma0);
    let opts = NewtonOptions {
        tol: cfg.tol,
        max_iters: cfg.max_newton_iters,
        max_norm: RUNAWAY_NORM,
    };
    let out = gauss_newton(
        |u| {
            let (q, s) = embed(u);
            residual(cd, &q, s)
        },
        |u| {
            let (q, s) = embed(u);
            let j = jacobian(cd, &q, s);
            // chain rule: ∂/∂y = ∂/∂w + ∂/∂y, ∂/∂z = ∂/∂x + ∂/∂z
            let mut r = DMatrix::zeros(j.nrows(), 2 * n + 1);
            for c in 0..n {
                r.set_column(c, &(j.column(c) + j.column(2 * n + c)));
                r.set_column(n + c, &(j.column(n + c) + j.column(3 * n + c)));
            }
            r.set_column(2 * n, &j.column(4 * n));
            r
        },
        &u0,
        &opts,
    )?;
    let (mut q, mut sigma) = embed(&out.u);
    if sigma < 0.0 {
        // (−Y, Z, −Y, Z) keeps the M-eigen form and leaves σ unchanged, so
        // the sign is normalized by negating W alone
        q.w.iter_mut().for_each(|c| *c = -*c);
        sigma = -sigma;
    }
    Ok(SvpSolution::evaluate(cd, q, sigma, Origin::MEigen, 0))
}

/// Multistart on the M-eigenvalue system `W = Y`, `X = Z`.
///
/// Each output embeds as a full solution. The sign of a negative `σ` is
/// normalized by flipping `W`, after which `W = −Y`.
pub fn meigen_reduce(cd: &CurvatureData, cfg: &SolverConfig) -> Result<MultistartReport> {
    let cfg = SolverConfig {
        sign_pattern: match cfg.sign_pattern {
            SignPattern::Fixed(s) => SignPattern::Fixed([s[2], s[3], s[2], s[3]]),
            SignPattern::All => SignPattern::All,
        },
        ..cfg.clone()
    };
    run(
        cd,
        &cfg,
        |cd, q, _, cfg| {
            let signs = [q.signs[2], q.signs[3]];
            let embedded = Quadruple {
                w: q.y.clone(),
                x: q.z.clone(),
                y: q.y.clone(),
                z: q.z.clone(),
                signs: [signs[0], signs[1], signs[0], signs[1]],
            };
            let s0 = signs[0] as f64 * super::r_wxyz(cd, &embedded);
            solve_meigen(cd, &q.y, &q.z, s0, signs, cfg)
        },
        meigen_trivial,
    )
}

/// `(V, V, V, V, 0)` for a unit vector `V`.
fn meigen_trivial(cd: &CurvatureData, signs: Signs) -> Option<SvpSolution> {
    if signs.iter().any(|s| *s != signs[0]) {
        return None;
    }
    let (frame, eta) = orthonormal_frame(&cd.g);
    let a = eta.iter().position(|e| *e == signs[0])?;
    let v: Vec<f64> = frame.column(a).iter().copied().collect();
    let q = Quadruple::new(v.clone(), v.clone(), v.clone(), v, signs).ok()?;
    let mut sol = SvpSolution::evaluate(cd, q, 0.0, Origin::MEigen, 0);
    sol.trivial = true;
    Some(sol)
}

fn polish(cd: &CurvatureData, sol: SvpSolution, cfg: &SolverConfig) -> SvpSolution {
    if sol.residual < cfg.tol {
        return sol;
    }
    match solve_newton(cd, &sol.q, sol.sigma, cfg) {
        Ok(mut p) if p.residual < sol.residual => {
            p.origin = sol.origin;
            p.seed = sol.seed;
            p
        }
        _ => sol,
    }
}

/// Schwarzschild solution from the ansatz `y⁰ = z⁰, y¹ = z¹, y² = −z²,
/// y³ = −z³` with `X = Y`, `W = Z`.
///
/// The reduced equations confine the vectors to the `(r, θ)` plane with
/// `(x¹)² = σ/(2B)`, `(x²)² = σ/(2C)` and normalization `σ = M/r³`.
pub fn schwarzschild_reduced_solve(m: f64, r: f64, theta: f64) -> Result<SvpSolution> {
    let entry = schwarzschild(m)?;
    let p = Point::new(vec![0.0, r, theta, 0.0])?;
    entry.check_point(&p)?;
    let cd = riemann(&entry.spec, &p)?;
    let [_, b, c, _] = schwarzschild_abcd(m, r, theta);
    // ⟨x,x⟩ = g₁₁σ/(2B) + g₂₂σ/(2C) = σ r³/M = 1
    let sigma = m / r.powi(3);
    let x1 = (sigma / (2.0 * b)).sqrt();
    let x2 = (sigma / (2.0 * c)).sqrt();
    let x = vec![0.0, x1, x2, 0.0];
    let w = vec![0.0, x1, -x2, 0.0];
    let q = Quadruple::new(w.clone(), x.clone(), x, w, [1, 1, 1, 1])?;
    let sol = SvpSolution::evaluate(&cd, q, sigma, Origin::ReducedSchwarzschild, 0);
    Ok(polish(&cd, sol, &SolverConfig::default()))
}

/// Kerr solution from the tetrad ansatz `Z = X`, `W = −Y`, with
/// `X = x¹l + x²n + x³m + x̄³m̄` and `Y = x¹l + x²n − x³m − x̄³m̄`,
/// `x¹ = ½`, `x² = −½`, `x³ = ½`.
///
/// Then `⟨X,X⟩ = −2x¹x² + 2|x³|² = 1` and `σ = 2|x³|²(Ψ₂ + Ψ̄₂) = Re Ψ₂`,
/// made non-negative by flipping `W`. This equals `√((|I| + Re I)/6)`.
pub fn kerr_reduced_solve(m: f64, a: f64, r: f64, theta: f64) -> Result<SvpSolution> {
    let entry = kerr(m, a)?;
    let p = Point::new(vec![0.0, r, theta, 0.0])?;
    entry.check_point(&p)?;
    let cd = riemann(&entry.spec, &p)?;
    let tetrad = entry.tetrad(&p).expect("kerr has a tetrad")?;
    kerr_reduced_at(&cd, &tetrad, &SolverConfig::default())
}

/// The Kerr ansatz on precomputed curvature and tetrad.
pub fn kerr_reduced_at(cd: &CurvatureData, tetrad: &NpTetrad, cfg: &SolverConfig) -> Result<SvpSolution> {
    if cd.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: cd.dim(),
        });
    }
    let psi = np_scalars(cd, tetrad)?;
    let (x1, x2, x3) = (0.5, -0.5, 0.5);
    // x³m + x̄³m̄ = 2 Re(x³ m)
    let mpart: Vec<f64> = tetrad.m.iter().map(|c| 2.0 * x3 * c.re).collect();
    let base: Vec<f64> = (0..4).map(|i| x1 * tetrad.l[i] + x2 * tetrad.n[i]).collect();
    let x: Vec<f64> = (0..4).map(|i| base[i] + mpart[i]).collect();
    let y: Vec<f64> = (0..4).map(|i| base[i] - mpart[i]).collect();
    let mut w: Vec<f64> = y.iter().map(|v| -v).collect();
    let mut sigma = psi[2].re;
    if sigma < 0.0 {
        w.iter_mut().for_each(|v| *v = -*v);
        sigma = -sigma;
    }
    let q = Quadruple::new(w, x.clone(), y, x, [1, 1, 1, 1])?;
    let sol = SvpSolution::evaluate(cd, q, sigma, Origin::ReducedKerr, 0);
    Ok(polish(cd, sol, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{invariant_i, kretschmann};
    use crate::catalog::{euclidean, space_form};
    use crate::svp::tests::sphere_solution;
    use std::f64::consts::PI;

    #[test]
    fn schwarzschild_values() {
        for (m, r, want) in [(1.0, 3.0, 1.0 / 27.0), (1.0, 10.0, 1e-3), (2.0, 6.0, 2.0 / 216.0)] {
            let sol = schwarzschild_reduced_solve(m, r, 0.9).unwrap();
            assert!((sol.sigma - want).abs() < 1e-12, "{} vs {want}", sol.sigma);
            assert!(sol.residual < 1e-10, "{}", sol.residual);
        }
        let e = schwarzschild(2.0).unwrap();
        let cd = riemann(&e.spec, &Point::new(vec![0.0, 6.0, 0.9, 0.0]).unwrap()).unwrap();
        let sol = schwarzschild_reduced_solve(2.0, 6.0, 0.9).unwrap();
        assert!((sol.sigma - (kretschmann(&cd) / 48.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn schwarzschild_domain() {
        assert!(matches!(schwarzschild_reduced_solve(1.0, 1.5, 1.0), Err(Error::OutOfDomain(_))));
        // r = 2M is the horizon
        assert!(matches!(schwarzschild_reduced_solve(2.0, 4.0, 1.0), Err(Error::OutOfDomain(_))));
        assert!(matches!(schwarzschild_reduced_solve(1.0, 3.0, 0.0), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn kerr_values() {
        let sol = kerr_reduced_solve(1.0, 0.5, 3.0, PI / 2.0).unwrap();
        assert!((sol.sigma - 1.0 / 27.0).abs() < 1e-8);
        let sol = kerr_reduced_solve(1.0, 0.0, 3.0, PI / 4.0).unwrap();
        assert!((sol.sigma - 1.0 / 27.0).abs() < 1e-8);
        let (m, a, r, th) = (1.0, 0.9, 4.0, PI / 3.0);
        let e = kerr(m, a).unwrap();
        let p = Point::new(vec![0.0, r, th, 0.0]).unwrap();
        let cd = riemann(&e.spec, &p).unwrap();
        let psi = np_scalars(&cd, &e.tetrad(&p).unwrap().unwrap()).unwrap();
        let i = invariant_i(&psi);
        let want = ((i.norm() + i.re) / 6.0).sqrt();
        let sol = kerr_reduced_solve(m, a, r, th).unwrap();
        assert!((sol.sigma - want).abs() < 1e-8, "{} vs {want}", sol.sigma);
        assert!(sol.residual < 1e-8, "{}", sol.residual);
    }

    #[test]
    fn meigen_sphere_and_space_forms() {
        let (cd, _) = sphere_solution(1.2);
        let rep = meigen_reduce(&cd, &SolverConfig { n_starts: 40, ..Default::default() }).unwrap();
        let s = rep.sigmas();
        assert!(s.iter().any(|v| (v - 1.0).abs() < 1e-10), "{s:?}");
        for sol in rep.all_solutions() {
            assert!(sol.residual < 1e-11);
            assert!(sol.q.x == sol.q.z);
        }

        let e = space_form(0.5, 4).unwrap();
        let cd = riemann(&e.spec, &e.default_point).unwrap();
        let rep = meigen_reduce(&cd, &SolverConfig { n_starts: 40, ..Default::default() }).unwrap();
        assert!(rep.sigmas().iter().any(|v| (v - 0.5).abs() < 1e-10));

        let e = euclidean(3).unwrap();
        let cd = riemann(&e.spec, &e.default_point).unwrap();
        let rep = meigen_reduce(&cd, &SolverConfig { n_starts: 20, ..Default::default() }).unwrap();
        assert_eq!(rep.nonzero(1e-8).count(), 0);
    }
}
