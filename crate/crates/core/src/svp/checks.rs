//! Structural properties of solutions.

use nalgebra::Matrix4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{r_wxyz, sample_start, solve_newton, Quadruple, Signs, SolverConfig, SvpSolution};
use crate::algebra::{inner, ricci};
use crate::error::{Error, Result};
use crate::geometry::CurvatureData;

/// Threshold below which `σ` counts as zero in the checks.
pub const SIGMA_ZERO_TOL: f64 = 1e-8;

/// `|⟨V,V⟩ − s_V| ≤ tol` for all four vectors.
pub fn inner_products_ok(cd: &CurvatureData, q: &Quadruple, tol: f64) -> bool {
    q.vectors()
        .iter()
        .zip(q.signs)
        .all(|(v, s)| (inner(&cd.g, v, v) - s as f64).abs() <= tol)
}

/// `max(|⟨W,X⟩|, |⟨Y,Z⟩|)`.
pub fn proposition1_defect(sol: &SvpSolution, cd: &CurvatureData) -> f64 {
    inner(&cd.g, &sol.q.w, &sol.q.x)
        .abs()
        .max(inner(&cd.g, &sol.q.y, &sol.q.z).abs())
}

/// A nonzero singular value forces `⟨W,X⟩ = ⟨Y,Z⟩ = 0`.
pub fn check_proposition1(sol: &SvpSolution, cd: &CurvatureData) -> bool {
    sol.sigma.abs() <= SIGMA_ZERO_TOL || proposition1_defect(sol, cd) < 1e-8
}

/// `|σ − R(W,X,Y,Z)|`, meaningful for the all-plus pattern.
pub fn sigma_equals_r_defect(sol: &SvpSolution, cd: &CurvatureData) -> f64 {
    (sol.sigma - r_wxyz(cd, &sol.q)).abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedSignReport {
    pub pattern: String,
    pub starts: usize,
    pub converged: usize,
    pub max_abs_sigma: f64,
    pub passed: bool,
}

/// Solves from `cfg.n_starts` random starts with a mixed sign pattern on a
/// Lorentz metric and records the largest `|σ|` reached.
pub fn lorentz_mixed_sign_check(cd: &CurvatureData, cfg: &SolverConfig, signs: Signs) -> Result<MixedSignReport> {
    if !cd.signature.is_lorentzian() {
        return Err(Error::WrongSignature(format!(
            "mixed-sign check needs a Lorentz signature, got {}",
            cd.signature
        )));
    }
    if signs.iter().all(|s| *s == signs[0]) {
        return Err(Error::InvalidInput(format!(
            "sign pattern {} is not mixed",
            super::signs_to_string(&signs)
        )));
    }
    cfg.validate()?;
    let sigmas: Vec<f64> = (0..cfg.n_starts as u64)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(k);
            let (q, s0) = sample_start(cd, signs, &mut rng).ok()?;
            solve_newton(cd, &q, s0, cfg).ok().map(|s| s.sigma)
        })
        .collect();
    let max_abs_sigma = sigmas.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    Ok(MixedSignReport {
        pattern: super::signs_to_string(&signs),
        starts: cfg.n_starts,
        converged: sigmas.len(),
        max_abs_sigma,
        passed: max_abs_sigma < SIGMA_ZERO_TOL,
    })
}

/// Defects of the space-form identities for a nonzero solution:
/// `κ⟨Z,X⟩ − σ⟨W,Y⟩`, `−κ⟨Y,X⟩ − σ⟨W,Z⟩`, `−κ⟨Z,W⟩ − σ⟨X,Y⟩`,
/// `κ⟨Y,W⟩ − σ⟨X,Z⟩` and `⟨W,Y⟩² + ⟨W,Z⟩² − 1`.
pub fn space_form_identities(sol: &SvpSolution, cd: &CurvatureData, kappa: f64) -> [f64; 5] {
    let ip = |a: &[f64], b: &[f64]| inner(&cd.g, a, b);
    let q = &sol.q;
    let s = sol.sigma;
    let wy = ip(&q.w, &q.y);
    let wz = ip(&q.w, &q.z);
    [
        (kappa * ip(&q.z, &q.x) - s * wy).abs(),
        (-kappa * ip(&q.y, &q.x) - s * wz).abs(),
        (-kappa * ip(&q.z, &q.w) - s * ip(&q.x, &q.y)).abs(),
        (kappa * ip(&q.y, &q.w) - s * ip(&q.x, &q.z)).abs(),
        (wy * wy + wz * wz - 1.0).abs(),
    ]
}

/// `|R_ij w^i w^j + R_ij x^i x^j − R_ij y^i y^j − R_ij z^i z^j|`.
pub fn ricci_quadratic_defect(sol: &SvpSolution, cd: &CurvatureData) -> f64 {
    let ric = ricci(cd);
    let q = |v: &[f64]| inner(&ric, v, v);
    (q(&sol.q.w) + q(&sol.q.x) - q(&sol.q.y) - q(&sol.q.z)).abs()
}

/// The 4×4 matrix multiplying `Λx` in the Schwarzschild system, built from
/// `S^{ij} = y^i z^j − y^j z^i`.
pub fn s_matrix(y: &[f64], z: &[f64]) -> Matrix4<f64> {
    let s = |i: usize, j: usize| y[i] * z[j] - y[j] * z[i];
    Matrix4::new(
        0.0,
        2.0 * s(0, 1),
        s(2, 0),
        s(3, 0),
        2.0 * s(0, 1),
        0.0,
        s(2, 1),
        s(3, 1),
        s(2, 0),
        s(1, 2),
        0.0,
        2.0 * s(2, 3),
        s(3, 0),
        s(1, 3),
        2.0 * s(3, 2),
        0.0,
    )
}

/// Defect of `det S = −(2S⁰¹·2S²³ + S²⁰S¹³ + S³⁰S²¹)²`, relative to
/// `max(|det S|, |rhs|, max|S|⁴)`.
pub fn det_s_defect(y: &[f64], z: &[f64]) -> f64 {
    let s = |i: usize, j: usize| y[i] * z[j] - y[j] * z[i];
    let det = s_matrix(y, z).determinant();
    let p = 2.0 * s(0, 1) * 2.0 * s(2, 3) + s(2, 0) * s(1, 3) + s(3, 0) * s(2, 1);
    let rhs = -p * p;
    // relative to the size of a degree-4 expression in the entries of S
    let smax = s_matrix(y, z).amax();
    let scale = det.abs().max(rhs.abs()).max(smax.powi(4));
    if det == rhs {
        0.0
    } else {
        (det - rhs).abs() / scale
    }
}
