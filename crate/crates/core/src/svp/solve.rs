//! Single-start Newton solve and start sampling.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::newton::{gauss_newton, NewtonOptions};
use super::{jacobian, r_wxyz, residual, Origin, Quadruple, Signs, SolverConfig, SvpSolution};
use crate::error::{Error, Result};
use crate::geometry::CurvatureData;

/// Starts whose vectors leave this coordinate box are abandoned.
pub const RUNAWAY_NORM: f64 = 1e6;

/// Newton on the full system from `(q0, σ0)`. On success `σ ≥ 0`: a
/// negative value is flipped together with `W`.
pub fn solve_newton(cd: &CurvatureData, q0: &Quadruple, sigma0: f64, cfg: &SolverConfig) -> Result<SvpSolution> {
    let n = cd.dim();
    if q0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q0.dim(),
        });
    }
    if !sigma0.is_finite() || q0.flatten().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("start"));
    }
    let signs = q0.signs;
    let mut u0 = q0.flatten();
    u0.push(sigma0);
    let split = |u: &[f64]| (Quadruple::from_flat(u, n, signs), u[4 * n]);
    let opts = NewtonOptions {
        tol: cfg.tol,
        max_iters: cfg.max_newton_iters,
        max_norm: RUNAWAY_NORM,
    };
    let out = gauss_newton(
        |u| {
            let (q, s) = split(u);
            residual(cd, &q, s)
        },
        |u| {
            let (q, s) = split(u);
            jacobian(cd, &q, s)
        },
        &u0,
        &opts,
    )?;
    let (mut q, mut sigma) = split(&out.u);
    if sigma < 0.0 {
        q.w.iter_mut().for_each(|c| *c = -*c);
        sigma = -sigma;
    }
    Ok(SvpSolution::evaluate(cd, q, sigma, Origin::Multistart, 0))
}

/// Orthonormal frame of `g`: columns `e_a` with `⟨e_a, e_b⟩ = η_a δ_ab`,
/// returned with the signs `η_a`.
pub fn orthonormal_frame(g: &DMatrix<f64>) -> (DMatrix<f64>, Vec<i8>) {
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let n = g.nrows();
    let mut frame = eig.eigenvectors.clone();
    let mut eta = Vec::with_capacity(n);
    for a in 0..n {
        let lam = eig.eigenvalues[a];
        let scale = 1.0 / lam.abs().sqrt();
        frame.column_mut(a).scale_mut(scale);
        eta.push(if lam < 0.0 { -1 } else { 1 });
    }
    (frame, eta)
}

fn frame_vector(frame: &DMatrix<f64>, c: &[f64]) -> Vec<f64> {
    let n = frame.nrows();
    (0..n).map(|i| (0..n).map(|a| frame[(i, a)] * c[a]).sum()).collect()
}

/// A random vector with `⟨v,v⟩ = sign`, or `None` if the signature has no
/// direction of that sign.
///
/// Frame components are standard normal; the result is rescaled onto the
/// quadric. When the draw has the wrong causal character, the block of
/// directions with the requested sign is stretched so that it dominates
/// by exactly one unit.
fn sample_vector(frame: &DMatrix<f64>, eta: &[i8], sign: i8, rng: &mut dyn RngCore) -> Option<Vec<f64>> {
    if !eta.contains(&sign) {
        return None;
    }
    loop {
        let mut c: Vec<f64> = (0..eta.len()).map(|_| StandardNormal.sample(rng)).collect();
        let same: f64 = c.iter().zip(eta).filter(|(_, e)| **e == sign).map(|(v, _)| v * v).sum();
        let other: f64 = c.iter().zip(eta).filter(|(_, e)| **e != sign).map(|(v, _)| v * v).sum();
        if same < 1e-12 {
            continue;
        }
        let q = same - other;
        if q > 1e-6 {
            let k = 1.0 / q.sqrt();
            c.iter_mut().for_each(|v| *v *= k);
        } else {
            let k = ((other + 1.0) / same).sqrt();
            for (v, e) in c.iter_mut().zip(eta) {
                if *e == sign {
                    *v *= k;
                }
            }
        }
        return Some(frame_vector(frame, &c));
    }
}

/// A random start on the constraint quadrics, with `σ0 = s_W R(W,X,Y,Z)`.
pub fn sample_start(cd: &CurvatureData, signs: Signs, rng: &mut dyn RngCore) -> Result<(Quadruple, f64)> {
    let (frame, eta) = orthonormal_frame(&cd.g);
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(4);
    for s in signs {
        let v = sample_vector(&frame, &eta, s, rng).ok_or_else(|| {
            Error::WrongSignature(format!(
                "no direction with squared norm {s} in signature {}",
                cd.signature
            ))
        })?;
        vs.push(v);
    }
    let [w, x, y, z]: [Vec<f64>; 4] = vs.try_into().expect("four vectors");
    let q = Quadruple::new(w, x, y, z, signs)?;
    let sigma0 = signs[0] as f64 * r_wxyz(cd, &q);
    Ok((q, sigma0))
}

/// A member of the zero family `(X, X, Y, Y, 0)`, available when
/// `s_W = s_X` and `s_Y = s_Z`.
pub fn trivial_solution(cd: &CurvatureData, signs: Signs) -> Option<SvpSolution> {
    if signs[0] != signs[1] || signs[2] != signs[3] {
        return None;
    }
    let (frame, eta) = orthonormal_frame(&cd.g);
    let pick = |s: i8, avoid: Option<usize>| {
        eta.iter()
            .enumerate()
            .filter(|(a, e)| **e == s && Some(*a) != avoid)
            .map(|(a, _)| a)
            .next()
            .or_else(|| eta.iter().position(|e| *e == s))
    };
    let a = pick(signs[0], None)?;
    let b = pick(signs[2], Some(a))?;
    let x = frame.column(a).iter().copied().collect::<Vec<_>>();
    let y = frame.column(b).iter().copied().collect::<Vec<_>>();
    let q = Quadruple::new(x.clone(), x, y.clone(), y, signs).ok()?;
    let mut sol = SvpSolution::evaluate(cd, q, 0.0, Origin::Analytic, 0);
    sol.trivial = true;
    Some(sol)
}
