//! Gauss–Newton for overdetermined square-or-tall systems `F(u) = 0`.
//!
//! Each step is the minimum-norm least-squares solution of `J du = −F`
//! through the SVD, so rank-deficient Jacobians (continuous solution
//! families) are handled. A backtracking line search on `‖F‖₂` guards the
//! first iterations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Stop when `‖F‖∞` falls below this.
    pub tol: f64,
    pub max_iters: usize,
    /// Give up when `‖u‖∞` grows past this.
    pub max_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn gauss_newton<F, J>(f: F, jac: J, u0: &[f64], opts: &NewtonOptions) -> Result<NewtonOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
    J: Fn(&[f64]) -> DMatrix<f64>,
{
    let mut u = u0.to_vec();
    let mut fu = f(&u);
    let mut res = inf_norm(&fu);
    if !res.is_finite() {
        return Err(Error::NonFinite("residual at start"));
    }
    for it in 0..opts.max_iters {
        if res < opts.tol {
            return Ok(NewtonOutcome {
                u,
                residual: res,
                iterations: it,
            });
        }
        let j = jac(&u);
        if j.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("jacobian"));
        }
        let svd = j.svd(true, true);
        let smax = svd.singular_values.max();
        if !(smax > 0.0) {
            return Err(Error::SingularJacobian);
        }
        let rhs = -DVector::from_vec(fu.clone());
        let du = svd
            .solve(&rhs, smax * 1e-12)
            .map_err(|_| Error::SingularJacobian)?;

        let f2 = sq_norm(&fu);
        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha > 1e-6 {
            let trial: Vec<f64> = u.iter().zip(du.iter()).map(|(a, d)| a + alpha * d).collect();
            let ft = f(&trial);
            let ft2 = sq_norm(&ft);
            if ft2.is_finite() && ft2 <= (1.0 - 1e-4 * alpha) * f2 {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((next, fnext)) = accepted else {
            // no descent: stalled at a non-root or at round-off level
            return Err(Error::NoConvergence {
                iterations: it + 1,
                residual: res,
            });
        };
        u = next;
        fu = fnext;
        res = inf_norm(&fu);
        if inf_norm(&u) > opts.max_norm {
            return Err(Error::NoConvergence {
                iterations: it + 1,
                residual: res,
            });
        }
    }
    if res < opts.tol {
        return Ok(NewtonOutcome {
            u,
            residual: res,
            iterations: opts.max_iters,
        });
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iters,
        residual: res,
    })
}
