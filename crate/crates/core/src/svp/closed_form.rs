//! Closed-form singular values for space forms and conformally flat metrics.
//!
//! When the Weyl tensor vanishes (`n ≥ 3`), a nonzero solution satisfies
//!
//! ```text
//! σ = (R_ik w^i w^k + R_jl x^j x^l − R/(n−1)) / (n−2)
//! ```
//!
//! which specializes when `w, x` are Ricci eigenvectors and further on
//! Einstein manifolds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ClosedFormCase {
    /// Constant sectional curvature `κ`: `σ = |κ|`.
    SpaceForm { kappa: f64 },
    /// `W = Y`, `X = Z` on a conformally flat metric, given the Ricci
    /// quadratic forms `R_ik w^i w^k` and `R_jl x^j x^l`.
    MEigen {
        ricci_ww: f64,
        ricci_xx: f64,
        ricci_scalar: f64,
        n: usize,
    },
    /// `W, X` are Ricci eigenvectors with eigenvalues `λ, μ`.
    RicciEigenpairs {
        lambda: f64,
        mu: f64,
        ricci_scalar: f64,
        n: usize,
    },
    /// Einstein metric `R_ij = κ g_ij`, so `R = nκ`.
    Einstein { kappa: f64, ricci_scalar: f64, n: usize },
}

fn finite(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::BadCase("parameters must be finite".into()))
    }
}

fn conformal(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::BadCase(format!("conformally flat cases need n >= 3, got {n}")));
    }
    Ok(n as f64)
}

/// Evaluates the closed form. Only the space-form value is made
/// non-negative; the others are signed predictions.
pub fn closed_form_sigma(case: ClosedFormCase) -> Result<f64> {
    match case {
        ClosedFormCase::SpaceForm { kappa } => {
            finite(&[kappa])?;
            Ok(kappa.abs())
        }
        ClosedFormCase::MEigen {
            ricci_ww,
            ricci_xx,
            ricci_scalar,
            n,
        } => {
            finite(&[ricci_ww, ricci_xx, ricci_scalar])?;
            let nf = conformal(n)?;
            Ok((ricci_ww + ricci_xx - ricci_scalar / (nf - 1.0)) / (nf - 2.0))
        }
        ClosedFormCase::RicciEigenpairs {
            lambda,
            mu,
            ricci_scalar,
            n,
        } => {
            finite(&[lambda, mu, ricci_scalar])?;
            let nf = conformal(n)?;
            Ok((lambda + mu - ricci_scalar / (nf - 1.0)) / (nf - 2.0))
        }
        ClosedFormCase::Einstein {
            kappa,
            ricci_scalar,
            n,
        } => {
            finite(&[kappa, ricci_scalar])?;
            let nf = conformal(n)?;
            if (ricci_scalar - nf * kappa).abs() > 1e-12 * ricci_scalar.abs().max(1.0) {
                return Err(Error::BadCase(format!(
                    "Einstein constant {kappa} inconsistent with R = {ricci_scalar} in dimension {n}"
                )));
            }
            Ok((2.0 * kappa - ricci_scalar / (nf - 1.0)) / (nf - 2.0))
        }
    }
}
