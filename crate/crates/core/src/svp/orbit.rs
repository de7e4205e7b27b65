//! Solutions generated from a known one by sign flips, swaps and rotations.
//!
//! * Sign flips: negating any subset of `W, X, Y, Z` multiplies `σ` by
//!   `(−1)^k` for `k` negated vectors (16 variants including the identity).
//! * Swaps: `(X,W,Y,Z,−σ)`, `(W,X,Z,Y,−σ)`, `(X,W,Z,Y,σ)`, `(Y,Z,W,X,σ)`,
//!   `(Z,Y,W,X,−σ)`, `(Y,Z,X,W,−σ)`, `(Z,Y,X,W,σ)`.
//! * Rotations by a quarter turn in the `W,X` plane, the `Y,Z` plane, or
//!   both at once (in opposite senses), with the `1/√2` normalization.
//!   They need equal signs and orthogonality within the rotated pair and are
//!   skipped otherwise.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::{Origin, Quadruple, SvpSolution};
use crate::algebra::inner;
use crate::error::{Error, Result};
use crate::geometry::CurvatureData;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMember {
    pub label: String,
    pub solution: SvpSolution,
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|c| -c).collect()
}

fn comb(a: &[f64], sa: f64, b: &[f64], sb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| FRAC_1_SQRT_2 * (sa * u + sb * v)).collect()
}

/// Tolerance for the orthogonality required by the rotations.
const ROTATION_ORTHO_TOL: f64 = 1e-8;

/// The full orbit of `sol`, with `σ` signs as produced by each transform
/// (no non-negativity normalization). Fails if `sol` is not a solution to
/// within `tol`.
pub fn orbit(sol: &SvpSolution, cd: &CurvatureData, tol: f64) -> Result<Vec<OrbitMember>> {
    let r = super::residual_norm(cd, &sol.q, sol.sigma);
    if !(r < tol) {
        return Err(Error::InvalidInput(format!(
            "orbit requires a solution with residual below {tol:e}, got {r:e}"
        )));
    }
    Ok(orbit_unchecked(sol, cd))
}

pub(crate) fn orbit_unchecked(sol: &SvpSolution, cd: &CurvatureData) -> Vec<OrbitMember> {
    let q = &sol.q;
    let s = sol.sigma;
    let [sw, sx, sy, sz] = q.signs;
    let mut out = Vec::with_capacity(26);
    let mut push = |label: String, w: Vec<f64>, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>, signs, sigma| {
        let q = Quadruple { w, x, y, z, signs };
        let mut solution = SvpSolution::evaluate(cd, q, sigma, Origin::Orbit, sol.seed);
        solution.trivial = solution.trivial || sol.trivial;
        out.push(OrbitMember { label, solution });
    };

    for mask in 0..16u8 {
        let flip = |k: u8, v: &[f64]| if mask >> k & 1 == 1 { neg(v) } else { v.to_vec() };
        let label: String = ["W", "X", "Y", "Z"]
            .iter()
            .enumerate()
            .map(|(k, n)| if mask >> k & 1 == 1 { format!("-{n}") } else { n.to_string() })
            .collect::<Vec<_>>()
            .join(",");
        let sigma = if mask.count_ones() % 2 == 1 { -s } else { s };
        push(
            format!("flip({label})"),
            flip(0, &q.w),
            flip(1, &q.x),
            flip(2, &q.y),
            flip(3, &q.z),
            q.signs,
            sigma,
        );
    }

    let (w, x, y, z) = (&q.w, &q.x, &q.y, &q.z);
    let swaps: [(&str, [&Vec<f64>; 4], [i8; 4], f64); 7] = [
        ("swap(X,W,Y,Z)", [x, w, y, z], [sx, sw, sy, sz], -s),
        ("swap(W,X,Z,Y)", [w, x, z, y], [sw, sx, sz, sy], -s),
        ("swap(X,W,Z,Y)", [x, w, z, y], [sx, sw, sz, sy], s),
        ("swap(Y,Z,W,X)", [y, z, w, x], [sy, sz, sw, sx], s),
        ("swap(Z,Y,W,X)", [z, y, w, x], [sz, sy, sw, sx], -s),
        ("swap(Y,Z,X,W)", [y, z, x, w], [sy, sz, sx, sw], -s),
        ("swap(Z,Y,X,W)", [z, y, x, w], [sz, sy, sx, sw], s),
    ];
    for (label, v, signs, sigma) in swaps {
        push(label.to_string(), v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone(), signs, sigma);
    }

    let wx_ok = sw == sx && inner(&cd.g, w, x).abs() < ROTATION_ORTHO_TOL;
    let yz_ok = sy == sz && inner(&cd.g, y, z).abs() < ROTATION_ORTHO_TOL;
    if wx_ok {
        push(
            "rotate(W,X)".into(),
            comb(w, 1.0, x, -1.0),
            comb(w, 1.0, x, 1.0),
            y.clone(),
            z.clone(),
            q.signs,
            s,
        );
    }
    if yz_ok {
        push(
            "rotate(Y,Z)".into(),
            w.clone(),
            x.clone(),
            comb(y, 1.0, z, -1.0),
            comb(y, 1.0, z, 1.0),
            q.signs,
            s,
        );
    }
    if wx_ok && yz_ok {
        push(
            "rotate(W,X;Y,Z)".into(),
            comb(w, 1.0, x, 1.0),
            comb(w, 1.0, x, -1.0),
            comb(y, 1.0, z, 1.0),
            comb(y, 1.0, z, -1.0),
            q.signs,
            s,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svp::tests::sphere_solution;
    use crate::svp::SvpSolution;

    fn sphere_sol() -> (CurvatureData, SvpSolution) {
        let (cd, q) = sphere_solution(std::f64::consts::PI / 3.0);
        let sol = SvpSolution::evaluate(&cd, q, 1.0, Origin::Analytic, 0);
        (cd, sol)
    }

    #[test]
    fn sphere_orbit_is_closed() {
        let (cd, sol) = sphere_sol();
        let members = orbit(&sol, &cd, 1e-11).unwrap();
        assert_eq!(members.len(), 16 + 7 + 3);
        for m in &members {
            assert!(m.solution.residual < 1e-10, "{} {}", m.label, m.solution.residual);
        }
        let flip_w = members.iter().find(|m| m.label == "flip(-W,X,Y,Z)").unwrap();
        assert_eq!(flip_w.solution.sigma, -1.0);
        let swap = members.iter().find(|m| m.label == "swap(Y,Z,W,X)").unwrap();
        assert_eq!(swap.solution.sigma, 1.0);
        let rot = members.iter().find(|m| m.label == "rotate(W,X)").unwrap();
        assert_eq!(rot.solution.sigma, 1.0);
    }

    #[test]
    fn rejects_non_solutions() {
        let (cd, mut sol) = sphere_sol();
        sol.sigma = 0.5;
        assert!(matches!(orbit(&sol, &cd, 1e-11), Err(Error::InvalidInput(_))));
    }
}
