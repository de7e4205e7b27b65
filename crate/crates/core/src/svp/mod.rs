//! The singular value problem of the curvature tensor.
//!
//! For vectors `W, X, Y, Z` with `⟨V,V⟩ = s_V ∈ {+1, −1}` and a scalar `σ`:
//!
//! ```text
//! R^i_{jkl} x^j y^k z^l = σ w^i
//! R^i_{jkl} w^j z^k y^l = σ x^i
//! R^i_{jkl} z^j w^k x^l = σ y^i
//! R^i_{jkl} y^j x^k w^l = σ z^i
//! ```
//!
//! Contracting each line with its right-hand vector gives
//! `σ s_W = σ s_X = σ s_Y = σ s_Z = R(W,X,Y,Z)`, so any mixed sign pattern
//! forces `σ = 0`, and for all-plus patterns `σ = R(W,X,Y,Z)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::inner;
use crate::error::{Error, Result};
use crate::geometry::CurvatureData;
use crate::tensor::Tensor4;

pub mod checks;
pub mod closed_form;
pub mod multistart;
pub mod newton;
pub mod orbit;
pub mod reduced;
pub mod solve;

pub use checks::*;
pub use closed_form::{closed_form_sigma, ClosedFormCase};
pub use multistart::{multistart, Cluster, MultistartReport};
pub use orbit::{orbit, OrbitMember};
pub use reduced::{kerr_reduced_solve, meigen_reduce, schwarzschild_reduced_solve};
pub use solve::{sample_start, solve_newton, trivial_solution};

/// Signs `(s_W, s_X, s_Y, s_Z)` of the normalization constraints.
pub type Signs = [i8; 4];

pub const ALL_PLUS: Signs = [1, 1, 1, 1];

/// Four tangent vectors with the signs of their normalizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quadruple {
    pub w: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub signs: Signs,
}

impl Quadruple {
    pub fn new(w: Vec<f64>, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>, signs: Signs) -> Result<Self> {
        let n = w.len();
        for v in [&x, &y, &z] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput(format!("signs must be ±1, got {signs:?}")));
        }
        if [&w, &x, &y, &z].iter().any(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite("quadruple"));
        }
        Ok(Self { w, x, y, z, signs })
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn vectors(&self) -> [&[f64]; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    /// `[w, x, y, z]` concatenated.
    pub fn flatten(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(4 * self.dim());
        for part in self.vectors() {
            v.extend_from_slice(part);
        }
        v
    }

    pub fn from_flat(flat: &[f64], n: usize, signs: Signs) -> Self {
        Self {
            w: flat[0..n].to_vec(),
            x: flat[n..2 * n].to_vec(),
            y: flat[2 * n..3 * n].to_vec(),
            z: flat[3 * n..4 * n].to_vec(),
            signs,
        }
    }

    /// Largest Euclidean norm of the four coordinate vectors.
    pub fn max_norm(&self) -> f64 {
        self.vectors()
            .iter()
            .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

/// Which normalization signs to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPattern {
    Fixed(Signs),
    /// Every one of the sixteen patterns.
    All,
}

impl Default for SignPattern {
    fn default() -> Self {
        SignPattern::Fixed(ALL_PLUS)
    }
}

impl SignPattern {
    pub fn patterns(&self) -> Vec<Signs> {
        match self {
            SignPattern::Fixed(s) => vec![*s],
            SignPattern::All => (0..16u8)
                .map(|m| std::array::from_fn(|k| if m >> (3 - k) & 1 == 1 { -1 } else { 1 }))
                .collect(),
        }
    }
}

pub fn signs_to_string(s: &Signs) -> String {
    s.iter().map(|v| if *v > 0 { '+' } else { '-' }).collect()
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignPattern::Fixed(s) => f.write_str(&signs_to_string(s)),
            SignPattern::All => f.write_str("all"),
        }
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return Ok(SignPattern::All);
        }
        let signs: Vec<i8> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                other => Err(Error::InvalidInput(format!("bad sign character '{other}'"))),
            })
            .collect::<Result<_>>()?;
        let arr: Signs = signs
            .try_into()
            .map_err(|_| Error::InvalidInput(format!("sign pattern '{s}' must have four entries")))?;
        Ok(SignPattern::Fixed(arr))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold on the ∞-norm of the residual.
    pub tol: f64,
    pub max_newton_iters: usize,
    pub n_starts: usize,
    /// Solutions whose σ differ by less than this share a cluster.
    pub cluster_eps: f64,
    pub sign_pattern: SignPattern,
    pub rng_seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_newton_iters: 60,
            n_starts: 200,
            cluster_eps: 1e-7,
            sign_pattern: SignPattern::default(),
            rng_seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        if self.n_starts == 0 {
            return Err(Error::InvalidInput("n_starts must be at least 1".into()));
        }
        if self.max_newton_iters == 0 {
            return Err(Error::InvalidInput("max_newton_iters must be at least 1".into()));
        }
        if !(self.cluster_eps > 0.0) {
            return Err(Error::InvalidInput("cluster_eps must be positive".into()));
        }
        Ok(())
    }
}

/// How a solution was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Multistart,
    Analytic,
    ReducedSchwarzschild,
    ReducedKerr,
    Orbit,
    MEigen,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Multistart => "multistart",
            Origin::Analytic => "analytic",
            Origin::ReducedSchwarzschild => "reduced-schwarzschild",
            Origin::ReducedKerr => "reduced-kerr",
            Origin::Orbit => "orbit",
            Origin::MEigen => "m-eigen",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvpSolution {
    pub q: Quadruple,
    pub sigma: f64,
    /// ∞-norm of the full residual.
    pub residual: f64,
    pub origin: Origin,
    /// Start index within the run (the random stream it was drawn from).
    pub seed: u64,
    /// One of the zero families with repeated vectors.
    pub trivial: bool,
}

impl SvpSolution {
    /// Builds a solution and evaluates its residual against `cd`.
    pub fn evaluate(cd: &CurvatureData, q: Quadruple, sigma: f64, origin: Origin, seed: u64) -> Self {
        let residual = residual_norm(cd, &q, sigma);
        let trivial = is_trivial(&q, sigma, 1e-8);
        Self {
            q,
            sigma,
            residual,
            origin,
            seed,
            trivial,
        }
    }
}

fn close_up_to_sign(a: &[f64], b: &[f64], tol: f64) -> bool {
    let plus = a.iter().zip(b).all(|(u, v)| (u - v).abs() < tol);
    let minus = a.iter().zip(b).all(|(u, v)| (u + v).abs() < tol);
    plus || minus
}

/// `σ ≈ 0` with `W = ±X` or `Y = ±Z`.
pub fn is_trivial(q: &Quadruple, sigma: f64, tol: f64) -> bool {
    sigma.abs() < tol && (close_up_to_sign(&q.w, &q.x, 1e-6) || close_up_to_sign(&q.y, &q.z, 1e-6))
}

/// `R(W,X,Y,Z) = R_{ijkl} w^i x^j y^k z^l`.
pub fn r_wxyz(cd: &CurvatureData, q: &Quadruple) -> f64 {
    cd.riemann_lowered.contract4(&q.w, &q.x, &q.y, &q.z)
}

/// Residual vector of length `4n + 4`: the four vector equations followed
/// by `⟨V,V⟩ − s_V` for `V = W, X, Y, Z`.
pub fn residual(cd: &CurvatureData, q: &Quadruple, sigma: f64) -> Vec<f64> {
    let t = &cd.riemann_mixed;
    let mut out = Vec::with_capacity(4 * q.dim() + 4);
    let eqs: [(&[f64], &[f64], &[f64], &[f64]); 4] = [
        (&q.x, &q.y, &q.z, &q.w),
        (&q.w, &q.z, &q.y, &q.x),
        (&q.z, &q.w, &q.x, &q.y),
        (&q.y, &q.x, &q.w, &q.z),
    ];
    for (a, b, c, rhs) in eqs {
        let lhs = t.contract3(a, b, c);
        out.extend(lhs.iter().zip(rhs).map(|(l, r)| l - sigma * r));
    }
    for (v, s) in q.vectors().into_iter().zip(q.signs) {
        out.push(inner(&cd.g, v, v) - s as f64);
    }
    out
}

pub fn residual_norm(cd: &CurvatureData, q: &Quadruple, sigma: f64) -> f64 {
    residual(cd, q, sigma)
        .iter()
        .fold(0.0_f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// `∂/∂(slot) T^i(a, b, c)` as an `n × n` matrix.
fn slot_jacobian(t: &Tensor4, a: &[f64], b: &[f64], c: &[f64], slot: usize) -> DMatrix<f64> {
    let n = t.dim();
    DMatrix::from_fn(n, n, |i, m| {
        let mut acc = 0.0;
        match slot {
            0 => {
                for k in 0..n {
                    for l in 0..n {
                        acc += t[(i, m, k, l)] * b[k] * c[l];
                    }
                }
            }
            1 => {
                for j in 0..n {
                    for l in 0..n {
                        acc += t[(i, j, m, l)] * a[j] * c[l];
                    }
                }
            }
            _ => {
                for j in 0..n {
                    for k in 0..n {
                        acc += t[(i, j, k, m)] * a[j] * b[k];
                    }
                }
            }
        }
        acc
    })
}

/// Jacobian of [`residual`] with respect to `(w, x, y, z, σ)`, shape
/// `(4n + 4) × (4n + 1)`.
pub fn jacobian(cd: &CurvatureData, q: &Quadruple, sigma: f64) -> DMatrix<f64> {
    let n = q.dim();
    let t = &cd.riemann_mixed;
    let mut j = DMatrix::zeros(4 * n + 4, 4 * n + 1);
    let v = q.vectors();
    // (argument vector indices, right-hand vector index) per equation
    const EQS: [([usize; 3], usize); 4] = [([1, 2, 3], 0), ([0, 3, 2], 1), ([3, 0, 1], 2), ([2, 1, 0], 3)];
    for (e, (args, rhs)) in EQS.iter().enumerate() {
        let row = e * n;
        for (slot, &var) in args.iter().enumerate() {
            let block = slot_jacobian(t, v[args[0]], v[args[1]], v[args[2]], slot);
            let mut view = j.view_mut((row, var * n), (n, n));
            view += block;
        }
        for i in 0..n {
            j[(row + i, rhs * n + i)] -= sigma;
            j[(row + i, 4 * n)] = -v[*rhs][i];
        }
    }
    let gs = &cd.g + cd.g.transpose();
    for (k, vec) in v.iter().enumerate() {
        for m in 0..n {
            j[(4 * n + k, k * n + m)] = (0..n).map(|i| gs[(m, i)] * vec[i]).sum();
        }
    }
    j
}
