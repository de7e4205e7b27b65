//! Contractions of the curvature tensor and the scalar invariants built from
//! them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CurvatureData;
use crate::tensor::Tensor4;

/// `g_ij u^i v^j`.
pub fn inner(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = g.nrows();
    debug_assert_eq!(u.len(), n);
    debug_assert_eq!(v.len(), n);
    let mut acc = 0.0;
    for i in 0..n {
        if u[i] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..n {
            row += g[(i, j)] * v[j];
        }
        acc += u[i] * row;
    }
    acc
}

/// `g_ij v^j`.
pub fn lower(g: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let n = g.nrows();
    (0..n).map(|i| (0..n).map(|j| g[(i, j)] * v[j]).sum()).collect()
}

/// Ricci tensor `R_ik = g^{hj} R_{hijk}`.
pub fn ricci(cd: &CurvatureData) -> DMatrix<f64> {
    ricci_from(&cd.g_inv, &cd.riemann_lowered)
}

fn ricci_from(g_inv: &DMatrix<f64>, r: &Tensor4) -> DMatrix<f64> {
    let n = g_inv.nrows();
    DMatrix::from_fn(n, n, |i, k| {
        let mut acc = 0.0;
        for h in 0..n {
            for j in 0..n {
                acc += g_inv[(h, j)] * r[(h, i, j, k)];
            }
        }
        acc
    })
}

/// Ricci scalar `R = g^{ik} R_ik`.
pub fn ricci_scalar(cd: &CurvatureData) -> f64 {
    trace(&cd.g_inv, &ricci(cd))
}

fn trace(g_inv: &DMatrix<f64>, m: &DMatrix<f64>) -> f64 {
    g_inv.component_mul(&m.transpose()).sum()
}

/// Raises all four indices of a lowered tensor.
fn raise_all(g_inv: &DMatrix<f64>, t: &Tensor4) -> Tensor4 {
    let n = g_inv.nrows();
    let mut cur = t.clone();
    for slot in 0..4 {
        let prev = cur.clone();
        cur = Tensor4::from_fn(n, |a, b, c, d| {
            let idx = [a, b, c, d];
            (0..n)
                .map(|m| {
                    let mut j = idx;
                    j[slot] = m;
                    g_inv[(idx[slot], m)] * prev[(j[0], j[1], j[2], j[3])]
                })
                .sum()
        });
    }
    cur
}

fn full_contraction(g_inv: &DMatrix<f64>, t: &Tensor4) -> f64 {
    let up = raise_all(g_inv, t);
    t.as_slice().iter().zip(up.as_slice()).map(|(a, b)| a * b).sum()
}

/// Kretschmann scalar `R_abcd R^abcd`.
pub fn kretschmann(cd: &CurvatureData) -> f64 {
    full_contraction(&cd.g_inv, &cd.riemann_lowered)
}

/// Trace-free (Weyl) part `C_ijkl` of the lowered curvature tensor.
pub fn weyl(cd: &CurvatureData) -> Result<Tensor4> {
    let n = cd.dim();
    if n < 3 {
        return Err(Error::DimensionTooSmall { min: 3, found: n });
    }
    let ric = ricci(cd);
    let scalar = trace(&cd.g_inv, &ric);
    let g = &cd.g;
    let nf = n as f64;
    let c1 = 1.0 / (nf - 2.0);
    let c2 = scalar / ((nf - 1.0) * (nf - 2.0));
    Ok(Tensor4::from_fn(n, |i, j, k, l| {
        let trace_part = -c1
            * (ric[(i, l)] * g[(j, k)] - ric[(i, k)] * g[(j, l)] + g[(i, l)] * ric[(j, k)]
                - g[(i, k)] * ric[(j, l)])
            + c2 * (g[(i, l)] * g[(j, k)] - g[(i, k)] * g[(j, l)]);
        cd.riemann_lowered[(i, j, k, l)] - trace_part
    }))
}

/// `C_abcd C^abcd`; negative values are possible in Lorentz signature.
pub fn weyl_square(cd: &CurvatureData) -> Result<f64> {
    Ok(full_contraction(&cd.g_inv, &weyl(cd)?))
}

/// `max |g^{ik} C_ijkl|` over the free indices.
pub fn weyl_trace_defect(cd: &CurvatureData, c: &Tensor4) -> f64 {
    let n = cd.dim();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for l in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                for k in 0..n {
                    acc += cd.g_inv[(i, k)] * c[(i, j, k, l)];
                }
            }
            worst = worst.max(acc.abs());
        }
    }
    worst
}

/// Normalization of the null pair: `l·n = -1, m·m̄ = 1` for signature
/// `(-,+,+,+)`, or `l·n = 1, m·m̄ = -1` for `(+,-,-,-)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullNormalization {
    MinusOne,
    PlusOne,
}

impl NullNormalization {
    fn ln(self) -> f64 {
        match self {
            NullNormalization::MinusOne => -1.0,
            NullNormalization::PlusOne => 1.0,
        }
    }
}

/// Newman–Penrose null tetrad `(l, n, m, m̄)` with `m̄` implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NpTetrad {
    pub l: Vec<f64>,
    pub n: Vec<f64>,
    pub m: Vec<Complex64>,
    pub normalization: NullNormalization,
}

/// Tolerance on tetrad normalization defects accepted by [`np_scalars`].
pub const TETRAD_TOL: f64 = 1e-8;

fn cinner(g: &DMatrix<f64>, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let n = g.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += u[i] * v[j] * g[(i, j)];
        }
    }
    acc
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|x| Complex64::new(*x, 0.0)).collect()
}

impl NpTetrad {
    pub fn m_bar(&self) -> Vec<Complex64> {
        self.m.iter().map(|z| z.conj()).collect()
    }

    /// Largest deviation of the tetrad inner products from their nominal values.
    pub fn normalization_defect(&self, g: &DMatrix<f64>) -> f64 {
        let dim = g.nrows();
        if self.l.len() != dim || self.n.len() != dim || self.m.len() != dim {
            return f64::INFINITY;
        }
        let ln = self.normalization.ln();
        let l = to_complex(&self.l);
        let n = to_complex(&self.n);
        let m = &self.m;
        let mb = self.m_bar();
        let checks = [
            (cinner(g, &l, &l), 0.0),
            (cinner(g, &n, &n), 0.0),
            (cinner(g, &l, &n), ln),
            (cinner(g, m, &mb), -ln),
            (cinner(g, m, m), 0.0),
            (cinner(g, &l, m), 0.0),
            (cinner(g, &n, m), 0.0),
        ];
        checks
            .iter()
            .map(|(v, nominal)| (v - Complex64::new(*nominal, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

fn ccontract(t: &Tensor4, a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]) -> Complex64 {
    let n = t.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let ab = a[i] * b[j];
            for k in 0..n {
                let abc = ab * c[k];
                for l in 0..n {
                    acc += abc * d[l] * t[(i, j, k, l)];
                }
            }
        }
    }
    acc
}

/// Weyl scalars `Ψ0..Ψ4` in the given tetrad.
///
/// With `l·n = -1` the scalars are `Ψ0 = -C(l,m,l,m)`, `Ψ1 = -C(l,n,l,m)`,
/// `Ψ2 = -C(l,m,m̄,n)`, `Ψ3 = -C(l,n,m̄,n)`, `Ψ4 = -C(n,m̄,n,m̄)`; the sign
/// flips with the opposite normalization. For the Kinnersley tetrad on Kerr
/// this gives `Ψ2 = M/(r - i a cosθ)³`.
pub fn np_scalars(cd: &CurvatureData, tetrad: &NpTetrad) -> Result<[Complex64; 5]> {
    let defect = tetrad.normalization_defect(&cd.g);
    if !(defect <= TETRAD_TOL) {
        return Err(Error::BadTetrad { defect });
    }
    let c = if cd.dim() >= 3 {
        weyl(cd)?
    } else {
        Tensor4::zeros(cd.dim())
    };
    let sign = tetrad.normalization.ln();
    let l = to_complex(&tetrad.l);
    let n = to_complex(&tetrad.n);
    let m = &tetrad.m;
    let mb = tetrad.m_bar();
    Ok([
        ccontract(&c, &l, m, &l, m) * sign,
        ccontract(&c, &l, &n, &l, m) * sign,
        ccontract(&c, &l, m, &mb, &n) * sign,
        ccontract(&c, &l, &n, &mb, &n) * sign,
        ccontract(&c, &n, &mb, &n, &mb) * sign,
    ])
}

/// `I = Ψ0 Ψ4 - 4 Ψ1 Ψ3 + 3 Ψ2²`.
pub fn invariant_i(psi: &[Complex64; 5]) -> Complex64 {
    psi[0] * psi[4] - psi[1] * psi[3] * 4.0 + psi[2] * psi[2] * 3.0
}

/// Scalar summary of the curvature at a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub ricci_scalar: f64,
    pub kretschmann: f64,
    /// `C_abcd C^abcd` (signed); absent below dimension 3.
    pub weyl_square: Option<f64>,
    /// `sqrt(C·C)` when the contraction is non-negative.
    pub weyl_norm: Option<f64>,
    pub np_scalars: Option<[Complex64; 5]>,
    pub invariant_i: Option<Complex64>,
}

pub fn invariants(cd: &CurvatureData, tetrad: Option<&NpTetrad>) -> Result<InvariantReport> {
    let weyl_square = if cd.dim() >= 3 { Some(weyl_square(cd)?) } else { None };
    let weyl_norm = weyl_square.filter(|w| *w >= 0.0).map(f64::sqrt);
    let np = tetrad.map(|t| np_scalars(cd, t)).transpose()?;
    Ok(InvariantReport {
        ricci_scalar: ricci_scalar(cd),
        kretschmann: kretschmann(cd),
        weyl_square,
        weyl_norm,
        invariant_i: np.as_ref().map(invariant_i),
        np_scalars: np,
    })
}
