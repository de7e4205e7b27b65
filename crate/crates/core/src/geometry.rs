//! Metric evaluation, Levi-Civita connection and Riemann tensor at a point.
//!
//! Index conventions:
//!
//! * `gamma[(l, i, k)]` is `Γ^l_{ik}`, with `∇_{∂_i} ∂_k = Γ^l_{ik} ∂_l`.
//! * `riemann_mixed[(l, k, i, j)]` is `R^l_{kij}`, with
//!   `R(∂_i, ∂_j) ∂_k = R^l_{kij} ∂_l` and
//!   `R^l_{kij} = ∂_i Γ^l_{jk} - ∂_j Γ^l_{ik} + Γ^h_{jk} Γ^l_{ih} - Γ^h_{ik} Γ^l_{jh}`.
//! * `riemann_lowered[(i, j, k, l)]` is `R_{ijkl} = g_{ih} R^h_{jkl}`, so that
//!   `R(W, X, Y, Z) = <W, R(Y, Z) X> = R_{ijkl} w^i x^j y^k z^l`.
//!
//! With these conventions the unit 2-sphere has `R_{θφθφ} = +sin²θ`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::diff::{self, DiffOptions};
use crate::error::{Error, Result};
use crate::tensor::{Tensor3, Tensor4};

/// Largest supported dimension (dense `n⁴` storage).
pub const MAX_DIMENSION: usize = 8;

/// Coordinates of a point in a chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Diagonal signs of the metric in an orthonormal frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature(Vec<i8>);

impl Signature {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput("signature entries must be +1 or -1".into()));
        }
        Ok(Self(signs))
    }

    pub fn riemannian(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// `(-, +, +, ..., +)`.
    pub fn lorentzian(n: usize) -> Self {
        let mut s = vec![1; n];
        s[0] = -1;
        Self(s)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn negatives(&self) -> usize {
        self.0.iter().filter(|s| **s < 0).count()
    }

    pub fn is_riemannian(&self) -> bool {
        self.negatives() == 0
    }

    pub fn is_lorentzian(&self) -> bool {
        self.negatives() == 1 && self.dim() >= 2
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(str_sign(*s))?;
        }
        Ok(())
    }
}

fn str_sign(s: i8) -> &'static str {
    if s < 0 {
        "-"
    } else {
        "+"
    }
}

pub type MetricFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
pub type GammaFn = Arc<dyn Fn(&[f64]) -> Tensor3 + Send + Sync>;
pub type RiemannFn = Arc<dyn Fn(&[f64]) -> Tensor4 + Send + Sync>;

/// A metric on a coordinate chart, with optional closed-form connection and
/// curvature (`R^l_{kij}` in the mixed convention above).
#[derive(Clone)]
pub struct MetricSpec {
    pub id: String,
    pub dimension: usize,
    pub signature: Signature,
    pub coordinates: Vec<String>,
    pub metric: MetricFn,
    pub analytic_gamma: Option<GammaFn>,
    pub analytic_riemann: Option<RiemannFn>,
}

impl fmt::Debug for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricSpec")
            .field("id", &self.id)
            .field("dimension", &self.dimension)
            .field("signature", &self.signature)
            .field("coordinates", &self.coordinates)
            .field("analytic_gamma", &self.analytic_gamma.is_some())
            .field("analytic_riemann", &self.analytic_riemann.is_some())
            .finish()
    }
}

impl MetricSpec {
    pub fn new(
        id: impl Into<String>,
        signature: Signature,
        metric: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        let dimension = signature.dim();
        if !(2..=MAX_DIMENSION).contains(&dimension) {
            return Err(Error::InvalidInput(format!(
                "dimension {dimension} outside supported range 2..={MAX_DIMENSION}"
            )));
        }
        Ok(Self {
            id: id.into(),
            dimension,
            signature,
            coordinates: (0..dimension).map(|i| format!("x{i}")).collect(),
            metric: Arc::new(metric),
            analytic_gamma: None,
            analytic_riemann: None,
        })
    }

    pub fn with_coordinates(mut self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.dimension);
        self.coordinates = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_gamma(mut self, f: impl Fn(&[f64]) -> Tensor3 + Send + Sync + 'static) -> Self {
        self.analytic_gamma = Some(Arc::new(f));
        self
    }

    pub fn with_riemann(mut self, f: impl Fn(&[f64]) -> Tensor4 + Send + Sync + 'static) -> Self {
        self.analytic_riemann = Some(Arc::new(f));
        self
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: p.dim(),
            });
        }
        Ok(())
    }

    fn metric_flat(&self, x: &[f64]) -> Vec<f64> {
        let g = (self.metric)(x);
        // row-major flattening
        let n = self.dimension;
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                out.push(g[(a, b)]);
            }
        }
        out
    }
}

/// Which route produced a curvature tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureSource {
    Analytic,
    Numeric,
    Algebraic,
}

/// Selects the route used by [`riemann_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvaturePath {
    /// Closed form when supplied, numeric otherwise.
    #[default]
    Auto,
    Analytic,
    Numeric,
}

/// Largest defect of each symmetry class of the lowered tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `max |R_ijkl + R_jikl|`
    pub antisymmetry_first: f64,
    /// `max |R_ijkl + R_ijlk|`
    pub antisymmetry_last: f64,
    /// `max |R_ijkl - R_klij|`
    pub pair_symmetry: f64,
    /// `max |R_ijkl + R_iljk + R_iklj|`
    pub bianchi: f64,
    /// `max |g_ij - g_ji|`
    pub metric_asymmetry: f64,
    /// `max(1, max |R_ijkl|)`; tolerances are applied relative to this.
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SymmetryReport {
    pub fn max_defect(&self) -> f64 {
        self.antisymmetry_first
            .max(self.antisymmetry_last)
            .max(self.pair_symmetry)
            .max(self.bianchi)
            .max(self.metric_asymmetry)
    }
}

/// Metric, connection and curvature at a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    pub point: Point,
    pub signature: Signature,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub gamma: Tensor3,
    pub riemann_mixed: Tensor4,
    pub riemann_lowered: Tensor4,
    pub source: CurvatureSource,
    /// Diagnostic symmetry defects at the default 1e-6 relative tolerance.
    pub symmetry: SymmetryReport,
}

/// Relative tolerance for the symmetry diagnostic attached to every
/// [`CurvatureData`].
pub const SYMMETRY_DIAGNOSTIC_TOL: f64 = 1e-6;

impl CurvatureData {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// True when the attached diagnostic flags a symmetry violation.
    pub fn has_symmetry_violation(&self) -> bool {
        !self.symmetry.passed
    }

    /// Builds curvature data from a metric and the mixed tensor `R^l_{kij}`.
    pub fn from_mixed(
        point: Point,
        signature: Signature,
        g: DMatrix<f64>,
        gamma: Tensor3,
        mixed: Tensor4,
        source: CurvatureSource,
    ) -> Result<Self> {
        let g_inv = invert_metric(&g)?;
        let lowered = lower_first(&g, &mixed);
        Ok(Self::assemble(point, signature, g, g_inv, gamma, mixed, lowered, source))
    }

    /// Builds curvature data from a metric and the lowered tensor `R_{ijkl}`,
    /// with a vanishing connection (algebraic curvature at a point).
    pub fn from_lowered(
        signature: Signature,
        g: DMatrix<f64>,
        lowered: Tensor4,
    ) -> Result<Self> {
        let n = g.nrows();
        let g_inv = invert_metric(&g)?;
        let mixed = Tensor4::from_fn(n, |l, k, i, j| {
            (0..n).map(|h| g_inv[(l, h)] * lowered[(h, k, i, j)]).sum()
        });
        let point = Point::new(vec![0.0; n])?;
        Ok(Self::assemble(
            point,
            signature,
            g,
            g_inv,
            Tensor3::zeros(n),
            mixed,
            lowered,
            CurvatureSource::Algebraic,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        point: Point,
        signature: Signature,
        g: DMatrix<f64>,
        g_inv: DMatrix<f64>,
        gamma: Tensor3,
        mixed: Tensor4,
        lowered: Tensor4,
        source: CurvatureSource,
    ) -> Self {
        let symmetry = symmetry_defects(&g, &lowered, SYMMETRY_DIAGNOSTIC_TOL);
        Self {
            point,
            signature,
            g,
            g_inv,
            gamma,
            riemann_mixed: mixed,
            riemann_lowered: lowered,
            source,
            symmetry,
        }
    }
}

fn lower_first(g: &DMatrix<f64>, mixed: &Tensor4) -> Tensor4 {
    let n = g.nrows();
    Tensor4::from_fn(n, |i, j, k, l| (0..n).map(|h| g[(i, h)] * mixed[(h, j, k, l)]).sum())
}

fn invert_metric(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularMetric {
            det: f64::NAN,
            scale: f64::NAN,
        });
    }
    let det = g.determinant();
    // Hadamard bound: |det g| <= product of row norms
    let scale: f64 = g.row_iter().map(|r| r.norm()).product();
    if !(det.abs() > 1e-14 * scale) {
        return Err(Error::SingularMetric { det, scale });
    }
    g.clone()
        .try_inverse()
        .ok_or(Error::SingularMetric { det, scale })
}

/// Metric and inverse metric at `p`.
pub fn metric_at(spec: &MetricSpec, p: &Point) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    spec.check_point(p)?;
    let g = (spec.metric)(p.coords());
    if g.nrows() != spec.dimension || g.ncols() != spec.dimension {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension,
            found: g.nrows(),
        });
    }
    let g_inv = invert_metric(&g)?;
    Ok((g, g_inv))
}

/// Eigenvalue signs of the symmetric part of `g`, sorted with negatives first.
pub fn signature_of(g: &DMatrix<f64>) -> Signature {
    let sym = (g + g.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut signs: Vec<i8> = eig
        .eigenvalues
        .iter()
        .map(|v| if *v < 0.0 { -1 } else { 1 })
        .collect();
    signs.sort();
    Signature(signs)
}

/// Whether the count of negative eigenvalues of `g(p)` agrees with the
/// declared signature.
pub fn signature_matches(spec: &MetricSpec, p: &Point) -> Result<bool> {
    let (g, _) = metric_at(spec, p)?;
    Ok(signature_of(&g).negatives() == spec.signature.negatives())
}

/// First and second partial derivatives of the metric components.
struct MetricJet {
    /// `dg[k][(a, b)] = ∂_k g_ab`
    dg: Vec<DMatrix<f64>>,
    /// `ddg[i][j][(a, b)] = ∂_i ∂_j g_ab`
    ddg: Vec<Vec<DMatrix<f64>>>,
}

fn unflatten(n: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, v)
}

fn metric_first_derivatives(
    spec: &MetricSpec,
    p: &Point,
    opts: &DiffOptions,
) -> Result<Vec<DMatrix<f64>>> {
    let n = spec.dimension;
    let f = |x: &[f64]| spec.metric_flat(x);
    (0..n)
        .map(|k| diff::first_partial(&f, p.coords(), k, opts).map(|e| unflatten(n, &e.value)))
        .collect()
}

fn metric_jet(spec: &MetricSpec, p: &Point, opts: &DiffOptions) -> Result<MetricJet> {
    let n = spec.dimension;
    let dg = metric_first_derivatives(spec, p, opts)?;
    let f = |x: &[f64]| spec.metric_flat(x);
    let f0 = f(p.coords());
    let mut ddg = vec![vec![DMatrix::zeros(n, n); n]; n];
    for i in 0..n {
        for j in i..n {
            let e = diff::second_partial(&f, p.coords(), i, j, &f0, opts)?;
            let m = unflatten(n, &e.value);
            ddg[j][i] = m.clone();
            ddg[i][j] = m;
        }
    }
    Ok(MetricJet { dg, ddg })
}

/// `Γ_{m,ik} = ½(∂_i g_mk + ∂_k g_mi - ∂_m g_ik)` raised with `g^{lm}`.
fn gamma_from_derivatives(g_inv: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Tensor3 {
    let n = g_inv.nrows();
    let lowered = Tensor3::from_fn(n, |m, i, k| 0.5 * (dg[i][(m, k)] + dg[k][(m, i)] - dg[m][(i, k)]));
    Tensor3::from_fn(n, |l, i, k| (0..n).map(|m| g_inv[(l, m)] * lowered[(m, i, k)]).sum())
}

/// Christoffel symbols at `p`: closed form when supplied, numeric otherwise.
pub fn christoffel(spec: &MetricSpec, p: &Point) -> Result<Tensor3> {
    christoffel_with(spec, p, &DiffOptions::default())
}

pub fn christoffel_with(spec: &MetricSpec, p: &Point, opts: &DiffOptions) -> Result<Tensor3> {
    let (_, g_inv) = metric_at(spec, p)?;
    if let Some(f) = &spec.analytic_gamma {
        return Ok(f(p.coords()));
    }
    let dg = metric_first_derivatives(spec, p, opts)?;
    Ok(gamma_from_derivatives(&g_inv, &dg))
}

/// Riemann tensor at `p` through the default route.
pub fn riemann(spec: &MetricSpec, p: &Point) -> Result<CurvatureData> {
    riemann_with(spec, p, CurvaturePath::Auto, &DiffOptions::default())
}

pub fn riemann_with(
    spec: &MetricSpec,
    p: &Point,
    path: CurvaturePath,
    opts: &DiffOptions,
) -> Result<CurvatureData> {
    let (g, g_inv) = metric_at(spec, p)?;
    let use_analytic = match path {
        CurvaturePath::Auto => spec.analytic_riemann.is_some(),
        CurvaturePath::Analytic => {
            if spec.analytic_riemann.is_none() {
                return Err(Error::InvalidInput(format!(
                    "metric '{}' has no closed-form curvature",
                    spec.id
                )));
            }
            true
        }
        CurvaturePath::Numeric => false,
    };

    if use_analytic {
        let gamma = christoffel_with(spec, p, opts)?;
        let mixed = (spec.analytic_riemann.as_ref().expect("checked above"))(p.coords());
        if mixed.dim() != spec.dimension {
            return Err(Error::DimensionMismatch {
                expected: spec.dimension,
                found: mixed.dim(),
            });
        }
        let lowered = lower_first(&g, &mixed);
        return Ok(CurvatureData::assemble(
            p.clone(),
            spec.signature.clone(),
            g,
            g_inv,
            gamma,
            mixed,
            lowered,
            CurvatureSource::Analytic,
        ));
    }

    let n = spec.dimension;
    let jet = metric_jet(spec, p, opts)?;
    let gamma = gamma_from_derivatives(&g_inv, &jet.dg);

    // ∂_j g^{lm} = -g^{la} ∂_j g_ab g^{bm}
    let d_ginv: Vec<DMatrix<f64>> = jet.dg.iter().map(|d| -(&g_inv * d * &g_inv)).collect();
    // d_gamma[j][(l, i, k)] = ∂_j Γ^l_{ik}
    let d_gamma: Vec<Tensor3> = (0..n)
        .map(|j| {
            let low = Tensor3::from_fn(n, |m, i, k| {
                0.5 * (jet.dg[i][(m, k)] + jet.dg[k][(m, i)] - jet.dg[m][(i, k)])
            });
            let d_low = Tensor3::from_fn(n, |m, i, k| {
                0.5 * (jet.ddg[j][i][(m, k)] + jet.ddg[j][k][(m, i)] - jet.ddg[j][m][(i, k)])
            });
            Tensor3::from_fn(n, |l, i, k| {
                (0..n)
                    .map(|m| d_ginv[j][(l, m)] * low[(m, i, k)] + g_inv[(l, m)] * d_low[(m, i, k)])
                    .sum()
            })
        })
        .collect();

    let mixed = Tensor4::from_fn(n, |l, k, i, j| {
        let mut v = d_gamma[i][(l, j, k)] - d_gamma[j][(l, i, k)];
        for h in 0..n {
            v += gamma[(h, j, k)] * gamma[(l, i, h)] - gamma[(h, i, k)] * gamma[(l, j, h)];
        }
        v
    });
    let lowered = lower_first(&g, &mixed);
    Ok(CurvatureData::assemble(
        p.clone(),
        spec.signature.clone(),
        g,
        g_inv,
        gamma,
        mixed,
        lowered,
        CurvatureSource::Numeric,
    ))
}

fn symmetry_defects(g: &DMatrix<f64>, r: &Tensor4, tol: f64) -> SymmetryReport {
    let n = r.dim();
    let (mut a1, mut a2, mut ps, mut bi) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r[(i, j, k, l)];
                    a1 = a1.max((v + r[(j, i, k, l)]).abs());
                    a2 = a2.max((v + r[(i, j, l, k)]).abs());
                    ps = ps.max((v - r[(k, l, i, j)]).abs());
                    bi = bi.max((v + r[(i, l, j, k)] + r[(i, k, l, j)]).abs());
                }
            }
        }
    }
    let mut asym = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            asym = asym.max((g[(a, b)] - g[(b, a)]).abs());
        }
    }
    let scale = r.max_abs().max(1.0);
    let mut report = SymmetryReport {
        antisymmetry_first: a1,
        antisymmetry_last: a2,
        pair_symmetry: ps,
        bianchi: bi,
        metric_asymmetry: asym,
        scale,
        tolerance: tol,
        passed: false,
    };
    report.passed = report.max_defect() <= tol * scale;
    report
}

/// Symmetry and first-Bianchi defects of the lowered tensor against `tol`
/// (relative to `max(1, max |R|)`).
pub fn verify_tensor_symmetries(cd: &CurvatureData, tol: f64) -> SymmetryReport {
    symmetry_defects(&cd.g, &cd.riemann_lowered, tol)
}

/// Index quadruple of a lowered component.
pub type Index4 = (usize, usize, usize, usize);

/// Number of algebraically independent components in dimension `n`.
pub fn independent_count(n: usize) -> usize {
    n * n * (n * n - 1) / 12
}

fn bivectors(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// For distinct `a < b < c < d`, `R_{adbc}` is fixed by the first Bianchi
/// identity and left out of the independent set.
fn is_bianchi_dependent((i, j): (usize, usize), (k, l): (usize, usize)) -> bool {
    i < k && k < l && l < j
}

/// A set of independent lowered components (`n²(n²-1)/12` values).
pub fn independent_components(r: &Tensor4) -> Vec<(Index4, f64)> {
    let bv = bivectors(r.dim());
    let mut out = Vec::with_capacity(independent_count(r.dim()));
    for (ai, &a) in bv.iter().enumerate() {
        for &b in &bv[ai..] {
            if is_bianchi_dependent(a, b) {
                continue;
            }
            out.push(((a.0, a.1, b.0, b.1), r[(a.0, a.1, b.0, b.1)]));
        }
    }
    out
}

fn set_with_symmetries(r: &mut Tensor4, (i, j, k, l): Index4, v: f64) {
    for ((a, b), (c, d)) in [((i, j), (k, l)), ((k, l), (i, j))] {
        r[(a, b, c, d)] = v;
        r[(b, a, c, d)] = -v;
        r[(a, b, d, c)] = -v;
        r[(b, a, d, c)] = v;
    }
}

/// Rebuilds the full lowered tensor from [`independent_components`].
pub fn reconstruct_from_independent(n: usize, comps: &[(Index4, f64)]) -> Tensor4 {
    let mut r = Tensor4::zeros(n);
    for &(idx, v) in comps {
        set_with_symmetries(&mut r, idx, v);
    }
    for (ai, &a) in bivectors(n).iter().enumerate() {
        for &b in &bivectors(n)[ai..] {
            if is_bianchi_dependent(a, b) {
                // R_{adbc} = R_{acbd} - R_{abcd}
                let (pa, pd, pb, pc) = (a.0, a.1, b.0, b.1);
                let v = r[(pa, pc, pb, pd)] - r[(pa, pb, pc, pd)];
                set_with_symmetries(&mut r, (pa, pd, pb, pc), v);
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn sphere() -> MetricSpec {
        MetricSpec::new("s2", Signature::riemannian(2), |x: &[f64]| {
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, x[0].sin().powi(2)])
        })
        .unwrap()
    }

    fn flat(n: usize) -> MetricSpec {
        MetricSpec::new("flat", Signature::riemannian(n), move |_: &[f64]| {
            DMatrix::identity(n, n)
        })
        .unwrap()
    }

    #[test]
    fn sphere_metric_at_equator() {
        let (g, gi) = metric_at(&sphere(), &Point::new(vec![PI / 2.0, 0.0]).unwrap()).unwrap();
        assert_relative_eq!(g, DMatrix::identity(2, 2), epsilon = 1e-15);
        assert_relative_eq!(g * gi, DMatrix::identity(2, 2), epsilon = 1e-12);
    }

    #[test]
    fn sphere_pole_is_singular() {
        let r = metric_at(&sphere(), &Point::new(vec![0.0, 0.0]).unwrap());
        assert!(matches!(r, Err(Error::SingularMetric { .. })));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let r = metric_at(&sphere(), &Point::new(vec![1.0]).unwrap());
        assert_eq!(r.unwrap_err(), Error::DimensionMismatch { expected: 2, found: 1 });
        assert!(Point::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn numeric_christoffel_on_sphere() {
        let th = PI / 3.0;
        let gamma = christoffel(&sphere(), &Point::new(vec![th, 0.2]).unwrap()).unwrap();
        assert_relative_eq!(gamma[(0, 1, 1)], -(3.0_f64).sqrt() / 4.0, epsilon = 1e-10);
        assert_relative_eq!(gamma[(1, 0, 1)], 1.0 / th.tan(), epsilon = 1e-10);
        assert_relative_eq!(gamma[(1, 1, 0)], gamma[(1, 0, 1)], epsilon = 1e-14);
        assert!(gamma[(0, 0, 0)].abs() < 1e-12);
    }

    #[test]
    fn numeric_riemann_sign_on_sphere() {
        // regression pin for the index convention: R_{θφθφ} = +sin²θ
        let th = PI / 3.0;
        let cd = riemann(&sphere(), &Point::new(vec![th, 0.0]).unwrap()).unwrap();
        assert_eq!(cd.source, CurvatureSource::Numeric);
        assert_relative_eq!(cd.riemann_lowered[(0, 1, 0, 1)], 0.75, epsilon = 1e-9);
        assert_relative_eq!(cd.riemann_lowered[(0, 1, 1, 0)], -0.75, epsilon = 1e-9);
        assert_relative_eq!(cd.riemann_mixed[(1, 0, 1, 0)], 1.0, epsilon = 1e-9);
        assert!(!cd.has_symmetry_violation());
    }

    #[test]
    fn flat_space_is_flat() {
        let cd = riemann(&flat(3), &Point::new(vec![0.3, -1.0, 2.0]).unwrap()).unwrap();
        assert!(cd.riemann_lowered.max_abs() < 1e-12);
        assert!(cd.gamma.max_abs() < 1e-12);
    }

    #[test]
    fn analytic_path_requires_supplier() {
        let r = riemann_with(
            &sphere(),
            &Point::new(vec![1.0, 0.0]).unwrap(),
            CurvaturePath::Analytic,
            &DiffOptions::default(),
        );
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn independent_count_in_four_dimensions() {
        assert_eq!(independent_count(4), 20);
        assert_eq!(independent_count(2), 1);
        assert_eq!(independent_count(3), 6);
        let r = Tensor4::zeros(4);
        assert_eq!(independent_components(&r).len(), 20);
    }

    #[test]
    fn signature_detection() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 2.0, 3.0]));
        assert_eq!(signature_of(&g).negatives(), 1);
        assert!(Signature::lorentzian(4).is_lorentzian());
        assert_eq!(Signature::lorentzian(4).to_string(), "-+++");
    }
}
