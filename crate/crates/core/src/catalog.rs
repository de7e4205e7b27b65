//! Closed-form metrics with their curvature, null tetrads and expected
//! singular values.
//!
//! Coordinates follow the usual ordering: `(θ, φ)` on the sphere and
//! `(t, r, θ, φ)` for the black holes. Angles are in radians.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::algebra::{NpTetrad, NullNormalization};
use crate::error::{Error, Result};
use crate::geometry::{MetricSpec, Point, Signature, MAX_DIMENSION};
use crate::tensor::{Tensor3, Tensor4};

/// Named real parameters such as `M`, `a`, `kappa`, `n`.
pub type Params = BTreeMap<String, f64>;

type Predicate = Arc<dyn Fn(&Point) -> bool + Send + Sync>;
type Sampler = Arc<dyn Fn(&mut dyn RngCore) -> Point + Send + Sync>;
type TetradFn = Arc<dyn Fn(&Point) -> Result<NpTetrad> + Send + Sync>;
type ExpectedFn = Arc<dyn Fn(&Point) -> Vec<ExpectedSigma> + Send + Sync>;

/// Stable catalog identifiers.
pub const IDS: [&str; 6] = [
    "sphere2",
    "space-form",
    "euclidean",
    "minkowski",
    "schwarzschild",
    "kerr",
];

/// Which family an entry belongs to, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CatalogKind {
    Sphere2,
    SpaceForm { kappa: f64, n: usize },
    Euclidean { n: usize },
    Minkowski,
    Schwarzschild { m: f64 },
    Kerr { m: f64, a: f64 },
    User,
}

/// A singular value predicted in closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedSigma {
    pub sigma: f64,
    pub description: String,
}

impl ExpectedSigma {
    fn new(sigma: f64, description: &str) -> Self {
        Self {
            sigma,
            description: description.to_string(),
        }
    }
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub spec: MetricSpec,
    pub kind: CatalogKind,
    pub params: Params,
    pub default_point: Point,
    /// The metric is flat in its chart and the curvature is imposed
    /// algebraically, so numeric differentiation does not apply.
    pub algebraic: bool,
    admissible: Predicate,
    sampler: Sampler,
    tetrad: Option<TetradFn>,
    expected: Option<ExpectedFn>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("spec", &self.spec)
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("default_point", &self.default_point)
            .field("algebraic", &self.algebraic)
            .field("tetrad", &self.tetrad.is_some())
            .field("expected", &self.expected.is_some())
            .finish()
    }
}

impl CatalogEntry {
    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn is_admissible(&self, p: &Point) -> bool {
        p.dim() == self.spec.dimension && (self.admissible)(p)
    }

    /// `Ok(())` if `p` lies in the domain, `OutOfDomain` otherwise.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.spec.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dimension,
                found: p.dim(),
            });
        }
        if !(self.admissible)(p) {
            return Err(Error::OutOfDomain(format!(
                "point {:?} outside the domain of '{}'",
                p.coords(),
                self.spec.id
            )));
        }
        Ok(())
    }

    /// Draws a random admissible point.
    pub fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        (self.sampler)(rng)
    }

    pub fn has_tetrad(&self) -> bool {
        self.tetrad.is_some()
    }

    pub fn tetrad(&self, p: &Point) -> Option<Result<NpTetrad>> {
        self.tetrad.as_ref().map(|t| t(p))
    }

    /// Closed-form singular values at `p`, always including the trivial zero.
    pub fn expected(&self, p: &Point) -> Option<Vec<ExpectedSigma>> {
        self.expected.as_ref().map(|e| e(p))
    }

    /// Wraps a user-supplied metric with an unrestricted domain.
    pub fn user(spec: MetricSpec, params: Params, default_point: Point) -> Self {
        let n = spec.dimension;
        Self {
            spec,
            kind: CatalogKind::User,
            params,
            default_point,
            algebraic: false,
            admissible: Arc::new(|_| true),
            sampler: Arc::new(move |rng| uniform_box(rng, n, -1.0, 1.0)),
            tetrad: None,
            expected: None,
        }
    }
}

fn uniform_box(rng: &mut dyn RngCore, n: usize, lo: f64, hi: f64) -> Point {
    let coords: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    Point::new(coords).expect("finite sample")
}

fn point(coords: Vec<f64>) -> Point {
    Point::new(coords).expect("finite catalog point")
}

fn angle_ok(theta: f64) -> bool {
    theta > 0.0 && theta < PI && theta.sin() > 1e-12
}

/// Round unit 2-sphere, `ds² = dθ² + sin²θ dφ²`.
pub fn sphere2() -> CatalogEntry {
    let spec = MetricSpec::new("sphere2", Signature::riemannian(2), |x| {
        let s = x[0].sin();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, s * s]))
    })
    .expect("valid dimension")
    .with_coordinates(&["theta", "phi"])
    .with_gamma(|x| {
        let (s, c) = x[0].sin_cos();
        let mut g = Tensor3::zeros(2);
        g[(0, 1, 1)] = -s * c;
        g[(1, 0, 1)] = c / s;
        g[(1, 1, 0)] = c / s;
        g
    })
    .with_riemann(|x| {
        let s = x[0].sin();
        let mut r = Tensor4::zeros(2);
        r[(0, 1, 0, 1)] = s * s;
        r[(0, 1, 1, 0)] = -s * s;
        r[(1, 0, 1, 0)] = 1.0;
        r[(1, 0, 0, 1)] = -1.0;
        r
    });
    CatalogEntry {
        spec,
        kind: CatalogKind::Sphere2,
        params: Params::new(),
        default_point: point(vec![PI / 3.0, 0.0]),
        algebraic: false,
        admissible: Arc::new(|p| angle_ok(p.coords()[0])),
        sampler: Arc::new(|rng| {
            point(vec![
                rng.random_range(0.2..PI - 0.2),
                rng.random_range(0.0..2.0 * PI),
            ])
        }),
        tetrad: None,
        expected: Some(Arc::new(|_| {
            vec![
                ExpectedSigma::new(0.0, "trivial"),
                ExpectedSigma::new(1.0, "unit sectional curvature"),
            ]
        })),
    }
}

/// Lowered constant-curvature tensor `κ(g_ik g_jl − g_il g_jk)`.
pub fn constant_curvature_tensor(g: &DMatrix<f64>, kappa: f64) -> Tensor4 {
    Tensor4::from_fn(g.nrows(), |i, j, k, l| {
        kappa * (g[(i, k)] * g[(j, l)] - g[(i, l)] * g[(j, k)])
    })
}

/// Space form of sectional curvature `κ` in dimension `n`, realized at a
/// point: the chart metric is the identity and the curvature tensor is
/// imposed algebraically.
pub fn space_form(kappa: f64, n: usize) -> Result<CatalogEntry> {
    if !kappa.is_finite() {
        return Err(Error::InvalidInput(format!("kappa must be finite, got {kappa}")));
    }
    let id = DMatrix::<f64>::identity(n, n);
    let spec = MetricSpec::new("space-form", Signature::riemannian(n), move |_| {
        DMatrix::identity(n, n)
    })?
    .with_gamma(move |_| Tensor3::zeros(n))
    .with_riemann(move |_| constant_curvature_tensor(&id, kappa));
    let mut params = Params::new();
    params.insert("kappa".into(), kappa);
    params.insert("n".into(), n as f64);
    Ok(CatalogEntry {
        spec,
        kind: CatalogKind::SpaceForm { kappa, n },
        params,
        default_point: point(vec![0.0; n]),
        algebraic: true,
        admissible: Arc::new(|_| true),
        sampler: Arc::new(move |rng| uniform_box(rng, n, -1.0, 1.0)),
        tetrad: None,
        expected: Some(Arc::new(move |_| {
            let mut v = vec![ExpectedSigma::new(0.0, "trivial")];
            if kappa != 0.0 {
                v.push(ExpectedSigma::new(kappa.abs(), "|kappa|"));
            }
            v
        })),
    })
}

fn flat(id: &str, signature: Signature, kind: CatalogKind, params: Params) -> Result<CatalogEntry> {
    let n = signature.dim();
    let diag: Vec<f64> = signature.signs().iter().map(|s| *s as f64).collect();
    let spec = MetricSpec::new(id, signature, move |_| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag.clone()))
    })?
    .with_gamma(move |_| Tensor3::zeros(n))
    .with_riemann(move |_| Tensor4::zeros(n));
    Ok(CatalogEntry {
        spec,
        kind,
        params,
        default_point: point(vec![0.0; n]),
        algebraic: false,
        admissible: Arc::new(|_| true),
        sampler: Arc::new(move |rng| uniform_box(rng, n, -5.0, 5.0)),
        tetrad: None,
        expected: Some(Arc::new(|_| vec![ExpectedSigma::new(0.0, "flat")])),
    })
}

/// Flat Euclidean space of dimension `n`.
pub fn euclidean(n: usize) -> Result<CatalogEntry> {
    let mut params = Params::new();
    params.insert("n".into(), n as f64);
    flat("euclidean", Signature::riemannian(n), CatalogKind::Euclidean { n }, params)
}

/// Minkowski space with signature `(-,+,+,+)`.
pub fn minkowski() -> CatalogEntry {
    flat(
        "minkowski",
        Signature::lorentzian(4),
        CatalogKind::Minkowski,
        Params::new(),
    )
    .expect("valid dimension")
    .with_coordinates(&["t", "x", "y", "z"])
}

impl CatalogEntry {
    fn with_coordinates(mut self, names: &[&str]) -> Self {
        self.spec = self.spec.with_coordinates(names);
        self
    }
}

/// The coefficients `A = Mf/r³`, `B = M/(r³f)`, `C = M/r`, `D = M sin²θ/r`
/// of the Schwarzschild curvature table, `f = 1 − 2M/r`.
pub fn schwarzschild_abcd(m: f64, r: f64, theta: f64) -> [f64; 4] {
    let f = 1.0 - 2.0 * m / r;
    let s = theta.sin();
    [m * f / r.powi(3), m / (r.powi(3) * f), m / r, m * s * s / r]
}

/// Mixed curvature `R^l_{kij}` of Schwarzschild at `(r, θ)`.
pub fn schwarzschild_riemann(m: f64, r: f64, theta: f64) -> Tensor4 {
    let [a, b, c, d] = schwarzschild_abcd(m, r, theta);
    let table = [
        ((0, 1, 0, 1), 2.0 * b),
        ((0, 2, 2, 0), c),
        ((0, 3, 3, 0), d),
        ((1, 0, 0, 1), 2.0 * a),
        ((1, 2, 2, 1), c),
        ((1, 3, 3, 1), d),
        ((2, 0, 2, 0), a),
        ((2, 1, 1, 2), b),
        ((2, 3, 2, 3), 2.0 * d),
        ((3, 0, 3, 0), a),
        ((3, 1, 1, 3), b),
        ((3, 2, 3, 2), 2.0 * c),
    ];
    let mut t = Tensor4::zeros(4);
    for ((l, k, i, j), v) in table {
        t[(l, k, i, j)] = v;
        t[(l, k, j, i)] = -v;
    }
    t
}

/// Schwarzschild exterior with mass `M > 0`.
pub fn schwarzschild(m: f64) -> Result<CatalogEntry> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidInput(format!("mass must be positive, got M={m}")));
    }
    let spec = MetricSpec::new("schwarzschild", Signature::lorentzian(4), move |x| {
        let (r, th) = (x[1], x[2]);
        let f = 1.0 - 2.0 * m / r;
        let s = th.sin();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            -f,
            1.0 / f,
            r * r,
            r * r * s * s,
        ]))
    })?
    .with_coordinates(&["t", "r", "theta", "phi"])
    .with_gamma(move |x| {
        let (r, th) = (x[1], x[2]);
        let f = 1.0 - 2.0 * m / r;
        let (s, c) = th.sin_cos();
        let mut g = Tensor3::zeros(4);
        let sym = |g: &mut Tensor3, l: usize, i: usize, k: usize, v: f64| {
            g[(l, i, k)] = v;
            g[(l, k, i)] = v;
        };
        sym(&mut g, 0, 0, 1, m / (r * r * f));
        g[(1, 0, 0)] = m * f / (r * r);
        g[(1, 1, 1)] = -m / (r * r * f);
        g[(1, 2, 2)] = -r * f;
        g[(1, 3, 3)] = -r * f * s * s;
        sym(&mut g, 2, 1, 2, 1.0 / r);
        g[(2, 3, 3)] = -s * c;
        sym(&mut g, 3, 1, 3, 1.0 / r);
        sym(&mut g, 3, 2, 3, c / s);
        g
    })
    .with_riemann(move |x| schwarzschild_riemann(m, x[1], x[2]));
    let mut params = Params::new();
    params.insert("M".into(), m);
    Ok(CatalogEntry {
        spec,
        kind: CatalogKind::Schwarzschild { m },
        params,
        default_point: point(vec![0.0, 3.0 * m, PI / 4.0, 0.0]),
        algebraic: false,
        admissible: Arc::new(move |p| {
            let x = p.coords();
            x[1] > 2.0 * m && angle_ok(x[2])
        }),
        sampler: Arc::new(move |rng| {
            point(vec![
                rng.random_range(-5.0..5.0),
                m * rng.random_range(3.0..12.0),
                rng.random_range(0.2..PI - 0.2),
                rng.random_range(0.0..2.0 * PI),
            ])
        }),
        tetrad: None,
        expected: Some(Arc::new(move |p| {
            let r = p.coords()[1];
            vec![
                ExpectedSigma::new(0.0, "trivial"),
                ExpectedSigma::new(m / r.powi(3), "M/r^3"),
            ]
        })),
    })
}

/// Boyer–Lindquist Kerr metric components at `(r, θ)`.
pub fn kerr_metric(m: f64, a: f64, r: f64, theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    let sigma = r * r + a * a * c * c;
    let delta = r * r - 2.0 * m * r + a * a;
    let s2 = s * s;
    let mut g = DMatrix::zeros(4, 4);
    g[(0, 0)] = -(1.0 - 2.0 * m * r / sigma);
    g[(0, 3)] = -2.0 * m * a * r * s2 / sigma;
    g[(3, 0)] = g[(0, 3)];
    g[(1, 1)] = sigma / delta;
    g[(2, 2)] = sigma;
    g[(3, 3)] = (r * r + a * a + 2.0 * m * a * a * r * s2 / sigma) * s2;
    g
}

/// Kinnersley tetrad at `(r, θ)`, normalized with `l·n = −1`.
pub fn kinnersley_tetrad(m: f64, a: f64, r: f64, theta: f64) -> NpTetrad {
    let (s, c) = theta.sin_cos();
    let sigma = r * r + a * a * c * c;
    let delta = r * r - 2.0 * m * r + a * a;
    let ra = r * r + a * a;
    let l = vec![ra / delta, 1.0, 0.0, a / delta];
    let n = vec![ra, -delta, 0.0, a].into_iter().map(|v| v / (2.0 * sigma)).collect();
    let pref = Complex64::new(FRAC_1_SQRT_2, 0.0) / Complex64::new(r, a * c);
    let i = Complex64::i();
    let m_vec = vec![i * (a * s), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), i / s]
        .into_iter()
        .map(|z| z * pref)
        .collect();
    NpTetrad {
        l,
        n,
        m: m_vec,
        normalization: NullNormalization::MinusOne,
    }
}

/// `Ψ₂ = M/(r − i a cosθ)³` in the Kinnersley tetrad.
pub fn kerr_psi2(m: f64, a: f64, r: f64, theta: f64) -> Complex64 {
    let z = Complex64::new(r, -a * theta.cos());
    Complex64::new(m, 0.0) / (z * z * z)
}

/// Outer horizon radius `M + √(M² − a²)`.
pub fn kerr_outer_horizon(m: f64, a: f64) -> f64 {
    m + (m * m - a * a).sqrt()
}

/// Kerr exterior with mass `M > 0` and spin `0 ≤ a < M`.
pub fn kerr(m: f64, a: f64) -> Result<CatalogEntry> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidInput(format!("mass must be positive, got M={m}")));
    }
    if !(a >= 0.0 && a < m) {
        return Err(Error::InvalidInput(format!("spin must satisfy 0 <= a < M, got a={a}")));
    }
    let rp = kerr_outer_horizon(m, a);
    let spec = MetricSpec::new("kerr", Signature::lorentzian(4), move |x| {
        kerr_metric(m, a, x[1], x[2])
    })?
    .with_coordinates(&["t", "r", "theta", "phi"]);
    let mut params = Params::new();
    params.insert("M".into(), m);
    params.insert("a".into(), a);
    let admissible = move |p: &Point| {
        let x = p.coords();
        let delta = x[1] * x[1] - 2.0 * m * x[1] + a * a;
        x[1] > rp && delta > 0.0 && angle_ok(x[2])
    };
    Ok(CatalogEntry {
        spec,
        kind: CatalogKind::Kerr { m, a },
        params,
        default_point: point(vec![0.0, 3.0 * m, PI / 3.0, 0.0]),
        algebraic: false,
        admissible: Arc::new(admissible),
        sampler: Arc::new(move |rng| {
            let lo = rp + m;
            point(vec![
                rng.random_range(-5.0..5.0),
                rng.random_range(lo..lo.max(12.0 * m) + m),
                rng.random_range(0.2..PI - 0.2),
                rng.random_range(0.0..2.0 * PI),
            ])
        }),
        tetrad: Some(Arc::new(move |p| {
            if !admissible(p) {
                return Err(Error::OutOfDomain(format!(
                    "tetrad undefined at {:?}",
                    p.coords()
                )));
            }
            let x = p.coords();
            Ok(kinnersley_tetrad(m, a, x[1], x[2]))
        })),
        expected: Some(Arc::new(move |p| {
            let x = p.coords();
            let psi2 = kerr_psi2(m, a, x[1], x[2]);
            vec![
                ExpectedSigma::new(0.0, "trivial"),
                ExpectedSigma::new(psi2.re.abs(), "sqrt((|I| + Re I)/6)"),
            ]
        })),
    })
}

fn take(params: &Params, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(v) => Ok(*v),
        None => default.ok_or_else(|| Error::InvalidInput(format!("missing parameter '{key}'"))),
    }
}

fn take_dim(params: &Params, default: usize) -> Result<usize> {
    let v = take(params, "n", Some(default as f64))?;
    if v.fract() != 0.0 || v < 2.0 || v > MAX_DIMENSION as f64 {
        return Err(Error::InvalidInput(format!(
            "n must be an integer in 2..={MAX_DIMENSION}, got {v}"
        )));
    }
    Ok(v as usize)
}

fn only(params: &Params, allowed: &[&str]) -> Result<()> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::InvalidInput(format!(
                "unknown parameter '{k}' (expected one of {allowed:?})"
            )));
        }
    }
    Ok(())
}

/// Looks up a catalog entry by its stable id.
pub fn by_id(id: &str, params: &Params) -> Result<CatalogEntry> {
    match id {
        "sphere2" => {
            only(params, &[])?;
            Ok(sphere2())
        }
        "space-form" => {
            only(params, &["kappa", "n"])?;
            space_form(take(params, "kappa", Some(1.0))?, take_dim(params, 3)?)
        }
        "euclidean" => {
            only(params, &["n"])?;
            euclidean(take_dim(params, 4)?)
        }
        "minkowski" => {
            only(params, &[])?;
            Ok(minkowski())
        }
        "schwarzschild" => {
            only(params, &["M"])?;
            schwarzschild(take(params, "M", Some(1.0))?)
        }
        "kerr" => {
            only(params, &["M", "a"])?;
            kerr(take(params, "M", Some(1.0))?, take(params, "a", Some(0.5))?)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown catalog id '{other}' (known: {})",
            IDS.join(", ")
        ))),
    }
}

/// One-line description per catalog id.
pub fn describe(id: &str) -> &'static str {
    match id {
        "sphere2" => "round unit 2-sphere (theta, phi)",
        "space-form" => "constant sectional curvature kappa in dimension n, at a point",
        "euclidean" => "flat Euclidean space of dimension n",
        "minkowski" => "flat Minkowski space, signature (-,+,+,+)",
        "schwarzschild" => "Schwarzschild exterior, mass M (t, r, theta, phi)",
        "kerr" => "Kerr exterior in Boyer-Lindquist coordinates, mass M, spin a",
        _ => "",
    }
}

/// Parameters a catalog id accepts, with their defaults.
pub fn parameters(id: &str) -> &'static [(&'static str, f64)] {
    match id {
        "space-form" => &[("kappa", 1.0), ("n", 3.0)],
        "euclidean" => &[("n", 4.0)],
        "schwarzschild" => &[("M", 1.0)],
        "kerr" => &[("M", 1.0), ("a", 0.5)],
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{kretschmann, np_scalars, ricci};
    use crate::geometry::{metric_at, riemann, verify_tensor_symmetries};
    use approx::assert_relative_eq;

    #[test]
    fn sphere_component_at_thirty_degrees() {
        let e = sphere2();
        let cd = riemann(&e.spec, &point(vec![PI / 6.0, 0.0])).unwrap();
        assert_relative_eq!(cd.riemann_lowered[(0, 1, 0, 1)], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn space_form_matches_sphere_at_equator() {
        let sf = space_form(1.0, 2).unwrap();
        let a = riemann(&sf.spec, &sf.default_point).unwrap();
        let b = riemann(&sphere2().spec, &point(vec![PI / 2.0, 0.3])).unwrap();
        assert!(a.riemann_lowered.max_abs_diff(&b.riemann_lowered) < 1e-15);
    }

    #[test]
    fn flat_space_form_is_zero() {
        let sf = space_form(0.0, 4).unwrap();
        let cd = riemann(&sf.spec, &sf.default_point).unwrap();
        assert_eq!(cd.riemann_lowered.max_abs(), 0.0);
        assert_eq!(sf.expected(&sf.default_point).unwrap().len(), 1);
    }

    #[test]
    fn schwarzschild_table_values() {
        let [a, b, _, _] = schwarzschild_abcd(1.0, 3.0, 0.5);
        assert_relative_eq!(a, 1.0 / 81.0, epsilon = 1e-16);
        assert_relative_eq!(b, 1.0 / 9.0, epsilon = 1e-16);
        let e = schwarzschild(1.0).unwrap();
        let p = point(vec![0.0, 3.0, PI / 4.0, 0.0]);
        let (g, _) = metric_at(&e.spec, &p).unwrap();
        assert_relative_eq!(g[(0, 0)], -1.0 / 3.0, epsilon = 1e-15);
        let cd = riemann(&e.spec, &p).unwrap();
        assert_relative_eq!(cd.riemann_mixed[(0, 1, 0, 1)], 2.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(cd.gamma[(1, 0, 0)], 1.0 / 27.0, epsilon = 1e-15);
        assert_relative_eq!(kretschmann(&cd), 48.0 / 729.0, max_relative = 1e-13);
        assert!(ricci(&cd).amax() < 1e-15);
        let rep = verify_tensor_symmetries(&cd, 1e-12);
        assert!(rep.passed, "{rep:?}");
        assert_eq!(e.expected(&p).unwrap()[1].sigma, 1.0 / 27.0);
    }

    #[test]
    fn kerr_at_zero_spin_is_schwarzschild() {
        let s = schwarzschild(1.0).unwrap();
        let k = kerr(1.0, 0.0).unwrap();
        let p = point(vec![0.0, 4.2, 1.1, 0.0]);
        let (gs, _) = metric_at(&s.spec, &p).unwrap();
        let (gk, _) = metric_at(&k.spec, &p).unwrap();
        assert!((gs - gk).amax() < 1e-12);
    }

    #[test]
    fn kerr_metric_matches_line_element() {
        // ds² written with Σ, Δ and the frame-dragging cross term
        let (m, a, r, th) = (1.0, 0.7, 3.3, 0.9);
        let (s, c) = f64::sin_cos(th);
        let sig = r * r + a * a * c * c;
        let del = r * r - 2.0 * m * r + a * a;
        let gtt = -(del - a * a * s * s) / sig;
        let gtp = -a * s * s * (r * r + a * a - del) / sig;
        let gpp = s * s * ((r * r + a * a).powi(2) - del * a * a * s * s) / sig;
        let g = kerr_metric(m, a, r, th);
        assert_relative_eq!(g[(0, 0)], gtt, epsilon = 1e-14);
        assert_relative_eq!(g[(0, 3)], gtp, epsilon = 1e-14);
        assert_relative_eq!(g[(3, 3)], gpp, epsilon = 1e-13);
    }

    #[test]
    fn kinnersley_tetrad_components() {
        let t = kinnersley_tetrad(1.0, 0.5, 3.0, PI / 2.0);
        // Δ = 9 − 6 + 0.25
        assert_relative_eq!(t.l[0], 9.25 / 3.25, epsilon = 1e-15);
        assert_relative_eq!(t.l[3], 0.5 / 3.25, epsilon = 1e-15);
        let g = kerr_metric(1.0, 0.5, 3.0, PI / 2.0);
        assert!(t.normalization_defect(&g) < 1e-13);
    }

    #[test]
    fn kerr_expected_at_equator() {
        let k = kerr(1.0, 0.5).unwrap();
        let p = point(vec![0.0, 3.0, PI / 2.0, 0.0]);
        let e = k.expected(&p).unwrap();
        assert_relative_eq!(e[1].sigma, 1.0 / 27.0, epsilon = 1e-15);
    }

    #[test]
    fn kerr_numeric_weyl_scalars() {
        let k = kerr(1.0, 0.5).unwrap();
        let p = point(vec![0.0, 3.0, PI / 3.0, 0.0]);
        let cd = riemann(&k.spec, &p).unwrap();
        let psi = np_scalars(&cd, &k.tetrad(&p).unwrap().unwrap()).unwrap();
        let want = kerr_psi2(1.0, 0.5, 3.0, PI / 3.0);
        assert!((psi[2] - want).norm() < 1e-8, "{} vs {}", psi[2], want);
        for i in [0, 1, 3, 4] {
            assert!(psi[i].norm() < 1e-8, "psi{i} = {}", psi[i]);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(kerr(1.0, 1.0).is_err());
        assert!(schwarzschild(-1.0).is_err());
        assert!(by_id("kerr", &Params::from([("q".to_string(), 1.0)])).is_err());
        assert!(by_id("space-form", &Params::from([("n".to_string(), 2.5)])).is_err());
        assert!(by_id("nope", &Params::new()).is_err());
    }

    #[test]
    fn domains() {
        let s = schwarzschild(1.0).unwrap();
        assert!(s.check_point(&point(vec![0.0, 2.0, 1.0, 0.0])).is_err());
        assert!(s.check_point(&point(vec![0.0, 3.0, 0.0, 0.0])).is_err());
        assert!(s.check_point(&s.default_point).is_ok());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = s.sample_point(&mut rng);
            assert!(s.is_admissible(&p));
        }
    }

    use rand::SeedableRng;
}
