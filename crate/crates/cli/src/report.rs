//! Report model and its json, csv and text renderings.
//!
//! Reals are written with 17 significant digits so that a json report
//! parses back to the same `f64` values.

use std::fmt::Write as _;

use riemann_svp::svp::{signs_to_string, Cluster, OrbitMember, SvpSolution};
use riemann_svp::{Complex64, InvariantReport};
use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;
use serde_json::value::RawValue;

pub const SCHEMA: &str = "riemann-svp/report";
pub const SCHEMA_VERSION: u32 = 1;

/// An `f64` serialized with 17 significant digits; non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct ComplexOut {
    pub re: Real,
    pub im: Real,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        Self {
            re: Real(z.re),
            im: Real(z.im),
        }
    }
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct ConfigEcho {
    pub metric: String,
    pub params: Vec<(String, Real)>,
    pub point: Vec<Real>,
    pub signs: String,
    pub tol: Real,
    pub starts: usize,
    pub seed: u64,
    pub method: String,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct InvariantsOut {
    pub ricci_scalar: Real,
    pub kretschmann: Real,
    pub weyl_square: Option<Real>,
    pub weyl_norm: Option<Real>,
    pub np_scalars: Option<Vec<ComplexOut>>,
    pub invariant_i: Option<ComplexOut>,
}

impl From<&InvariantReport> for InvariantsOut {
    fn from(r: &InvariantReport) -> Self {
        Self {
            ricci_scalar: Real(r.ricci_scalar),
            kretschmann: Real(r.kretschmann),
            weyl_square: r.weyl_square.map(Real),
            weyl_norm: r.weyl_norm.map(Real),
            np_scalars: r.np_scalars.map(|p| p.iter().map(|z| ComplexOut::from(*z)).collect()),
            invariant_i: r.invariant_i.map(ComplexOut::from),
        }
    }
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct QuadrupleOut {
    pub w: Vec<Real>,
    pub x: Vec<Real>,
    pub y: Vec<Real>,
    pub z: Vec<Real>,
    pub signs: String,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct SolutionOut {
    pub sigma: Real,
    pub residual: Real,
    pub origin: String,
    pub seed: u64,
    pub trivial: bool,
    pub quadruple: QuadrupleOut,
    pub orbit_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SolutionOut {
    pub fn new(s: &SvpSolution, orbit_size: usize) -> Self {
        Self {
            sigma: Real(s.sigma),
            residual: Real(s.residual),
            origin: s.origin.to_string(),
            seed: s.seed,
            trivial: s.trivial,
            quadruple: QuadrupleOut {
                w: reals(&s.q.w),
                x: reals(&s.q.x),
                y: reals(&s.q.y),
                z: reals(&s.q.z),
                signs: signs_to_string(&s.q.signs),
            },
            orbit_size,
            label: None,
        }
    }

    pub fn from_member(m: &OrbitMember) -> Self {
        let mut out = Self::new(&m.solution, 0);
        out.label = Some(m.label.clone());
        out
    }
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct ClusterOut {
    pub sigma: Real,
    pub spread: Real,
    pub members: usize,
    pub trivial: bool,
    pub patterns: Vec<String>,
    /// Indices into the report's solution list.
    pub solutions: Vec<usize>,
}

impl ClusterOut {
    pub fn new(c: &Cluster, first: usize) -> Self {
        Self {
            sigma: Real(c.sigma),
            spread: Real(c.spread),
            members: c.members,
            trivial: c.trivial,
            patterns: c.patterns.clone(),
            solutions: (first..first + c.representatives.len()).collect(),
        }
    }
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct ExpectedOut {
    pub sigma: Real,
    pub description: String,
    pub found: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, DeriveSerialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct CheckOut {
    pub name: String,
    pub status: Status,
    pub max_defect: Option<Real>,
    pub tolerance: Option<Real>,
    pub detail: String,
}

impl CheckOut {
    pub fn measured(name: &str, defect: f64, tol: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            status: if defect <= tol { Status::Pass } else { Status::Fail },
            max_defect: Some(Real(defect)),
            tolerance: Some(Real(tol)),
            detail: detail.into(),
        }
    }

    pub fn skip(name: &str, why: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            status: Status::Skip,
            max_defect: None,
            tolerance: None,
            detail: why.into(),
        }
    }
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: String,
    pub timestamp_unix: Option<u64>,
    pub rng_seed: u64,
    pub config: ConfigEcho,
    pub curvature_source: Option<String>,
    pub invariants: Option<InvariantsOut>,
    pub clusters: Vec<ClusterOut>,
    pub solutions: Vec<SolutionOut>,
    pub expected: Vec<ExpectedOut>,
    pub checks: Vec<CheckOut>,
    pub search_not_enumeration: bool,
    pub catalog: Vec<CatalogOut>,
}

#[derive(Debug, Clone, DeriveSerialize)]
pub struct CatalogOut {
    pub id: String,
    pub description: String,
    pub parameters: Vec<(String, Real)>,
}

impl Report {
    pub fn new(command: &str, config: ConfigEcho, deterministic: bool) -> Self {
        let timestamp_unix = if deterministic {
            None
        } else {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs())
        };
        Self {
            schema: SCHEMA,
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            timestamp_unix,
            rng_seed: config.seed,
            config,
            curvature_source: None,
            invariants: None,
            clusters: Vec::new(),
            solutions: Vec::new(),
            expected: Vec::new(),
            checks: Vec::new(),
            search_not_enumeration: false,
            catalog: Vec::new(),
        }
    }

    pub fn failed_checks(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per solution cluster for `svp`; name/value rows otherwise.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.catalog.is_empty() {
            w.write_record(["id", "description", "parameters"])?;
            for c in &self.catalog {
                let params: Vec<String> = c.parameters.iter().map(|(k, v)| format!("{k}={}", fmt_real(v.0))).collect();
                w.write_record([c.id.as_str(), c.description.as_str(), &params.join(";")])?;
            }
        } else if !self.clusters.is_empty() {
            w.write_record([
                "cluster",
                "sigma",
                "spread",
                "members",
                "trivial",
                "patterns",
                "representatives",
                "best_residual",
                "origin",
            ])?;
            for (i, c) in self.clusters.iter().enumerate() {
                let reps: Vec<&SolutionOut> = c.solutions.iter().filter_map(|i| self.solutions.get(*i)).collect();
                let best = reps.iter().map(|r| r.residual.0).fold(f64::INFINITY, f64::min);
                let origin = reps.first().map(|r| r.origin.clone()).unwrap_or_default();
                w.write_record([
                    i.to_string(),
                    fmt_real(c.sigma.0),
                    fmt_real(c.spread.0),
                    c.members.to_string(),
                    c.trivial.to_string(),
                    c.patterns.join(";"),
                    reps.len().to_string(),
                    fmt_real(best),
                    origin,
                ])?;
            }
        } else if !self.checks.is_empty() {
            w.write_record(["check", "status", "max_defect", "tolerance", "detail"])?;
            for c in &self.checks {
                w.write_record([
                    c.name.clone(),
                    format!("{:?}", c.status).to_lowercase(),
                    c.max_defect.map(|d| fmt_real(d.0)).unwrap_or_default(),
                    c.tolerance.map(|d| fmt_real(d.0)).unwrap_or_default(),
                    c.detail.clone(),
                ])?;
            }
        } else if !self.solutions.is_empty() {
            w.write_record(["label", "sigma", "residual", "origin", "signs"])?;
            for s in &self.solutions {
                w.write_record([
                    s.label.clone().unwrap_or_default(),
                    fmt_real(s.sigma.0),
                    fmt_real(s.residual.0),
                    s.origin.clone(),
                    s.quadruple.signs.clone(),
                ])?;
            }
        } else if let Some(inv) = &self.invariants {
            w.write_record(["name", "value"])?;
            for (k, v) in invariant_rows(inv) {
                w.write_record([k, v])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.config.metric.is_empty() {
            let point: Vec<f64> = self.config.point.iter().map(|r| r.0).collect();
            let _ = writeln!(out, "{} on {} at {:?}", self.command, self.config.metric, point);
        }
        if let Some(src) = &self.curvature_source {
            let _ = writeln!(out, "curvature: {src}");
        }
        if let Some(inv) = &self.invariants {
            for (k, v) in invariant_rows(inv) {
                let _ = writeln!(out, "  {k:<16} {v}");
            }
        }
        if !self.clusters.is_empty() {
            let _ = writeln!(out, "singular value clusters:");
            for c in &self.clusters {
                let _ = writeln!(
                    out,
                    "  sigma = {}  members {}  representatives {}{}  [{}]",
                    fmt_real(c.sigma.0),
                    c.members,
                    c.solutions.len(),
                    if c.trivial { "  (trivial family)" } else { "" },
                    c.patterns.join(" ")
                );
            }
            if self.search_not_enumeration {
                let _ = writeln!(out, "  (search result, not a certified enumeration)");
            }
        }
        if self.clusters.is_empty() && !self.solutions.is_empty() {
            for s in &self.solutions {
                let _ = writeln!(
                    out,
                    "  {:<20} sigma = {}  residual = {}",
                    s.label.clone().unwrap_or_else(|| s.origin.clone()),
                    fmt_real(s.sigma.0),
                    fmt_real(s.residual.0)
                );
            }
        }
        for e in &self.expected {
            let _ = writeln!(
                out,
                "expected sigma {} ({}): {}",
                fmt_real(e.sigma.0),
                e.description,
                if e.found { "found" } else { "not found" }
            );
        }
        for c in &self.checks {
            let defect = c.max_defect.map(|d| fmt_real(d.0)).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "  {:<20} {:<4} {:>24}  {}", c.name, format!("{:?}", c.status).to_uppercase(), defect, c.detail);
        }
        for c in &self.catalog {
            let params: Vec<String> = c.parameters.iter().map(|(k, v)| format!("{k}={}", v.0)).collect();
            let _ = writeln!(out, "{:<14} {}  [{}]", c.id, c.description, params.join(", "));
        }
        out
    }
}

fn invariant_rows(inv: &InvariantsOut) -> Vec<(String, String)> {
    let mut rows = vec![
        ("ricci_scalar".to_string(), fmt_real(inv.ricci_scalar.0)),
        ("kretschmann".to_string(), fmt_real(inv.kretschmann.0)),
    ];
    if let Some(w) = inv.weyl_square {
        rows.push(("weyl_square".into(), fmt_real(w.0)));
    }
    if let Some(w) = inv.weyl_norm {
        rows.push(("weyl_norm".into(), fmt_real(w.0)));
    }
    if let Some(psi) = &inv.np_scalars {
        for (k, z) in psi.iter().enumerate() {
            rows.push((format!("psi{k}_re"), fmt_real(z.re.0)));
            rows.push((format!("psi{k}_im"), fmt_real(z.im.0)));
        }
    }
    if let Some(i) = &inv.invariant_i {
        rows.push(("invariant_i_re".into(), fmt_real(i.re.0)));
        rows.push(("invariant_i_im".into(), fmt_real(i.im.0)));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [1.0 / 27.0, -0.1, 1e-300, 123456.789, 0.0, f64::MIN_POSITIVE] {
            let s = serde_json::to_string(&Real(v)).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back, v, "{s}");
        }
        assert_eq!(serde_json::to_string(&Real(f64::NAN)).unwrap(), "null");
    }
}
