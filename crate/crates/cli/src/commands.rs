use std::fs;
use std::path::Path;

use riemann_svp::algebra::invariants as compute_invariants;
use riemann_svp::catalog::{self, IDS};
use riemann_svp::geometry::{
    riemann, riemann_with, signature_matches, verify_tensor_symmetries, CurvaturePath, CurvatureSource,
};
use riemann_svp::svp::{
    det_s_defect, lorentz_mixed_sign_check, meigen_reduce, multistart, orbit as orbit_of,
    proposition1_defect, ricci_quadratic_defect, schwarzschild_reduced_solve, sigma_equals_r_defect,
    space_form_identities, trivial_solution, MultistartReport, ALL_PLUS, SIGMA_ZERO_TOL,
};
use riemann_svp::svp::multistart::cluster_solutions;
use riemann_svp::svp::reduced::kerr_reduced_at;
use riemann_svp::{
    CatalogEntry, CatalogKind, CurvatureData, DiffOptions, Error, Params, Point, SignPattern, SolverConfig,
    SvpSolution,
};
use thiserror::Error as ThisError;

use crate::args::{CommonArgs, Method, OrbitArgs, OutputArgs, OutputFormat, SolveArgs};
use crate::report::{
    CatalogOut, CheckOut, ClusterOut, ConfigEcho, ExpectedOut, InvariantsOut, Real, Report, SolutionOut,
};

/// Residual bound for solutions whose orbit is listed.
const ORBIT_INPUT_TOL: f64 = 1e-8;
/// Largest residual allowed on any orbit member.
const ORBIT_CLOSURE_TOL: f64 = 1e-9;
const ANALYTIC_SYMMETRY_TOL: f64 = 1e-10;
const NUMERIC_SYMMETRY_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-8;
const EXPECTED_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    NoConvergence(String),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NoConvergence(_) => 4,
            CliError::VerifyFailed(_) => 5,
            CliError::Io(_) | CliError::Serialize(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidInput(_)
            | Error::Parse { .. }
            | Error::DimensionMismatch { .. }
            | Error::DimensionTooSmall { .. }
            | Error::BadCase(_)
            | Error::WrongSignature(_) => CliError::Config(msg),
            Error::OutOfDomain(_)
            | Error::SingularMetric { .. }
            | Error::NonFinite(_)
            | Error::DifferentiationFailure { .. }
            | Error::BadTetrad { .. } => CliError::Domain(msg),
            Error::NoConvergence { .. } | Error::SingularJacobian => CliError::NoConvergence(msg),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_params(s: Option<&str>) -> CliResult<Params> {
    let mut out = Params::new();
    let Some(s) = s else { return Ok(out) };
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("parameter '{item}' is not of the form k=v")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("parameter '{}' has a non-numeric value", k.trim())))?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("parameter '{}' is not finite", k.trim())));
        }
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn parse_point(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("point coordinate '{}' is not a number", t.trim())))
        })
        .collect()
}

fn load_entry(metric: &str, params: &Params) -> CliResult<CatalogEntry> {
    if IDS.contains(&metric) {
        return Ok(catalog::by_id(metric, params)?);
    }
    let path = Path::new(metric);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        return Ok(riemann_svp::userdef::parse_metric(&text, params)?);
    }
    Err(CliError::Config(format!(
        "unknown metric '{metric}': not a catalog id ({}) or a readable file",
        IDS.join(", ")
    )))
}

/// Resolved metric, point and curvature.
struct Setup {
    entry: CatalogEntry,
    point: Point,
    cd: CurvatureData,
    echo: ConfigEcho,
}

fn setup(a: &CommonArgs, solve: Option<&SolveArgs>) -> CliResult<Setup> {
    let params = parse_params(a.params.as_deref())?;
    let entry = load_entry(&a.metric, &params)?;
    let point = match &a.point {
        Some(s) => Point::new(parse_point(s)?).map_err(|e| CliError::Config(e.to_string()))?,
        None => entry.default_point.clone(),
    };
    entry.check_point(&point)?;
    let cd = riemann(&entry.spec, &point)?;
    let echo = ConfigEcho {
        metric: a.metric.clone(),
        params: entry.params.iter().map(|(k, v)| (k.clone(), Real(*v))).collect(),
        point: point.coords().iter().copied().map(Real).collect(),
        signs: solve.map(|s| s.signs.clone()).unwrap_or_default(),
        tol: Real(solve.map(|s| s.tol).unwrap_or(f64::NAN)),
        starts: solve.map(|s| s.starts).unwrap_or(0),
        seed: solve.map(|s| s.seed).unwrap_or(0),
        method: solve.map(|s| s.method.name().to_string()).unwrap_or_default(),
    };
    Ok(Setup {
        entry,
        point,
        cd,
        echo,
    })
}

fn source_name(s: CurvatureSource) -> &'static str {
    match s {
        CurvatureSource::Analytic => "analytic",
        CurvatureSource::Numeric => "numeric",
        CurvatureSource::Algebraic => "algebraic",
    }
}

fn solver_config(a: &SolveArgs) -> CliResult<SolverConfig> {
    let sign_pattern: SignPattern = a.signs.parse()?;
    let cfg = SolverConfig {
        tol: a.tol,
        n_starts: a.starts,
        sign_pattern,
        rng_seed: a.seed,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit(report: &Report, out: &OutputArgs) -> CliResult<()> {
    let text = match out.output {
        OutputFormat::Json => report.to_json().map_err(|e| CliError::Serialize(e.to_string()))?,
        OutputFormat::Csv => report.to_csv().map_err(|e| CliError::Serialize(e.to_string()))?,
        OutputFormat::Text => report.to_text(),
    };
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn invariants_out(s: &Setup) -> CliResult<InvariantsOut> {
    let tetrad = s.entry.tetrad(&s.point).transpose()?;
    let inv = compute_invariants(&s.cd, tetrad.as_ref())?;
    Ok(InvariantsOut::from(&inv))
}

pub fn invariants(a: &CommonArgs) -> CliResult<()> {
    let s = setup(a, None)?;
    let mut report = Report::new("invariants", s.echo.clone(), a.output.deterministic);
    report.curvature_source = Some(source_name(s.cd.source).to_string());
    report.invariants = Some(invariants_out(&s)?);
    emit(&report, &a.output)
}

fn uses_ansatz(kind: &CatalogKind) -> bool {
    matches!(kind, CatalogKind::Schwarzschild { .. } | CatalogKind::Kerr { .. })
}

/// Solutions from the reduced ansatz, with the trivial family added.
fn reduced(s: &Setup, cfg: &SolverConfig) -> CliResult<MultistartReport> {
    let c = s.point.coords();
    let sol = match s.entry.kind {
        CatalogKind::Schwarzschild { m } => schwarzschild_reduced_solve(m, c[1], c[2])?,
        CatalogKind::Kerr { .. } => {
            let tetrad = s
                .entry
                .tetrad(&s.point)
                .ok_or_else(|| CliError::Config("metric has no tetrad".into()))??;
            kerr_reduced_at(&s.cd, &tetrad, cfg)?
        }
        _ => return Ok(meigen_reduce(&s.cd, cfg)?),
    };
    let mut sols = vec![sol];
    sols.extend(trivial_solution(&s.cd, ALL_PLUS));
    Ok(MultistartReport {
        clusters: cluster_solutions(sols, &s.cd, cfg.cluster_eps),
        attempts: 1,
        converged: 1,
        skipped_patterns: Vec::new(),
        search_not_enumeration: false,
    })
}

fn solve(s: &Setup, a: &SolveArgs, cfg: &SolverConfig) -> CliResult<MultistartReport> {
    let use_reduced = match a.method {
        Method::Auto => uses_ansatz(&s.entry.kind),
        Method::Multistart => false,
        Method::Reduced => true,
    };
    let result = if use_reduced { reduced(s, cfg)? } else { multistart(&s.cd, cfg)? };
    if result.converged == 0 && result.attempts > 0 {
        return Err(CliError::NoConvergence(format!(
            "none of {} starts converged",
            result.attempts
        )));
    }
    Ok(result)
}

fn orbit_size(sol: &SvpSolution, cd: &CurvatureData) -> usize {
    orbit_of(sol, cd, ORBIT_INPUT_TOL).map(|o| o.len()).unwrap_or(0)
}

fn fill_solutions(report: &mut Report, result: &MultistartReport, cd: &CurvatureData) {
    for c in &result.clusters {
        report.clusters.push(ClusterOut::new(c, report.solutions.len()));
        for sol in &c.representatives {
            report.solutions.push(SolutionOut::new(sol, orbit_size(sol, cd)));
        }
    }
    report.search_not_enumeration = result.search_not_enumeration;
}

fn fill_expected(report: &mut Report, s: &Setup, result: &MultistartReport) {
    if let Some(expected) = s.entry.expected(&s.point) {
        let sigmas = result.sigmas();
        report.expected = expected
            .into_iter()
            .map(|e| ExpectedOut {
                found: sigmas.iter().any(|x| (x - e.sigma).abs() < EXPECTED_MATCH_TOL),
                sigma: Real(e.sigma),
                description: e.description,
            })
            .collect();
    }
}

pub fn svp(a: &SolveArgs) -> CliResult<()> {
    let cfg = solver_config(a)?;
    let s = setup(&a.common, Some(a))?;
    let result = solve(&s, a, &cfg)?;
    let mut report = Report::new("svp", s.echo.clone(), a.common.output.deterministic);
    report.curvature_source = Some(source_name(s.cd.source).to_string());
    fill_solutions(&mut report, &result, &s.cd);
    fill_expected(&mut report, &s, &result);
    emit(&report, &a.common.output)
}

pub fn orbit(a: &OrbitArgs) -> CliResult<()> {
    let sa = &a.solve;
    let cfg = solver_config(sa)?;
    let s = setup(&sa.common, Some(sa))?;
    let result = solve(&s, sa, &cfg)?;
    let cluster = match a.cluster {
        Some(i) => result.clusters.get(i).ok_or_else(|| {
            CliError::Config(format!("cluster {i} out of range ({} found)", result.clusters.len()))
        })?,
        None => result
            .nonzero(SIGMA_ZERO_TOL)
            .next()
            .or_else(|| result.clusters.first())
            .ok_or_else(|| CliError::NoConvergence("no solutions found".into()))?,
    };
    let sol = cluster
        .representatives
        .first()
        .ok_or_else(|| CliError::NoConvergence("empty cluster".into()))?;
    let members = orbit_of(sol, &s.cd, ORBIT_INPUT_TOL.max(cfg.tol))?;
    let mut report = Report::new("orbit", s.echo.clone(), sa.common.output.deterministic);
    report.curvature_source = Some(source_name(s.cd.source).to_string());
    let worst = members.iter().map(|m| m.solution.residual).fold(0.0, f64::max);
    report.solutions = members.iter().map(SolutionOut::from_member).collect();
    report.checks.push(CheckOut::measured(
        "orbit-closure",
        worst,
        ORBIT_CLOSURE_TOL,
        format!("{} members", members.len()),
    ));
    emit(&report, &sa.common.output)
}

pub fn catalog_list(a: &OutputArgs) -> CliResult<()> {
    let echo = ConfigEcho {
        metric: String::new(),
        params: Vec::new(),
        point: Vec::new(),
        signs: String::new(),
        tol: Real(f64::NAN),
        starts: 0,
        seed: 0,
        method: String::new(),
    };
    let mut report = Report::new("catalog list", echo, a.deterministic);
    report.catalog = IDS
        .iter()
        .map(|id| CatalogOut {
            id: id.to_string(),
            description: catalog::describe(id).to_string(),
            parameters: catalog::parameters(id).iter().map(|(k, v)| (k.to_string(), Real(*v))).collect(),
        })
        .collect();
    emit(&report, a)
}

/// Largest value of `f` over the solutions it applies to, or a skip.
fn over_solutions<'a>(
    name: &str,
    tol: f64,
    sols: impl Iterator<Item = &'a SvpSolution>,
    f: impl Fn(&SvpSolution) -> f64,
    what: &str,
) -> CheckOut {
    let defects: Vec<f64> = sols.map(f).collect();
    if defects.is_empty() {
        return CheckOut::skip(name, format!("no {what}"));
    }
    let worst = defects.iter().copied().fold(0.0, f64::max);
    CheckOut::measured(name, worst, tol, format!("{} {what}", defects.len()))
}

fn nonzero(s: &SvpSolution) -> bool {
    s.sigma.abs() > SIGMA_ZERO_TOL
}

pub fn verify(a: &SolveArgs) -> CliResult<()> {
    let cfg = solver_config(a)?;
    let s = setup(&a.common, Some(a))?;
    let cd = &s.cd;
    let mut checks = Vec::new();

    let sym_tol = match cd.source {
        CurvatureSource::Numeric => NUMERIC_SYMMETRY_TOL,
        _ => ANALYTIC_SYMMETRY_TOL,
    };
    let sym = verify_tensor_symmetries(cd, sym_tol);
    let tensor_defect = sym.antisymmetry_first.max(sym.antisymmetry_last).max(sym.pair_symmetry) / sym.scale;
    checks.push(CheckOut::measured(
        "symmetries",
        tensor_defect.max(sym.metric_asymmetry),
        sym_tol,
        format!(
            "relative to scale {:.3e}; metric asymmetry {:.3e}",
            sym.scale, sym.metric_asymmetry
        ),
    ));
    checks.push(CheckOut::measured(
        "bianchi",
        sym.bianchi / sym.scale,
        sym_tol,
        format!("relative to scale {:.3e}", sym.scale),
    ));
    let sig_ok = signature_matches(&s.entry.spec, &s.point)?;
    checks.push(CheckOut::measured(
        "signature",
        if sig_ok { 0.0 } else { 1.0 },
        0.0,
        format!("declared {}", s.entry.spec.signature),
    ));
    if s.entry.spec.analytic_riemann.is_some() && !s.entry.algebraic {
        let numeric = riemann_with(&s.entry.spec, &s.point, CurvaturePath::Numeric, &DiffOptions::default())?;
        let analytic = riemann_with(&s.entry.spec, &s.point, CurvaturePath::Analytic, &DiffOptions::default())?;
        let scale = analytic.riemann_lowered.max_abs().max(1.0);
        let diff = numeric.riemann_lowered.max_abs_diff(&analytic.riemann_lowered) / scale;
        checks.push(CheckOut::measured(
            "numeric-agreement",
            diff,
            NUMERIC_SYMMETRY_TOL,
            "finite differences vs closed form",
        ));
    } else {
        checks.push(CheckOut::skip("numeric-agreement", "no independent closed form"));
    }

    let mut result = solve(&s, a, &cfg)?;
    if uses_ansatz(&s.entry.kind) && a.method != Method::Multistart {
        let extra = multistart(cd, &cfg)?;
        let mut sols: Vec<SvpSolution> = result.all_solutions().cloned().collect();
        sols.extend(extra.all_solutions().cloned());
        result.clusters = cluster_solutions(sols, cd, cfg.cluster_eps);
        result.search_not_enumeration = true;
    }
    let sols: Vec<&SvpSolution> = result.all_solutions().collect();
    let all_plus = |x: &&&SvpSolution| x.q.signs == ALL_PLUS;

    checks.push(over_solutions(
        "prop1",
        IDENTITY_TOL,
        sols.iter().copied().filter(|x| nonzero(x)),
        |x| proposition1_defect(x, cd),
        "nonzero-sigma solutions",
    ));

    let orbit_defects: Vec<f64> = sols
        .iter()
        .filter_map(|x| orbit_of(x, cd, ORBIT_INPUT_TOL.max(cfg.tol)).ok())
        .map(|members| members.iter().map(|m| m.solution.residual).fold(0.0, f64::max))
        .collect();
    checks.push(if orbit_defects.is_empty() {
        CheckOut::skip("orbit-closure", "no converged solutions")
    } else {
        CheckOut::measured(
            "orbit-closure",
            orbit_defects.iter().copied().fold(0.0, f64::max),
            ORBIT_CLOSURE_TOL,
            format!("{} orbits", orbit_defects.len()),
        )
    });

    if cd.signature.is_lorentzian() {
        let mixed_cfg = SolverConfig {
            sign_pattern: SignPattern::Fixed([1, 1, 1, -1]),
            ..cfg.clone()
        };
        let r = lorentz_mixed_sign_check(cd, &mixed_cfg, [1, 1, 1, -1])?;
        checks.push(CheckOut::measured(
            "remark2-lorentz",
            r.max_abs_sigma,
            SIGMA_ZERO_TOL,
            format!("pattern {}: {} of {} starts converged", r.pattern, r.converged, r.starts),
        ));
    } else {
        checks.push(CheckOut::skip("remark2-lorentz", format!("signature {} is not Lorentz", cd.signature)));
    }

    checks.push(if matches!(s.entry.kind, CatalogKind::Schwarzschild { .. }) {
        over_solutions(
            "det-S",
            IDENTITY_TOL,
            sols.iter().copied(),
            |x| det_s_defect(&x.q.y, &x.q.z),
            "solutions",
        )
    } else {
        CheckOut::skip("det-S", "schwarzschild only")
    });

    let space_form = match s.entry.kind {
        CatalogKind::SpaceForm { kappa, n } => Some((kappa, n)),
        _ => None,
    };
    checks.push(match space_form {
        Some((kappa, _)) => over_solutions(
            "example2-identities",
            IDENTITY_TOL,
            sols.iter().filter(all_plus).copied().filter(|x| nonzero(x)),
            |x| space_form_identities(x, cd, kappa).into_iter().fold(0.0, f64::max),
            "nonzero-sigma solutions",
        ),
        None => CheckOut::skip("example2-identities", "space forms only"),
    });
    checks.push(match space_form {
        Some((_, 4)) => over_solutions(
            "example3-byproduct",
            IDENTITY_TOL,
            sols.iter().filter(all_plus).copied().filter(|x| nonzero(x)),
            |x| ricci_quadratic_defect(x, cd),
            "nonzero-sigma solutions",
        ),
        _ => CheckOut::skip("example3-byproduct", "four-dimensional space forms only"),
    });
    checks.push(over_solutions(
        "sigma-equals-R",
        IDENTITY_TOL,
        sols.iter().filter(all_plus).copied(),
        |x| sigma_equals_r_defect(x, cd),
        "all-plus solutions",
    ));

    if let Some(expected) = s.entry.expected(&s.point) {
        let sigmas = result.sigmas();
        let worst = expected
            .iter()
            .map(|e| sigmas.iter().map(|x| (x - e.sigma).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        checks.push(CheckOut::measured(
            "expected-sigma",
            worst,
            EXPECTED_MATCH_TOL,
            format!("{} closed-form values", expected.len()),
        ));
    }

    let mut report = Report::new("verify", s.echo.clone(), a.common.output.deterministic);
    report.curvature_source = Some(source_name(cd.source).to_string());
    fill_solutions(&mut report, &result, cd);
    fill_expected(&mut report, &s, &result);
    report.checks = checks;
    emit(&report, &a.common.output)?;
    match report.failed_checks() {
        0 => Ok(()),
        n => Err(CliError::VerifyFailed(n)),
    }
}
