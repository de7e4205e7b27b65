//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::io::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use riemann_svp::algebra::{invariant_i, kretschmann, np_scalars};
use riemann_svp::catalog::{self, kerr_psi2};
use riemann_svp::geometry::{riemann, riemann_with, verify_tensor_symmetries, CurvaturePath, CurvatureSource};
use riemann_svp::svp::reduced::kerr_reduced_at;
use riemann_svp::svp::{
    closed_form_sigma, det_s_defect, kerr_reduced_solve, lorentz_mixed_sign_check, multistart, orbit,
    proposition1_defect, ricci_quadratic_defect, schwarzschild_reduced_solve, space_form_identities,
    ClosedFormCase, MultistartReport, ALL_PLUS, SIGMA_ZERO_TOL,
};
use riemann_svp::{CatalogEntry, CatalogKind, CurvatureData, DiffOptions, Point, SignPattern, SolverConfig, SvpSolution};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> f64) -> f64 {
    items.into_iter().map(f).fold(0.0, f64::max)
}

fn curvature(entry: &CatalogEntry, p: &Point) -> Result<CurvatureData, String> {
    riemann(&entry.spec, p).map_err(|e| format!("{}: {e}", entry.id()))
}

fn search(cd: &CurvatureData, cfg: &SolverConfig) -> Result<MultistartReport, String> {
    multistart(cd, cfg).map_err(|e| e.to_string())
}

fn sphere() -> Outcome {
    let start = Instant::now();
    let entry = catalog::sphere2();
    let cd = curvature(&entry, &Point::new(vec![PI / 3.0, 0.0]).unwrap())?;
    let report = search(&cd, &SolverConfig::default())?;
    let elapsed = start.elapsed();
    let one = report
        .clusters
        .iter()
        .find(|c| (c.sigma - 1.0).abs() < 1e-8)
        .ok_or_else(|| format!("no sigma = 1 cluster in {:?}", report.sigmas()))?;
    let best = one.representatives.iter().map(|s| s.residual).fold(f64::INFINITY, f64::min);
    ensure(best < 1e-10, || format!("sigma = 1 residual {best:e}"))?;
    ensure(
        report.clusters.iter().any(|c| c.trivial && c.sigma.abs() < 1e-8),
        || "trivial sigma = 0 family missing".into(),
    )?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "sigma = {:.15}, residual {best:.1e}, clusters {:?}, {elapsed:.2?}",
        one.sigma,
        report.sigmas()
    ))
}

fn space_forms() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst = 0.0_f64;
    for n in [3, 4] {
        for kappa in [-2.0, -0.5, 0.5, 1.0, 2.0] {
            let entry = catalog::space_form(kappa, n).map_err(|e| e.to_string())?;
            let cd = curvature(&entry, &entry.default_point)?;
            let report = search(&cd, &cfg)?;
            let nonzero: Vec<f64> = report.nonzero(SIGMA_ZERO_TOL).map(|c| c.sigma).collect();
            ensure(!nonzero.is_empty(), || format!("kappa {kappa}, n {n}: no nonzero cluster"))?;
            for s in &nonzero {
                let d = (s - kappa.abs()).abs();
                worst = worst.max(d);
                ensure(d < 1e-8, || format!("kappa {kappa}, n {n}: sigma {s} vs |kappa|"))?;
            }
        }
        let flat = catalog::space_form(0.0, n).map_err(|e| e.to_string())?;
        let cd = curvature(&flat, &flat.default_point)?;
        let report = search(&cd, &cfg)?;
        ensure(report.nonzero(SIGMA_ZERO_TOL).next().is_none(), || {
            format!("kappa 0, n {n}: nonzero clusters {:?}", report.sigmas())
        })?;
    }
    Ok(format!("max |sigma - |kappa|| = {worst:.1e}; kappa = 0 gives only sigma = 0"))
}

fn schwarzschild() -> Outcome {
    let mut worst = [0.0_f64; 3];
    for m in [1.0, 2.0] {
        for r in [3.0 * m, 5.0 * m, 10.0 * m] {
            let theta = PI / 3.0;
            let sol = schwarzschild_reduced_solve(m, r, theta).map_err(|e| e.to_string())?;
            let entry = catalog::schwarzschild(m).map_err(|e| e.to_string())?;
            let cd = curvature(&entry, &Point::new(vec![0.0, r, theta, 0.0]).unwrap())?;
            let k1 = kretschmann(&cd);
            let k1_exact = 48.0 * m * m / r.powi(6);
            let d = [
                (sol.sigma - m / r.powi(3)).abs(),
                (k1 - k1_exact).abs() / k1_exact,
                (sol.sigma - (k1 / 48.0).sqrt()).abs(),
            ];
            for (w, v) in worst.iter_mut().zip(d) {
                *w = w.max(v);
            }
            ensure(d.iter().all(|v| *v < 1e-10), || format!("M {m}, r {r}: defects {d:?}"))?;
        }
    }
    Ok(format!(
        "|sigma - M/r^3| {:.1e}, K1 rel {:.1e}, |sigma - sqrt(K1/48)| {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn kerr() -> Outcome {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut other, mut psi2_err, mut sigma_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    for a in [0.3, 0.5, 0.9] {
        let entry = catalog::kerr(1.0, a).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let p = entry.sample_point(&mut rng);
            let (r, theta) = (p.coords()[1], p.coords()[2]);
            let cd = curvature(&entry, &p)?;
            let tetrad = entry.tetrad(&p).unwrap().map_err(|e| e.to_string())?;
            let psi = np_scalars(&cd, &tetrad).map_err(|e| e.to_string())?;
            let o = [0, 1, 3, 4].iter().map(|k| psi[*k].norm()).fold(0.0, f64::max);
            let e2 = (psi[2] - kerr_psi2(1.0, a, r, theta)).norm();
            let sol = kerr_reduced_at(&cd, &tetrad, &cfg).map_err(|e| e.to_string())?;
            let i = invariant_i(&psi);
            let es = (sol.sigma - ((i.norm() + i.re) / 6.0).sqrt()).abs();
            other = other.max(o);
            psi2_err = psi2_err.max(e2);
            sigma_err = sigma_err.max(es);
            ensure(o < 1e-8 && e2 < 1e-8 && es < 1e-8, || {
                format!("a {a}, r {r}, theta {theta}: |psi_0134| {o:e}, psi2 {e2:e}, sigma {es:e}")
            })?;
        }
    }
    let mut limit = 0.0_f64;
    for a in [0.0, 1e-6] {
        for m in [1.0, 2.0] {
            for r in [3.0 * m, 5.0 * m, 10.0 * m] {
                let sol = kerr_reduced_solve(m, a, r, PI / 3.0).map_err(|e| e.to_string())?;
                let d = (sol.sigma - m / r.powi(3)).abs();
                limit = limit.max(d);
                ensure(d < 1e-8, || format!("a {a}, M {m}, r {r}: sigma {} vs M/r^3", sol.sigma))?;
            }
        }
    }
    Ok(format!(
        "|psi_0,1,3,4| {other:.1e}, psi2 {psi2_err:.1e}, sigma {sigma_err:.1e}, a -> 0 {limit:.1e}"
    ))
}

fn closed_forms() -> Outcome {
    let mut worst = [0.0_f64; 3];
    for n in [3usize, 4, 5] {
        let nf = n as f64;
        let (k_e, r_s) = (nf - 1.0, nf * (nf - 1.0));
        let case3 = closed_form_sigma(ClosedFormCase::Einstein {
            kappa: k_e,
            ricci_scalar: r_s,
            n,
        })
        .map_err(|e| e.to_string())?;
        let case2 = closed_form_sigma(ClosedFormCase::RicciEigenpairs {
            lambda: k_e,
            mu: k_e,
            ricci_scalar: r_s,
            n,
        })
        .map_err(|e| e.to_string())?;
        let entry = catalog::space_form(1.0, n).map_err(|e| e.to_string())?;
        let cd = curvature(&entry, &entry.default_point)?;
        let report = search(&cd, &SolverConfig::default())?;
        let found = report
            .nonzero(SIGMA_ZERO_TOL)
            .map(|c| c.sigma)
            .next()
            .ok_or_else(|| format!("S^{n}: no nonzero cluster"))?;
        let d = [(case3 - 1.0).abs(), (case3 - found).abs(), (case2 - case3).abs()];
        ensure(d[0] < 1e-12 && d[1] < 1e-8 && d[2] < 1e-12, || format!("S^{n}: defects {d:?}"))?;
        for (w, v) in worst.iter_mut().zip(d) {
            *w = w.max(v);
        }
    }
    Ok(format!(
        "|case3 - 1| {:.1e}, |case3 - multistart| {:.1e}, |case2 - case3| {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

#[derive(Default)]
struct Suite {
    symmetry: f64,
    prop1: f64,
    orbit: f64,
    mixed: f64,
    example2: f64,
    example3: f64,
    det_s: f64,
    points: usize,
}

impl Suite {
    fn fold(v: &mut f64, x: f64) {
        *v = v.max(x);
    }
}

fn suite_entries() -> Vec<CatalogEntry> {
    let mut out = vec![catalog::sphere2()];
    for (kappa, n) in [(1.0, 3), (-0.5, 3), (2.0, 4), (-2.0, 4)] {
        out.push(catalog::space_form(kappa, n).unwrap());
    }
    out.push(catalog::euclidean(4).unwrap());
    out.push(catalog::minkowski());
    out.push(catalog::schwarzschild(1.0).unwrap());
    out.push(catalog::kerr(1.0, 0.5).unwrap());
    out
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let cfg = SolverConfig {
        n_starts: 60,
        ..SolverConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut s = Suite::default();
    for entry in suite_entries() {
        let id = entry.id().to_string();
        for _ in 0..20 {
            let p = entry.sample_point(&mut rng);
            let cd = curvature(&entry, &p)?;
            let tol = match cd.source {
                CurvatureSource::Numeric => 1e-6,
                _ => 1e-10,
            };
            let sym = verify_tensor_symmetries(&cd, tol);
            let rel = sym.max_defect() / sym.scale;
            Suite::fold(&mut s.symmetry, rel);
            ensure(sym.passed, || format!("{id} at {:?}: symmetry defect {rel:e}", p.coords()))?;

            let mut sols: Vec<SvpSolution> = search(&cd, &cfg)?.all_solutions().cloned().collect();
            match entry.kind {
                CatalogKind::Schwarzschild { m } => sols.push(
                    schwarzschild_reduced_solve(m, p.coords()[1], p.coords()[2]).map_err(|e| e.to_string())?,
                ),
                CatalogKind::Kerr { .. } => {
                    let tetrad = entry.tetrad(&p).unwrap().map_err(|e| e.to_string())?;
                    sols.push(kerr_reduced_at(&cd, &tetrad, &cfg).map_err(|e| e.to_string())?);
                }
                _ => {}
            }
            let nonzero: Vec<&SvpSolution> = sols.iter().filter(|x| x.sigma.abs() > SIGMA_ZERO_TOL).collect();

            let d = max_over(nonzero.iter(), |x| proposition1_defect(x, &cd));
            Suite::fold(&mut s.prop1, d);
            ensure(d < 1e-8, || format!("{id}: orthogonality defect {d:e}"))?;

            for x in &sols {
                let members = orbit(x, &cd, 1e-10).map_err(|e| format!("{id}: {e}"))?;
                let d = max_over(members.iter(), |m| m.solution.residual);
                Suite::fold(&mut s.orbit, d);
                ensure(d < 1e-9, || format!("{id}: orbit residual {d:e}"))?;
            }

            if cd.signature.is_lorentzian() {
                let mcfg = SolverConfig {
                    sign_pattern: SignPattern::Fixed([1, 1, 1, -1]),
                    ..cfg.clone()
                };
                let r = lorentz_mixed_sign_check(&cd, &mcfg, [1, 1, 1, -1]).map_err(|e| e.to_string())?;
                Suite::fold(&mut s.mixed, r.max_abs_sigma);
                ensure(r.max_abs_sigma < 1e-8, || format!("{id}: mixed-sign |sigma| {:e}", r.max_abs_sigma))?;
            }

            match entry.kind {
                CatalogKind::SpaceForm { kappa, n } => {
                    let plus: Vec<&&SvpSolution> = nonzero.iter().filter(|x| x.q.signs == ALL_PLUS).collect();
                    let d = max_over(plus.iter(), |x| {
                        space_form_identities(x, &cd, kappa).into_iter().fold(0.0, f64::max)
                    });
                    Suite::fold(&mut s.example2, d);
                    ensure(d < 1e-8, || format!("{id} kappa {kappa}: identities {d:e}"))?;
                    if n == 4 {
                        let d = max_over(plus.iter(), |x| ricci_quadratic_defect(x, &cd));
                        Suite::fold(&mut s.example3, d);
                        ensure(d < 1e-8, || format!("{id} kappa {kappa}: ricci quadratic {d:e}"))?;
                    }
                }
                CatalogKind::Schwarzschild { .. } => {
                    let d = max_over(sols.iter(), |x| det_s_defect(&x.q.y, &x.q.z));
                    Suite::fold(&mut s.det_s, d);
                    ensure(d < 1e-8, || format!("{id}: det S {d:e}"))?;
                }
                _ => {}
            }
            s.points += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} points: symmetry {:.1e}, prop1 {:.1e}, orbit {:.1e}, mixed {:.1e}, example2 {:.1e}, example3 {:.1e}, det S {:.1e}, {elapsed:.1?}",
        s.points, s.symmetry, s.prop1, s.orbit, s.mixed, s.example2, s.example3, s.det_s
    ))
}

fn numeric_vs_analytic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for m in [1.0, 2.0] {
        let entry = catalog::schwarzschild(m).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let p = entry.sample_point(&mut rng);
            let opts = DiffOptions::default();
            let num = riemann_with(&entry.spec, &p, CurvaturePath::Numeric, &opts).map_err(|e| e.to_string())?;
            let ana = riemann_with(&entry.spec, &p, CurvaturePath::Analytic, &opts).map_err(|e| e.to_string())?;
            let rel = num.riemann_mixed.max_abs_diff(&ana.riemann_mixed) / ana.riemann_mixed.max_abs();
            worst = worst.max(rel);
            ensure(rel < 1e-6, || format!("M {m} at {:?}: relative {rel:e}", p.coords()))?;
        }
    }
    Ok(format!("20 points, max relative difference {worst:.1e}"))
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_riemann-svp");
    let run = || {
        Command::new(bin)
            .args(["svp", "--metric", "sphere2", "--seed", "7", "--deterministic", "--output", "json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "svp run failed".into())?;
    ensure(a.stdout == b.stdout, || "json reports differ".into())?;

    let mut file = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    writeln!(
        file,
        "name: corrupted\ncoords: x, y\nsignature: ++\npoint: 0.3, 0.1\ng[x][x] = 1\ng[y][y] = 1 + x^2\ng[x][y] = 0.2*y\ng[y][x] = -0.2*y"
    )
    .map_err(|e| e.to_string())?;
    let out = Command::new(bin)
        .args(["verify", "--metric"])
        .arg(file.path())
        .args(["--output", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(5), || format!("corrupted verify exited {:?}", out.status.code()))?;
    Ok(format!("{} identical bytes; corrupted metric exits 5", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("sphere", sphere),
        ("space forms", space_forms),
        ("schwarzschild", schwarzschild),
        ("kerr", kerr),
        ("closed forms", closed_forms),
        ("property suites", property_suites),
        ("numeric vs analytic", numeric_vs_analytic),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
