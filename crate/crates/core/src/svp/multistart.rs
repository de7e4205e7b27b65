//! Parallel multistart search with σ clustering.
//!
//! Start `k` of sign pattern `p` draws from a ChaCha stream selected by
//! `p · n_starts + k` under the configured seed, so results do not depend on
//! thread scheduling. The search finds singular values; it does not certify
//! that all of them were found.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::orbit::orbit_unchecked;
use super::solve::{sample_start, solve_newton, trivial_solution};
use super::{signs_to_string, Quadruple, Signs, SolverConfig, SvpSolution};
use crate::error::{Error, Result};
use crate::geometry::CurvatureData;

/// Representatives kept per cluster.
pub const MAX_REPRESENTATIVES: usize = 8;

/// Vector distance under which two solutions count as the same orbit point.
pub const ORBIT_MATCH_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    /// Mean σ of the members.
    pub sigma: f64,
    /// `max σ − min σ` over the members.
    pub spread: f64,
    pub members: usize,
    /// Contains a zero-family solution with repeated vectors.
    pub trivial: bool,
    /// Sign patterns among the members, e.g. `"++++"`.
    pub patterns: Vec<String>,
    /// Orbit-distinct members, first found first.
    pub representatives: Vec<SvpSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultistartReport {
    pub clusters: Vec<Cluster>,
    pub attempts: usize,
    pub converged: usize,
    /// Patterns impossible in this signature.
    pub skipped_patterns: Vec<String>,
    /// Always true: the σ set is the result of a search.
    pub search_not_enumeration: bool,
}

impl MultistartReport {
    pub fn sigmas(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.sigma).collect()
    }

    /// Clusters with `|σ| ≥ eps`.
    pub fn nonzero(&self, eps: f64) -> impl Iterator<Item = &Cluster> {
        self.clusters.iter().filter(move |c| c.sigma.abs() >= eps)
    }

    pub fn all_solutions(&self) -> impl Iterator<Item = &SvpSolution> {
        self.clusters.iter().flat_map(|c| c.representatives.iter())
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs the multistart search on `cd`.
pub fn multistart(cd: &CurvatureData, cfg: &SolverConfig) -> Result<MultistartReport> {
    run(cd, cfg, solve_newton, trivial_solution)
}

/// Shared driver: `solver` maps a sampled start to a converged solution.
pub(crate) fn run<S, T>(cd: &CurvatureData, cfg: &SolverConfig, solver: S, trivial: T) -> Result<MultistartReport>
where
    S: Fn(&CurvatureData, &Quadruple, f64, &SolverConfig) -> Result<SvpSolution> + Sync,
    T: Fn(&CurvatureData, Signs) -> Option<SvpSolution>,
{
    cfg.validate()?;
    let patterns = cfg.sign_pattern.patterns();
    let mut solutions = Vec::new();
    let mut skipped = Vec::new();
    let mut attempts = 0;
    for (pi, signs) in patterns.iter().enumerate() {
        let probe = sample_start(cd, *signs, &mut stream_rng(cfg.rng_seed, u64::MAX));
        if let Err(Error::WrongSignature(_)) = probe {
            skipped.push(signs_to_string(signs));
            continue;
        }
        if let Some(t) = trivial(cd, *signs) {
            solutions.push(t);
        }
        let base = (pi * cfg.n_starts) as u64;
        let found: Vec<Option<SvpSolution>> = (0..cfg.n_starts as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream_rng(cfg.rng_seed, base + k);
                let (q, s0) = sample_start(cd, *signs, &mut rng).ok()?;
                let mut sol = solver(cd, &q, s0, cfg).ok()?;
                sol.seed = base + k;
                Some(sol)
            })
            .collect();
        attempts += cfg.n_starts;
        solutions.extend(found.into_iter().flatten());
    }
    let converged = solutions.iter().filter(|s| s.origin != super::Origin::Analytic).count();
    let clusters = cluster_solutions(solutions, cd, cfg.cluster_eps);
    Ok(MultistartReport {
        clusters,
        attempts,
        converged,
        skipped_patterns: skipped,
        search_not_enumeration: true,
    })
}

fn canonical(q: &Quadruple) -> Vec<f64> {
    let mut out = Vec::with_capacity(4 * q.dim());
    for v in q.vectors() {
        let lead = v.iter().find(|c| c.abs() > 1e-9).copied().unwrap_or(0.0);
        let s = if lead < 0.0 { -1.0 } else { 1.0 };
        out.extend(v.iter().map(|c| s * c));
    }
    out
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(u, v)| (u - v).abs() < ORBIT_MATCH_TOL)
}

/// Groups solutions by σ (single linkage with gap `eps`) and keeps
/// orbit-distinct representatives in each group.
pub fn cluster_solutions(mut sols: Vec<SvpSolution>, cd: &CurvatureData, eps: f64) -> Vec<Cluster> {
    sols.sort_by(|a, b| a.sigma.total_cmp(&b.sigma).then(a.seed.cmp(&b.seed)));
    let mut groups: Vec<Vec<SvpSolution>> = Vec::new();
    for s in sols {
        match groups.last_mut() {
            Some(g) if (s.sigma - g.last().expect("nonempty").sigma).abs() < eps => g.push(s),
            _ => groups.push(vec![s]),
        }
    }
    groups
        .into_iter()
        .map(|mut g| {
            // representatives prefer exact constructions, then start order
            g.sort_by(|a, b| a.origin.cmp(&b.origin).reverse().then(a.seed.cmp(&b.seed)));
            let members = g.len();
            let lo = g.iter().map(|s| s.sigma).fold(f64::INFINITY, f64::min);
            let hi = g.iter().map(|s| s.sigma).fold(f64::NEG_INFINITY, f64::max);
            let mean = g.iter().map(|s| s.sigma).sum::<f64>() / members as f64;
            let trivial = g.iter().any(|s| s.trivial);
            let mut patterns: Vec<String> = g.iter().map(|s| signs_to_string(&s.q.signs)).collect();
            patterns.sort();
            patterns.dedup();
            let mut reps: Vec<SvpSolution> = Vec::new();
            let mut rep_forms: Vec<Vec<Vec<f64>>> = Vec::new();
            for s in g {
                if reps.len() >= MAX_REPRESENTATIVES {
                    break;
                }
                let form = canonical(&s.q);
                let seen = rep_forms.iter().any(|forms| forms.iter().any(|f| close(f, &form)));
                if !seen {
                    let forms = std::iter::once(form)
                        .chain(orbit_unchecked(&s, cd).iter().map(|m| canonical(&m.solution.q)))
                        .collect();
                    rep_forms.push(forms);
                    reps.push(s);
                }
            }
            Cluster {
                sigma: mean,
                spread: hi - lo,
                members,
                trivial,
                patterns,
                representatives: reps,
            }
        })
        .collect()
}

/// Signs of the patterns searched by `cfg` that the signature permits.
pub fn feasible_patterns(cd: &CurvatureData, cfg: &SolverConfig) -> Vec<Signs> {
    cfg.sign_pattern
        .patterns()
        .into_iter()
        .filter(|s| s.iter().all(|v| cd.signature.signs().contains(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{euclidean, space_form, sphere2};
    use crate::geometry::riemann;
    use crate::svp::tests::sphere_solution;

    #[test]
    fn sphere_finds_zero_and_one() {
        let (cd, _) = sphere_solution(std::f64::consts::PI / 3.0);
        let rep = multistart(&cd, &SolverConfig::default()).unwrap();
        let s = rep.sigmas();
        assert_eq!(s.len(), 2, "{s:?}");
        assert!(s[0].abs() < 1e-10 && rep.clusters[0].trivial);
        assert!((s[1] - 1.0).abs() < 1e-10);
        assert!(rep.search_not_enumeration);
    }

    #[test]
    fn deterministic_given_seed() {
        let e = sphere2();
        let cd = riemann(&e.spec, &e.default_point).unwrap();
        let cfg = SolverConfig {
            n_starts: 40,
            rng_seed: 11,
            ..Default::default()
        };
        let a = multistart(&cd, &cfg).unwrap();
        let b = multistart(&cd, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn flat_space_has_only_zero() {
        let e = euclidean(4).unwrap();
        let cd = riemann(&e.spec, &e.default_point).unwrap();
        let rep = multistart(&cd, &SolverConfig { n_starts: 50, ..Default::default() }).unwrap();
        assert_eq!(rep.nonzero(1e-8).count(), 0);
        assert!(rep.clusters[0].trivial);
    }

    #[test]
    fn riemannian_skips_negative_patterns() {
        let e = space_form(1.0, 3).unwrap();
        let cd = riemann(&e.spec, &e.default_point).unwrap();
        let cfg = SolverConfig {
            n_starts: 10,
            sign_pattern: crate::svp::SignPattern::All,
            ..Default::default()
        };
        let rep = multistart(&cd, &cfg).unwrap();
        assert_eq!(rep.skipped_patterns.len(), 15);
        assert_eq!(feasible_patterns(&cd, &cfg).len(), 1);
    }
}
