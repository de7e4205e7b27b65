//! Text format for user-defined metrics.
//!
//! ```text
//! # Schwarzschild, written out by hand
//! name: my-schwarzschild
//! coords: t, r, theta, phi
//! signature: -+++
//! params: M = 1
//! point: 0, 3, 0.7854, 0
//! g[t][t] = -(1 - 2*M/r)
//! g[r][r] = 1/(1 - 2*M/r)
//! g[2][2] = r^2
//! g[phi][phi] = r^2*sin(theta)^2
//! ```
//!
//! Indices are numbers or coordinate names. Entries not listed are zero. An
//! off-diagonal entry given once is used for both `g[i][j]` and `g[j][i]`;
//! if both are listed they are taken as written, so the metric may come out
//! asymmetric and will then fail verification. `params` and `point` are
//! optional, and parameters can be overridden at load time.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::catalog::{CatalogEntry, Params};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::geometry::{MetricSpec, Point, Signature, MAX_DIMENSION};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 0,
        message: message.into(),
    }
}

fn parse_signature(line: usize, s: &str) -> Result<Signature> {
    let signs = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' => Ok(1),
            '-' | '−' => Ok(-1),
            other => Err(perr(line, format!("bad signature character '{other}'"))),
        })
        .collect::<Result<Vec<i8>>>()?;
    Signature::new(signs).map_err(|e| perr(line, e.to_string()))
}

fn parse_number(line: usize, s: &str) -> Result<f64> {
    let e = parse(s.trim(), &[], &HashMap::new()).map_err(|e| perr(line, e.to_string()))?;
    let v = e.eval(&[]);
    if !v.is_finite() {
        return Err(perr(line, format!("'{s}' is not finite")));
    }
    Ok(v)
}

fn parse_index(line: usize, s: &str, coords: &[String]) -> Result<usize> {
    let s = s.trim();
    if let Ok(i) = s.parse::<usize>() {
        if i < coords.len() {
            return Ok(i);
        }
        return Err(perr(line, format!("index {i} out of range")));
    }
    coords
        .iter()
        .position(|c| c == s)
        .ok_or_else(|| perr(line, format!("unknown coordinate '{s}'")))
}

/// Splits `g[a][b]` into its two index strings.
fn component_indices(lhs: &str) -> Option<(&str, &str)> {
    let rest = lhs.trim().strip_prefix('g')?.trim_start();
    let rest = rest.strip_prefix('[')?;
    let (a, rest) = rest.split_once(']')?;
    let rest = rest.trim_start().strip_prefix('[')?;
    let (b, rest) = rest.split_once(']')?;
    if !rest.trim().is_empty() {
        return None;
    }
    Some((a, b))
}

/// Parses a metric file. `overrides` replace or add parameter values.
pub fn parse_metric(text: &str, overrides: &Params) -> Result<CatalogEntry> {
    let mut name = String::from("user");
    let mut coords: Option<Vec<String>> = None;
    let mut signature: Option<Signature> = None;
    let mut params = Params::new();
    let mut point: Option<Vec<f64>> = None;
    let mut components: Vec<(usize, String, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            if !key.contains('[') {
                match key.trim() {
                    "name" => name = value.trim().to_string(),
                    "coords" => {
                        let c: Vec<String> = value
                            .split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect();
                        for s in &c {
                            if !s.chars().all(|ch| ch.is_alphanumeric() || ch == '_')
                                || s.chars().next().is_some_and(|ch| ch.is_ascii_digit())
                            {
                                return Err(perr(line, format!("bad coordinate name '{s}'")));
                            }
                        }
                        coords = Some(c);
                    }
                    "signature" => signature = Some(parse_signature(line, value)?),
                    "params" => {
                        for kv in value.split(',').filter(|s| !s.trim().is_empty()) {
                            let (k, v) = kv
                                .split_once('=')
                                .ok_or_else(|| perr(line, format!("expected key=value, got '{kv}'")))?;
                            params.insert(k.trim().to_string(), parse_number(line, v)?);
                        }
                    }
                    "point" => {
                        point = Some(
                            value
                                .split(',')
                                .map(|v| parse_number(line, v))
                                .collect::<Result<Vec<f64>>>()?,
                        )
                    }
                    other => return Err(perr(line, format!("unknown key '{other}'"))),
                }
                continue;
            }
        }
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected 'g[i][j] = expr', got '{content}'")))?;
        let (a, b) = component_indices(lhs)
            .ok_or_else(|| perr(line, format!("malformed component '{}'", lhs.trim())))?;
        components.push((line, a.to_string(), b.to_string(), rhs.trim().to_string()));
    }

    let coords = coords.ok_or_else(|| perr(0, "missing 'coords:' line"))?;
    let n = coords.len();
    if !(2..=MAX_DIMENSION).contains(&n) {
        return Err(perr(0, format!("dimension {n} outside 2..={MAX_DIMENSION}")));
    }
    let signature = signature.ok_or_else(|| perr(0, "missing 'signature:' line"))?;
    if signature.dim() != n {
        return Err(perr(
            0,
            format!("signature has {} entries for {n} coordinates", signature.dim()),
        ));
    }
    for (k, v) in overrides {
        params.insert(k.clone(), *v);
    }
    for k in params.keys() {
        if coords.contains(k) {
            return Err(perr(0, format!("parameter '{k}' shadows a coordinate")));
        }
    }
    let constants: HashMap<String, f64> = params.iter().map(|(k, v)| (k.clone(), *v)).collect();

    let mut table: Vec<Vec<Option<Expr>>> = vec![vec![None; n]; n];
    for (line, a, b, rhs) in &components {
        let i = parse_index(*line, a, &coords)?;
        let j = parse_index(*line, b, &coords)?;
        if table[i][j].is_some() {
            return Err(perr(*line, format!("component g[{i}][{j}] given twice")));
        }
        let e = parse(rhs, &coords, &constants).map_err(|e| match e {
            Error::Parse { column, message, .. } => Error::Parse {
                line: *line,
                column,
                message,
            },
            other => other,
        })?;
        table[i][j] = Some(e);
    }
    let mut entries: Vec<Vec<Expr>> = vec![vec![Expr::Num(0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            entries[i][j] = table[i][j]
                .clone()
                .or_else(|| table[j][i].clone())
                .unwrap_or(Expr::Num(0.0));
        }
    }
    let entries = Arc::new(entries);
    let spec = MetricSpec::new(name, signature, move |x| {
        DMatrix::from_fn(n, n, |i, j| entries[i][j].eval(x))
    })?;
    let refs: Vec<&str> = coords.iter().map(|s| s.as_str()).collect();
    let spec = spec.with_coordinates(&refs);
    let default_point = match point {
        Some(p) if p.len() == n => Point::new(p)?,
        Some(p) => {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            })
        }
        None => Point::new(vec![0.0; n])?,
    };
    Ok(CatalogEntry::user(spec, params, default_point))
}
