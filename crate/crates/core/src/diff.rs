//! Central finite differences with repeated Richardson extrapolation
//! (Ridders' tableau) for vector-valued functions of a point.
//!
//! Each derivative is computed from a sequence of shrinking steps; the
//! tableau entry with the smallest estimated error is returned together
//! with that estimate.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOptions {
    /// First step, relative to `max(1, |p_i|)`.
    pub initial_step: f64,
    /// Step reduction factor between tableau columns.
    pub shrink: f64,
    /// Maximum number of tableau columns.
    pub max_levels: usize,
    /// Accepted error estimate, relative to `max(1, |derivative|)`.
    pub tolerance: f64,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            shrink: 1.4,
            max_levels: 10,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Vec<f64>,
    pub error: f64,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Runs the extrapolation tableau over the difference quotient `quotient(h)`.
pub fn extrapolate<F>(mut quotient: F, h0: f64, opts: &DiffOptions) -> Result<Estimate>
where
    F: FnMut(f64) -> Vec<f64>,
{
    let con2 = opts.shrink * opts.shrink;
    let mut h0 = h0;
    // shrink the starting step if the stencil leaves the domain of the function
    let mut first = quotient(h0);
    let mut retries = 0;
    while !all_finite(&first) {
        retries += 1;
        if retries > 8 {
            return Err(Error::NonFinite("metric near differentiation stencil"));
        }
        h0 /= 4.0;
        first = quotient(h0);
    }

    let levels = opts.max_levels.max(2);
    let mut prev: Vec<Vec<f64>> = vec![first];
    let mut best = prev[0].clone();
    let mut err = f64::INFINITY;
    let mut h = h0;
    for i in 1..levels {
        h /= opts.shrink;
        let q = quotient(h);
        if !all_finite(&q) {
            break;
        }
        let mut col = Vec::with_capacity(i + 1);
        col.push(q);
        let mut fac = con2;
        for j in 1..=i {
            let next: Vec<f64> = col[j - 1]
                .iter()
                .zip(&prev[j - 1])
                .map(|(a, b)| (a * fac - b) / (fac - 1.0))
                .collect();
            fac *= con2;
            let errt = max_abs_diff(&next, &col[j - 1]).max(max_abs_diff(&next, &prev[j - 1]));
            if errt <= err {
                err = errt;
                best.clone_from(&next);
            }
            col.push(next);
        }
        let stalled = max_abs_diff(&col[i], &prev[i - 1]) >= 2.0 * err;
        prev = col;
        if stalled {
            break;
        }
    }

    let scale = best.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if !(err <= opts.tolerance * scale) {
        return Err(Error::DifferentiationFailure { estimate: err });
    }
    Ok(Estimate { value: best, error: err })
}

fn step_for(p: &[f64], i: usize, opts: &DiffOptions) -> f64 {
    opts.initial_step * p[i].abs().max(1.0)
}

fn shifted(p: &[f64], shifts: &[(usize, f64)]) -> Vec<f64> {
    let mut q = p.to_vec();
    for &(i, d) in shifts {
        q[i] += d;
    }
    q
}

/// `∂_i f(p)` for a vector-valued `f`.
pub fn first_partial<F>(f: &F, p: &[f64], i: usize, opts: &DiffOptions) -> Result<Estimate>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let base = step_for(p, i, opts);
    extrapolate(
        |t| {
            let h = base * t;
            let fp = f(&shifted(p, &[(i, h)]));
            let fm = f(&shifted(p, &[(i, -h)]));
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        },
        1.0,
        opts,
    )
}

/// `∂_i ∂_j f(p)` for a vector-valued `f`, using the three-point rule on the
/// diagonal and the four-point cross rule off it.
pub fn second_partial<F>(
    f: &F,
    p: &[f64],
    i: usize,
    j: usize,
    f0: &[f64],
    opts: &DiffOptions,
) -> Result<Estimate>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let hi = step_for(p, i, opts);
    let hj = step_for(p, j, opts);
    extrapolate(
        |t| {
            if i == j {
                let h = hi * t;
                let fp = f(&shifted(p, &[(i, h)]));
                let fm = f(&shifted(p, &[(i, -h)]));
                fp.iter()
                    .zip(&fm)
                    .zip(f0)
                    .map(|((a, b), c)| (a - 2.0 * c + b) / (h * h))
                    .collect()
            } else {
                let (a, b) = (hi * t, hj * t);
                let fpp = f(&shifted(p, &[(i, a), (j, b)]));
                let fpm = f(&shifted(p, &[(i, a), (j, -b)]));
                let fmp = f(&shifted(p, &[(i, -a), (j, b)]));
                let fmm = f(&shifted(p, &[(i, -a), (j, -b)]));
                (0..fpp.len())
                    .map(|k| (fpp[k] - fpm[k] - fmp[k] + fmm[k]) / (4.0 * a * b))
                    .collect()
            }
        },
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_of_sin_is_accurate() {
        let f = |p: &[f64]| vec![p[0].sin(), (2.0 * p[0]).exp()];
        let e = first_partial(&f, &[0.7], 0, &DiffOptions::default()).unwrap();
        assert!((e.value[0] - 0.7_f64.cos()).abs() < 1e-11);
        assert!((e.value[1] - 2.0 * 1.4_f64.exp()).abs() < 1e-9);
        assert!(e.error < 1e-9);
    }

    #[test]
    fn mixed_second_derivative() {
        let f = |p: &[f64]| vec![p[0].sin() * p[1].powi(3) / p[1].exp()];
        let p = [0.4, 1.3];
        let f0 = f(&p);
        let e = second_partial(&f, &p, 0, 1, &f0, &DiffOptions::default()).unwrap();
        let y = p[1];
        let d_y = (3.0 * y * y - y.powi(3)) * (-y).exp();
        assert!((e.value[0] - p[0].cos() * d_y).abs() < 1e-9, "{:?}", e);
        let e = second_partial(&f, &p, 1, 1, &f0, &DiffOptions::default()).unwrap();
        let d_yy = (6.0 * y - 6.0 * y * y + y.powi(3)) * (-y).exp();
        assert!((e.value[0] - p[0].sin() * d_yy).abs() < 1e-9);
    }

    #[test]
    fn large_coordinates_use_relative_steps() {
        let f = |p: &[f64]| vec![1.0 / p[0]];
        let e = first_partial(&f, &[1.0e3], 0, &DiffOptions::default()).unwrap();
        assert!((e.value[0] + 1.0e-6).abs() < 1e-15);
    }

    #[test]
    fn noisy_function_fails_tolerance() {
        let noise = std::cell::Cell::new(0u64);
        let f = |p: &[f64]| {
            let s = noise.get().wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            noise.set(s);
            vec![p[0] + (s >> 11) as f64 / (1u64 << 53) as f64 * 1e-3]
        };
        let opts = DiffOptions {
            tolerance: 1e-10,
            ..Default::default()
        };
        let r = first_partial(&f, &[0.0], 0, &opts);
        assert!(matches!(r, Err(Error::DifferentiationFailure { .. })), "{r:?}");
    }
}
