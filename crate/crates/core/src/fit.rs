//! Decaying-sine fits `y(θ) = A·cos(θ + φ₀)·e^{−θ/τ} + c` for Rabi contrasts.

use crate::error::{invalid, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub amplitude: f64,
    pub phase: f64,
    pub offset: f64,
    /// `None` when the fitted decay rate vanishes (pure sine).
    pub tau: Option<f64>,
    pub residual: f64,
}

const RATE_FLOOR: f64 = 1e-8;

fn model(p: &[f64; 4], t: f64) -> f64 {
    p[0] * (t + p[1]).cos() * (-p[3] * t).exp() + p[2]
}

fn residuals(p: &[f64; 4], x: &[f64], y: &[f64]) -> DVector<f64> {
    DVector::from_iterator(x.len(), x.iter().zip(y).map(|(t, v)| model(p, *t) - v))
}

fn jacobian(p: &[f64; 4], x: &[f64], free_rate: bool) -> DMatrix<f64> {
    let cols = if free_rate { 4 } else { 3 };
    DMatrix::from_fn(x.len(), cols, |i, j| {
        let t = x[i];
        let e = (-p[3] * t).exp();
        match j {
            0 => (t + p[1]).cos() * e,
            1 => -p[0] * (t + p[1]).sin() * e,
            2 => 1.0,
            _ => -t * p[0] * (t + p[1]).cos() * e,
        }
    })
}

/// Levenberg–Marquardt on the first 3 or all 4 parameters.
fn levenberg_marquardt(mut p: [f64; 4], x: &[f64], y: &[f64], free_rate: bool) -> [f64; 4] {
    let mut lambda = 1e-3;
    let mut cost = residuals(&p, x, y).norm_squared();
    for _ in 0..500 {
        let r = residuals(&p, x, y);
        let j = jacobian(&p, x, free_rate);
        let jtj = j.transpose() * &j;
        let g = j.transpose() * r;
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..a.nrows() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let step = match a.lu().solve(&(-&g)) {
                Some(s) => s,
                None => break,
            };
            let mut trial = p;
            for (k, s) in step.iter().enumerate() {
                trial[k] += s;
            }
            let c = residuals(&trial, x, y).norm_squared();
            if c < cost {
                let rel = (cost - c) / cost.max(1e-300);
                p = trial;
                cost = c;
                lambda = (lambda * 0.3).max(1e-15);
                improved = true;
                if rel < 1e-15 {
                    return p;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved || cost < 1e-30 {
            break;
        }
    }
    p
}

/// Fit the decaying sine. Initialization: amplitude from half the data range,
/// offset from the mean, phase from the first extremum, infinite τ; the pure
/// sine is refined first, then the decay rate is released.
pub fn fit_decaying_sine(theta: &[f64], y: &[f64]) -> Result<FitResult> {
    if theta.len() != y.len() {
        return invalid("theta and y must have equal length");
    }
    if theta.len() < 5 {
        return invalid("need at least 5 points to fit 4 parameters");
    }
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let amp = (hi - lo) / 2.0;
    if amp < 1e-14 {
        let residual = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt();
        return Ok(FitResult { amplitude: 0.0, phase: 0.0, offset: mean, tau: None, residual });
    }
    let first_ext = (1..y.len() - 1)
        .find(|&i| (y[i] - y[i - 1]) * (y[i + 1] - y[i]) <= 0.0)
        .unwrap_or(0);
    let ext = if first_ext == 0 && (y[0] - mean).abs() < amp * 0.5 { 1 } else { first_ext };
    let phase0 = if y[ext] >= mean { -theta[ext] } else { std::f64::consts::PI - theta[ext] };
    let mut p = [amp, phase0, (hi + lo) / 2.0, 0.0];
    p = levenberg_marquardt(p, theta, y, false);
    p = levenberg_marquardt(p, theta, y, true);
    if p[0] < 0.0 {
        p[0] = -p[0];
        p[1] += std::f64::consts::PI;
    }
    let phase = p[1].rem_euclid(2.0 * std::f64::consts::PI);
    let residual = residuals(&p, theta, y).norm();
    let tau = if p[3].abs() < RATE_FLOOR { None } else { Some(1.0 / p[3]) };
    Ok(FitResult { amplitude: p[0], phase, offset: p[2], tau, residual })
}

/// `points` values evenly spaced over `[start, stop]`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![start],
        _ => (0..points).map(|k| start + (stop - start) * k as f64 / (points - 1) as f64).collect(),
    }
}
