use serde::Serialize;

use super::TransferMatrix;
use crate::error::{Error, Result};
use crate::numeric::accurate_sum;

pub const MAX_ITERATIONS: usize = 100_000;
/// Relative eigenvalue change at which the iteration is considered settled.
pub const EIGENVALUE_TOL: f64 = 1e-13;
/// Residual accepted at convergence.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Residual the iteration keeps pushing for once the eigenvalue has settled.
const RESIDUAL_TARGET: f64 = 1e-13;
/// Settled iterations tolerated without reaching the target.
const STALL_LIMIT: usize = 200;

/// Leading eigenvalue with positive right and left eigenvectors.
#[derive(Clone, Debug, Serialize)]
pub struct RpfData {
    pub lambda: f64,
    pub h: Vec<f64>,
    pub nu: Vec<f64>,
    pub residual_right: f64,
    pub residual_left: f64,
    pub duality_gap: f64,
    pub iterations: usize,
}

pub(crate) struct Eigenpair {
    pub lambda: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy)]
pub(crate) enum Side {
    Right,
    Left,
}

fn check_nonnegative(m: &TransferMatrix) -> Result<()> {
    let ok = (0..m.size()).all(|b| m.row(b).all(|(_, w)| w.im == 0.0 && w.re >= 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument("RPF data needs a nonnegative real matrix".into()))
    }
}

/// Power iteration normalized to unit sum.
pub(crate) fn power_iteration(m: &TransferMatrix, side: Side, start: Option<&[f64]>) -> Result<Eigenpair> {
    let n = m.size();
    let mut v: Vec<f64> = match start {
        Some(s) if s.len() == n && s.iter().all(|&x| x > 0.0 && x.is_finite()) => s.to_vec(),
        _ => vec![1.0; n],
    };
    let total = accurate_sum(v.iter().copied());
    v.iter_mut().for_each(|x| *x /= total);
    let mut w = vec![0.0; n];
    let mut lambda = f64::NAN;
    let mut residual = f64::INFINITY;
    let mut settled = 0;
    for it in 1..=MAX_ITERATIONS {
        match side {
            Side::Right => m.apply_real(&v, &mut w),
            Side::Left => m.apply_transpose_real(&v, &mut w),
        }
        let next = accurate_sum(w.iter().copied());
        if !(next > 0.0) || !next.is_finite() {
            return Err(Error::NonFinite("power iteration"));
        }
        let vmax = v.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
        residual = v.iter().zip(&w).fold(0.0f64, |acc, (&x, &y)| acc.max((y - next * x).abs())) / (vmax * next);
        let change = ((next - lambda) / next).abs();
        lambda = next;
        std::mem::swap(&mut v, &mut w);
        v.iter_mut().for_each(|x| *x /= lambda);
        if change < EIGENVALUE_TOL {
            settled += 1;
            if residual <= RESIDUAL_TARGET || settled >= STALL_LIMIT {
                if residual > RESIDUAL_TOL {
                    break;
                }
                return Ok(Eigenpair { lambda, vector: v, residual, iterations: it });
            }
        } else {
            settled = 0;
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual_right: if matches!(side, Side::Right) { residual } else { f64::NAN },
        residual_left: if matches!(side, Side::Left) { residual } else { f64::NAN },
    })
}

/// Right and left Perron data, normalized so that `Σν = 1` and `Σν·h = 1`.
pub fn rpf(m: &TransferMatrix) -> Result<RpfData> {
    rpf_warm(m, None, None)
}

/// [`rpf`] starting from previous eigenvectors.
pub fn rpf_warm(m: &TransferMatrix, h_start: Option<&[f64]>, nu_start: Option<&[f64]>) -> Result<RpfData> {
    check_nonnegative(m)?;
    let right = power_iteration(m, Side::Right, h_start)?;
    let left = power_iteration(m, Side::Left, nu_start).map_err(|e| match e {
        Error::NoConvergence { iterations, residual_left, .. } => Error::NoConvergence {
            iterations,
            residual_right: right.residual,
            residual_left,
        },
        other => other,
    })?;
    let nu = left.vector;
    let pairing = accurate_sum(nu.iter().zip(&right.vector).map(|(a, b)| a * b));
    let h: Vec<f64> = right.vector.iter().map(|x| x / pairing).collect();
    Ok(RpfData {
        lambda: right.lambda,
        duality_gap: (right.lambda - left.lambda).abs() / right.lambda,
        h,
        nu,
        residual_right: right.residual,
        residual_left: left.residual,
        iterations: right.iterations.max(left.iterations),
    })
}

/// Modulus of the second eigenvalue, by power iteration on the complement
/// of the leading eigendirection.
pub fn subleading_modulus(m: &TransferMatrix, data: &RpfData, iterations: usize) -> Result<f64> {
    check_nonnegative(m)?;
    let n = m.size();
    let deflate = |v: &mut [f64]| {
        let c = accurate_sum(data.nu.iter().zip(v.iter()).map(|(a, b)| a * b));
        v.iter_mut().zip(&data.h).for_each(|(x, h)| *x -= c * h);
    };
    let mut v: Vec<f64> = (0..n).map(|i| ((i as f64 + 0.5) * 0.618_033_988_749_895).fract() - 0.5).collect();
    deflate(&mut v);
    let mut w = vec![0.0; n];
    let mut logs = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        m.apply_real(&v, &mut w);
        deflate(&mut w);
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        logs.push(norm.ln());
        w.iter_mut().for_each(|x| *x /= norm);
        std::mem::swap(&mut v, &mut w);
    }
    let tail = &logs[iterations / 2..];
    Ok((tail.iter().sum::<f64>() / tail.len() as f64).exp())
}
