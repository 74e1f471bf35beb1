use serde::Serialize;

use super::upsilon::CorrelationSeries;
use crate::error::{Error, Result};
use crate::spectral::least_squares;

/// Values below this are treated as numerically zero.
pub const DECAY_FLOOR: f64 = 1e-13;
/// Minimum number of qualifying samples.
pub const MIN_DECAY_POINTS: usize = 10;

/// `|Υ(t)| ≈ amplitude·e^{−eta·t}` on the fitted window.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayEstimate {
    pub eta: f64,
    pub amplitude: f64,
    /// Root-mean-square residual of `log|Υ|` divided by the fitted drop.
    pub fit_residual: f64,
    pub points: usize,
    /// Whether the envelope was fitted through the local maxima of `|Υ|`.
    pub peaks: bool,
}

/// Decay fit of a correlation series beyond `max τ`.
pub fn fit_decay(series: &CorrelationSeries) -> Result<DecayEstimate> {
    fit_decay_samples(&series.t, &series.upsilon, series.max_tau)
}

/// Least-squares slope of `log|v|` over samples with `t > t_min` and
/// `|v| > 1e-13`. When the samples change sign at least twice the fit runs
/// through the local maxima of `|v|`, each refined by a parabola in
/// `log|v|`.
pub fn fit_decay_samples(t: &[f64], values: &[f64], t_min: f64) -> Result<DecayEstimate> {
    let window: Vec<(f64, f64)> = t
        .iter()
        .zip(values)
        .filter(|&(&t, &v)| t > t_min && v.abs() > DECAY_FLOOR && v.is_finite())
        .map(|(&t, &v)| (t, v))
        .collect();
    if window.len() < MIN_DECAY_POINTS {
        return Err(Error::InsufficientDecayWindow(format!(
            "{} samples beyond t = {t_min} above {DECAY_FLOOR}",
            window.len()
        )));
    }
    let sign_changes = window.windows(2).filter(|w| w[0].1.signum() != w[1].1.signum()).count();
    let (xs, ys): (Vec<f64>, Vec<f64>) = if sign_changes >= 2 {
        let logs: Vec<f64> = window.iter().map(|p| p.1.abs().ln()).collect();
        let mut peaks = Vec::new();
        for i in 1..window.len() - 1 {
            if logs[i] >= logs[i - 1] && logs[i] > logs[i + 1] {
                peaks.push(refine_peak(
                    [window[i - 1].0, window[i].0, window[i + 1].0],
                    [logs[i - 1], logs[i], logs[i + 1]],
                ));
            }
        }
        if peaks.len() < 3 {
            return Err(Error::InsufficientDecayWindow(format!("{} envelope peaks", peaks.len())));
        }
        peaks.into_iter().unzip()
    } else {
        window.iter().map(|&(t, v)| (t, v.abs().ln())).unzip()
    };
    let (slope, intercept, rms) = least_squares(&xs, &ys);
    let drop = (slope * (xs[xs.len() - 1] - xs[0])).abs();
    Ok(DecayEstimate {
        eta: -slope,
        amplitude: intercept.exp(),
        fit_residual: if drop > 0.0 { rms / drop } else { f64::INFINITY },
        points: xs.len(),
        peaks: sign_changes >= 2,
    })
}

/// Vertex of the parabola through three points.
fn refine_peak(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let (h1, h2) = (x[1] - x[0], x[2] - x[1]);
    let (d1, d2) = ((y[1] - y[0]) / h1, (y[2] - y[1]) / h2);
    let curvature = (d2 - d1) / (0.5 * (h1 + h2));
    if !(curvature < 0.0) {
        return (x[1], y[1]);
    }
    let slope_mid = (d1 * h2 + d2 * h1) / (h1 + h2);
    let shift = -slope_mid / curvature;
    if shift.abs() > h1.max(h2) {
        return (x[1], y[1]);
    }
    (x[1] + shift, y[1] + 0.5 * slope_mid * shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, h: f64) -> Vec<f64> {
        (0..n).map(|i| i as f64 * h).collect()
    }

    #[test]
    fn exact_exponential() {
        let t = grid(400, 0.05);
        let v: Vec<f64> = t.iter().map(|t| 2.5 * (-0.3 * t).exp()).collect();
        let fit = fit_decay_samples(&t, &v, 3.0).unwrap();
        assert!((fit.eta - 0.3).abs() < 1e-6);
        assert!((fit.amplitude - 2.5).abs() < 1e-6);
        assert!(!fit.peaks);
    }

    #[test]
    fn oscillating_envelope() {
        let t = grid(1200, 0.05);
        let v: Vec<f64> = t.iter().map(|t| 1.7 * (-0.3 * t).exp() * t.cos()).collect();
        let fit = fit_decay_samples(&t, &v, 3.0).unwrap();
        assert!(fit.peaks);
        assert!((fit.eta - 0.3).abs() < 0.03, "{}", fit.eta);
    }

    #[test]
    fn short_window_is_rejected() {
        let t = grid(20, 0.5);
        let v: Vec<f64> = t.iter().map(|t| (-0.3 * t).exp()).collect();
        assert!(matches!(fit_decay_samples(&t, &v, 6.0), Err(Error::InsufficientDecayWindow(_))));
        let zeros = vec![0.0; 20];
        assert!(fit_decay_samples(&t, &zeros, 0.0).is_err());
    }
}
