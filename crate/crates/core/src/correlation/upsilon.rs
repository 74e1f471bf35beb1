use rayon::prelude::*;
use serde::Serialize;

use super::observable::{integrate, Observable};
use crate::error::{Error, Result};
use crate::geometry::Complex;
use crate::numeric::accurate_sum;
use crate::transfer::{TransferModel, TwistParams};

/// Unfolding horizon in units of the shortest return time.
pub const HORIZON_FACTOR: f64 = 30.0;

/// Discretization of the time axis.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TimeGrid {
    /// Marching step of the entry-time densities.
    pub step: f64,
    /// Output every `stride` steps.
    pub stride: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { step: 0.005, stride: 10 }
    }
}

impl TimeGrid {
    pub fn spacing(&self) -> f64 {
        self.step * self.stride as f64
    }
}

/// `Υ(t)` on a uniform grid with its split into the part that has left the
/// starting fiber (`Υ⁰`) and the part that has not (`Υ¹`).
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationSeries {
    pub depth: usize,
    pub t: Vec<f64>,
    pub upsilon: Vec<f64>,
    pub upsilon0: Vec<f64>,
    pub upsilon1: Vec<f64>,
    pub min_tau: f64,
    pub max_tau: f64,
}

impl CorrelationSeries {
    /// Trapezoid rule for `∫_0^{t_max} e^{−ξt} Υ(t) dt` over the stored grid.
    pub fn laplace_transform(&self, xi: Complex) -> Complex {
        let mut total = Complex::new(0.0, 0.0);
        for i in 1..self.t.len() {
            let h = self.t[i] - self.t[i - 1];
            let left = (-xi * self.t[i - 1]).exp() * self.upsilon[i - 1];
            let right = (-xi * self.t[i]).exp() * self.upsilon[i];
            total += (left + right) * (0.5 * h);
        }
        total
    }
}

/// `Υ(t)` together with its two parts.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UpsilonValue {
    pub t: f64,
    pub upsilon: f64,
    pub upsilon0: f64,
    pub upsilon1: f64,
}

/// Largest admissible `t`: `30·min τ`.
pub fn horizon(model: &TransferModel) -> f64 {
    HORIZON_FACTOR * tau_range(model).0
}

fn tau_range(model: &TransferModel) -> (f64, f64) {
    model
        .table()
        .taus()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)))
}

/// `Υ_{φ,ψ}(t) = ∫_U ∫_M ∫_0^{τ(u)} φ(flow_t(u, m, r)) ψ(u, m, r) dr dm dν_U(u)`.
pub fn upsilon(model: &TransferModel, phi: &Observable, psi: &Observable, t: f64, grid: TimeGrid) -> Result<UpsilonValue> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time {t} must be nonnegative")));
    }
    let steps = (t / grid.step).round() as usize;
    let grid = TimeGrid { step: if steps == 0 { grid.step } else { t / steps as f64 }, stride: steps.max(1) };
    let series = upsilon_series(model, phi, psi, t, grid)?;
    let i = if steps == 0 { 0 } else { series.t.len() - 1 };
    Ok(UpsilonValue {
        t: series.t[i],
        upsilon: series.upsilon[i],
        upsilon0: series.upsilon0[i],
        upsilon1: series.upsilon1[i],
    })
}

/// `Υ` on `t = 0, Δ·stride, …` up to `t_max`.
///
/// The flow is unfolded through the normalized Gibbs chain on cylinders. For
/// each character `k`, `E_β(u)` is the weighted density of entering cylinder
/// `β` at time `u` after starting at a point distributed as `ψ`; it obeys the
/// causal renewal recursion `E_β(u) = Σ_α M_k(β, α) E_α(u − τ(α))`, which is
/// marched on a grid keeping only the last `max τ` of history. `Υ⁰` pairs
/// the entries after at least one return with `φ`, `Υ¹` is the direct term.
pub fn upsilon_series(model: &TransferModel, phi: &Observable, psi: &Observable, t_max: f64, grid: TimeGrid) -> Result<CorrelationSeries> {
    let (min_tau, max_tau) = tau_range(model);
    let limit = HORIZON_FACTOR * min_tau;
    if t_max > limit * (1.0 + 1e-12) {
        return Err(Error::HorizonExceeded { t: t_max, horizon: limit });
    }
    if !(grid.step > 0.0) || grid.stride == 0 || grid.step >= min_tau {
        return Err(Error::InvalidArgument(format!("time step {} is unusable", grid.step)));
    }
    let outputs = (t_max / grid.spacing() + 1e-9).floor() as usize + 1;
    let t: Vec<f64> = (0..outputs).map(|i| (i * grid.stride) as f64 * grid.step).collect();
    let mut total0 = vec![Complex::new(0.0, 0.0); outputs];
    let mut total1 = vec![Complex::new(0.0, 0.0); outputs];
    for k in phi.modes().filter(|&k| psi.mode(k).is_some()) {
        let channel = Channel::new(model, phi, psi, k)?;
        let (e0, e1) = channel.march(&t, grid);
        for i in 0..outputs {
            total0[i] += e0[i];
            total1[i] += e1[i];
        }
    }
    let upsilon0: Vec<f64> = total0.iter().map(|z| z.re).collect();
    let upsilon1: Vec<f64> = total1.iter().map(|z| z.re).collect();
    let upsilon = upsilon0.iter().zip(&upsilon1).map(|(a, b)| a + b).collect();
    Ok(CorrelationSeries { depth: model.depth(), t, upsilon, upsilon0, upsilon1, min_tau, max_tau })
}

struct Channel<'a> {
    model: &'a TransferModel,
    rows: Vec<Vec<(usize, Complex)>>,
    taus: Vec<f64>,
    phi_c: Vec<Complex>,
    psi_c: Vec<Complex>,
    phi_profile: super::Profile,
    psi_profile: super::Profile,
}

impl<'a> Channel<'a> {
    fn new(model: &'a TransferModel, phi: &Observable, psi: &Observable, k: i32) -> Result<Self> {
        let table = model.table();
        let m = model.matrix(TwistParams::new(0.0, 0.0, k))?;
        let rows = (0..m.size()).map(|b| m.row(b).collect()).collect();
        Ok(Channel {
            model,
            rows,
            taus: table.taus().collect(),
            phi_c: phi.coefficients_on(table, k)?,
            psi_c: psi.coefficients_on(table, k)?.into_iter().map(|c| c.conj()).collect(),
            phi_profile: phi.profile(),
            psi_profile: psi.profile(),
        })
    }

    /// Density of the starting point's entry time, `u ∈ (−τ(α), 0]`.
    fn initial(&self, alpha: usize, u: f64) -> Complex {
        let tau = self.taus[alpha];
        if u > 0.0 || u <= -tau {
            Complex::new(0.0, 0.0)
        } else {
            self.psi_c[alpha] * self.psi_profile.value(-u / tau)
        }
    }

    fn march(&self, t: &[f64], grid: TimeGrid) -> (Vec<Complex>, Vec<Complex>) {
        let n = self.taus.len();
        let max_tau = self.taus.iter().cloned().fold(0.0, f64::max);
        let slots = (max_tau / grid.step).ceil() as usize + 3;
        let mut ring = vec![vec![Complex::new(0.0, 0.0); n]; slots];
        let nu = self.model.nu();
        let mut out0 = Vec::with_capacity(t.len());
        let mut out1 = Vec::with_capacity(t.len());
        let last = (t.len() - 1) * grid.stride;
        for i in 0..=last {
            if i > 0 {
                let mut next = std::mem::take(&mut ring[i % slots]);
                let ring_ref = &ring;
                next.par_iter_mut().enumerate().for_each(|(beta, e)| {
                    let u = i as f64 * grid.step;
                    *e = self.rows[beta]
                        .iter()
                        .map(|&(alpha, w)| {
                            let v = u - self.taus[alpha];
                            w * (self.interpolate(ring_ref, slots, grid.step, alpha, v) + self.initial(alpha, v))
                        })
                        .sum();
                });
                ring[i % slots] = next;
            }
            if i % grid.stride == 0 {
                let now = i as f64 * grid.step;
                let parts: Vec<(Complex, Complex)> = (0..n)
                    .into_par_iter()
                    .map(|beta| {
                        let c = self.phi_c[beta];
                        if c == Complex::new(0.0, 0.0) {
                            return (c, c);
                        }
                        let tau = self.taus[beta];
                        let p = self.phi_profile;
                        let returned: Complex = integrate(0.0, tau, 1, |x| {
                            self.interpolate(&ring, slots, grid.step, beta, now - x) * p.value(x / tau)
                        });
                        let direct: Complex = if now < tau {
                            integrate(now, tau, 1, |x| self.initial(beta, now - x) * p.value(x / tau))
                        } else {
                            Complex::new(0.0, 0.0)
                        };
                        (returned * c * nu[beta], direct * c * nu[beta])
                    })
                    .collect();
                out0.push(complex_sum(parts.iter().map(|p| p.0)));
                out1.push(complex_sum(parts.iter().map(|p| p.1)));
            }
        }
        (out0, out1)
    }

    /// Linear interpolation of the returned density at time `v`; zero for
    /// `v ≤ 0`.
    fn interpolate(&self, ring: &[Vec<Complex>], slots: usize, step: f64, beta: usize, v: f64) -> Complex {
        if v <= 0.0 {
            return Complex::new(0.0, 0.0);
        }
        let x = v / step;
        let j = x.floor() as usize;
        let f = x - j as f64;
        let lo = ring[j % slots][beta];
        if f == 0.0 {
            lo
        } else {
            lo * (1.0 - f) + ring[(j + 1) % slots][beta] * f
        }
    }
}

fn complex_sum(values: impl Iterator<Item = Complex> + Clone) -> Complex {
    Complex::new(accurate_sum(values.clone().map(|z| z.re)), accurate_sum(values.map(|z| z.im)))
}
