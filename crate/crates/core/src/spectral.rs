//! Twisted spectral gaps measured from iterate norms, the small-`a`
//! stability band, the LNIC probe and a dense eigenvalue oracle.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coding::{limit_points, SchottkyScheme, Symbol, Word};
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Complex};
use crate::transfer::{weighted_norm, TransferMatrix, TransferModel, TwistParams};

#[derive(Clone, Debug, Serialize)]
pub struct SweepGrid {
    pub b_values: Vec<f64>,
    pub k_values: Vec<i32>,
    pub iterations: usize,
    pub seed: u64,
}

impl SweepGrid {
    pub fn new(b_values: Vec<f64>, k_values: Vec<i32>, iterations: usize, seed: u64) -> Result<Self> {
        if b_values.is_empty() || k_values.is_empty() {
            return Err(Error::InvalidArgument("sweep grid is empty".into()));
        }
        if iterations < 20 {
            return Err(Error::InvalidArgument(format!("{iterations} iterations < 20")));
        }
        Ok(SweepGrid { b_values, k_values, iterations, seed })
    }

    pub fn points(&self) -> Vec<(f64, i32)> {
        self.b_values.iter().flat_map(|&b| self.k_values.iter().map(move |&k| (b, k))).collect()
    }
}

/// Least-squares decay fit of a log-norm sequence.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayFit {
    pub eta: f64,
    /// Root-mean-square residual divided by the fitted drop across the window.
    pub fit_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapPoint {
    pub b: f64,
    pub k: i32,
    pub eta: f64,
    pub fit_residual: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub depth: usize,
    pub iterations: usize,
    pub threshold: f64,
    pub points: Vec<GapPoint>,
    /// Minimum over the grid with `(0, 0)` removed.
    pub min_eta: f64,
}

impl GapReport {
    pub fn get(&self, b: f64, k: i32) -> Option<&GapPoint> {
        self.points.iter().find(|p| p.b == b && p.k == k)
    }
}

/// Seeded start vector with real parts in `[0.5, 1.5]` and imaginary parts
/// in `[−0.5, 0.5]`, scaled to unit `ν`-norm.
pub fn seeded_start(nu: &[f64], seed: u64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex> = nu
        .iter()
        .map(|_| Complex::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5)))
        .collect();
    let norm = weighted_norm(nu, &v);
    v.into_iter().map(|z| z / norm).collect()
}

/// `η = −slope` of `log ‖M^j H₀‖` over `j ∈ [n/2, n]`; `logs[i]` belongs to
/// `j = i + 1`.
pub fn fit_tail(logs: &[f64]) -> Result<DecayFit> {
    let n = logs.len();
    if n < 4 || logs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InsufficientDecayWindow(format!("{n} usable iterates")));
    }
    let start = n / 2 - 1;
    let (xs, ys): (Vec<f64>, Vec<f64>) = (start..n).map(|i| ((i + 1) as f64, logs[i])).unzip();
    let (slope, _, rms) = least_squares(&xs, &ys);
    let drop = (slope * (xs[xs.len() - 1] - xs[0])).abs();
    Ok(DecayFit { eta: -slope, fit_residual: rms / drop })
}

/// Ordinary least squares line; returns `(slope, intercept, rms residual)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    (slope, intercept, (ss / n).sqrt())
}

/// Decay exponent of `M_{(a, b, k)}` from `n` iterates of the seeded start.
pub fn decay_exponent(model: &TransferModel, params: TwistParams, n: usize, seed: u64) -> Result<DecayFit> {
    let m = model.matrix(params)?;
    let h0 = seeded_start(model.nu(), seed);
    fit_tail(&model.iterate_log_norms(&m, &h0, n)?)
}

pub fn gap_sweep(model: &TransferModel, grid: &SweepGrid, threshold: f64) -> Result<GapReport> {
    let points = grid
        .points()
        .into_par_iter()
        .map(|(b, k)| {
            let fit = decay_exponent(model, TwistParams::new(0.0, b, k), grid.iterations, grid.seed)?;
            let trivial = b == 0.0 && k == 0;
            Ok(GapPoint { b, k, eta: fit.eta, fit_residual: fit.fit_residual, flagged: !trivial && fit.eta < threshold })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_eta = points
        .iter()
        .filter(|p| !(p.b == 0.0 && p.k == 0))
        .map(|p| p.eta)
        .fold(f64::INFINITY, f64::min);
    Ok(GapReport { depth: model.depth(), iterations: grid.iterations, threshold, points, min_eta })
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityRow {
    pub a: f64,
    pub eta: f64,
    pub fit_residual: f64,
    /// `|η(a) − η(0)| / η(0)`.
    pub relative_deviation: f64,
}

/// `η(a; b, k)` across offsets `|a| ≤ 0.2 δ`.
pub fn small_a_stability(
    model: &TransferModel,
    a_values: &[f64],
    b: f64,
    k: i32,
    iterations: usize,
    seed: u64,
) -> Result<Vec<StabilityRow>> {
    let limit = 0.2 * model.delta();
    if let Some(a) = a_values.iter().find(|a| a.abs() > limit) {
        return Err(Error::InvalidArgument(format!("|a| = {} exceeds 0.2 δ = {limit}", a.abs())));
    }
    let base = decay_exponent(model, TwistParams::new(0.0, b, k), iterations, seed)?.eta;
    a_values
        .par_iter()
        .map(|&a| {
            let fit = decay_exponent(model, TwistParams::new(a, b, k), iterations, seed)?;
            Ok(StabilityRow {
                a,
                eta: fit.eta,
                fit_residual: fit.fit_residual,
                relative_deviation: (fit.eta - base).abs() / base.abs(),
            })
        })
        .collect()
}

/// All eigenvalues of a small matrix, from the complex Schur form.
pub fn dense_eigenvalues(m: &TransferMatrix) -> Vec<Complex> {
    let n = m.size();
    let dense = m.to_dense();
    let mat = DMatrix::from_row_slice(n, n, &dense);
    let (_, t) = mat.schur().unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

pub fn dense_spectral_radius(m: &TransferMatrix) -> f64 {
    dense_eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct LnicReport {
    pub word_length: usize,
    pub base_points: usize,
    pub words: usize,
    /// `(angle of ω, min over base points of the max over j and Z)`.
    pub per_direction: Vec<(f64, f64)>,
    pub value: f64,
}

/// `ω` directions equally spaced on the half circle (the pairing is odd in ω).
pub fn omega_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| std::f64::consts::PI * i as f64 / count as f64).collect()
}

/// Numerical LNIC certificate.
///
/// Words `α₀, α_j` of length `word_length` all end in the letter `a`. For a
/// base point `u` in an admissible disk, `BP_j(u', u)` is the difference
/// `C_{α₀}(u') − C_{α_j}(u') − C_{α₀}(u) + C_{α_j}(u)` of word cocycles,
/// valued in `ℝ × SO(2)`. Its derivative in `u'` at `u` along `Z` is
/// paired with `ω = (cos φ, sin φ)`. For Fuchsian schemes the coding lives
/// on the real line, so only real base points and `Z = 1` are used.
pub fn lnic_probe(
    scheme: &SchottkyScheme,
    word_length: usize,
    samples: usize,
    omegas: &[f64],
    seed: u64,
) -> Result<LnicReport> {
    let last = Symbol(0);
    let words = words_ending_in(scheme, word_length, last);
    if word_length < 2 || words.len() < 2 {
        return Err(Error::InsufficientWords);
    }
    let words: Vec<Word> = words.into_iter().take(64).collect();
    let fuchsian = scheme.is_fuchsian();
    let directions: Vec<Complex> = if fuchsian {
        vec![Complex::new(1.0, 0.0)]
    } else {
        vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4)]
    };
    let bases: Vec<Complex> = limit_points(scheme, samples * 8, 30, seed)?
        .into_iter()
        .filter(|&z| scheme.locate(z).is_some_and(|y| y != last.bar()))
        .take(samples)
        .collect();
    if bases.is_empty() {
        return Err(Error::EmptyBall);
    }

    // derivative vectors (dτ, dθ) of C_{α₀} − C_{α_j} for each base, j, Z
    let grads: Vec<Vec<(f64, f64)>> = bases
        .par_iter()
        .map(|&u| {
            let h = 1e-6;
            let mut out = Vec::new();
            let diff = |w: &Word, z: Complex| -> Result<(f64, f64)> {
                let c = scheme.word_cocycle(w, z)?;
                Ok((c.tau, c.theta))
            };
            for dir in &directions {
                let plus = u + dir * h;
                let minus = u - dir * h;
                let c0p = diff(&words[0], plus)?;
                let c0m = diff(&words[0], minus)?;
                for w in &words[1..] {
                    let cjp = diff(w, plus)?;
                    let cjm = diff(w, minus)?;
                    let dtau = ((c0p.0 - cjp.0) - (c0m.0 - cjm.0)) / (2.0 * h);
                    let dtheta = wrap_angle((c0p.1 - cjp.1) - (c0m.1 - cjm.1)) / (2.0 * h);
                    out.push((dtau, dtheta));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let per_direction: Vec<(f64, f64)> = omegas
        .iter()
        .map(|&phi| {
            let (c, s) = (phi.cos(), phi.sin());
            let worst = grads
                .iter()
                .map(|g| g.iter().map(|(dt, dth)| (c * dt + s * dth).abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min);
            (phi, worst)
        })
        .collect();
    let value = per_direction.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(LnicReport { word_length, base_points: bases.len(), words: words.len(), per_direction, value })
}

fn words_ending_in(scheme: &SchottkyScheme, length: usize, last: Symbol) -> Vec<Word> {
    if length == 0 {
        return Vec::new();
    }
    let mut words: Vec<Vec<Symbol>> = vec![vec![last]];
    for _ in 1..length {
        let mut next = Vec::new();
        for w in &words {
            for x in scheme.symbols().filter(|&x| x.bar() != w[0]) {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(x);
                v.extend_from_slice(w);
                next.push(v);
            }
        }
        words = next;
    }
    words.sort();
    words.into_iter().map(|w| Word::new(w).expect("built admissibly")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_slope() {
        let logs: Vec<f64> = (1..=40).map(|j| 2.0 - 0.3 * j as f64).collect();
        let fit = fit_tail(&logs).unwrap();
        assert!((fit.eta - 0.3).abs() < 1e-12);
        assert!(fit.fit_residual < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(SweepGrid::new(vec![], vec![0], 40, 0).is_err());
        assert!(SweepGrid::new(vec![0.0], vec![0], 10, 0).is_err());
        assert_eq!(SweepGrid::new(vec![0.0, 1.0], vec![0, 1, 2], 40, 0).unwrap().points().len(), 6);
    }

    #[test]
    fn seeded_start_is_unit_and_reproducible() {
        let nu = vec![0.25; 4];
        let a = seeded_start(&nu, 3);
        assert_eq!(a, seeded_start(&nu, 3));
        assert!((weighted_norm(&nu, &a) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trivial_point_does_not_decay() {
        let model = TransferModel::new(SchottkyScheme::fixture_b(), 5).unwrap();
        let m = model.matrix(TwistParams::untwisted(0.0)).unwrap();
        let h = vec![Complex::new(1.0, 0.0); model.size()];
        let fit = fit_tail(&model.iterate_log_norms(&m, &h, 40).unwrap()).unwrap();
        assert!(fit.eta.abs() < 1e-6);
    }

    #[test]
    fn fuchsian_character_twist_is_trivial() {
        let model = TransferModel::new(SchottkyScheme::fixture_a(), 5).unwrap();
        for k in 1..=3 {
            let fit = decay_exponent(&model, TwistParams::new(0.0, 0.0, k), 40, 1).unwrap();
            assert!(fit.eta.abs() < 1e-6);
        }
    }

    #[test]
    fn conjugate_parameters_share_the_spectrum() {
        let model = TransferModel::new(SchottkyScheme::fixture_b(), 3).unwrap();
        let p = model.matrix(TwistParams::new(0.0, 2.0, 1)).unwrap();
        let q = model.matrix(TwistParams::new(0.0, -2.0, -1)).unwrap();
        let rp = dense_spectral_radius(&p);
        let rq = dense_spectral_radius(&q);
        assert!((rp - rq).abs() < 1e-12);
    }

    #[test]
    fn dense_oracle_sees_unit_eigenvalue() {
        let model = TransferModel::new(SchottkyScheme::fixture_a(), 3).unwrap();
        let m = model.matrix(TwistParams::untwisted(0.0)).unwrap();
        assert!((dense_spectral_radius(&m) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn words_share_their_last_letter() {
        let scheme = SchottkyScheme::fixture_b();
        let words = words_ending_in(&scheme, 3, Symbol(0));
        assert_eq!(words.len(), 9);
        assert!(words.iter().all(|w| w.last() == Some(Symbol(0))));
        assert!(matches!(lnic_probe(&scheme, 1, 10, &omega_grid(4), 0), Err(Error::InsufficientWords)));
    }

    #[test]
    fn lnic_degenerates_for_fuchsian_holonomy() {
        let scheme = SchottkyScheme::fixture_a();
        let rot = lnic_probe(&scheme, 3, 20, &[std::f64::consts::FRAC_PI_2], 2).unwrap();
        assert!(rot.value < 1e-8);
        let length = lnic_probe(&scheme, 3, 20, &[0.0], 2).unwrap();
        assert!(length.value > 1e-6);
    }
}
