use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coding::{cylinder_count, CylinderTable};
use crate::error::{Error, Result};
use crate::geometry::Complex;

/// Nodes of the fixed quadrature rule.
pub const QUADRATURE_NODES: usize = 32;

/// Shape of an observable along one fiber `[0, τ(u))`, in the rescaled
/// variable `x = t/τ(u) ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Constant,
    /// `sin²(πx)`: vanishes with its derivative at both ends.
    #[default]
    SineSquared,
}

impl Profile {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Profile::Constant => 1.0,
            Profile::SineSquared => {
                let s = (std::f64::consts::PI * x).sin();
                s * s
            }
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(QUADRATURE_NODES))
}

/// `∫_lo^hi f` with the 32-node rule on each of `panels` equal panels.
pub fn integrate<T, F>(lo: f64, hi: f64, panels: usize, f: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let (nodes, weights) = rule();
    let width = (hi - lo) / panels as f64;
    let mut total = T::default();
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * width;
        for (x, w) in nodes.iter().zip(weights) {
            total = total + f(mid + 0.5 * width * x) * (0.5 * width * w);
        }
    }
    total
}

/// `∫_0^τ p(t/τ) e^{−ξt} dt`.
pub fn profile_transform(profile: Profile, tau: f64, xi: Complex, panels: usize) -> Complex {
    integrate(0.0, tau, panels, |t| (-xi * t).exp() * profile.value(t / tau))
}

/// Panels needed to resolve the oscillation of `e^{−ξt}` over `[0, τ]`.
pub fn panels_for(tau: f64, xi: Complex) -> usize {
    ((xi.im.abs() * tau / 16.0).ceil() as usize).max(1)
}

/// A real observable on the holonomy suspension,
/// `φ(u, m, t) = p(t/τ(u)) Σ_k c_k(u) e^{ikm}`, with each `c_k` constant on
/// depth-`d` cylinders and `c_{−k} = conj(c_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    alphabet: usize,
    depth: usize,
    profile: Profile,
    /// Sorted by `k`; one coefficient per depth-`d` cylinder.
    modes: Vec<(i32, Vec<Complex>)>,
}

impl Observable {
    pub fn new(alphabet: usize, depth: usize, profile: Profile, mut modes: Vec<(i32, Vec<Complex>)>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("observable depth must be at least 1".into()));
        }
        let len = cylinder_count(alphabet, depth) as usize;
        modes.sort_by_key(|(k, _)| *k);
        for w in modes.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("mode {} given twice", w[0].0)));
            }
        }
        for (k, c) in &modes {
            if c.len() != len {
                return Err(Error::InvalidArgument(format!("mode {k} has {} values, expected {len}", c.len())));
            }
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("observable coefficients"));
            }
        }
        let obs = Observable { alphabet, depth, profile, modes };
        for (k, c) in &obs.modes {
            let partner = obs.mode(-k);
            let real = c.iter().enumerate().all(|(i, z)| {
                let p = partner.map_or(Complex::new(0.0, 0.0), |p| p[i]);
                (z - p.conj()).norm() <= 1e-12 * (1.0 + z.norm())
            });
            if !real {
                return Err(Error::InvalidArgument(format!("modes {k} and {} are not conjugate", -k)));
            }
        }
        Ok(obs)
    }

    /// `base(u)·Σ_k c_k e^{ikm}` with scalar coefficients.
    pub fn separable(alphabet: usize, depth: usize, profile: Profile, base: &[f64], coefficients: &[(i32, Complex)]) -> Result<Self> {
        let modes = coefficients
            .iter()
            .map(|&(k, c)| (k, base.iter().map(|&b| c * b).collect()))
            .collect();
        Observable::new(alphabet, depth, profile, modes)
    }

    /// `cos(km)` times the profile, constant over the base.
    pub fn character(alphabet: usize, k: i32, profile: Profile) -> Result<Self> {
        let ones = vec![1.0; alphabet];
        if k == 0 {
            return Observable::separable(alphabet, 1, profile, &ones, &[(0, Complex::new(1.0, 0.0))]);
        }
        let half = Complex::new(0.5, 0.0);
        Observable::separable(alphabet, 1, profile, &ones, &[(-k, half), (k, half)])
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> + '_ {
        self.modes.iter().map(|(k, _)| *k)
    }

    pub fn mode(&self, k: i32) -> Option<&[Complex]> {
        self.modes.iter().find(|(j, _)| *j == k).map(|(_, c)| c.as_slice())
    }

    /// `aφ + bψ`; both must share alphabet, depth and profile.
    pub fn combine(&self, a: f64, other: &Observable, b: f64) -> Result<Self> {
        if self.alphabet != other.alphabet || self.depth != other.depth || self.profile != other.profile {
            return Err(Error::InvalidArgument("observables live on different grids".into()));
        }
        let mut ks: Vec<i32> = self.modes().chain(other.modes()).collect();
        ks.sort_unstable();
        ks.dedup();
        let len = cylinder_count(self.alphabet, self.depth) as usize;
        let zero = vec![Complex::new(0.0, 0.0); len];
        let modes = ks
            .into_iter()
            .map(|k| {
                let x = self.mode(k).unwrap_or(&zero);
                let y = other.mode(k).unwrap_or(&zero);
                (k, x.iter().zip(y).map(|(p, q)| p * a + q * b).collect())
            })
            .collect();
        Observable::new(self.alphabet, self.depth, self.profile, modes)
    }

    /// `c_k` on every cylinder of `table`, read off the depth-`d` prefix.
    pub fn coefficients_on(&self, table: &CylinderTable, k: i32) -> Result<Vec<Complex>> {
        self.check_table(table)?;
        let shift = (self.alphabet - 1).pow((table.depth() - self.depth) as u32);
        Ok(match self.mode(k) {
            Some(c) => (0..table.len()).map(|i| c[i / shift]).collect(),
            None => vec![Complex::new(0.0, 0.0); table.len()],
        })
    }

    fn check_table(&self, table: &CylinderTable) -> Result<()> {
        if table.alphabet_size() != self.alphabet || table.depth() < self.depth {
            return Err(Error::InvalidArgument(format!(
                "observable of depth {} does not fit cylinders of depth {}",
                self.depth,
                table.depth()
            )));
        }
        Ok(())
    }
}

/// `φ̂_{ξ,k}` on cylinder `α`: `c_k(α)·∫_0^{τ(α)} p(t/τ) e^{−ξt} dt`.
pub fn hat_phi(obs: &Observable, table: &CylinderTable, xi: Complex, k: i32, alpha: usize) -> Result<Complex> {
    obs.check_table(table)?;
    let shift = (obs.alphabet - 1).pow((table.depth() - obs.depth) as u32);
    let c = obs.mode(k).map_or(Complex::new(0.0, 0.0), |c| c[alpha / shift]);
    let tau = table.cocycle(alpha).tau;
    Ok(c * profile_transform(obs.profile, tau, xi, panels_for(tau, xi)))
}

/// [`hat_phi`] on every cylinder.
pub fn hat_phi_all(obs: &Observable, table: &CylinderTable, xi: Complex, k: i32) -> Result<Vec<Complex>> {
    let c = obs.coefficients_on(table, k)?;
    Ok(c
        .iter()
        .enumerate()
        .map(|(alpha, &c)| {
            if c == Complex::new(0.0, 0.0) {
                c
            } else {
                let tau = table.cocycle(alpha).tau;
                c * profile_transform(obs.profile, tau, xi, panels_for(tau, xi))
            }
        })
        .collect())
}
