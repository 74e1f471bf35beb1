use rayon::prelude::*;

use crate::coding::CylinderTable;
use crate::error::{Error, Result};
use crate::geometry::Complex;

use super::NormalizedWeights;

/// Exponent offset `a`, frequency `b` and SO(2) character index `k`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct TwistParams {
    pub a: f64,
    pub b: f64,
    pub k: i32,
}

impl TwistParams {
    pub fn new(a: f64, b: f64, k: i32) -> Self {
        TwistParams { a, b, k }
    }

    pub fn untwisted(a: f64) -> Self {
        TwistParams { a, b: 0.0, k: 0 }
    }

    pub fn is_untwisted(&self) -> bool {
        self.b == 0.0 && self.k == 0
    }

    /// Surrogate for the norm of the tensored representation, `max(|b|, |k|)`.
    pub fn rho_norm(&self) -> f64 {
        self.b.abs().max(self.k.unsigned_abs() as f64)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    /// Weights `e^{−sτ}` before twisting; `params.a` is ignored.
    Raw { s: f64 },
    /// Weights `e^{f^{(a)}}` built from the RPF data at the critical exponent.
    Normalized(&'a NormalizedWeights),
}

/// Sparse discretized transfer operator on depth-`k` cylinders.
///
/// Row `β` holds the `2r − 1` preimage cylinders `α` (those with `σα ⊂ β`),
/// in increasing index order. Every entry carries the weight of the branch
/// evaluated at the representative of `α`.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    depth: usize,
    size: usize,
    arity: usize,
    params: TwistParams,
    cols: Vec<u32>,
    weights: Vec<Complex>,
    /// For each column, positions in `weights` of its entries.
    transpose: Vec<u32>,
}

impl TransferMatrix {
    pub fn assemble(table: &CylinderTable, mode: Mode<'_>, params: TwistParams) -> Result<Self> {
        let size = table.len();
        let arity = table.alphabet_size() - 1;
        let k = params.k as f64;
        let mut cols = Vec::with_capacity(size * arity);
        for beta in 0..size {
            cols.extend(table.preimages(beta).map(|a| a as u32));
        }
        let (scale, h) = match mode {
            Mode::Raw { s } => (-s, None),
            Mode::Normalized(w) => {
                if w.depth() != table.depth() || w.len() != size {
                    return Err(Error::InvalidArgument("normalized weights come from another depth".into()));
                }
                if w.a() != params.a {
                    return Err(Error::InvalidArgument(format!(
                        "weights normalized at a = {} used with a = {}",
                        w.a(),
                        params.a
                    )));
                }
                (-(params.a + w.delta()), Some((w.h0(), w.lambda_a())))
            }
        };
        let weights: Vec<Complex> = cols
            .par_iter()
            .enumerate()
            .map(|(pos, &alpha)| {
                let alpha = alpha as usize;
                let c = table.cocycle(alpha);
                let mut modulus = (scale * c.tau).exp();
                if let Some((h0, lambda)) = h {
                    let beta = pos / arity;
                    modulus *= h0[alpha] / (h0[beta] * lambda);
                }
                let phase = params.b * c.tau - k * c.theta;
                if phase == 0.0 {
                    Complex::new(modulus, 0.0)
                } else {
                    Complex::from_polar(modulus, phase)
                }
            })
            .collect();
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::NonFinite("transfer weights"));
        }
        let transpose = build_transpose(&cols, size, arity);
        Ok(TransferMatrix { depth: table.depth(), size, arity, params, cols, weights, transpose })
    }

    /// Replaces `θ` by `θ + φ∘σ − φ`, i.e. entry `(β, α)` picks up
    /// `e^{−ik(φ(β) − φ(α))}`. The result is conjugate to `self` by a
    /// unimodular diagonal.
    pub fn regauged(&self, phi: &[f64]) -> Result<Self> {
        if phi.len() != self.size {
            return Err(Error::InvalidArgument("gauge function has the wrong length".into()));
        }
        let k = self.params.k as f64;
        let mut out = self.clone();
        for (pos, w) in out.weights.iter_mut().enumerate() {
            let beta = pos / self.arity;
            let alpha = self.cols[pos] as usize;
            *w *= Complex::from_polar(1.0, -k * (phi[beta] - phi[alpha]));
        }
        Ok(out)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn params(&self) -> TwistParams {
        self.params
    }

    pub fn nonzeros(&self) -> usize {
        self.weights.len()
    }

    /// `(column, weight)` pairs of one row.
    pub fn row(&self, beta: usize) -> impl Iterator<Item = (usize, Complex)> + '_ {
        let range = beta * self.arity..(beta + 1) * self.arity;
        self.cols[range.clone()].iter().map(|&c| c as usize).zip(self.weights[range].iter().copied())
    }

    pub fn get(&self, beta: usize, alpha: usize) -> Complex {
        self.row(beta).find(|&(c, _)| c == alpha).map_or(Complex::new(0.0, 0.0), |(_, w)| w)
    }

    pub fn is_real(&self) -> bool {
        self.weights.iter().all(|w| w.im == 0.0)
    }

    /// The untwisted matrix with entrywise moduli.
    pub fn modulus(&self) -> TransferMatrix {
        let mut out = self.clone();
        for w in &mut out.weights {
            *w = Complex::new(w.norm(), 0.0);
        }
        out.params = TwistParams::untwisted(self.params.a);
        out
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        let mut out = vec![Complex::new(0.0, 0.0); self.size];
        self.apply_into(v, &mut out);
        out
    }

    pub fn apply_into(&self, v: &[Complex], out: &mut [Complex]) {
        out.par_iter_mut().enumerate().for_each(|(beta, o)| {
            *o = self.row(beta).map(|(a, w)| w * v[a]).sum();
        });
    }

    /// `v ↦ M v` using only the real parts of the weights.
    pub fn apply_real(&self, v: &[f64], out: &mut [f64]) {
        out.par_iter_mut().enumerate().for_each(|(beta, o)| {
            let base = beta * self.arity;
            let mut acc = 0.0;
            for j in base..base + self.arity {
                acc += self.weights[j].re * v[self.cols[j] as usize];
            }
            *o = acc;
        });
    }

    /// `ν ↦ νM` using only the real parts of the weights.
    pub fn apply_transpose_real(&self, v: &[f64], out: &mut [f64]) {
        out.par_iter_mut().enumerate().for_each(|(alpha, o)| {
            let base = alpha * self.arity;
            let mut acc = 0.0;
            for &pos in &self.transpose[base..base + self.arity] {
                let pos = pos as usize;
                acc += self.weights[pos].re * v[pos / self.arity];
            }
            *o = acc;
        });
    }

    /// Dense row-major copy, for small depths.
    pub fn to_dense(&self) -> Vec<Complex> {
        let mut dense = vec![Complex::new(0.0, 0.0); self.size * self.size];
        for beta in 0..self.size {
            for (a, w) in self.row(beta) {
                dense[beta * self.size + a] += w;
            }
        }
        dense
    }
}

fn build_transpose(cols: &[u32], size: usize, arity: usize) -> Vec<u32> {
    let mut fill = vec![0usize; size];
    let mut transpose = vec![0u32; size * arity];
    for (pos, &c) in cols.iter().enumerate() {
        let c = c as usize;
        transpose[c * arity + fill[c]] = pos as u32;
        fill[c] += 1;
    }
    debug_assert!(fill.iter().all(|&f| f == arity));
    transpose
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{CylinderTable, SchottkyScheme};

    #[test]
    fn depth_one_shape() {
        let scheme = SchottkyScheme::fixture_a();
        let table = CylinderTable::build(&scheme, 1, 100).unwrap();
        let m = TransferMatrix::assemble(&table, Mode::Raw { s: 0.5 }, TwistParams::untwisted(0.0)).unwrap();
        assert_eq!(m.size(), 4);
        assert_eq!(m.nonzeros(), 12);
        let dense = m.to_dense();
        for beta in 0..4 {
            let nz = (0..4).filter(|&a| dense[beta * 4 + a].norm() > 0.0).count();
            assert_eq!(nz, 3);
            // the inverse of the target's first letter cannot precede it
            assert_eq!(dense[beta * 4 + (beta ^ 1)].norm(), 0.0);
        }
    }

    #[test]
    fn twist_is_unimodular() {
        let scheme = SchottkyScheme::fixture_b();
        let table = CylinderTable::build(&scheme, 4, 10_000).unwrap();
        let plain = TransferMatrix::assemble(&table, Mode::Raw { s: 0.7 }, TwistParams::untwisted(0.0)).unwrap();
        let twisted = TransferMatrix::assemble(&table, Mode::Raw { s: 0.7 }, TwistParams::new(0.0, 5.0, -3)).unwrap();
        for beta in 0..table.len() {
            for ((a1, w1), (a2, w2)) in plain.row(beta).zip(twisted.row(beta)) {
                assert_eq!(a1, a2);
                assert!((w1.norm() - w2.norm()).abs() <= 1e-15 * w1.norm());
            }
        }
        assert!(plain.is_real());
        assert!(!twisted.is_real());
    }

    #[test]
    fn transpose_application_matches_dense() {
        let scheme = SchottkyScheme::fixture_b();
        let table = CylinderTable::build(&scheme, 3, 1000).unwrap();
        let m = TransferMatrix::assemble(&table, Mode::Raw { s: 0.3 }, TwistParams::untwisted(0.0)).unwrap();
        let n = m.size();
        let dense = m.to_dense();
        let v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64).sin()).collect();
        let mut right = vec![0.0; n];
        let mut left = vec![0.0; n];
        m.apply_real(&v, &mut right);
        m.apply_transpose_real(&v, &mut left);
        for i in 0..n {
            let r: f64 = (0..n).map(|j| dense[i * n + j].re * v[j]).sum();
            let l: f64 = (0..n).map(|j| dense[j * n + i].re * v[j]).sum();
            assert!((r - right[i]).abs() < 1e-13);
            assert!((l - left[i]).abs() < 1e-13);
        }
    }
}
