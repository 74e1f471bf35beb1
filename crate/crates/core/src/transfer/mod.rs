//! Transfer operators on the cylinder discretization: raw and twisted
//! matrices, Perron data, pressure, the critical exponent and normalized
//! weights.

mod matrix;
mod normalize;
mod pressure;
mod rpf;

pub use matrix::{Mode, TransferMatrix, TwistParams};
pub use normalize::{normalize, NormalizedWeights};
pub use pressure::{dimension, pressure, pressure_curve, Pressure, BRACKET_HI, DIMENSION_TOL};
pub use rpf::{rpf, rpf_warm, subleading_modulus, RpfData, EIGENVALUE_TOL, MAX_ITERATIONS, RESIDUAL_TOL};

use crate::coding::{CylinderTable, SchottkyScheme, DEFAULT_CYLINDER_CAPACITY};
use crate::error::{Error, Result};
use crate::geometry::Complex;

/// A validated scheme together with its depth-`k` cylinders and the
/// normalization at the critical exponent.
#[derive(Clone, Debug)]
pub struct TransferModel {
    scheme: SchottkyScheme,
    table: CylinderTable,
    weights: NormalizedWeights,
}

impl TransferModel {
    pub fn new(scheme: SchottkyScheme, depth: usize) -> Result<Self> {
        Self::with_capacity(scheme, depth, DEFAULT_CYLINDER_CAPACITY)
    }

    pub fn with_capacity(scheme: SchottkyScheme, depth: usize, capacity: u64) -> Result<Self> {
        let scheme = scheme.validated()?;
        let table = CylinderTable::build(&scheme, depth, capacity)?;
        let weights = normalize(&table, 0.0)?;
        Ok(TransferModel { scheme, table, weights })
    }

    pub fn scheme(&self) -> &SchottkyScheme {
        &self.scheme
    }

    pub fn table(&self) -> &CylinderTable {
        &self.table
    }

    pub fn depth(&self) -> usize {
        self.table.depth()
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn delta(&self) -> f64 {
        self.weights.delta()
    }

    pub fn weights(&self) -> &NormalizedWeights {
        &self.weights
    }

    /// Stationary measure of the normalized operator.
    pub fn nu(&self) -> &[f64] {
        self.weights.nu()
    }

    /// Normalized weights at offset `a` (shares `δ`, `h₀`).
    pub fn weights_at(&self, a: f64) -> Result<NormalizedWeights> {
        self.weights.at(&self.table, a)
    }

    /// Normalized, twisted operator `M_{(a, b, k)}`.
    pub fn matrix(&self, params: TwistParams) -> Result<TransferMatrix> {
        if params.a == 0.0 {
            self.weights.matrix(&self.table, params.b, params.k)
        } else {
            self.weights_at(params.a)?.matrix(&self.table, params.b, params.k)
        }
    }

    /// Raw operator with weights `e^{(−s + ib)τ − ikθ}`.
    pub fn raw_matrix(&self, s: f64, b: f64, k: i32) -> Result<TransferMatrix> {
        TransferMatrix::assemble(&self.table, Mode::Raw { s }, TwistParams::new(0.0, b, k))
    }

    /// `log ‖M^j H₀‖₂` for `j = 1..=n`, with the `ν_U`-weighted two-norm.
    pub fn iterate_log_norms(&self, m: &TransferMatrix, h0: &[Complex], n: usize) -> Result<Vec<f64>> {
        iterate_log_norms(m, self.nu(), h0, n)
    }
}

/// `ν`-weighted two-norm `(Σ ν|v|²)^{1/2}`.
pub fn weighted_norm(nu: &[f64], v: &[Complex]) -> f64 {
    nu.iter().zip(v).map(|(w, z)| w * z.norm_sqr()).sum::<f64>().sqrt()
}

/// `log ‖M^j H₀‖₂` for `j = 1..=n`. Iterates are rescaled along the way so
/// that long runs neither underflow nor overflow.
pub fn iterate_log_norms(m: &TransferMatrix, nu: &[f64], h0: &[Complex], n: usize) -> Result<Vec<f64>> {
    if h0.len() != m.size() || nu.len() != m.size() {
        return Err(Error::InvalidArgument("vector length does not match the matrix".into()));
    }
    let start = weighted_norm(nu, h0);
    if !(start > 0.0) {
        return Err(Error::InvalidArgument("initial vector is zero".into()));
    }
    let mut v: Vec<Complex> = h0.iter().map(|z| z / start).collect();
    let mut w = vec![Complex::new(0.0, 0.0); m.size()];
    let mut offset = start.ln();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        m.apply_into(&v, &mut w);
        let norm = weighted_norm(nu, &w);
        if norm == 0.0 {
            out.push(f64::NEG_INFINITY);
            break;
        }
        offset += norm.ln();
        out.push(offset);
        w.iter_mut().for_each(|z| *z /= norm);
        std::mem::swap(&mut v, &mut w);
    }
    Ok(out)
}

/// `‖M^j H₀‖₂` for `j = 1..=n`.
pub fn iterate_decay(m: &TransferMatrix, nu: &[f64], h0: &[Complex], n: usize) -> Result<Vec<f64>> {
    Ok(iterate_log_norms(m, nu, h0, n)?.into_iter().map(f64::exp).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::BranchCocycle;

    fn constant_shift(c: f64, depth: usize) -> CylinderTable {
        let n = crate::coding::cylinder_count(4, depth) as usize;
        CylinderTable::from_cocycles(4, depth, vec![BranchCocycle::new(c, 0.0); n]).unwrap()
    }

    #[test]
    fn mock_full_shift() {
        let table = constant_shift(0.8, 3);
        let m = TransferMatrix::assemble(&table, Mode::Raw { s: 1.3 }, TwistParams::untwisted(0.0)).unwrap();
        let data = rpf(&m).unwrap();
        assert!((data.lambda - 3.0 * (-1.3f64 * 0.8).exp()).abs() < 1e-14);
        for s in [0.0, 0.5, 1.7] {
            assert!((pressure(&table, s).unwrap() - (3f64.ln() - s * 0.8)).abs() < 1e-13);
        }
        let table = constant_shift(3f64.ln(), 3);
        assert!((dimension(&table, 1e-13).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalized_operator_is_stochastic() {
        let scheme = SchottkyScheme::fixture_b();
        let model = TransferModel::new(scheme, 6).unwrap();
        let m = model.matrix(TwistParams::untwisted(0.0)).unwrap();
        let ones = vec![1.0; model.size()];
        let mut out = vec![0.0; model.size()];
        m.apply_real(&ones, &mut out);
        assert!(out.iter().all(|x| (x - 1.0).abs() < 1e-8));
        m.apply_transpose_real(model.nu(), &mut out);
        let l1: f64 = out.iter().zip(model.nu()).map(|(a, b)| (a - b).abs()).sum();
        assert!(l1 < 1e-8);
        let f = model.weights().f_values(model.table());
        for beta in 0..model.size() {
            let s: f64 = f[beta * 3..beta * 3 + 3].iter().map(|x| x.exp()).sum();
            assert!((s - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn eigenvector_iterates_stay_put() {
        let model = TransferModel::new(SchottkyScheme::fixture_a(), 5).unwrap();
        let m = model.matrix(TwistParams::untwisted(0.0)).unwrap();
        let h = vec![Complex::new(1.0, 0.0); model.size()];
        let logs = model.iterate_log_norms(&m, &h, 30).unwrap();
        assert!(logs.iter().all(|x| x.abs() < 1e-9));
    }

    #[test]
    fn offset_normalization_has_unit_eigenvalue() {
        let model = TransferModel::new(SchottkyScheme::fixture_b(), 5).unwrap();
        let m = model.matrix(TwistParams::untwisted(0.05)).unwrap();
        assert!((rpf(&m).unwrap().lambda - 1.0).abs() < 1e-10);
    }
}
