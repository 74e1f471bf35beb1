use super::pressure::{dimension, Pressure, DIMENSION_TOL};
use super::rpf::{rpf, RpfData};
use super::{Mode, TransferMatrix, TwistParams};
use crate::coding::CylinderTable;
use crate::error::Result;

/// Normalizing data `f^{(a)} = −(a + δ)τ + log h₀ − log h₀∘σ − log λ_a`.
///
/// `h₀` and `ν₀` are the Perron data of the raw operator at `s = δ`;
/// `ν_U = ν₀·h₀` is the fixed measure of the normalized operator at `a = 0`.
#[derive(Clone, Debug)]
pub struct NormalizedWeights {
    depth: usize,
    delta: f64,
    a: f64,
    lambda_a: f64,
    rpf0: RpfData,
    nu_u: Vec<f64>,
}

impl NormalizedWeights {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.nu_u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu_u.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda_a(&self) -> f64 {
        self.lambda_a
    }

    pub fn h0(&self) -> &[f64] {
        &self.rpf0.h
    }

    pub fn rpf0(&self) -> &RpfData {
        &self.rpf0
    }

    /// Stationary measure `ν_U` of the normalized operator at `a = 0`.
    pub fn nu(&self) -> &[f64] {
        &self.nu_u
    }

    /// The same normalization shifted to another exponent offset.
    pub fn at(&self, table: &CylinderTable, a: f64) -> Result<NormalizedWeights> {
        let lambda_a = if a == 0.0 {
            self.rpf0.lambda
        } else {
            Pressure::new(table).at(self.delta + a)?.exp()
        };
        Ok(NormalizedWeights { a, lambda_a, ..self.clone() })
    }

    /// `f^{(a)}(β, α)` for every stored entry, in row order.
    pub fn f_values(&self, table: &CylinderTable) -> Vec<f64> {
        let h = self.h0();
        let mut out = Vec::with_capacity(table.len() * (table.alphabet_size() - 1));
        for beta in 0..table.len() {
            for alpha in table.preimages(beta) {
                let tau = table.cocycle(alpha).tau;
                out.push(-(self.a + self.delta) * tau + h[alpha].ln() - h[beta].ln() - self.lambda_a.ln());
            }
        }
        out
    }

    pub fn matrix(&self, table: &CylinderTable, b: f64, k: i32) -> Result<TransferMatrix> {
        TransferMatrix::assemble(table, Mode::Normalized(self), TwistParams::new(self.a, b, k))
    }
}

/// Critical exponent and normalizing data at offset `a`.
pub fn normalize(table: &CylinderTable, a: f64) -> Result<NormalizedWeights> {
    let delta = dimension(table, DIMENSION_TOL)?;
    let m = TransferMatrix::assemble(table, Mode::Raw { s: delta }, TwistParams::untwisted(0.0))?;
    let rpf0 = rpf(&m)?;
    let nu_u: Vec<f64> = rpf0.nu.iter().zip(&rpf0.h).map(|(n, h)| n * h).collect();
    let base = NormalizedWeights {
        depth: table.depth(),
        delta,
        a: 0.0,
        lambda_a: rpf0.lambda,
        rpf0,
        nu_u,
    };
    if a == 0.0 {
        Ok(base)
    } else {
        base.at(table, a)
    }
}
