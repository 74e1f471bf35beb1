use super::rpf::{power_iteration, Side};
use super::{Mode, TransferMatrix, TwistParams};
use crate::coding::CylinderTable;
use crate::error::{Error, Result};

/// Upper end of the root-finding bracket for the critical exponent.
pub const BRACKET_HI: f64 = 2.0;
pub const DIMENSION_TOL: f64 = 1e-12;

/// Pressure evaluator that warm-starts each power iteration from the last
/// eigenvector.
pub struct Pressure<'a> {
    table: &'a CylinderTable,
    start: Option<Vec<f64>>,
}

impl<'a> Pressure<'a> {
    pub fn new(table: &'a CylinderTable) -> Self {
        Pressure { table, start: None }
    }

    /// `P(s) = log λ(s)` of the raw operator with weights `e^{−sτ}`.
    pub fn at(&mut self, s: f64) -> Result<f64> {
        let m = TransferMatrix::assemble(self.table, Mode::Raw { s }, TwistParams::untwisted(0.0))?;
        let pair = power_iteration(&m, Side::Right, self.start.as_deref())?;
        self.start = Some(pair.vector);
        Ok(pair.lambda.ln())
    }
}

pub fn pressure(table: &CylinderTable, s: f64) -> Result<f64> {
    Pressure::new(table).at(s)
}

/// `(s, P(s))` along the given grid.
pub fn pressure_curve(table: &CylinderTable, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut p = Pressure::new(table);
    grid.iter().map(|&s| Ok((s, p.at(s)?))).collect()
}

/// Zero of the pressure on `[0, 2]`: bisection down to `1e-6`, then secant
/// steps (guarded by the bracket) until `|P| < tol`.
pub fn dimension(table: &CylinderTable, tol: f64) -> Result<f64> {
    let mut p = Pressure::new(table);
    let (mut lo, mut hi) = (0.0, BRACKET_HI);
    let (mut p_lo, mut p_hi) = (p.at(lo)?, p.at(hi)?);
    if !(p_lo > 0.0 && p_hi < 0.0) {
        return Err(Error::BracketFailure { lo, hi, p_lo, p_hi });
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let pm = p.at(mid)?;
        if pm > 0.0 {
            lo = mid;
            p_lo = pm;
        } else {
            hi = mid;
            p_hi = pm;
        }
    }
    for _ in 0..100 {
        let mut s = lo - p_lo * (hi - lo) / (p_hi - p_lo);
        if !(s > lo && s < hi) {
            s = 0.5 * (lo + hi);
        }
        let ps = p.at(s)?;
        if ps.abs() < tol {
            return Ok(s);
        }
        if ps > 0.0 {
            lo = s;
            p_lo = ps;
        } else {
            hi = s;
            p_hi = ps;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let s = if p_lo.abs() < p_hi.abs() { lo } else { hi };
    let ps = p.at(s)?;
    if ps.abs() < tol {
        Ok(s)
    } else {
        Err(Error::NoConvergence { iterations: 100, residual_right: ps.abs(), residual_left: f64::NAN })
    }
}
