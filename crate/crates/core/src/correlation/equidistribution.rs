use serde::Serialize;

use crate::coding::{closed_geodesics, ClosedGeodesic, SchottkyScheme};
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// One row of the holonomy statistics at length bound `T`.
#[derive(Clone, Debug, Serialize)]
pub struct EquidistributionRow {
    pub t: f64,
    /// Oriented primitive closed geodesics with length `≤ T`; each
    /// unoriented class counts twice.
    pub count: usize,
    /// `|S_k(T)|` for `k = 1, 2, 3`.
    pub s: [f64; 3],
    pub li_ratio: f64,
}

/// `S_k = (1/#G) Σ_γ e^{ik·angle(γ)}` over oriented geodesics. Traversing a
/// class backwards negates its angle, so the sum is real.
pub fn character_sum(geodesics: &[ClosedGeodesic], k: i32) -> f64 {
    if geodesics.is_empty() {
        return f64::NAN;
    }
    geodesics.iter().map(|g| (k as f64 * g.angle).cos()).sum::<f64>() / geodesics.len() as f64
}

/// Logarithmic integral `li(x)` for `x > 1`, by Ramanujan's series.
pub fn li(x: f64) -> f64 {
    if !(x > 1.0) {
        return f64::NAN;
    }
    let l = x.ln();
    let mut total = 0.0;
    let mut power = 1.0;
    let mut inner = 0.0;
    for n in 1..400 {
        power *= l / n as f64;
        if (n - 1) % 2 == 0 {
            inner += 1.0 / n as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * power / 2f64.powi(n - 1) * inner;
        total += term;
        if term.abs() < 1e-17 * total.abs() && n > 2 * l as i32 {
            break;
        }
    }
    EULER_GAMMA + l.ln() + x.sqrt() * total
}

/// Character sums and the prime geodesic ratio `#G(T)/li(e^{δT})` on a grid
/// of length bounds.
pub fn holonomy_equidistribution(scheme: &SchottkyScheme, t_values: &[f64], delta: f64, capacity: u64) -> Result<Vec<EquidistributionRow>> {
    if t_values.is_empty() {
        return Err(Error::InvalidArgument("no length bounds".into()));
    }
    let t_max = t_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let all = closed_geodesics(scheme, t_max, capacity)?;
    Ok(t_values
        .iter()
        .map(|&t| {
            let upto = all.partition_point(|g| g.length <= t);
            let set = &all[..upto];
            let count = 2 * upto;
            EquidistributionRow {
                t,
                count,
                s: [1, 2, 3].map(|k| character_sum(set, k).abs()),
                li_ratio: count as f64 / li((delta * t).exp()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logarithmic_integral_values() {
        assert!((li(2.0) - 1.045_163_780_117_492_8).abs() < 1e-13);
        assert!((li(10.0) - 6.165_599_504_787_297).abs() < 1e-12);
        assert!((li(1e6) - 78_627.549_159_462_18).abs() < 1e-7);
        assert!(li(1.0).is_nan());
    }

    #[test]
    fn trivial_character_and_fuchsian_angles() {
        let scheme = SchottkyScheme::fixture_a();
        let geodesics = closed_geodesics(&scheme, 9.0, 1_000_000).unwrap();
        assert_eq!(character_sum(&geodesics, 0), 1.0);
        let rows = holonomy_equidistribution(&scheme, &[7.0, 9.0], 0.3, 1_000_000).unwrap();
        for row in rows {
            assert!(row.s.iter().all(|&s| (s - 1.0).abs() < 1e-12));
        }
    }
}
