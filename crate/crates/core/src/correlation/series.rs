use serde::Serialize;

use super::observable::{hat_phi_all, integrate, Observable};
use crate::error::{Error, Result};
use crate::geometry::Complex;

use crate::transfer::TransferModel;

/// Truncated Laplace series of `Υ` at `ξ`.
#[derive(Clone, Debug, Serialize)]
pub struct LaplaceSeries {
    pub xi_re: f64,
    pub xi_im: f64,
    pub terms: usize,
    /// Transform of `Υ¹`, by quadrature.
    pub direct: Complex,
    /// `n`-th term of the return part, `n = 1..=terms`.
    pub term_values: Vec<Complex>,
    pub value: Complex,
    /// Bound on the omitted terms from their observed geometric decay.
    pub tail_estimate: f64,
    pub ratio: f64,
}

/// `∫_0^∞ e^{−ξt} Υ(t) dt = D(ξ) + Σ_{n≥1} Σ_k (λ_a/λ_0)^n ⟨φ̂_{ξ,k}, M^n_{ξ,k} ψ̂*_{−ξ̄,k}⟩_ν`,
/// with `a = Re ξ`, `M_{ξ,k}` the normalized operator at `(a, −Im ξ, k)`,
/// `ψ̂*` the conjugated transform of `ψ` and `D` the direct term.
pub fn laplace_series(model: &TransferModel, phi: &Observable, psi: &Observable, xi: Complex, terms: usize) -> Result<LaplaceSeries> {
    if !(xi.re > 0.0) {
        return Err(Error::InvalidArgument(format!("Re ξ = {} must be positive", xi.re)));
    }
    if terms < 10 {
        return Err(Error::InvalidArgument(format!("{terms} terms < 10")));
    }
    let table = model.table();
    let nu = model.nu();
    let weights = model.weights_at(xi.re)?;
    let ratio_a = weights.lambda_a() / model.weights().lambda_a();
    let mut term_values = vec![Complex::new(0.0, 0.0); terms];
    let mut direct = Complex::new(0.0, 0.0);
    for k in phi.modes().filter(|&k| psi.mode(k).is_some()) {
        let f = hat_phi_all(phi, table, xi, k)?;
        let mut v: Vec<Complex> = hat_phi_all(psi, table, -xi.conj(), k)?.into_iter().map(|z| z.conj()).collect();
        let m = weights.matrix(table, -xi.im, k)?;
        let mut scale = 1.0;
        for term in term_values.iter_mut() {
            v = m.apply(&v);
            scale *= ratio_a;
            let pairing: Complex = nu.iter().zip(&f).zip(&v).map(|((n, a), b)| a * b * *n).sum();
            *term += pairing * scale;
        }
        let cphi = phi.coefficients_on(table, k)?;
        let cpsi = psi.coefficients_on(table, k)?;
        let (pp, pq) = (phi.profile(), psi.profile());
        for beta in 0..table.len() {
            let c = cphi[beta] * cpsi[beta].conj();
            if c == Complex::new(0.0, 0.0) {
                continue;
            }
            let tau = table.cocycle(beta).tau;
            let inner: Complex = integrate(0.0, tau, 1, |r| {
                let tail: Complex = integrate(r, tau, 1, |s| (-xi * s).exp() * pp.value(s / tau));
                tail * (xi * r).exp() * pq.value(r / tau)
            });
            direct += inner * c * nu[beta];
        }
    }
    let (ratio, tail_estimate) = tail(&term_values)?;
    let value = direct + term_values.iter().sum::<Complex>();
    Ok(LaplaceSeries { xi_re: xi.re, xi_im: xi.im, terms, direct, term_values, value, tail_estimate, ratio })
}

/// Geometric decay rate of the last terms and the implied bound on the
/// rest of the series.
fn tail(terms: &[Complex]) -> Result<(f64, f64)> {
    let window = (terms.len() / 4).max(2);
    let n = terms.len();
    let recent = terms[n - window..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let earlier = terms[n - 2 * window..n - window].iter().map(|z| z.norm()).fold(0.0, f64::max);
    if recent == 0.0 {
        return Ok((0.0, 0.0));
    }
    let ratio = (recent / earlier).powf(1.0 / window as f64);
    if !(ratio < 1.0) {
        return Err(Error::Divergence { ratio });
    }
    Ok((ratio, recent * ratio / (1.0 - ratio)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::SchottkyScheme;
    use crate::correlation::Profile;

    #[test]
    fn orthogonal_series_vanishes() {
        let model = TransferModel::new(SchottkyScheme::fixture_b(), 4).unwrap();
        let phi = Observable::character(4, 0, Profile::SineSquared).unwrap();
        let psi = Observable::character(4, 1, Profile::SineSquared).unwrap();
        let s = laplace_series(&model, &phi, &psi, Complex::new(0.5, 0.0), 20).unwrap();
        assert!(s.term_values.iter().all(|t| t.norm() == 0.0));
        assert_eq!(s.value, Complex::new(0.0, 0.0));
    }

    #[test]
    fn truncation_within_tail_estimate() {
        let model = TransferModel::new(SchottkyScheme::fixture_b(), 5).unwrap();
        let phi = Observable::character(4, 1, Profile::SineSquared).unwrap();
        let short = laplace_series(&model, &phi, &phi, Complex::new(0.5, 0.0), 20).unwrap();
        let long = laplace_series(&model, &phi, &phi, Complex::new(0.5, 0.0), 40).unwrap();
        assert!((short.value - long.value).norm() <= short.tail_estimate);
        assert!(short.tail_estimate < 1e-6 * short.value.norm());
    }

    #[test]
    fn rejects_bad_arguments() {
        let model = TransferModel::new(SchottkyScheme::fixture_a(), 3).unwrap();
        let phi = Observable::character(4, 0, Profile::Constant).unwrap();
        assert!(laplace_series(&model, &phi, &phi, Complex::new(0.0, 1.0), 20).is_err());
        assert!(laplace_series(&model, &phi, &phi, Complex::new(0.5, 0.0), 5).is_err());
    }

    #[test]
    fn growing_terms_diverge() {
        let terms: Vec<Complex> = (0..20).map(|n| Complex::new(1.1f64.powi(n), 0.0)).collect();
        assert!(matches!(tail(&terms), Err(Error::Divergence { .. })));
    }
}
