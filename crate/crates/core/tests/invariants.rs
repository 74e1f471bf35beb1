mod common;

use common::*;
use schottky_lab::coding::{limit_points, ncp_floor, SchottkyScheme};
use schottky_lab::correlation::{
    fit_decay, horizon, upsilon, upsilon_series, Observable, Profile, TimeGrid,
};
use schottky_lab::geometry::Complex;
use schottky_lab::spectral::{
    decay_exponent, lnic_probe, omega_grid, small_a_stability,
};
use schottky_lab::transfer::{TransferModel, TwistParams};

fn coarse() -> TimeGrid {
    TimeGrid { step: 0.01, stride: 10 }
}

#[test]
fn conjugate_twists_decay_alike() {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 6).unwrap();
    for (b, k) in [(1.0, 1), (5.0, -3), (20.0, 0)] {
        let p = decay_exponent(&model, TwistParams::new(0.0, b, k), 100, 3).unwrap().eta;
        let q = decay_exponent(&model, TwistParams::new(0.0, -b, -k), 100, 3).unwrap().eta;
        assert!((p - q).abs() < 1e-3, "({b}, {k}): {p} vs {q}");
    }
}

#[test]
fn fuchsian_collapse() {
    let model = TransferModel::new(SchottkyScheme::fixture_a(), 7).unwrap();
    for k in 1..=3 {
        assert!(decay_exponent(&model, TwistParams::new(0.0, 0.0, k), 60, 1).unwrap().eta.abs() < 1e-6);
    }
    for b in [1.0, -1.0, 5.0, 20.0] {
        assert!(decay_exponent(&model, TwistParams::new(0.0, b, 0), 60, 1).unwrap().eta > 0.05);
    }
}

#[test]
fn small_offsets_stay_in_band() {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 6).unwrap();
    let rows = small_a_stability(&model, &[-0.05, -0.025, 0.0, 0.025, 0.05], 5.0, 1, 100, 0).unwrap();
    let base = decay_exponent(&model, TwistParams::new(0.0, 5.0, 1), 100, 0).unwrap().eta;
    let zero = rows.iter().find(|r| r.a == 0.0).unwrap();
    assert_eq!(zero.eta, base);
    assert!(rows.iter().all(|r| r.relative_deviation < 0.2));
    assert!(small_a_stability(&model, &[0.1], 5.0, 1, 100, 0).is_err());
}

#[test]
fn lnic_floors() {
    let b = lnic_probe(&SchottkyScheme::fixture_b(), 4, 32, &omega_grid(16), 0).unwrap();
    assert!(b.value > FIX_B_LNIC_FLOOR, "{}", b.value);
    let a = SchottkyScheme::fixture_a();
    assert!(lnic_probe(&a, 4, 32, &[0.0], 0).unwrap().value > FIX_A_LNIC_LENGTH_FLOOR);
    assert!(lnic_probe(&a, 4, 32, &[std::f64::consts::FRAC_PI_2], 0).unwrap().value < 1e-8);
}

#[test]
fn non_concentration_separates_the_fixtures() {
    let directions: Vec<Complex> = omega_grid(8).iter().map(|&t| Complex::from_polar(1.0, t)).collect();
    let b = limit_points(&SchottkyScheme::fixture_b(), 200_000, 30, 0).unwrap();
    assert!(ncp_floor(&b, &b[..16], &directions, &[0.1, 0.01]).unwrap() > FIX_B_NCP_FLOOR);
    // the Fuchsian limit set lies on a line, so the normal direction sees nothing
    let a = limit_points(&SchottkyScheme::fixture_a(), 200_000, 30, 0).unwrap();
    assert!(ncp_floor(&a, &a[..16], &directions, &[0.1, 0.01]).unwrap() < 1e-12);
}

#[test]
fn upsilon_is_bilinear() {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 4).unwrap();
    let p = Profile::SineSquared;
    let f = Observable::separable(4, 1, p, &[1.0, 0.3, -0.7, 2.0], &[(1, Complex::new(0.5, 0.2)), (-1, Complex::new(0.5, -0.2))]).unwrap();
    let g = Observable::separable(4, 1, p, &[0.4, 1.1, 0.9, -0.2], &[(0, Complex::new(1.0, 0.0)), (2, Complex::new(0.1, 0.3)), (-2, Complex::new(0.1, -0.3))]).unwrap();
    let h = Observable::character(4, 1, p).unwrap();
    let (a, b) = (0.37, -1.9);
    let mix = f.combine(a, &g, b).unwrap();
    for t in [0.0, 1.3, 4.0, 11.5] {
        let lhs = upsilon(&model, &mix, &h, t, coarse()).unwrap().upsilon;
        let rhs = a * upsilon(&model, &f, &h, t, coarse()).unwrap().upsilon + b * upsilon(&model, &g, &h, t, coarse()).unwrap().upsilon;
        assert!((lhs - rhs).abs() < 1e-10, "t = {t}: {lhs} vs {rhs}");
        let lhs = upsilon(&model, &h, &mix, t, coarse()).unwrap().upsilon;
        let rhs = a * upsilon(&model, &h, &f, t, coarse()).unwrap().upsilon + b * upsilon(&model, &h, &g, t, coarse()).unwrap().upsilon;
        assert!((lhs - rhs).abs() < 1e-10, "t = {t}: {lhs} vs {rhs}");
    }
}

#[test]
fn decomposition_is_exact() {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 5).unwrap();
    let phi = Observable::character(4, 1, Profile::SineSquared).unwrap();
    let s = upsilon_series(&model, &phi, &phi, 20.0, coarse()).unwrap();
    for i in 0..s.t.len() {
        assert_eq!(s.upsilon[i], s.upsilon0[i] + s.upsilon1[i]);
        if s.t[i] >= s.max_tau {
            assert_eq!(s.upsilon1[i], 0.0);
        }
    }
    assert!(s.upsilon[0] >= 0.0);
}

#[test]
fn depth_refinement_within_one_percent() {
    let phi = Observable::character(4, 1, Profile::SineSquared).unwrap();
    let shallow = TransferModel::new(SchottkyScheme::fixture_b(), 4).unwrap();
    let deep = TransferModel::new(SchottkyScheme::fixture_b(), 6).unwrap();
    for t in [0.0, 2.0, 5.0, 9.0] {
        let a = upsilon(&shallow, &phi, &phi, t, coarse()).unwrap().upsilon;
        let b = upsilon(&deep, &phi, &phi, t, coarse()).unwrap().upsilon;
        assert!((a - b).abs() <= 0.01 * b.abs(), "t = {t}: {a} vs {b}");
    }
}

/// Iterate decay counts steps of the coding; the correlation decays in flow
/// time. Dividing by the mean return time puts both in the same unit.
#[test]
fn correlation_decay_matches_spectral_rate_per_unit_time() {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 6).unwrap();
    let phi = Observable::character(4, 1, Profile::SineSquared).unwrap();
    let grid = TimeGrid { step: 0.005, stride: 20 };
    let series = upsilon_series(&model, &phi, &phi, horizon(&model), grid).unwrap();
    let fitted = fit_decay(&series).unwrap();
    let spectral = decay_exponent(&model, TwistParams::new(0.0, 0.0, 1), 100, 0).unwrap().eta;
    let mean_tau: f64 = model.nu().iter().zip(model.table().taus()).map(|(n, t)| n * t).sum();
    let per_time = spectral / mean_tau;
    assert!((fitted.eta - per_time).abs() <= 0.15 * per_time, "{} vs {per_time}", fitted.eta);
}
