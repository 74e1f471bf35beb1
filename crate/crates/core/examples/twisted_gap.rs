//! Twisted spectral gap sweep on FIX-B, with a dense eigenvalue check.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::spectral::{decay_exponent, dense_spectral_radius, gap_sweep, SweepGrid};
use schottky_lab::transfer::{TransferModel, TwistParams};

fn main() -> schottky_lab::Result<()> {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 8)?;
    let grid = SweepGrid::new(vec![0.0, 1.0, 5.0, 20.0], vec![0, 1, 3], 100, 0)?;
    let report = gap_sweep(&model, &grid, 0.0)?;
    for p in &report.points {
        println!("b {:>5} k {:>2}: η = {:.6} (fit residual {:.1e})", p.b, p.k, p.eta, p.fit_residual);
    }
    println!("min η = {:.6}", report.min_eta);

    let small = TransferModel::new(SchottkyScheme::fixture_b(), 4)?;
    let params = TwistParams::new(0.0, 5.0, 1);
    let fitted = decay_exponent(&small, params, 100, 0)?.eta;
    let dense = -dense_spectral_radius(&small.matrix(params)?).ln();
    println!("depth 4 at (5, 1): fitted {fitted:.6}, dense {dense:.6}");
    Ok(())
}
