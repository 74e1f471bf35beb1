//! Pressure `P(s)` on FIX-B, printed as CSV.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::transfer::{pressure_curve, TransferModel};

fn main() -> schottky_lab::Result<()> {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 7)?;
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    println!("s,pressure");
    for (s, p) in pressure_curve(model.table(), &grid)? {
        println!("{s:.2},{p:.12}");
    }
    println!("# zero at δ = {:.12}", model.delta());
    Ok(())
}
