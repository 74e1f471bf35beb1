//! Critical exponent of both fixtures as the cylinder depth grows.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::transfer::TransferModel;

fn main() -> schottky_lab::Result<()> {
    for (name, scheme) in [("FIX-A", SchottkyScheme::fixture_a()), ("FIX-B", SchottkyScheme::fixture_b())] {
        for depth in [2, 4, 6, 8, 10] {
            let model = TransferModel::new(scheme.clone(), depth)?;
            println!("{name} depth {depth:>2} ({:>6} cylinders): δ = {:.12}", model.size(), model.delta());
        }
    }
    Ok(())
}
