//! The Fuchsian fixture has no holonomy gap, only a length gap.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::spectral::decay_exponent;
use schottky_lab::transfer::{TransferModel, TwistParams};

fn main() -> schottky_lab::Result<()> {
    for (name, scheme) in [("FIX-A", SchottkyScheme::fixture_a()), ("FIX-B", SchottkyScheme::fixture_b())] {
        let model = TransferModel::new(scheme, 7)?;
        for (b, k) in [(0.0, 1), (0.0, 2), (0.0, 3), (5.0, 0)] {
            let eta = decay_exponent(&model, TwistParams::new(0.0, b, k), 100, 0)?.eta;
            println!("{name} η({b}, {k}) = {eta:.3e}");
        }
    }
    Ok(())
}
