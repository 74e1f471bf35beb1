//! Character sums over closed geodesics and the prime geodesic ratio.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::correlation::holonomy_equidistribution;
use schottky_lab::transfer::TransferModel;

fn main() -> schottky_lab::Result<()> {
    for (name, scheme, t_values) in [
        ("FIX-A", SchottkyScheme::fixture_a(), vec![10.0, 20.0, 30.0]),
        ("FIX-B", SchottkyScheme::fixture_b(), vec![15.0, 25.0, 35.0, 45.0]),
    ] {
        let delta = TransferModel::new(scheme.clone(), 10)?.delta();
        for row in holonomy_equidistribution(&scheme, &t_values, delta, 2_000_000)? {
            println!(
                "{name} T {:>4}: {:>6} geodesics, |S1| {:.4}, |S2| {:.4}, |S3| {:.4}, #G/li {:.4}",
                row.t, row.count, row.s[0], row.s[1], row.s[2], row.li_ratio
            );
        }
    }
    Ok(())
}
