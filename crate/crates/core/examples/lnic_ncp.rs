//! Local non-integrability and non-concentration probes on both fixtures.

use schottky_lab::coding::{limit_points, ncp_floor, SchottkyScheme};
use schottky_lab::geometry::Complex;
use schottky_lab::spectral::{lnic_probe, omega_grid};

fn main() -> schottky_lab::Result<()> {
    let angles = omega_grid(16);
    let directions: Vec<Complex> = omega_grid(8).iter().map(|&t| Complex::from_polar(1.0, t)).collect();
    for (name, scheme) in [("FIX-A", SchottkyScheme::fixture_a()), ("FIX-B", SchottkyScheme::fixture_b())] {
        let lnic = lnic_probe(&scheme, 4, 32, &angles, 0)?;
        let worst = lnic.per_direction.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        println!("{name}: LNIC value {:.3e} (weakest ω at angle {:.3})", lnic.value, worst.0);
        let points = limit_points(&scheme, 100_000, 30, 0)?;
        let floor = ncp_floor(&points, &points[..16], &directions, &[0.1, 0.01])?;
        println!("{name}: NCP floor {floor:.3e}");
    }
    Ok(())
}
