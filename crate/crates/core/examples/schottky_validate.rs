//! Checks the geometric conditions of both fixtures and of a broken scheme.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::geometry::Complex;

fn main() -> schottky_lab::Result<()> {
    let broken = SchottkyScheme::from_pairings(&[
        (Complex::new(-3.0, 0.0), Complex::new(3.0, 0.0), 0.6),
        (Complex::new(-2.8, 0.0), Complex::new(1.0, 0.0), 0.35),
    ])?;
    for (name, scheme) in [("FIX-A", SchottkyScheme::fixture_a()), ("FIX-B", SchottkyScheme::fixture_b()), ("broken", broken)] {
        let report = scheme.validate();
        println!(
            "{name}: passed {}, min margin {:.4}, mixing exponent {:?}",
            report.passed(),
            report.min_margin,
            report.mixing_exponent
        );
        for failure in &report.failures {
            println!("    {failure}");
        }
    }
    Ok(())
}
