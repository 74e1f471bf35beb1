//! The shortest closed geodesics of FIX-B with their holonomy angles.

use schottky_lab::coding::{closed_geodesics, SchottkyScheme};

fn main() -> schottky_lab::Result<()> {
    let geodesics = closed_geodesics(&SchottkyScheme::fixture_b(), 12.0, 1_000_000)?;
    println!("{} classes with length ≤ 12", geodesics.len());
    for g in geodesics.iter().take(20) {
        println!("{:>8}  length {:.10}  angle {:+.10}", g.word, g.length, g.angle);
    }
    Ok(())
}
