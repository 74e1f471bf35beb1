//! Pairing maps, composition and the loxodromic data of a product.

use schottky_lab::geometry::{Complex, Disk, MoebiusMap};

fn main() -> schottky_lab::Result<()> {
    let g = MoebiusMap::pairing(Complex::new(-3.0, 0.0), Complex::new(3.0, 0.0), 0.6)?;
    let h = MoebiusMap::pairing(Complex::new(0.0, -1.5), Complex::new(0.0, 1.5), 0.6)?;
    let source = Disk::new(Complex::new(-3.0, 0.0), 0.6)?;
    for z in source.boundary_samples(4) {
        let w = g.apply(z)?;
        println!("|z + 3| = {:.3}  ->  |g(z) - 3| = {:.15}", (z + 3.0).norm(), (w - 3.0).norm());
    }
    for (name, m) in [("g", g), ("h", h), ("gh", g.compose(&h)), ("ghGH", g.compose(&h).compose(&g.inverse()).compose(&h.inverse()))] {
        let data = m.loxodromic_data()?;
        println!("{name:>5}: length {:.12}  angle {:+.12}", data.translation_length, data.rotation_angle);
    }
    Ok(())
}
