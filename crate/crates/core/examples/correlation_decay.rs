//! Correlation of a k = 1 observable on FIX-B: the time series, its decay
//! rate and the Laplace cross-check.

use schottky_lab::coding::SchottkyScheme;
use schottky_lab::correlation::{fit_decay, laplace_series, upsilon_series, Observable, Profile, TimeGrid};
use schottky_lab::geometry::Complex;
use schottky_lab::transfer::TransferModel;

fn main() -> schottky_lab::Result<()> {
    let model = TransferModel::new(SchottkyScheme::fixture_b(), 6)?;
    let phi = Observable::character(4, 1, Profile::SineSquared)?;
    let series = upsilon_series(&model, &phi, &phi, 60.0, TimeGrid { step: 0.005, stride: 20 })?;
    for i in (0..series.t.len()).step_by(60) {
        println!("t {:>6.2}  Υ {:+.6e}  Υ⁰ {:+.6e}  Υ¹ {:+.6e}", series.t[i], series.upsilon[i], series.upsilon0[i], series.upsilon1[i]);
    }
    let decay = fit_decay(&series)?;
    println!("decay rate {:.5} from {} points", decay.eta, decay.points);

    let xi = Complex::new(0.5, 0.0);
    let laplace = laplace_series(&model, &phi, &phi, xi, 30)?;
    let short = upsilon_series(&model, &phi, &phi, 30.0, TimeGrid::default())?;
    println!("Laplace series {:.8}, transformed series {:.8}", laplace.value.re, short.laplace_transform(xi).re);
    Ok(())
}
