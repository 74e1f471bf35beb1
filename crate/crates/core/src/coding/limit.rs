use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::SchottkyScheme;
use crate::error::{Error, Result};
use crate::geometry::Complex;

/// `n` limit-set samples: images of a disk center under uniformly random
/// admissible words of length `word_length`.
pub fn limit_points(
    scheme: &SchottkyScheme,
    n: usize,
    word_length: usize,
    seed: u64,
) -> Result<Vec<Complex>> {
    if word_length < 30 {
        return Err(Error::InvalidArgument(format!(
            "word length {word_length} < 30 does not resolve the limit set"
        )));
    }
    let alphabet = scheme.alphabet_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // words are drawn sequentially so the stream is independent of threading
    let mut words = vec![0u8; n * (word_length + 1)];
    for word in words.chunks_mut(word_length + 1) {
        let mut x = rng.random_range(0..alphabet);
        word[0] = x as u8;
        for slot in word.iter_mut().skip(1) {
            let d = rng.random_range(0..alphabet - 1);
            x = if d < (x ^ 1) { d } else { d + 1 };
            *slot = x as u8;
        }
    }
    words
        .par_chunks(word_length + 1)
        .map(|word| {
            // the last letter picks the disk whose center is pushed inward
            let (&base, head) = word.split_last().unwrap();
            let mut z = scheme.disks()[base as usize].center;
            for &x in head.iter().rev() {
                z = scheme.maps[x as usize].apply(z)?;
            }
            Ok(z)
        })
        .collect()
}

/// Largest normalized projection `|⟨y − x, w⟩| / ε` over sampled points in
/// the closed ball `B_ε(x)`.
pub fn ncp_spread(points: &[Complex], x: Complex, w: Complex, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε = {eps} not in (0, 1)")));
    }
    let w = w / w.norm();
    let mut found = false;
    let mut spread = 0.0f64;
    for &y in points {
        let v = y - x;
        if v.norm() <= eps {
            found = true;
            spread = spread.max((v.re * w.re + v.im * w.im).abs() / eps);
        }
    }
    if found {
        Ok(spread)
    } else {
        Err(Error::EmptyBall)
    }
}

/// Minimum of [`ncp_spread`] over base points, directions and radii.
pub fn ncp_floor(points: &[Complex], bases: &[Complex], directions: &[Complex], radii: &[f64]) -> Result<f64> {
    let mut floor = f64::INFINITY;
    for &x in bases {
        for &w in directions {
            for &eps in radii {
                floor = floor.min(ncp_spread(points, x, w, eps)?);
            }
        }
    }
    Ok(floor)
}
