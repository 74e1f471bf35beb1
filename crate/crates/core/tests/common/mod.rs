#![allow(dead_code)]

use std::collections::HashSet;
use std::time::{Duration, Instant};

use schottky_lab::coding::{SchottkyScheme, Symbol, Word};
use schottky_lab::geometry::Complex;

/// `η(b, k)` floor on the FIX-B sweep at depth 8 with 100 iterates: the
/// measured minimum over the grid is 0.0513 at `(±5, 0)`.
pub const FIX_B_GAP_FLOOR: f64 = 0.04;
/// `η(5, 0)` floor on FIX-A at depth 8; measured 0.1667.
pub const FIX_A_LENGTH_GAP_FLOOR: f64 = 0.13;
/// LNIC probe floor on FIX-B (word length 4, 32 base points, 16 angles);
/// measured 0.0034.
pub const FIX_B_LNIC_FLOOR: f64 = 0.0025;
/// LNIC probe floor on FIX-A along the length direction; measured 0.0074.
pub const FIX_A_LNIC_LENGTH_FLOOR: f64 = 0.005;
/// Non-concentration floor on FIX-B (200 000 points, 16 bases, 8
/// directions, radii 0.1 and 0.01); measured 0.0076.
pub const FIX_B_NCP_FLOOR: f64 = 0.005;

/// Box-counting estimate of the dimension of a planar point cloud: slope of
/// `log N(ε)` against `log(1/ε)` for `ε = 10^{−e/4}`, `e ∈ exponents`.
pub fn box_counting_dimension(points: &[Complex], exponents: std::ops::RangeInclusive<i32>) -> f64 {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for e in exponents {
        let eps = 10f64.powf(-e as f64 / 4.0);
        let boxes: HashSet<(i64, i64)> =
            points.iter().map(|z| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64)).collect();
        xs.push((1.0 / eps).ln());
        ys.push((boxes.len() as f64).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Every admissible, cyclically reduced word of length `1..=max_len`.
pub fn cyclically_reduced_words(scheme: &SchottkyScheme, max_len: usize) -> Vec<Word> {
    let n = scheme.alphabet_size() as u8;
    let mut layer: Vec<Vec<Symbol>> = (0..n).map(|x| vec![Symbol(x)]).collect();
    let mut out = Vec::new();
    for len in 1..=max_len {
        for w in &layer {
            if len == 1 || w[len - 1] != w[0].bar() {
                out.push(Word::new(w.clone()).unwrap());
            }
        }
        if len < max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..n).map(Symbol).filter(|y| *y != w[len - 1].bar()).map(move |y| {
                        let mut v = w.clone();
                        v.push(y);
                        v
                    })
                })
                .collect();
        }
    }
    out
}

/// One line per acceptance check.
pub fn report(name: &str, pass: bool, detail: &str, elapsed: Duration) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("{verdict} {name}: {detail} ({:.1} s)", elapsed.as_secs_f64());
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}
