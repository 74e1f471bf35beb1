use serde::Serialize;

use super::{SchottkyScheme, Symbol, Word};
use crate::geometry::Complex;

/// Minimal Euclidean gap required between two coding disks.
pub const DISJOINT_MARGIN: f64 = 1e-9;
/// Largest tolerated distance between a boundary image and the target circle.
pub const PAIRING_TOL: f64 = 1e-9;
const BOUNDARY_SAMPLES: usize = 64;
const MAX_CONTRACTION_DEPTH: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct PairMargin {
    pub first: String,
    pub second: String,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub rank: usize,
    pub margins: Vec<PairMargin>,
    pub min_margin: f64,
    pub pairing_residuals: Vec<f64>,
    pub min_branch_derivative: f64,
    pub max_branch_derivative: f64,
    /// Smallest word length at which every branch composition contracts.
    pub contraction_depth: Option<usize>,
    pub mixing_exponent: Option<usize>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub(super) fn validate(scheme: &SchottkyScheme) -> ValidationReport {
    let mut failures = Vec::new();
    let symbols: Vec<Symbol> = scheme.symbols().collect();

    let mut margins = Vec::new();
    for (i, &x) in symbols.iter().enumerate() {
        for &y in &symbols[i + 1..] {
            let margin = scheme.disk(x).gap(scheme.disk(y));
            if margin < DISJOINT_MARGIN {
                failures.push(format!("disks {x} and {y} are not disjoint (gap {margin:e})"));
            }
            margins.push(PairMargin { first: x.to_string(), second: y.to_string(), margin });
        }
    }
    let min_margin = margins.iter().map(|m| m.margin).fold(f64::INFINITY, f64::min);

    let mut pairing_residuals = Vec::new();
    for (i, g) in scheme.generators().iter().enumerate() {
        let name = Symbol(2 * i as u8);
        let mut worst = 0.0f64;
        for z in g.source.boundary_samples(BOUNDARY_SAMPLES) {
            worst = match g.map.apply(z) {
                Ok(w) => worst.max(((w - g.target.center).norm() - g.target.radius).abs()),
                Err(_) => f64::INFINITY,
            };
        }
        if worst > PAIRING_TOL {
            failures.push(format!("generator {name} misses its target circle by {worst:e}"));
        }
        pairing_residuals.push(worst);
        // the exterior of the source goes inside the target exactly when the
        // pole sits inside the source and ∞ lands inside the target
        match g.map.pole() {
            Some(p) if g.source.contains(p, -DISJOINT_MARGIN) => {}
            _ => failures.push(format!("generator {name} does not send the outside of its source disk inward")),
        }
        let [a, _, c, _] = g.map.entries();
        if c.norm() == 0.0 || !g.target.contains(a / c, -DISJOINT_MARGIN) {
            failures.push(format!("generator {name} sends ∞ outside its target disk"));
        }
    }

    let (min_d, max_d) = branch_derivative_range(scheme);
    let contraction_depth = if failures.is_empty() { contraction_depth(scheme) } else { None };
    if failures.is_empty() && contraction_depth.is_none() {
        failures.push(format!(
            "branch compositions do not contract within {MAX_CONTRACTION_DEPTH} steps"
        ));
    }
    let mixing_exponent = scheme.transition_matrix().mixing_exponent();
    if mixing_exponent.is_none() {
        failures.push("transition matrix is not mixing".into());
    }

    ValidationReport {
        rank: scheme.rank(),
        margins,
        min_margin,
        pairing_residuals,
        min_branch_derivative: min_d,
        max_branch_derivative: max_d,
        contraction_depth,
        mixing_exponent,
        failures,
    }
}

/// Range of `|g_x'|` over admissible branches at depth-3 cylinder representatives.
fn branch_derivative_range(scheme: &SchottkyScheme) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for_each_word(scheme, 3, &mut |w| {
        let Ok(rep) = representative(scheme, w) else { return };
        let first = w.symbols()[0];
        for x in scheme.symbols().filter(|&x| x != first.bar()) {
            if let Ok(d) = scheme.map(x).derivative(rep) {
                lo = lo.min(d.norm());
                hi = hi.max(d.norm());
            }
        }
    });
    (lo, hi)
}

/// Smallest `k ≤ 3` such that every length-`k` branch composition has
/// derivative modulus below one on the disks it may act on.
fn contraction_depth(scheme: &SchottkyScheme) -> Option<usize> {
    (1..=MAX_CONTRACTION_DEPTH).find(|&k| {
        let mut ok = true;
        for_each_word(scheme, k, &mut |w| {
            if !ok {
                return;
            }
            let map = scheme.word_map(w);
            let last = w.last().unwrap();
            for y in scheme.successors(last) {
                let disk = scheme.disk(y);
                let samples = disk.boundary_samples(32).chain(std::iter::once(disk.center));
                for z in samples {
                    match map.derivative(z) {
                        Ok(d) if d.norm() < 1.0 => {}
                        _ => ok = false,
                    }
                }
            }
        });
        ok
    })
}

fn representative(scheme: &SchottkyScheme, w: &Word) -> crate::error::Result<Complex> {
    let last = w.last().expect("nonempty word");
    let mut z = scheme.disk(last).center;
    for &x in w.symbols().iter().rev() {
        z = scheme.map(x).apply(z)?;
    }
    Ok(z)
}

fn for_each_word(scheme: &SchottkyScheme, k: usize, f: &mut dyn FnMut(&Word)) {
    fn rec(scheme: &SchottkyScheme, k: usize, buf: &mut Vec<Symbol>, f: &mut dyn FnMut(&Word)) {
        if buf.len() == k {
            f(&Word(buf.clone()));
            return;
        }
        let next: Vec<Symbol> = match buf.last() {
            Some(&last) => scheme.successors(last).collect(),
            None => scheme.symbols().collect(),
        };
        for y in next {
            buf.push(y);
            rec(scheme, k, buf, f);
            buf.pop();
        }
    }
    rec(scheme, k, &mut Vec::with_capacity(k), f);
}
