use serde::Serialize;

use super::{SchottkyScheme, Symbol, Word};
use crate::error::{Error, Result};
use crate::geometry::MoebiusMap;

pub const DEFAULT_GEODESIC_CAPACITY: u64 = 2_000_000;

/// One unoriented primitive closed geodesic.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedGeodesic {
    pub class_id: usize,
    /// Canonical representative: lexicographically least among rotations of
    /// the word and of its inverse.
    pub word: String,
    pub length: f64,
    /// Rotation angle of the orientation given by `word`; the inverse
    /// traversal has the opposite angle.
    pub angle: f64,
}

/// Primitive closed geodesics of length at most `t_max`, one per unoriented
/// conjugacy class, sorted by length.
pub fn closed_geodesics(scheme: &SchottkyScheme, t_max: f64, capacity: u64) -> Result<Vec<ClosedGeodesic>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("length bound {t_max} must be positive")));
    }
    let tau_min = min_step(scheme)?;
    let max_len = (t_max / tau_min).floor() as usize + 1;
    let mut search = Search {
        scheme,
        t_max,
        max_len,
        capacity,
        buf: Vec::with_capacity(max_len),
        maps: vec![MoebiusMap::identity()],
        found: Vec::new(),
    };
    for x in scheme.symbols() {
        search.descend(x)?;
    }
    let mut found = search.found;
    found.sort_by(|a, b| a.1.translation_length.total_cmp(&b.1.translation_length).then(a.0.cmp(&b.0)));
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(class_id, (w, data))| ClosedGeodesic {
            class_id,
            word: Word(w).to_string(),
            length: data.translation_length,
            angle: data.rotation_angle,
        })
        .collect())
}

struct Search<'a> {
    scheme: &'a SchottkyScheme,
    t_max: f64,
    max_len: usize,
    capacity: u64,
    buf: Vec<Symbol>,
    maps: Vec<MoebiusMap>,
    found: Vec<(Vec<Symbol>, crate::geometry::LoxodromicData)>,
}

impl Search<'_> {
    fn descend(&mut self, x: Symbol) -> Result<()> {
        let map = self.maps.last().unwrap().compose(self.scheme.map(x));
        self.buf.push(x);
        self.maps.push(map);
        let result = self.visit(x, &map);
        self.buf.pop();
        self.maps.pop();
        result
    }

    fn visit(&mut self, last: Symbol, map: &MoebiusMap) -> Result<()> {
        // every extension p·q has length at least the expansion of p on the
        // disks that may follow, plus |q| times the minimal one-step expansion
        if prefix_bound(self.scheme, map, last) > self.t_max {
            return Ok(());
        }
        let first = self.buf[0];
        if last != first.bar() && is_canonical(&self.buf) {
            let data = map.loxodromic_data()?;
            if data.translation_length <= self.t_max {
                if self.found.len() as u64 >= self.capacity {
                    return Err(Error::CapacityExceeded {
                        requested: self.found.len() as u64 + 1,
                        limit: self.capacity,
                    });
                }
                self.found.push((self.buf.clone(), data));
            }
        }
        if self.buf.len() < self.max_len {
            let next: Vec<Symbol> = self.scheme.successors(last).collect();
            for y in next {
                self.descend(y)?;
            }
        }
        Ok(())
    }
}

/// `min_{y ≠ x̄} −log|g'|` over the disks `D_y` for the map `g` of a prefix
/// ending in `last`; the expansion `|cz + d|²` is bounded below through the
/// distance from the pole to each disk.
fn prefix_bound(scheme: &SchottkyScheme, map: &MoebiusMap, last: Symbol) -> f64 {
    let [_, _, c, _] = map.entries();
    let Some(pole) = map.pole() else { return f64::NEG_INFINITY };
    scheme
        .successors(last)
        .map(|y| {
            let d = scheme.disk(y);
            let dist = (pole - d.center).norm() - d.radius;
            if dist <= 0.0 {
                f64::NEG_INFINITY
            } else {
                2.0 * (c.norm() * dist).ln()
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn min_step(scheme: &SchottkyScheme) -> Result<f64> {
    let bound = scheme
        .symbols()
        .map(|x| prefix_bound(scheme, scheme.map(x), x))
        .fold(f64::INFINITY, f64::min);
    if bound > 0.0 {
        Ok(bound)
    } else {
        Err(Error::InvalidScheme("single branches do not contract on every admissible disk".into()))
    }
}

/// Primitive, and least among the rotations of the word and of its inverse.
fn is_canonical(w: &[Symbol]) -> bool {
    let n = w.len();
    let inv: Vec<Symbol> = w.iter().rev().map(|s| s.bar()).collect();
    for shift in 1..n {
        match rotated_cmp(w, w, shift) {
            std::cmp::Ordering::Greater => return false,
            // a rotation equal to the word itself means w is a proper power
            std::cmp::Ordering::Equal => return false,
            std::cmp::Ordering::Less => {}
        }
    }
    for shift in 0..n {
        if rotated_cmp(w, &inv, shift) == std::cmp::Ordering::Greater {
            return false;
        }
    }
    true
}

fn rotated_cmp(w: &[Symbol], other: &[Symbol], shift: usize) -> std::cmp::Ordering {
    let n = w.len();
    (0..n)
        .map(|i| w[i].cmp(&other[(i + shift) % n]))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::DISK_SLACK;
    use crate::geometry::angle_distance;

    fn brute_force_classes(scheme: &SchottkyScheme, max_len: usize, t_max: f64) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        let mut words: Vec<Vec<Symbol>> = scheme.symbols().map(|x| vec![x]).collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &words {
                let reduced = *w.last().unwrap() != w[0].bar();
                if reduced && is_canonical(w) {
                    let data = scheme.word_map(&Word(w.clone())).loxodromic_data().unwrap();
                    if data.translation_length <= t_max {
                        out.push((Word(w.clone()).to_string(), data.translation_length));
                    }
                }
                for y in scheme.successors(*w.last().unwrap()) {
                    let mut v = w.clone();
                    v.push(y);
                    next.push(v);
                }
            }
            words = next;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    #[test]
    fn canonical_forms() {
        let w = |s: &str| Word::parse(s).unwrap().0;
        assert!(is_canonical(&w("a")));
        assert!(!is_canonical(&w("A")));
        assert!(!is_canonical(&w("aa")));
        assert!(is_canonical(&w("ab")));
        assert!(!is_canonical(&w("ba")));
        assert!(!is_canonical(&w("abab")));
    }

    #[test]
    fn below_systole_is_empty() {
        for scheme in [SchottkyScheme::fixture_a(), SchottkyScheme::fixture_b()] {
            let systole = brute_force_classes(&scheme, 3, f64::INFINITY)
                .iter()
                .map(|c| c.1)
                .fold(f64::INFINITY, f64::min);
            assert!(closed_geodesics(&scheme, 0.99 * systole, 100).unwrap().is_empty());
            let at = closed_geodesics(&scheme, systole * (1.0 + 1e-9), 100).unwrap();
            assert!(!at.is_empty());
        }
    }

    #[test]
    fn generators_appear_with_their_lengths() {
        let scheme = SchottkyScheme::fixture_b();
        let list = closed_geodesics(&scheme, 8.0, 10_000).unwrap();
        for (i, g) in scheme.generators().iter().enumerate() {
            let name = Symbol(2 * i as u8).to_string();
            let data = g.map.loxodromic_data().unwrap();
            let hit = list.iter().find(|c| c.word == name).expect("generator class");
            assert!((hit.length - data.translation_length).abs() < 1e-12);
        }
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for scheme in [SchottkyScheme::fixture_a(), SchottkyScheme::fixture_b()] {
            let t = 7.0;
            let mut fast: Vec<(String, f64)> =
                closed_geodesics(&scheme, t, 100_000).unwrap().into_iter().map(|c| (c.word, c.length)).collect();
            fast.sort_by(|a, b| a.0.cmp(&b.0));
            let slow = brute_force_classes(&scheme, 8, t);
            let fast_names: Vec<&String> = fast.iter().map(|c| &c.0).collect();
            let slow_names: Vec<&String> = slow.iter().map(|c| &c.0).collect();
            assert_eq!(fast_names, slow_names);
        }
    }

    #[test]
    fn periodic_orbit_reproduces_length_and_angle() {
        let scheme = SchottkyScheme::fixture_b();
        for class in closed_geodesics(&scheme, 9.0, 100_000).unwrap() {
            let w = Word::parse(&class.word).unwrap();
            let z = scheme.word_map(&w).attracting_fixed_point().unwrap();
            assert!(scheme.disk(w.first().unwrap()).contains(z, DISK_SLACK));
            let c = scheme.word_cocycle(&w, z).unwrap();
            assert!((c.tau - class.length).abs() < 1e-8);
            assert!(angle_distance(c.theta, class.angle) < 1e-8);
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let scheme = SchottkyScheme::fixture_b();
        assert!(matches!(
            closed_geodesics(&scheme, 12.0, 5),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_does_not_depend_on_the_bound() {
        let scheme = SchottkyScheme::fixture_b();
        let short: Vec<String> = closed_geodesics(&scheme, 25.0, 1_000_000).unwrap().into_iter().map(|g| g.word).collect();
        let long: Vec<String> = closed_geodesics(&scheme, 40.0, 1_000_000)
            .unwrap()
            .into_iter()
            .filter(|g| g.length <= 25.0)
            .map(|g| g.word)
            .collect();
        assert_eq!(short, long);
    }
}
