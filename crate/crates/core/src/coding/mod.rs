//! Schottky Markov coding.
//!
//! A scheme of rank `r` has `2r` symbols. Symbol `x` owns a disk `D_x` and a
//! map `g_x` sending the outside of `D_{x̄}` into `D_x`; the inverse branch of
//! the expanding boundary map on `D_x` is `g_x`. Symbols are numbered so that
//! `2i` is the generator `g_i` (target disk `D_{i+}`) and `2i + 1` its inverse
//! (target disk `D_{i−}`), hence `x̄ = x ^ 1`.

mod cylinders;
mod geodesics;
mod limit;
mod validate;

use std::fmt;
use std::ops::Add;

pub use cylinders::{cylinder_count, Cylinder, CylinderTable, DEFAULT_CYLINDER_CAPACITY};
pub use geodesics::{closed_geodesics, ClosedGeodesic, DEFAULT_GEODESIC_CAPACITY};
pub use limit::{limit_points, ncp_floor, ncp_spread};
pub use validate::ValidationReport;

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Complex, Disk, MoebiusMap};

/// Slack allowed when locating a point in a coding disk.
pub const DISK_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn bar(self) -> Symbol {
        Symbol(self.0 ^ 1)
    }

    pub fn generator(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Symbol {
    /// `a, A, b, B, …` for `g_1, g_1⁻¹, g_2, g_2⁻¹, …`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = (b'a' + self.generator() as u8) as char;
        if self.is_inverse() {
            write!(f, "{}", letter.to_ascii_uppercase())
        } else {
            write!(f, "{letter}")
        }
    }
}

/// Admissible finite word: no symbol is followed by its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(w) = symbols.windows(2).find(|w| w[1] == w[0].bar()) {
            return Err(Error::InadmissibleWord(format!("{}{} in word", w[0], w[1])));
        }
        Ok(Word(symbols))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    /// Concatenation, checking admissibility at the seam.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word::new(v)
    }

    /// Inverse group element: reversed, each symbol barred.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.bar()).collect())
    }

    /// Cyclically reduced: last symbol is not the inverse of the first.
    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || b != a.bar(),
            _ => false,
        }
    }

    /// Parses `aBb…` notation.
    pub fn parse(text: &str) -> Result<Word> {
        let symbols = text
            .chars()
            .map(|ch| {
                if !ch.is_ascii_alphabetic() {
                    return Err(Error::InadmissibleWord(format!("bad letter {ch:?}")));
                }
                let g = ch.to_ascii_lowercase() as u8 - b'a';
                Ok(Symbol(2 * g + u8::from(ch.is_ascii_uppercase())))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Return-time increment and holonomy angle of one inverse branch at a point.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct BranchCocycle {
    pub tau: f64,
    pub theta: f64,
}

impl BranchCocycle {
    pub fn new(tau: f64, theta: f64) -> Self {
        BranchCocycle { tau, theta: wrap_angle(theta) }
    }

    /// Cocycle of a branch whose derivative at the point is `derivative`.
    pub fn from_derivative(derivative: Complex) -> Self {
        BranchCocycle::new(-derivative.norm().ln(), -derivative.arg())
    }
}

impl Add for BranchCocycle {
    type Output = BranchCocycle;

    fn add(self, rhs: BranchCocycle) -> BranchCocycle {
        BranchCocycle::new(self.tau + rhs.tau, self.theta + rhs.theta)
    }
}

/// One generator with its source and target disks.
#[derive(Clone, Debug)]
pub struct Generator {
    pub map: MoebiusMap,
    pub source: Disk,
    pub target: Disk,
}

impl Generator {
    /// Generator built from the pairing formula `g(z) = c₊ − r²/(z − c₋)`.
    pub fn pairing(source: Complex, target: Complex, radius: f64) -> Result<Self> {
        Ok(Generator {
            map: MoebiusMap::pairing(source, target, radius)?,
            source: Disk::new(source, radius)?,
            target: Disk::new(target, radius)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SchottkyScheme {
    generators: Vec<Generator>,
    maps: Vec<MoebiusMap>,
    inverses: Vec<MoebiusMap>,
    disks: Vec<Disk>,
}

impl SchottkyScheme {
    /// Assembles a scheme. Only structural checks happen here; geometric
    /// conditions are reported by [`SchottkyScheme::validate`].
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        if generators.len() < 2 {
            return Err(Error::InvalidScheme(format!(
                "rank {} < 2: the coding of an elementary group is not mixing",
                generators.len()
            )));
        }
        if generators.len() > 26 {
            return Err(Error::InvalidScheme("rank above 26 is not supported".into()));
        }
        let mut maps = Vec::with_capacity(2 * generators.len());
        let mut disks = Vec::with_capacity(2 * generators.len());
        for g in &generators {
            maps.push(g.map);
            disks.push(g.target);
            maps.push(g.map.inverse());
            disks.push(g.source);
        }
        let inverses = maps.iter().map(|m| m.inverse()).collect();
        Ok(SchottkyScheme { generators, maps, inverses, disks })
    }

    /// Builds a scheme from `(source center, target center, radius)` triples.
    pub fn from_pairings(pairs: &[(Complex, Complex, f64)]) -> Result<Self> {
        let gens = pairs
            .iter()
            .map(|&(s, t, r)| Generator::pairing(s, t, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    /// Fuchsian fixture: real pairings `−3 ↔ 3` (r = 0.6) and `−1 ↔ 1` (r = 0.35).
    pub fn fixture_a() -> Self {
        Self::from_pairings(&[
            (Complex::new(-3.0, 0.0), Complex::new(3.0, 0.0), 0.6),
            (Complex::new(-1.0, 0.0), Complex::new(1.0, 0.0), 0.35),
        ])
        .expect("fixture A is well formed")
    }

    /// Non-Fuchsian fixture: `−3 ↔ 3` and `−1.5i ↔ 1.5i`, both with r = 0.6.
    pub fn fixture_b() -> Self {
        Self::from_pairings(&[
            (Complex::new(-3.0, 0.0), Complex::new(3.0, 0.0), 0.6),
            (Complex::new(0.0, -1.5), Complex::new(0.0, 1.5), 0.6),
        ])
        .expect("fixture B is well formed")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn alphabet_size(&self) -> usize {
        2 * self.generators.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.alphabet_size() as u8).map(Symbol)
    }

    /// Symbols that may follow `x`.
    pub fn successors(&self, x: Symbol) -> impl Iterator<Item = Symbol> {
        self.symbols().filter(move |&y| y != x.bar())
    }

    pub fn disk(&self, x: Symbol) -> &Disk {
        &self.disks[x.index()]
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// The branch map `g_x`.
    pub fn map(&self, x: Symbol) -> &MoebiusMap {
        &self.maps[x.index()]
    }

    /// `g_x⁻¹`, the expanding map restricted to `D_x`.
    pub fn expanding_map(&self, x: Symbol) -> &MoebiusMap {
        &self.inverses[x.index()]
    }

    /// Composition `g_{w₀} ∘ … ∘ g_{w_{n−1}}`.
    pub fn word_map(&self, word: &Word) -> MoebiusMap {
        word.symbols()
            .iter()
            .fold(MoebiusMap::identity(), |acc, &x| acc.compose(self.map(x)))
    }

    /// True when every generator is real, i.e. the group is Fuchsian and
    /// its boundary action is along ℝ.
    pub fn is_fuchsian(&self) -> bool {
        self.generators.iter().all(|g| {
            g.map.is_real() && g.source.center.im == 0.0 && g.target.center.im == 0.0
        })
    }

    /// The disk containing `z`, if any.
    pub fn locate(&self, z: Complex) -> Option<Symbol> {
        self.symbols().find(|&x| self.disk(x).contains(z, DISK_SLACK))
    }

    /// Inverse branch `g_x` applied to a point of an admissible disk.
    pub fn branch(&self, x: Symbol, z: Complex) -> Result<Complex> {
        self.check_admissible(x, z)?;
        self.map(x).apply(z)
    }

    fn check_admissible(&self, x: Symbol, z: Complex) -> Result<()> {
        if x.index() >= self.alphabet_size() {
            return Err(Error::InvalidArgument(format!("symbol {x} out of range")));
        }
        match self.locate(z) {
            None => Err(Error::OutsideCoding(z)),
            Some(y) if y == x.bar() => Err(Error::InadmissibleBranch { symbol: x.to_string() }),
            Some(_) => Ok(()),
        }
    }

    /// `(τ, θ) = (−log|g_x'(z)|, −arg g_x'(z))`.
    pub fn cocycle(&self, x: Symbol, z: Complex) -> Result<BranchCocycle> {
        self.check_admissible(x, z)?;
        Ok(BranchCocycle::from_derivative(self.map(x).derivative(z)?))
    }

    /// Sum of branch cocycles along `word`, innermost symbol applied first.
    pub fn word_cocycle(&self, word: &Word, z: Complex) -> Result<BranchCocycle> {
        let mut point = z;
        let mut total = BranchCocycle::default();
        for &x in word.symbols().iter().rev() {
            total = total + self.cocycle(x, point)?;
            point = self.map(x).apply(point)?;
        }
        Ok(total)
    }

    /// Image of `z` under the composed branches of `word`.
    pub fn branch_word(&self, word: &Word, z: Complex) -> Result<Complex> {
        let mut point = z;
        for &x in word.symbols().iter().rev() {
            point = self.branch(x, point)?;
        }
        Ok(point)
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        let n = self.alphabet_size();
        let entries = (0..n)
            .flat_map(|x| (0..n).map(move |y| u8::from(y != (x ^ 1))))
            .collect();
        TransitionMatrix { size: n, entries }
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// Runs [`SchottkyScheme::validate`] and turns failures into an error.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.passed() {
            Ok(self)
        } else {
            Err(Error::InvalidScheme(report.failures.join("; ")))
        }
    }
}

/// 0/1 transition matrix: `T[x][y] = 1` iff `y ≠ x̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    size: usize,
    entries: Vec<u8>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.entries[x * self.size + y]
    }

    /// Smallest `N ≤ size` with `T^N` entrywise positive.
    pub fn mixing_exponent(&self) -> Option<usize> {
        let n = self.size;
        let mut power: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        for k in 1..=n {
            if power.iter().all(|&e| e > 0) {
                return Some(k);
            }
            let mut next = vec![0u64; n * n];
            for i in 0..n {
                for j in 0..n {
                    next[i * n + j] = (0..n)
                        .map(|m| power[i * n + m].min(1) * self.get(m, j) as u64)
                        .sum();
                }
            }
            power = next;
        }
        None
    }
}
