use rayon::prelude::*;

use super::{BranchCocycle, SchottkyScheme, Symbol, Word};
use crate::error::{Error, Result};
use crate::geometry::Complex;

pub const DEFAULT_CYLINDER_CAPACITY: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Cylinder {
    pub word: Word,
    pub representative: Complex,
}

/// All depth-`k` cylinders, indexed lexicographically by word.
///
/// The index is mixed radix: the first digit is the first symbol (base `2r`),
/// each later digit is the rank of the symbol among the `2r − 1` admissible
/// successors of its predecessor. The representative of `w` is
/// `g_{w₀} ∘ … ∘ g_{w_{k−1}}` applied to the center of `D_{w_{k−1}}`, i.e. the
/// word continued by its own last letter. Alongside each representative the table
/// stores the cocycle of the first branch, `τ(α) = log|(g_{α₀}⁻¹)'(rep α)|`
/// and the matching holonomy angle.
#[derive(Clone, Debug)]
pub struct CylinderTable {
    depth: usize,
    alphabet: usize,
    /// `(2r − 1)^(k − 1)`: number of cylinders per first symbol.
    block: usize,
    reps: Vec<Complex>,
    cocycles: Vec<BranchCocycle>,
}

impl CylinderTable {
    pub fn build(scheme: &SchottkyScheme, depth: usize, capacity: u64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("cylinder depth must be at least 1".into()));
        }
        let n = scheme.alphabet_size();
        let requested = cylinder_count(n, depth);
        if requested > capacity {
            return Err(Error::CapacityExceeded { requested, limit: capacity });
        }

        // the word is continued by repeating its last symbol
        let mut reps: Vec<Complex> = (0..n)
            .map(|x| {
                let x = Symbol(x as u8);
                scheme.map(x).apply(scheme.disk(x).center)
            })
            .collect::<Result<_>>()?;
        for k in 2..=depth {
            let prev = reps;
            let block = (n - 1).pow(k as u32 - 1);
            let prev_block = block / (n - 1);
            reps = (0..n * block)
                .into_par_iter()
                .map(|idx| {
                    let x = idx / block;
                    let rest = idx % block;
                    let y = successor(x, rest / prev_block);
                    let tail = y * prev_block + rest % prev_block;
                    scheme.map(Symbol(x as u8)).apply(prev[tail])
                })
                .collect::<Result<Vec<_>>>()?;
        }

        let block = (n - 1).pow(depth as u32 - 1);
        let cocycles = reps
            .par_iter()
            .enumerate()
            .map(|(idx, &z)| {
                let d = scheme.expanding_map(Symbol((idx / block) as u8)).derivative(z)?;
                Ok(BranchCocycle::from_derivative(d.inv()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CylinderTable { depth, alphabet: n, block, reps, cocycles })
    }

    /// A table with prescribed cocycle values, for model computations that
    /// do not come from a scheme. Representatives default to zero.
    pub fn from_cocycles(alphabet: usize, depth: usize, cocycles: Vec<BranchCocycle>) -> Result<Self> {
        if alphabet < 4 || alphabet % 2 != 0 || depth == 0 {
            return Err(Error::InvalidArgument(format!(
                "alphabet {alphabet} at depth {depth} is not a Schottky coding"
            )));
        }
        let count = cylinder_count(alphabet, depth);
        if count != cocycles.len() as u64 {
            return Err(Error::InvalidArgument(format!(
                "{} cocycle values for {count} cylinders",
                cocycles.len()
            )));
        }
        Ok(CylinderTable {
            depth,
            alphabet,
            block: (alphabet - 1).pow(depth as u32 - 1),
            reps: vec![Complex::new(0.0, 0.0); cocycles.len()],
            cocycles,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, idx: usize) -> Complex {
        self.reps[idx]
    }

    pub fn representatives(&self) -> &[Complex] {
        &self.reps
    }

    pub fn cocycle(&self, idx: usize) -> BranchCocycle {
        self.cocycles[idx]
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        self.cocycles.iter().map(|c| c.tau)
    }

    pub fn first_symbol(&self, idx: usize) -> Symbol {
        Symbol((idx / self.block) as u8)
    }

    pub fn word(&self, idx: usize) -> Word {
        let n = self.alphabet;
        let mut symbols = Vec::with_capacity(self.depth);
        let mut x = idx / self.block;
        symbols.push(Symbol(x as u8));
        let mut rest = idx % self.block;
        let mut place = self.block;
        for _ in 1..self.depth {
            place /= n - 1;
            x = successor(x, rest / place);
            rest %= place;
            symbols.push(Symbol(x as u8));
        }
        Word(symbols)
    }

    pub fn index_of(&self, word: &Word) -> Option<usize> {
        if word.len() != self.depth {
            return None;
        }
        let s = word.symbols();
        let mut idx = s[0].index();
        for w in s.windows(2) {
            idx = idx * (self.alphabet - 1) + rank(w[0].index(), w[1].index());
        }
        Some(idx)
    }

    pub fn cylinder(&self, idx: usize) -> Cylinder {
        Cylinder { word: self.word(idx), representative: self.reps[idx] }
    }

    /// The `2r − 1` cylinders `α = x·β₀…β_{k−2}` with `σα ⊂ β`, in
    /// increasing index order.
    pub fn preimages(&self, beta: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.alphabet;
        let b0 = beta / self.block;
        let tail = if self.depth == 1 { 0 } else { (beta % self.block) / (n - 1) };
        let inner = if self.depth == 1 { 1 } else { self.block / (n - 1) };
        (0..n).filter(move |&x| x != (b0 ^ 1)).map(move |x| {
            if self.depth == 1 {
                x
            } else {
                x * self.block + rank(x, b0) * inner + tail
            }
        })
    }

    /// Index of the depth-`(k−1)` prefix, or `None` at depth 1.
    pub fn parent(&self, idx: usize) -> Option<usize> {
        (self.depth > 1).then(|| idx / (self.alphabet - 1))
    }
}

/// `2r·(2r − 1)^(k − 1)`, saturating.
pub fn cylinder_count(alphabet: usize, depth: usize) -> u64 {
    let mut count = alphabet as u64;
    for _ in 1..depth {
        count = count.saturating_mul(alphabet as u64 - 1);
    }
    count
}

/// The `d`-th admissible successor of symbol `x`.
fn successor(x: usize, d: usize) -> usize {
    if d < (x ^ 1) {
        d
    } else {
        d + 1
    }
}

/// Rank of `y` among the admissible successors of `x`.
fn rank(x: usize, y: usize) -> usize {
    if y < (x ^ 1) {
        y
    } else {
        y - 1
    }
}

impl SchottkyScheme {
    pub fn cylinders(&self, depth: usize) -> Result<Vec<Cylinder>> {
        let table = CylinderTable::build(self, depth, DEFAULT_CYLINDER_CAPACITY)?;
        Ok((0..table.len()).map(|i| table.cylinder(i)).collect())
    }
}
