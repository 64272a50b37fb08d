//! Words, coordinate sets and codes over the dense alphabet `{0, .., q-1}`.
//!
//! Coordinates are 0-based everywhere. All values are immutable once built
//! and can be shared freely between threads.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

pub type Symbol = u32;

/// A string over the alphabet, one symbol per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn symbols_mut(&mut self) -> &mut [Symbol] {
        &mut self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        self.0.iter().copied().max()
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl std::ops::Index<usize> for Word {
    type Output = Symbol;

    fn index(&self, i: usize) -> &Symbol {
        &self.0[i]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&s| s > 9) { " " } else { "" };
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses a compact word such as `"0120"` (one digit per symbol).
impl std::str::FromStr for Word {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.chars()
            .map(|c| c.to_digit(36).ok_or_else(|| format!("bad symbol '{c}'")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// A strictly increasing list of coordinate positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordSet(Vec<usize>);

impl CoordSet {
    /// Builds a set from arbitrary indices, rejecting duplicates.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return input("coordinate set contains duplicate indices");
        }
        Ok(CoordSet(indices))
    }

    /// Builds a set checking that every index lies in `[0, n)`.
    pub fn within(indices: Vec<usize>, n: usize) -> Result<Self> {
        let set = Self::new(indices)?;
        if let Some(&max) = set.0.last() {
            if max >= n {
                return input(format!("coordinate {max} out of range for length {n}"));
            }
        }
        Ok(set)
    }

    pub(crate) fn from_sorted_unchecked(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        CoordSet(indices)
    }

    pub fn empty() -> Self {
        CoordSet(Vec::new())
    }

    pub fn range(range: std::ops::Range<usize>) -> Self {
        CoordSet(range.collect())
    }

    pub fn full(n: usize) -> Self {
        Self::range(0..n)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &CoordSet) -> CoordSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let next = match (self.0.get(i), other.0.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                    a
                }
                (Some(&a), Some(&b)) if a < b => {
                    i += 1;
                    a
                }
                (Some(_), Some(&b)) => {
                    j += 1;
                    b
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            out.push(next);
        }
        CoordSet(out)
    }

    pub fn difference(&self, other: &CoordSet) -> CoordSet {
        CoordSet(self.iter().filter(|&i| !other.contains(i)).collect())
    }

    /// Positions of `[0, n)` not in the set.
    pub fn complement(&self, n: usize) -> CoordSet {
        CoordSet((0..n).filter(|&i| !self.contains(i)).collect())
    }

    /// Maps each element `i` to `ground[i]`; used to place a family built
    /// over `[m]` onto an arbitrary ground set of coordinates.
    pub fn embed(&self, ground: &CoordSet) -> Result<CoordSet> {
        self.0
            .iter()
            .map(|&i| {
                ground.0.get(i).copied().ok_or_else(|| {
                    crate::Error::Input(format!("element {i} outside ground set of size {}", ground.len()))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(CoordSet)
    }
}

impl fmt::Display for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// A set of distinct words of common length `n` over `[q]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Code {
    q: u32,
    n: usize,
    words: Vec<Word>,
}

impl Code {
    pub fn new(q: u32, n: usize, words: Vec<Word>) -> Result<Self> {
        if q < 2 {
            return input(format!("alphabet size must be at least 2, got {q}"));
        }
        if n == 0 {
            return input("block length must be at least 1");
        }
        let mut seen = HashSet::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return input(format!("word {i} has length {} but n = {n}", w.len()));
            }
            if let Some(s) = w.symbols().iter().find(|&&s| s >= q) {
                return input(format!("word {i} has symbol {s} >= q = {q}"));
            }
            if !seen.insert(w) {
                return input(format!("word {i} duplicates an earlier word"));
            }
        }
        Ok(Code { q, n, words })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    /// `log_q |C|`.
    pub fn dimension(&self) -> f64 {
        (self.words.len() as f64).ln() / (self.q as f64).ln()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() / self.n as f64
    }

    /// Integer `k` with `q^k = |C|`, if one exists.
    pub fn integral_dimension(&self) -> Option<u32> {
        let size = self.words.len() as u128;
        let mut power: u128 = 1;
        let mut k = 0;
        while power < size {
            power = power.checked_mul(self.q as u128)?;
            k += 1;
        }
        (power == size).then_some(k)
    }

    /// Subcode keeping the words at `indices`, in that order.
    pub fn subcode(&self, indices: &[usize]) -> Code {
        Code { q: self.q, n: self.n, words: indices.iter().map(|&i| self.words[i].clone()).collect() }
    }

    /// Exact minimum distance by pairwise scan; `None` for fewer than two words.
    pub fn min_distance(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let d = distance(self.words[i].symbols(), self.words[j].symbols());
                best = Some(best.map_or(d, |b| b.min(d)));
                if best == Some(1) {
                    return best;
                }
            }
        }
        best
    }
}

/// Summary statistics; `min_distance` and `mds` are only meaningful for `|C| >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeStats {
    pub size: usize,
    pub dimension_k: f64,
    pub rate_r: f64,
    pub min_distance: Option<usize>,
    pub mds: bool,
}

pub fn code_stats(code: &Code) -> CodeStats {
    let min_distance = code.min_distance();
    let mds = match (code.integral_dimension(), min_distance) {
        (Some(k), Some(d)) => k as usize + d == code.n() + 1,
        _ => false,
    };
    CodeStats { size: code.len(), dimension_k: code.dimension(), rate_r: code.rate(), min_distance, mds }
}

/// Hamming distance of two equal-length symbol slices (unchecked).
#[inline]
pub fn distance(a: &[Symbol], b: &[Symbol]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    if a.len() != b.len() {
        return input(format!("length mismatch: {} vs {}", a.len(), b.len()));
    }
    Ok(distance(a.symbols(), b.symbols()))
}

/// `w|_s`: the symbols of `w` at the positions of `s`, in increasing order.
pub fn restrict(w: &Word, s: &CoordSet) -> Result<Word> {
    if let Some(max) = s.max() {
        if max >= w.len() {
            return input(format!("coordinate {max} out of range for word of length {}", w.len()));
        }
    }
    Ok(Word(s.iter().map(|i| w.0[i]).collect()))
}

pub(crate) fn restrict_into(w: &[Symbol], s: &[usize], out: &mut Vec<Symbol>) {
    out.clear();
    out.extend(s.iter().map(|&i| w[i]));
}

/// Coordinates on which `a` and `b` coincide.
pub fn agreement_set(a: &Word, b: &Word) -> Result<CoordSet> {
    if a.len() != b.len() {
        return input(format!("length mismatch: {} vs {}", a.len(), b.len()));
    }
    Ok(CoordSet(a.0.iter().zip(&b.0).enumerate().filter(|(_, (x, y))| x == y).map(|(i, _)| i).collect()))
}
