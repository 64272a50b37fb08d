//! Exact list-decodability decisions.
//!
//! A code is `(p, L)`-list-decodable when no center has `L + 1` codewords
//! within `floor(p n)` disagreements, and `(p, L)`-average-radius
//! list-decodable when every `L + 1` distinct codewords have total distance
//! strictly greater than `(L + 1) p n` from every center, i.e. a violation
//! needs total `<= floor((L + 1) p n)`.
//!
//! Decisions enumerate `(L + 1)`-subsets of the code in lexicographic order
//! and run the exact center kernels on each; the first violating subset wins.
//! The enumeration may be split across rayon workers by first index, and the
//! reduction keeps the lexicographically smallest hit, so output does not
//! depend on scheduling.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::center::{avg_total, best_center_within, DEFAULT_CENTER_CAP};
use crate::error::{input, Error, Result};
use crate::fraction::{floor_mul, frac, Fraction};
use crate::model::{distance, hamming_distance, Code, Symbol, Word};

pub const DEFAULT_SUBSET_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodingMode {
    Ordinary,
    AverageRadius,
}

impl std::fmt::Display for DecodingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecodingMode::Ordinary => "ordinary",
            DecodingMode::AverageRadius => "average_radius",
        })
    }
}

/// Relative radius `p`, list size `L` and decoding notion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusQuery {
    #[serde(with = "fraction_serde")]
    pub p: Fraction,
    pub list_size: usize,
    pub mode: DecodingMode,
}

impl RadiusQuery {
    pub fn new(p: Fraction, list_size: usize, mode: DecodingMode) -> Result<Self> {
        if p < frac(0, 1) || p > frac(1, 1) {
            return input(format!("radius p = {p} outside [0, 1]"));
        }
        if list_size == 0 {
            return input("list size L must be at least 1");
        }
        Ok(RadiusQuery { p, list_size, mode })
    }

    pub fn ordinary(p: Fraction, list_size: usize) -> Result<Self> {
        Self::new(p, list_size, DecodingMode::Ordinary)
    }

    pub fn average(p: Fraction, list_size: usize) -> Result<Self> {
        Self::new(p, list_size, DecodingMode::AverageRadius)
    }

    /// Integer radius `t` as a query at `p = t / n`.
    pub fn at_integer_radius(t: usize, n: usize, list_size: usize, mode: DecodingMode) -> Result<Self> {
        Self::new(frac(t as i128, n as i128), list_size, mode)
    }

    /// `floor(p n)`: the largest distance counted as "within" the radius.
    pub fn radius(&self, n: usize) -> usize {
        floor_mul(&self.p, n) as usize
    }

    /// `floor((L + 1) p n)`: the largest total distance that violates average-radius decoding.
    pub fn total_budget(&self, n: usize) -> usize {
        floor_mul(&(self.p * frac(self.list_size as i128 + 1, 1)), n) as usize
    }
}

pub(crate) mod fraction_serde {
    use super::Fraction;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Fraction, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Fraction, D::Error> {
        let text = String::deserialize(d)?;
        crate::fraction::parse_fraction(&text).map_err(serde::de::Error::custom)
    }
}

/// `L + 1` distinct codewords and a center that together break decodability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub center: Word,
    pub indices: Vec<usize>,
    pub distances: Vec<usize>,
    pub mode: DecodingMode,
}

impl Violation {
    pub fn total(&self) -> usize {
        self.distances.iter().sum()
    }

    pub fn max_distance(&self) -> usize {
        self.distances.iter().copied().max().unwrap_or(0)
    }

    /// Replays the violation against `code` using nothing but Hamming distances.
    pub fn check(&self, code: &Code, query: &RadiusQuery) -> std::result::Result<(), String> {
        let n = code.n();
        if self.mode != query.mode {
            return Err(format!("violation mode {} differs from query mode {}", self.mode, query.mode));
        }
        if self.indices.len() != query.list_size + 1 {
            return Err(format!("expected {} codewords, found {}", query.list_size + 1, self.indices.len()));
        }
        if self.distances.len() != self.indices.len() {
            return Err("distance list length differs from index list".into());
        }
        if self.center.len() != n || self.center.symbols().iter().any(|&s| s >= code.q()) {
            return Err("center is not a word of the code's space".into());
        }
        for (a, &i) in self.indices.iter().enumerate() {
            if i >= code.len() {
                return Err(format!("index {i} out of range"));
            }
            if self.indices[..a].contains(&i) {
                return Err(format!("index {i} repeated"));
            }
        }
        let mut total = 0;
        for (&i, &claimed) in self.indices.iter().zip(&self.distances) {
            let d = hamming_distance(&self.center, code.word(i)).map_err(|e| e.to_string())?;
            if d != claimed {
                return Err(format!("codeword {i}: claimed distance {claimed}, actual {d}"));
            }
            if self.mode == DecodingMode::Ordinary && d > query.radius(n) {
                return Err(format!("codeword {i} at distance {d} > radius {}", query.radius(n)));
            }
            total += d;
        }
        if self.mode == DecodingMode::AverageRadius && total > query.total_budget(n) {
            return Err(format!("total distance {total} > budget {}", query.total_budget(n)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Decodability {
    Decodable,
    Violated(Violation),
}

impl Decodability {
    pub fn is_decodable(&self) -> bool {
        matches!(self, Decodability::Decodable)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Decodability::Decodable => None,
            Decodability::Violated(v) => Some(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifierConfig {
    /// Upper limit on `C(|C|, L + 1)`.
    pub subset_cap: u128,
    /// Upper limit on `L + 1` for the min-max kernel.
    pub center_cap: usize,
    pub parallel: bool,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        VerifierConfig { subset_cap: DEFAULT_SUBSET_CAP, center_cap: DEFAULT_CENTER_CAP, parallel: true }
    }
}

/// `C(m, k)`, saturating at `u128::MAX`.
pub fn choose(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((m - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Subset scanner shared by decisions and the expurgation loop.
pub(crate) struct Scanner<'a> {
    code: &'a Code,
    k: usize,
    mode: DecodingMode,
    radius: usize,
    budget: usize,
    list_size: usize,
    dist: Vec<u16>,
    center_cap: usize,
    parallel: bool,
}

impl<'a> Scanner<'a> {
    pub(crate) fn new(code: &'a Code, query: &RadiusQuery, config: &VerifierConfig) -> Result<Self> {
        let m = code.len();
        let k = query.list_size + 1;
        let subsets = choose(m, k);
        if subsets > config.subset_cap {
            return Err(Error::Resource(format!(
                "C({m}, {k}) = {subsets} subsets exceed the cap {}; raise the cap or use sampling mode",
                config.subset_cap
            )));
        }
        if query.mode == DecodingMode::Ordinary && k > config.center_cap {
            return Err(Error::Resource(format!("L + 1 = {k} exceeds the center search cap {}", config.center_cap)));
        }
        if code.n() > u16::MAX as usize {
            return input("block length too large for the distance table");
        }
        let words = code.words();
        let row = |i: usize| -> Vec<u16> {
            (0..m).map(|j| distance(words[i].symbols(), words[j].symbols()) as u16).collect()
        };
        let dist: Vec<u16> = if config.parallel {
            (0..m).into_par_iter().flat_map_iter(row).collect()
        } else {
            (0..m).flat_map(row).collect()
        };
        Ok(Scanner {
            code,
            k,
            mode: query.mode,
            radius: query.radius(code.n()),
            budget: query.total_budget(code.n()),
            list_size: query.list_size,
            dist,
            center_cap: config.center_cap,
            parallel: config.parallel,
        })
    }

    #[inline]
    fn d(&self, i: usize, j: usize) -> usize {
        self.dist[i * self.code.len() + j] as usize
    }

    /// First violating subset (lexicographic) whose first index is `>= start`,
    /// skipping codewords with `alive[i] == false`.
    pub(crate) fn first_violation(&self, start: usize, alive: &[bool]) -> Result<Option<Violation>> {
        let m = self.code.len();
        if m < self.k {
            return Ok(None);
        }
        let firsts = start..=(m - self.k);
        if self.parallel {
            firsts
                .into_par_iter()
                .filter(|&i| alive[i])
                .map(|i| self.scan_from(i, alive).transpose())
                .find_map_first(|x| x)
                .transpose()
        } else {
            for i in firsts.filter(|&i| alive[i]) {
                if let Some(v) = self.scan_from(i, alive)? {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
    }

    fn scan_from(&self, first: usize, alive: &[bool]) -> Result<Option<Violation>> {
        let mut chosen = Vec::with_capacity(self.k);
        chosen.push(first);
        let mut pair_sum = 0;
        self.extend(&mut chosen, &mut pair_sum, first + 1, alive)
    }

    fn extend(
        &self,
        chosen: &mut Vec<usize>,
        pair_sum: &mut usize,
        next: usize,
        alive: &[bool],
    ) -> Result<Option<Violation>> {
        if chosen.len() == self.k {
            return self.evaluate(chosen);
        }
        let m = self.code.len();
        let need = self.k - chosen.len();
        for j in next..=(m - need) {
            if !alive[j] {
                continue;
            }
            // Triangle-inequality pruning: two words within radius t of one
            // center are within 2t of each other; for the average notion every
            // pair is within the total budget and the pairwise sum is at most
            // L times the total.
            let mut added = 0;
            let mut ok = true;
            for &i in chosen.iter() {
                let d = self.d(i, j);
                let limit = match self.mode {
                    DecodingMode::Ordinary => 2 * self.radius,
                    DecodingMode::AverageRadius => self.budget,
                };
                if d > limit {
                    ok = false;
                    break;
                }
                added += d;
            }
            if !ok {
                continue;
            }
            if self.mode == DecodingMode::AverageRadius && *pair_sum + added > self.list_size * self.budget {
                continue;
            }
            chosen.push(j);
            *pair_sum += added;
            let found = self.extend(chosen, pair_sum, j + 1, alive)?;
            *pair_sum -= added;
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn evaluate(&self, chosen: &[usize]) -> Result<Option<Violation>> {
        let words: Vec<&[Symbol]> = chosen.iter().map(|&i| self.code.word(i).symbols()).collect();
        let center = match self.mode {
            DecodingMode::Ordinary => best_center_within(&words, self.radius, self.center_cap)?.map(|(c, _)| c),
            DecodingMode::AverageRadius => {
                let (c, total) = avg_total(&words);
                (total <= self.budget).then_some(c)
            }
        };
        Ok(center.map(|center| {
            let distances = words.iter().map(|w| distance(center.symbols(), w)).collect();
            Violation { center, indices: chosen.to_vec(), distances, mode: self.mode }
        }))
    }
}

/// Exact decision. Any returned violation passes [`Violation::check`].
pub fn is_list_decodable(code: &Code, query: &RadiusQuery, config: &VerifierConfig) -> Result<Decodability> {
    if code.len() <= query.list_size {
        return Ok(Decodability::Decodable);
    }
    let scanner = Scanner::new(code, query, config)?;
    let alive = vec![true; code.len()];
    Ok(match scanner.first_violation(0, &alive)? {
        Some(v) => Decodability::Violated(v),
        None => Decodability::Decodable,
    })
}

/// Checks `samples` random `(L + 1)`-subsets. Finding nothing proves nothing;
/// a returned violation is still exact.
pub fn sample_violation(
    code: &Code,
    query: &RadiusQuery,
    samples: usize,
    seed: u64,
    center_cap: usize,
) -> Result<Option<Violation>> {
    let m = code.len();
    let k = query.list_size + 1;
    if m < k {
        return Ok(None);
    }
    let config = VerifierConfig { subset_cap: u128::MAX, center_cap, parallel: false };
    let scanner = Scanner::bare(code, query, &config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut subset = sample(&mut rng, m, k).into_vec();
        subset.sort_unstable();
        if let Some(v) = scanner.evaluate(&subset)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

impl<'a> Scanner<'a> {
    fn bare(code: &'a Code, query: &RadiusQuery, config: &VerifierConfig) -> Self {
        Scanner {
            code,
            k: query.list_size + 1,
            mode: query.mode,
            radius: query.radius(code.n()),
            budget: query.total_budget(code.n()),
            list_size: query.list_size,
            dist: Vec::new(),
            center_cap: config.center_cap,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactRadius {
    /// Largest integer radius at which the code is decodable.
    pub t_star: usize,
    /// Violation at radius `t_star + 1`; absent when fewer than `L + 1` codewords exist.
    pub witness: Option<Violation>,
}

/// Largest `t` with the code `(t/n, L)`-decodable, by binary search over `t`.
pub fn exact_radius(code: &Code, list_size: usize, mode: DecodingMode, config: &VerifierConfig) -> Result<ExactRadius> {
    let n = code.n();
    if list_size == 0 {
        return input("list size L must be at least 1");
    }
    if code.len() <= list_size {
        return Ok(ExactRadius { t_star: n, witness: None });
    }
    let check = |t: usize| -> Result<Decodability> {
        is_list_decodable(code, &RadiusQuery::at_integer_radius(t, n, list_size, mode)?, config)
    };
    // Decodable at 0 (distinct words), not decodable at n.
    let (mut lo, mut hi) = (0usize, n);
    let mut witness = match check(n)? {
        Decodability::Violated(v) => v,
        Decodability::Decodable => return Err(Error::Internal("code decodable at radius n".into())),
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match check(mid)? {
            Decodability::Decodable => lo = mid,
            Decodability::Violated(v) => {
                hi = mid;
                witness = v;
            }
        }
    }
    Ok(ExactRadius { t_star: lo, witness: Some(witness) })
}

/// Number of codewords within `radius` of `center`.
pub fn neighborhood_count(code: &Code, center: &Word, radius: usize) -> Result<usize> {
    if center.len() != code.n() {
        return input("center length differs from block length");
    }
    if radius > code.n() {
        return input(format!("radius {radius} exceeds block length {}", code.n()));
    }
    Ok(code.words().iter().filter(|w| distance(center.symbols(), w.symbols()) <= radius).count())
}
