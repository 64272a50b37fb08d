//! Exact list-decoding centers for a handful of words.
//!
//! `minmax_center` minimizes the largest Hamming distance from a center to
//! the given words. Only symbols that already occur in a coordinate are
//! tried there: any other symbol disagrees with every word at that position,
//! so it is weakly dominated.
//!
//! Coordinates are grouped by their agreement pattern (which of the words
//! share a symbol). Coordinates with the same pattern are interchangeable, so
//! the search branches on how many coordinates of each group follow each
//! block of the pattern rather than on individual coordinates. The search is
//! a depth-first branch and bound over groups; the lower bound combines the
//! current maximum, an averaging bound and a pairwise triangle bound.

use std::collections::BTreeMap;

use crate::error::{input, Error, Result};
use crate::model::{Symbol, Word};

/// Default cap on the number of words handed to [`minmax_center`].
pub const DEFAULT_CENTER_CAP: usize = 8;

struct Group {
    coords: Vec<usize>,
    /// Word-index members of each block; the block symbol at coordinate `i`
    /// is `words[members[0]][i]`.
    blocks: Vec<Vec<usize>>,
    /// `count * (k - largest block)`: least total distance the group adds.
    min_total: usize,
}

struct Search<'a> {
    k: usize,
    groups: Vec<Group>,
    /// `suffix_total[g]`: least total added by groups `g..`.
    suffix_total: Vec<usize>,
    /// `suffix_pair[g][(a, b)]`: coordinates in groups `g..` where words `a` and `b` differ.
    suffix_pair: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
    dist: Vec<usize>,
    choice: Vec<Vec<usize>>,
    /// Centers must reach a maximum strictly below this.
    bound: usize,
    best: Option<Vec<Vec<usize>>>,
    words: &'a [&'a [Symbol]],
}

impl<'a> Search<'a> {
    fn lower_bound(&self, g: usize) -> usize {
        let k = self.k;
        let current_max = self.dist.iter().copied().max().unwrap_or(0);
        let total: usize = self.dist.iter().sum::<usize>() + self.suffix_total[g];
        let mut lb = current_max.max(total.div_ceil(k));
        for (p, &(a, b)) in self.pairs.iter().enumerate() {
            let s = self.dist[a] + self.dist[b] + self.suffix_pair[g][p];
            lb = lb.max(s.div_ceil(2));
        }
        lb
    }

    fn run(&mut self, g: usize) {
        if self.lower_bound(g) >= self.bound {
            return;
        }
        if g == self.groups.len() {
            let max = self.dist.iter().copied().max().unwrap_or(0);
            self.bound = max;
            self.best = Some(self.choice.clone());
            return;
        }
        let count = self.groups[g].coords.len();
        for d in self.dist.iter_mut() {
            *d += count;
        }
        self.assign(g, 0, count);
        for d in self.dist.iter_mut() {
            *d -= count;
        }
    }

    /// Chooses how many of the group's remaining coordinates follow block `b`.
    fn assign(&mut self, g: usize, b: usize, remaining: usize) {
        let nblocks = self.groups[g].blocks.len();
        if b + 1 == nblocks {
            self.take(g, b, remaining);
            self.choice[g][b] = remaining;
            self.run(g + 1);
            self.give_back(g, b, remaining);
            return;
        }
        for x in (0..=remaining).rev() {
            self.take(g, b, x);
            self.choice[g][b] = x;
            self.assign(g, b + 1, remaining - x);
            self.give_back(g, b, x);
        }
    }

    fn take(&mut self, g: usize, b: usize, x: usize) {
        for &w in &self.groups[g].blocks[b] {
            self.dist[w] -= x;
        }
    }

    fn give_back(&mut self, g: usize, b: usize, x: usize) {
        for &w in &self.groups[g].blocks[b] {
            self.dist[w] += x;
        }
    }

    fn center(&self, choice: &[Vec<usize>], base: &[Symbol]) -> Word {
        let mut center = base.to_vec();
        for (group, counts) in self.groups.iter().zip(choice) {
            let mut coords = group.coords.iter();
            for (block, &c) in group.blocks.iter().zip(counts) {
                let rep = self.words[block[0]];
                for &i in coords.by_ref().take(c) {
                    center[i] = rep[i];
                }
            }
        }
        Word::new(center)
    }
}

fn check_words(words: &[&[Symbol]], cap: usize) -> Result<usize> {
    if words.is_empty() {
        return input("need at least one word");
    }
    if words.len() > cap {
        return Err(Error::Resource(format!("{} words exceed the center search cap {cap}", words.len())));
    }
    let n = words[0].len();
    if words.iter().any(|w| w.len() != n) {
        return input("words have different lengths");
    }
    Ok(n)
}

/// Exact min-max center restricted to maxima `<= limit`.
///
/// Returns the optimal center and its radius when the optimum is at most
/// `limit`, and `None` otherwise.
pub fn best_center_within(words: &[&[Symbol]], limit: usize, cap: usize) -> Result<Option<(Word, usize)>> {
    let n = check_words(words, cap.min(u8::MAX as usize))?;
    let k = words.len();

    // Plurality center as the incumbent.
    let (plural, _) = plurality(words, n);
    let plural_max = words.iter().map(|w| crate::model::distance(plural.symbols(), w)).max().unwrap_or(0);

    let mut base: Vec<Symbol> = words[0].to_vec();
    let mut by_pattern: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    let mut label = vec![0u8; k];
    for i in 0..n {
        for j in 0..k {
            label[j] = (0..j).find(|&a| words[a][i] == words[j][i]).unwrap_or(j) as u8;
        }
        if label.iter().all(|&l| l == 0) {
            base[i] = words[0][i];
            continue;
        }
        by_pattern.entry(label.clone()).or_default().push(i);
    }

    let mut groups: Vec<Group> = by_pattern
        .into_iter()
        .map(|(pattern, coords)| {
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            let mut heads: Vec<u8> = Vec::new();
            for (j, &l) in pattern.iter().enumerate() {
                match heads.iter().position(|&h| h == l) {
                    Some(b) => blocks[b].push(j),
                    None => {
                        heads.push(l);
                        blocks.push(vec![j]);
                    }
                }
            }
            blocks.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
            let largest = blocks[0].len();
            Group { min_total: coords.len() * (k - largest), coords, blocks }
        })
        .collect();
    groups.sort_by(|a, b| b.coords.len().cmp(&a.coords.len()).then(a.blocks.cmp(&b.blocks)));

    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let ng = groups.len();
    let mut suffix_total = vec![0; ng + 1];
    let mut suffix_pair = vec![vec![0; pairs.len()]; ng + 1];
    for g in (0..ng).rev() {
        suffix_total[g] = suffix_total[g + 1] + groups[g].min_total;
        for (p, &(a, b)) in pairs.iter().enumerate() {
            let split = !groups[g].blocks.iter().any(|blk| blk.contains(&a) && blk.contains(&b));
            suffix_pair[g][p] = suffix_pair[g + 1][p] + if split { groups[g].coords.len() } else { 0 };
        }
    }

    let choice = groups.iter().map(|g| vec![0; g.blocks.len()]).collect();
    let mut search = Search {
        k,
        groups,
        suffix_total,
        suffix_pair,
        pairs,
        dist: vec![0; k],
        choice,
        bound: limit.saturating_add(1).min(plural_max),
        best: None,
        words,
    };
    search.run(0);
    match search.best.take() {
        Some(choice) => {
            let center = search.center(&choice, &base);
            Ok(Some((center, search.bound)))
        }
        None if plural_max <= limit => Ok(Some((plural, plural_max))),
        None => Ok(None),
    }
}

/// Center minimizing the maximum distance to `words`, and that maximum.
pub fn minmax_center(words: &[Word]) -> Result<(Word, usize)> {
    minmax_center_with_cap(words, DEFAULT_CENTER_CAP)
}

pub fn minmax_center_with_cap(words: &[Word], cap: usize) -> Result<(Word, usize)> {
    let slices: Vec<&[Symbol]> = words.iter().map(|w| w.symbols()).collect();
    let n = check_words(&slices, cap)?;
    Ok(best_center_within(&slices, n, cap)?.expect("every center is within distance n"))
}

fn plurality(words: &[&[Symbol]], n: usize) -> (Word, usize) {
    let k = words.len();
    let mut total = 0;
    let mut center = Vec::with_capacity(n);
    let mut column: Vec<Symbol> = Vec::with_capacity(k);
    for i in 0..n {
        column.clear();
        column.extend(words.iter().map(|w| w[i]));
        column.sort_unstable();
        let (mut best_sym, mut best_count) = (column[0], 0);
        let mut run = 0;
        for j in 0..k {
            run = if j > 0 && column[j] == column[j - 1] { run + 1 } else { 1 };
            // Strict '>' keeps the smallest symbol among ties.
            if run > best_count {
                best_count = run;
                best_sym = column[j];
            }
        }
        center.push(best_sym);
        total += k - best_count;
    }
    (Word::new(center), total)
}

/// Coordinate-wise plurality center (ties to the smallest symbol) and the
/// resulting total distance, which is the minimum possible sum of distances.
pub fn avg_center(words: &[Word]) -> Result<(Word, usize)> {
    let slices: Vec<&[Symbol]> = words.iter().map(|w| w.symbols()).collect();
    let n = check_words(&slices, usize::MAX)?;
    Ok(plurality(&slices, n))
}

pub(crate) fn avg_total(words: &[&[Symbol]]) -> (Word, usize) {
    plurality(words, words[0].len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::hamming_distance;

    fn ws(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn max_dist(center: &Word, words: &[Word]) -> usize {
        words.iter().map(|w| hamming_distance(center, w).unwrap()).max().unwrap()
    }

    #[test]
    fn minmax_examples() {
        let words = ws(&["00", "01", "10"]);
        let (c, r) = minmax_center(&words).unwrap();
        assert_eq!(r, 1);
        assert_eq!(max_dist(&c, &words), 1);

        let words = ws(&["0120", "0120", "0120"]);
        assert_eq!(minmax_center(&words).unwrap().1, 0);

        let words = ws(&["000", "111"]);
        let (c, r) = minmax_center(&words).unwrap();
        assert_eq!(r, 2);
        assert_eq!(max_dist(&c, &words), 2);
    }

    #[test]
    fn minmax_cap_and_length_errors() {
        let words = ws(&["0", "1", "0", "1", "0", "1", "0", "1", "0"]);
        assert!(matches!(minmax_center(&words), Err(Error::Resource(_))));
        assert!(minmax_center(&ws(&["00", "1"])).is_err());
    }

    #[test]
    fn within_limit_reports_none_above_limit() {
        let words = ws(&["0000", "1111"]);
        let slices: Vec<&[Symbol]> = words.iter().map(|w| w.symbols()).collect();
        assert!(best_center_within(&slices, 1, 8).unwrap().is_none());
        assert_eq!(best_center_within(&slices, 2, 8).unwrap().unwrap().1, 2);
    }

    #[test]
    fn avg_examples() {
        let (c, t) = avg_center(&ws(&["000", "011", "101"])).unwrap();
        assert_eq!(c, "001".parse().unwrap());
        assert_eq!(t, 3);
        let (c, t) = avg_center(&ws(&["0212", "0212"])).unwrap();
        assert_eq!(c, "0212".parse().unwrap());
        assert_eq!(t, 0);
        let (c, t) = avg_center(&ws(&["012", "012", "000"])).unwrap();
        assert_eq!(c, "012".parse().unwrap());
        assert_eq!(t, 2);
    }

    #[test]
    fn avg_ties_break_to_smallest_symbol() {
        let (c, t) = avg_center(&ws(&["2", "1"])).unwrap();
        assert_eq!(c, "1".parse().unwrap());
        assert_eq!(t, 1);
    }
}
