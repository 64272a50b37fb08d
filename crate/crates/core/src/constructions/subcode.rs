use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::fraction::{ceil_mul, floor_mul, frac, Fraction};
use crate::model::{distance, Code};
use crate::verifier::{fraction_serde, is_list_decodable, RadiusQuery, VerifierConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcode {
    pub code: Code,
    /// Original indices of the kept words, increasing.
    pub kept: Vec<usize>,
}

/// Keeps a word iff it lies at distance `>= threshold` from every kept word.
fn greedy_min_distance(code: &Code, threshold: usize) -> Subcode {
    let mut kept: Vec<usize> = Vec::new();
    for (i, w) in code.words().iter().enumerate() {
        if kept.iter().all(|&j| distance(w.symbols(), code.word(j).symbols()) >= threshold) {
            kept.push(i);
        }
    }
    Subcode { code: code.subcode(&kept), kept }
}

/// Greedy subcode with minimum distance at least `ceil(alpha n)`.
pub fn greedy_distance_subcode(code: &Code, alpha: &Fraction) -> Result<Subcode> {
    if *alpha <= frac(0, 1) || *alpha > frac(1, 1) {
        return input(format!("relative distance alpha = {alpha} outside (0, 1]"));
    }
    Ok(greedy_min_distance(code, ceil_mul(alpha, code.n()) as usize))
}

/// `p + p^L / (2L)`.
pub fn greedy_alpha(p: &Fraction, list_size: usize) -> Fraction {
    let l = list_size as i128;
    p + p.pow(list_size as i32) / frac(2 * l, 1)
}

/// `L + ceil(L^2 / p) - 1`.
pub fn neighborhood_limit(p: &Fraction, list_size: usize) -> usize {
    let l = list_size as i128;
    list_size + (frac(l * l, 1) / p).ceil().to_integer() as usize - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodReport {
    #[serde(with = "fraction_serde")]
    pub alpha: Fraction,
    pub radius: usize,
    /// Largest number of other codewords within `radius` of a codeword.
    pub max_neighbors: usize,
    /// Index attaining `max_neighbors` (smallest such).
    pub argmax: Option<usize>,
    /// `L + ceil(L^2 / p) - 1`, a bound on the codewords in the ball including the center.
    pub limit: usize,
    pub holds: bool,
}

/// Counts codewords within `ceil(alpha n)` of each codeword, `alpha = p + p^L/(2L)`.
///
/// The code must verify `(p, L)`-list-decodable first.
pub fn neighborhood_bound_check(
    code: &Code,
    p: &Fraction,
    list_size: usize,
    config: &VerifierConfig,
) -> Result<NeighborhoodReport> {
    if *p <= frac(0, 1) || *p >= frac(1, 1) {
        return input(format!("radius p = {p} outside (0, 1)"));
    }
    let query = RadiusQuery::ordinary(*p, list_size)?;
    if !is_list_decodable(code, &query, config)?.is_decodable() {
        return input(format!("code is not ({p}, {list_size})-list-decodable"));
    }
    let alpha = greedy_alpha(p, list_size);
    let radius = (ceil_mul(&alpha, code.n()) as usize).min(code.n());
    let words = code.words();
    let mut max_neighbors = 0;
    let mut argmax = None;
    for (i, w) in words.iter().enumerate() {
        let count =
            words.iter().enumerate().filter(|&(j, v)| j != i && distance(w.symbols(), v.symbols()) <= radius).count();
        if argmax.is_none() || count > max_neighbors {
            max_neighbors = count;
            argmax = Some(i);
        }
    }
    let limit = neighborhood_limit(p, list_size);
    Ok(NeighborhoodReport { alpha, radius, max_neighbors, argmax, limit, holds: max_neighbors < limit })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precondition {
    /// The caller ran the verifier; a size shortfall is a bug.
    Verified,
    /// Taken on faith; no size guarantee is enforced.
    Assumed,
}

/// Greedy subcode with minimum distance `> floor(3 p n / 2)`.
///
/// In a `(p, 2)`-average-radius decodable code every codeword has at most one
/// other codeword that close, so at least half the code survives.
pub fn avg_radius_expurgate(code: &Code, p: &Fraction, precondition: Precondition) -> Result<Subcode> {
    if *p < frac(0, 1) || *p > frac(1, 1) {
        return input(format!("radius p = {p} outside [0, 1]"));
    }
    let close = floor_mul(&(p * frac(3, 2)), code.n()) as usize;
    let sub = greedy_min_distance(code, close + 1);
    if precondition == Precondition::Verified && 2 * sub.kept.len() < code.len() {
        return Err(Error::Internal(format!(
            "kept {} of {} words from a verified average-radius decodable code",
            sub.kept.len(),
            code.len()
        )));
    }
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Word;

    fn code(q: u32, words: &[&str]) -> Code {
        let ws: Vec<Word> = words.iter().map(|s| s.parse().unwrap()).collect();
        Code::new(q, ws[0].len(), ws).unwrap()
    }

    #[test]
    fn greedy_trace() {
        let c = code(2, &["000", "001", "111"]);
        let sub = greedy_distance_subcode(&c, &frac(2, 3)).unwrap();
        assert_eq!(sub.kept, vec![0, 2]);
        assert_eq!(sub.code.min_distance(), Some(3));
        let far = code(2, &["000", "111"]);
        assert_eq!(greedy_distance_subcode(&far, &frac(2, 3)).unwrap().code, far);
        assert!(greedy_distance_subcode(&far, &frac(0, 1)).is_err());
    }

    #[test]
    fn neighborhood_examples() {
        let c = code(2, &["000", "111"]);
        let r = neighborhood_bound_check(&c, &frac(1, 3), 1, &VerifierConfig::default()).unwrap();
        assert_eq!(r.radius, 2);
        assert_eq!(r.max_neighbors, 0);
        assert_eq!(r.limit, 3);
        assert!(r.holds);

        let single = code(2, &["0101"]);
        let r = neighborhood_bound_check(&single, &frac(1, 4), 2, &VerifierConfig::default()).unwrap();
        assert_eq!(r.max_neighbors, 0);

        let dense = code(2, &["000", "001", "010", "100"]);
        assert!(matches!(
            neighborhood_bound_check(&dense, &frac(1, 3), 2, &VerifierConfig::default()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn limit_and_alpha_arithmetic() {
        assert_eq!(greedy_alpha(&frac(3, 8), 2), frac(3, 8) + frac(9, 256));
        assert_eq!(neighborhood_limit(&frac(3, 8), 2), 12);
        assert_eq!(neighborhood_limit(&frac(1, 3), 1), 3);
    }

    #[test]
    fn avg_expurgate_removes_one_of_a_close_pair() {
        // p = 1/3, n = 6: words at distance <= 3 are "close".
        let c = code(4, &["000000", "000111", "333333", "121212"]);
        let sub = avg_radius_expurgate(&c, &frac(1, 3), Precondition::Assumed).unwrap();
        assert_eq!(sub.kept, vec![0, 2, 3]);
        let far = code(4, &["000000", "333333"]);
        assert_eq!(avg_radius_expurgate(&far, &frac(1, 3), Precondition::Verified).unwrap().code, far);
    }
}
