use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::pairwise_family_warmup2;
use crate::error::{input, Error, Result};
use crate::model::{distance, Code, CoordSet, Symbol, Word};
use crate::verifier::{choose, DecodingMode};

use super::params::Warmup2Params;
use super::stages::{find_popular_codeword, pigeonhole_i0, select_distinct, Selection};
use super::{verify_certificate, AttackReport, Certificate, Counters, Outcome, Provenance, Stage};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WarmupOptions {
    /// Enumerate the family when it has at most this many sets, sample this many otherwise.
    pub family_cap: u128,
    pub seed: u64,
}

impl Default for WarmupOptions {
    fn default() -> Self {
        WarmupOptions { family_cap: 20_000, seed: 0 }
    }
}

/// Shared list-of-2 tail: popular codeword, pigeonhole on `I_0`, two
/// distinct partners, center agreeing with the partners on `I_0` and with
/// the popular codeword elsewhere.
fn list_of_two(
    code: &Code,
    sets: &[CoordSet],
    i0: &CoordSet,
    union_floor: usize,
    total_budget: usize,
    provenance: Provenance,
    family_sampled: bool,
) -> Result<AttackReport> {
    let need = 2;
    let popular = find_popular_codeword(code, sets)?;
    let mut counters = Counters {
        family_size: sets.len(),
        family_sampled,
        popular_codeword: Some(popular.codeword),
        best_fc: popular.partners.len(),
        need,
        class_sizes: Vec::new(),
    };
    let report = |outcome, counters, witness| AttackReport {
        attack: provenance,
        outcome,
        counters,
        distance_witness: witness,
        general: None,
    };
    if popular.partners.len() < need {
        let reason = format!("best |F_c| = {} < 2 (|F| = {})", popular.partners.len(), sets.len());
        return Ok(report(Outcome::StageFailed { stage: Stage::PopularCodeword, reason }, counters, None));
    }
    let (class, sizes) = pigeonhole_i0(&popular.partners, code, i0, need);
    counters.class_sizes = sizes;
    let class = match class {
        Ok(c) => c,
        Err(max) => {
            let reason = format!("largest I_0 class has {max} < 2 entries");
            return Ok(report(Outcome::StageFailed { stage: Stage::PigeonholeI0, reason }, counters, None));
        }
    };
    let entries = match select_distinct(&class, code, popular.codeword, sets, 2, 2, union_floor)? {
        Selection::Distinct { entries } => entries,
        Selection::Repeat { witness } => {
            let reason = format!(
                "both partners are codeword {}, at distance {} from codeword {}",
                witness.codewords.1, witness.distance, witness.codewords.0
            );
            return Ok(report(Outcome::StageFailed { stage: Stage::Distinctness, reason }, counters, Some(witness)));
        }
    };
    let c = popular.codeword;
    let (p1, p2) = (entries[0].1, entries[1].1);
    let mut y: Vec<Symbol> = code.word(c).symbols().to_vec();
    for i in i0.iter() {
        y[i] = code.word(p1).symbols()[i];
    }
    let center = Word::new(y);
    let codewords = vec![c, p1, p2];
    let distances: Vec<usize> = codewords.iter().map(|&i| distance(center.symbols(), code.word(i).symbols())).collect();
    let certificate = Certificate {
        mode: DecodingMode::AverageRadius,
        center,
        codewords,
        distances,
        threshold: total_budget,
        provenance,
    };
    verify_certificate(code, &certificate)
        .map_err(|e| Error::Internal(format!("{provenance} certificate rejected: {e}")))?;
    Ok(report(Outcome::Certificate { certificate }, counters, None))
}

/// All `size`-subsets of `ground` when there are at most `cap`, else `cap` sampled ones.
fn subsets_of(ground: &CoordSet, size: usize, cap: u128, seed: u64) -> (Vec<CoordSet>, bool) {
    let m = ground.len();
    let pick = |idx: &[usize]| CoordSet::new(idx.iter().map(|&k| ground.indices()[k]).collect()).expect("distinct");
    if choose(m, size) <= cap {
        let mut c: Vec<usize> = (0..size).collect();
        let mut out = vec![pick(&c)];
        while crate::constructions::next_combination(&mut c, m) {
            out.push(pick(&c));
        }
        (out, false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = (0..cap)
            .map(|_| {
                let mut idx = sample(&mut rng, m, size).into_vec();
                idx.sort_unstable();
                pick(&idx)
            })
            .collect();
        (out, true)
    }
}

/// Exactly optimal list-of-2 attack: `I_0` = the first two coordinates,
/// family = `(k-1)`-subsets of the rest, total budget `2(n - k)`.
pub fn run_warmup1(code: &Code, options: &WarmupOptions) -> Result<AttackReport> {
    let n = code.n();
    if n < 3 {
        return input("warmup1 needs n >= 3");
    }
    let k = largest_dimension(code);
    if k < 2 || k > n - 1 {
        return input(format!("warmup1 needs 2 <= k <= n - 1, got k = {k}"));
    }
    let i0 = CoordSet::range(0..2);
    let (sets, sampled) = subsets_of(&CoordSet::range(2..n), k - 1, options.family_cap, options.seed);
    list_of_two(code, &sets, &i0, k, 2 * (n - k), Provenance::Warmup1, sampled)
}

/// Largest integer `k` with `q^k <= |C|`.
pub fn largest_dimension(code: &Code) -> usize {
    let mut k = 0;
    let mut power: u128 = code.q() as u128;
    while power <= code.len() as u128 {
        k += 1;
        power = match power.checked_mul(code.q() as u128) {
            Some(p) => p,
            None => break,
        };
    }
    k
}

/// Near-capacity list-of-2 attack with the distance assumption:
/// `I_0` = first `4 eps n` coordinates, pairwise family of `(R - eps) n`-sets
/// with unions `>= (R + eps) n`, total budget `2(1 - R - eps) n`.
pub fn run_warmup2(code: &Code, params: &Warmup2Params, options: &WarmupOptions) -> Result<AttackReport> {
    let n = code.n();
    if n != params.n {
        return input(format!("code has n = {n}, parameters have n = {}", params.n));
    }
    if let Some(d) = code.min_distance() {
        if d <= params.distance_floor {
            return input(format!(
                "minimum distance {d} is not greater than (1 - R - eps) n = {}",
                params.distance_floor
            ));
        }
    }
    let family =
        pairwise_family_warmup2(n, params.i0, params.alpha_n, params.beta_n, options.family_cap, options.seed)?;
    let ground = CoordSet::range(params.i0..n);
    let sets: Vec<CoordSet> = family.sets.iter().map(|s| s.embed(&ground)).collect::<Result<_>>()?;
    let sampled = choose(ground.len(), params.alpha_n) > options.family_cap;
    list_of_two(code, &sets, &CoordSet::range(0..params.i0), params.beta_n, params.total, Provenance::Warmup2, sampled)
}
