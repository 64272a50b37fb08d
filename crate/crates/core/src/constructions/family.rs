use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::model::CoordSet;
use crate::verifier::choose;

/// Upper limit on the `W`-subsets an exhaustive union check may visit.
pub const DEFAULT_UNION_CAP: u128 = 10_000_000;
/// Upper limit on the candidate sets a random family starts from.
pub const DEFAULT_FAMILY_CAP: usize = 64;
/// Candidate count used when the probabilistic target is smaller.
pub const FAMILY_MIN_TARGET: usize = 16;

/// Equal-size subsets of `[m]` whose `W`-wise unions are large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetFamily {
    pub ground_size: usize,
    pub member_size: usize,
    pub union_floor: usize,
    pub union_arity: usize,
    pub sets: Vec<CoordSet>,
    /// Set only by an exhaustive check; every `W`-union then has size `>= union_floor`.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "indices", rename_all = "snake_case")]
pub enum FamilyCheck {
    Ok,
    /// Indices of `W` members whose union is below the floor.
    Counterexample(Vec<usize>),
}

impl SetFamily {
    pub fn new(
        ground_size: usize,
        member_size: usize,
        union_floor: usize,
        union_arity: usize,
        sets: Vec<CoordSet>,
    ) -> Result<Self> {
        if union_arity == 0 {
            return input("union arity W must be at least 1");
        }
        for (i, s) in sets.iter().enumerate() {
            if s.len() != member_size {
                return input(format!("set {i} has {} elements, expected {member_size}", s.len()));
            }
            if s.max().is_some_and(|x| x >= ground_size) {
                return input(format!("set {i} leaves the ground set [{ground_size}]"));
            }
        }
        Ok(SetFamily { ground_size, member_size, union_floor, union_arity, sets, verified: false })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Header `m a_F a_union W M`, then one line of sorted indices per set.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {}\n",
            self.ground_size,
            self.member_size,
            self.union_floor,
            self.union_arity,
            self.sets.len()
        );
        for s in &self.sets {
            let row: Vec<String> = s.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header 'm a_F a_union W M'".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(hline, format!("'{t}' is not an integer"))))
            .collect::<Result<_>>()?;
        if h.len() != 5 {
            return Err(err(hline, format!("header needs 5 fields, found {}", h.len())));
        }
        let (m, a_f, a_u, w, count) = (h[0], h[1], h[2], h[3], h[4]);
        let mut sets = Vec::with_capacity(count);
        for (lineno, line) in lines {
            let idx: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(lineno, format!("'{t}' is not an index"))))
                .collect::<Result<_>>()?;
            if idx.windows(2).any(|p| p[0] >= p[1]) {
                return Err(err(lineno, "indices must be strictly increasing".into()));
            }
            if idx.len() != a_f {
                return Err(err(lineno, format!("set has {} elements, expected {a_f}", idx.len())));
            }
            if idx.last().is_some_and(|&x| x >= m) {
                return Err(err(lineno, format!("index outside ground set [{m}]")));
            }
            sets.push(CoordSet::from_sorted_unchecked(idx));
        }
        if sets.len() != count {
            return Err(err(text.lines().count().max(1), format!("expected {count} sets, found {}", sets.len())));
        }
        SetFamily::new(m, a_f, a_u, w, sets)
    }

    fn bitsets(&self) -> Vec<FixedBitSet> {
        self.sets.iter().map(|s| to_bits(s, self.ground_size)).collect()
    }
}

fn to_bits(s: &CoordSet, m: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(m);
    for i in s.iter() {
        b.insert(i);
    }
    b
}

/// Smallest `W` with `(1 - a_F/m)^W < (1 - a_union/m) / 2`.
pub fn union_arity(m: usize, member_size: usize, union_floor: usize) -> Result<usize> {
    if !(0 < member_size && member_size < union_floor && union_floor < m) {
        return input(format!("need 0 < a_F < a_union < m, got a_F = {member_size}, a_union = {union_floor}, m = {m}"));
    }
    let miss = 1.0 - member_size as f64 / m as f64;
    let goal = (1.0 - union_floor as f64 / m as f64) / 2.0;
    let mut w = 1;
    let mut power = miss;
    while power >= goal {
        w += 1;
        power *= miss;
        if w > 64 {
            return input("union arity W would exceed 64; widen the gap between a_F and a_union");
        }
    }
    Ok(w)
}

/// Depth-first search for the lexicographically first `W`-subset (drawn from
/// `pool`, all of whose members are united with `base`) with union below `floor`.
fn first_small_union(
    bits: &[FixedBitSet],
    pool: &[usize],
    base: &FixedBitSet,
    need: usize,
    floor: usize,
) -> Option<Vec<usize>> {
    fn go(
        bits: &[FixedBitSet],
        pool: &[usize],
        from: usize,
        acc: &FixedBitSet,
        need: usize,
        floor: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if acc.count_ones(..) >= floor {
            return false;
        }
        if need == 0 {
            return true;
        }
        for k in from..pool.len() {
            if pool.len() - k < need {
                break;
            }
            let mut next = acc.clone();
            next.union_with(&bits[pool[k]]);
            chosen.push(pool[k]);
            if go(bits, pool, k + 1, &next, need - 1, floor, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(need);
    go(bits, pool, 0, base, need, floor, &mut chosen).then_some(chosen)
}

/// Exhaustive `W`-wise union check; sets `verified` on success.
pub fn verify_set_family(family: &mut SetFamily, cap: u128) -> Result<FamilyCheck> {
    let w = family.union_arity;
    let tuples = choose(family.len(), w);
    if tuples > cap {
        family.verified = false;
        return Err(Error::Resource(format!(
            "C({}, {w}) = {tuples} unions exceed the cap {cap}; use the sampling check",
            family.len()
        )));
    }
    let bits = family.bitsets();
    let pool: Vec<usize> = (0..family.len()).collect();
    let empty = FixedBitSet::with_capacity(family.ground_size);
    match first_small_union(&bits, &pool, &empty, w, family.union_floor) {
        Some(t) => {
            family.verified = false;
            Ok(FamilyCheck::Counterexample(t))
        }
        None => {
            family.verified = true;
            Ok(FamilyCheck::Ok)
        }
    }
}

/// Checks `samples` random `W`-subsets. A hit is a genuine counterexample;
/// a miss proves nothing, so the `verified` flag is never set here.
pub fn sample_set_family(family: &SetFamily, samples: usize, seed: u64) -> Option<Vec<usize>> {
    let w = family.union_arity;
    if family.len() < w {
        return None;
    }
    let bits = family.bitsets();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut t = sample(&mut rng, family.len(), w).into_vec();
        t.sort_unstable();
        let mut acc = FixedBitSet::with_capacity(family.ground_size);
        for &i in &t {
            acc.union_with(&bits[i]);
        }
        if acc.count_ones(..) < family.union_floor {
            return Some(t);
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Candidate count; `None` picks the default target.
    pub target: Option<usize>,
    pub union_cap: u128,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { target: None, union_cap: DEFAULT_UNION_CAP }
    }
}

/// Default candidate count: `2^((1 - beta) m / (6W))` clamped to
/// `[FAMILY_MIN_TARGET, DEFAULT_FAMILY_CAP]`, then lowered until the
/// exhaustive union check fits under `union_cap`.
fn default_target(m: usize, union_floor: usize, w: usize, union_cap: u128) -> usize {
    let beta = union_floor as f64 / m as f64;
    let raw = 2f64.powf((1.0 - beta) * m as f64 / (6.0 * w as f64)).floor();
    let mut target = (raw.min(DEFAULT_FAMILY_CAP as f64) as usize).max(FAMILY_MIN_TARGET);
    while target > 2 && choose(target, w) > union_cap {
        target -= 1;
    }
    target
}

/// Random family with verified `W`-wise unions of size `>= a_union`.
///
/// Candidates include each element independently with probability
/// `max(a_F/m - m^(-1/3), a_F/(2m))`; candidates larger than `a_F` are
/// discarded and smaller ones padded with random unused elements. Candidates
/// are then admitted in order, skipping any that would complete a small
/// `W`-union with already admitted sets.
pub fn build_set_family(
    m: usize,
    member_size: usize,
    union_floor: usize,
    seed: u64,
    options: &FamilyOptions,
) -> Result<SetFamily> {
    let w = union_arity(m, member_size, union_floor)?;
    let target = options.target.unwrap_or_else(|| default_target(m, union_floor, w, options.union_cap));
    if target < 2 {
        return input("family target must be at least 2");
    }
    if choose(target, w) > options.union_cap {
        return Err(Error::Resource(format!(
            "C({target}, {w}) unions exceed the cap {}; lower the family target",
            options.union_cap
        )));
    }
    let alpha = member_size as f64 / m as f64;
    let alpha0 = (alpha - (m as f64).powf(-1.0 / 3.0)).max(alpha / 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut candidates: Vec<CoordSet> = Vec::with_capacity(target);
    let max_draws = 1000 * target;
    let mut draws = 0;
    while candidates.len() < target {
        draws += 1;
        if draws > max_draws {
            return Err(Error::Construction(format!("{max_draws} draws left fewer than {target} candidates")));
        }
        let mut members: Vec<usize> = (0..m).filter(|_| rng.gen_bool(alpha0)).collect();
        if members.len() > member_size {
            continue;
        }
        let unused: Vec<usize> = (0..m).filter(|i| members.binary_search(i).is_err()).collect();
        let extra = sample(&mut rng, unused.len(), member_size - members.len());
        members.extend(extra.iter().map(|k| unused[k]));
        members.sort_unstable();
        candidates.push(CoordSet::from_sorted_unchecked(members));
    }

    let bits: Vec<FixedBitSet> = candidates.iter().map(|s| to_bits(s, m)).collect();
    let mut admitted: Vec<usize> = Vec::new();
    for (j, b) in bits.iter().enumerate() {
        if admitted.len() + 1 < w || first_small_union(&bits, &admitted, b, w - 1, union_floor).is_none() {
            admitted.push(j);
        }
    }
    if admitted.len() < 2 {
        return Err(Error::Construction(format!(
            "only {} set(s) survived the union repair; try a larger ground set m",
            admitted.len()
        )));
    }
    let sets = admitted.into_iter().map(|j| candidates[j].clone()).collect();
    let mut family = SetFamily::new(m, member_size, union_floor, w, sets)?;
    match verify_set_family(&mut family, options.union_cap)? {
        FamilyCheck::Ok => Ok(family),
        FamilyCheck::Counterexample(t) => {
            Err(Error::Internal(format!("repaired family still has a small union at {t:?}")))
        }
    }
}

/// Advances `c` to the next `k`-combination of `[m]` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Greedy pairwise family over the `n - i0` coordinates after the first `i0`.
///
/// Candidates of size `alpha_n` are enumerated lexicographically when at most
/// `candidate_cap` exist, and otherwise `candidate_cap` of them are sampled
/// from `seed`. A candidate is kept iff its union with every kept set has at
/// least `beta_n` elements. Sets are over `[n - i0]`.
pub fn pairwise_family_warmup2(
    n: usize,
    i0: usize,
    alpha_n: usize,
    beta_n: usize,
    candidate_cap: u128,
    seed: u64,
) -> Result<SetFamily> {
    if i0 >= n {
        return input(format!("|I_0| = {i0} leaves no ground set in [{n}]"));
    }
    let m = n - i0;
    if !(0 < alpha_n && alpha_n < beta_n && beta_n <= m) {
        return input(format!("need 0 < alpha_n < beta_n <= {m}, got {alpha_n}, {beta_n}"));
    }
    let mut kept: Vec<FixedBitSet> = Vec::new();
    let mut sets: Vec<CoordSet> = Vec::new();
    let mut consider = |members: &[usize]| {
        let s = CoordSet::from_sorted_unchecked(members.to_vec());
        let b = to_bits(&s, m);
        let ok = kept.iter().all(|k| {
            let mut u = k.clone();
            u.union_with(&b);
            u.count_ones(..) >= beta_n
        });
        if ok {
            kept.push(b);
            sets.push(s);
        }
    };
    if choose(m, alpha_n) <= candidate_cap {
        let mut c: Vec<usize> = (0..alpha_n).collect();
        loop {
            consider(&c);
            if !next_combination(&mut c, m) {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..candidate_cap {
            let mut c = sample(&mut rng, m, alpha_n).into_vec();
            c.sort_unstable();
            consider(&c);
        }
    }
    let mut family = SetFamily::new(m, alpha_n, beta_n, 2, sets)?;
    family.verified = true;
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(list: &[&[usize]]) -> Vec<CoordSet> {
        list.iter().map(|s| CoordSet::new(s.to_vec()).unwrap()).collect()
    }

    #[test]
    fn disjoint_family_verifies() {
        let mut f = SetFamily::new(6, 2, 4, 2, sets(&[&[0, 1], &[2, 3], &[4, 5]])).unwrap();
        assert_eq!(verify_set_family(&mut f, DEFAULT_UNION_CAP).unwrap(), FamilyCheck::Ok);
        assert!(f.verified);
    }

    #[test]
    fn duplicate_sets_are_a_counterexample() {
        let mut f = SetFamily::new(6, 2, 4, 2, sets(&[&[0, 1], &[2, 3], &[0, 1]])).unwrap();
        assert_eq!(verify_set_family(&mut f, DEFAULT_UNION_CAP).unwrap(), FamilyCheck::Counterexample(vec![0, 2]));
        assert!(!f.verified);
    }

    #[test]
    fn arity_is_the_smallest_admissible_power() {
        // (2/3)^5 < 1/6 <= (2/3)^4
        assert_eq!(union_arity(6, 2, 4).unwrap(), 5);
        assert_eq!(union_arity(40, 12, 24).unwrap(), 5);
        assert_eq!(union_arity(32, 14, 30).unwrap(), 7);
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(union_arity(10, 4, 4).is_err());
        assert!(union_arity(10, 5, 3).is_err());
        assert!(build_set_family(10, 4, 3, 0, &FamilyOptions::default()).is_err());
    }

    #[test]
    fn built_family_is_exact_and_verified() {
        let f = build_set_family(40, 12, 24, 5, &FamilyOptions::default()).unwrap();
        assert!(f.verified);
        assert!(f.sets.iter().all(|s| s.len() == 12 && s.max().unwrap() < 40));
        assert_eq!(f, build_set_family(40, 12, 24, 5, &FamilyOptions::default()).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let f = SetFamily::new(6, 2, 4, 2, sets(&[&[0, 1], &[2, 3]])).unwrap();
        let back = SetFamily::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        assert!(matches!(SetFamily::from_text("6 2 4 2 1\n0 9\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(SetFamily::from_text("6 2 4 2 1\n1 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn warmup2_family_on_disjoint_pieces() {
        let f = pairwise_family_warmup2(6, 2, 2, 4, 1000, 0).unwrap();
        assert_eq!(f.sets, sets(&[&[0, 1], &[2, 3]]));
        let mut g = f.clone();
        assert_eq!(verify_set_family(&mut g, DEFAULT_UNION_CAP).unwrap(), FamilyCheck::Ok);
    }

    #[test]
    fn sampling_finds_planted_duplicate() {
        let f = SetFamily::new(6, 2, 4, 2, sets(&[&[0, 1], &[0, 1]])).unwrap();
        assert_eq!(sample_set_family(&f, 10, 1), Some(vec![0, 1]));
    }
}
