//! Independent oracles and instance builders shared by the integration tests.
//!
//! Nothing here calls the verifier, the center search or the attack stages;
//! the oracles use only raw symbol comparisons.

#![allow(dead_code)]

use listdec::attack::{AttackParams, Warmup2Params};
use listdec::constructions::{build_set_family, pairwise_family_warmup2, FamilyOptions, SetFamily};
use listdec::fraction::frac;
use listdec::model::{Code, CoordSet, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dist(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Every word of `[q]^n` in lexicographic order.
pub fn all_words(q: u32, n: usize) -> Vec<Vec<Symbol>> {
    let total = (q as usize).pow(n as u32);
    (0..total)
        .map(|mut x| {
            let mut w = vec![0 as Symbol; n];
            for i in (0..n).rev() {
                w[i] = (x % q as usize) as Symbol;
                x /= q as usize;
            }
            w
        })
        .collect()
}

pub fn full_space(q: u32, n: usize) -> Code {
    Code::new(q, n, all_words(q, n).into_iter().map(Word::new).collect()).unwrap()
}

/// `m` distinct uniform words.
pub fn random_code(r: &mut ChaCha8Rng, q: u32, n: usize, m: usize) -> Code {
    let mut words: Vec<Vec<Symbol>> = Vec::with_capacity(m);
    while words.len() < m {
        let w: Vec<Symbol> = (0..n).map(|_| r.gen_range(0..q) as Symbol).collect();
        if !words.contains(&w) {
            words.push(w);
        }
    }
    Code::new(q, n, words.into_iter().map(Word::new).collect()).unwrap()
}

pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive decodability over every `(L+1)`-subset and every center in `[q]^n`.
/// `radius` bounds each distance (ordinary) and `budget` bounds the sum (average).
pub fn brute_decodable(code: &Code, list_size: usize, radius: usize, budget: usize, average: bool) -> bool {
    if code.len() <= list_size {
        return true;
    }
    let centers = all_words(code.q(), code.n());
    for s in subsets(code.len(), list_size + 1) {
        for y in &centers {
            let ds = s.iter().map(|&i| dist(y, code.word(i).symbols()));
            let bad = if average { ds.sum::<usize>() <= budget } else { ds.max().unwrap() <= radius };
            if bad {
                return false;
            }
        }
    }
    true
}

/// Smallest total distance from any center in `[q]^n` to `words`.
pub fn brute_min_total(q: u32, words: &[Vec<Symbol>]) -> usize {
    all_words(q, words[0].len()).iter().map(|y| words.iter().map(|w| dist(y, w)).sum()).min().unwrap()
}

/// `floor(num * n / den)`.
pub fn floor_times(num: usize, den: usize, n: usize) -> usize {
    num * n / den
}

/// `r` random words at distance `> min_gap` from every word in `words`, and
/// agreeing with none of them on any full set of `forbid`.
fn add_fillers(
    r: &mut ChaCha8Rng,
    q: u32,
    n: usize,
    words: &mut Vec<Vec<Symbol>>,
    count: usize,
    min_gap: usize,
    forbid: &[CoordSet],
) {
    let mut added = 0;
    while added < count {
        let w: Vec<Symbol> = (0..n).map(|_| r.gen_range(0..q) as Symbol).collect();
        let far = words.iter().all(|v| dist(&w, v) > min_gap);
        let no_agreement = words.iter().all(|v| forbid.iter().all(|s| s.iter().any(|i| v[i] != w[i])));
        if far && no_agreement {
            words.push(w);
            added += 1;
        }
    }
}

/// A list-of-2 agreement pattern for the average-radius warmup.
pub struct Warmup2Plant {
    pub code: Code,
    pub params: Warmup2Params,
    pub popular: usize,
    pub partners: [usize; 2],
    /// `4 eps n + 2 (1 - R - 3 eps) n`.
    pub expected_total: usize,
}

/// `n = 45`, `q = 4`, `R = 2/5`, `eps = 1/15`: `|I_0| = 12`, sets of size 15 in
/// 33 coordinates with pairwise unions of at least 21, minimum distance above 24.
///
/// The popular word is all zeros. Both partners are `1` on `I_0`, agree with
/// it exactly on one family set each, and use `2` and `3` elsewhere. The pair
/// of sets with the smallest intersection is used; the partners are then at
/// distance `33 - |S_a & S_b|`, which exceeds 24 once the intersection is at
/// most 8.
pub fn warmup2_plant(seed: u64, family_cap: u128) -> Warmup2Plant {
    let (n, q) = (45, 4);
    let params = Warmup2Params::from_multiples(n, &frac(2, 5), &frac(1, 15)).unwrap();
    let family = pairwise_family_warmup2(n, params.i0, params.alpha_n, params.beta_n, family_cap, seed).unwrap();
    let ground = CoordSet::range(params.i0..n);
    let sets: Vec<CoordSet> = family.sets.iter().map(|s| s.embed(&ground).unwrap()).collect();
    let (a, b) = subsets(sets.len(), 2)
        .into_iter()
        .map(|p| (p[0], p[1]))
        .min_by_key(|&(a, b)| sets[a].iter().filter(|&i| sets[b].contains(i)).count())
        .unwrap();
    let partner = |s: &CoordSet, other: Symbol| -> Vec<Symbol> {
        (0..n)
            .map(|i| {
                if i < params.i0 {
                    1
                } else if s.contains(i) {
                    0
                } else {
                    other
                }
            })
            .collect()
    };
    let mut words = vec![vec![0; n], partner(&sets[a], 2), partner(&sets[b], 3)];
    let mut r = rng(seed ^ 0x5eed);
    add_fillers(&mut r, q, n, &mut words, 12, params.distance_floor, &sets);
    let expected_total = {
        let (nn, rn, en) = (n as i64, 18i64, 3i64);
        (4 * en + 2 * (nn - rn - 3 * en)) as usize
    };
    Warmup2Plant {
        code: Code::new(q, n, words.into_iter().map(Word::new).collect()).unwrap(),
        params,
        popular: 0,
        partners: [1, 2],
        expected_total,
    }
}

/// An instance on which every stage of the general attack succeeds.
pub struct GeneralPlant {
    pub code: Code,
    pub params: AttackParams,
    pub family: SetFamily,
}

/// `n = 60`, `q = 16`, `L = 2`, `R = 3/5`, `eps = 1/20` (so `pn = 14`,
/// `d_0 = 8`, `d_1 = 3`, `a_F = 35`, `a_union = 45`, `W = 4`).
///
/// The zero word agrees with partner `j` exactly on the `j`-th family set;
/// every partner is `15` on `I_0` and `j + 1` wherever else it differs.
pub fn general_plant(seed: u64) -> GeneralPlant {
    let (n, q) = (60, 16);
    let params = AttackParams::from_multiples(n, 2, &frac(3, 5), &frac(1, 20)).unwrap();
    let family =
        build_set_family(params.ground_size(), params.a_f, params.a_union, seed, &FamilyOptions::default()).unwrap();
    let sets: Vec<CoordSet> = family.sets.iter().map(|s| s.embed(&params.ground).unwrap()).collect();
    let d0 = params.d0;
    let mut words = vec![vec![0 as Symbol; n]];
    for (j, s) in sets.iter().enumerate().take(14) {
        let sym = (j + 1) as Symbol;
        words.push(
            (0..n)
                .map(|i| {
                    if i < d0 {
                        15
                    } else if s.contains(i) {
                        0
                    } else {
                        sym
                    }
                })
                .collect(),
        );
    }
    let mut r = rng(seed ^ 0x9e9e);
    add_fillers(&mut r, q, n, &mut words, 10, params.required_distance, &sets);
    GeneralPlant { code: Code::new(q, n, words.into_iter().map(Word::new).collect()).unwrap(), params, family }
}
