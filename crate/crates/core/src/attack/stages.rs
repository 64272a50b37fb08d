use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{distance, restrict_into, Code, CoordSet, Symbol, Word};
use crate::verifier::DecodingMode;

use super::params::AttackParams;
use super::{Certificate, DistanceWitness, Provenance};

/// The codeword with the most agreement partners, and one partner per set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Popular {
    pub codeword: usize,
    /// `(set index, partner index)` for every set in `F_c`, in family order.
    pub partners: Vec<(usize, usize)>,
}

/// For each family set, groups codewords by restriction; a codeword in a group
/// of size `>= 2` has the set in its `F_c`, with partner the smallest other
/// index in the group. Returns a codeword maximizing `|F_c|`, ties to the
/// smallest index.
pub fn find_popular_codeword(code: &Code, family: &[CoordSet]) -> Result<Popular> {
    if code.is_empty() {
        return Err(Error::Input("empty code".into()));
    }
    if let Some(s) = family.iter().find(|s| CoordSet::max(s).is_some_and(|x| x >= code.n())) {
        return Err(Error::Input(format!("family set {s} leaves the coordinate range")));
    }
    let per_set: Vec<Vec<(usize, usize)>> = family
        .par_iter()
        .map(|set| {
            let mut groups: HashMap<Vec<Symbol>, Vec<usize>> = HashMap::new();
            let mut key = Vec::with_capacity(set.len());
            for (i, w) in code.words().iter().enumerate() {
                key.clear();
                restrict_into(w.symbols(), set.indices(), &mut key);
                groups.entry(key.clone()).or_default().push(i);
            }
            let mut pairs = Vec::new();
            for members in groups.values().filter(|g| g.len() >= 2) {
                for &c in members {
                    let partner = if members[0] == c { members[1] } else { members[0] };
                    pairs.push((c, partner));
                }
            }
            pairs.sort_unstable();
            pairs
        })
        .collect();
    let mut lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); code.len()];
    for (a, pairs) in per_set.into_iter().enumerate() {
        for (c, partner) in pairs {
            lists[c].push((a, partner));
        }
    }
    let codeword = (0..code.len()).max_by_key(|&c| (lists[c].len(), std::cmp::Reverse(c))).expect("code is non-empty");
    Ok(Popular { codeword, partners: std::mem::take(&mut lists[codeword]) })
}

/// Partners grouped by their restriction to `I_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionClass {
    pub key: Word,
    /// `(set index, partner index)` entries, in input order.
    pub entries: Vec<(usize, usize)>,
}

/// Pigeonhole on `I_0`.
///
/// Among classes with at least `need` entries, prefers the most distinct
/// partners, then the most entries, then the smallest key. On failure returns
/// `Err` with the class sizes; both outcomes carry all class sizes, largest first.
pub fn pigeonhole_i0(
    partners: &[(usize, usize)],
    code: &Code,
    i0: &CoordSet,
    need: usize,
) -> (std::result::Result<CollisionClass, usize>, Vec<usize>) {
    let mut classes: BTreeMap<Vec<Symbol>, Vec<(usize, usize)>> = BTreeMap::new();
    let mut key = Vec::with_capacity(i0.len());
    for &(a, partner) in partners {
        key.clear();
        restrict_into(code.word(partner).symbols(), i0.indices(), &mut key);
        classes.entry(key.clone()).or_default().push((a, partner));
    }
    let mut sizes: Vec<usize> = classes.values().map(|v| v.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let distinct = |v: &[(usize, usize)]| {
        let mut ps: Vec<usize> = v.iter().map(|e| e.1).collect();
        ps.sort_unstable();
        ps.dedup();
        ps.len()
    };
    let best = classes
        .iter()
        .filter(|(_, v)| v.len() >= need)
        .max_by(|(ka, va), (kb, vb)| (distinct(va), va.len()).cmp(&(distinct(vb), vb.len())).then_with(|| kb.cmp(ka)));
    let result = match best {
        Some((k, v)) => Ok(CollisionClass { key: Word::new(k.clone()), entries: v.clone() }),
        None => Err(sizes.first().copied().unwrap_or(0)),
    };
    (result, sizes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Selection {
    /// `L` entries with pairwise distinct partners.
    Distinct { entries: Vec<(usize, usize)> },
    /// A partner met `W` times; it agrees with the popular codeword on the
    /// union of those sets.
    Repeat { witness: DistanceWitness },
}

/// Picks the first `L` entries with pairwise distinct partners. When the class
/// has fewer than `L` distinct partners, some partner occurs at least `W`
/// times (given at least `W L` entries) and a distance witness is returned.
pub fn select_distinct(
    class: &CollisionClass,
    code: &Code,
    popular: usize,
    family: &[CoordSet],
    union_arity: usize,
    list_size: usize,
    union_floor: usize,
) -> Result<Selection> {
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(list_size);
    for &e in &class.entries {
        if chosen.len() == list_size {
            break;
        }
        if chosen.iter().all(|c| c.1 != e.1) {
            chosen.push(e);
        }
    }
    if chosen.len() == list_size {
        return Ok(Selection::Distinct { entries: chosen });
    }
    let mut occurrences: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, partner) in &class.entries {
        occurrences.entry(partner).or_default().push(a);
    }
    let repeated = occurrences.iter().find(|(_, sets)| sets.len() >= union_arity);
    match repeated {
        Some((&partner, sets)) => {
            let union = sets[..union_arity].iter().fold(CoordSet::empty(), |acc, &a| acc.union(&family[a]));
            let d = distance(code.word(popular).symbols(), code.word(partner).symbols());
            Ok(Selection::Repeat {
                witness: DistanceWitness {
                    codewords: (popular, partner),
                    agreement: union.len(),
                    distance: d,
                    union_floor,
                },
            })
        }
        None => Err(Error::Internal(format!(
            "class of {} entries has {} distinct partners and no partner repeated {union_arity} times",
            class.entries.len(),
            chosen.len()
        ))),
    }
}

/// Center agreeing with `c_1` on `I_0`, with `c_j` on `I_j` and with `c_0`
/// elsewhere; `agreement[j-1]` is the set on which `c_j` agrees with `c_0`.
pub fn build_center_general(
    code: &Code,
    c0: usize,
    partners: &[usize],
    agreement: &[CoordSet],
    params: &AttackParams,
) -> Result<Certificate> {
    let l = params.list_size;
    if partners.len() != l || agreement.len() != l {
        return Err(Error::Input(format!("need exactly L = {l} partners and agreement sets")));
    }
    let mut y: Vec<Symbol> = code.word(c0).symbols().to_vec();
    let c1 = code.word(partners[0]).symbols();
    for i in params.intervals[0].iter() {
        y[i] = c1[i];
    }
    for (j, &cj) in partners.iter().enumerate() {
        let w = code.word(cj).symbols();
        for i in params.intervals[j + 1].iter() {
            y[i] = w[i];
        }
    }
    let center = Word::new(y);
    let mut codewords = vec![c0];
    codewords.extend_from_slice(partners);
    let distances: Vec<usize> = codewords.iter().map(|&c| distance(center.symbols(), code.word(c).symbols())).collect();
    if distances[0] > params.i_star.len() || params.i_star.len() > params.pn {
        return Err(Error::Internal(format!("d(y, c_0) = {} exceeds |I_*| = pn = {}", distances[0], params.pn)));
    }
    let bound = params.partner_bound();
    for (j, &d) in distances.iter().enumerate().skip(1) {
        if d > bound || bound > params.pn {
            return Err(Error::Internal(format!(
                "d(y, c_{j}) = {d} exceeds n - d_0 - d_1 - a_F = {bound} (agreement set {})",
                agreement[j - 1]
            )));
        }
    }
    Ok(Certificate {
        mode: DecodingMode::Ordinary,
        center,
        codewords,
        distances,
        threshold: params.pn,
        provenance: Provenance::General,
    })
}
