use std::collections::HashMap;

use crate::error::{input, Error, Result};
use crate::model::{distance, Code, Symbol, Word};
use crate::verifier::DecodingMode;

use super::{verify_certificate, Certificate, Provenance};

/// Smallest-key group of at least `k` codewords sharing their first `t` symbols.
fn shared_prefix_group(code: &Code, t: usize, k: usize) -> Option<Vec<usize>> {
    let mut groups: HashMap<&[Symbol], Vec<usize>> = HashMap::new();
    for (i, w) in code.words().iter().enumerate() {
        groups.entry(&w.symbols()[..t]).or_default().push(i);
    }
    groups.into_iter().filter(|(_, g)| g.len() >= k).min_by(|a, b| a.0.cmp(b.0)).map(|(_, g)| g)
}

/// Longest `t` such that some `k` codewords agree on the first `t` coordinates.
pub fn longest_shared_prefix(code: &Code, k: usize) -> Option<usize> {
    if code.len() < k || k == 0 {
        return None;
    }
    let (mut lo, mut hi) = (0, code.n());
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if shared_prefix_group(code, mid, k).is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Some(lo)
}

/// `L + 1` codewords sharing the longest possible prefix `t`, and a center
/// that copies the prefix and gives each codeword its own block of the
/// remaining `n - t` coordinates. Every distance is at most
/// `n - t - floor((n - t) / (L + 1))`.
pub fn singleton_witness(code: &Code, list_size: usize) -> Result<Certificate> {
    let k = list_size + 1;
    if list_size == 0 {
        return input("list size L must be at least 1");
    }
    let t = longest_shared_prefix(code, k)
        .ok_or_else(|| Error::Input(format!("need at least L + 1 = {k} codewords, have {}", code.len())))?;
    let group = shared_prefix_group(code, t, k).expect("prefix length was found");
    let chosen: Vec<usize> = group[..k].to_vec();
    let n = code.n();
    let rest = n - t;
    let (base, extra) = (rest / k, rest % k);
    let mut y: Vec<Symbol> = code.word(chosen[0]).symbols()[..t].to_vec();
    for (j, &c) in chosen.iter().enumerate() {
        let len = base + usize::from(j < extra);
        let start = y.len();
        y.extend_from_slice(&code.word(c).symbols()[start..start + len]);
    }
    let center = Word::new(y);
    let distances: Vec<usize> = chosen.iter().map(|&c| distance(center.symbols(), code.word(c).symbols())).collect();
    let cert = Certificate {
        mode: DecodingMode::Ordinary,
        center,
        codewords: chosen,
        distances,
        threshold: rest - base,
        provenance: Provenance::SingletonWitness,
    };
    verify_certificate(code, &cert).map_err(|e| Error::Internal(format!("singleton witness rejected: {e}")))?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(q: u32, words: &[&str]) -> Code {
        let ws: Vec<Word> = words.iter().map(|s| s.parse().unwrap()).collect();
        Code::new(q, ws[0].len(), ws).unwrap()
    }

    #[test]
    fn shared_prefix_of_three() {
        let c = code(3, &["01000000", "01111111", "01222222", "20000000"]);
        let cert = singleton_witness(&c, 2).unwrap();
        assert_eq!(longest_shared_prefix(&c, 3), Some(2));
        assert_eq!(cert.codewords, vec![0, 1, 2]);
        assert_eq!(cert.threshold, 4);
        assert!(cert.max_distance() <= 4);
    }

    #[test]
    fn full_binary_space_of_length_three() {
        let all: Vec<String> = (0..8).map(|x| format!("{:03b}", x)).collect();
        let refs: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        let c = code(2, &refs);
        let cert = singleton_witness(&c, 1).unwrap();
        assert_eq!(longest_shared_prefix(&c, 2), Some(2));
        assert!(cert.threshold <= 1);
    }

    #[test]
    fn too_few_codewords() {
        let c = code(2, &["00", "11"]);
        assert!(singleton_witness(&c, 2).is_err());
    }
}
