use serde::Serialize;

use crate::error::Result;
use crate::model::{distance, Code};
use crate::verifier::{RadiusQuery, Scanner, VerifierConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expurgation {
    pub code: Code,
    /// Original indices of the surviving words, increasing.
    pub kept: Vec<usize>,
    /// Original indices removed, in removal order.
    pub removed: Vec<usize>,
}

/// Removes one codeword per violation until the code is decodable.
///
/// Each round takes the lexicographically first violating subset of the
/// surviving words and drops its member farthest from the violation center,
/// ties to the largest index. Subsets starting before the last violation's
/// first index were already clean and removals cannot create violations, so
/// each round resumes from there.
pub fn expurgate_violations(code: &Code, query: &RadiusQuery, config: &VerifierConfig) -> Result<Expurgation> {
    let m = code.len();
    let mut alive = vec![true; m];
    let mut removed = Vec::new();
    if m > query.list_size {
        let scanner = Scanner::new(code, query, config)?;
        let mut start = 0;
        while let Some(v) = scanner.first_violation(start, &alive)? {
            let victim = v
                .indices
                .iter()
                .copied()
                .max_by_key(|&i| (distance(v.center.symbols(), code.word(i).symbols()), i))
                .expect("violations are non-empty");
            alive[victim] = false;
            removed.push(victim);
            start = v.indices[0];
        }
    }
    let kept: Vec<usize> = (0..m).filter(|&i| alive[i]).collect();
    Ok(Expurgation { code: code.subcode(&kept), kept, removed })
}
