//! Constructive lower-bound attacks.
//!
//! Each attack either emits a [`Certificate`] (an explicit center and `L + 1`
//! distinct codewords breaking list decodability) or reports the pigeonhole
//! stage at which it ran out of collisions. Certificates are checked by
//! [`verify_certificate`], which recomputes everything from the code file
//! and shares no code path with the searches.

mod general;
mod params;
mod singleton;
mod stages;
mod warmup;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fraction::frac;
use crate::model::{hamming_distance, Code, Word};
use crate::verifier::{DecodingMode, RadiusQuery};

pub use general::{run_general_attack, GeneralDiagnostics, GeneralOptions};
pub use params::{derive_params, AttackParams, IntervalChain, Warmup2Params};
pub use singleton::{longest_shared_prefix, singleton_witness};
pub use stages::{
    build_center_general, find_popular_codeword, pigeonhole_i0, select_distinct, CollisionClass, Popular, Selection,
};
pub use warmup::{largest_dimension, run_warmup1, run_warmup2, WarmupOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Warmup1,
    Warmup2,
    General,
    SingletonWitness,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Warmup1 => "warmup1",
            Provenance::Warmup2 => "warmup2",
            Provenance::General => "general",
            Provenance::SingletonWitness => "singleton_witness",
        })
    }
}

/// An explicit center and `L + 1` distinct codewords.
///
/// In ordinary mode every distance is at most `threshold`; in average-radius
/// mode the total distance is at most `threshold`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub mode: DecodingMode,
    pub center: Word,
    pub codewords: Vec<usize>,
    pub distances: Vec<usize>,
    pub threshold: usize,
    pub provenance: Provenance,
}

impl Certificate {
    pub fn list_size(&self) -> usize {
        self.codewords.len().saturating_sub(1)
    }

    pub fn total(&self) -> usize {
        self.distances.iter().sum()
    }

    pub fn max_distance(&self) -> usize {
        self.distances.iter().copied().max().unwrap_or(0)
    }

    /// The decodability question this certificate answers negatively.
    pub fn query(&self, n: usize) -> Result<RadiusQuery> {
        let l = self.list_size();
        match self.mode {
            DecodingMode::Ordinary => RadiusQuery::ordinary(frac(self.threshold as i128, n as i128), l),
            DecodingMode::AverageRadius => RadiusQuery::average(frac(self.threshold as i128, ((l + 1) * n) as i128), l),
        }
    }
}

/// Replays a certificate against `code` using only Hamming distances.
pub fn verify_certificate(code: &Code, cert: &Certificate) -> std::result::Result<(), String> {
    if cert.codewords.len() < 2 {
        return Err(format!("need at least 2 codewords, found {}", cert.codewords.len()));
    }
    if cert.distances.len() != cert.codewords.len() {
        return Err("distance list length differs from codeword list".into());
    }
    if cert.center.len() != code.n() {
        return Err(format!("center has length {}, code has n = {}", cert.center.len(), code.n()));
    }
    if let Some(s) = cert.center.symbols().iter().find(|&&s| s >= code.q()) {
        return Err(format!("center symbol {s} outside the alphabet"));
    }
    for (a, &i) in cert.codewords.iter().enumerate() {
        if i >= code.len() {
            return Err(format!("codeword index {i} out of range"));
        }
        for &j in &cert.codewords[..a] {
            if j == i || code.word(j) == code.word(i) {
                return Err(format!("codewords {j} and {i} are not distinct"));
            }
        }
    }
    let mut total = 0usize;
    for (&i, &claimed) in cert.codewords.iter().zip(&cert.distances) {
        let d = hamming_distance(&cert.center, code.word(i)).map_err(|e| e.to_string())?;
        if d != claimed {
            return Err(format!("codeword {i}: claimed distance {claimed}, actual {d}"));
        }
        if cert.mode == DecodingMode::Ordinary && d > cert.threshold {
            return Err(format!("codeword {i} at distance {d} exceeds threshold {}", cert.threshold));
        }
        total += d;
    }
    if cert.mode == DecodingMode::AverageRadius && total > cert.threshold {
        return Err(format!("total distance {total} exceeds budget {}", cert.threshold));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    PopularCodeword,
    #[serde(rename = "pigeonhole_I0")]
    PigeonholeI0,
    Distinctness,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::PopularCodeword => "popular_codeword",
            Stage::PigeonholeI0 => "pigeonhole_I0",
            Stage::Distinctness => "distinctness",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Certificate { certificate: Certificate },
    StageFailed { stage: Stage, reason: String },
}

/// Two distinct codewords that agree on a union of agreement sets; their
/// distance contradicts the attack's minimum-distance precondition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceWitness {
    pub codewords: (usize, usize),
    pub agreement: usize,
    pub distance: usize,
    pub union_floor: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub family_size: usize,
    /// The family was sampled rather than enumerated.
    pub family_sampled: bool,
    pub popular_codeword: Option<usize>,
    pub best_fc: usize,
    pub need: usize,
    /// Collision class sizes on `I_0`, largest first.
    pub class_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: Provenance,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub counters: Counters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_witness: Option<DistanceWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general: Option<GeneralDiagnostics>,
}

impl AttackReport {
    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Certificate { certificate } => Some(certificate),
            Outcome::StageFailed { .. } => None,
        }
    }

    pub fn failed_stage(&self) -> Option<Stage> {
        match &self.outcome {
            Outcome::Certificate { .. } => None,
            Outcome::StageFailed { stage, .. } => Some(*stage),
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        match &self.outcome {
            Outcome::Certificate { certificate: c } => format!(
                "{}: certificate ({} mode) on codewords {:?}, distances {:?}, threshold {}",
                self.attack, c.mode, c.codewords, c.distances, c.threshold
            ),
            Outcome::StageFailed { stage, reason } => {
                format!("{}: stage {} failed: {}", self.attack, stage, reason)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code() -> Code {
        let ws: Vec<Word> = ["0000", "0011", "1100"].iter().map(|s| s.parse().unwrap()).collect();
        Code::new(2, 4, ws).unwrap()
    }

    fn cert() -> Certificate {
        Certificate {
            mode: DecodingMode::Ordinary,
            center: "0000".parse().unwrap(),
            codewords: vec![0, 1, 2],
            distances: vec![0, 2, 2],
            threshold: 2,
            provenance: Provenance::SingletonWitness,
        }
    }

    #[test]
    fn valid_certificate_verifies() {
        verify_certificate(&code(), &cert()).unwrap();
        let q = cert().query(4).unwrap();
        assert_eq!(q.radius(4), 2);
    }

    #[test]
    fn mutations_are_rejected() {
        let c = code();
        let mut dup = cert();
        dup.codewords[2] = 1;
        assert!(verify_certificate(&c, &dup).is_err());
        let mut low = cert();
        low.threshold = 1;
        assert!(verify_certificate(&c, &low).is_err());
        let mut moved = cert();
        moved.center = "1111".parse().unwrap();
        assert!(verify_certificate(&c, &moved).is_err());
        moved.distances = vec![4, 2, 2];
        assert!(verify_certificate(&c, &moved).is_err());
    }

    #[test]
    fn average_threshold_is_a_total() {
        let mut avg = cert();
        avg.mode = DecodingMode::AverageRadius;
        avg.threshold = 4;
        verify_certificate(&code(), &avg).unwrap();
        avg.threshold = 3;
        assert!(verify_certificate(&code(), &avg).is_err());
        let q = Certificate { threshold: 4, ..avg }.query(4).unwrap();
        assert_eq!(q.total_budget(4), 4);
    }
}
