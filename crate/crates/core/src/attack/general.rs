use serde::{Deserialize, Serialize};

use crate::constructions::{build_set_family, FamilyOptions};
use crate::error::{Error, Result};
use crate::model::{distance, Code, CoordSet};

use super::params::AttackParams;
use super::stages::{build_center_general, find_popular_codeword, pigeonhole_i0, select_distinct, Selection};
use super::{verify_certificate, AttackReport, Counters, Outcome, Provenance, Stage};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneralOptions {
    pub seed: u64,
    pub family: FamilyOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralDiagnostics {
    pub params: AttackParams,
    /// Original indices of the subcode attacked, when the code's minimum
    /// distance was below the requirement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcode: Option<Vec<usize>>,
    /// `(|F| / (2 W L))^(1 / d_0)`, the alphabet size a failed pigeonhole implies.
    pub implied_q_bound: Option<f64>,
    /// `|F_c| > |F| / 2` for the popular codeword.
    pub fc_exceeds_half: bool,
    /// On a pigeonhole failure, `W L q^{d_0} >= |F_c|`.
    pub pigeonhole_consistent: Option<bool>,
}

fn greedy_at_distance(code: &Code, threshold: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, w) in code.words().iter().enumerate() {
        if kept.iter().all(|&j| distance(w.symbols(), code.word(j).symbols()) >= threshold) {
            kept.push(i);
        }
    }
    kept
}

/// Full pipeline: distance subcode if needed, set family on `[n] \ I_*`,
/// popular codeword, pigeonhole on `I_0`, distinct partners, center.
pub fn run_general_attack(code: &Code, params: &AttackParams, options: &GeneralOptions) -> Result<AttackReport> {
    if code.n() != params.n {
        return Err(Error::Input(format!("code has n = {}, parameters have n = {}", code.n(), params.n)));
    }
    let (work, index_map) = match code.min_distance() {
        Some(d) if d < params.required_distance => {
            let kept = greedy_at_distance(code, params.required_distance);
            (code.subcode(&kept), Some(kept))
        }
        _ => (code.clone(), None),
    };
    let to_original = |i: usize| index_map.as_ref().map_or(i, |m| m[i]);

    let family = build_set_family(params.ground_size(), params.a_f, params.a_union, options.seed, &options.family)?;
    let sets: Vec<CoordSet> = family.sets.iter().map(|s| s.embed(&params.ground)).collect::<Result<_>>()?;
    let w = family.union_arity;
    let l = params.list_size;
    let need = w * l;

    let popular = find_popular_codeword(&work, &sets)?;
    let best_fc = popular.partners.len();
    let mut counters = Counters {
        family_size: sets.len(),
        family_sampled: false,
        popular_codeword: Some(to_original(popular.codeword)),
        best_fc,
        need,
        class_sizes: Vec::new(),
    };
    let implied_q_bound =
        (params.d0 > 0).then(|| (sets.len() as f64 / (2.0 * need as f64)).powf(1.0 / params.d0 as f64));
    let mut diagnostics = GeneralDiagnostics {
        params: params.clone(),
        subcode: index_map.clone(),
        implied_q_bound,
        fc_exceeds_half: 2 * best_fc > sets.len(),
        pigeonhole_consistent: None,
    };
    let report = |outcome, counters, diagnostics, witness| AttackReport {
        attack: Provenance::General,
        outcome,
        counters,
        distance_witness: witness,
        general: Some(diagnostics),
    };

    if best_fc < need {
        let reason = format!("best |F_c| = {best_fc} < W L = {need} (|F| = {})", sets.len());
        return Ok(report(Outcome::StageFailed { stage: Stage::PopularCodeword, reason }, counters, diagnostics, None));
    }

    let (class, sizes) = pigeonhole_i0(&popular.partners, &work, &params.intervals[0], need);
    counters.class_sizes = sizes;
    let class = match class {
        Ok(c) => c,
        Err(max) => {
            let capacity = (need as f64) * (code.q() as f64).powi(params.d0 as i32);
            diagnostics.pigeonhole_consistent = Some(capacity >= best_fc as f64);
            let reason = format!("largest I_0 class has {max} < W L = {need} entries");
            return Ok(report(
                Outcome::StageFailed { stage: Stage::PigeonholeI0, reason },
                counters,
                diagnostics,
                None,
            ));
        }
    };

    let selection = select_distinct(&class, &work, popular.codeword, &sets, w, l, params.a_union)?;
    let entries = match selection {
        Selection::Distinct { entries } => entries,
        Selection::Repeat { mut witness } => {
            witness.codewords = (to_original(witness.codewords.0), to_original(witness.codewords.1));
            let reason = format!(
                "codeword {} repeats {w} times; it agrees with codeword {} on {} >= a_union coordinates",
                witness.codewords.1, witness.codewords.0, witness.agreement
            );
            return Ok(report(
                Outcome::StageFailed { stage: Stage::Distinctness, reason },
                counters,
                diagnostics,
                Some(witness),
            ));
        }
    };
    let partners: Vec<usize> = entries.iter().map(|e| e.1).collect();
    let agreement: Vec<CoordSet> = entries.iter().map(|e| sets[e.0].clone()).collect();
    let mut certificate = build_center_general(&work, popular.codeword, &partners, &agreement, params)?;
    certificate.codewords = certificate.codewords.iter().map(|&i| to_original(i)).collect();
    verify_certificate(code, &certificate)
        .map_err(|e| Error::Internal(format!("general certificate rejected: {e}")))?;
    Ok(report(Outcome::Certificate { certificate }, counters, diagnostics, None))
}
