//! Randomized and greedy code constructions, plus set families with large
//! `W`-wise unions.

mod expurgate;
mod family;
mod random;
mod subcode;

pub use expurgate::{expurgate_violations, Expurgation};
pub(crate) use family::next_combination;
pub use family::{
    build_set_family, pairwise_family_warmup2, sample_set_family, union_arity, verify_set_family, FamilyCheck,
    FamilyOptions, SetFamily, DEFAULT_FAMILY_CAP, DEFAULT_UNION_CAP, FAMILY_MIN_TARGET,
};
pub use random::{random_code, RandomCodeSpec, DEFAULT_CODE_CAP};
pub use subcode::{
    avg_radius_expurgate, greedy_alpha, greedy_distance_subcode, neighborhood_bound_check, neighborhood_limit,
    NeighborhoodReport, Precondition, Subcode,
};
