//! One source for every engine default, echoed verbatim into reports so the
//! acceptance runs are reproducible from the report alone.

use serde::{Deserialize, Serialize};

/// Search bounds for ideal-membership certification.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Bounds {
    /// Maximum number of correlator factors in a certificate cofactor.
    pub max_cofactor_factors: usize,
    /// Maximum number of fresh contracted dummy pairs wired between a
    /// generator instance and its cofactor.
    pub max_fresh_pairs: usize,
    /// Restrict cofactors to factor sub-multisets that co-occur inside a
    /// single target monomial.
    pub cofactors_cooccurring: bool,
    /// Hard cap on enumerated candidate columns; exceeding it is reported as
    /// bounds exhaustion, never silently truncated.
    pub max_candidates: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_cofactor_factors: 2,
            max_fresh_pairs: 2,
            cofactors_cooccurring: true,
            max_candidates: 2_000_000,
        }
    }
}

/// Engine-wide configuration; `EngineConfig::default()` reproduces the
/// acceptance runs exactly.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Genus-0 T-elimination rules are generated for arities `3..=this`.
    pub rule_max_arity_g0: usize,
    /// Genus-1 T-elimination rules are generated for arities `1..=this`.
    pub rule_max_arity_g1: usize,
    pub bounds: Bounds,
    /// Numeric trials per identity.
    pub trials: usize,
    /// Seed for the trial-state generator.
    pub seed: u64,
    /// Coupling-constant support: levels `support_min..=support_max` carry
    /// random rationals, everything else is zero. A minimum of 2 keeps every
    /// series finite without truncation bookkeeping.
    pub support_min: u32,
    pub support_max: u32,
    /// Slot vectors are supported on levels `0..=slot_max_level`.
    pub slot_max_level: u32,
    /// Random rationals have numerators in `-coeff_num_max..=coeff_num_max`
    /// and denominators in `1..=coeff_den_max`.
    pub coeff_num_max: i64,
    pub coeff_den_max: i64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            rule_max_arity_g0: 7,
            rule_max_arity_g1: 5,
            bounds: Bounds::default(),
            trials: 20,
            seed: 7,
            support_min: 2,
            support_max: 5,
            slot_max_level: 6,
            coeff_num_max: 9,
            coeff_den_max: 9,
        }
    }
}
