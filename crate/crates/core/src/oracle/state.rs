//! Rational points of the big phase space for the point target.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::config::EngineConfig;
use crate::expr::{Rat, SlotName};

/// A finitely supported vector field value: level -> coefficient.
pub type VectorVal = BTreeMap<u32, Rat>;

/// One evaluation point: coupling constants with finite support plus an
/// assignment of concrete vectors to the named slots.
#[derive(Clone, Debug)]
pub struct PointState {
    pub t: BTreeMap<u32, Rat>,
    pub slots: BTreeMap<SlotName, VectorVal>,
    /// Total-insertion truncation order; required whenever `t` touches
    /// levels 0 or 1 (otherwise the series is already finite).
    pub truncation: Option<u32>,
}

impl PointState {
    /// Zero couplings, no slots.
    pub fn origin() -> Self {
        PointState { t: BTreeMap::new(), slots: BTreeMap::new(), truncation: None }
    }

    pub fn needs_truncation(&self) -> bool {
        self.t.keys().next().is_some_and(|&l| l < 2)
    }

    pub fn with_slot(mut self, name: SlotName, v: VectorVal) -> Self {
        self.slots.insert(name, v);
        self
    }
}

fn random_rat(rng: &mut ChaCha20Rng, cfg: &EngineConfig) -> Rat {
    let n = rng.gen_range(-cfg.coeff_num_max..=cfg.coeff_num_max);
    let d = rng.gen_range(1..=cfg.coeff_den_max);
    Rat::new(n.into(), d.into())
}

/// Deterministic random state for one trial. The same `(seed, trial)` pair
/// yields the same state on every platform.
pub fn random_state(cfg: &EngineConfig, seed: u64, trial: u64, slots: &[SlotName]) -> PointState {
    let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ trial);
    let mut t = BTreeMap::new();
    for level in cfg.support_min..=cfg.support_max {
        let v = random_rat(&mut rng, cfg);
        if !num::Zero::is_zero(&v) {
            t.insert(level, v);
        }
    }
    let mut assignment = BTreeMap::new();
    for name in slots {
        let mut vec = BTreeMap::new();
        for level in 0..=cfg.slot_max_level {
            let v = random_rat(&mut rng, cfg);
            if !num::Zero::is_zero(&v) {
                vec.insert(level, v);
            }
        }
        assignment.insert(*name, vec);
    }
    PointState { t, slots: assignment, truncation: None }
}

// Small vector-value helpers shared by the evaluator.

pub fn vec_add(a: &VectorVal, b: &VectorVal) -> VectorVal {
    let mut out = a.clone();
    for (l, c) in b {
        let e = out.entry(*l).or_insert_with(num::Zero::zero);
        *e += c;
        if num::Zero::is_zero(e) {
            out.remove(l);
        }
    }
    out
}

pub fn vec_neg(a: &VectorVal) -> VectorVal {
    a.iter().map(|(l, c)| (*l, -c.clone())).collect()
}

pub fn vec_scale(a: &VectorVal, r: &Rat) -> VectorVal {
    if num::Zero::is_zero(r) {
        return VectorVal::new();
    }
    a.iter().map(|(l, c)| (*l, c * r)).collect()
}

pub fn vec_shift_up(a: &VectorVal) -> VectorVal {
    a.iter().map(|(l, c)| (l + 1, c.clone())).collect()
}

/// `tau-` drops level 0.
pub fn vec_shift_down(a: &VectorVal) -> VectorVal {
    a.iter().filter(|(l, _)| **l >= 1).map(|(l, c)| (l - 1, c.clone())).collect()
}
