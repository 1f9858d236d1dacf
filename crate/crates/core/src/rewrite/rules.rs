//! Generation of the directed T-elimination rewrite system.
//!
//! The base rules are the pure expansions of the genus-0 three-point and
//! genus-1 one-point recursion tensors. Higher arities are their covariant
//! derivatives with the fresh direction relabeled into the second slot;
//! that particular relabeling reproduces the published four-, five- and
//! six-point forms verbatim, which the fidelity suite pins down.

use std::collections::{BTreeMap, BTreeSet};

use crate::expr::{
    tensor_ref, Base, Correlator, DummyGen, Rat, ScalarExpr, SlotName, TensorPoly, VArg,
};

use super::expand::{expand_definitional, ExpandCtx, ExpandError};

#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub genus: u32,
    pub arity: usize,
    /// Derivative order above the base tensor (genus 0: arity-3; genus 1:
    /// arity-1).
    pub order: usize,
    pub slots: Vec<SlotName>,
    /// The full identity polynomial; it contains the pattern monomial
    /// `<<tau+ W1, W2..Wk>>_g` with coefficient +1 and vanishes as a tensor.
    pub identity: TensorPoly,
    /// identity minus the pattern monomial, negated: substituting the bound
    /// arguments yields the replacement for a matched factor.
    pub replacement: Vec<(Rat, Vec<Correlator>)>,
}

#[derive(Clone, Debug)]
pub struct Ruleset {
    pub g0: BTreeMap<usize, RewriteRule>,
    pub g1: BTreeMap<usize, RewriteRule>,
}

impl Ruleset {
    pub fn rule(&self, genus: u32, arity: usize) -> Option<&RewriteRule> {
        match genus {
            0 => self.g0.get(&arity),
            1 => self.g1.get(&arity),
            _ => None,
        }
    }

    pub fn max_arity(&self, genus: u32) -> usize {
        match genus {
            0 => self.g0.keys().max().copied().unwrap_or(2),
            1 => self.g1.keys().max().copied().unwrap_or(0),
            _ => 0,
        }
    }
}

fn slots(k: usize) -> Vec<SlotName> {
    (1..=k as u32).map(SlotName::w).collect()
}

fn base_identity(tensor: &str, arity: usize) -> Result<TensorPoly, ExpandError> {
    let args = (1..=arity as u32).map(|i| crate::expr::slotv(SlotName::w(i))).collect();
    let expr: ScalarExpr = tensor_ref(tensor, args);
    let mut gen = DummyGen::starting_at(0);
    let mut notes = BTreeSet::new();
    expand_definitional(&expr, &mut ExpandCtx { gen: &mut gen, notes: &mut notes })
}

/// Covariant derivative with the fresh direction moved into slot 2.
fn derive_insert_second(p: &TensorPoly, arity: usize) -> TensorPoly {
    let new = SlotName::w(arity as u32 + 1);
    let derived = p.derive_covariant(new);
    let mut map = BTreeMap::new();
    map.insert(new, SlotName::w(2));
    for i in 2..=arity as u32 {
        map.insert(SlotName::w(i), SlotName::w(i + 1));
    }
    derived.rename_slots(&map)
}

fn rule_from(genus: u32, arity: usize, order: usize, identity: TensorPoly) -> RewriteRule {
    let slots = slots(arity);
    // locate the pattern monomial: one factor, full arity, W1 shifted once
    let mut pattern: Option<Vec<Correlator>> = None;
    for (factors, coeff) in identity.terms() {
        if factors.len() != 1 {
            continue;
        }
        let f = &factors[0];
        if f.genus != genus || f.arity() != arity {
            continue;
        }
        let shifted: Vec<&VArg> = f.args.iter().filter(|a| a.shift > 0).collect();
        if shifted.len() == 1
            && shifted[0].shift == 1
            && shifted[0].base == Base::Slot(SlotName::w(1))
        {
            assert!(
                coeff == &Rat::from_integer(1.into()),
                "pattern monomial must carry coefficient 1"
            );
            pattern = Some(factors.clone());
        }
    }
    let pattern = pattern.expect("every derived identity contains its pattern monomial");
    let replacement: Vec<(Rat, Vec<Correlator>)> = identity
        .terms()
        .filter(|(factors, _)| **factors != pattern)
        .map(|(factors, coeff)| (-coeff.clone(), factors.clone()))
        .collect();
    RewriteRule { genus, arity, order, slots, identity, replacement }
}

/// Builds T-elimination rules for genus-0 arities `3..=max_arity_g0` and
/// genus-1 arities `1..=max_arity_g1`.
pub fn build_ruleset(max_arity_g0: usize, max_arity_g1: usize) -> Result<Ruleset, ExpandError> {
    assert!(max_arity_g0 >= 3 && max_arity_g1 >= 1);
    let mut g0 = BTreeMap::new();
    let mut p = base_identity("rho0", 3)?;
    for arity in 3..=max_arity_g0 {
        g0.insert(arity, rule_from(0, arity, arity - 3, p.clone()));
        if arity < max_arity_g0 {
            p = derive_insert_second(&p, arity);
        }
    }
    let mut g1 = BTreeMap::new();
    let mut p = base_identity("rho1", 1)?;
    for arity in 1..=max_arity_g1 {
        g1.insert(arity, rule_from(1, arity, arity - 1, p.clone()));
        if arity < max_arity_g1 {
            p = derive_insert_second(&p, arity);
        }
    }
    Ok(Ruleset { g0, g1 })
}
