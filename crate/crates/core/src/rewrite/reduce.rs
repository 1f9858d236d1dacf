//! Directed reduction: eliminate shifted arguments from genus-0 and genus-1
//! factors using the T-elimination rules.
//!
//! Strategy is deterministic: in each monomial the canonically-first
//! reducible factor is rewritten, its first shifted argument takes the
//! rule's distinguished role and the remaining arguments fill the other
//! slots in canonical order. Every application strictly decreases the total
//! shift carried by genus-0/1 factors, so reduction terminates.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{canonical_factors, print_correlator, CanonError, Correlator, DummyGen, Rat, VArg};

use super::expand::instantiate_template;
use super::rules::Ruleset;
use crate::expr::TensorPoly;

/// One ideal element subtracted during reduction or certification:
/// `coeff * cofactor * generator_instance(args)`.
#[derive(Clone, Debug, Serialize)]
pub struct CertEntry {
    pub generator: String,
    pub order: usize,
    #[serde(skip)]
    pub args: Vec<VArg>,
    #[serde(skip)]
    pub cofactor: Vec<Correlator>,
    #[serde(skip)]
    pub coeff: Rat,
}

/// Arity caps for reduction. Rules above the caps are not applied, which is
/// how a verification restricts itself to the stated modulus.
#[derive(Clone, Copy, Debug)]
pub struct ReduceCaps {
    pub g0_arity: usize,
    pub g1_arity: usize,
    /// When set, a reducible factor beyond the caps is an error instead of
    /// being left in place.
    pub strict: bool,
}

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("arity overflow: no rule covers the reducible factor {0}")]
    ArityOverflow(String),
    #[error(transparent)]
    Canon(#[from] CanonError),
}

#[derive(Debug, Default)]
pub struct ReduceResult {
    pub normal: TensorPoly,
    pub entries: Vec<CertEntry>,
    pub steps: usize,
}

fn reducible_within(f: &Correlator, caps: &ReduceCaps) -> bool {
    if f.total_shift() == 0 {
        return false;
    }
    match f.genus {
        0 => f.arity() >= 3 && f.arity() <= caps.g0_arity,
        1 => f.arity() >= 1 && f.arity() <= caps.g1_arity,
        _ => false,
    }
}

fn reducible_beyond(f: &Correlator, caps: &ReduceCaps) -> bool {
    if f.total_shift() == 0 {
        return false;
    }
    match f.genus {
        0 => f.arity() >= 3 && f.arity() > caps.g0_arity,
        1 => f.arity() > caps.g1_arity,
        _ => false,
    }
}

fn max_dummy(factors: &[Correlator]) -> u32 {
    factors
        .iter()
        .flat_map(|f| f.args.iter())
        .filter_map(|a| a.dummy_id().map(|(id, _)| id))
        .max()
        .map_or(0, |m| m + 1)
}

pub fn trr_reduce(
    poly: &TensorPoly,
    rules: &Ruleset,
    caps: &ReduceCaps,
    record: bool,
) -> Result<ReduceResult, ReduceError> {
    let mut done: BTreeMap<Vec<Correlator>, Rat> = BTreeMap::new();
    let mut active: BTreeMap<Vec<Correlator>, Rat> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut steps = 0usize;

    let classify = |factors: &[Correlator]| -> Result<Option<usize>, ReduceError> {
        if let Some(i) = factors.iter().position(|f| reducible_within(f, caps)) {
            return Ok(Some(i));
        }
        if caps.strict {
            if let Some(f) = factors.iter().find(|f| reducible_beyond(f, caps)) {
                return Err(ReduceError::ArityOverflow(print_correlator(f)));
            }
        }
        Ok(None)
    };

    for (factors, coeff) in poly.terms() {
        match classify(factors)? {
            Some(_) => active.insert(factors.clone(), coeff.clone()),
            None => done.insert(factors.clone(), coeff.clone()),
        };
    }

    while !active.is_empty() {
        let mut next: BTreeMap<Vec<Correlator>, Rat> = BTreeMap::new();
        for (factors, coeff) in active {
            let idx = classify(&factors)?.expect("active terms are reducible");
            let factor = &factors[idx];
            let rule = rules
                .rule(factor.genus, factor.arity())
                .expect("reducible_within implies a rule exists");
            // distinguished argument: first shifted one in canonical order
            let dpos = factor
                .args
                .iter()
                .position(|a| a.shift > 0)
                .expect("reducible factor has a shifted argument");
            let mut binding: Vec<VArg> = Vec::with_capacity(factor.arity());
            let mut distinguished = factor.args[dpos];
            distinguished.shift -= 1;
            binding.push(distinguished);
            for (i, a) in factor.args.iter().enumerate() {
                if i != dpos {
                    binding.push(*a);
                }
            }
            let cofactor: Vec<Correlator> = factors
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != idx)
                .map(|(_, f)| f.clone())
                .collect();
            if record {
                entries.push(CertEntry {
                    generator: if factor.genus == 0 { "rho0".into() } else { "rho1".into() },
                    order: rule.order,
                    args: binding.clone(),
                    cofactor: cofactor.clone(),
                    coeff: coeff.clone(),
                });
            }
            steps += 1;
            let mut gen = DummyGen::starting_at(max_dummy(&factors));
            for (c, inst_factors) in
                instantiate_template(&rule.replacement, &rule.slots, &binding, &mut gen)
            {
                let mut raw = cofactor.clone();
                raw.extend(inst_factors);
                let canon = canonical_factors(raw)?;
                let target = match classify(&canon)? {
                    Some(_) => &mut next,
                    None => &mut done,
                };
                let entry = target.entry(canon).or_insert_with(Rat::zero);
                *entry += &coeff * c;
                if entry.is_zero() {
                    // key lookup again to remove; cheap relative to the math
                    let key = target
                        .iter()
                        .find(|(_, v)| v.is_zero())
                        .map(|(k, _)| k.clone());
                    if let Some(k) = key {
                        target.remove(&k);
                    }
                }
            }
        }
        active = next;
    }

    let normal = TensorPoly::from_terms(done.into_iter().map(|(f, c)| (c, f)))
        .expect("normal terms are already canonical");
    Ok(ReduceResult { normal, entries, steps })
}
