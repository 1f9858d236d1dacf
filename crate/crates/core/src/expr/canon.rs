//! Canonical forms for pure-correlator monomials.
//!
//! Two monomials are the same tensor expression when they differ only by
//! permuting a correlator's arguments, permuting the factors, renaming
//! contracted dummy indices, or flipping the raised/lowered orientation of a
//! contraction pair. Canonicalization picks the representative whose encoding
//! is lexicographically minimal over all consistent relabelings, so equal
//! monomials compare byte-identical.
//!
//! The minimization is a brute-force walk over `d! * 2^d` relabelings of the
//! `d` dummy pairs. Monomials in this corpus carry at most six pairs, so the
//! walk is bounded; a graph-canonicalization scheme would only be an
//! optimization.

use std::collections::BTreeMap;

use thiserror::Error;

use super::arg::{Base, Correlator, DummyId, VArg, Variance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("dummy index {0} occurs {1} time(s); contracted indices must occur exactly twice")]
    BadDummyCount(DummyId, usize),
    #[error("dummy index {0} occurs twice with the same variance")]
    SameVariance(DummyId),
    #[error("monomial carries {0} dummy pairs; canonicalization is bounded at {MAX_DUMMIES}")]
    TooManyDummies(usize),
}

const MAX_DUMMIES: usize = 8;

/// Sorted list of distinct dummy ids appearing in the factors.
pub fn dummy_ids(factors: &[Correlator]) -> Vec<DummyId> {
    let mut ids: Vec<DummyId> = factors
        .iter()
        .flat_map(|f| f.args.iter())
        .filter_map(|a| a.dummy_id().map(|(id, _)| id))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

fn check_pairing(factors: &[Correlator]) -> Result<Vec<DummyId>, CanonError> {
    let mut occ: BTreeMap<DummyId, (usize, usize)> = BTreeMap::new();
    for f in factors {
        for a in &f.args {
            if let Some((id, var)) = a.dummy_id() {
                let e = occ.entry(id).or_insert((0, 0));
                match var {
                    Variance::Up => e.0 += 1,
                    Variance::Down => e.1 += 1,
                }
            }
        }
    }
    let mut ids = Vec::with_capacity(occ.len());
    for (id, (up, down)) in occ {
        if up + down != 2 {
            return Err(CanonError::BadDummyCount(id, up + down));
        }
        if up != 1 {
            return Err(CanonError::SameVariance(id));
        }
        ids.push(id);
    }
    Ok(ids)
}

fn relabel_sorted(
    factors: &[Correlator],
    ids: &[DummyId],
    perm: &[usize],
    flips: u32,
) -> Vec<Correlator> {
    // perm[i] = position in `ids` of the dummy that receives label i.
    let mut label_of = BTreeMap::new();
    for (label, &pos) in perm.iter().enumerate() {
        label_of.insert(ids[pos], (label as DummyId, flips >> pos & 1 == 1));
    }
    let mut out: Vec<Correlator> = factors
        .iter()
        .map(|f| {
            let mut args: Vec<VArg> = f
                .args
                .iter()
                .map(|a| match a.base {
                    Base::Slot(_) => *a,
                    Base::Dummy(id, var) => {
                        let (label, flip) = label_of[&id];
                        let var = if flip { var.flip() } else { var };
                        VArg { shift: a.shift, base: Base::Dummy(label, var) }
                    }
                })
                .collect();
            args.sort_unstable();
            Correlator { genus: f.genus, args }
        })
        .collect();
    out.sort_unstable();
    out
}

/// Canonicalizes a factor list in place, validating the pairing invariant.
pub fn canonical_factors(factors: Vec<Correlator>) -> Result<Vec<Correlator>, CanonError> {
    let ids = check_pairing(&factors)?;
    let d = ids.len();
    if d == 0 {
        let mut out: Vec<Correlator> = factors
            .into_iter()
            .map(|mut f| {
                f.args.sort_unstable();
                f
            })
            .collect();
        out.sort_unstable();
        return Ok(out);
    }
    if d > MAX_DUMMIES {
        return Err(CanonError::TooManyDummies(d));
    }

    let mut best: Option<Vec<Correlator>> = None;
    let mut perm: Vec<usize> = (0..d).collect();
    loop {
        for flips in 0..1u32 << d {
            let cand = relabel_sorted(&factors, &ids, &perm, flips);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("d >= 1 so at least one candidate"))
}

/// Lexicographic next permutation; returns false after the last one.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Renames every dummy id through `f` without re-canonicalizing. Used to move
/// a canonical monomial's labels out of the way before merging it with other
/// factor lists.
pub fn remap_dummies(factors: &mut [Correlator], f: impl Fn(DummyId) -> DummyId) {
    for c in factors.iter_mut() {
        for a in c.args.iter_mut() {
            if let Base::Dummy(id, var) = a.base {
                a.base = Base::Dummy(f(id), var);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::arg::SlotName;

    fn slot(i: u32) -> VArg {
        VArg::slot(SlotName::w(i))
    }

    fn up(id: DummyId) -> VArg {
        VArg::dummy(id, Variance::Up)
    }

    fn dn(id: DummyId) -> VArg {
        VArg::dummy(id, Variance::Down)
    }

    #[test]
    fn argument_order_is_immaterial() {
        let a = canonical_factors(vec![Correlator::new(0, vec![slot(2), slot(1), up(7)]), {
            Correlator { genus: 1, args: vec![dn(7)] }
        }])
        .unwrap();
        let b = canonical_factors(vec![
            Correlator { genus: 1, args: vec![dn(7)] },
            Correlator { genus: 0, args: vec![up(7), slot(1), slot(2)] },
        ])
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn relabeling_and_flips_are_immaterial() {
        // <<g_b W1>>_0 <<g^b V1>>_1  vs  <<g^a W1>>_0 <<g_a V1>>_1
        let a = canonical_factors(vec![
            Correlator::new(0, vec![dn(1), VArg::slot(SlotName::w(1))]),
            Correlator::new(1, vec![up(1), VArg::slot(SlotName::v(1))]),
        ])
        .unwrap();
        let b = canonical_factors(vec![
            Correlator::new(0, vec![up(0), VArg::slot(SlotName::w(1))]),
            Correlator::new(1, vec![dn(0), VArg::slot(SlotName::v(1))]),
        ])
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pairing_violations_are_rejected() {
        let once = canonical_factors(vec![Correlator::new(0, vec![slot(1), up(3)])]);
        assert_eq!(once.unwrap_err(), CanonError::BadDummyCount(3, 1));

        let same = canonical_factors(vec![Correlator::new(0, vec![up(3), up(3)])]);
        assert_eq!(same.unwrap_err(), CanonError::SameVariance(3));
    }

    #[test]
    fn idempotent() {
        let m = vec![
            Correlator::new(0, vec![slot(1), up(4), dn(9)]),
            Correlator::new(0, vec![dn(4), up(9), slot(2)]),
        ];
        let once = canonical_factors(m).unwrap();
        let twice = canonical_factors(once.clone()).unwrap();
        assert_eq!(once, twice);
    }
}
