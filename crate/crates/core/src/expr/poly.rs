//! Sums of pure-correlator monomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;

use super::arg::{Base, Correlator, SlotName, VArg};
use super::canon::{canonical_factors, dummy_ids, remap_dummies, CanonError};
use super::Rat;

/// A canonical polynomial: like terms merged, every monomial canonical,
/// no zero coefficients. The empty polynomial is zero; the empty factor
/// list is the constant monomial.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TensorPoly {
    terms: BTreeMap<Vec<Correlator>, Rat>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly::default()
    }

    pub fn constant(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Vec::new(), r);
        }
        TensorPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Correlator>, &Rat)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Vec<Correlator>, Rat)> {
        self.terms.into_iter()
    }

    /// Builds a polynomial from raw terms, canonicalizing and merging.
    pub fn from_terms<I>(raw: I) -> Result<Self, CanonError>
    where
        I: IntoIterator<Item = (Rat, Vec<Correlator>)>,
    {
        let mut terms: BTreeMap<Vec<Correlator>, Rat> = BTreeMap::new();
        for (coeff, factors) in raw {
            if coeff.is_zero() {
                continue;
            }
            let key = canonical_factors(factors)?;
            let entry = terms.entry(key).or_insert_with(Rat::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TensorPoly { terms })
    }

    /// Single canonical monomial.
    pub fn monomial(coeff: Rat, factors: Vec<Correlator>) -> Result<Self, CanonError> {
        Self::from_terms([(coeff, factors)])
    }

    pub fn add_assign(&mut self, other: &TensorPoly) {
        for (k, c) in &other.terms {
            let entry = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    pub fn scale(&self, r: &Rat) -> TensorPoly {
        if r.is_zero() {
            return TensorPoly::zero();
        }
        TensorPoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * r)).collect(),
        }
    }

    /// Product of two canonical polynomials. The right operand's dummy labels
    /// are shifted clear of the left's before each pairwise merge.
    pub fn mul_poly(&self, other: &TensorPoly) -> TensorPoly {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for (fa, ca) in &self.terms {
            let offset = dummy_ids(fa).len() as u32;
            for (fb, cb) in &other.terms {
                let mut merged = fa.clone();
                let mut right = fb.clone();
                remap_dummies(&mut right, |id| id + offset);
                merged.extend(right);
                raw.push((ca * cb, merged));
            }
        }
        TensorPoly::from_terms(raw).expect("products of valid monomials stay valid")
    }

    /// Covariant derivative in a fresh parallel slot direction: the slot is
    /// inserted into each factor in turn (Leibniz over factors).
    pub fn derive_covariant(&self, dir: SlotName) -> TensorPoly {
        let mut raw = Vec::new();
        for (factors, coeff) in &self.terms {
            for i in 0..factors.len() {
                let mut f = factors.clone();
                f[i].args.push(VArg::slot(dir));
                raw.push((coeff.clone(), f));
            }
        }
        TensorPoly::from_terms(raw).expect("inserting a slot preserves validity")
    }

    /// Simultaneous renaming of slot names across the polynomial.
    pub fn rename_slots(&self, map: &BTreeMap<SlotName, SlotName>) -> TensorPoly {
        let raw = self.terms.iter().map(|(factors, coeff)| {
            let f = factors
                .iter()
                .map(|c| Correlator {
                    genus: c.genus,
                    args: c
                        .args
                        .iter()
                        .map(|a| match a.base {
                            Base::Slot(s) => VArg {
                                shift: a.shift,
                                base: Base::Slot(*map.get(&s).unwrap_or(&s)),
                            },
                            Base::Dummy(..) => *a,
                        })
                        .collect(),
                })
                .collect();
            (coeff.clone(), f)
        });
        TensorPoly::from_terms(raw.collect::<Vec<_>>()).expect("renaming preserves validity")
    }

    /// Multiset of slot names per monomial, if it is the same for every
    /// monomial (the multilinearity signature), else `None`.
    pub fn uniform_slot_multiset(&self) -> Option<Vec<SlotName>> {
        let mut sig: Option<Vec<SlotName>> = None;
        for (factors, _) in &self.terms {
            let mut names: Vec<SlotName> = factors
                .iter()
                .flat_map(|f| f.args.iter())
                .filter_map(|a| match a.base {
                    Base::Slot(s) => Some(s),
                    Base::Dummy(..) => None,
                })
                .collect();
            names.sort_unstable();
            match &sig {
                None => sig = Some(names),
                Some(s) if *s == names => {}
                Some(_) => return None,
            }
        }
        sig
    }
}

impl Add<&TensorPoly> for TensorPoly {
    type Output = TensorPoly;
    fn add(mut self, rhs: &TensorPoly) -> TensorPoly {
        self.add_assign(rhs);
        self
    }
}

impl Sub<&TensorPoly> for TensorPoly {
    type Output = TensorPoly;
    fn sub(mut self, rhs: &TensorPoly) -> TensorPoly {
        self.add_assign(&rhs.clone().neg());
        self
    }
}

impl Neg for TensorPoly {
    type Output = TensorPoly;
    fn neg(self) -> TensorPoly {
        TensorPoly {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul<&TensorPoly> for &TensorPoly {
    type Output = TensorPoly;
    fn mul(self, rhs: &TensorPoly) -> TensorPoly {
        self.mul_poly(rhs)
    }
}
