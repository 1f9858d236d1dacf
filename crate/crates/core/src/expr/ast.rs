//! Pre-normalization expression trees.
//!
//! `VectorExpr` and `ScalarExpr` are what the parser and the tensor library
//! produce; the rewrite layer turns them into canonical [`TensorPoly`] values.
//! `Gprod([x1, ..., xk])` denotes the primary vector field obtained by
//! contracting the genus-0 (k+1)-point function of the arguments with the
//! pairing form; `Gprod` of two arguments is the quantum product.

use std::collections::BTreeMap;

use super::arg::{DummyId, SlotName, Variance};
use super::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VectorExpr {
    Slot(SlotName),
    Gamma(DummyId, Variance),
    TauPlus(Box<VectorExpr>),
    TauMinus(Box<VectorExpr>),
    T(Box<VectorExpr>),
    Gprod(Vec<VectorExpr>),
    /// Rational linear combination; the empty combination is the zero field.
    Lin(Vec<(Rat, VectorExpr)>),
    StringField,
}

impl VectorExpr {
    pub fn zero() -> Self {
        VectorExpr::Lin(Vec::new())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ScalarExpr {
    Const(Rat),
    Corr { genus: u32, args: Vec<VectorExpr> },
    Sum(Vec<ScalarExpr>),
    Prod(Vec<ScalarExpr>),
    Scale(Rat, Box<ScalarExpr>),
    Nabla { dir: VectorExpr, body: Box<ScalarExpr> },
    Tensor { name: String, args: Vec<VectorExpr> },
}

/// Scalar- or vector-valued expression; identity statements may be either.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Scalar(ScalarExpr),
    Vector(VectorExpr),
}

/// Source of fresh dummy ids. Expansion and instantiation draw from one
/// generator per job, so ids never collide within a monomial.
#[derive(Debug)]
pub struct DummyGen {
    next: DummyId,
}

impl DummyGen {
    /// Starts above every id already used in the given expressions.
    pub fn above(exprs: &[&ScalarExpr]) -> Self {
        let max = exprs.iter().map(|e| e.max_dummy_id().map_or(0, |m| m + 1)).max();
        DummyGen { next: max.unwrap_or(0) }
    }

    pub fn starting_at(next: DummyId) -> Self {
        DummyGen { next }
    }

    pub fn fresh(&mut self) -> DummyId {
        let id = self.next;
        self.next += 1;
        id
    }
}

// Constructor helpers; tensor builders and the catalog lean on these heavily.

pub fn slotv(name: SlotName) -> VectorExpr {
    VectorExpr::Slot(name)
}

pub fn gup(id: DummyId) -> VectorExpr {
    VectorExpr::Gamma(id, Variance::Up)
}

pub fn gdn(id: DummyId) -> VectorExpr {
    VectorExpr::Gamma(id, Variance::Down)
}

pub fn tee(x: VectorExpr) -> VectorExpr {
    VectorExpr::T(Box::new(x))
}

pub fn tau_plus(x: VectorExpr) -> VectorExpr {
    VectorExpr::TauPlus(Box::new(x))
}

pub fn tau_minus(x: VectorExpr) -> VectorExpr {
    VectorExpr::TauMinus(Box::new(x))
}

pub fn bullet(x: VectorExpr, y: VectorExpr) -> VectorExpr {
    VectorExpr::Gprod(vec![x, y])
}

pub fn corr(genus: u32, args: Vec<VectorExpr>) -> ScalarExpr {
    ScalarExpr::Corr { genus, args }
}

pub fn sum(items: Vec<ScalarExpr>) -> ScalarExpr {
    ScalarExpr::Sum(items)
}

pub fn prod(items: Vec<ScalarExpr>) -> ScalarExpr {
    ScalarExpr::Prod(items)
}

pub fn scale(r: Rat, e: ScalarExpr) -> ScalarExpr {
    ScalarExpr::Scale(r, Box::new(e))
}

pub fn nabla(dir: VectorExpr, body: ScalarExpr) -> ScalarExpr {
    ScalarExpr::Nabla { dir, body: Box::new(body) }
}

pub fn tensor_ref(name: &str, args: Vec<VectorExpr>) -> ScalarExpr {
    ScalarExpr::Tensor { name: name.to_string(), args }
}

impl VectorExpr {
    pub fn max_dummy_id(&self) -> Option<DummyId> {
        match self {
            VectorExpr::Slot(_) | VectorExpr::StringField => None,
            VectorExpr::Gamma(id, _) => Some(*id),
            VectorExpr::TauPlus(x) | VectorExpr::TauMinus(x) | VectorExpr::T(x) => {
                x.max_dummy_id()
            }
            VectorExpr::Gprod(xs) => xs.iter().filter_map(|x| x.max_dummy_id()).max(),
            VectorExpr::Lin(pairs) => pairs.iter().filter_map(|(_, x)| x.max_dummy_id()).max(),
        }
    }

    fn substitute(&self, binding: &BTreeMap<SlotName, VectorExpr>) -> VectorExpr {
        match self {
            VectorExpr::Slot(s) => binding.get(s).cloned().unwrap_or(VectorExpr::Slot(*s)),
            VectorExpr::Gamma(..) | VectorExpr::StringField => self.clone(),
            VectorExpr::TauPlus(x) => tau_plus(x.substitute(binding)),
            VectorExpr::TauMinus(x) => tau_minus(x.substitute(binding)),
            VectorExpr::T(x) => tee(x.substitute(binding)),
            VectorExpr::Gprod(xs) => {
                VectorExpr::Gprod(xs.iter().map(|x| x.substitute(binding)).collect())
            }
            VectorExpr::Lin(pairs) => VectorExpr::Lin(
                pairs.iter().map(|(c, x)| (c.clone(), x.substitute(binding))).collect(),
            ),
        }
    }

    fn refresh_dummies(&self, map: &mut BTreeMap<DummyId, DummyId>, gen: &mut DummyGen) -> Self {
        match self {
            VectorExpr::Slot(_) | VectorExpr::StringField => self.clone(),
            VectorExpr::Gamma(id, v) => {
                let fresh = *map.entry(*id).or_insert_with(|| gen.fresh());
                VectorExpr::Gamma(fresh, *v)
            }
            VectorExpr::TauPlus(x) => tau_plus(x.refresh_dummies(map, gen)),
            VectorExpr::TauMinus(x) => tau_minus(x.refresh_dummies(map, gen)),
            VectorExpr::T(x) => tee(x.refresh_dummies(map, gen)),
            VectorExpr::Gprod(xs) => {
                VectorExpr::Gprod(xs.iter().map(|x| x.refresh_dummies(map, gen)).collect())
            }
            VectorExpr::Lin(pairs) => VectorExpr::Lin(
                pairs.iter().map(|(c, x)| (c.clone(), x.refresh_dummies(map, gen))).collect(),
            ),
        }
    }

    pub fn free_slots(&self, out: &mut Vec<SlotName>) {
        match self {
            VectorExpr::Slot(s) => out.push(*s),
            VectorExpr::Gamma(..) | VectorExpr::StringField => {}
            VectorExpr::TauPlus(x) | VectorExpr::TauMinus(x) | VectorExpr::T(x) => {
                x.free_slots(out)
            }
            VectorExpr::Gprod(xs) => xs.iter().for_each(|x| x.free_slots(out)),
            VectorExpr::Lin(pairs) => pairs.iter().for_each(|(_, x)| x.free_slots(out)),
        }
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::Sum(Vec::new())
    }

    pub fn max_dummy_id(&self) -> Option<DummyId> {
        match self {
            ScalarExpr::Const(_) => None,
            ScalarExpr::Corr { args, .. } | ScalarExpr::Tensor { args, .. } => {
                args.iter().filter_map(|a| a.max_dummy_id()).max()
            }
            ScalarExpr::Sum(items) | ScalarExpr::Prod(items) => {
                items.iter().filter_map(|e| e.max_dummy_id()).max()
            }
            ScalarExpr::Scale(_, e) => e.max_dummy_id(),
            ScalarExpr::Nabla { dir, body } => dir.max_dummy_id().max(body.max_dummy_id()),
        }
    }

    /// Capture-avoiding slot substitution. Callers wanting per-site fresh
    /// dummies refresh the template first (`refresh_dummies`), then bind.
    pub fn substitute(&self, binding: &BTreeMap<SlotName, VectorExpr>) -> ScalarExpr {
        match self {
            ScalarExpr::Const(_) => self.clone(),
            ScalarExpr::Corr { genus, args } => ScalarExpr::Corr {
                genus: *genus,
                args: args.iter().map(|a| a.substitute(binding)).collect(),
            },
            ScalarExpr::Sum(items) => {
                ScalarExpr::Sum(items.iter().map(|e| e.substitute(binding)).collect())
            }
            ScalarExpr::Prod(items) => {
                ScalarExpr::Prod(items.iter().map(|e| e.substitute(binding)).collect())
            }
            ScalarExpr::Scale(r, e) => scale(r.clone(), e.substitute(binding)),
            ScalarExpr::Nabla { dir, body } => ScalarExpr::Nabla {
                dir: dir.substitute(binding),
                body: Box::new(body.substitute(binding)),
            },
            ScalarExpr::Tensor { name, args } => ScalarExpr::Tensor {
                name: name.clone(),
                args: args.iter().map(|a| a.substitute(binding)).collect(),
            },
        }
    }

    /// Renames every dummy id to a fresh one, preserving the pairing pattern.
    pub fn refresh_dummies(&self, gen: &mut DummyGen) -> ScalarExpr {
        let mut map = BTreeMap::new();
        self.refresh_inner(&mut map, gen)
    }

    fn refresh_inner(
        &self,
        map: &mut BTreeMap<DummyId, DummyId>,
        gen: &mut DummyGen,
    ) -> ScalarExpr {
        match self {
            ScalarExpr::Const(_) => self.clone(),
            ScalarExpr::Corr { genus, args } => ScalarExpr::Corr {
                genus: *genus,
                args: args.iter().map(|a| a.refresh_dummies(map, gen)).collect(),
            },
            ScalarExpr::Sum(items) => {
                ScalarExpr::Sum(items.iter().map(|e| e.refresh_inner(map, gen)).collect())
            }
            ScalarExpr::Prod(items) => {
                ScalarExpr::Prod(items.iter().map(|e| e.refresh_inner(map, gen)).collect())
            }
            ScalarExpr::Scale(r, e) => scale(r.clone(), e.refresh_inner(map, gen)),
            ScalarExpr::Nabla { dir, body } => ScalarExpr::Nabla {
                dir: dir.refresh_dummies(map, gen),
                body: Box::new(body.refresh_inner(map, gen)),
            },
            ScalarExpr::Tensor { name, args } => ScalarExpr::Tensor {
                name: name.clone(),
                args: args.iter().map(|a| a.refresh_dummies(map, gen)).collect(),
            },
        }
    }

    pub fn free_slots(&self) -> Vec<SlotName> {
        let mut out = Vec::new();
        self.collect_slots(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_slots(&self, out: &mut Vec<SlotName>) {
        match self {
            ScalarExpr::Const(_) => {}
            ScalarExpr::Corr { args, .. } | ScalarExpr::Tensor { args, .. } => {
                args.iter().for_each(|a| a.free_slots(out))
            }
            ScalarExpr::Sum(items) | ScalarExpr::Prod(items) => {
                items.iter().for_each(|e| e.collect_slots(out))
            }
            ScalarExpr::Scale(_, e) => e.collect_slots(out),
            ScalarExpr::Nabla { dir, body } => {
                dir.free_slots(out);
                body.collect_slots(out);
            }
        }
    }
}

/// Sum of `e` over all permutations of the given slots (full symmetric
/// group). The term count is multiplied by the group order before any
/// simplification.
pub fn symmetrize(e: &ScalarExpr, slots: &[SlotName]) -> ScalarExpr {
    let mut items = Vec::new();
    let mut idx: Vec<usize> = (0..slots.len()).collect();
    loop {
        let binding: BTreeMap<SlotName, VectorExpr> = slots
            .iter()
            .zip(idx.iter())
            .map(|(s, &i)| (*s, VectorExpr::Slot(slots[i])))
            .collect();
        items.push(e.substitute(&binding));
        if !super::canon::next_permutation(&mut idx) {
            break;
        }
    }
    ScalarExpr::Sum(items)
}
