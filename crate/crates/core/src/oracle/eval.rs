//! Exact interpreter for expressions in the point model.
//!
//! Everything reduces to two primitives: the value of a correlator at
//! concrete descendant levels (a finite series over the coupling support,
//! terminating by the selection rule) and intersection numbers. The
//! interpreter is deliberately independent of the symbolic expansion path:
//! `T`, the quantum product and `nabla` are evaluated from their defining
//! formulas on concrete vectors, so a bug in the rewrite layer cannot hide
//! here.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num::Zero;
use thiserror::Error;

use crate::expr::{Rat, ScalarExpr, SlotName, VectorExpr};
use crate::tensors;

use super::intersection::Oracle;
use super::state::{
    vec_add, vec_neg, vec_scale, vec_shift_down, vec_shift_up, PointState, VectorVal,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("slot {0} is not bound in the evaluation state")]
    UnboundSlot(SlotName),
    #[error("couplings touch level 0/1 but no truncation order is set")]
    NonTerminating,
    #[error("nested nabla is not supported numerically; expand first")]
    NestedNabla,
    #[error("unknown tensor `{0}`")]
    UnknownTensor(String),
}

pub struct Evaluator<'a> {
    pub oracle: &'a Oracle,
    pub state: &'a PointState,
    memo: RefCell<HashMap<(u32, Vec<u32>), Rat>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(oracle: &'a Oracle, state: &'a PointState) -> Result<Self, EvalError> {
        if state.needs_truncation() && state.truncation.is_none() {
            return Err(EvalError::NonTerminating);
        }
        Ok(Evaluator { oracle, state, memo: RefCell::new(HashMap::new()) })
    }

    /// `<<tau_{l_1} ... tau_{l_k}>>_g` at the current point: the generating
    /// series summed over extra insertions from the coupling support.
    pub fn correlator_value(&self, genus: u32, levels: &[u32]) -> Rat {
        let mut key_levels = levels.to_vec();
        key_levels.sort_unstable();
        let key = (genus, key_levels);
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let value = self.correlator_series(genus, &key.1);
        self.memo.borrow_mut().insert(key, value.clone());
        value
    }

    fn correlator_series(&self, genus: u32, levels: &[u32]) -> Rat {
        let k = levels.len() as i64;
        let sum_n: i64 = levels.iter().map(|&l| l as i64).sum();
        let supp: Vec<(u32, &Rat)> = self.state.t.iter().map(|(l, c)| (*l, c)).collect();
        let mut total = Rat::zero();
        let mut m: i64 = 0;
        loop {
            // Required total degree of the m extra insertions.
            let s_m = 3 * genus as i64 - 3 + k + m - sum_n;
            let min_level = supp.first().map_or(u32::MAX, |(l, _)| *l) as i64;
            let feasible = s_m >= 0 && (supp.is_empty() && s_m == 0 && m == 0 || !supp.is_empty());
            if feasible {
                self.insertions(genus, levels, &supp, m as usize, s_m, &mut total);
            }
            m += 1;
            if supp.is_empty() {
                break;
            }
            if let Some(trunc) = self.state.truncation {
                if m > trunc as i64 {
                    break;
                }
            } else {
                // min support level >= 2: s_m grows by 1 per extra insertion
                // while the cheapest insertion costs min_level >= 2.
                if min_level * m > 3 * genus as i64 - 3 + k + m - sum_n {
                    break;
                }
            }
        }
        total
    }

    fn insertions(
        &self,
        genus: u32,
        levels: &[u32],
        supp: &[(u32, &Rat)],
        m: usize,
        budget: i64,
        total: &mut Rat,
    ) {
        // Enumerate multisets of m support levels with the exact budget;
        // weight = prod t_l^{c_l} / c_l!.
        fn rec(
            ev: &Evaluator,
            genus: u32,
            levels: &[u32],
            supp: &[(u32, &Rat)],
            idx: usize,
            m_left: usize,
            budget: i64,
            weight: Rat,
            chosen: &mut Vec<u32>,
            total: &mut Rat,
        ) {
            if m_left == 0 {
                if budget == 0 {
                    let mut all = levels.to_vec();
                    all.extend_from_slice(chosen);
                    let iv = ev.oracle.intersection(genus, &all);
                    if !iv.is_zero() {
                        *total += weight * iv;
                    }
                }
                return;
            }
            if idx >= supp.len() {
                return;
            }
            let (level, coeff) = (supp[idx].0, supp[idx].1);
            // count = how many copies of this level
            let mut count_weight = Rat::from_integer(1.into());
            for count in 0..=m_left {
                if count > 0 {
                    count_weight = count_weight * coeff / Rat::from_integer((count as i64).into());
                    let cost = level as i64 * count as i64;
                    if cost > budget {
                        break;
                    }
                }
                let used = level as i64 * count as i64;
                for _ in 0..count {
                    chosen.push(level);
                }
                rec(
                    ev,
                    genus,
                    levels,
                    supp,
                    idx + 1,
                    m_left - count,
                    budget - used,
                    weight.clone() * count_weight.clone(),
                    chosen,
                    total,
                );
                for _ in 0..count {
                    chosen.pop();
                }
            }
        }
        let mut chosen = Vec::new();
        rec(
            self,
            genus,
            levels,
            supp,
            0,
            m,
            budget,
            Rat::from_integer(1.into()),
            &mut chosen,
            total,
        );
    }

    /// Value of `F_g` itself (the empty correlator).
    pub fn generating_value(&self, genus: u32) -> Rat {
        self.correlator_value(genus, &[])
    }

    /// Multilinear extension: correlator of concrete vector values.
    pub fn corr_of_vecs(&self, genus: u32, vecs: &[VectorVal]) -> Rat {
        fn rec(
            ev: &Evaluator,
            genus: u32,
            vecs: &[VectorVal],
            idx: usize,
            levels: &mut Vec<u32>,
            coeff: Rat,
            total: &mut Rat,
        ) {
            if coeff.is_zero() {
                return;
            }
            if idx == vecs.len() {
                let v = ev.correlator_value(genus, levels);
                if !v.is_zero() {
                    *total += coeff * v;
                }
                return;
            }
            for (l, c) in &vecs[idx] {
                levels.push(*l);
                rec(ev, genus, vecs, idx + 1, levels, coeff.clone() * c, total);
                levels.pop();
            }
        }
        let mut total = Rat::zero();
        rec(self, genus, vecs, 0, &mut Vec::new(), Rat::from_integer(1.into()), &mut total);
        total
    }

    /// The point class (the single basis vector; raising and lowering are
    /// trivial because the pairing form is `(1)`).
    fn basis(&self) -> VectorVal {
        BTreeMap::from([(0, Rat::from_integer(1.into()))])
    }

    /// The string vector field `S = -sum_m (t_m - delta_{m,1}) tau_{m-1}`.
    pub fn string_field(&self) -> VectorVal {
        let mut out = BTreeMap::new();
        out.insert(0, Rat::from_integer(1.into())); // the -(t_1 - 1) part at level 0
        for (&m, c) in &self.state.t {
            if m >= 1 {
                let e = out.entry(m - 1).or_insert_with(Rat::zero);
                *e -= c;
                if e.is_zero() {
                    out.remove(&(m - 1));
                }
            }
        }
        out
    }

    pub fn eval_vector(&self, v: &VectorExpr) -> Result<VectorVal, EvalError> {
        Ok(match v {
            VectorExpr::Slot(s) => {
                self.state.slots.get(s).ok_or(EvalError::UnboundSlot(*s))?.clone()
            }
            VectorExpr::Gamma(..) => self.basis(),
            VectorExpr::TauPlus(x) => vec_shift_up(&self.eval_vector(x)?),
            VectorExpr::TauMinus(x) => vec_shift_down(&self.eval_vector(x)?),
            VectorExpr::T(x) => {
                let xv = self.eval_vector(x)?;
                let coeff = self.corr_of_vecs(0, &[xv.clone(), self.basis()]);
                vec_add(&vec_shift_up(&xv), &vec_scale(&self.basis(), &-coeff))
            }
            VectorExpr::Gprod(xs) => {
                let mut vals = Vec::with_capacity(xs.len() + 1);
                for x in xs {
                    vals.push(self.eval_vector(x)?);
                }
                vals.push(self.basis());
                let coeff = self.corr_of_vecs(0, &vals);
                vec_scale(&self.basis(), &coeff)
            }
            VectorExpr::Lin(pairs) => {
                let mut acc = VectorVal::new();
                for (c, x) in pairs {
                    acc = vec_add(&acc, &vec_scale(&self.eval_vector(x)?, c));
                }
                acc
            }
            VectorExpr::StringField => self.string_field(),
        })
    }

    pub fn eval_scalar(&self, e: &ScalarExpr) -> Result<Rat, EvalError> {
        Ok(match e {
            ScalarExpr::Const(r) => r.clone(),
            ScalarExpr::Corr { genus, args } => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_vector(a)?);
                }
                self.corr_of_vecs(*genus, &vals)
            }
            ScalarExpr::Sum(items) => {
                let mut acc = Rat::zero();
                for i in items {
                    acc += self.eval_scalar(i)?;
                }
                acc
            }
            ScalarExpr::Prod(items) => {
                let mut acc = Rat::from_integer(1.into());
                for i in items {
                    acc *= self.eval_scalar(i)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            ScalarExpr::Scale(r, inner) => r * self.eval_scalar(inner)?,
            ScalarExpr::Nabla { dir, body } => {
                let v = self.eval_vector(dir)?;
                self.d_scalar(body, &v)?
            }
            ScalarExpr::Tensor { name, args } => {
                let built = tensors::build(name, args)
                    .ok_or_else(|| EvalError::UnknownTensor(name.clone()))?;
                self.eval_scalar(&built)?
            }
        })
    }

    /// Directional derivative of a nabla-free scalar along the constant
    /// vector `v`, from the defining Leibniz rules.
    fn d_scalar(&self, e: &ScalarExpr, v: &VectorVal) -> Result<Rat, EvalError> {
        Ok(match e {
            ScalarExpr::Const(_) => Rat::zero(),
            ScalarExpr::Corr { genus, args } => {
                let vals: Result<Vec<_>, _> = args.iter().map(|a| self.eval_vector(a)).collect();
                let vals = vals?;
                // insertion of the direction
                let mut with_v = vals.clone();
                with_v.push(v.clone());
                let mut acc = self.corr_of_vecs(*genus, &with_v);
                // Leibniz through each argument
                for (i, a) in args.iter().enumerate() {
                    let da = self.d_vector(a, v)?;
                    if da.is_empty() {
                        continue;
                    }
                    let mut modified = vals.clone();
                    modified[i] = da;
                    acc += self.corr_of_vecs(*genus, &modified);
                }
                acc
            }
            ScalarExpr::Sum(items) => {
                let mut acc = Rat::zero();
                for i in items {
                    acc += self.d_scalar(i, v)?;
                }
                acc
            }
            ScalarExpr::Prod(items) => {
                let vals: Result<Vec<_>, _> = items.iter().map(|i| self.eval_scalar(i)).collect();
                let vals = vals?;
                let mut acc = Rat::zero();
                for i in 0..items.len() {
                    let di = self.d_scalar(&items[i], v)?;
                    if di.is_zero() {
                        continue;
                    }
                    let mut term = di;
                    for (j, val) in vals.iter().enumerate() {
                        if j != i {
                            term *= val;
                        }
                    }
                    acc += term;
                }
                acc
            }
            ScalarExpr::Scale(r, inner) => r * self.d_scalar(inner, v)?,
            ScalarExpr::Nabla { .. } => return Err(EvalError::NestedNabla),
            ScalarExpr::Tensor { name, args } => {
                let built = tensors::build(name, args)
                    .ok_or_else(|| EvalError::UnknownTensor(name.clone()))?;
                self.d_scalar(&built, v)?
            }
        })
    }

    /// Derivative of a vector expression along the constant vector `v`.
    fn d_vector(&self, x: &VectorExpr, v: &VectorVal) -> Result<VectorVal, EvalError> {
        Ok(match x {
            VectorExpr::Slot(_) | VectorExpr::Gamma(..) => VectorVal::new(),
            VectorExpr::TauPlus(inner) => vec_shift_up(&self.d_vector(inner, v)?),
            VectorExpr::TauMinus(inner) => vec_shift_down(&self.d_vector(inner, v)?),
            VectorExpr::T(inner) => {
                // T(x) = tau+ x - <<x gamma>>_0 gamma
                let xv = self.eval_vector(inner)?;
                let dx = self.d_vector(inner, v)?;
                let mut dcoeff = self.corr_of_vecs(0, &[v.clone(), xv, self.basis()]);
                if !dx.is_empty() {
                    dcoeff += self.corr_of_vecs(0, &[dx.clone(), self.basis()]);
                }
                vec_add(&vec_shift_up(&dx), &vec_scale(&self.basis(), &-dcoeff))
            }
            VectorExpr::Gprod(xs) => {
                let vals: Result<Vec<_>, _> = xs.iter().map(|a| self.eval_vector(a)).collect();
                let mut vals = vals?;
                vals.push(self.basis());
                let mut dcoeff = {
                    let mut with_v = vals.clone();
                    with_v.push(v.clone());
                    self.corr_of_vecs(0, &with_v)
                };
                for (i, a) in xs.iter().enumerate() {
                    let da = self.d_vector(a, v)?;
                    if da.is_empty() {
                        continue;
                    }
                    let mut modified = vals.clone();
                    modified[i] = da;
                    dcoeff += self.corr_of_vecs(0, &modified);
                }
                vec_scale(&self.basis(), &dcoeff)
            }
            VectorExpr::Lin(pairs) => {
                let mut acc = VectorVal::new();
                for (c, x) in pairs {
                    acc = vec_add(&acc, &vec_scale(&self.d_vector(x, v)?, c));
                }
                acc
            }
            VectorExpr::StringField => vec_neg(&vec_shift_down(v)),
        })
    }
}
