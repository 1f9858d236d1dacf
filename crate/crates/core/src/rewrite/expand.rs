//! Definitional expansion to pure-correlator form.
//!
//! Three passes over the AST:
//!
//! 1. named tensors are inlined from the library, with fresh internal
//!    dummies per instantiation site;
//! 2. covariant derivatives are pushed to the leaves. The derivative of a
//!    correlator inserts the direction as a new argument plus Leibniz terms
//!    through each argument; on vector expressions the derivative acts by
//!    `∇(tau+ x) = tau+(∇x)`, `∇_v T(x) = T(∇x) - gprod(v, x)` and
//!    `∇_v gprod(xs) = sum_i gprod(..∇x_i..) + gprod(xs, v)`, with slots and
//!    basis directions parallel;
//! 3. the nabla-free tree is flattened to a sum of primitive products and
//!    every correlator argument is linearized into `(coefficient factors,
//!    shifted base)` pieces: `T(x) = tau+ x - <<x g^f>>_0 g_f` and
//!    `gprod(xs) = <<x_1 .. x_k g^f>>_0 g_f` with a fresh dummy per site.
//!
//! The result is a canonical [`TensorPoly`]. Dummy pairing is validated on
//! every assembled monomial.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{
    CanonError, Correlator, DummyGen, Rat, ScalarExpr, SlotName, TensorPoly, VArg, VectorExpr,
};
use crate::tensors;

#[derive(Debug, Error)]
pub enum ExpandError {
    #[error("tau- is rejected by the symbolic pipeline (numeric-only construct)")]
    TauMinus,
    #[error("the string field is rejected by the symbolic pipeline (numeric-only construct)")]
    StringField,
    #[error("unknown tensor `{0}`")]
    UnknownTensor(String),
    #[error("tensor `{0}` takes {1} arguments, got {2}")]
    Arity(String, usize, usize),
    #[error(transparent)]
    Canon(#[from] CanonError),
}

/// Expansion context: fresh-dummy source plus transcription notes picked up
/// from inlined tensors.
pub struct ExpandCtx<'a> {
    pub gen: &'a mut DummyGen,
    pub notes: &'a mut BTreeSet<String>,
}

pub fn expand_definitional(e: &ScalarExpr, ctx: &mut ExpandCtx) -> Result<TensorPoly, ExpandError> {
    let inlined = inline_tensors(e, ctx)?;
    let flat = eliminate_nabla(&inlined)?;
    expand_pure(&flat, ctx)
}

/// Expansion of a vector expression contracted against a probe slot:
/// `<<(expr) probe>>_0`. This is how vector-valued identities are scalarized
/// for the symbolic pipeline.
pub fn expand_vector_against_probe(
    v: &VectorExpr,
    probe: SlotName,
    ctx: &mut ExpandCtx,
) -> Result<TensorPoly, ExpandError> {
    let scalar = ScalarExpr::Corr { genus: 0, args: vec![v.clone(), VectorExpr::Slot(probe)] };
    expand_definitional(&scalar, ctx)
}

fn inline_tensors(e: &ScalarExpr, ctx: &mut ExpandCtx) -> Result<ScalarExpr, ExpandError> {
    Ok(match e {
        ScalarExpr::Const(_) | ScalarExpr::Corr { .. } => e.clone(),
        ScalarExpr::Sum(items) => {
            let v: Result<Vec<_>, _> = items.iter().map(|i| inline_tensors(i, ctx)).collect();
            ScalarExpr::Sum(v?)
        }
        ScalarExpr::Prod(items) => {
            let v: Result<Vec<_>, _> = items.iter().map(|i| inline_tensors(i, ctx)).collect();
            ScalarExpr::Prod(v?)
        }
        ScalarExpr::Scale(r, inner) => {
            ScalarExpr::Scale(r.clone(), Box::new(inline_tensors(inner, ctx)?))
        }
        ScalarExpr::Nabla { dir, body } => ScalarExpr::Nabla {
            dir: dir.clone(),
            body: Box::new(inline_tensors(body, ctx)?),
        },
        ScalarExpr::Tensor { name, args } => {
            let def = tensors::lookup(name).ok_or_else(|| ExpandError::UnknownTensor(name.clone()))?;
            if args.len() != def.arity {
                return Err(ExpandError::Arity(name.clone(), def.arity, args.len()));
            }
            if let Some(note) = def.note {
                ctx.notes.insert(note.to_string());
            }
            let built = (def.build)(args, ctx.gen);
            // builders may reference other tensors
            inline_tensors(&built, ctx)?
        }
    })
}

/// Derivative of a vector expression along `v`, as a rational linear
/// combination of vector expressions. Slots and basis directions are
/// parallel, so the list is often empty.
fn dvec(v: &VectorExpr, x: &VectorExpr) -> Result<Vec<(Rat, VectorExpr)>, ExpandError> {
    Ok(match x {
        VectorExpr::Slot(_) | VectorExpr::Gamma(..) => Vec::new(),
        VectorExpr::TauPlus(inner) => dvec(v, inner)?
            .into_iter()
            .map(|(c, e)| (c, VectorExpr::TauPlus(Box::new(e))))
            .collect(),
        VectorExpr::T(inner) => {
            let mut out: Vec<(Rat, VectorExpr)> = dvec(v, inner)?
                .into_iter()
                .map(|(c, e)| (c, VectorExpr::T(Box::new(e))))
                .collect();
            out.push((
                -Rat::from_integer(1.into()),
                VectorExpr::Gprod(vec![v.clone(), (**inner).clone()]),
            ));
            out
        }
        VectorExpr::Gprod(xs) => {
            let mut out = Vec::new();
            for (i, xi) in xs.iter().enumerate() {
                for (c, de) in dvec(v, xi)? {
                    let mut ys = xs.clone();
                    ys[i] = de;
                    out.push((c, VectorExpr::Gprod(ys)));
                }
            }
            let mut ys = xs.clone();
            ys.push(v.clone());
            out.push((Rat::from_integer(1.into()), VectorExpr::Gprod(ys)));
            out
        }
        VectorExpr::Lin(pairs) => {
            let mut out = Vec::new();
            for (c, e) in pairs {
                for (c2, de) in dvec(v, e)? {
                    out.push((c * c2, de));
                }
            }
            out
        }
        VectorExpr::TauMinus(_) => return Err(ExpandError::TauMinus),
        VectorExpr::StringField => return Err(ExpandError::StringField),
    })
}

fn eliminate_nabla(e: &ScalarExpr) -> Result<ScalarExpr, ExpandError> {
    Ok(match e {
        ScalarExpr::Const(_) | ScalarExpr::Corr { .. } => e.clone(),
        ScalarExpr::Sum(items) => {
            let v: Result<Vec<_>, _> = items.iter().map(eliminate_nabla).collect();
            ScalarExpr::Sum(v?)
        }
        ScalarExpr::Prod(items) => {
            let v: Result<Vec<_>, _> = items.iter().map(eliminate_nabla).collect();
            ScalarExpr::Prod(v?)
        }
        ScalarExpr::Scale(r, inner) => {
            ScalarExpr::Scale(r.clone(), Box::new(eliminate_nabla(inner)?))
        }
        ScalarExpr::Nabla { dir, body } => {
            let body = eliminate_nabla(body)?;
            nabla_push(dir, &body)?
        }
        ScalarExpr::Tensor { name, .. } => {
            unreachable!("tensor `{name}` not inlined before nabla elimination")
        }
    })
}

fn nabla_push(v: &VectorExpr, e: &ScalarExpr) -> Result<ScalarExpr, ExpandError> {
    Ok(match e {
        ScalarExpr::Const(_) => ScalarExpr::zero(),
        ScalarExpr::Corr { genus, args } => {
            let mut items = Vec::new();
            let mut inserted = args.clone();
            inserted.push(v.clone());
            items.push(ScalarExpr::Corr { genus: *genus, args: inserted });
            for (i, a) in args.iter().enumerate() {
                for (c, da) in dvec(v, a)? {
                    let mut modified = args.clone();
                    modified[i] = da;
                    items.push(ScalarExpr::Scale(
                        c,
                        Box::new(ScalarExpr::Corr { genus: *genus, args: modified }),
                    ));
                }
            }
            ScalarExpr::Sum(items)
        }
        ScalarExpr::Sum(items) => {
            let v2: Result<Vec<_>, _> = items.iter().map(|i| nabla_push(v, i)).collect();
            ScalarExpr::Sum(v2?)
        }
        ScalarExpr::Prod(items) => {
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut term = items.clone();
                term[i] = nabla_push(v, &items[i])?;
                out.push(ScalarExpr::Prod(term));
            }
            ScalarExpr::Sum(out)
        }
        ScalarExpr::Scale(r, inner) => ScalarExpr::Scale(r.clone(), Box::new(nabla_push(v, inner)?)),
        ScalarExpr::Nabla { .. } => unreachable!("inner nabla eliminated first"),
        ScalarExpr::Tensor { name, .. } => unreachable!("tensor `{name}` not inlined"),
    })
}

/// One linearized piece of a vector expression: coefficient factors times a
/// shifted parallel base argument.
struct Piece {
    coeff: Rat,
    factors: Vec<Correlator>,
    arg: VArg,
}

fn vec_pieces(x: &VectorExpr, gen: &mut DummyGen) -> Result<Vec<Piece>, ExpandError> {
    Ok(match x {
        VectorExpr::Slot(s) => {
            vec![Piece { coeff: Rat::from_integer(1.into()), factors: Vec::new(), arg: VArg::slot(*s) }]
        }
        VectorExpr::Gamma(id, var) => vec![Piece {
            coeff: Rat::from_integer(1.into()),
            factors: Vec::new(),
            arg: VArg::dummy(*id, *var),
        }],
        VectorExpr::TauPlus(inner) => {
            let mut pieces = vec_pieces(inner, gen)?;
            for p in &mut pieces {
                p.arg = p.arg.shifted(1);
            }
            pieces
        }
        VectorExpr::T(inner) => {
            let base = vec_pieces(inner, gen)?;
            let mut out = Vec::with_capacity(base.len() * 2);
            for p in base {
                out.push(Piece {
                    coeff: p.coeff.clone(),
                    factors: p.factors.clone(),
                    arg: p.arg.shifted(1),
                });
                let f = gen.fresh();
                let mut factors = p.factors;
                factors.push(Correlator::new(
                    0,
                    vec![p.arg, VArg::dummy(f, crate::expr::Variance::Up)],
                ));
                out.push(Piece {
                    coeff: -p.coeff,
                    factors,
                    arg: VArg::dummy(f, crate::expr::Variance::Down),
                });
            }
            out
        }
        VectorExpr::Gprod(xs) => {
            // cartesian product of the arguments' pieces
            let mut acc: Vec<(Rat, Vec<Correlator>, Vec<VArg>)> =
                vec![(Rat::from_integer(1.into()), Vec::new(), Vec::new())];
            for xi in xs {
                let pieces = vec_pieces(xi, gen)?;
                let mut next = Vec::with_capacity(acc.len() * pieces.len());
                for (c, fs, args) in &acc {
                    for p in &pieces {
                        let mut fs2 = fs.clone();
                        fs2.extend(p.factors.iter().cloned());
                        let mut args2 = args.clone();
                        args2.push(p.arg);
                        next.push((c * &p.coeff, fs2, args2));
                    }
                }
                acc = next;
            }
            acc.into_iter()
                .map(|(c, mut fs, mut args)| {
                    let f = gen.fresh();
                    args.push(VArg::dummy(f, crate::expr::Variance::Up));
                    fs.push(Correlator::new(0, args));
                    Piece { coeff: c, factors: fs, arg: VArg::dummy(f, crate::expr::Variance::Down) }
                })
                .collect()
        }
        VectorExpr::Lin(pairs) => {
            let mut out = Vec::new();
            for (c, e) in pairs {
                for mut p in vec_pieces(e, gen)? {
                    p.coeff *= c;
                    out.push(p);
                }
            }
            out
        }
        VectorExpr::TauMinus(_) => return Err(ExpandError::TauMinus),
        VectorExpr::StringField => return Err(ExpandError::StringField),
    })
}

/// Flattened primitive product: rational coefficient times correlator nodes
/// whose arguments may still be compound vector expressions.
type Primitive = (Rat, Vec<(u32, Vec<VectorExpr>)>);

fn flatten(e: &ScalarExpr) -> Vec<Primitive> {
    match e {
        ScalarExpr::Const(r) => vec![(r.clone(), Vec::new())],
        ScalarExpr::Corr { genus, args } => {
            vec![(Rat::from_integer(1.into()), vec![(*genus, args.clone())])]
        }
        ScalarExpr::Scale(r, inner) => flatten(inner)
            .into_iter()
            .map(|(c, fs)| (c * r, fs))
            .collect(),
        ScalarExpr::Sum(items) => items.iter().flat_map(flatten).collect(),
        ScalarExpr::Prod(items) => {
            let mut acc: Vec<Primitive> = vec![(Rat::from_integer(1.into()), Vec::new())];
            for item in items {
                let parts = flatten(item);
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for (c, fs) in &acc {
                    for (c2, fs2) in &parts {
                        let mut fs3 = fs.clone();
                        fs3.extend(fs2.iter().cloned());
                        next.push((c * c2, fs3));
                    }
                }
                acc = next;
            }
            acc
        }
        ScalarExpr::Nabla { .. } | ScalarExpr::Tensor { .. } => {
            unreachable!("flatten runs on inlined, nabla-free trees")
        }
    }
}

fn expand_pure(e: &ScalarExpr, ctx: &mut ExpandCtx) -> Result<TensorPoly, ExpandError> {
    let mut raw: Vec<(Rat, Vec<Correlator>)> = Vec::new();
    for (coeff, corr_nodes) in flatten(e) {
        // expand each correlator's arguments jointly so shared dummies stay
        // paired across the whole primitive product
        let mut acc: Vec<(Rat, Vec<Correlator>)> = vec![(coeff, Vec::new())];
        for (genus, args) in corr_nodes {
            let mut with_args: Vec<(Rat, Vec<Correlator>, Vec<VArg>)> =
                acc.into_iter().map(|(c, fs)| (c, fs, Vec::new())).collect();
            for a in &args {
                let pieces = vec_pieces(a, ctx.gen)?;
                let mut next = Vec::with_capacity(with_args.len() * pieces.len());
                for (c, fs, cargs) in &with_args {
                    for p in &pieces {
                        let mut fs2 = fs.clone();
                        fs2.extend(p.factors.iter().cloned());
                        let mut cargs2 = cargs.clone();
                        cargs2.push(p.arg);
                        next.push((c * &p.coeff, fs2, cargs2));
                    }
                }
                with_args = next;
            }
            acc = with_args
                .into_iter()
                .map(|(c, mut fs, cargs)| {
                    fs.push(Correlator::new(genus, cargs));
                    (c, fs)
                })
                .collect();
        }
        raw.extend(acc);
    }
    Ok(TensorPoly::from_terms(raw)?)
}

/// Instantiates a pure template: slots are substituted by concrete arguments
/// (shifts compose additively) and the template's internal dummies are
/// renamed fresh, independently per term.
pub fn instantiate_template(
    terms: &[(Rat, Vec<Correlator>)],
    slots: &[SlotName],
    binding: &[VArg],
    gen: &mut DummyGen,
) -> Vec<(Rat, Vec<Correlator>)> {
    use std::collections::BTreeMap;
    assert_eq!(slots.len(), binding.len());
    let map: BTreeMap<SlotName, VArg> = slots.iter().copied().zip(binding.iter().copied()).collect();
    terms
        .iter()
        .map(|(c, factors)| {
            let mut fresh: BTreeMap<crate::expr::DummyId, crate::expr::DummyId> = BTreeMap::new();
            let fs = factors
                .iter()
                .map(|f| Correlator {
                    genus: f.genus,
                    args: f
                        .args
                        .iter()
                        .map(|a| match a.base {
                            crate::expr::Base::Slot(s) => {
                                let b = map
                                    .get(&s)
                                    .unwrap_or_else(|| panic!("unbound template slot {s}"));
                                VArg { shift: a.shift + b.shift, base: b.base }
                            }
                            crate::expr::Base::Dummy(id, var) => {
                                let nid = *fresh.entry(id).or_insert_with(|| gen.fresh());
                                VArg { shift: a.shift, base: crate::expr::Base::Dummy(nid, var) }
                            }
                        })
                        .collect(),
                })
                .collect();
            (c.clone(), fs)
        })
        .collect()
}
