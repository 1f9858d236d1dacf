//! The library of named tensors on the big phase space.
//!
//! Every builder produces the tensor's defining term list with exact
//! coefficients. Term counts and coefficient multisets are pinned in the
//! test suite, and every tensor that is a universal relation is checked to
//! vanish identically in the point model, so a silent edit fails loudly.
//!
//! `C1`, `C2`, `C3` are not hand-coded: they are covariant derivatives of
//! `C0`, generated by `derive_covariant` on the pure template.

pub mod catalog;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::expr::{
    bullet, corr, gdn, gup, prod, ratio, scale, tee, tensor_ref, Correlator, DummyGen, Rat,
    ScalarExpr, SlotName, TensorPoly, VArg, Variance, VectorExpr,
};

pub use catalog::{catalog, identity, FidelityCheck, IdentityStatement, Mode};

pub struct TensorDef {
    pub name: &'static str,
    pub arity: usize,
    pub build: fn(&[VectorExpr], &mut DummyGen) -> ScalarExpr,
    /// Transcription caveat propagated into reports whenever the tensor is
    /// expanded.
    pub note: Option<&'static str>,
}

const G_NOTE: &str =
    "G: the fourth argument of the 1/24-term five-point factor is read as the fourth permuted \
     slot (repairs a stray symbol in the source formula)";
const RHO22_NOTE: &str =
    "rho2_2: the threefold genus-2 term is T applied to the quantum product of the two arguments";

pub fn defs() -> &'static [TensorDef] {
    &[
        TensorDef { name: "rho0", arity: 3, build: rho0, note: None },
        TensorDef { name: "rho1", arity: 1, build: rho1, note: None },
        TensorDef { name: "C0", arity: 4, build: c0, note: None },
        TensorDef { name: "C1", arity: 5, build: c1, note: None },
        TensorDef { name: "C2", arity: 6, build: c2, note: None },
        TensorDef { name: "C3", arity: 7, build: c3, note: None },
        TensorDef { name: "G", arity: 4, build: g_tensor, note: Some(G_NOTE) },
        TensorDef { name: "A1", arity: 1, build: a1, note: None },
        TensorDef { name: "A2", arity: 2, build: a2, note: None },
        TensorDef { name: "B", arity: 3, build: b_tensor, note: None },
        TensorDef { name: "rho2_1", arity: 1, build: rho2_1, note: None },
        TensorDef { name: "rho2_2", arity: 2, build: rho2_2, note: Some(RHO22_NOTE) },
        TensorDef { name: "rho2_3", arity: 3, build: rho2_3, note: None },
    ]
}

pub fn lookup(name: &str) -> Option<&'static TensorDef> {
    defs().iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

/// Tensor name -> arity, the CLI vocabulary.
pub fn arities() -> BTreeMap<String, usize> {
    defs().iter().map(|d| (d.name.to_string(), d.arity)).collect()
}

/// Builds a tensor instance with internal dummies fresh above the arguments.
pub fn build(name: &str, args: &[VectorExpr]) -> Option<ScalarExpr> {
    let def = lookup(name)?;
    if args.len() != def.arity {
        return None;
    }
    let probe = ScalarExpr::Corr { genus: 0, args: args.to_vec() };
    let mut gen = DummyGen::above(&[&probe]);
    Some((def.build)(args, &mut gen))
}

/// Like [`build`] but drawing fresh dummies from the caller's generator.
pub fn build_with(name: &str, args: &[VectorExpr], gen: &mut DummyGen) -> Option<ScalarExpr> {
    let def = lookup(name)?;
    if args.len() != def.arity {
        return None;
    }
    Some((def.build)(args, gen))
}

fn rho0(args: &[VectorExpr], _gen: &mut DummyGen) -> ScalarExpr {
    corr(0, vec![tee(args[0].clone()), args[1].clone(), args[2].clone()])
}

fn rho1(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let a = gen.fresh();
    ScalarExpr::Sum(vec![
        corr(1, vec![tee(args[0].clone())]),
        scale(-ratio(1, 24), corr(0, vec![args[0].clone(), gup(a), gdn(a)])),
    ])
}

/// `C0(W1,W2,W3,W4) = <<(W1*W2) W3 W4>>_0 - <<(W1*W3) W2 W4>>_0`, the form
/// obtained by expanding its defining antisymmetrized derivative of `rho0`;
/// its covariant derivatives reproduce the explicit five- and six-point
/// tensors exactly (pinned in the fidelity tests).
fn c0(args: &[VectorExpr], _gen: &mut DummyGen) -> ScalarExpr {
    ScalarExpr::Sum(vec![
        corr(0, vec![bullet(args[0].clone(), args[1].clone()), args[2].clone(), args[3].clone()]),
        scale(
            -Rat::from_integer(1.into()),
            corr(0, vec![bullet(args[0].clone(), args[2].clone()), args[1].clone(), args[3].clone()]),
        ),
    ])
}

/// Pure template of `C0` over slots `W1..W4`; the base of the derived
/// `C1..C3` templates.
pub fn c0_template() -> &'static (Vec<SlotName>, TensorPoly) {
    static CELL: OnceLock<(Vec<SlotName>, TensorPoly)> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = |i| VArg::slot(SlotName::w(i));
        let up = |id| VArg::dummy(id, Variance::Up);
        let dn = |id| VArg::dummy(id, Variance::Down);
        let term = |a: u32, b: u32, c: u32, d: u32| {
            vec![
                Correlator::new(0, vec![w(a), w(b), up(0)]),
                Correlator::new(0, vec![dn(0), w(c), w(d)]),
            ]
        };
        let poly = TensorPoly::from_terms([
            (Rat::from_integer(1.into()), term(1, 2, 3, 4)),
            (-Rat::from_integer(1.into()), term(1, 3, 2, 4)),
        ])
        .expect("C0 template is valid");
        ((1..=4).map(SlotName::w).collect(), poly)
    })
}

/// `C_i = derive^i(C0)` with the derivative direction appended as the last
/// slot, matching `C_i(W1..W_{i+4}) = (nabla_{W_{i+4}} C_{i-1})(W1..W_{i+3})`.
pub fn c_template(order: usize) -> (Vec<SlotName>, TensorPoly) {
    let (slots, base) = c0_template();
    let mut slots = slots.clone();
    let mut poly = base.clone();
    for k in 0..order {
        let dir = SlotName::w(5 + k as u32);
        poly = poly.derive_covariant(dir);
        slots.push(dir);
    }
    (slots, poly)
}

/// Embeds a pure template with arguments substituted for its slots, fresh
/// internal dummies per term.
pub fn template_to_expr(
    slots: &[SlotName],
    poly: &TensorPoly,
    args: &[VectorExpr],
    gen: &mut DummyGen,
) -> ScalarExpr {
    assert_eq!(slots.len(), args.len());
    let map: BTreeMap<SlotName, &VectorExpr> = slots.iter().copied().zip(args.iter()).collect();
    let mut items = Vec::new();
    for (factors, coeff) in poly.terms() {
        let mut fresh: BTreeMap<crate::expr::DummyId, crate::expr::DummyId> = BTreeMap::new();
        let corr_nodes: Vec<ScalarExpr> = factors
            .iter()
            .map(|f| {
                let cargs: Vec<VectorExpr> = f
                    .args
                    .iter()
                    .map(|a| {
                        let mut base = match a.base {
                            crate::expr::Base::Slot(s) => (*map[&s]).clone(),
                            crate::expr::Base::Dummy(id, var) => {
                                let nid = *fresh.entry(id).or_insert_with(|| gen.fresh());
                                VectorExpr::Gamma(nid, var)
                            }
                        };
                        for _ in 0..a.shift {
                            base = VectorExpr::TauPlus(Box::new(base));
                        }
                        base
                    })
                    .collect();
                corr(f.genus, cargs)
            })
            .collect();
        items.push(scale(coeff.clone(), prod(corr_nodes)));
    }
    ScalarExpr::Sum(items)
}

fn c_deriv(order: usize, args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let (slots, poly) = c_template(order);
    template_to_expr(&slots, &poly, args, gen)
}

fn c1(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    c_deriv(1, args, gen)
}

fn c2(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    c_deriv(2, args, gen)
}

fn c3(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    c_deriv(3, args, gen)
}

fn g_tensor(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let mut items = Vec::new();
    for p in (0..4).permutations(4) {
        let x = |i: usize| args[p[i]].clone();
        // 3 <<(x0*x1)(x2*x3)>>_1
        items.push(scale(
            Rat::from_integer(3.into()),
            corr(1, vec![bullet(x(0), x(1)), bullet(x(2), x(3))]),
        ));
        // -4 <<(x0*x1*x2) x3>>_1
        items.push(scale(
            Rat::from_integer((-4).into()),
            corr(1, vec![bullet(bullet(x(0), x(1)), x(2)), x(3)]),
        ));
        // - <<(x0*x1) x2 x3 g^a>>_0 <<g_a>>_1
        let a = gen.fresh();
        items.push(scale(
            Rat::from_integer((-1).into()),
            prod(vec![
                corr(0, vec![bullet(x(0), x(1)), x(2), x(3), gup(a)]),
                corr(1, vec![gdn(a)]),
            ]),
        ));
        // +2 <<x0 x1 x2 g^a>>_0 <<(g_a*x3)>>_1
        let a = gen.fresh();
        items.push(scale(
            Rat::from_integer(2.into()),
            prod(vec![
                corr(0, vec![x(0), x(1), x(2), gup(a)]),
                corr(1, vec![bullet(gdn(a), x(3))]),
            ]),
        ));
        // +1/6 <<x0 x1 x2 g^a>>_0 <<g_a x3 g_b g^b>>_0
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            ratio(1, 6),
            prod(vec![
                corr(0, vec![x(0), x(1), x(2), gup(a)]),
                corr(0, vec![gdn(a), x(3), gdn(b), gup(b)]),
            ]),
        ));
        // +1/24 <<x0 x1 x2 x3 g^a>>_0 <<g_a g_b g^b>>_0
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            ratio(1, 24),
            prod(vec![
                corr(0, vec![x(0), x(1), x(2), x(3), gup(a)]),
                corr(0, vec![gdn(a), gdn(b), gup(b)]),
            ]),
        ));
        // -1/4 <<x0 x1 g^a g^b>>_0 <<g_a g_b x2 x3>>_0
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            -ratio(1, 4),
            prod(vec![
                corr(0, vec![x(0), x(1), gup(a), gup(b)]),
                corr(0, vec![gdn(a), gdn(b), x(2), x(3)]),
            ]),
        ));
    }
    ScalarExpr::Sum(items)
}

fn a1(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let w = args[0].clone();
    let mut items = Vec::new();
    let a = gen.fresh();
    items.push(scale(
        ratio(7, 10),
        prod(vec![corr(1, vec![gdn(a)]), corr(1, vec![bullet(gup(a), w.clone())])]),
    ));
    let a = gen.fresh();
    items.push(scale(ratio(1, 10), corr(1, vec![gdn(a), bullet(gup(a), w.clone())])));
    let a = gen.fresh();
    items.push(scale(-ratio(1, 240), corr(1, vec![w.clone(), bullet(gdn(a), gup(a))])));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(13, 240),
        prod(vec![
            corr(0, vec![w.clone(), gdn(a), gup(a), gup(b)]),
            corr(1, vec![gdn(b)]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(ratio(1, 960), corr(0, vec![w, gup(a), gdn(a), gup(b), gdn(b)])));
    ScalarExpr::Sum(items)
}

fn a2(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let w = args[0].clone();
    let v = args[1].clone();
    let mut items = Vec::new();
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(13, 10),
        prod(vec![
            corr(0, vec![w.clone(), v.clone(), gup(a), gup(b)]),
            corr(1, vec![gdn(a)]),
            corr(1, vec![gdn(b)]),
        ]),
    ));
    let a = gen.fresh();
    items.push(scale(
        ratio(4, 5),
        prod(vec![corr(1, vec![w.clone(), gup(a)]), corr(1, vec![bullet(gdn(a), v.clone())])]),
    ));
    let a = gen.fresh();
    items.push(scale(
        ratio(4, 5),
        prod(vec![corr(1, vec![v.clone(), gup(a)]), corr(1, vec![bullet(gdn(a), w.clone())])]),
    ));
    let a = gen.fresh();
    items.push(scale(
        -ratio(4, 5),
        prod(vec![
            corr(1, vec![bullet(w.clone(), v.clone()), gup(a)]),
            corr(1, vec![gdn(a)]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(23, 240),
        prod(vec![
            corr(0, vec![w.clone(), v.clone(), gup(a), gdn(a), gup(b)]),
            corr(1, vec![gdn(b)]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(1, 48),
        prod(vec![
            corr(0, vec![w.clone(), gup(a), gdn(a), gup(b)]),
            corr(1, vec![gdn(b), v.clone()]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(1, 48),
        prod(vec![
            corr(0, vec![v.clone(), gup(a), gdn(a), gup(b)]),
            corr(1, vec![gdn(b), w.clone()]),
        ]),
    ));
    let a = gen.fresh();
    items.push(scale(
        -ratio(1, 80),
        corr(1, vec![w.clone(), v.clone(), bullet(gup(a), gdn(a))]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(7, 30),
        prod(vec![
            corr(0, vec![w.clone(), v.clone(), gup(a), gup(b)]),
            corr(1, vec![gdn(a), gdn(b)]),
        ]),
    ));
    let a = gen.fresh();
    items.push(scale(
        ratio(1, 30),
        corr(1, vec![gdn(a), bullet(gup(a), w.clone()), v.clone()]),
    ));
    let a = gen.fresh();
    items.push(scale(
        ratio(1, 30),
        corr(1, vec![gdn(a), bullet(gup(a), v.clone()), w.clone()]),
    ));
    let a = gen.fresh();
    items.push(scale(
        -ratio(1, 30),
        corr(1, vec![bullet(w.clone(), v.clone()), gdn(a), gup(a)]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(ratio(1, 576), corr(0, vec![w, v, gup(a), gdn(a), gup(b), gdn(b)])));
    ScalarExpr::Sum(items)
}

fn b_tensor(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let w1 = args[0].clone();
    let w2 = args[1].clone();
    let w3 = args[2].clone();
    let mut items = Vec::new();

    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(1, 5),
        prod(vec![
            corr(0, vec![w1.clone(), w2.clone(), w3.clone(), gup(a), gup(b)]),
            corr(1, vec![gdn(a)]),
            corr(1, vec![gdn(b)]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        -ratio(6, 5),
        prod(vec![
            corr(0, vec![w1.clone(), w2.clone(), w3.clone(), gup(a)]),
            corr(1, vec![gdn(a), gup(b)]),
            corr(1, vec![gdn(b)]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(1, 120),
        prod(vec![
            corr(0, vec![w1.clone(), w2.clone(), w3.clone(), gup(a), gdn(a), gup(b)]),
            corr(1, vec![gdn(b)]),
        ]),
    ));
    let a = gen.fresh();
    items.push(scale(
        -ratio(1, 120),
        corr(1, vec![w1.clone(), w2.clone(), w3.clone(), bullet(gup(a), gdn(a))]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        ratio(1, 10),
        prod(vec![
            corr(0, vec![w1.clone(), w2.clone(), w3.clone(), gup(a), gup(b)]),
            corr(1, vec![gdn(a), gdn(b)]),
        ]),
    ));
    let (a, b) = (gen.fresh(), gen.fresh());
    items.push(scale(
        -ratio(1, 20),
        prod(vec![
            corr(0, vec![w1.clone(), w2.clone(), w3.clone(), gup(a)]),
            corr(1, vec![gdn(a), gup(b), gdn(b)]),
        ]),
    ));

    for p in (0..3).permutations(3) {
        let arr = [&w1, &w2, &w3];
        let x = |i: usize| arr[p[i]].clone();
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            -ratio(1, 5),
            prod(vec![
                corr(0, vec![x(0), x(1), gup(a), gup(b)]),
                corr(1, vec![gdn(a)]),
                corr(1, vec![gdn(b), x(2)]),
            ]),
        ));
        let a = gen.fresh();
        items.push(scale(
            ratio(2, 5),
            prod(vec![
                corr(1, vec![bullet(x(0), gdn(a))]),
                corr(1, vec![gup(a), x(1), x(2)]),
            ]),
        ));
        let a = gen.fresh();
        items.push(scale(
            -ratio(3, 5),
            prod(vec![
                corr(1, vec![x(0), bullet(x(1), gup(a))]),
                corr(1, vec![gdn(a), x(2)]),
            ]),
        ));
        let a = gen.fresh();
        items.push(scale(
            ratio(3, 10),
            prod(vec![
                corr(1, vec![x(0), gdn(a)]),
                corr(1, vec![gup(a), bullet(x(1), x(2))]),
            ]),
        ));
        let a = gen.fresh();
        items.push(scale(
            -ratio(1, 5),
            prod(vec![
                corr(1, vec![gdn(a)]),
                corr(1, vec![gup(a), x(0), bullet(x(1), x(2))]),
            ]),
        ));
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            -ratio(1, 80),
            prod(vec![
                corr(0, vec![x(0), x(1), gup(a), gdn(a), gup(b)]),
                corr(1, vec![gdn(b), x(2)]),
            ]),
        ));
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            ratio(1, 80),
            prod(vec![
                corr(0, vec![x(0), gup(a), gdn(a), gup(b)]),
                corr(1, vec![gdn(b), x(1), x(2)]),
            ]),
        ));
        let (a, b) = (gen.fresh(), gen.fresh());
        items.push(scale(
            -ratio(1, 20),
            prod(vec![
                corr(1, vec![x(0), gdn(a), gdn(b)]),
                corr(0, vec![gup(a), gup(b), x(1), x(2)]),
            ]),
        ));
        let a = gen.fresh();
        items.push(scale(
            ratio(1, 60),
            corr(1, vec![x(0), x(1), gdn(a), bullet(gup(a), x(2))]),
        ));
        let a = gen.fresh();
        items.push(scale(
            -ratio(1, 120),
            corr(1, vec![x(0), gup(a), gdn(a), bullet(x(1), x(2))]),
        ));
    }
    ScalarExpr::Sum(items)
}

fn rho2_1(args: &[VectorExpr], _gen: &mut DummyGen) -> ScalarExpr {
    let w = args[0].clone();
    ScalarExpr::Sum(vec![
        corr(2, vec![tee(tee(w.clone()))]),
        scale(-Rat::from_integer(1.into()), tensor_ref("A1", vec![w])),
    ])
}

fn rho2_2(args: &[VectorExpr], _gen: &mut DummyGen) -> ScalarExpr {
    let w = args[0].clone();
    let v = args[1].clone();
    ScalarExpr::Sum(vec![
        corr(2, vec![tee(w.clone()), tee(v.clone())]),
        scale(
            Rat::from_integer((-3).into()),
            corr(2, vec![tee(bullet(w.clone(), v.clone()))]),
        ),
        scale(-Rat::from_integer(1.into()), tensor_ref("A2", vec![w, v])),
    ])
}

fn rho2_3(args: &[VectorExpr], gen: &mut DummyGen) -> ScalarExpr {
    let w1 = args[0].clone();
    let w2 = args[1].clone();
    let w3 = args[2].clone();
    let mut items = Vec::new();
    items.push(scale(
        Rat::from_integer(2.into()),
        corr(2, vec![bullet(bullet(w1.clone(), w2.clone()), w3.clone())]),
    ));
    let a = gen.fresh();
    items.push(scale(
        Rat::from_integer((-2).into()),
        prod(vec![
            corr(0, vec![w1.clone(), w2.clone(), w3.clone(), gup(a)]),
            corr(2, vec![tee(gdn(a))]),
        ]),
    ));
    for p in (0..3).permutations(3) {
        let arr = [&w1, &w2, &w3];
        let x = |i: usize| arr[p[i]].clone();
        items.push(corr(2, vec![x(0), tee(bullet(x(1), x(2)))]));
        items.push(scale(
            Rat::from_integer((-1).into()),
            corr(2, vec![tee(x(0)), bullet(x(1), x(2))]),
        ));
    }
    items.push(scale(
        -Rat::from_integer(1.into()),
        tensor_ref("B", vec![w1, w2, w3]),
    ));
    ScalarExpr::Sum(items)
}
