//! The catalog of identities the engine verifies, each carrying the modulus
//! ideal under which it is claimed and its verification mode.

use serde::Serialize;

use crate::expr::{
    bullet, corr, gdn, gup, nabla, prod, rat, ratio, scale, slotv, sum, tau_minus, tee, tensor_ref,
    Expr, Rat, ScalarExpr, SlotName, VectorExpr,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
    Both,
}

impl Mode {
    pub fn runs_symbolic(self) -> bool {
        matches!(self, Mode::Symbolic | Mode::Both)
    }
    pub fn runs_numeric(self) -> bool {
        matches!(self, Mode::Numeric | Mode::Both)
    }
}

#[derive(Clone, Debug)]
pub struct IdentityStatement {
    pub name: &'static str,
    pub description: &'static str,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Generators of the ideal the identity is claimed modulo, as
    /// `(tensor name, maximum derivative order)`.
    pub modulus: Vec<(&'static str, usize)>,
    pub mode: Mode,
}

fn w(i: u32) -> VectorExpr {
    slotv(SlotName::w(i))
}

fn v_bare() -> VectorExpr {
    slotv(SlotName::bare_v())
}

fn w_bare() -> VectorExpr {
    slotv(SlotName::bare_w())
}

fn neg(e: ScalarExpr) -> ScalarExpr {
    scale(rat(-1), e)
}

pub fn catalog() -> Vec<IdentityStatement> {
    let mut out = Vec::new();

    // (nabla_{T(W1)} rho2_1)(W2) - rho2_2(W1, T(W2))
    //   = {3 rho0(W2,W1,g^a) - rho0(W1,W2,g^a)} <<T(g_a)>>_2
    //     - rho0(W2,T(W1),g^a) <<g_a>>_2 + A2(W1,T(W2)) - (nabla_{T(W1)} A1)(W2)
    out.push(IdentityStatement {
        name: "MtoG",
        description: "derivative of the one-point genus-2 relation against the two-point one",
        lhs: Expr::Scalar(sum(vec![
            nabla(tee(w(1)), tensor_ref("rho2_1", vec![w(2)])),
            neg(tensor_ref("rho2_2", vec![w(1), tee(w(2))])),
        ])),
        rhs: Expr::Scalar(sum(vec![
            prod(vec![
                sum(vec![
                    scale(rat(3), tensor_ref("rho0", vec![w(2), w(1), gup(0)])),
                    neg(tensor_ref("rho0", vec![w(1), w(2), gup(0)])),
                ]),
                corr(2, vec![tee(gdn(0))]),
            ]),
            neg(prod(vec![
                tensor_ref("rho0", vec![w(2), tee(w(1)), gup(0)]),
                corr(2, vec![gdn(0)]),
            ])),
            tensor_ref("A2", vec![w(1), tee(w(2))]),
            neg(nabla(tee(w(1)), tensor_ref("A1", vec![w(2)]))),
        ])),
        modulus: vec![],
        mode: Mode::Both,
    });

    // rho2_3(W1,W2,T(W3)) + (nabla_{W1*W2} rho2_1)(W3) - rho2_2(W1*W2, W3)
    //   = -B(W1,W2,T(W3)) - (nabla_{W1*W2} A1)(W3) + A2(W1*W2, W3)
    out.push(IdentityStatement {
        name: "MGtoBP",
        description: "three-point genus-2 relation against the one- and two-point ones",
        lhs: Expr::Scalar(sum(vec![
            tensor_ref("rho2_3", vec![w(1), w(2), tee(w(3))]),
            nabla(bullet(w(1), w(2)), tensor_ref("rho2_1", vec![w(3)])),
            neg(tensor_ref("rho2_2", vec![bullet(w(1), w(2)), w(3)])),
        ])),
        rhs: Expr::Scalar(sum(vec![
            neg(tensor_ref("B", vec![w(1), w(2), tee(w(3))])),
            neg(nabla(bullet(w(1), w(2)), tensor_ref("A1", vec![w(3)]))),
            tensor_ref("A2", vec![bullet(w(1), w(2)), w(3)]),
        ])),
        modulus: vec![("rho0", 1)],
        mode: Mode::Both,
    });

    // T(W1) * W2 = 0
    out.push(IdentityStatement {
        name: "special_trr",
        description: "quantum product with a T-image vanishes",
        lhs: Expr::Vector(bullet(tee(w(1)), w(2))),
        rhs: Expr::Vector(VectorExpr::zero()),
        modulus: vec![("rho0", 0)],
        mode: Mode::Both,
    });

    // <<T(W1) W2 W3 g^a>>_0 g_a = W1*W2*W3
    out.push(IdentityStatement {
        name: "special_trr_deriv",
        description: "derivative of the special genus-0 relation",
        lhs: Expr::Vector(VectorExpr::Gprod(vec![tee(w(1)), w(2), w(3)])),
        rhs: Expr::Vector(bullet(bullet(w(1), w(2)), w(3))),
        modulus: vec![("rho0", 1)],
        mode: Mode::Both,
    });

    // The two reductions of <<T(W) V g_a g^a g_b g^b>>_0 agree.
    out.push(IdentityStatement {
        name: "typex",
        description: "role-choice independence of the six-point reduction",
        lhs: Expr::Scalar(sum(vec![
            scale(
                rat(3),
                corr(0, vec![bullet(w_bare(), gdn(0)), gup(0), gdn(1), gup(1), v_bare()]),
            ),
            corr(0, vec![w_bare(), gdn(0), gup(0), gdn(1), bullet(gup(1), v_bare())]),
            prod(vec![
                corr(0, vec![w_bare(), gdn(0), gup(0), gup(2)]),
                corr(0, vec![gdn(2), gdn(1), gup(1), v_bare()]),
            ]),
            scale(
                rat(2),
                prod(vec![
                    corr(0, vec![w_bare(), gdn(0), gdn(1), gup(2)]),
                    corr(0, vec![gdn(2), gup(0), gup(1), v_bare()]),
                ]),
            ),
        ])),
        rhs: Expr::Scalar(sum(vec![
            corr(0, vec![bullet(w_bare(), v_bare()), gdn(0), gup(0), gdn(1), gup(1)]),
            scale(
                rat(2),
                corr(0, vec![bullet(w_bare(), gdn(0)), gup(0), gdn(1), gup(1), v_bare()]),
            ),
            corr(0, vec![w_bare(), v_bare(), gdn(0), gup(0), bullet(gdn(1), gup(1))]),
            scale(
                rat(2),
                prod(vec![
                    corr(0, vec![w_bare(), v_bare(), gup(0), gup(2)]),
                    corr(0, vec![gdn(2), gdn(0), gdn(1), gup(1)]),
                ]),
            ),
            prod(vec![
                corr(0, vec![w_bare(), gdn(0), gup(0), gup(2)]),
                corr(0, vec![gdn(2), v_bare(), gdn(1), gup(1)]),
            ]),
        ])),
        modulus: vec![("rho0", 3), ("C0", 0)],
        mode: Mode::Both,
    });

    // A2(W1, T(W2)) - (nabla_{T(W1)} A1)(W2) = 0
    let a1a2_lhs = sum(vec![
        tensor_ref("A2", vec![w(1), tee(w(2))]),
        neg(nabla(tee(w(1)), tensor_ref("A1", vec![w(2)]))),
    ]);
    out.push(IdentityStatement {
        name: "A1A2",
        description: "two-slot genus-1 universal relation",
        lhs: Expr::Scalar(a1a2_lhs.clone()),
        rhs: Expr::Scalar(ScalarExpr::Const(Rat::from_integer(0.into()))),
        modulus: vec![("rho0", 3), ("rho1", 2), ("C0", 1), ("G", 0)],
        mode: Mode::Numeric,
    });

    // B(W1,W2,T(V)) - A2(W1*W2, V) + (nabla_{W1*W2} A1)(V) = 0
    let a1a2b_lhs = sum(vec![
        tensor_ref("B", vec![w(1), w(2), tee(v_bare())]),
        neg(tensor_ref("A2", vec![bullet(w(1), w(2)), v_bare()])),
        nabla(bullet(w(1), w(2)), tensor_ref("A1", vec![v_bare()])),
    ]);
    out.push(IdentityStatement {
        name: "A1A2B",
        description: "three-slot genus-1 universal relation",
        lhs: Expr::Scalar(a1a2b_lhs.clone()),
        rhs: Expr::Scalar(ScalarExpr::Const(Rat::from_integer(0.into()))),
        modulus: vec![("rho0", 3), ("rho1", 3), ("C0", 3), ("G", 1)],
        mode: Mode::Numeric,
    });

    // 120 { A2(W1,T(W2)) - (nabla_{T(W1)} A1)(W2) }
    //   = -1/24 G(W1,W2,g^a,g_a)
    //     + { 1/6 C1(W2,g_a,W1,g^a,g_b) + 19/2 C1(W1,g_b,g_a,g^a,W2)
    //         - 21/2 C1(W2,g_b,g^a,g_a,W1) } <<g^b>>_1
    out.push(IdentityStatement {
        name: "A1A2G",
        description: "the two-slot genus-1 relation expressed through G and C1",
        lhs: Expr::Scalar(scale(rat(120), a1a2_lhs)),
        rhs: Expr::Scalar(sum(vec![
            scale(-ratio(1, 24), tensor_ref("G", vec![w(1), w(2), gup(0), gdn(0)])),
            prod(vec![
                sum(vec![
                    scale(
                        ratio(1, 6),
                        tensor_ref("C1", vec![w(2), gdn(0), w(1), gup(0), gdn(1)]),
                    ),
                    scale(
                        ratio(19, 2),
                        tensor_ref("C1", vec![w(1), gdn(1), gdn(0), gup(0), w(2)]),
                    ),
                    scale(
                        -ratio(21, 2),
                        tensor_ref("C1", vec![w(2), gdn(1), gup(0), gdn(0), w(1)]),
                    ),
                ]),
                corr(1, vec![gup(1)]),
            ]),
        ])),
        modulus: vec![("rho0", 3), ("rho1", 2), ("C0", 0)],
        mode: Mode::Symbolic,
    });

    // 720 { B(W1,W2,T(V)) - A2(W1*W2,V) + (nabla_{W1*W2} A1)(V) } = ...
    out.push(IdentityStatement {
        name: "A1A2BG",
        description: "the three-slot genus-1 relation expressed through G, its derivative, and C1..C3",
        lhs: Expr::Scalar(scale(rat(720), a1a2b_lhs)),
        rhs: Expr::Scalar(a1a2bg_rhs()),
        modulus: vec![("rho0", 3), ("rho1", 3), ("C0", 0)],
        mode: Mode::Symbolic,
    });

    // W = S*W + T(tau- W), componentwise at each state.
    out.push(IdentityStatement {
        name: "decomposition",
        description: "every field splits through the string field and a T-image",
        lhs: Expr::Vector(w(1)),
        rhs: Expr::Vector(VectorExpr::Lin(vec![
            (rat(1), bullet(VectorExpr::StringField, w(1))),
            (rat(1), tee(tau_minus(w(1)))),
        ])),
        modulus: vec![],
        mode: Mode::Numeric,
    });

    // rho2_2(S, W) = rho2_1(tau- W)
    out.push(IdentityStatement {
        name: "rho22_string",
        description: "the two-point genus-2 relation contracted with the string field",
        lhs: Expr::Scalar(tensor_ref("rho2_2", vec![VectorExpr::StringField, w(1)])),
        rhs: Expr::Scalar(tensor_ref("rho2_1", vec![tau_minus(w(1))])),
        modulus: vec![],
        mode: Mode::Numeric,
    });

    // Numeric vanishing of the universal tensors.
    let vanish: &[(&'static str, usize, &'static str)] = &[
        ("vanish_rho0", 3, "genus-0 recursion tensor vanishes"),
        ("vanish_rho1", 1, "genus-1 recursion tensor vanishes"),
        ("vanish_C0", 4, "quantum-product associativity tensor vanishes"),
        ("vanish_G", 4, "four-point genus-1 tensor vanishes"),
        ("vanish_rho2_1", 1, "one-point genus-2 tensor vanishes"),
        ("vanish_rho2_2", 2, "two-point genus-2 tensor vanishes"),
        ("vanish_rho2_3", 3, "three-point genus-2 tensor vanishes"),
    ];
    for (name, arity, description) in vanish {
        let tensor = name.trim_start_matches("vanish_");
        let args: Vec<VectorExpr> = (1..=*arity as u32).map(w).collect();
        out.push(IdentityStatement {
            name,
            description,
            lhs: Expr::Scalar(tensor_ref(tensor, args)),
            rhs: Expr::Scalar(ScalarExpr::Const(Rat::from_integer(0.into()))),
            modulus: vec![],
            mode: Mode::Numeric,
        });
    }

    out
}

fn a1a2bg_rhs() -> ScalarExpr {
    let c1 = |a: Vec<VectorExpr>| tensor_ref("C1", a);
    let c2 = |a: Vec<VectorExpr>| tensor_ref("C2", a);
    sum(vec![
        // 24 G(V,W1,W2,g^a) <<g_a>>_1
        scale(
            rat(24),
            prod(vec![
                tensor_ref("G", vec![v_bare(), w(1), w(2), gup(0)]),
                corr(1, vec![gdn(0)]),
            ]),
        ),
        // (nabla_{g_a} G)(W1,W2,V,g^a)
        nabla(gdn(0), tensor_ref("G", vec![w(1), w(2), v_bare(), gup(0)])),
        // 1/4 { (nabla_V G)(W1,W2,g_a,g^a) - (nabla_{W1} G)(V,W2,g_a,g^a)
        //       - (nabla_{W2} G)(V,W1,g_a,g^a) }
        scale(
            ratio(1, 4),
            sum(vec![
                nabla(v_bare(), tensor_ref("G", vec![w(1), w(2), gdn(0), gup(0)])),
                neg(nabla(w(1), tensor_ref("G", vec![v_bare(), w(2), gdn(0), gup(0)]))),
                neg(nabla(w(2), tensor_ref("G", vec![v_bare(), w(1), gdn(0), gup(0)]))),
            ]),
        ),
        // -3 <<V g_b>>_1 { C1(W1,W2,g_a,g^a,g^b) - C1(W1,g_a,W2,g^b,g^a)
        //                  - C1(W2,g_a,W1,g^b,g^a) }
        scale(
            rat(-3),
            prod(vec![
                corr(1, vec![v_bare(), gdn(1)]),
                sum(vec![
                    c1(vec![w(1), w(2), gdn(0), gup(0), gup(1)]),
                    neg(c1(vec![w(1), gdn(0), w(2), gup(1), gup(0)])),
                    neg(c1(vec![w(2), gdn(0), w(1), gup(1), gup(0)])),
                ]),
            ]),
        ),
        // + <<W1 g_b>>_1 { 27 C1(W2,g_a,V,g^b,g^a) - 34 C1(V,g_a,W2,g^b,g^a)
        //                  - 7 C1(W2,g^b,g_a,g^a,V) }
        prod(vec![
            corr(1, vec![w(1), gdn(1)]),
            sum(vec![
                scale(rat(27), c1(vec![w(2), gdn(0), v_bare(), gup(1), gup(0)])),
                scale(rat(-34), c1(vec![v_bare(), gdn(0), w(2), gup(1), gup(0)])),
                scale(rat(-7), c1(vec![w(2), gup(1), gdn(0), gup(0), v_bare()])),
            ]),
        ]),
        // + <<W2 g_b>>_1 { same with W1 <-> W2 }
        prod(vec![
            corr(1, vec![w(2), gdn(1)]),
            sum(vec![
                scale(rat(27), c1(vec![w(1), gdn(0), v_bare(), gup(1), gup(0)])),
                scale(rat(-34), c1(vec![v_bare(), gdn(0), w(1), gup(1), gup(0)])),
                scale(rat(-7), c1(vec![w(1), gup(1), gdn(0), gup(0), v_bare()])),
            ]),
        ]),
        // -8 <<g_a g_b>>_1 { 2 C1(W1,W2,g^a,g^b,V) - C1(W1,V,W2,g^a,g^b)
        //                    - C1(W2,V,W1,g^a,g^b) }
        scale(
            rat(-8),
            prod(vec![
                corr(1, vec![gdn(0), gdn(1)]),
                sum(vec![
                    scale(rat(2), c1(vec![w(1), w(2), gup(0), gup(1), v_bare()])),
                    neg(c1(vec![w(1), v_bare(), w(2), gup(0), gup(1)])),
                    neg(c1(vec![w(2), v_bare(), w(1), gup(0), gup(1)])),
                ]),
            ]),
        ),
        // -120 <<g_a>>_1 <<g_b>>_1 { 3 C1(W1,W2,g^a,g^b,V) - C1(W1,V,W2,g^a,g^b)
        //                            - C1(W2,V,W1,g^a,g^b) }
        scale(
            rat(-120),
            prod(vec![
                corr(1, vec![gdn(0)]),
                corr(1, vec![gdn(1)]),
                sum(vec![
                    scale(rat(3), c1(vec![w(1), w(2), gup(0), gup(1), v_bare()])),
                    neg(c1(vec![w(1), v_bare(), w(2), gup(0), gup(1)])),
                    neg(c1(vec![w(2), v_bare(), w(1), gup(0), gup(1)])),
                ]),
            ]),
        ),
        // - <<g_b>>_1 { 19 C2(W2,g^b,W1,g_a,V,g^a) + 19 C2(W1,g^b,W2,g_a,V,g^a)
        //   + 19 C2(W1,W2,g_a,g^a,V,g^b) - 12 C2(V,g_a,g^b,g^a,W1,W2)
        //   - 3 C2(W1,V,W2,g^b,g_a,g^a) - 3 C2(W2,V,W1,g^b,g_a,g^a)
        //   - 28 C2(W1,g_a,W2,g^b,V,g^a) - 28 C2(W2,g_a,W1,g^b,V,g^a) }
        neg(prod(vec![
            corr(1, vec![gdn(1)]),
            sum(vec![
                scale(rat(19), c2(vec![w(2), gup(1), w(1), gdn(0), v_bare(), gup(0)])),
                scale(rat(19), c2(vec![w(1), gup(1), w(2), gdn(0), v_bare(), gup(0)])),
                scale(rat(19), c2(vec![w(1), w(2), gdn(0), gup(0), v_bare(), gup(1)])),
                scale(rat(-12), c2(vec![v_bare(), gdn(0), gup(1), gup(0), w(1), w(2)])),
                scale(rat(-3), c2(vec![w(1), v_bare(), w(2), gup(1), gdn(0), gup(0)])),
                scale(rat(-3), c2(vec![w(2), v_bare(), w(1), gup(1), gdn(0), gup(0)])),
                scale(rat(-28), c2(vec![w(1), gdn(0), w(2), gup(1), v_bare(), gup(0)])),
                scale(rat(-28), c2(vec![w(2), gdn(0), w(1), gup(1), v_bare(), gup(0)])),
            ]),
        ])),
        // - C3(W1,W2,g_a,g^a,V,g_b,g^b)
        neg(tensor_ref(
            "C3",
            vec![w(1), w(2), gdn(0), gup(0), v_bare(), gdn(1), gup(1)],
        )),
    ])
}

pub fn identity(name: &str) -> Option<IdentityStatement> {
    catalog().into_iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

/// Fidelity targets: printed forms that generated rules and derived tensors
/// must reproduce canonically.
#[derive(Clone, Debug)]
pub enum FidelityCheck {
    /// The generated T-elimination rule at `(genus, arity)` must equal
    /// `expand(lhs - rhs)`.
    Rule { name: &'static str, genus: u32, arity: usize, lhs: ScalarExpr, rhs: ScalarExpr },
    /// `derive^order(C0)` must equal `expand(printed)`.
    CDeriv { name: &'static str, order: usize, printed: ScalarExpr },
}

pub fn fidelity_checks() -> Vec<FidelityCheck> {
    let mut out = Vec::new();

    // <<T(W1) W2 W3 W4>>_0 = <<(W1*W2) W3 W4>>_0
    out.push(FidelityCheck::Rule {
        name: "g0_4pt",
        genus: 0,
        arity: 4,
        lhs: corr(0, vec![tee(w(1)), w(2), w(3), w(4)]),
        rhs: corr(0, vec![bullet(w(1), w(2)), w(3), w(4)]),
    });

    // <<T(W1) W2..W5>>_0 = <<(W1*W2) W3 W4 W5>>_0 + <<(W1*W3) W2 W4 W5>>_0
    //                      + <<W1 W2 W3 (W4*W5)>>_0
    out.push(FidelityCheck::Rule {
        name: "g0_5pt",
        genus: 0,
        arity: 5,
        lhs: corr(0, vec![tee(w(1)), w(2), w(3), w(4), w(5)]),
        rhs: sum(vec![
            corr(0, vec![bullet(w(1), w(2)), w(3), w(4), w(5)]),
            corr(0, vec![bullet(w(1), w(3)), w(2), w(4), w(5)]),
            corr(0, vec![w(1), w(2), w(3), bullet(w(4), w(5))]),
        ]),
    });

    // <<T(W1) W2..W6>>_0 = sum_{i=2..4} <<(W1*Wi) ...>>_0
    //   + <<W1 W2 W3 W4 (W5*W6)>>_0
    //   + <<W1 W2 W3 g^a>>_0 <<g_a W4 W5 W6>>_0
    //   + <<W1 W2 W4 g^a>>_0 <<g_a W3 W5 W6>>_0
    //   + <<W1 W3 W4 g^a>>_0 <<g_a W2 W5 W6>>_0
    out.push(FidelityCheck::Rule {
        name: "g0_6pt",
        genus: 0,
        arity: 6,
        lhs: corr(0, vec![tee(w(1)), w(2), w(3), w(4), w(5), w(6)]),
        rhs: sum(vec![
            corr(0, vec![bullet(w(1), w(2)), w(3), w(4), w(5), w(6)]),
            corr(0, vec![bullet(w(1), w(3)), w(2), w(4), w(5), w(6)]),
            corr(0, vec![bullet(w(1), w(4)), w(2), w(3), w(5), w(6)]),
            corr(0, vec![w(1), w(2), w(3), w(4), bullet(w(5), w(6))]),
            prod(vec![
                corr(0, vec![w(1), w(2), w(3), gup(0)]),
                corr(0, vec![gdn(0), w(4), w(5), w(6)]),
            ]),
            prod(vec![
                corr(0, vec![w(1), w(2), w(4), gup(0)]),
                corr(0, vec![gdn(0), w(3), w(5), w(6)]),
            ]),
            prod(vec![
                corr(0, vec![w(1), w(3), w(4), gup(0)]),
                corr(0, vec![gdn(0), w(2), w(5), w(6)]),
            ]),
        ]),
    });

    // <<T(W1) W2>>_1 = <<(W1*W2)>>_1 + 1/24 <<W1 W2 g^a g_a>>_0
    out.push(FidelityCheck::Rule {
        name: "g1_2pt",
        genus: 1,
        arity: 2,
        lhs: corr(1, vec![tee(w(1)), w(2)]),
        rhs: sum(vec![
            corr(1, vec![bullet(w(1), w(2))]),
            scale(ratio(1, 24), corr(0, vec![w(1), w(2), gup(0), gdn(0)])),
        ]),
    });

    // <<T(W1) W2 W3>>_1 = <<(W1*W2) W3>>_1 + <<(W1*W3) W2>>_1
    //   + <<W1 W2 W3 g^a>>_0 <<g_a>>_1 + 1/24 <<W1 W2 W3 g^a g_a>>_0
    out.push(FidelityCheck::Rule {
        name: "g1_3pt",
        genus: 1,
        arity: 3,
        lhs: corr(1, vec![tee(w(1)), w(2), w(3)]),
        rhs: sum(vec![
            corr(1, vec![bullet(w(1), w(2)), w(3)]),
            corr(1, vec![bullet(w(1), w(3)), w(2)]),
            prod(vec![
                corr(0, vec![w(1), w(2), w(3), gup(0)]),
                corr(1, vec![gdn(0)]),
            ]),
            scale(ratio(1, 24), corr(0, vec![w(1), w(2), w(3), gup(0), gdn(0)])),
        ]),
    });

    // <<T(W1) W2 W3 W4>>_1 = sum_i { <<(W1*Wi) Wj Wk>>_1
    //   + <<W1 Wj Wk g^a>>_0 <<g_a Wi>>_1 }
    //   + <<W1 W2 W3 W4 g^a>>_0 <<g_a>>_1 + 1/24 <<W1 W2 W3 W4 g^a g_a>>_0
    let mut g1_4_terms = Vec::new();
    for i in 2..=4u32 {
        let others: Vec<u32> = (2..=4).filter(|&j| j != i).collect();
        g1_4_terms.push(corr(1, vec![bullet(w(1), w(i)), w(others[0]), w(others[1])]));
        g1_4_terms.push(prod(vec![
            corr(0, vec![w(1), w(others[0]), w(others[1]), gup(0)]),
            corr(1, vec![gdn(0), w(i)]),
        ]));
    }
    g1_4_terms.push(prod(vec![
        corr(0, vec![w(1), w(2), w(3), w(4), gup(0)]),
        corr(1, vec![gdn(0)]),
    ]));
    g1_4_terms.push(scale(
        ratio(1, 24),
        corr(0, vec![w(1), w(2), w(3), w(4), gup(0), gdn(0)]),
    ));
    out.push(FidelityCheck::Rule {
        name: "g1_4pt",
        genus: 1,
        arity: 4,
        lhs: corr(1, vec![tee(w(1)), w(2), w(3), w(4)]),
        rhs: sum(g1_4_terms),
    });

    // C1 = <<(W1*W2) W3 W4 W5>> + <<W1 W2 (W3*W4) W5>>
    //      - <<(W1*W3) W2 W4 W5>> - <<W1 W3 (W2*W4) W5>>
    out.push(FidelityCheck::CDeriv {
        name: "C1_explicit",
        order: 1,
        printed: sum(vec![
            corr(0, vec![bullet(w(1), w(2)), w(3), w(4), w(5)]),
            corr(0, vec![w(1), w(2), bullet(w(3), w(4)), w(5)]),
            neg(corr(0, vec![bullet(w(1), w(3)), w(2), w(4), w(5)])),
            neg(corr(0, vec![w(1), w(3), bullet(w(2), w(4)), w(5)])),
        ]),
    });

    // C2 = the four C1-type terms with W6 appended, plus four factored terms.
    out.push(FidelityCheck::CDeriv {
        name: "C2_explicit",
        order: 2,
        printed: sum(vec![
            corr(0, vec![bullet(w(1), w(2)), w(3), w(4), w(5), w(6)]),
            corr(0, vec![w(1), w(2), bullet(w(3), w(4)), w(5), w(6)]),
            neg(corr(0, vec![bullet(w(1), w(3)), w(2), w(4), w(5), w(6)])),
            neg(corr(0, vec![w(1), w(3), bullet(w(2), w(4)), w(5), w(6)])),
            prod(vec![
                corr(0, vec![w(1), w(2), w(5), gup(0)]),
                corr(0, vec![gdn(0), w(3), w(4), w(6)]),
            ]),
            prod(vec![
                corr(0, vec![w(1), w(2), w(6), gup(0)]),
                corr(0, vec![gdn(0), w(3), w(4), w(5)]),
            ]),
            neg(prod(vec![
                corr(0, vec![w(1), w(3), w(5), gup(0)]),
                corr(0, vec![gdn(0), w(2), w(4), w(6)]),
            ])),
            neg(prod(vec![
                corr(0, vec![w(1), w(3), w(6), gup(0)]),
                corr(0, vec![gdn(0), w(2), w(4), w(5)]),
            ])),
        ]),
    });

    out
}
