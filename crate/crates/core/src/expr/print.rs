//! Deterministic text form of canonical polynomials.
//!
//! The output re-parses under the expression grammar, and expanding the parse
//! gives back the same polynomial. Dummies print as letters in label order.

use num::{One, Signed, Zero};

use super::arg::{Base, Correlator, VArg};
use super::poly::TensorPoly;
use super::Rat;

pub fn print_poly(p: &TensorPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (factors, coeff)) in p.terms().enumerate() {
        let neg = coeff.is_negative();
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = coeff.abs();
        let mut pieces: Vec<String> = Vec::new();
        if !mag.is_one() || factors.is_empty() {
            pieces.push(print_rat(&mag));
        }
        for f in factors {
            pieces.push(print_correlator(f));
        }
        out.push_str(&pieces.join(" * "));
    }
    out
}

pub fn print_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn print_correlator(c: &Correlator) -> String {
    let args: Vec<String> = c.args.iter().map(print_arg).collect();
    format!("<< {} >>_{}", args.join(" "), c.genus)
}

pub fn print_arg(a: &VArg) -> String {
    let base = match a.base {
        Base::Slot(s) => s.to_string(),
        Base::Dummy(id, var) => {
            let letter = if id < 26 {
                ((b'a' + id as u8) as char).to_string()
            } else {
                // labels beyond `z` cannot occur in canonical monomials
                // (canonicalization bounds the pair count), but raw debug
                // printing may see large fresh ids
                format!("i{id}")
            };
            match var {
                super::arg::Variance::Up => format!("g^{letter}"),
                super::arg::Variance::Down => format!("g_{letter}"),
            }
        }
    };
    let mut s = base;
    for _ in 0..a.shift {
        s = format!("tau+({s})");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::arg::{SlotName, Variance};

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(print_poly(&TensorPoly::zero()), "0");
    }

    #[test]
    fn lowest_terms_and_signs() {
        let m1 = TensorPoly::monomial(
            Rat::new(1.into(), 6.into()),
            vec![Correlator::new(0, vec![VArg::slot(SlotName::w(1)), VArg::slot(SlotName::w(2))])],
        )
        .unwrap();
        let m2 = TensorPoly::monomial(
            Rat::new((-21).into(), 2.into()),
            vec![Correlator::new(1, vec![VArg::slot(SlotName::w(1))])],
        )
        .unwrap();
        let p = m1 + &m2;
        let s = print_poly(&p);
        assert_eq!(s, "1/6 * << W1 W2 >>_0 - 21/2 * << W1 >>_1");
    }

    #[test]
    fn shifts_and_dummies() {
        let p = TensorPoly::monomial(
            Rat::one(),
            vec![Correlator::new(
                0,
                vec![
                    VArg { shift: 2, base: crate::expr::arg::Base::Slot(SlotName::bare_w()) },
                    VArg::dummy(5, Variance::Up),
                    VArg::dummy(5, Variance::Down),
                ],
            )],
        )
        .unwrap();
        let s = print_poly(&p);
        assert_eq!(s, "<< g^a g_a tau+(tau+(W)) >>_0");
    }

    use num::One;
}
