//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! poly    := term (('+'|'-') term)* ;
//! term    := [rational '*'] factor ('*' factor)* ;
//! factor  := corr | 'nabla' '[' vexpr ']' '(' poly ')'
//!          | NAME '(' vexpr (',' vexpr)* ')' | '(' poly ')' ;
//! corr    := '<<' vexpr+ '>>_' INT ;
//! vexpr   := SLOT | 'g^' IDX | 'g_' IDX | 'T(' vexpr ')'
//!          | 'tau+(' vexpr ')' | 'bullet(' vexpr ',' vexpr ')' ;
//! rational:= ['-'] INT ['/' INT] .
//! ```
//!
//! Whitespace-insensitive. A bare rational is also accepted as a term so that
//! `0` parses. Dummy letters are validated per additive term: each must occur
//! exactly twice, once raised and once lowered.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One};
use thiserror::Error;

use super::arg::{DummyId, SlotName, Variance};
use super::ast::{ScalarExpr, VectorExpr};
use super::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

pub fn parse(text: &str) -> Result<ScalarExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, known_tensors: None };
    let e = p.poly()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    validate_dummies(&e, &mut BTreeMap::new()).map_err(|msg| ParseError { pos: 0, msg })?;
    Ok(e)
}

/// Like [`parse`] but rejects tensor names outside `names` with an
/// arity check, so CLI input errors surface at parse time.
pub fn parse_with_tensors(
    text: &str,
    names: &BTreeMap<String, usize>,
) -> Result<ScalarExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, known_tensors: Some(names) };
    let e = p.poly()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    validate_dummies(&e, &mut BTreeMap::new()).map_err(|msg| ParseError { pos: 0, msg })?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    known_tensors: Option<&'a BTreeMap<String, usize>>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let mut p = self.pos;
        while p < self.src.len() && (self.src[p].is_ascii_alphanumeric() || self.src[p] == b'_') {
            p += 1;
        }
        if p == start || !self.src[start].is_ascii_alphabetic() {
            return None;
        }
        self.pos = p;
        Some(std::str::from_utf8(&self.src[start..p]).unwrap().to_string())
    }

    fn rational_after_minus(&mut self, neg: bool) -> Result<Rat, ParseError> {
        let n = self.integer()?;
        let d = if self.eat("/") { self.integer()? } else { BigInt::one() };
        if d == BigInt::from(0) {
            return Err(self.err("zero denominator"));
        }
        let r = BigRational::new(n, d);
        Ok(if neg { -r } else { r })
    }

    fn poly(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut items = Vec::new();
        let first = self.term()?;
        items.push(first);
        loop {
            if self.eat("+") {
                items.push(self.term()?);
            } else if self.peek() == Some(b'-') {
                // leave the sign for the term parser
                items.push(self.term()?);
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { ScalarExpr::Sum(items) })
    }

    /// A term is a `*`-separated product of items; rational items fold into
    /// the coefficient.
    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut coeff = Rat::one();
        if self.eat("-") {
            coeff = -coeff;
        }
        let mut factors: Vec<ScalarExpr> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.rational_after_minus(false)?;
                }
                _ => {
                    factors.push(self.factor()?);
                }
            }
            if !self.eat("*") {
                break;
            }
        }
        let body = match factors.len() {
            0 => return Ok(ScalarExpr::Const(coeff)),
            1 => factors.pop().unwrap(),
            _ => ScalarExpr::Prod(factors),
        };
        Ok(if coeff.is_one() { body } else { ScalarExpr::Scale(coeff, Box::new(body)) })
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        if self.eat("<<") {
            let mut args = vec![self.vexpr()?];
            loop {
                self.skip_ws();
                if self.src[self.pos..].starts_with(b">>_") {
                    self.pos += 3;
                    break;
                }
                args.push(self.vexpr()?);
            }
            let g = self.integer()?;
            let genus: u32 = g
                .try_into()
                .map_err(|_| self.err("genus out of range"))?;
            return Ok(ScalarExpr::Corr { genus, args });
        }
        if self.eat("(") {
            let inner = self.poly()?;
            self.expect(")")?;
            return Ok(inner);
        }
        let save = self.pos;
        if let Some(name) = self.ident() {
            if name == "nabla" {
                self.expect("[")?;
                let dir = self.vexpr()?;
                self.expect("]")?;
                self.expect("(")?;
                let body = self.poly()?;
                self.expect(")")?;
                return Ok(ScalarExpr::Nabla { dir, body: Box::new(body) });
            }
            if let Some(known) = self.known_tensors {
                if !known.contains_key(&name) {
                    self.pos = save;
                    return Err(self.err(&format!("unknown tensor name `{name}`")));
                }
            }
            self.expect("(")?;
            let mut args = vec![self.vexpr()?];
            while self.eat(",") {
                args.push(self.vexpr()?);
            }
            self.expect(")")?;
            if let Some(known) = self.known_tensors {
                let want = known[&name];
                if args.len() != want {
                    return Err(ParseError {
                        pos: save,
                        msg: format!("tensor `{name}` takes {want} arguments, got {}", args.len()),
                    });
                }
            }
            return Ok(ScalarExpr::Tensor { name, args });
        }
        Err(self.err("expected factor"))
    }

    fn vexpr(&mut self) -> Result<VectorExpr, ParseError> {
        self.skip_ws();
        if self.eat("g^") {
            return Ok(VectorExpr::Gamma(self.idx()?, Variance::Up));
        }
        if self.eat("g_") {
            return Ok(VectorExpr::Gamma(self.idx()?, Variance::Down));
        }
        if self.eat("tau+") {
            self.expect("(")?;
            let x = self.vexpr()?;
            self.expect(")")?;
            return Ok(VectorExpr::TauPlus(Box::new(x)));
        }
        if self.src[self.pos..].starts_with(b"tau-") {
            return Err(self.err("tau- is not accepted by the symbolic grammar"));
        }
        if self.eat("bullet") {
            self.expect("(")?;
            let x = self.vexpr()?;
            self.expect(",")?;
            let y = self.vexpr()?;
            self.expect(")")?;
            return Ok(VectorExpr::Gprod(vec![x, y]));
        }
        if self.src[self.pos..].starts_with(b"T") {
            // `T(` only; a bare T is not a slot
            if self.src.get(self.pos + 1) == Some(&b'(') {
                self.pos += 2;
                let x = self.vexpr()?;
                self.expect(")")?;
                return Ok(VectorExpr::T(Box::new(x)));
            }
        }
        let save = self.pos;
        if let Some(id) = self.ident() {
            if let Some(slot) = SlotName::parse(&id) {
                return Ok(VectorExpr::Slot(slot));
            }
            self.pos = save;
            return Err(self.err(&format!("`{id}` is not a slot (expected W[0-9]* or V[0-9]*)")));
        }
        Err(self.err("expected vector expression"))
    }

    fn idx(&mut self) -> Result<DummyId, ParseError> {
        match self.src.get(self.pos) {
            Some(&c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok((c - b'a') as DummyId)
            }
            _ => Err(self.err("expected a lowercase index letter")),
        }
    }
}

/// Per additive branch, every dummy letter must occur exactly twice with
/// opposite variance. Parenthesized sub-sums open their own scope; sharing a
/// letter between a sub-sum and its surroundings is rejected as ambiguous.
fn validate_dummies(
    e: &ScalarExpr,
    _seen: &mut BTreeMap<DummyId, (usize, usize)>,
) -> Result<(), String> {
    match e {
        ScalarExpr::Sum(items) => {
            for item in items {
                validate_dummies(item, &mut BTreeMap::new())?;
            }
            Ok(())
        }
        _ => {
            let mut counts = BTreeMap::new();
            count_dummies(e, &mut counts)?;
            for (id, (up, down)) in counts {
                let letter = (b'a' + (id % 26) as u8) as char;
                if up + down != 2 {
                    return Err(format!(
                        "dummy index `{letter}` occurs {} time(s); must occur exactly twice",
                        up + down
                    ));
                }
                if up != 1 {
                    return Err(format!(
                        "dummy index `{letter}` must occur once raised and once lowered"
                    ));
                }
            }
            Ok(())
        }
    }
}

fn count_dummies(
    e: &ScalarExpr,
    counts: &mut BTreeMap<DummyId, (usize, usize)>,
) -> Result<(), String> {
    match e {
        ScalarExpr::Const(_) => Ok(()),
        ScalarExpr::Corr { args, .. } | ScalarExpr::Tensor { args, .. } => {
            args.iter().for_each(|a| count_vector(a, counts));
            Ok(())
        }
        ScalarExpr::Prod(items) => {
            for i in items {
                count_dummies(i, counts)?;
            }
            Ok(())
        }
        ScalarExpr::Scale(_, inner) => count_dummies(inner, counts),
        ScalarExpr::Nabla { dir, body } => {
            count_vector(dir, counts);
            count_dummies(body, counts)
        }
        ScalarExpr::Sum(items) => {
            // Nested sum: validate each branch in its own scope.
            for item in items {
                validate_dummies(item, &mut BTreeMap::new())?;
            }
            Ok(())
        }
    }
}

fn count_vector(v: &VectorExpr, counts: &mut BTreeMap<DummyId, (usize, usize)>) {
    match v {
        VectorExpr::Slot(_) | VectorExpr::StringField => {}
        VectorExpr::Gamma(id, var) => {
            let e = counts.entry(*id).or_insert((0, 0));
            match var {
                Variance::Up => e.0 += 1,
                Variance::Down => e.1 += 1,
            }
        }
        VectorExpr::TauPlus(x) | VectorExpr::TauMinus(x) | VectorExpr::T(x) => {
            count_vector(x, counts)
        }
        VectorExpr::Gprod(xs) => xs.iter().for_each(|x| count_vector(x, counts)),
        VectorExpr::Lin(pairs) => pairs.iter().for_each(|(_, x)| count_vector(x, counts)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ast::{bullet, corr, slotv, tee};
    use crate::expr::SlotName;

    #[test]
    fn corr_with_t() {
        let e = parse("<< T(W1) W2 W3 >>_0").unwrap();
        let want = corr(
            0,
            vec![tee(slotv(SlotName::w(1))), slotv(SlotName::w(2)), slotv(SlotName::w(3))],
        );
        assert_eq!(e, want);
    }

    #[test]
    fn bullet_inside_tensor_call() {
        let e = parse("rho0(bullet(W1,W2),W3,V)").unwrap();
        let want = ScalarExpr::Tensor {
            name: "rho0".into(),
            args: vec![
                bullet(slotv(SlotName::w(1)), slotv(SlotName::w(2))),
                slotv(SlotName::w(3)),
                slotv(SlotName::bare_v()),
            ],
        };
        assert_eq!(e, want);
    }

    #[test]
    fn product_shares_dummy() {
        let e = parse("<< W g^a >>_0 * << g_a V >>_1").unwrap();
        match e {
            ScalarExpr::Prod(items) => assert_eq!(items.len(), 2),
            other => panic!("expected product, got {other:?}"),
        }
    }

    #[test]
    fn zero_and_rationals() {
        assert_eq!(parse("0").unwrap(), ScalarExpr::Const(Rat::from_integer(0.into())));
        let e = parse("-21/2 * << W V >>_0").unwrap();
        match e {
            ScalarExpr::Scale(r, _) => {
                assert_eq!(r, Rat::new((-21).into(), 2.into()));
            }
            other => panic!("expected scale, got {other:?}"),
        }
    }

    #[test]
    fn unpaired_dummy_rejected() {
        let err = parse("<< W g^a >>_0").unwrap_err();
        assert!(err.msg.contains("exactly twice"), "{err}");
        let err = parse("<< W g^a g^a >>_0").unwrap_err();
        assert!(err.msg.contains("raised and once lowered"), "{err}");
    }

    #[test]
    fn tau_minus_rejected() {
        let err = parse("<< tau-(W) >>_0").unwrap_err();
        assert!(err.msg.contains("tau-"), "{err}");
    }

    #[test]
    fn position_reported() {
        let err = parse("<< W V >>_0 + @").unwrap_err();
        assert_eq!(err.pos, 14);
    }
}
