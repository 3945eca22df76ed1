//! Text syntax for formulas.
//!
//! ```text
//! φ := "false" | "input(" a "," v ")" | "!" φ | φ "&" φ | φ "|" φ
//!    | "K[" a "]" φ | "C[{" a,... "}]" φ | "D[{" a,... "}]" φ | "(" φ ")"
//! ```
//!
//! `!` and the modal operators bind tightest, then `&`, then `|`.
//! Chains of one binary operator parse into a single n-ary node, so
//! parsing the rendered form of a formula gives back the same node.

use super::formula::{Formula, FormulaFactory};
use crate::agents::{Agent, AgentSet, MAX_AGENTS};
use crate::error::{Error, Result};

pub fn parse_formula(text: &str, factory: &mut FormulaFactory) -> Result<Formula> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, factory };
    let f = p.disjunction()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a, 'f> {
    src: &'a [u8],
    pos: usize,
    factory: &'f mut FormulaFactory,
}

impl Parser<'_, '_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok().and_then(|s| s.parse().ok()).ok_or_else(|| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn agent(&mut self) -> Result<Agent> {
        let start = self.pos;
        let v = self.integer()?;
        if v < 0 || v as usize >= MAX_AGENTS {
            self.pos = start;
            return Err(self.error("agent id out of range"));
        }
        Ok(v as Agent)
    }

    fn group(&mut self) -> Result<AgentSet> {
        self.expect("{")?;
        let mut set = AgentSet::EMPTY;
        if self.eat("}") {
            return Ok(set);
        }
        loop {
            set.insert(self.agent()?);
            if self.eat("}") {
                return Ok(set);
            }
            self.expect(",")?;
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.eat("|") {
            items.push(self.conjunction()?);
        }
        Ok(self.factory.or(items))
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.eat("&") {
            items.push(self.unary()?);
        }
        Ok(self.factory.and(items))
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                let f = self.unary()?;
                Ok(self.factory.not(f))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.disjunction()?;
                self.expect(")")?;
                Ok(f)
            }
            Some(b'K') => {
                self.pos += 1;
                self.expect("[")?;
                let a = self.agent()?;
                self.expect("]")?;
                let f = self.unary()?;
                Ok(self.factory.know(a, f))
            }
            Some(op @ (b'C' | b'D')) => {
                self.pos += 1;
                self.expect("[")?;
                let g = self.group()?;
                self.expect("]")?;
                let f = self.unary()?;
                Ok(if op == b'C' { self.factory.common(g, f) } else { self.factory.distributed(g, f) })
            }
            _ if self.eat("false") => Ok(self.factory.falsum()),
            _ if self.eat("input") => {
                self.expect("(")?;
                let a = self.agent()?;
                self.expect(",")?;
                let v = self.integer()?;
                self.expect(")")?;
                Ok(self.factory.atom(a, v))
            }
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::formula::FormulaKind;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let mut f = FormulaFactory::new();
        let k = parse_formula("K[0] (input(0,1) | input(1,1) | input(2,1))", &mut f).unwrap();
        match k.kind() {
            FormulaKind::Know(0, inner) => {
                assert!(matches!(inner.kind(), FormulaKind::Or(c) if c.len() == 3))
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("false", &mut f).unwrap().is_false());
        let d = parse_formula("D[{0,1}] input(1,3)", &mut f).unwrap();
        let expected = {
            let a = f.atom(1, 3);
            f.distributed([0, 1].into_iter().collect(), a)
        };
        assert!(d.ptr_eq(&expected));
    }

    #[test]
    fn precedence() {
        let mut f = FormulaFactory::new();
        let x = parse_formula("input(0,0) | input(1,0) & !input(2,0)", &mut f).unwrap();
        match x.kind() {
            FormulaKind::Or(c) => assert!(matches!(c[1].kind(), FormulaKind::And(_))),
            other => panic!("{other:?}"),
        }
        let y = parse_formula("K[1] input(0,0) & input(1,1)", &mut f).unwrap();
        assert!(matches!(y.kind(), FormulaKind::And(_)));
    }

    #[test]
    fn reports_error_position() {
        let mut f = FormulaFactory::new();
        match parse_formula("input(0,1) & ", &mut f) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("input(0,1))", &mut f).is_err());
        assert!(parse_formula("K[x] false", &mut f).is_err());
    }

    fn formula_text() -> impl Strategy<Value = String> {
        let leaf =
            prop_oneof![Just("false".to_string()), (0usize..3, -1i64..3).prop_map(|(a, v)| format!("input({a},{v})")),];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|s| format!("!({s})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) & ({b})")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) | ({b})")),
                (0usize..3, inner.clone()).prop_map(|(a, s)| format!("K[{a}] ({s})")),
                (0u32..8, inner.clone()).prop_map(|(g, s)| format!("C[{}] ({s})", AgentSet::from_bits(g))),
                (0u32..8, inner).prop_map(|(g, s)| format!("D[{}] ({s})", AgentSet::from_bits(g))),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_round_trips(text in formula_text()) {
            let mut f = FormulaFactory::new();
            let phi = parse_formula(&text, &mut f).unwrap();
            let again = parse_formula(&phi.to_string(), &mut f).unwrap();
            prop_assert!(phi.ptr_eq(&again));
        }
    }
}
