//! Recursive-descent parser for the resource expression mini-language.
//!
//! Grammar:
//! ```text
//! statement := 'gap' '(' expr ',' expr ')'
//!            | expr (('=' | '>=' | '<=') expr)?
//! expr      := term (('+' | '-') term)*
//! term      := rational '*' atom | rational | atom
//! atom      := name | 'alpha_bit' '(' rational ')' | '(' expr ')'
//! rational  := '-'? digits ('/' digits)?
//! ```
//! Names: zero_bit, x_bit, y_bit, ebit, cbit, cobit, qubit, alpha_bit(r).

use num_rational::Ratio;

use super::{Bundle, NamedResource, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Eq,
    Geq,
    Leq,
}

/// Parsed top-level statement.
#[derive(Clone, Debug)]
pub enum Statement {
    Expr(Bundle),
    Relation(Bundle, RelOp, Bundle),
    Gap(Bundle, Bundle),
}

pub fn parse_statement(input: &str) -> Result<Statement> {
    let mut p = Parser::new(input);
    p.skip_ws();
    if p.peek_keyword("gap") && p.peek_after_keyword_is_paren("gap") {
        p.expect_keyword("gap")?;
        p.expect('(')?;
        let lhs = p.expr()?;
        p.expect(',')?;
        let rhs = p.expr()?;
        p.expect(')')?;
        p.end()?;
        return Ok(Statement::Gap(lhs, rhs));
    }
    let lhs = p.expr()?;
    p.skip_ws();
    let op = if p.eat_str(">=") {
        Some(RelOp::Geq)
    } else if p.eat_str("<=") {
        Some(RelOp::Leq)
    } else if p.eat_str("=") {
        Some(RelOp::Eq)
    } else {
        None
    };
    match op {
        None => {
            p.end()?;
            Ok(Statement::Expr(lhs))
        }
        Some(op) => {
            let rhs = p.expr()?;
            p.end()?;
            Ok(Statement::Relation(lhs, op, rhs))
        }
    }
}

/// Parse a bare expression into a bundle.
pub fn parse_bundle(input: &str) -> Result<Bundle> {
    let mut p = Parser::new(input);
    let bundle = p.expr()?;
    p.end()?;
    Ok(bundle)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat_str(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{ch}`")))
        }
    }

    fn peek_keyword(&self, word: &str) -> bool {
        let rest = self.rest();
        rest.starts_with(word)
            && !rest[word.len()..]
                .starts_with(|c: char| c.is_alphanumeric() || c == '_')
    }

    fn peek_after_keyword_is_paren(&self, word: &str) -> bool {
        self.rest()[word.len()..].trim_start().starts_with('(')
    }

    fn expect_keyword(&mut self, word: &str) -> Result<()> {
        self.skip_ws();
        if self.peek_keyword(word) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{word}`")))
        }
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn expr(&mut self) -> Result<Bundle> {
        let mut bundle = self.term()?;
        loop {
            self.skip_ws();
            if self.eat_str("+") {
                bundle.extend(self.term()?);
            } else if self.rest().starts_with('-') && !self.rest().starts_with("->") {
                self.pos += 1;
                let negated: Bundle = self
                    .term()?
                    .into_iter()
                    .map(|(k, n)| (-k, n))
                    .collect();
                bundle.extend(negated);
            } else {
                return Ok(bundle);
            }
        }
    }

    fn term(&mut self) -> Result<Bundle> {
        self.skip_ws();
        if self.rest().starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            let coeff = self.rational()?;
            self.skip_ws();
            if self.eat_str("*") {
                let atom = self.atom()?;
                return Ok(atom.into_iter().map(|(k, n)| (coeff * k, n)).collect());
            }
            // A bare rational counts zero-bits' worth of nothing: treat it
            // as a coefficient on the empty bundle only if followed by an
            // atom; otherwise it is invalid.
            return Err(self.error("expected `*` after coefficient"));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Bundle> {
        self.skip_ws();
        if self.eat_str("(") {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        let start = self.pos;
        let name: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_alphanumeric() || *c == '_')
            .collect();
        if name.is_empty() {
            return Err(self.error("expected a resource name"));
        }
        self.pos += name.len();
        let one = Rat::from_integer(1);
        let named = match name.as_str() {
            "zero_bit" => NamedResource::ZeroBit,
            "x_bit" => NamedResource::XBit,
            "y_bit" => NamedResource::YBit,
            "ebit" => NamedResource::Ebit,
            "cbit" => NamedResource::Cbit,
            "cobit" => NamedResource::Cobit,
            "qubit" => NamedResource::Qubit,
            "alpha_bit" => {
                self.expect('(')?;
                let alpha = self.rational()?;
                self.expect(')')?;
                return Ok(vec![(one, NamedResource::AlphaBit(alpha))]);
            }
            _ => {
                self.pos = start;
                return Err(self.error(format!("unknown resource `{name}`")));
            }
        };
        Ok(vec![(one, named)])
    }

    fn rational(&mut self) -> Result<Rat> {
        self.skip_ws();
        let negative = self.eat_str("-");
        self.skip_ws();
        let numer = self.integer()?;
        self.skip_ws();
        let denom = if self.rest().starts_with('/') {
            self.pos += 1;
            let d = self.integer()?;
            if d == 0 {
                return Err(self.error("zero denominator"));
            }
            d
        } else {
            1
        };
        let r = Ratio::new(numer, denom);
        Ok(if negative { -r } else { r })
    }

    fn integer(&mut self) -> Result<i64> {
        let digits: String = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        self.pos += digits.len();
        digits
            .parse::<i64>()
            .map_err(|e| self.error(format!("bad integer: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{check_identity, compare, vectorize, Verdict};
    use super::*;

    #[test]
    fn parses_the_harrow_identity() {
        match parse_statement("2*cobit = qubit + ebit").unwrap() {
            Statement::Relation(lhs, RelOp::Eq, rhs) => {
                assert!(check_identity(&lhs, &rhs));
            }
            other => panic!("unexpected parse {other:?}"),
        }
    }

    #[test]
    fn parses_alpha_bits_with_rational_argument() {
        let bundle = parse_bundle("alpha_bit(3/4)").unwrap();
        let v = vectorize(&bundle);
        assert_eq!(v.zero, Ratio::new(7, 4));
        assert_eq!(v.x, Ratio::new(3, 4));
    }

    #[test]
    fn parses_gap_statements() {
        match parse_statement("gap(qubit, cobit)").unwrap() {
            Statement::Gap(lhs, rhs) => {
                let g = super::super::gap(&lhs, &rhs);
                assert_eq!(g, NamedResource::ZeroBit.vector());
            }
            other => panic!("unexpected parse {other:?}"),
        }
    }

    #[test]
    fn incomparable_relation_evaluates() {
        match parse_statement("cbit >= ebit").unwrap() {
            Statement::Relation(lhs, RelOp::Geq, rhs) => {
                assert_eq!(
                    compare(&vectorize(&lhs), &vectorize(&rhs)),
                    Verdict::Incomparable
                );
            }
            other => panic!("unexpected parse {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_bundle("2*cobit + waffle") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 10),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_bundle("3 cobit").is_err());
        assert!(parse_bundle("alpha_bit(1/0)").is_err());
    }

    #[test]
    fn subtraction_and_parentheses() {
        let bundle = parse_bundle("2*(cobit + zero_bit) - qubit").unwrap();
        let v = vectorize(&bundle);
        assert_eq!(v, NamedResource::Ebit.vector() + NamedResource::ZeroBit.vector().scale(Ratio::new(2,1)));
    }
}
