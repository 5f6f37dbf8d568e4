//! Infix surface syntax.
//!
//! Precedence from tightest to loosest: `~`, `&`, `|`, `->`, `<->`.
//! `->` and `<->` associate to the right, `&` and `|` to the left.
//! The TPTP spellings `=>` and `<=>` are accepted as aliases.

use thiserror::Error;

use super::{Connective, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Var(u32),
    Not,
    Op(Connective),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |column: usize, message: String| ParseError { column, message };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = if rest.starts_with("<->") || rest.starts_with("<=>") {
            (Token::Op(Connective::Iff), 3)
        } else if rest.starts_with("->") || rest.starts_with("=>") {
            (Token::Op(Connective::Implies), 2)
        } else {
            match c {
                '~' | '¬' => (Token::Not, 1),
                '&' | '∧' => (Token::Op(Connective::And), 1),
                '|' | '∨' => (Token::Op(Connective::Or), 1),
                '→' => (Token::Op(Connective::Implies), 1),
                '↔' => (Token::Op(Connective::Iff), 1),
                '(' => (Token::LParen, 1),
                ')' => (Token::RParen, 1),
                'p' | 'P' => {
                    let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
                    if digits.is_empty() {
                        return Err(err(col, "expected variable index after `p`".into()));
                    }
                    let v: u32 = digits
                        .parse()
                        .map_err(|_| err(col, format!("variable index `{digits}` too large")))?;
                    if v == 0 {
                        return Err(err(col, "variables are numbered from p1".into()));
                    }
                    (Token::Var(v), 1 + digits.len())
                }
                other => return Err(err(col, format!("unexpected character `{other}`"))),
            }
        };
        out.push((col, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |(c, _)| *c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            column: self.column(),
            message: message.into(),
        }
    }

    fn expression(&mut self, min_prec: u8) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while let Some(Token::Op(op)) = self.peek() {
            let op = *op;
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let next_min = if op.right_assoc() { prec } else { prec + 1 };
            let right = self.expression(next_min)?;
            left = Formula::binary(op, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Var(v)) => {
                self.pos += 1;
                Ok(Formula::Var(v))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expression(0)?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(tok) => Err(self.error(format!("unexpected token {tok:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses one formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let phi = parser.expression(0)?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(phi)
}

/// Parses a comma-separated list of formulas; an empty string is the empty list.
pub fn parse_list(text: &str) -> Result<Vec<Formula>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    // Commas never occur inside a formula, so splitting is safe.
    let mut offset = 0;
    let mut out = Vec::new();
    for piece in text.split(',') {
        let phi = parse(piece).map_err(|e| ParseError {
            column: e.column + offset,
            message: e.message,
        })?;
        out.push(phi);
        offset += piece.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_implication() {
        assert_eq!(
            parse("p1 -> p1").unwrap(),
            Formula::implies(Formula::var(1), Formula::var(1))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("~p1 & p2 | p3 -> p1 <-> p2").unwrap();
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(Formula::and(Formula::not(Formula::var(1)), Formula::var(2)), Formula::var(3)),
                Formula::var(1),
            ),
            Formula::var(2),
        );
        assert_eq!(f, expected);
        assert_eq!(
            parse("p1 -> p2 -> p3").unwrap(),
            parse("p1 -> (p2 -> p3)").unwrap()
        );
        assert_eq!(parse("p1 & p2 & p3").unwrap(), parse("(p1 & p2) & p3").unwrap());
        assert_eq!(parse("p1 => p2").unwrap(), parse("p1 -> p2").unwrap());
        assert_eq!(parse("p1 <=> ~p2").unwrap(), parse("p1 <-> ~p2").unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("p1 ->").unwrap_err();
        assert_eq!(e.column, 6);
        assert!(parse("p0").is_err());
        assert!(parse("(p1 & p2").is_err());
        assert_eq!(parse("p1 p2").unwrap_err().column, 4);
        assert_eq!(parse("q1").unwrap_err().column, 1);
    }

    #[test]
    fn lists() {
        let xs = parse_list("p1, p1->p2").unwrap();
        assert_eq!(xs.len(), 2);
        assert!(parse_list("").unwrap().is_empty());
        assert_eq!(parse_list("p1, p1 ->").unwrap_err().column, 10);
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = (1u32..4).prop_map(Formula::Var);
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (0usize..4, inner.clone(), inner)
                    .prop_map(|(k, l, r)| Formula::binary(Connective::ALL[k], l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(phi in arb_formula()) {
            let text = phi.to_string();
            prop_assert_eq!(parse(&text).unwrap(), phi);
        }
    }
}
