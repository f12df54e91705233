//! Recursive-descent parser for the function syntax.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ['-'] atom ['^' int]
//! atom   := 'z1' | 'z2' | 'i' | 'j' | number | 'conj' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `-a^n` parses as `-(a^n)`. `conj(z1)` and `conj(z2)` become
//! [`QExpr::ConjVar`] leaves.

use crate::error::{QfcError, Result};
use crate::qexpr::ast::{QExpr, Var};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (at, t) = lx.next()?;
            let end = t == Tok::End;
            out.push((at, t));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((start, Tok::End));
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = self.src[start..]
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(self.src.len() - start);
            self.pos += len;
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        Err(QfcError::Parse {
            pos: start,
            msg: format!("unexpected character '{c}'"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let int_digits = digits(&mut i);
        let mut is_int = true;
        if i < bytes.len() && bytes[i] == b'.' {
            is_int = false;
            i += 1;
            let frac = digits(&mut i);
            if int_digits == 0 && frac == 0 {
                return Err(QfcError::Parse {
                    pos: start,
                    msg: "malformed number".into(),
                });
            }
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                is_int = false;
                i = j;
            }
        }
        self.pos = i;
        let text = &self.src[start..i];
        let err = || QfcError::Parse {
            pos: start,
            msg: format!("malformed number '{text}'"),
        };
        if is_int {
            if let Ok(n) = text.parse::<u64>() {
                return Ok((start, Tok::Int(n)));
            }
        }
        let v: f64 = text.parse().map_err(|_| err())?;
        if !v.is_finite() {
            return Err(err());
        }
        Ok((start, Tok::Num(v)))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(QfcError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<QExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = QExpr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = QExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<QExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = QExpr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = QExpr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<QExpr> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Int(n) if n >= 1 && n <= u32::MAX as u64 => base = QExpr::pow(base, n as u32),
                Tok::Int(_) => {
                    self.at -= 1;
                    return self.error("exponent must be a positive integer");
                }
                _ => {
                    self.at -= 1;
                    return self.error("expected a positive integer exponent");
                }
            }
        }
        Ok(if negate { QExpr::neg(base) } else { base })
    }

    fn atom(&mut self) -> Result<QExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(QExpr::Real(n as f64))
            }
            Tok::Num(v) => {
                self.bump();
                Ok(QExpr::Real(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "z1" => Ok(QExpr::Var(Var::Z1)),
                    "z2" => Ok(QExpr::Var(Var::Z2)),
                    "i" => Ok(QExpr::UnitI),
                    "j" => Ok(QExpr::UnitJ),
                    "conj" => {
                        self.expect(Tok::LParen, "'(' after conj")?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(match inner {
                            QExpr::Var(v) => QExpr::ConjVar(v),
                            other => QExpr::conj(other),
                        })
                    }
                    _ => {
                        self.at -= 1;
                        self.error(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Tok::End => self.error("unexpected end of input"),
            other => self.error(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse(text: &str) -> Result<QExpr> {
    let mut p = Parser {
        toks: Lexer::tokens(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn conjugate_pair() {
        let e = parse("conj(z1) + conj(z2)*j").unwrap();
        assert_eq!(
            e,
            QExpr::add(
                QExpr::ConjVar(Var::Z1),
                QExpr::mul(QExpr::ConjVar(Var::Z2), QExpr::UnitJ)
            )
        );
    }

    #[test]
    fn single_variable() {
        assert_eq!(parse("z1").unwrap(), QExpr::Var(Var::Z1));
    }

    #[test]
    fn five_term_chain() {
        let e = parse("z1 + conj(z1) + z2 + conj(z2) + 1").unwrap();
        let mut terms = 1;
        let mut cur = &e;
        while let QExpr::Add(a, _) = cur {
            terms += 1;
            cur = a;
        }
        assert_eq!(terms, 5);
        assert_eq!(*cur, QExpr::Var(Var::Z1));
    }

    #[test]
    fn precedence_and_negation() {
        let e = parse("-z1^2 * z2").unwrap();
        assert_eq!(
            e,
            QExpr::mul(QExpr::neg(QExpr::pow(QExpr::Var(Var::Z1), 2)), QExpr::Var(Var::Z2))
        );
        let e = parse("z1 - -z2").unwrap();
        assert_eq!(e, QExpr::sub(QExpr::Var(Var::Z1), QExpr::neg(QExpr::Var(Var::Z2))));
    }

    #[test]
    fn division_is_kept_in_place() {
        let e = parse("z1 / z2 * j").unwrap();
        match e {
            QExpr::Mul(a, b) => {
                assert_eq!(*b, QExpr::UnitJ);
                assert!(matches!(&*a, QExpr::Div(_, _)));
            }
            _ => panic!("expected Mul"),
        }
    }

    #[test]
    fn conj_of_compound() {
        let e = parse("conj(z1*z2)").unwrap();
        assert_eq!(
            e,
            QExpr::Conj(Arc::new(QExpr::mul(QExpr::Var(Var::Z1), QExpr::Var(Var::Z2))))
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("2.5").unwrap(), QExpr::Real(2.5));
        assert_eq!(parse("1e-3").unwrap(), QExpr::Real(1e-3));
        assert_eq!(parse(".5").unwrap(), QExpr::Real(0.5));
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(
            parse("z1 + * z2"),
            Err(QfcError::Parse {
                pos: 5,
                msg: "unexpected token Star".into()
            })
        );
        assert!(matches!(parse("z3"), Err(QfcError::Parse { pos: 0, .. })));
        assert!(matches!(parse("z1^0"), Err(QfcError::Parse { pos: 3, .. })));
        assert!(matches!(parse("z1^1.5"), Err(QfcError::Parse { pos: 3, .. })));
        assert!(matches!(parse("(z1"), Err(QfcError::Parse { pos: 3, .. })));
        assert!(matches!(parse("z1 z2"), Err(QfcError::Parse { pos: 3, .. })));
        assert!(matches!(parse("z1 $"), Err(QfcError::Parse { pos: 3, .. })));
        assert!(matches!(parse(""), Err(QfcError::Parse { pos: 0, .. })));
    }
}
