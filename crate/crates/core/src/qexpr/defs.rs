//! Function-definition files: one `name = <expression>` per line, `#` starts
//! a comment, blank lines are ignored.

use crate::error::{QfcError, Result};
use crate::qexpr::ast::QExpr;
use crate::qexpr::parse::parse;

#[derive(Debug, Clone, PartialEq)]
pub struct Definition {
    pub name: String,
    pub expr: QExpr,
    pub line: usize,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_definitions(text: &str) -> Result<Vec<Definition>> {
    let mut defs: Vec<Definition> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let wrap = |e: QfcError| QfcError::Definition {
            line,
            source: Box::new(e),
        };
        let Some((lhs, rhs)) = content.split_once('=') else {
            return Err(wrap(QfcError::Parse {
                pos: 0,
                msg: "expected 'name = expression'".into(),
            }));
        };
        let name = lhs.trim();
        if !valid_name(name) {
            return Err(wrap(QfcError::Parse {
                pos: 0,
                msg: format!("invalid function name '{name}'"),
            }));
        }
        if defs.iter().any(|d| d.name == name) {
            return Err(wrap(QfcError::Parse {
                pos: 0,
                msg: format!("duplicate definition of '{name}'"),
            }));
        }
        // Report positions relative to the start of the line.
        let offset = lhs.len() + 1;
        let expr = parse(rhs).map_err(|e| match e {
            QfcError::Parse { pos, msg } => wrap(QfcError::Parse {
                pos: pos + offset,
                msg,
            }),
            other => wrap(other),
        })?;
        defs.push(Definition {
            name: name.to_string(),
            expr,
            line,
        });
    }
    Ok(defs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexpr::ast::Var;

    #[test]
    fn reads_names_and_skips_comments() {
        let text = "# header\n\nf = z1   # holomorphic\ng=conj(z1) + conj(z2)*j\n";
        let defs = parse_definitions(text).unwrap();
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].name, "f");
        assert_eq!(defs[0].expr, QExpr::Var(Var::Z1));
        assert_eq!(defs[0].line, 3);
        assert_eq!(defs[1].name, "g");
        assert_eq!(defs[1].line, 4);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_definitions("f = z1\ng = z1 +\n").unwrap_err();
        match err {
            QfcError::Definition { line, source } => {
                assert_eq!(line, 2);
                assert!(matches!(*source, QfcError::Parse { pos: 8, .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_definitions("just an expression\n").is_err());
        assert!(parse_definitions("2f = z1\n").is_err());
        assert!(parse_definitions("f = z1\nf = z2\n").is_err());
    }
}
