use crate::qexpr::ast::QExpr;

// Binding strength; higher binds tighter.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const FACTOR: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn strength(e: &QExpr) -> u8 {
    match e {
        QExpr::Add(..) | QExpr::Sub(..) => SUM,
        QExpr::Mul(..) | QExpr::Div(..) => PRODUCT,
        QExpr::Neg(_) => FACTOR,
        QExpr::Pow(..) => POWER,
        _ => ATOM,
    }
}

/// Deterministic rendering that the parser reads back to the same tree.
///
/// Negative constants are not produced by the parser; they print as `(-c)`,
/// which re-parses as a negation.
pub fn print(e: &QExpr) -> String {
    let mut out = String::new();
    write(e, &mut out);
    out
}

fn write_at(e: &QExpr, min: u8, out: &mut String) {
    if strength(e) < min {
        out.push('(');
        write(e, out);
        out.push(')');
    } else {
        write(e, out);
    }
}

fn write(e: &QExpr, out: &mut String) {
    match e {
        QExpr::Var(v) => out.push_str(v.name()),
        QExpr::ConjVar(v) => {
            out.push_str("conj(");
            out.push_str(v.name());
            out.push(')');
        }
        QExpr::UnitI => out.push('i'),
        QExpr::UnitJ => out.push('j'),
        QExpr::Real(c) => {
            if c.is_sign_negative() {
                out.push_str(&format!("(-{})", -c));
            } else {
                out.push_str(&format!("{c}"));
            }
        }
        QExpr::Add(a, b) | QExpr::Sub(a, b) => {
            write_at(a, SUM, out);
            out.push_str(if matches!(e, QExpr::Add(..)) { " + " } else { " - " });
            write_at(b, PRODUCT, out);
        }
        QExpr::Mul(a, b) | QExpr::Div(a, b) => {
            write_at(a, PRODUCT, out);
            out.push_str(if matches!(e, QExpr::Mul(..)) { " * " } else { " / " });
            write_at(b, FACTOR, out);
        }
        QExpr::Neg(a) => {
            out.push('-');
            write_at(a, POWER, out);
        }
        QExpr::Pow(a, n) => {
            write_at(a, ATOM, out);
            out.push_str(&format!("^{n}"));
        }
        QExpr::Conj(a) => {
            out.push_str("conj(");
            write(a, out);
            out.push(')');
        }
    }
}
