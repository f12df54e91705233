//! Expression language for quaternionic functions: parser, printer and the
//! rewrite that lowers a quaternionic expression to its two complex components.

pub mod ast;
pub mod defs;
pub mod function;
pub mod parse;
pub mod print;

pub use ast::{CExpr, QExpr, Var};
pub use defs::{parse_definitions, Definition};
pub use function::{inverse_qf, lower, product_qf, sum_qf, QFunction};
pub use parse::parse;
pub use print::print;
