//! Forward-mode Wirtinger differentiation and its finite-difference oracle.

pub mod fd;
pub mod jet;
pub mod tape;

pub use fd::{fd_jet, DEFAULT_FD_STEP};
pub use jet::WirtingerJet;
pub use tape::{Tape, DEFAULT_POLE_EPS};

use crate::error::Result;
use crate::qexpr::ast::CExpr;
use crate::quaternion::Point4;

/// Value and first Wirtinger partials of `e` at `p`.
pub fn eval_jet(e: &CExpr, p: &Point4) -> Result<WirtingerJet> {
    e.tape().jet(p)
}
