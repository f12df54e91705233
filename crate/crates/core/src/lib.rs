//! Quaternionic function analysis: quaternion arithmetic, an expression
//! language for H-valued functions of `(z1, z2)`, Wirtinger forward-mode
//! differentiation, and residual checks for the Cauchy-Fueter operator.

pub mod error;
pub mod fueter;
pub mod quaternion;
pub mod samples;
pub mod suite;
pub mod qexpr;
pub mod wirtinger;

pub use error::{QfcError, Result};
pub use qexpr::{inverse_qf, lower, parse, print, product_qf, sum_qf, CExpr, QExpr, QFunction};
pub use quaternion::{modulus, norm_sq, quat_conj, quat_mul, rinv, Point4, Quaternion};
pub use wirtinger::{eval_jet, fd_jet, WirtingerJet};
pub use fueter::{
    cauchy_fueter, classify, classify_with_witnesses, estimate_order, zero_set_scan, Classification,
    DValue, Domain, Label, OrderEstimate, OrderKind, ResidualReport, SystemName,
};
