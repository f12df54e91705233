//! The Cauchy-Fueter operator, residual systems, classification, zero sets
//! and order estimation.

pub mod classify;
pub mod domain;
pub mod operator;
pub mod order;
pub mod report;
pub mod residuals;
pub mod systems;
pub mod zeros;

pub use classify::{classify, classify_with_witnesses, Classification, Label, WitnessCheck, DEFAULT_TOL};
pub use domain::{Domain, DEFAULT_MASK_THRESHOLD};
pub use operator::{cauchy_fueter, cauchy_fueter_fd, cauchy_fueter_norm_sq, DValue, FunctionJets};
pub use order::{estimate_order, estimate_order_with, OrderEstimate, OrderKind, OrderOptions};
pub use report::{write_csv_header, write_csv_rows, PointRecord, ResidualReport, SystemName, CSV_HEADER};
pub use residuals::{
    product_rule_check, real_sum_branch, residual_eq1, residual_inverse_system, residual_product_system,
    residual_real_combined, residual_real_linear_system, residual_real_product, residual_sum_pde,
    sum_pde_value, Branch, BranchReport, ProductRuleCheck, Residual,
};
pub use systems::{residual_report, system_residual};
pub use zeros::{zero_set_scan, ZeroCluster};
