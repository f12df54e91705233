//! Evaluation of any named residual system on a grid.

use crate::error::{QfcError, Result};
use crate::fueter::domain::Domain;
use crate::fueter::report::{ResidualReport, SystemName};
use crate::fueter::residuals::*;
use crate::qexpr::{inverse_qf, QFunction};
use crate::quaternion::Point4;

/// Residual of `system` at `p`. Two-function systems need `g`.
pub fn system_residual(system: SystemName, f: &QFunction, g: Option<&QFunction>, p: &Point4) -> Result<Residual> {
    let pair = || {
        g.ok_or_else(|| QfcError::InvalidArgument(format!("system {system} takes two functions")))
    };
    match system {
        SystemName::Eq1 => residual_eq1(f, p),
        SystemName::InverseEq1 => residual_eq1(&inverse_qf(f), p),
        SystemName::InverseSystem => residual_inverse_system(f, p),
        SystemName::RealLinearSystem => residual_real_linear_system(f, p),
        SystemName::SumPde => residual_sum_pde(f, p),
        SystemName::ProductSystem => residual_product_system(f, pair()?, p),
        SystemName::RealProduct => residual_real_product(f, pair()?, p),
        SystemName::RealCombined => residual_real_combined(f, pair()?, p),
        SystemName::ProductRule => {
            let c = product_rule_check(f, pair()?, p)?;
            Ok(Residual { raw: vec![c.gap], scale: vec![c.scale] })
        }
    }
}

/// Report of `system` over the `grid_n^4` grid of `d`. Points where
/// `norm_sq(f)` (times `norm_sq(g)` for pairs) is below the domain
/// threshold are masked, as are singular points.
pub fn residual_report(
    system: SystemName,
    f: &QFunction,
    g: Option<&QFunction>,
    d: &Domain,
    grid_n: usize,
    tol: f64,
) -> Result<ResidualReport> {
    if system.arity() == 2 && g.is_none() {
        return Err(QfcError::InvalidArgument(format!("system {system} takes two functions")));
    }
    if !(tol > 0.0) {
        return Err(QfcError::InvalidArgument("tolerance must be positive".into()));
    }
    let points = d.grid(grid_n)?;
    ResidualReport::evaluate(system, tol, &points, |p| {
        let mut n = f.eval(p)?.norm_sq();
        if let Some(g) = g {
            n *= g.eval(p)?.norm_sq();
        }
        if !(n >= d.excluded_threshold) {
            return Ok(None);
        }
        system_residual(system, f, g, p).map(Some)
    })
}
