use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QfcError, Result};
use crate::fueter::domain::Domain;
use crate::fueter::operator::FunctionJets;
use crate::fueter::report::{ResidualReport, SystemName};
use crate::fueter::residuals::{eq1_from_jets, Residual};
use crate::qexpr::{inverse_qf, product_qf, sum_qf, QFunction};
use crate::quaternion::Point4;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    Holomorphic,
    Hyperholomorphic,
    WHypermeromorphic,
    #[serde(rename = "Hypermeromorphic-candidate")]
    HypermeromorphicCandidate,
    NonHyperholomorphic,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Holomorphic => "Holomorphic",
            Label::Hyperholomorphic => "Hyperholomorphic",
            Label::WHypermeromorphic => "WHypermeromorphic",
            Label::HypermeromorphicCandidate => "Hypermeromorphic-candidate",
            Label::NonHyperholomorphic => "NonHyperholomorphic",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Closure checks of `f` against one witness partner `w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCheck {
    pub witness: String,
    pub sum: bool,
    pub product_left: bool,
    pub product_right: bool,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.sum && self.product_left && self.product_right
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub label: Label,
    pub tol: f64,
    /// Largest `|f2| / (1 + |f|)` over unmasked points.
    pub second_component_max: f64,
    pub eq1: ResidualReport,
    pub inverse_eq1: ResidualReport,
    pub witnesses: Vec<WitnessCheck>,
}

impl Classification {
    pub fn is_w_hypermeromorphic(&self) -> bool {
        self.eq1.passed && self.inverse_eq1.passed
    }
}

struct Sample {
    eq1: Residual,
    inverse: Residual,
    second: f64,
}

fn sample(f: &QFunction, inv: &QFunction, p: &Point4, threshold: f64) -> Result<Option<Sample>> {
    let fj = FunctionJets::at(f, p)?;
    if fj.value().norm_sq() < threshold {
        return Ok(None);
    }
    let ij = FunctionJets::at(inv, p)?;
    let v = fj.value();
    Ok(Some(Sample {
        eq1: eq1_from_jets(&fj),
        inverse: eq1_from_jets(&ij),
        second: v.z2.norm() / (1.0 + v.modulus()),
    }))
}

/// Samples `f` on the `grid_n^4` grid of `d` and labels it.
///
/// Points where `norm_sq(f)` is below the domain threshold, or where `f` or
/// its inverse cannot be evaluated, are masked for both reports. At least
/// half the points must survive.
pub fn classify(f: &QFunction, d: &Domain, grid_n: usize, tol: f64) -> Result<Classification> {
    if !(tol > 0.0) {
        return Err(QfcError::InvalidArgument("tolerance must be positive".into()));
    }
    let points = d.grid(grid_n)?;
    let inv = inverse_qf(f);
    let samples: Vec<(Point4, Option<Sample>)> = points
        .par_iter()
        .map(|p| match sample(f, &inv, p, d.excluded_threshold) {
            Ok(Some(s)) if s.eq1.is_finite() && s.inverse.is_finite() => (*p, Some(s)),
            _ => (*p, None),
        })
        .collect();
    let unmasked = samples.iter().filter(|(_, s)| s.is_some()).count();
    let total = samples.len();
    if 2 * unmasked < total {
        return Err(QfcError::Inconclusive { unmasked, total });
    }
    let second_component_max = samples
        .iter()
        .filter_map(|(_, s)| s.as_ref().map(|s| s.second))
        .fold(0.0, f64::max);
    let mut eq1 = Vec::with_capacity(total);
    let mut inverse = Vec::with_capacity(total);
    for (p, s) in samples {
        match s {
            Some(s) => {
                eq1.push((p, Some(s.eq1)));
                inverse.push((p, Some(s.inverse)));
            }
            None => {
                eq1.push((p, None));
                inverse.push((p, None));
            }
        }
    }
    let eq1 = ResidualReport::from_samples(SystemName::Eq1, tol, eq1);
    let inverse_eq1 = ResidualReport::from_samples(SystemName::InverseEq1, tol, inverse);
    let label = if !eq1.passed {
        Label::NonHyperholomorphic
    } else if second_component_max <= tol {
        Label::Holomorphic
    } else if inverse_eq1.passed {
        Label::WHypermeromorphic
    } else {
        Label::Hyperholomorphic
    };
    Ok(Classification {
        label,
        tol,
        second_component_max,
        eq1,
        inverse_eq1,
        witnesses: Vec::new(),
    })
}

/// Like [`classify`], and additionally tests closure of a w-hypermeromorphic
/// `f` under sums and both products with each witness. When all pass the
/// label becomes [`Label::HypermeromorphicCandidate`].
pub fn classify_with_witnesses(
    f: &QFunction,
    witnesses: &[QFunction],
    d: &Domain,
    grid_n: usize,
    tol: f64,
) -> Result<Classification> {
    let mut c = classify(f, d, grid_n, tol)?;
    let ok = |g: QFunction| -> Result<bool> {
        match classify(&g, d, grid_n, tol) {
            Ok(c) => Ok(c.is_w_hypermeromorphic()),
            Err(QfcError::Inconclusive { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    for w in witnesses {
        c.witnesses.push(WitnessCheck {
            witness: w.to_string(),
            sum: ok(sum_qf(f, w))?,
            product_left: ok(product_qf(f, w))?,
            product_right: ok(product_qf(w, f))?,
        });
    }
    if c.label == Label::WHypermeromorphic
        && !witnesses.is_empty()
        && c.witnesses.iter().all(WitnessCheck::passed)
    {
        c.label = Label::HypermeromorphicCandidate;
    }
    Ok(c)
}
