use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QfcError, Result};
use crate::fueter::residuals::Residual;
use crate::quaternion::Point4;

/// The residual systems a report can be built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemName {
    Eq1,
    InverseEq1,
    InverseSystem,
    RealLinearSystem,
    SumPde,
    ProductSystem,
    RealProduct,
    RealCombined,
    ProductRule,
}

impl SystemName {
    pub const ALL: [SystemName; 9] = [
        SystemName::Eq1,
        SystemName::InverseEq1,
        SystemName::InverseSystem,
        SystemName::RealLinearSystem,
        SystemName::SumPde,
        SystemName::ProductSystem,
        SystemName::RealProduct,
        SystemName::RealCombined,
        SystemName::ProductRule,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemName::Eq1 => "eq1",
            SystemName::InverseEq1 => "inverse-eq1",
            SystemName::InverseSystem => "inverse-system",
            SystemName::RealLinearSystem => "real-linear-system",
            SystemName::SumPde => "sum-pde",
            SystemName::ProductSystem => "product-system",
            SystemName::RealProduct => "real-product",
            SystemName::RealCombined => "real-combined",
            SystemName::ProductRule => "product-rule",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        SystemName::ALL.into_iter().find(|n| n.name() == s)
    }

    /// Labels of the equations, in residual order.
    pub fn equations(self) -> &'static [&'static str] {
        match self {
            SystemName::Eq1 | SystemName::InverseEq1 => &["dz1bar", "dz2bar"],
            SystemName::InverseSystem | SystemName::RealLinearSystem | SystemName::ProductSystem => {
                &["first", "second"]
            }
            SystemName::SumPde => &["norm"],
            SystemName::RealProduct => &["bilinear"],
            SystemName::RealCombined => &["f-first", "f-second", "g-first", "g-second", "bilinear"],
            SystemName::ProductRule => &["gap"],
        }
    }

    /// Number of functions the system takes.
    pub fn arity(self) -> usize {
        match self {
            SystemName::ProductSystem
            | SystemName::RealProduct
            | SystemName::RealCombined
            | SystemName::ProductRule => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    /// `(x1, y1, x2, y2)`.
    pub point: [f64; 4],
    /// Normalized residuals, one per equation.
    pub residuals: Vec<f64>,
    pub raw: Vec<f64>,
    pub scale: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub system: SystemName,
    pub equations: Vec<String>,
    pub tol: f64,
    pub points: Vec<PointRecord>,
    pub masked: Vec<[f64; 4]>,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub masked_fraction: f64,
    pub passed: bool,
}

impl ResidualReport {
    /// Assembles a report from per-point outcomes; `None` marks a masked point.
    pub fn from_samples(
        system: SystemName,
        tol: f64,
        samples: Vec<(Point4, Option<Residual>)>,
    ) -> Self {
        let total = samples.len();
        let mut points = Vec::new();
        let mut masked = Vec::new();
        for (p, r) in samples {
            match r {
                Some(r) => points.push(PointRecord {
                    point: p.coords(),
                    residuals: r.normalized(),
                    raw: r.raw,
                    scale: r.scale,
                }),
                None => masked.push(p.coords()),
            }
        }
        let per_point: Vec<f64> = points
            .iter()
            .map(|r| r.residuals.iter().copied().fold(0.0, f64::max))
            .collect();
        let max_residual = per_point.iter().copied().fold(0.0, f64::max);
        let mean_residual = if per_point.is_empty() {
            0.0
        } else {
            per_point.iter().sum::<f64>() / per_point.len() as f64
        };
        let masked_fraction = if total == 0 { 0.0 } else { masked.len() as f64 / total as f64 };
        ResidualReport {
            system,
            equations: system.equations().iter().map(|s| s.to_string()).collect(),
            tol,
            passed: max_residual <= tol,
            points,
            masked,
            max_residual,
            mean_residual,
            masked_fraction,
        }
    }

    /// Evaluates `eval` at every point in parallel. `Ok(None)` and singular
    /// points are masked, as are non-finite residuals; other errors abort.
    pub fn evaluate<F>(system: SystemName, tol: f64, points: &[Point4], eval: F) -> Result<Self>
    where
        F: Fn(&Point4) -> Result<Option<Residual>> + Sync,
    {
        let samples = points
            .par_iter()
            .map(|p| match eval(p) {
                Ok(Some(r)) if r.is_finite() => Ok((*p, Some(r))),
                Ok(_) | Err(QfcError::Singular(_)) => Ok((*p, None)),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ResidualReport::from_samples(system, tol, samples))
    }

    pub fn unmasked(&self) -> usize {
        self.points.len()
    }

    pub fn total(&self) -> usize {
        self.points.len() + self.masked.len()
    }

    /// The record with the largest normalized residual.
    pub fn worst(&self) -> Option<&PointRecord> {
        self.points.iter().max_by(|a, b| {
            let m = |r: &PointRecord| r.residuals.iter().copied().fold(0.0, f64::max);
            m(a).total_cmp(&m(b))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per point per equation; masked points get a single row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        write_csv_header(&mut w, &[]).expect("in-memory csv");
        write_csv_rows(&mut w, &[], self).expect("in-memory csv");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "system", "x1", "y1", "x2", "y2", "equation", "residual", "raw", "scale", "status",
];

/// Header row, with extra leading columns named by `prefix`.
pub fn write_csv_header<W: std::io::Write>(w: &mut csv::Writer<W>, prefix: &[&str]) -> csv::Result<()> {
    w.write_record(prefix.iter().chain(CSV_HEADER.iter()))
}

/// Rows of `report`, each starting with the values in `prefix`.
pub fn write_csv_rows<W: std::io::Write>(
    w: &mut csv::Writer<W>,
    prefix: &[&str],
    report: &ResidualReport,
) -> csv::Result<()> {
    let sys = report.system.name();
    let mut emit = |fields: Vec<String>| {
        let row = prefix.iter().map(|s| s.to_string()).chain(std::iter::once(sys.to_string())).chain(fields);
        w.write_record(row.collect::<Vec<_>>())
    };
    for r in &report.points {
        for (k, eq) in report.equations.iter().enumerate() {
            let status = if r.residuals[k] <= report.tol { "pass" } else { "fail" };
            let mut row: Vec<String> = r.point.iter().map(|c| c.to_string()).collect();
            row.push(eq.clone());
            row.push(r.residuals[k].to_string());
            row.push(r.raw[k].to_string());
            row.push(r.scale[k].to_string());
            row.push(status.into());
            emit(row)?;
        }
    }
    for p in &report.masked {
        let mut row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        row.extend(["", "", "", "", "masked"].map(String::from));
        emit(row)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fueter::residuals::residual_eq1;
    use crate::qexpr::QFunction;

    fn report() -> ResidualReport {
        let f = QFunction::parse("conj(z2) + 1/z1").unwrap();
        let pts = vec![
            Point4::from_coords([0.5, 0.0, 0.0, 0.0]),
            Point4::ORIGIN,
            Point4::from_coords([1.0, 1.0, 1.0, 1.0]),
        ];
        ResidualReport::evaluate(SystemName::Eq1, 1e-8, &pts, |p| residual_eq1(&f, p).map(Some)).unwrap()
    }

    #[test]
    fn singular_points_are_masked() {
        let r = report();
        assert_eq!(r.unmasked(), 2);
        assert_eq!(r.masked, vec![[0.0; 4]]);
        assert!(!r.passed);
        assert!(r.max_residual >= r.mean_residual && r.mean_residual >= 0.0);
        assert!((r.masked_fraction - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn csv_has_a_row_per_equation() {
        let csv = report().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 2 + 1);
        assert!(lines[0].starts_with("system,x1"));
        assert!(lines[2].ends_with(",fail"));
        assert!(lines[5].ends_with(",masked"));
    }

    #[test]
    fn json_has_no_nan() {
        let j = report().to_json();
        assert!(!j.contains("NaN") && !j.contains("null"));
        assert!(j.contains("\"system\": \"eq1\""));
    }

    #[test]
    fn names_round_trip() {
        for s in SystemName::ALL {
            assert_eq!(SystemName::from_name(s.name()), Some(s));
            assert!(!s.equations().is_empty());
        }
    }
}
