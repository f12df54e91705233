use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use qfc_core::fueter::{
    classify_with_witnesses, estimate_order, residual_report, write_csv_header, write_csv_rows,
    zero_set_scan, Classification, OrderEstimate, OrderKind, ResidualReport, SystemName, ZeroCluster,
};
use qfc_core::qexpr::parse_definitions;
use qfc_core::suite::{run_suite, Bound, SuiteConfig, SuiteReport};
use qfc_core::{Point4, QFunction, QfcError};
use serde::Serialize;

use crate::config::{CommonArgs, Format, RunConfig};

pub const SCHEMA: &str = "qfc-report/1";

/// A non-zero exit: 1 verification failure, 2 input or usage error,
/// 3 inconclusive.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure::usage(message)
    }
}

impl From<QfcError> for Failure {
    fn from(e: QfcError) -> Self {
        match e {
            QfcError::Inconclusive { .. } => Failure { code: 3, message: e.to_string() },
            _ => Failure::usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Zero,
    Pole,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(cfg: &RunConfig, body: T) -> String {
    let env = Envelope { schema: SCHEMA, command: cfg.command, config: cfg, body };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::usage(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn csv_string(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    build(&mut w).expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

struct Named {
    name: String,
    f: QFunction,
}

fn load(cfg: &RunConfig) -> Result<Vec<Named>, Failure> {
    let path = cfg.input.as_deref().ok_or_else(|| Failure::usage("--input is required"))?;
    read_definitions(path)
}

fn read_definitions(path: &Path) -> Result<Vec<Named>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let defs = parse_definitions(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if defs.is_empty() {
        return Err(Failure::usage(format!("{}: no definitions", path.display())));
    }
    Ok(defs.into_iter().map(|d| Named { name: d.name, f: QFunction::from(&d.expr) }).collect())
}

fn select<'a>(all: &'a [Named], name: Option<&str>) -> Result<Vec<&'a Named>, Failure> {
    match name {
        None => Ok(all.iter().collect()),
        Some(n) => find(all, n).map(|f| vec![f]),
    }
}

fn find<'a>(all: &'a [Named], name: &str) -> Result<&'a Named, Failure> {
    all.iter().find(|d| d.name == name).ok_or_else(|| Failure::usage(format!("no definition named {name:?}")))
}

fn fmt_point(p: &[f64; 4]) -> String {
    format!("({}, {}, {}, {})", p[0], p[1], p[2], p[3])
}

fn report_line(out: &mut String, r: &ResidualReport) {
    let status = if r.passed { "pass" } else { "FAIL" };
    let _ = write!(
        out,
        "  {:<18} {status}  max {:.3e}  mean {:.3e}  masked {}/{}",
        r.system.name(),
        r.max_residual,
        r.mean_residual,
        r.masked.len(),
        r.total()
    );
    if let (false, Some(w)) = (r.passed, r.worst()) {
        let _ = write!(out, "  worst at {}", fmt_point(&w.point));
    }
    out.push('\n');
}

#[derive(Serialize)]
struct InconclusiveRecord {
    unmasked: usize,
    total: usize,
}

#[derive(Serialize)]
struct ClassifiedFunction {
    name: String,
    expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    inconclusive: Option<InconclusiveRecord>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    classification: Option<Classification>,
}

#[derive(Serialize)]
struct ClassifyBody<'a> {
    functions: &'a [ClassifiedFunction],
}

pub fn classify(args: &CommonArgs, function: Option<&str>, witnesses: &[String]) -> Result<(), Failure> {
    let cfg = RunConfig::resolve("classify", args, 6)?;
    let d = cfg.domain().map_err(Failure::usage)?;
    let all = load(&cfg)?;
    let wit: Vec<QFunction> = witnesses.iter().map(|w| find(&all, w).map(|n| n.f.clone())).collect::<Result<_, _>>()?;
    let mut results = Vec::new();
    for n in select(&all, function)? {
        let (classification, inconclusive) = match classify_with_witnesses(&n.f, &wit, &d, cfg.grid, cfg.tol) {
            Ok(c) => (Some(c), None),
            Err(QfcError::Inconclusive { unmasked, total }) => (None, Some(InconclusiveRecord { unmasked, total })),
            Err(e) => return Err(e.into()),
        };
        results.push(ClassifiedFunction {
            name: n.name.clone(),
            expression: n.f.to_string(),
            inconclusive,
            classification,
        });
    }
    let text = match cfg.format {
        Format::Json => to_json(&cfg, ClassifyBody { functions: &results }),
        Format::Csv => csv_string(|w| {
            write_csv_header(w, &["function", "label"])?;
            for r in &results {
                if let Some(c) = &r.classification {
                    for rep in [&c.eq1, &c.inverse_eq1] {
                        write_csv_rows(w, &[&r.name, c.label.name()], rep)?;
                    }
                }
            }
            Ok(())
        }),
        Format::Text => {
            let mut out = String::new();
            for r in &results {
                match (&r.classification, &r.inconclusive) {
                    (Some(c), _) => {
                        let _ = writeln!(out, "{}: {}", r.name, c.label);
                        report_line(&mut out, &c.eq1);
                        report_line(&mut out, &c.inverse_eq1);
                        if !c.inverse_eq1.passed && c.eq1.passed {
                            let _ = writeln!(out, "  inverse residual failure: f^-1 is not hyperholomorphic");
                        }
                        for w in &c.witnesses {
                            let _ = writeln!(
                                out,
                                "  witness {}: sum {} left {} right {}",
                                w.witness, w.sum, w.product_left, w.product_right
                            );
                        }
                    }
                    (None, Some(i)) => {
                        let _ = writeln!(out, "{}: inconclusive ({} of {} points unmasked)", r.name, i.unmasked, i.total);
                    }
                    (None, None) => unreachable!(),
                }
            }
            out
        }
    };
    emit(&cfg, &text)?;
    match results.iter().find_map(|r| r.inconclusive.as_ref().map(|i| (&r.name, i))) {
        Some((name, i)) => Err(Failure {
            code: 3,
            message: format!("{name}: inconclusive, only {} of {} points unmasked", i.unmasked, i.total),
        }),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct ResidualRecord {
    function: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    partner: Option<String>,
    #[serde(flatten)]
    report: ResidualReport,
}

#[derive(Serialize)]
struct ResidualsBody<'a> {
    reports: &'a [ResidualRecord],
}

pub fn residuals(
    args: &CommonArgs,
    system: &str,
    function: Option<&str>,
    partner: Option<&str>,
) -> Result<(), Failure> {
    let cfg = RunConfig::resolve("residuals", args, 6)?;
    let d = cfg.domain().map_err(Failure::usage)?;
    let sys = SystemName::from_name(system).ok_or_else(|| {
        let names: Vec<&str> = SystemName::ALL.iter().map(|s| s.name()).collect();
        Failure::usage(format!("unknown system {system:?}; expected one of {}", names.join(", ")))
    })?;
    let all = load(&cfg)?;
    let g = match (sys.arity(), partner) {
        (2, None) => return Err(Failure::usage(format!("system {sys} needs --partner"))),
        (2, Some(p)) => Some(find(&all, p)?),
        (_, Some(_)) => return Err(Failure::usage(format!("system {sys} takes one function"))),
        _ => None,
    };
    let mut records = Vec::new();
    for n in select(&all, function)? {
        let report = residual_report(sys, &n.f, g.map(|g| &g.f), &d, cfg.grid, cfg.tol)?;
        records.push(ResidualRecord { function: n.name.clone(), partner: g.map(|g| g.name.clone()), report });
    }
    let text = match cfg.format {
        Format::Json => to_json(&cfg, ResidualsBody { reports: &records }),
        Format::Csv => csv_string(|w| {
            write_csv_header(w, &["function", "partner"])?;
            for r in &records {
                write_csv_rows(w, &[&r.function, r.partner.as_deref().unwrap_or("")], &r.report)?;
            }
            Ok(())
        }),
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                match &r.partner {
                    Some(p) => { let _ = writeln!(out, "{} with {p}:", r.function); }
                    None => { let _ = writeln!(out, "{}:", r.function); }
                }
                report_line(&mut out, &r.report);
            }
            out
        }
    };
    emit(&cfg, &text)?;
    let failed: Vec<&str> = records.iter().filter(|r| !r.report.passed).map(|r| r.function.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::failed(format!("{sys} exceeds tol {:e} for {}", cfg.tol, failed.join(", "))))
    }
}

#[derive(Serialize)]
struct SuiteBody<'a> {
    suite: &'a SuiteReport,
}

fn suite_table(r: &SuiteReport) -> String {
    let mut out = String::new();
    for item in &r.items {
        let tag = if item.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{tag}  {:<26} worst {:.3e}  ({} checks, {} failed)",
            item.name,
            item.worst,
            item.checks.len(),
            item.failures
        );
        for c in item.checks.iter().filter(|c| !c.passed) {
            let what = match (c.bound, c.value, &c.detail) {
                (Bound::Label, _, Some(d)) => d.clone(),
                (Bound::AtLeast, Some(v), _) => format!("{v:.3e} < {:.1e}", c.threshold),
                (_, Some(v), _) => format!("{v:.3e} > {:.1e}", c.threshold),
                _ => format!("no unmasked points ({} masked)", c.masked),
            };
            let _ = writeln!(out, "        {}: {what}", c.name);
        }
    }
    let passed = r.items.iter().filter(|i| i.passed).count();
    let _ = writeln!(out, "{passed}/{} items passed", r.items.len());
    out
}

pub fn verify_paper(args: &CommonArgs, samples: Option<usize>) -> Result<(), Failure> {
    let cfg = RunConfig::resolve("verify-paper", args, 6)?;
    let suite_cfg = SuiteConfig {
        tol: cfg.tol,
        grid_n: cfg.grid,
        domain: cfg.domain().map_err(Failure::usage)?,
        seed: cfg.seed,
        samples: samples.unwrap_or(SuiteConfig::default().samples),
    };
    let report = run_suite(&suite_cfg)?;
    let table = suite_table(&report);
    let text = match cfg.format {
        Format::Json => to_json(&cfg, SuiteBody { suite: &report }),
        Format::Csv => csv_string(|w| {
            w.write_record(["item", "check", "bound", "threshold", "value", "evaluated", "masked", "passed"])?;
            for item in &report.items {
                for c in &item.checks {
                    let bound = match c.bound {
                        Bound::AtMost => "at-most",
                        Bound::AtLeast => "at-least",
                        Bound::Label => "label",
                    };
                    let value = match (c.value, &c.detail) {
                        (Some(v), _) => v.to_string(),
                        (None, Some(d)) => d.clone(),
                        _ => String::new(),
                    };
                    w.write_record([
                        item.name.clone(),
                        c.name.clone(),
                        bound.into(),
                        c.threshold.to_string(),
                        value,
                        c.evaluated.to_string(),
                        c.masked.to_string(),
                        c.passed.to_string(),
                    ])?;
                }
            }
            Ok(())
        }),
        Format::Text => table.clone(),
    };
    emit(&cfg, &text)?;
    if cfg.format != Format::Text || cfg.out.is_some() {
        eprint!("{table}");
    }
    match report.failed().map(|i| i.worst).reduce(f64::max) {
        None => Ok(()),
        Some(worst) => Err(Failure::failed(format!("suite failed; worst residual {worst:.3e}"))),
    }
}

#[derive(Serialize)]
struct ZeroRecord {
    name: String,
    expression: String,
    clusters: Vec<ZeroCluster>,
}

#[derive(Serialize)]
struct ZeroBody<'a> {
    /// Threshold actually used for `|f1|` and `|f2|`.
    zero_tol: f64,
    functions: &'a [ZeroRecord],
}

pub fn zero_set(args: &CommonArgs, function: Option<&str>) -> Result<(), Failure> {
    let cfg = RunConfig::resolve("zero-set", args, 9)?;
    let d = cfg.domain().map_err(Failure::usage)?;
    // Without an explicit tolerance, accept values as small as one grid step.
    let tol = match cfg.tol_explicit {
        true => cfg.tol,
        false => d.spacing(cfg.grid).into_iter().fold(0.0, f64::max),
    };
    let all = load(&cfg)?;
    let mut records = Vec::new();
    for n in select(&all, function)? {
        records.push(ZeroRecord {
            name: n.name.clone(),
            expression: n.f.to_string(),
            clusters: zero_set_scan(&n.f, &d, cfg.grid, tol)?,
        });
    }
    let text = match cfg.format {
        Format::Json => to_json(&cfg, ZeroBody { zero_tol: tol, functions: &records }),
        Format::Csv => csv_string(|w| {
            w.write_record(["function", "cluster", "x1", "y1", "x2", "y2"])?;
            for r in &records {
                for (k, c) in r.clusters.iter().enumerate() {
                    for p in &c.points {
                        let mut row = vec![r.name.clone(), k.to_string()];
                        row.extend(p.iter().map(|v| v.to_string()));
                        w.write_record(row)?;
                    }
                }
            }
            Ok(())
        }),
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                let total: usize = r.clusters.iter().map(|c| c.points.len()).sum();
                let _ = writeln!(out, "{}: {total} grid points in {} clusters (tol {tol:.3e})", r.name, r.clusters.len());
                for (k, c) in r.clusters.iter().enumerate() {
                    let _ = writeln!(out, "  cluster {k}: {} points, centroid {}", c.points.len(), fmt_point(&c.centroid));
                }
            }
            out
        }
    };
    emit(&cfg, &text)
}

#[derive(Serialize)]
struct OrderRecord {
    name: String,
    expression: String,
    estimate: OrderEstimate,
}

#[derive(Serialize)]
struct OrderBody<'a> {
    functions: &'a [OrderRecord],
}

pub fn order(args: &CommonArgs, function: Option<&str>, at: Option<Vec<f64>>, kind: Kind) -> Result<(), Failure> {
    let cfg = RunConfig::resolve("order", args, 6)?;
    let q = match at {
        Some(v) => Point4::from_coords(<[f64; 4]>::try_from(v.as_slice()).map_err(|_| Failure::usage("--at needs 4 numbers"))?),
        None => Point4::ORIGIN,
    };
    let kind = match kind {
        Kind::Zero => OrderKind::Zero,
        Kind::Pole => OrderKind::Pole,
    };
    let all = load(&cfg)?;
    let mut records = Vec::new();
    for n in select(&all, function)? {
        records.push(OrderRecord {
            name: n.name.clone(),
            expression: n.f.to_string(),
            estimate: estimate_order(&n.f, &q, kind)?,
        });
    }
    let text = match cfg.format {
        Format::Json => to_json(&cfg, OrderBody { functions: &records }),
        Format::Csv => csv_string(|w| {
            w.write_record(["function", "kind", "x1", "y1", "x2", "y2", "order", "f1", "f2"])?;
            for r in &records {
                let e = &r.estimate;
                let mut row = vec![r.name.clone(), format!("{:?}", e.kind).to_lowercase()];
                row.extend(e.location.iter().map(|v| v.to_string()));
                row.push(e.order.to_string());
                row.extend(e.per_component.iter().map(|c| c.map(|v| v.to_string()).unwrap_or_else(|| "inf".into())));
                w.write_record(row)?;
            }
            Ok(())
        }),
        Format::Text => {
            let mut out = String::new();
            for r in &records {
                let e = &r.estimate;
                let comp = |c: Option<f64>| c.map(|v| format!("{v:.4}")).unwrap_or_else(|| "inf".into());
                let _ = writeln!(
                    out,
                    "{}: {:?} of order {:.4} (~{}) at {}; components {}, {}",
                    r.name,
                    e.kind,
                    e.order,
                    e.rounded(),
                    fmt_point(&e.location),
                    comp(e.per_component[0]),
                    comp(e.per_component[1])
                );
            }
            out
        }
    };
    emit(&cfg, &text)
}
