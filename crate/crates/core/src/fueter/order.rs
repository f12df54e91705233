//! Numeric order of a zero of `f`, or of the pole of `f^-1`, from log-log
//! slopes along random directions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{QfcError, Result};
use crate::qexpr::{inverse_qf, CExpr, QFunction};
use crate::quaternion::Point4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Zero,
    Pole,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub location: [f64; 4],
    pub kind: OrderKind,
    /// Min of the component orders for a zero, max for a pole.
    pub order: f64,
    /// Per-component orders; `None` when the component vanishes identically
    /// on every sample (infinite order).
    pub per_component: [Option<f64>; 2],
}

impl OrderEstimate {
    /// Order rounded to the nearest half-integer, for display.
    pub fn rounded(&self) -> f64 {
        (self.order * 2.0).round() / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderOptions {
    pub r_max: f64,
    pub r_min: f64,
    pub radii: usize,
    pub directions: usize,
    pub seed: u64,
    /// `f` counts as vanishing at `q` when both `|f_i(q)|` are at most this.
    pub vanish_tol: f64,
}

impl Default for OrderOptions {
    fn default() -> Self {
        OrderOptions {
            r_max: 1e-1,
            r_min: 1e-4,
            radii: 8,
            directions: 16,
            seed: 0,
            vanish_tol: 1e-8,
        }
    }
}

/// Uniform direction on the unit 3-sphere by rejection from the cube.
fn direction(rng: &mut impl Rng) -> [f64; 4] {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

/// Least-squares slope of `log|e|` against `log r`, pooled over directions.
fn slope(e: &CExpr, q: &Point4, radii: &[f64], dirs: &[[f64; 4]]) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for u in dirs {
        for &r in radii {
            let Ok(v) = e.tape().value(&q.offset(r, *u)) else {
                continue;
            };
            let a = v.norm();
            if a > 0.0 && a.is_finite() {
                xs.push(r.ln());
                ys.push(a.ln());
            }
        }
    }
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn estimate_order(f: &QFunction, q: &Point4, kind: OrderKind) -> Result<OrderEstimate> {
    estimate_order_with(f, q, kind, &OrderOptions::default())
}

pub fn estimate_order_with(
    f: &QFunction,
    q: &Point4,
    kind: OrderKind,
    opts: &OrderOptions,
) -> Result<OrderEstimate> {
    if opts.radii < 2 || opts.directions == 0 || !(opts.r_min > 0.0 && opts.r_min < opts.r_max) {
        return Err(QfcError::InvalidArgument("need at least two radii 0 < r_min < r_max and one direction".into()));
    }
    let a1 = f.f1.tape().value(q)?.norm();
    let a2 = f.f2.tape().value(q)?.norm();
    if a1 > opts.vanish_tol || a2 > opts.vanish_tol {
        return Err(QfcError::NotVanishing { at: *q, f1: a1, f2: a2 });
    }
    let ratio = (opts.r_min / opts.r_max).powf(1.0 / (opts.radii - 1) as f64);
    let radii: Vec<f64> = (0..opts.radii).map(|k| opts.r_max * ratio.powi(k as i32)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dirs: Vec<[f64; 4]> = (0..opts.directions).map(|_| direction(&mut rng)).collect();

    let (target, sign) = match kind {
        OrderKind::Zero => (f.clone(), 1.0),
        OrderKind::Pole => (inverse_qf(f), -1.0),
    };
    let per_component = [&target.f1, &target.f2].map(|e| slope(e, q, &radii, &dirs).map(|s| sign * s));
    let finite = per_component.iter().flatten().copied();
    let order = match kind {
        OrderKind::Zero => finite.fold(f64::INFINITY, f64::min),
        OrderKind::Pole => finite.fold(f64::NEG_INFINITY, f64::max),
    };
    if !order.is_finite() {
        return Err(QfcError::InvalidArgument(
            "both components vanish identically near the point".into(),
        ));
    }
    Ok(OrderEstimate {
        location: q.coords(),
        kind,
        order,
        per_component,
    })
}
