//! The built-in verification suite behind `qfc verify-paper`.
//!
//! Every item is a set of checks evaluated at seeded random points of the
//! configured box or on its grid. Items are independent and seeded from
//! `seed` and their index, so reports are reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QfcError, Result};
use crate::fueter::{
    cauchy_fueter, classify, product_rule_check, residual_eq1, residual_inverse_system,
    residual_product_system, residual_real_combined, residual_real_linear_system,
    residual_real_product, residual_sum_pde, Domain, Label, Residual,
};
use crate::qexpr::{inverse_qf, product_qf, sum_qf, QFunction};
use crate::quaternion::Point4;
use crate::samples::{
    conjugate_pair, random_holomorphic_rational, random_point_in, random_polynomial,
    random_real_x_polynomial, real_affine_example, w_power,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub tol: f64,
    pub grid_n: usize,
    pub domain: Domain,
    pub seed: u64,
    /// Random sample points per pointwise check.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            tol: 1e-8,
            grid_n: 6,
            domain: Domain::default(),
            seed: 0,
            samples: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    AtMost,
    AtLeast,
    Label,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub bound: Bound,
    /// Threshold for numeric checks.
    pub threshold: f64,
    /// Largest value for `at-most`, smallest for `at-least`.
    pub value: Option<f64>,
    /// Expected and observed labels for `label` checks.
    pub detail: Option<String>,
    pub evaluated: usize,
    pub masked: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub description: String,
    pub passed: bool,
    pub tol: f64,
    /// Largest value among the `at-most` checks.
    pub worst: f64,
    pub checks: Vec<Check>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub items: Vec<SuiteItem>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failed(&self) -> impl Iterator<Item = &SuiteItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

struct Acc {
    name: String,
    bound: Bound,
    threshold: f64,
    value: Option<f64>,
    evaluated: usize,
    masked: usize,
}

impl Acc {
    fn new(name: impl Into<String>, bound: Bound, threshold: f64) -> Self {
        Acc { name: name.into(), bound, threshold, value: None, evaluated: 0, masked: 0 }
    }

    /// Records one sample; `Ok(None)`, singular points and non-finite values
    /// count as masked.
    fn push(&mut self, v: Result<Option<f64>>) -> Result<()> {
        match v {
            Ok(Some(v)) if v.is_finite() => {
                self.evaluated += 1;
                self.value = Some(match (self.value, self.bound) {
                    (None, _) => v,
                    (Some(w), Bound::AtLeast) => w.min(v),
                    (Some(w), _) => w.max(v),
                });
            }
            Ok(_) | Err(QfcError::Singular(_)) => self.masked += 1,
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn finish(self) -> Check {
        let enough = self.evaluated > 0 && self.evaluated >= self.masked;
        let ok = match (self.bound, self.value) {
            (Bound::AtLeast, Some(v)) => v >= self.threshold,
            (_, Some(v)) => v <= self.threshold,
            _ => false,
        };
        Check {
            name: self.name,
            bound: self.bound,
            threshold: self.threshold,
            value: self.value,
            detail: None,
            evaluated: self.evaluated,
            masked: self.masked,
            passed: enough && ok,
        }
    }
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn point(&mut self) -> Point4 {
        random_point_in(&mut self.rng, &self.cfg.domain)
    }

    fn points(&mut self) -> Vec<Point4> {
        (0..self.cfg.samples).map(|_| self.point()).collect()
    }

    /// `f` is usable at `p`: finite and away from its zero set.
    fn away_from_zeros(&self, f: &QFunction, p: &Point4) -> Result<bool> {
        let v = f.eval(p)?;
        Ok(v.is_finite() && v.norm_sq() >= self.cfg.domain.excluded_threshold)
    }

    /// Max normalized residual of `r(p)`, masked near zeros of `guard`.
    fn residual_check(
        &mut self,
        name: &str,
        guard: &QFunction,
        r: impl Fn(&Point4) -> Result<Residual>,
    ) -> Result<Check> {
        let mut acc = Acc::new(name, Bound::AtMost, self.cfg.tol);
        for p in self.points() {
            acc.push(self.sample(guard, &p, |p| Ok(r(p)?.max_normalized())))?;
        }
        Ok(acc.finish())
    }

    fn sample(&self, guard: &QFunction, p: &Point4, v: impl Fn(&Point4) -> Result<f64>) -> Result<Option<f64>> {
        match self.away_from_zeros(guard, p) {
            Ok(true) => v(p).map(Some),
            Ok(false) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn label(&self, name: &str, f: &QFunction, expected: &[Label]) -> Result<Check> {
        let (observed, evaluated, masked) = match classify(f, &self.cfg.domain, self.cfg.grid_n, self.cfg.tol) {
            Ok(c) => (c.label.name().to_string(), c.eq1.unmasked(), c.eq1.masked.len()),
            Err(QfcError::Inconclusive { unmasked, total }) => ("inconclusive".into(), unmasked, total - unmasked),
            Err(e) => return Err(e),
        };
        let names: Vec<&str> = expected.iter().map(|l| l.name()).collect();
        Ok(Check {
            name: name.into(),
            bound: Bound::Label,
            threshold: self.cfg.tol,
            value: None,
            detail: Some(format!("expected {}, got {observed}", names.join(" or "))),
            evaluated,
            masked,
            passed: names.contains(&observed.as_str()),
        })
    }
}

fn w_hyper() -> &'static [Label] {
    &[Label::WHypermeromorphic, Label::Holomorphic]
}

type ItemFn = fn(&mut Ctx) -> Result<Vec<Check>>;

const ITEMS: [(&str, &str, ItemFn); 8] = [
    (
        "hyperholomorphy-example",
        "the real affine example and its inverse satisfy D f = 0 and classify as w-hypermeromorphic",
        item_example,
    ),
    (
        "product-rule",
        "D(f * g) splits into the two differentiated terms; for real functions of x1, x2 the second is f * D g",
        item_product_rule,
    ),
    (
        "inverse-characterization",
        "the inverse system vanishes exactly when D(f^-1) does; conj(z1) + conj(z2) j is hyperholomorphic with a non-hyperholomorphic inverse",
        item_inverse,
    ),
    (
        "real-linear-system",
        "for real-component f, D f = 0 is the real linear system; real hyperholomorphic samples have hyperholomorphic inverses",
        item_real_linear,
    ),
    (
        "sum-closure",
        "the sum PDE equals 2 N^2 |D(h^-1)| and vanishes for sums of w-hypermeromorphic real pairs and holomorphic pairs",
        item_sum,
    ),
    (
        "product-closure",
        "products of real affine examples satisfy the real product condition and stay w-hypermeromorphic; the product system holds for holomorphic pairs",
        item_product,
    ),
    (
        "real-combined",
        "pairs of real affine examples satisfy the combined real system",
        item_combined,
    ),
    (
        "meromorphic-substructure",
        "random holomorphic rational functions satisfy every residual system; adding the real example keeps D f = 0",
        item_meromorphic,
    ),
];

fn examples() -> [(String, QFunction); 2] {
    [
        ("example(0,0)".into(), real_affine_example(0.0, 0.0)),
        ("example(1,2)".into(), real_affine_example(1.0, 2.0)),
    ]
}

fn item_example(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, f) in examples() {
        let inv = inverse_qf(&f);
        out.push(ctx.residual_check(&format!("eq1 {name}"), &f, |p| residual_eq1(&f, p))?);
        out.push(ctx.residual_check(&format!("eq1 inverse {name}"), &f, |p| residual_eq1(&inv, p))?);
        out.push(ctx.label(&format!("label {name}"), &f, &[Label::WHypermeromorphic])?);
    }
    Ok(out)
}

fn item_product_rule(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let mut gap = Acc::new("gap on random polynomial pairs", Bound::AtMost, ctx.cfg.tol);
    for _ in 0..ctx.cfg.samples {
        let f = random_polynomial(&mut ctx.rng);
        let g = random_polynomial(&mut ctx.rng);
        let p = ctx.point();
        gap.push(product_rule_check(&f, &g, &p).map(|c| Some(c.normalized_gap())))?;
    }
    let mut second = Acc::new("second term is f * D g for real x-polynomials", Bound::AtMost, ctx.cfg.tol);
    for _ in 0..ctx.cfg.samples {
        let f = random_real_x_polynomial(&mut ctx.rng);
        let g = random_real_x_polynomial(&mut ctx.rng);
        let p = ctx.point();
        let v = (|| {
            let c = product_rule_check(&f, &g, &p)?;
            let rhs = f.eval(&p)? * cauchy_fueter(&g, &p)?.value;
            Ok(Some((c.second_term - rhs).modulus() / c.scale))
        })();
        second.push(v)?;
    }
    Ok(vec![gap.finish(), second.finish()])
}

fn item_inverse(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let mut sys = Acc::new("inverse system on holomorphic rationals", Bound::AtMost, ctx.cfg.tol);
    let mut direct = Acc::new("eq1 of the inverse of holomorphic rationals", Bound::AtMost, ctx.cfg.tol);
    for _ in 0..ctx.cfg.samples {
        let f = random_holomorphic_rational(&mut ctx.rng);
        let inv = inverse_qf(&f);
        let p = ctx.point();
        sys.push(ctx.sample(&f, &p, |p| Ok(residual_inverse_system(&f, p)?.max_normalized())))?;
        direct.push(ctx.sample(&f, &p, |p| Ok(residual_eq1(&inv, p)?.max_normalized())))?;
    }
    let f = conjugate_pair();
    let inv = inverse_qf(&f);
    let mut out = vec![sys.finish(), direct.finish()];
    out.push(ctx.residual_check("eq1 conj(z1) + conj(z2) j", &f, |p| residual_eq1(&f, p))?);
    // Both routes must detect the failure at generic points.
    let mut sys_fail = Acc::new("inverse system of conj(z1) + conj(z2) j", Bound::AtLeast, 1e-3);
    let mut direct_fail = Acc::new("|D(f^-1)| of conj(z1) + conj(z2) j", Bound::AtLeast, 1e-3);
    for p in ctx.points() {
        // The inverse is hyperholomorphic on the slice Im z1 = 0.
        if p.coords()[1].abs() < 0.05 {
            continue;
        }
        sys_fail.push(ctx.sample(&f, &p, |p| Ok(residual_inverse_system(&f, p)?.max_raw())))?;
        direct_fail.push(ctx.sample(&f, &p, |p| Ok(cauchy_fueter(&inv, p)?.norm())))?;
    }
    out.push(sys_fail.finish());
    out.push(direct_fail.finish());
    out.push(ctx.label("label conj(z1) + conj(z2) j", &f, &[Label::Hyperholomorphic])?);
    Ok(out)
}

fn real_hyperholomorphic() -> Vec<(String, QFunction)> {
    let mut v: Vec<(String, QFunction)> = examples().into();
    v.push(("w^2".into(), w_power(2)));
    v.push(("w^3".into(), w_power(3)));
    v.push((
        "y1 - y2 j".into(),
        QFunction::parse("(z1 - conj(z1))/(2*i) - (z2 - conj(z2))/(2*i)*j").expect("sample parses"),
    ));
    v
}

fn item_real_linear(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, f) in real_hyperholomorphic() {
        out.push(ctx.residual_check(&format!("real linear system {name}"), &f, |p| {
            residual_real_linear_system(&f, p)
        })?);
        out.push(ctx.label(&format!("label {name}"), &f, w_hyper())?);
    }
    // Each equation of the linear system is an equation of D f = 0 in disguise.
    let mut agree = Acc::new("linear system matches eq1 on random real polynomials", Bound::AtMost, ctx.cfg.tol);
    for _ in 0..ctx.cfg.samples {
        let f = random_real_x_polynomial(&mut ctx.rng);
        let p = ctx.point();
        let v = (|| {
            let a = residual_eq1(&f, &p)?;
            let b = residual_real_linear_system(&f, &p)?;
            let d = (a.raw[0] - b.raw[1]).abs().max((a.raw[1] - b.raw[0]).abs());
            Ok(Some(d / a.scale[0]))
        })();
        agree.push(v)?;
    }
    out.push(agree.finish());
    Ok(out)
}

fn item_sum(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let reals = real_hyperholomorphic();
    let mut out = Vec::new();
    let mut pde = Acc::new("sum PDE for sums of real affine examples", Bound::AtMost, ctx.cfg.tol);
    let [(_, e0), (_, e12)] = examples();
    let sums = [sum_qf(&e0, &e12), sum_qf(&e12, &e12), sum_qf(&e0, &e0.scale(-0.5))];
    for h in &sums {
        for p in ctx.points() {
            pde.push(ctx.sample(h, &p, |p| Ok(residual_sum_pde(h, p)?.max_normalized())))?;
        }
    }
    out.push(pde.finish());
    let mut holo = Acc::new("sum PDE for sums of holomorphic rationals", Bound::AtMost, ctx.cfg.tol);
    for _ in 0..ctx.cfg.samples {
        let h = sum_qf(&random_holomorphic_rational(&mut ctx.rng), &random_holomorphic_rational(&mut ctx.rng));
        let p = ctx.point();
        holo.push(ctx.sample(&h, &p, |p| Ok(residual_sum_pde(&h, p)?.max_normalized())))?;
    }
    out.push(holo.finish());
    // Cross-check against the direct route on sums that are not w-hypermeromorphic.
    let mut cross = Acc::new("sum PDE equals 2 N^2 |D(h^-1)|", Bound::AtMost, ctx.cfg.tol);
    for (_, f) in &reals {
        let h = sum_qf(f, &conjugate_pair());
        let inv = inverse_qf(&h);
        for p in ctx.points() {
            cross.push(ctx.sample(&h, &p, |p| {
                let r = residual_sum_pde(&h, p)?;
                let n = h.eval(p)?.norm_sq();
                let direct = 2.0 * n * n * cauchy_fueter(&inv, p)?.norm();
                Ok((r.raw[0] - direct).abs() / r.scale[0])
            }))?;
        }
    }
    out.push(cross.finish());
    for (i, h) in sums.iter().enumerate() {
        out.push(ctx.label(&format!("label sum {}", i + 1), h, w_hyper())?);
    }
    Ok(out)
}

fn item_product(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let [(_, e0), (_, e12)] = examples();
    let pairs = [(e0.clone(), e12.clone()), (e12.clone(), e0.clone()), (e12.clone(), e12.clone())];
    let mut out = Vec::new();
    let mut real = Acc::new("real product condition for example pairs", Bound::AtMost, ctx.cfg.tol);
    for (f, g) in &pairs {
        let fg = product_qf(f, g);
        for p in ctx.points() {
            real.push(ctx.sample(&fg, &p, |p| Ok(residual_real_product(f, g, p)?.max_normalized())))?;
        }
    }
    out.push(real.finish());
    for (i, (f, g)) in pairs.iter().enumerate() {
        out.push(ctx.label(&format!("label product {}", i + 1), &product_qf(f, g), w_hyper())?);
    }
    let mut sys = Acc::new("product system for holomorphic rational pairs", Bound::AtMost, ctx.cfg.tol);
    for _ in 0..ctx.cfg.samples {
        let f = random_holomorphic_rational(&mut ctx.rng);
        let g = random_holomorphic_rational(&mut ctx.rng);
        let fg = product_qf(&f, &g);
        let p = ctx.point();
        sys.push(ctx.sample(&fg, &p, |p| Ok(residual_product_system(&f, &g, p)?.max_normalized())))?;
    }
    out.push(sys.finish());
    Ok(out)
}

fn item_combined(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let mut acc = Acc::new("combined real system for example pairs", Bound::AtMost, ctx.cfg.tol);
    let fs = [(0.0, 0.0), (1.0, 2.0), (-0.5, 3.0)].map(|(a, b)| real_affine_example(a, b));
    for f in &fs {
        for g in &fs {
            let fg = product_qf(f, g);
            for p in ctx.points() {
                acc.push(ctx.sample(&fg, &p, |p| Ok(residual_real_combined(f, g, p)?.max_normalized())))?;
            }
        }
    }
    Ok(vec![acc.finish()])
}

fn item_meromorphic(ctx: &mut Ctx) -> Result<Vec<Check>> {
    let tol = ctx.cfg.tol;
    let mut eq1 = Acc::new("eq1", Bound::AtMost, tol);
    let mut inv = Acc::new("inverse system", Bound::AtMost, tol);
    let mut sum = Acc::new("sum PDE of f + g", Bound::AtMost, tol);
    let mut prod = Acc::new("product system of (f, g)", Bound::AtMost, tol);
    let mut mixed = Acc::new("eq1 of f + real example", Bound::AtMost, tol);
    let e = real_affine_example(1.0, 2.0);
    for _ in 0..ctx.cfg.samples {
        let f = random_holomorphic_rational(&mut ctx.rng);
        let g = random_holomorphic_rational(&mut ctx.rng);
        let (h, fg, fe) = (sum_qf(&f, &g), product_qf(&f, &g), sum_qf(&f, &e));
        let p = ctx.point();
        eq1.push(ctx.sample(&f, &p, |p| Ok(residual_eq1(&f, p)?.max_normalized())))?;
        inv.push(ctx.sample(&f, &p, |p| Ok(residual_inverse_system(&f, p)?.max_normalized())))?;
        sum.push(ctx.sample(&h, &p, |p| Ok(residual_sum_pde(&h, p)?.max_normalized())))?;
        prod.push(ctx.sample(&fg, &p, |p| Ok(residual_product_system(&f, &g, p)?.max_normalized())))?;
        mixed.push(ctx.sample(&fe, &p, |p| Ok(residual_eq1(&fe, p)?.max_normalized())))?;
    }
    Ok(vec![eq1.finish(), inv.finish(), sum.finish(), prod.finish(), mixed.finish()])
}

/// Names of the suite items, in report order.
pub fn item_names() -> Vec<&'static str> {
    ITEMS.iter().map(|(n, _, _)| *n).collect()
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    if !(cfg.tol > 0.0) || cfg.grid_n < 2 || cfg.samples == 0 {
        return Err(QfcError::InvalidArgument("need tol > 0, grid >= 2 and at least one sample".into()));
    }
    let items = ITEMS
        .par_iter()
        .enumerate()
        .map(|(k, (name, description, run))| {
            let mut ctx = Ctx { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ ((k as u64) << 32)) };
            let checks = run(&mut ctx)?;
            let failures = checks.iter().filter(|c| !c.passed).count();
            let worst = checks
                .iter()
                .filter(|c| c.bound == Bound::AtMost)
                .filter_map(|c| c.value)
                .fold(0.0, f64::max);
            Ok(SuiteItem {
                name: name.to_string(),
                description: description.to_string(),
                passed: failures == 0,
                tol: cfg.tol,
                worst,
                checks,
                failures,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = items.iter().all(|i| i.passed);
    Ok(SuiteReport { config: cfg.clone(), items, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let r = run_suite(&SuiteConfig::default()).unwrap();
        if let Some(i) = r.failed().next() {
            panic!("{}: {:#?}", i.name, i.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
        assert_eq!(r.items.len(), ITEMS.len());
    }
}
