use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{QfcError, Result};
use crate::quaternion::{Point4, Quaternion};
use crate::wirtinger::tape::Tape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Z1,
    Z2,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Z1 => "z1",
            Var::Z2 => "z2",
        }
    }

    pub fn value(self, p: &Point4) -> Complex64 {
        match self {
            Var::Z1 => p.z1,
            Var::Z2 => p.z2,
        }
    }
}

/// Expression tree for H-valued functions of `(z1, z2)`.
///
/// Children are shared through `Arc`, so lowering can reuse subtrees without
/// copying them. `Mul` is the quaternionic (order-preserving) product and
/// `Div(p, q)` means `p * rinv(q)`.
#[derive(Debug, Clone, PartialEq)]
pub enum QExpr {
    Var(Var),
    ConjVar(Var),
    UnitI,
    UnitJ,
    Real(f64),
    Add(Arc<QExpr>, Arc<QExpr>),
    Sub(Arc<QExpr>, Arc<QExpr>),
    Neg(Arc<QExpr>),
    Mul(Arc<QExpr>, Arc<QExpr>),
    Div(Arc<QExpr>, Arc<QExpr>),
    Pow(Arc<QExpr>, u32),
    Conj(Arc<QExpr>),
}

impl QExpr {
    pub fn add(a: QExpr, b: QExpr) -> QExpr {
        QExpr::Add(Arc::new(a), Arc::new(b))
    }

    pub fn sub(a: QExpr, b: QExpr) -> QExpr {
        QExpr::Sub(Arc::new(a), Arc::new(b))
    }

    pub fn mul(a: QExpr, b: QExpr) -> QExpr {
        QExpr::Mul(Arc::new(a), Arc::new(b))
    }

    pub fn div(a: QExpr, b: QExpr) -> QExpr {
        QExpr::Div(Arc::new(a), Arc::new(b))
    }

    pub fn neg(a: QExpr) -> QExpr {
        QExpr::Neg(Arc::new(a))
    }

    pub fn pow(a: QExpr, n: u32) -> QExpr {
        QExpr::Pow(Arc::new(a), n)
    }

    pub fn conj(a: QExpr) -> QExpr {
        QExpr::Conj(Arc::new(a))
    }

    pub fn contains_j(&self) -> bool {
        match self {
            QExpr::UnitJ => true,
            QExpr::Var(_) | QExpr::ConjVar(_) | QExpr::UnitI | QExpr::Real(_) => false,
            QExpr::Add(a, b) | QExpr::Sub(a, b) | QExpr::Mul(a, b) | QExpr::Div(a, b) => {
                a.contains_j() || b.contains_j()
            }
            QExpr::Neg(a) | QExpr::Pow(a, _) | QExpr::Conj(a) => a.contains_j(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            QExpr::Var(_) | QExpr::ConjVar(_) | QExpr::UnitI | QExpr::UnitJ | QExpr::Real(_) => 1,
            QExpr::Add(a, b) | QExpr::Sub(a, b) | QExpr::Mul(a, b) | QExpr::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
            QExpr::Neg(a) | QExpr::Pow(a, _) | QExpr::Conj(a) => 1 + a.depth(),
        }
    }

    /// Evaluates the raw tree with quaternion arithmetic.
    ///
    /// This is independent of lowering and serves as its reference.
    pub fn eval_quaternion(&self, p: &Point4) -> Result<Quaternion> {
        Ok(match self {
            QExpr::Var(v) => Quaternion::complex(v.value(p)),
            QExpr::ConjVar(v) => Quaternion::complex(v.value(p).conj()),
            QExpr::UnitI => Quaternion::complex(Complex64::i()),
            QExpr::UnitJ => Quaternion::J,
            QExpr::Real(c) => Quaternion::real(*c),
            QExpr::Add(a, b) => a.eval_quaternion(p)? + b.eval_quaternion(p)?,
            QExpr::Sub(a, b) => a.eval_quaternion(p)? - b.eval_quaternion(p)?,
            QExpr::Neg(a) => -a.eval_quaternion(p)?,
            QExpr::Mul(a, b) => a.eval_quaternion(p)? * b.eval_quaternion(p)?,
            QExpr::Div(a, b) => {
                let d = b.eval_quaternion(p)?;
                let inv = d.rinv().map_err(|_| QfcError::Singular(*p))?;
                a.eval_quaternion(p)? * inv
            }
            QExpr::Pow(a, n) => a.eval_quaternion(p)?.pow(*n),
            QExpr::Conj(a) => a.eval_quaternion(p)?.conj(),
        })
    }
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print(self))
    }
}

/// A complex-valued expression: a [`QExpr`] without any `j` node.
///
/// The compiled evaluation tape is built lazily and cached.
#[derive(Clone)]
pub struct CExpr {
    expr: Arc<QExpr>,
    tape: Arc<OnceLock<Tape>>,
}

impl fmt::Debug for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CExpr({})", self.expr)
    }
}

impl fmt::Display for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

impl PartialEq for CExpr {
    fn eq(&self, other: &Self) -> bool {
        self.expr == other.expr
    }
}

impl CExpr {
    pub fn new(e: QExpr) -> Result<Self> {
        if e.contains_j() {
            return Err(QfcError::InvalidArgument(format!(
                "complex component contains the unit j: {e}"
            )));
        }
        Ok(CExpr::wrap(Arc::new(e)))
    }

    fn wrap(expr: Arc<QExpr>) -> Self {
        CExpr {
            expr,
            tape: Arc::new(OnceLock::new()),
        }
    }

    pub fn expr(&self) -> &QExpr {
        &self.expr
    }

    pub(crate) fn arc(&self) -> &Arc<QExpr> {
        &self.expr
    }

    pub fn tape(&self) -> &Tape {
        self.tape.get_or_init(|| Tape::compile(self))
    }

    pub fn var(v: Var) -> Self {
        CExpr::wrap(Arc::new(QExpr::Var(v)))
    }

    pub fn conj_var(v: Var) -> Self {
        CExpr::wrap(Arc::new(QExpr::ConjVar(v)))
    }

    pub fn unit_i() -> Self {
        CExpr::wrap(Arc::new(QExpr::UnitI))
    }

    pub fn real(c: f64) -> Self {
        CExpr::wrap(Arc::new(QExpr::Real(c)))
    }

    pub fn zero() -> Self {
        CExpr::real(0.0)
    }

    pub fn one() -> Self {
        CExpr::real(1.0)
    }

    /// `a + b i` as an expression, folding away zero parts.
    pub fn complex(z: Complex64) -> Self {
        let re = CExpr::real(z.re);
        if z.im == 0.0 {
            return re;
        }
        let im = CExpr::real(z.im).mul(&CExpr::unit_i());
        re.add(&im)
    }

    pub fn as_real(&self) -> Option<f64> {
        match *self.expr {
            QExpr::Real(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_real() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_real() == Some(1.0)
    }

    pub fn add(&self, other: &CExpr) -> CExpr {
        match (self.as_real(), other.as_real()) {
            (Some(a), Some(b)) => CExpr::real(a + b),
            (Some(a), _) if a == 0.0 => other.clone(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => CExpr::wrap(Arc::new(QExpr::Add(self.expr.clone(), other.expr.clone()))),
        }
    }

    pub fn sub(&self, other: &CExpr) -> CExpr {
        match (self.as_real(), other.as_real()) {
            (Some(a), Some(b)) => CExpr::real(a - b),
            (Some(a), _) if a == 0.0 => other.neg(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => CExpr::wrap(Arc::new(QExpr::Sub(self.expr.clone(), other.expr.clone()))),
        }
    }

    pub fn mul(&self, other: &CExpr) -> CExpr {
        match (self.as_real(), other.as_real()) {
            (Some(a), Some(b)) => CExpr::real(a * b),
            (Some(a), _) | (_, Some(a)) if a == 0.0 => CExpr::zero(),
            (Some(a), _) if a == 1.0 => other.clone(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => CExpr::wrap(Arc::new(QExpr::Mul(self.expr.clone(), other.expr.clone()))),
        }
    }

    pub fn div(&self, other: &CExpr) -> CExpr {
        match (self.as_real(), other.as_real()) {
            (Some(a), Some(b)) if b != 0.0 => CExpr::real(a / b),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => CExpr::wrap(Arc::new(QExpr::Div(self.expr.clone(), other.expr.clone()))),
        }
    }

    pub fn neg(&self) -> CExpr {
        match &*self.expr {
            QExpr::Real(c) => CExpr::real(-c),
            QExpr::Neg(inner) => CExpr::wrap(inner.clone()),
            _ => CExpr::wrap(Arc::new(QExpr::Neg(self.expr.clone()))),
        }
    }

    pub fn pow(&self, n: u32) -> CExpr {
        match (self.as_real(), n) {
            (_, 1) => self.clone(),
            (Some(c), _) => CExpr::real(c.powi(n as i32)),
            _ => CExpr::wrap(Arc::new(QExpr::Pow(self.expr.clone(), n))),
        }
    }

    pub fn conj(&self) -> CExpr {
        match &*self.expr {
            QExpr::Real(_) => self.clone(),
            QExpr::Var(v) => CExpr::conj_var(*v),
            QExpr::ConjVar(v) => CExpr::var(*v),
            QExpr::Conj(inner) => CExpr::wrap(inner.clone()),
            _ => CExpr::wrap(Arc::new(QExpr::Conj(self.expr.clone()))),
        }
    }

    /// Plain recursive evaluation, memoized on shared subtrees.
    ///
    /// This path shares no code with the tape interpreter, so the
    /// finite-difference oracle built on it stays independent of the AD.
    pub fn eval(&self, p: &Point4, pole_eps: f64) -> Result<Complex64> {
        let mut memo = HashMap::new();
        eval_rec(&self.expr, p, pole_eps, &mut memo)
    }
}

fn eval_rec(
    e: &Arc<QExpr>,
    p: &Point4,
    pole_eps: f64,
    memo: &mut HashMap<*const QExpr, Complex64>,
) -> Result<Complex64> {
    let key = Arc::as_ptr(e);
    if let Some(v) = memo.get(&key) {
        return Ok(*v);
    }
    let v = match &**e {
        QExpr::Var(v) => v.value(p),
        QExpr::ConjVar(v) => v.value(p).conj(),
        QExpr::UnitI => Complex64::i(),
        QExpr::UnitJ => unreachable!("CExpr holds no j node"),
        QExpr::Real(c) => Complex64::new(*c, 0.0),
        QExpr::Add(a, b) => eval_rec(a, p, pole_eps, memo)? + eval_rec(b, p, pole_eps, memo)?,
        QExpr::Sub(a, b) => eval_rec(a, p, pole_eps, memo)? - eval_rec(b, p, pole_eps, memo)?,
        QExpr::Neg(a) => -eval_rec(a, p, pole_eps, memo)?,
        QExpr::Mul(a, b) => eval_rec(a, p, pole_eps, memo)? * eval_rec(b, p, pole_eps, memo)?,
        QExpr::Div(a, b) => {
            let num = eval_rec(a, p, pole_eps, memo)?;
            let den = eval_rec(b, p, pole_eps, memo)?;
            if !(den.norm_sqr() >= pole_eps) {
                return Err(QfcError::Singular(*p));
            }
            num / den
        }
        QExpr::Pow(a, n) => eval_rec(a, p, pole_eps, memo)?.powu(*n),
        QExpr::Conj(a) => eval_rec(a, p, pole_eps, memo)?.conj(),
    };
    if !v.is_finite() {
        return Err(QfcError::Singular(*p));
    }
    memo.insert(key, v);
    Ok(v)
}
