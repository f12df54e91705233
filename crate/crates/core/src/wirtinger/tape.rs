//! Linear instruction tape for a [`CExpr`] DAG.
//!
//! Shared subtrees (lowering reuses components heavily) are emitted once, so
//! evaluation cost is linear in the number of distinct nodes.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{QfcError, Result};
use crate::qexpr::ast::{CExpr, QExpr, Var};
use crate::quaternion::Point4;
use crate::wirtinger::jet::WirtingerJet;

/// Denominators with squared modulus below this are treated as poles.
pub const DEFAULT_POLE_EPS: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Z(Var),
    ZBar(Var),
    I,
    Const(f64),
    Add(usize, usize),
    Sub(usize, usize),
    Neg(usize),
    Mul(usize, usize),
    Div(usize, usize),
    Pow(usize, u32),
    Conj(usize),
}

#[derive(Debug, Clone)]
pub struct Tape {
    ops: Vec<Op>,
}

/// Number types the tape can be evaluated over.
trait TapeNum: Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<Output = Self> + std::ops::Neg<Output = Self> {
    fn var(v: Var, p: &Point4) -> Self;
    fn conj_var(v: Var, p: &Point4) -> Self;
    fn constant(c: Complex64) -> Self;
    fn value(&self) -> Complex64;
    fn div(self, rhs: Self) -> Self;
    fn powu(self, n: u32) -> Self;
    fn conj(self) -> Self;
    fn finite(&self) -> bool;
}

impl TapeNum for Complex64 {
    fn var(v: Var, p: &Point4) -> Self {
        v.value(p)
    }
    fn conj_var(v: Var, p: &Point4) -> Self {
        v.value(p).conj()
    }
    fn constant(c: Complex64) -> Self {
        c
    }
    fn value(&self) -> Complex64 {
        *self
    }
    fn div(self, rhs: Self) -> Self {
        self / rhs
    }
    fn powu(self, n: u32) -> Self {
        Complex64::powu(&self, n)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl TapeNum for WirtingerJet {
    fn var(v: Var, p: &Point4) -> Self {
        match v {
            Var::Z1 => WirtingerJet::z1(p.z1),
            Var::Z2 => WirtingerJet::z2(p.z2),
        }
    }
    fn conj_var(v: Var, p: &Point4) -> Self {
        match v {
            Var::Z1 => WirtingerJet::z1bar(p.z1.conj()),
            Var::Z2 => WirtingerJet::z2bar(p.z2.conj()),
        }
    }
    fn constant(c: Complex64) -> Self {
        WirtingerJet::constant(c)
    }
    fn value(&self) -> Complex64 {
        self.val
    }
    fn div(self, rhs: Self) -> Self {
        WirtingerJet::div(self, rhs)
    }
    fn powu(self, n: u32) -> Self {
        WirtingerJet::powu(self, n)
    }
    fn conj(self) -> Self {
        WirtingerJet::conj(self)
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl Tape {
    pub fn compile(e: &CExpr) -> Tape {
        let mut ops = Vec::new();
        let mut seen: HashMap<*const QExpr, usize> = HashMap::new();
        emit(e.arc(), &mut ops, &mut seen);
        Tape { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn run<T: TapeNum>(&self, p: &Point4, pole_eps: f64) -> Result<T> {
        let mut slots: Vec<T> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Z(v) => T::var(v, p),
                Op::ZBar(v) => T::conj_var(v, p),
                Op::I => T::constant(Complex64::i()),
                Op::Const(c) => T::constant(Complex64::new(c, 0.0)),
                Op::Add(a, b) => slots[a] + slots[b],
                Op::Sub(a, b) => slots[a] - slots[b],
                Op::Neg(a) => -slots[a],
                Op::Mul(a, b) => slots[a] * slots[b],
                Op::Div(a, b) => {
                    let den = slots[b];
                    if !(den.value().norm_sqr() >= pole_eps) {
                        return Err(QfcError::Singular(*p));
                    }
                    slots[a].div(den)
                }
                Op::Pow(a, n) => slots[a].powu(n),
                Op::Conj(a) => slots[a].conj(),
            };
            if !v.finite() {
                return Err(QfcError::Singular(*p));
            }
            slots.push(v);
        }
        Ok(*slots.last().expect("tape is never empty"))
    }

    pub fn value(&self, p: &Point4) -> Result<Complex64> {
        self.run(p, DEFAULT_POLE_EPS)
    }

    pub fn value_with(&self, p: &Point4, pole_eps: f64) -> Result<Complex64> {
        self.run(p, pole_eps)
    }

    pub fn jet(&self, p: &Point4) -> Result<WirtingerJet> {
        self.run(p, DEFAULT_POLE_EPS)
    }

    pub fn jet_with(&self, p: &Point4, pole_eps: f64) -> Result<WirtingerJet> {
        self.run(p, pole_eps)
    }
}

fn emit(e: &Arc<QExpr>, ops: &mut Vec<Op>, seen: &mut HashMap<*const QExpr, usize>) -> usize {
    let key = Arc::as_ptr(e);
    if let Some(&i) = seen.get(&key) {
        return i;
    }
    let op = match &**e {
        QExpr::Var(v) => Op::Z(*v),
        QExpr::ConjVar(v) => Op::ZBar(*v),
        QExpr::UnitI => Op::I,
        QExpr::UnitJ => unreachable!("CExpr holds no j node"),
        QExpr::Real(c) => Op::Const(*c),
        QExpr::Add(a, b) => Op::Add(emit(a, ops, seen), emit(b, ops, seen)),
        QExpr::Sub(a, b) => Op::Sub(emit(a, ops, seen), emit(b, ops, seen)),
        QExpr::Neg(a) => Op::Neg(emit(a, ops, seen)),
        QExpr::Mul(a, b) => Op::Mul(emit(a, ops, seen), emit(b, ops, seen)),
        QExpr::Div(a, b) => Op::Div(emit(a, ops, seen), emit(b, ops, seen)),
        QExpr::Pow(a, n) => Op::Pow(emit(a, ops, seen), *n),
        QExpr::Conj(a) => Op::Conj(emit(a, ops, seen)),
    };
    ops.push(op);
    let idx = ops.len() - 1;
    seen.insert(key, idx);
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexpr::QFunction;

    #[test]
    fn shared_subtrees_are_emitted_once() {
        let f = QFunction::parse("(z1 + z2*j)^4").unwrap();
        let tape = f.f1.tape();
        // Without sharing the tree would have hundreds of nodes.
        assert!(tape.len() < 60, "tape has {} ops", tape.len());
    }

    #[test]
    fn pole_is_reported() {
        let f = QFunction::parse("1 / z1").unwrap();
        let p = Point4::ORIGIN;
        assert_eq!(f.f1.tape().value(&p), Err(QfcError::Singular(p)));
        assert_eq!(f.f1.tape().jet(&p), Err(QfcError::Singular(p)));
    }
}
