//! Innermost-closed-first evaluation over an omega model.
//!
//! A subformula with one free variable evaluates to a sequence indexed by
//! the individual assigned to that variable; a closed one to a constant. A
//! quantifier turns the sequence of its body into a constant through the
//! chain infimum or supremum.

use crate::formula::Formula;
use crate::rational::Rational;

use super::model::OmegaModel;
use super::ops::{scalar_apply, seq_apply, seq_inf, seq_sup, PointOp, Unsafe};
use super::tail::EventualSeq;
use super::OmegaError;

/// Value of a closed formula, or the reason it has none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaValue {
    Value(Rational),
    Unsafe(Unsafe),
}

impl OmegaValue {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            OmegaValue::Value(v) => Some(v),
            OmegaValue::Unsafe(_) => None,
        }
    }
}

enum Val {
    Const(Rational),
    Seq(EventualSeq),
}

enum Stop {
    Unsafe(Unsafe),
    Error(OmegaError),
}

impl From<OmegaError> for Stop {
    fn from(e: OmegaError) -> Stop {
        Stop::Error(e)
    }
}

pub fn eval_omega(m: &OmegaModel, f: &Formula) -> Result<OmegaValue, OmegaError> {
    if !f.is_closed() {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        return Err(OmegaError::NotClosed(free.join(", ")));
    }
    match eval(m, f) {
        Ok(Val::Const(v)) => Ok(OmegaValue::Value(v)),
        Ok(Val::Seq(_)) => unreachable!("closed formulas evaluate to constants"),
        Err(Stop::Unsafe(u)) => Ok(OmegaValue::Unsafe(u)),
        Err(Stop::Error(e)) => Err(e),
    }
}

fn eval(m: &OmegaModel, f: &Formula) -> Result<Val, Stop> {
    let chain = m.chain();
    match f {
        Formula::Atom { pred, args } => match args.len() {
            0 => m
                .zeroary()
                .get(pred)
                .map(|v| Val::Const(v.clone()))
                .ok_or_else(|| missing(m, pred, 0)),
            1 => m
                .monadic()
                .get(pred)
                .map(|s| Val::Seq(s.clone()))
                .ok_or_else(|| missing(m, pred, 1)),
            k => Err(OmegaError::Arity(format!("{pred}/{k}")).into()),
        },
        Formula::Bottom => Ok(Val::Const(Rational::zero())),
        Formula::And(a, b) => binary(m, &PointOp::Min, a, b),
        Formula::Strong(a, b) => binary(m, &PointOp::Tnorm, a, b),
        Formula::Implies(a, b) => binary(m, &PointOp::Residuum, a, b),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let fv = body.free_vars();
            if fv.iter().any(|v| v != x) {
                return Err(OmegaError::UnsupportedShape(format!(
                    "quantifier over `{x}` has further free variables in `{body}`"
                ))
                .into());
            }
            match eval(m, body)? {
                Val::Const(v) => Ok(Val::Const(v)),
                Val::Seq(s) => {
                    let r = if matches!(f, Formula::Forall(..)) {
                        seq_inf(chain, &s)
                    } else {
                        seq_sup(chain, &s)
                    };
                    r.map(Val::Const).map_err(Stop::Unsafe)
                }
            }
        }
    }
}

fn missing(m: &OmegaModel, pred: &str, arity: usize) -> Stop {
    let other = if arity == 0 {
        m.monadic().contains_key(pred)
    } else {
        m.zeroary().contains_key(pred)
    };
    if other {
        Stop::Error(OmegaError::Arity(format!("{pred}/{arity}")))
    } else {
        Stop::Error(OmegaError::MissingPredicate(pred.to_string()))
    }
}

fn binary(m: &OmegaModel, op: &PointOp, a: &Formula, b: &Formula) -> Result<Val, Stop> {
    let chain = m.chain();
    let x = eval(m, a)?;
    let y = eval(m, b)?;
    Ok(match (x, y) {
        (Val::Const(x), Val::Const(y)) => Val::Const(scalar_apply(chain, op, &x, &y)),
        (Val::Seq(s), Val::Const(c)) => {
            Val::Seq(seq_apply(chain, op, &s, &EventualSeq::constant(c)))
        }
        (Val::Const(c), Val::Seq(s)) => {
            Val::Seq(seq_apply(chain, op, &EventualSeq::constant(c), &s))
        }
        (Val::Seq(s), Val::Seq(t)) => Val::Seq(seq_apply(chain, op, &s, &t)),
    })
}
