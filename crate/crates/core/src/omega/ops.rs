//! Pointwise operations on eventual sequences, and their infima and suprema.
//!
//! Every operation is a case split on comparisons between operand values
//! and their complements. Between two tails such comparisons are eventually
//! constant, so the result past a computable threshold is again one of the
//! operand tails, a complement, or a constant. Below the threshold values
//! are computed one by one and kept as exceptions.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::chain::ChainSpec;
use crate::rational::Rational;

use super::tail::{eventual_cmp, EventualSeq, TailExpr};

/// A pointwise operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointOp {
    Tnorm,
    Residuum,
    Min,
    Max,
    /// Unary; the second operand is ignored.
    Negation,
    /// Unary cut at `h = |alpha|`: above `h` to 1, below `1-h` to 0.
    Cut(Rational),
    /// Unary: keep positive values, zero the rest.
    Collapse,
}

impl PointOp {
    pub fn is_unary(&self) -> bool {
        matches!(self, PointOp::Negation | PointOp::Cut(_) | PointOp::Collapse)
    }
}

/// Values that can be compared and complemented: rationals, or tails
/// compared eventually.
trait Values {
    type V: Clone;
    fn cmp(&mut self, a: &Self::V, b: &Self::V) -> Ordering;
    fn complement(&self, a: &Self::V) -> Self::V;
    fn constant(&self, r: Rational) -> Self::V;
}

struct Scalars;

impl Values for Scalars {
    type V = Rational;
    fn cmp(&mut self, a: &Rational, b: &Rational) -> Ordering {
        a.cmp(b)
    }
    fn complement(&self, a: &Rational) -> Rational {
        a.complement()
    }
    fn constant(&self, r: Rational) -> Rational {
        r
    }
}

/// Compares tails eventually and remembers from where the answers hold.
struct Tails {
    threshold: u64,
}

impl Values for Tails {
    type V = TailExpr;
    fn cmp(&mut self, a: &TailExpr, b: &TailExpr) -> Ordering {
        let (ord, n) = eventual_cmp(a, b);
        self.threshold = self.threshold.max(n);
        ord
    }
    fn complement(&self, a: &TailExpr) -> TailExpr {
        a.complement()
    }
    fn constant(&self, r: Rational) -> TailExpr {
        TailExpr::constant(r)
    }
}

fn apply<S: Values>(s: &mut S, chain: &ChainSpec, op: &PointOp, a: &S::V, b: &S::V) -> S::V {
    let godel = chain.is_godel();
    let min = |s: &mut S, a: &S::V, b: &S::V| {
        if s.cmp(a, b) == Ordering::Greater {
            b.clone()
        } else {
            a.clone()
        }
    };
    let max = |s: &mut S, a: &S::V, b: &S::V| {
        if s.cmp(a, b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    };
    match op {
        PointOp::Min => min(s, a, b),
        PointOp::Max => max(s, a, b),
        PointOp::Tnorm => {
            if godel {
                return min(s, a, b);
            }
            let nb = s.complement(b);
            if s.cmp(a, &nb) == Ordering::Greater {
                min(s, a, b)
            } else {
                s.constant(Rational::zero())
            }
        }
        PointOp::Residuum => {
            if s.cmp(a, b) != Ordering::Greater {
                s.constant(Rational::one())
            } else if godel {
                b.clone()
            } else {
                let na = s.complement(a);
                max(s, &na, b)
            }
        }
        PointOp::Negation => {
            if godel {
                let zero = s.constant(Rational::zero());
                if s.cmp(a, &zero) == Ordering::Equal {
                    s.constant(Rational::one())
                } else {
                    zero
                }
            } else {
                s.complement(a)
            }
        }
        PointOp::Cut(h) => {
            let hi = s.constant(h.clone());
            let lo = s.constant(h.complement());
            if s.cmp(a, &hi) == Ordering::Greater {
                s.constant(Rational::one())
            } else if s.cmp(a, &lo) == Ordering::Less {
                s.constant(Rational::zero())
            } else {
                a.clone()
            }
        }
        PointOp::Collapse => {
            let na = s.complement(a);
            if s.cmp(a, &na) == Ordering::Greater {
                a.clone()
            } else {
                s.constant(Rational::zero())
            }
        }
    }
}

/// The operation on single values.
pub fn scalar_apply(chain: &ChainSpec, op: &PointOp, a: &Rational, b: &Rational) -> Rational {
    apply(&mut Scalars, chain, op, a, b)
}

/// Pointwise application to two sequences (the second is ignored for unary ops).
pub fn seq_apply(
    chain: &ChainSpec,
    op: &PointOp,
    s1: &EventualSeq,
    s2: &EventualSeq,
) -> EventualSeq {
    if let (Some(a), Some(b)) = (s1.as_constant(), s2.as_constant()) {
        return EventualSeq::constant(scalar_apply(chain, op, a, b));
    }
    let mut tails = Tails { threshold: 0 };
    let tail = apply(&mut tails, chain, op, &s1.tail, &s2.tail);
    let prefix = tails
        .threshold
        .max(s1.prefix_len())
        .max(s2.prefix_len());
    let exceptions: BTreeMap<u64, Rational> = (0..prefix)
        .map(|j| (j, scalar_apply(chain, op, &s1.at(j), &s2.at(j))))
        .collect();
    EventualSeq::new(tail, exceptions)
}

/// Pointwise application of a unary operation.
pub fn seq_map(chain: &ChainSpec, op: &PointOp, s: &EventualSeq) -> EventualSeq {
    seq_apply(chain, op, s, s)
}

/// Why a quantifier has no value in the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unsafe {
    /// The values decrease toward `limit` and the chain has no greatest element below it.
    Inf { limit: Rational },
    /// The values increase toward `limit` and the chain has no least element above it.
    Sup { limit: Rational },
}

impl std::fmt::Display for Unsafe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Unsafe::Inf { limit } => write!(f, "infimum at {limit} does not exist in the chain"),
            Unsafe::Sup { limit } => write!(f, "supremum at {limit} does not exist in the chain"),
        }
    }
}

/// Least index not listed as an exception.
fn first_tail_index(s: &EventualSeq) -> u64 {
    (0..).find(|j| !s.exceptions.contains_key(j)).expect("finitely many exceptions")
}

/// Infimum in the chain of all values of `s`.
pub fn seq_inf(chain: &ChainSpec, s: &EventualSeq) -> Result<Rational, Unsafe> {
    let low_exception = s.exceptions.values().min();
    let tail = &s.tail;
    if !tail.coeff.is_positive() {
        // tail non-decreasing: its minimum is its first value
        let first = tail.at(first_tail_index(s));
        return Ok(low_exception.map_or(first.clone(), |e| e.clone().min(first)));
    }
    match low_exception {
        Some(e) if *e <= tail.base => Ok(e.clone()),
        _ => chain
            .floor_in(&tail.base)
            .ok_or_else(|| Unsafe::Inf {
                limit: tail.base.clone(),
            }),
    }
}

/// Supremum in the chain of all values of `s`.
pub fn seq_sup(chain: &ChainSpec, s: &EventualSeq) -> Result<Rational, Unsafe> {
    let high_exception = s.exceptions.values().max();
    let tail = &s.tail;
    if !tail.coeff.is_negative() {
        let first = tail.at(first_tail_index(s));
        return Ok(high_exception.map_or(first.clone(), |e| e.clone().max(first)));
    }
    match high_exception {
        Some(e) if *e >= tail.base => Ok(e.clone()),
        _ => chain
            .ceil_in(&tail.base)
            .ok_or_else(|| Unsafe::Sup {
                limit: tail.base.clone(),
            }),
    }
}
