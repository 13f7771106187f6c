//! First-order formulas over `&`, `/\`, `->`, `bot` with `forall`/`exists`.
//!
//! Derived connectives (`~`, `\/`, `<->`, `top`) have no AST nodes of their
//! own: the constructors expand them, and the printer folds the expansions
//! back into sugar.

mod parse;
mod print;
mod schema;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parse::{parse, ParseError};
pub use print::{print, print_compact};
pub use schema::{schema, Schema, SchemaError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// `P(x1, ..., xk)`; arguments are variable names (or model constants).
    Atom { pred: String, args: Vec<String> },
    Bottom,
    /// Lattice meet.
    And(Box<Formula>, Box<Formula>),
    /// Monoidal conjunction (the t-norm).
    Strong(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Predicate signature clash inside one formula.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("predicate `{pred}` used with arity {first} and arity {second}")]
pub struct ArityConflict {
    pub pred: String,
    pub first: usize,
    pub second: usize,
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: &[&str]) -> Formula {
        Formula::Atom {
            pred: pred.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    /// A 0-ary atom.
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom {
            pred: name.into(),
            args: Vec::new(),
        }
    }

    pub fn bottom() -> Formula {
        Formula::Bottom
    }

    /// `top := ~bot`.
    pub fn top() -> Formula {
        Formula::not(Formula::Bottom)
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn strong(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Strong(Box::new(lhs), Box::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// `~f := f -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::implies(f, Formula::Bottom)
    }

    /// `f \/ g := ((f -> g) -> g) /\ ((g -> f) -> f)`.
    pub fn or(f: Formula, g: Formula) -> Formula {
        let left = Formula::implies(Formula::implies(f.clone(), g.clone()), g.clone());
        let right = Formula::implies(Formula::implies(g, f.clone()), f);
        Formula::and(left, right)
    }

    /// `f <-> g := (f -> g) /\ (g -> f)`.
    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::and(
            Formula::implies(f.clone(), g.clone()),
            Formula::implies(g, f),
        )
    }

    /// `f^2 := f & f`.
    pub fn square(f: Formula) -> Formula {
        Formula::strong(f.clone(), f)
    }

    /// Left-nested disjunction of a non-empty list.
    pub fn big_or(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::or)
    }

    /// Left-nested lattice conjunction of a non-empty list.
    pub fn big_and(items: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        items.into_iter().reduce(Formula::and)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => {
                for a in args {
                    if !bound.contains(&a.as_str()) {
                        out.insert(a.clone());
                    }
                }
            }
            Formula::Bottom => {}
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Predicate names with their arities.
    pub fn signature(&self) -> Result<BTreeMap<String, usize>, ArityConflict> {
        let mut sig = BTreeMap::new();
        self.collect_signature(&mut sig)?;
        Ok(sig)
    }

    fn collect_signature(&self, sig: &mut BTreeMap<String, usize>) -> Result<(), ArityConflict> {
        match self {
            Formula::Atom { pred, args } => match sig.get(pred) {
                Some(&k) if k != args.len() => Err(ArityConflict {
                    pred: pred.clone(),
                    first: k,
                    second: args.len(),
                }),
                Some(_) => Ok(()),
                None => {
                    sig.insert(pred.clone(), args.len());
                    Ok(())
                }
            },
            Formula::Bottom => Ok(()),
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                a.collect_signature(sig)?;
                b.collect_signature(sig)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.collect_signature(sig),
        }
    }

    pub fn has_quantifiers(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::Bottom => false,
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                a.has_quantifiers() || b.has_quantifiers()
            }
            Formula::Forall(..) | Formula::Exists(..) => true,
        }
    }

    pub fn has_exists(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::Bottom => false,
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                a.has_exists() || b.has_exists()
            }
            Formula::Forall(_, body) => body.has_exists(),
            Formula::Exists(..) => true,
        }
    }

    /// Quantifier-free with only 0-ary atoms.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom { args, .. } => args.is_empty(),
            Formula::Bottom => true,
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom => 1,
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Strong(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.depth(),
        }
    }

    /// Replaces every `exists x. f` by `~forall x. ~f`.
    pub fn eliminate_exists(&self) -> Formula {
        match self {
            Formula::Atom { .. } | Formula::Bottom => self.clone(),
            Formula::And(a, b) => Formula::and(a.eliminate_exists(), b.eliminate_exists()),
            Formula::Strong(a, b) => Formula::strong(a.eliminate_exists(), b.eliminate_exists()),
            Formula::Implies(a, b) => {
                Formula::implies(a.eliminate_exists(), b.eliminate_exists())
            }
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.eliminate_exists()),
            Formula::Exists(v, body) => Formula::not(Formula::forall(
                v.clone(),
                Formula::not(body.eliminate_exists()),
            )),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}
