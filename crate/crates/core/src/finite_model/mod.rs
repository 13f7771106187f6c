//! Finite-domain interpretations and their evaluation.
//!
//! Predicate interpretations are dense tables over `domain^arity` in
//! row-major order. Finite domains make every model safe, so quantifiers are
//! plain minima and maxima.

mod enumerate;
mod io;
mod plan;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chain::{ChainElement, ChainError, ChainSpec};
use crate::formula::{ArityConflict, Formula};
use crate::rational::Rational;

pub use enumerate::{ModelSpace, Odometer};
pub use io::ModelFile;
pub use plan::Plan;

/// Variable name to individual name.
pub type Valuation = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Arity(#[from] ArityConflict),
    #[error("the model does not interpret predicate `{0}`")]
    MissingPredicate(String),
    #[error("predicate `{pred}` has arity {model} in the model but {formula} in the formula")]
    PredicateArity {
        pred: String,
        model: usize,
        formula: usize,
    },
    #[error("variable `{0}` is free and has no value")]
    ValuationGap(String),
    #[error("valuation refers to unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("formula is not closed (free: {0})")]
    NotClosed(String),
    #[error("formula is not propositional")]
    NotPropositional,
    #[error("atom `{0}` has no assigned value")]
    Unassigned(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the domain must not be empty")]
    EmptyDomain,
    #[error("individual `{0}` appears twice in the domain")]
    DuplicateIndividual(String),
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("malformed tuple `{0}` (expected e.g. `(a,b)` or `()`)")]
    BadTuple(String),
    #[error("predicate `{pred}` used with arity {first} and {second}")]
    ArityConflict {
        pred: String,
        first: usize,
        second: usize,
    },
    #[error("predicate `{pred}` has no value for {tuple}")]
    Partial { pred: String, tuple: String },
    #[error("predicate `{pred}` needs {expected} values, got {found}")]
    TableSize {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("invalid model file: {0}")]
    Json(String),
}

/// Dense interpretation of one predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub arity: usize,
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    chain: ChainSpec,
    domain: Vec<String>,
    predicates: BTreeMap<String, Table>,
    constants: BTreeMap<String, usize>,
}

/// `a, b, ..., z, d26, d27, ...`
pub fn default_domain(size: usize) -> Vec<String> {
    (0..size)
        .map(|i| match u8::try_from(i) {
            Ok(k) if k < 26 => char::from(b'a' + k).to_string(),
            _ => format!("d{i}"),
        })
        .collect()
}

impl FiniteModel {
    pub fn new(chain: ChainSpec, domain: Vec<String>) -> Result<FiniteModel, ModelError> {
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        for (i, d) in domain.iter().enumerate() {
            if domain[..i].contains(d) {
                return Err(ModelError::DuplicateIndividual(d.clone()));
            }
        }
        Ok(FiniteModel {
            chain,
            domain,
            predicates: BTreeMap::new(),
            constants: BTreeMap::new(),
        })
    }

    /// Builds a model with every predicate of `signature` interpreted by `value`.
    pub fn from_fn(
        chain: ChainSpec,
        domain: Vec<String>,
        signature: &[(String, usize)],
        mut value: impl FnMut(&str, &[usize]) -> Rational,
    ) -> Result<FiniteModel, ModelError> {
        let mut m = FiniteModel::new(chain, domain)?;
        let n = m.domain.len();
        for (pred, arity) in signature {
            let len = n.pow(*arity as u32);
            let values = (0..len)
                .map(|idx| value(pred, &unflatten(idx, *arity, n)))
                .collect();
            m.set_table(pred, *arity, values)?;
        }
        Ok(m)
    }

    pub fn set_table(
        &mut self,
        pred: &str,
        arity: usize,
        values: Vec<Rational>,
    ) -> Result<(), ModelError> {
        let expected = self.domain.len().pow(arity as u32);
        if values.len() != expected {
            return Err(ModelError::TableSize {
                pred: pred.to_string(),
                expected,
                found: values.len(),
            });
        }
        for v in &values {
            self.chain.check(v)?;
        }
        self.predicates
            .insert(pred.to_string(), Table { arity, values });
        Ok(())
    }

    pub fn set_constant(&mut self, name: &str, individual: &str) -> Result<(), ModelError> {
        let idx = self
            .individual(individual)
            .ok_or_else(|| ModelError::UnknownIndividual(individual.to_string()))?;
        self.constants.insert(name.to_string(), idx);
        Ok(())
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn individual(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn predicates(&self) -> &BTreeMap<String, Table> {
        &self.predicates
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &str)> {
        self.constants
            .iter()
            .map(|(c, i)| (c.as_str(), self.domain[*i].as_str()))
    }

    /// The value of `pred` on a tuple of individual indices.
    pub fn value(&self, pred: &str, tuple: &[usize]) -> Option<&Rational> {
        let t = self.predicates.get(pred)?;
        if t.arity != tuple.len() {
            return None;
        }
        t.values.get(flatten(tuple, self.domain.len()))
    }

    /// Every atomic value of the model, table by table.
    pub fn atomic_values(&self) -> impl Iterator<Item = &Rational> {
        self.predicates.values().flat_map(|t| t.values.iter())
    }

    /// Same domain and constants, atomic values rewritten into `chain`.
    pub fn map_values(
        &self,
        chain: ChainSpec,
        mut f: impl FnMut(&Rational) -> Rational,
    ) -> Result<FiniteModel, ModelError> {
        let mut m = FiniteModel {
            chain,
            domain: self.domain.clone(),
            predicates: BTreeMap::new(),
            constants: self.constants.clone(),
        };
        for (p, t) in &self.predicates {
            let values = t.values.iter().map(&mut f).collect();
            m.set_table(p, t.arity, values)?;
        }
        Ok(m)
    }

    /// Same model with individuals renamed.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Result<FiniteModel, ModelError> {
        let mut m = FiniteModel::new(self.chain.clone(), self.domain.iter().map(|d| f(d)).collect())?;
        m.predicates = self.predicates.clone();
        m.constants = self.constants.clone();
        Ok(m)
    }

    /// Tables in the plan's predicate order.
    pub fn tables_for<'a>(&'a self, plan: &Plan) -> Result<Vec<&'a [Rational]>, EvalError> {
        plan.predicates()
            .iter()
            .map(|(p, k)| {
                let t = self
                    .predicates
                    .get(p)
                    .ok_or_else(|| EvalError::MissingPredicate(p.clone()))?;
                if t.arity != *k {
                    return Err(EvalError::PredicateArity {
                        pred: p.clone(),
                        model: t.arity,
                        formula: *k,
                    });
                }
                Ok(t.values.as_slice())
            })
            .collect()
    }

    /// Individuals for the plan's free variables: valuation first, then constants.
    fn free_slots(&self, plan: &Plan, v: &Valuation) -> Result<Vec<usize>, EvalError> {
        plan.free_vars()
            .iter()
            .map(|x| match v.get(x) {
                Some(ind) => self
                    .individual(ind)
                    .ok_or_else(|| EvalError::UnknownIndividual(ind.clone())),
                None => self
                    .constants
                    .get(x)
                    .copied()
                    .ok_or_else(|| EvalError::ValuationGap(x.clone())),
            })
            .collect()
    }

    /// Raw truth value of `f` under `v`.
    pub fn eval_value(&self, v: &Valuation, f: &Formula) -> Result<Rational, EvalError> {
        let plan = Plan::compile(f)?;
        self.eval_plan(v, &plan)
    }

    pub fn eval_plan(&self, v: &Valuation, plan: &Plan) -> Result<Rational, EvalError> {
        let tables = self.tables_for(plan)?;
        let free = self.free_slots(plan, v)?;
        Ok(plan.eval(&self.chain, &tables, self.domain.len(), &free))
    }

    /// Like [`FiniteModel::eval_value`], also feeding every intermediate value to `observer`.
    pub fn eval_observed(
        &self,
        v: &Valuation,
        f: &Formula,
        observer: &mut dyn FnMut(&Rational),
    ) -> Result<Rational, EvalError> {
        let plan = Plan::compile(f)?;
        let tables = self.tables_for(&plan)?;
        let free = self.free_slots(&plan, v)?;
        Ok(plan.eval_observed(&self.chain, &tables, self.domain.len(), &free, observer))
    }

    pub fn eval(&self, v: &Valuation, f: &Formula) -> Result<ChainElement, EvalError> {
        let value = self.eval_value(v, f)?;
        Ok(self.chain.element(value)?)
    }

    /// Value of a closed formula.
    pub fn model_value(&self, f: &Formula) -> Result<ChainElement, EvalError> {
        let free: Vec<String> = f
            .free_vars()
            .into_iter()
            .filter(|x| !self.constants.contains_key(x))
            .collect();
        if !free.is_empty() {
            return Err(EvalError::NotClosed(free.join(", ")));
        }
        self.eval(&Valuation::new(), f)
    }
}

fn flatten(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, i| acc * n + i)
}

fn unflatten(mut idx: usize, arity: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    t
}

/// Value of a propositional formula under an assignment of its atoms.
pub fn eval_prop(
    chain: &ChainSpec,
    assign: &BTreeMap<String, Rational>,
    f: &Formula,
) -> Result<ChainElement, EvalError> {
    if !f.is_propositional() {
        return Err(EvalError::NotPropositional);
    }
    let plan = Plan::compile(f)?;
    let mut tables = Vec::with_capacity(plan.predicates().len());
    for (p, _) in plan.predicates() {
        let v = assign
            .get(p)
            .ok_or_else(|| EvalError::Unassigned(p.clone()))?;
        chain.check(v)?;
        tables.push(std::slice::from_ref(v));
    }
    let value = plan.eval(chain, &tables, 1, &[]);
    Ok(chain.element(value)?)
}
