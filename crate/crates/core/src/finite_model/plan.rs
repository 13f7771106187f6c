//! Formulas compiled against predicate tables and variable slots.

use std::collections::BTreeMap;

use crate::chain::ChainSpec;
use crate::formula::Formula;
use crate::rational::Rational;

use super::EvalError;

#[derive(Debug, Clone)]
enum Node {
    Atom { pred: usize, args: Vec<usize> },
    Bottom,
    And(Box<Node>, Box<Node>),
    Strong(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// A formula with predicates numbered in name order and one slot per
/// variable binding. Free variables occupy the first slots.
#[derive(Debug, Clone)]
pub struct Plan {
    root: Node,
    preds: Vec<(String, usize)>,
    free: Vec<String>,
    slots: usize,
}

struct Compiler<'a> {
    preds: &'a BTreeMap<String, usize>,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn node(&mut self, f: &Formula) -> Node {
        match f {
            Formula::Atom { pred, args } => Node::Atom {
                pred: self.preds.keys().position(|p| p == pred).expect("signature"),
                args: args
                    .iter()
                    .map(|a| {
                        self.scope
                            .iter()
                            .rev()
                            .find(|(v, _)| v == a)
                            .map(|(_, s)| *s)
                            .expect("free variables are pre-bound")
                    })
                    .collect(),
            },
            Formula::Bottom => Node::Bottom,
            Formula::And(a, b) => Node::And(Box::new(self.node(a)), Box::new(self.node(b))),
            Formula::Strong(a, b) => Node::Strong(Box::new(self.node(a)), Box::new(self.node(b))),
            Formula::Implies(a, b) => {
                Node::Implies(Box::new(self.node(a)), Box::new(self.node(b)))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((v.clone(), slot));
                let inner = Box::new(self.node(body));
                self.scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    Node::Forall(slot, inner)
                } else {
                    Node::Exists(slot, inner)
                }
            }
        }
    }
}

impl Plan {
    pub fn compile(f: &Formula) -> Result<Plan, EvalError> {
        let sig = f.signature().map_err(EvalError::Arity)?;
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let mut c = Compiler {
            preds: &sig,
            scope: free.iter().cloned().zip(0..).collect(),
            slots: free.len(),
        };
        let root = c.node(f);
        let slots = c.slots;
        Ok(Plan {
            root,
            preds: sig.into_iter().collect(),
            free,
            slots,
        })
    }

    /// Predicates with arities, in table order.
    pub fn predicates(&self) -> &[(String, usize)] {
        &self.preds
    }

    /// Free variables, in slot order.
    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn slot_count(&self) -> usize {
        self.slots
    }

    /// Evaluates with `tables[i]` holding predicate `i` as a dense row-major
    /// array over `domain^arity`, and `free` giving the individual of each
    /// free variable.
    pub fn eval(
        &self,
        chain: &ChainSpec,
        tables: &[&[Rational]],
        domain: usize,
        free: &[usize],
    ) -> Rational {
        let mut env = vec![0; self.slots];
        env[..free.len()].copy_from_slice(free);
        let mut ev = Evaluator {
            chain,
            tables,
            domain,
            observer: None,
        };
        ev.run(&self.root, &mut env)
    }

    /// As [`Plan::eval`], reporting the value of every node visited under
    /// every valuation the quantifiers range over.
    pub fn eval_observed(
        &self,
        chain: &ChainSpec,
        tables: &[&[Rational]],
        domain: usize,
        free: &[usize],
        observer: &mut dyn FnMut(&Rational),
    ) -> Rational {
        let mut env = vec![0; self.slots];
        env[..free.len()].copy_from_slice(free);
        let mut ev = Evaluator {
            chain,
            tables,
            domain,
            observer: Some(observer),
        };
        ev.run(&self.root, &mut env)
    }
}

struct Evaluator<'a, 'o> {
    chain: &'a ChainSpec,
    tables: &'a [&'a [Rational]],
    domain: usize,
    observer: Option<&'o mut dyn FnMut(&Rational)>,
}

impl Evaluator<'_, '_> {
    fn run(&mut self, node: &Node, env: &mut [usize]) -> Rational {
        let value = match node {
            Node::Atom { pred, args } => {
                let mut idx = 0;
                for s in args {
                    idx = idx * self.domain + env[*s];
                }
                self.tables[*pred][idx].clone()
            }
            Node::Bottom => Rational::zero(),
            Node::And(a, b) => {
                let x = self.run(a, env);
                let y = self.run(b, env);
                x.min(y)
            }
            Node::Strong(a, b) => {
                let x = self.run(a, env);
                let y = self.run(b, env);
                self.chain.tnorm(&x, &y)
            }
            Node::Implies(a, b) => {
                let x = self.run(a, env);
                let y = self.run(b, env);
                self.chain.residuum(&x, &y)
            }
            Node::Forall(slot, body) | Node::Exists(slot, body) => {
                let universal = matches!(node, Node::Forall(..));
                let saved = env[*slot];
                let mut acc: Option<Rational> = None;
                for d in 0..self.domain {
                    env[*slot] = d;
                    let v = self.run(body, env);
                    acc = Some(match acc {
                        None => v,
                        Some(a) if universal => a.min(v),
                        Some(a) => a.max(v),
                    });
                    // short-circuit only when nobody watches the subterms
                    if self.observer.is_none() {
                        let a = acc.as_ref().expect("set above");
                        if (universal && a.is_zero()) || (!universal && a.is_one()) {
                            break;
                        }
                    }
                }
                env[*slot] = saved;
                acc.expect("domains are non-empty")
            }
        };
        if let Some(obs) = self.observer.as_mut() {
            obs(&value);
        }
        value
    }
}
