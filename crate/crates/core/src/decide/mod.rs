//! Brute-force validity over finite chains, bounded countermodel search and
//! the order-type classification of chains.
//!
//! Validity over an infinite chain is never claimed here: only refutations
//! or "nothing found within the budget".

mod suites;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::chain::{ChainError, ChainSpec};
use crate::finite_model::{EvalError, FiniteModel, ModelSpace, Odometer, Plan};
use crate::formula::Formula;
use crate::rational::Rational;

pub use suites::{run_suite, Claim, SuiteConfig, SuiteId, VerdictReport};

/// Default cap on assignments or models examined by one query.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("`{0}` is infinite; exhaustive search needs a finite chain")]
    Infinite(ChainSpec),
    #[error("formula is not propositional")]
    NotPropositional,
    #[error("formula is not closed (free: {0})")]
    NotClosed(String),
    #[error("domain size {0} is outside 1..=4")]
    DomainSize(usize),
    #[error("the search needs {needed} cases, over the budget of {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Outcome of a propositional validity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropVerdict {
    pub valid: bool,
    /// First refuting assignment in canonical order.
    pub counter: Option<BTreeMap<String, Rational>>,
    /// Value of the formula under `counter`.
    pub value: Option<Rational>,
    pub checked: u64,
}

/// Exhaustive validity of a quantifier-free formula with 0-ary atoms.
///
/// Assignments are enumerated with atoms in name order, each ranging over
/// the carrier in ascending order, the first atom most significant.
pub fn prop_valid(chain: &ChainSpec, f: &Formula) -> Result<PropVerdict, DecideError> {
    prop_valid_within(chain, f, DEFAULT_BUDGET)
}

pub fn prop_valid_within(
    chain: &ChainSpec,
    f: &Formula,
    budget: u64,
) -> Result<PropVerdict, DecideError> {
    if !f.is_propositional() {
        return Err(DecideError::NotPropositional);
    }
    let carrier = chain
        .enumerate()
        .map_err(|_| DecideError::Infinite(chain.clone()))?;
    let plan = Plan::compile(f)?;
    let atoms = plan.predicates().len();
    let needed = (carrier.len() as u128).pow(atoms as u32);
    if needed > u128::from(budget) {
        return Err(DecideError::Budget { needed, budget });
    }
    let one = Rational::one();
    let mut odo = Odometer::new(atoms, carrier.len());
    let mut checked = 0;
    while let Some(digits) = odo.next() {
        checked += 1;
        let tables: Vec<&[Rational]> = digits
            .iter()
            .map(|d| std::slice::from_ref(&carrier[*d]))
            .collect();
        let v = plan.eval(chain, &tables, 1, &[]);
        if v != one {
            let counter = plan
                .predicates()
                .iter()
                .zip(digits)
                .map(|((p, _), d)| (p.clone(), carrier[*d].clone()))
                .collect();
            return Ok(PropVerdict {
                valid: false,
                counter: Some(counter),
                value: Some(v),
                checked,
            });
        }
    }
    Ok(PropVerdict {
        valid: true,
        counter: None,
        value: None,
        checked,
    })
}

/// Result of a bounded countermodel search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { model: FiniteModel, value: Rational },
    /// Every model up to the domain bound evaluates to 1.
    Exhausted { checked: u64 },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Enumerates all interpretations over domains `1..=max_domain` (in that
/// order, each in canonical order) and returns the first with value < 1.
pub fn search_countermodel(
    chain: &ChainSpec,
    f: &Formula,
    max_domain: usize,
    budget: u64,
) -> Result<SearchOutcome, DecideError> {
    if !(1..=4).contains(&max_domain) {
        return Err(DecideError::DomainSize(max_domain));
    }
    if !f.is_closed() {
        let free: Vec<String> = f.free_vars().into_iter().collect();
        return Err(DecideError::NotClosed(free.join(", ")));
    }
    if !chain.is_finite() {
        return Err(DecideError::Infinite(chain.clone()));
    }
    let plan = Plan::compile(f)?;
    let spaces = (1..=max_domain)
        .map(|d| ModelSpace::new(chain, d, plan.predicates()))
        .collect::<Result<Vec<_>, _>>()?;
    let needed = spaces
        .iter()
        .try_fold(0u128, |acc, s| s.count().and_then(|c| acc.checked_add(c)))
        .unwrap_or(u128::MAX);
    if needed > u128::from(budget) {
        return Err(DecideError::Budget { needed, budget });
    }
    let one = Rational::one();
    let mut checked = 0;
    for space in &spaces {
        let carrier = space.carrier();
        let mut odo = space.odometer();
        let mut lens = Vec::new();
        for (_, k) in plan.predicates() {
            lens.push(space.domain_size().pow(*k as u32));
        }
        let mut values: Vec<Rational> = vec![Rational::zero(); space.positions()];
        while let Some(digits) = odo.next() {
            checked += 1;
            for (slot, d) in values.iter_mut().zip(digits) {
                *slot = carrier[*d].clone();
            }
            let mut tables = Vec::with_capacity(lens.len());
            let mut at = 0;
            for len in &lens {
                tables.push(&values[at..at + len]);
                at += len;
            }
            let v = plan.eval(chain, &tables, space.domain_size(), &[]);
            if v != one {
                let model = space.model(digits).expect("enumerated values are members");
                return Ok(SearchOutcome::Found { model, value: v });
            }
        }
    }
    Ok(SearchOutcome::Exhausted { checked })
}

/// What the order-type theorems predict for a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub chain: ChainSpec,
    pub nm: bool,
    pub size: Option<u32>,
    pub has_fixpoint: bool,
    pub all_have_predecessor: bool,
    pub complete: bool,
    /// Shifting laws predicted valid, by index.
    pub shifting_valid: Vec<u8>,
    /// Shifting laws predicted to fail, by index.
    pub shifting_invalid: Vec<u8>,
    pub c_up: Option<bool>,
    pub c_down: Option<bool>,
    /// Least `n` with `S_n` valid; `None` when no `S_n` holds.
    pub sn_from: Option<u32>,
    pub bp: Option<bool>,
    pub notes: Vec<String>,
}

/// Predictions for `c` as the theorems state them.
pub fn classify_chain(c: &ChainSpec) -> Classification {
    let nm = c.is_nm();
    let pred = c.all_have_predecessor();
    let (valid, invalid): (Vec<u8>, Vec<u8>) = if nm {
        (1..=18).partition(|i| *i <= 14 || pred)
    } else {
        (Vec::new(), Vec::new())
    };
    let size = c.size();
    // S_n holds iff the chain has fewer than 2n + 2 elements
    let sn_from = if nm {
        size.map(|s| if s < 4 { 1 } else { (s - 2) / 2 + 1 })
    } else {
        None
    };
    let mut notes = Vec::new();
    if nm {
        notes.push(
            "laws 6, 7, 10 and 16 are refuted by finite countermodels on chains of size >= 2 or 3; \
             see the shifting suite"
                .to_string(),
        );
    } else {
        notes.push("the shifting and order-type predictions concern NM chains".to_string());
    }
    Classification {
        chain: c.clone(),
        nm,
        size,
        has_fixpoint: c.has_fixpoint(),
        all_have_predecessor: pred,
        complete: c.is_complete(),
        shifting_valid: valid,
        shifting_invalid: invalid,
        c_up: nm.then_some(pred),
        c_down: nm.then_some(pred),
        sn_from,
        bp: nm.then_some(!c.has_fixpoint()),
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Schema};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn sn_and_bp_examples() {
        let s2 = Schema::Sn(2).formula();
        assert!(prop_valid(&ChainSpec::NmFin(5), &s2).unwrap().valid);
        let v = prop_valid(&ChainSpec::NmFin(6), &s2).unwrap();
        assert!(!v.valid);
        let counter = v.counter.unwrap();
        let value = crate::finite_model::eval_prop(&ChainSpec::NmFin(6), &counter, &s2).unwrap();
        assert_eq!(Some(value.into_value()), v.value);
        assert!(prop_valid(&ChainSpec::NmFin(4), &Schema::Bp.formula()).unwrap().valid);
        assert!(!prop_valid(&ChainSpec::NmFin(5), &Schema::Bp.formula()).unwrap().valid);
    }

    #[test]
    fn first_counter_assignment_is_canonical() {
        let v = prop_valid(&ChainSpec::NmFin(3), &Schema::Sep(2).formula()).unwrap();
        let expected: BTreeMap<String, Rational> =
            [("p1".into(), r("1")), ("p2".into(), r("1/2")), ("p3".into(), r("0"))].into();
        assert_eq!(v.counter, Some(expected));
        assert_eq!(v.value, Some(r("1/2")));
        let f = parse("p -> q").unwrap();
        let v = prop_valid(&ChainSpec::NmFin(3), &f).unwrap();
        // (p, q) = (1/2, 0) comes before (1, 0)
        assert_eq!(v.counter.unwrap()["p"], r("1/2"));
    }

    #[test]
    fn prop_errors() {
        assert_eq!(
            prop_valid(&ChainSpec::NmInf, &parse("p").unwrap()),
            Err(DecideError::Infinite(ChainSpec::NmInf))
        );
        assert_eq!(
            prop_valid(&ChainSpec::NmFin(3), &parse("forall x. P(x)").unwrap()),
            Err(DecideError::NotPropositional)
        );
        let wide = Schema::Sep(12).formula();
        assert!(matches!(
            prop_valid_within(&ChainSpec::NmFin(9), &wide, 1000),
            Err(DecideError::Budget { .. })
        ));
    }

    #[test]
    fn search_examples() {
        let law15 = Schema::Shift(15).formula();
        let out = search_countermodel(&ChainSpec::NmFin(4), &law15, 3, DEFAULT_BUDGET).unwrap();
        assert!(!out.is_found());
        let cup = Schema::Cup.formula();
        assert!(!search_countermodel(&ChainSpec::NmFin(2), &cup, 2, DEFAULT_BUDGET)
            .unwrap()
            .is_found());
        let sep = Schema::Sep(2).formula();
        match search_countermodel(&ChainSpec::NmFin(3), &sep, 1, DEFAULT_BUDGET).unwrap() {
            SearchOutcome::Found { model, value } => {
                assert_eq!(value, r("1/2"));
                let vals: Vec<Rational> = model.atomic_values().cloned().collect();
                assert_eq!(vals, vec![r("1"), r("1/2"), r("0")]);
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
        assert!(matches!(
            search_countermodel(&ChainSpec::NmFin(3), &sep, 5, DEFAULT_BUDGET),
            Err(DecideError::DomainSize(5))
        ));
        assert!(matches!(
            search_countermodel(&ChainSpec::NmFin(3), &parse("P(x)").unwrap(), 1, DEFAULT_BUDGET),
            Err(DecideError::NotClosed(_))
        ));
        assert!(matches!(
            search_countermodel(&ChainSpec::NmFin(9), &parse("forall x. forall y. R(x,y)").unwrap(), 4, 1000),
            Err(DecideError::Budget { .. })
        ));
    }

    #[test]
    fn found_countermodels_reproduce() {
        let f = Schema::Shift(16).formula();
        let SearchOutcome::Found { model, value } =
            search_countermodel(&ChainSpec::NmFin(3), &f, 2, DEFAULT_BUDGET).unwrap()
        else {
            panic!("law 16 has a countermodel on nm3");
        };
        assert_eq!(model.model_value(&f).unwrap().into_value(), value);
        assert!(value < Rational::one());
    }

    #[test]
    fn classification_examples() {
        let c = classify_chain(&ChainSpec::NmPrimeInf);
        assert!(c.has_fixpoint && !c.all_have_predecessor);
        assert_eq!(c.shifting_valid, (1..=14).collect::<Vec<u8>>());
        assert_eq!(c.shifting_invalid, vec![15, 16, 17, 18]);
        assert_eq!((c.c_up, c.c_down), (Some(false), Some(false)));

        let c = classify_chain(&ChainSpec::NmInf);
        assert!(c.has_fixpoint && c.all_have_predecessor);
        assert_eq!(c.shifting_valid.len(), 18);
        assert_eq!(c.c_up, Some(true));
        assert_eq!(c.sn_from, None);

        let c = classify_chain(&ChainSpec::NmFin(4));
        assert!(!c.has_fixpoint && c.all_have_predecessor);
        assert_eq!(c.shifting_valid.len(), 18);
        assert_eq!(c.bp, Some(true));
        // 4 < 2n + 2 from n = 2 on
        assert_eq!(c.sn_from, Some(2));
        assert_eq!(classify_chain(&ChainSpec::NmFin(5)).sn_from, Some(2));
        assert_eq!(classify_chain(&ChainSpec::NmFin(6)).sn_from, Some(3));
        assert_eq!(classify_chain(&ChainSpec::NmFin(3)).sn_from, Some(1));

        let g = classify_chain(&ChainSpec::GUp);
        assert!(!g.nm && g.c_up.is_none() && g.shifting_valid.is_empty());
    }
}
