//! Exhaustive enumeration of interpretations over a finite chain.
//!
//! Positions are (predicate, tuple) pairs with predicates in name order and
//! tuples lexicographic; each position ranges over the carrier in ascending
//! order, and the first position is the most significant.

use crate::chain::{ChainError, ChainSpec};
use crate::rational::Rational;

use super::{default_domain, FiniteModel, ModelError};

#[derive(Debug, Clone)]
pub struct ModelSpace {
    chain: ChainSpec,
    carrier: Vec<Rational>,
    domain: usize,
    signature: Vec<(String, usize)>,
    positions: usize,
}

/// Mixed-radix counter over `positions` digits in base `base`.
#[derive(Debug, Clone)]
pub struct Odometer {
    digits: Vec<usize>,
    base: usize,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(positions: usize, base: usize) -> Odometer {
        Odometer {
            digits: vec![0; positions],
            base,
            started: false,
            done: base == 0,
        }
    }

    /// Advances and returns the next digit vector.
    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                return Some(&self.digits);
            }
            *d = 0;
        }
        self.done = true;
        None
    }
}

impl ModelSpace {
    pub fn new(
        chain: &ChainSpec,
        domain: usize,
        signature: &[(String, usize)],
    ) -> Result<ModelSpace, ChainError> {
        let carrier = chain.enumerate()?;
        let positions = signature
            .iter()
            .map(|(_, k)| domain.pow(*k as u32))
            .sum();
        Ok(ModelSpace {
            chain: chain.clone(),
            carrier,
            domain,
            signature: signature.to_vec(),
            positions,
        })
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn carrier(&self) -> &[Rational] {
        &self.carrier
    }

    /// Number of interpretations, if it fits.
    pub fn count(&self) -> Option<u128> {
        (self.carrier.len() as u128).checked_pow(u32::try_from(self.positions).ok()?)
    }

    pub fn odometer(&self) -> Odometer {
        Odometer::new(self.positions, self.carrier.len())
    }

    /// Tables in signature order for a digit vector.
    pub fn tables(&self, digits: &[usize]) -> Vec<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.signature.len());
        let mut at = 0;
        for (_, k) in &self.signature {
            let len = self.domain.pow(*k as u32);
            out.push(
                digits[at..at + len]
                    .iter()
                    .map(|d| self.carrier[*d].clone())
                    .collect(),
            );
            at += len;
        }
        out
    }

    pub fn model(&self, digits: &[usize]) -> Result<FiniteModel, ModelError> {
        let mut m = FiniteModel::new(self.chain.clone(), default_domain(self.domain))?;
        for ((p, k), values) in self.signature.iter().zip(self.tables(digits)) {
            m.set_table(p, *k, values)?;
        }
        Ok(m)
    }

    /// All models in canonical order.
    pub fn models(&self) -> impl Iterator<Item = FiniteModel> + '_ {
        let mut odo = self.odometer();
        std::iter::from_fn(move || {
            let digits = odo.next()?.to_vec();
            Some(self.model(&digits).expect("enumerated values are members"))
        })
    }
}
