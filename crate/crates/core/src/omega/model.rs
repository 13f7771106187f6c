use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::finite_model::FiniteModel;
use crate::rational::Rational;

use super::ops::{seq_map, PointOp};
use super::tail::EventualSeq;
use super::OmegaError;

/// A model over the domain `{0, 1, 2, ...}` with monadic predicates given
/// by eventual sequences and 0-ary predicates by constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaModel {
    chain: ChainSpec,
    #[serde(default)]
    monadic: BTreeMap<String, EventualSeq>,
    #[serde(default)]
    zeroary: BTreeMap<String, Rational>,
}

impl OmegaModel {
    pub fn new(chain: ChainSpec) -> OmegaModel {
        OmegaModel {
            chain,
            monadic: BTreeMap::new(),
            zeroary: BTreeMap::new(),
        }
    }

    pub fn with_monadic(mut self, name: &str, seq: EventualSeq) -> Result<OmegaModel, OmegaError> {
        self.set_monadic(name, seq)?;
        Ok(self)
    }

    pub fn with_zeroary(mut self, name: &str, v: Rational) -> Result<OmegaModel, OmegaError> {
        self.set_zeroary(name, v)?;
        Ok(self)
    }

    pub fn set_monadic(&mut self, name: &str, seq: EventualSeq) -> Result<(), OmegaError> {
        if let Some(reason) = seq.membership_error(&self.chain) {
            return Err(OmegaError::InvalidSequence {
                pred: name.to_string(),
                reason,
            });
        }
        self.zeroary.remove(name);
        self.monadic.insert(name.to_string(), seq);
        Ok(())
    }

    pub fn set_zeroary(&mut self, name: &str, v: Rational) -> Result<(), OmegaError> {
        self.chain.check(&v)?;
        self.monadic.remove(name);
        self.zeroary.insert(name.to_string(), v);
        Ok(())
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn monadic(&self) -> &BTreeMap<String, EventualSeq> {
        &self.monadic
    }

    pub fn zeroary(&self) -> &BTreeMap<String, Rational> {
        &self.zeroary
    }

    /// Re-checks every invariant; used after deserializing.
    pub fn validate(&self) -> Result<(), OmegaError> {
        for (p, s) in &self.monadic {
            if let Some(reason) = s.membership_error(&self.chain) {
                return Err(OmegaError::InvalidSequence {
                    pred: p.clone(),
                    reason,
                });
            }
        }
        for v in self.zeroary.values() {
            self.chain.check(v)?;
        }
        if let Some(p) = self.monadic.keys().find(|p| self.zeroary.contains_key(*p)) {
            return Err(OmegaError::Arity(p.clone()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<OmegaModel, OmegaError> {
        let m: OmegaModel =
            serde_json::from_str(text).map_err(|e| OmegaError::Json(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("omega models serialize")
    }

    /// The finite model on the individuals `0..len`, named `w0, w1, ...`.
    pub fn prefix(&self, len: u64) -> Result<FiniteModel, OmegaError> {
        let domain: Vec<String> = (0..len).map(|j| format!("w{j}")).collect();
        let mut m = FiniteModel::new(self.chain.clone(), domain)
            .map_err(|e| OmegaError::Json(e.to_string()))?;
        for (p, s) in &self.monadic {
            m.set_table(p, 1, (0..len).map(|j| s.at(j)).collect())
                .map_err(|e| OmegaError::Json(e.to_string()))?;
        }
        for (p, v) in &self.zeroary {
            m.set_table(p, 0, vec![v.clone()])
                .map_err(|e| OmegaError::Json(e.to_string()))?;
        }
        Ok(m)
    }

    /// Applies a unary pointwise map to every atomic value.
    pub fn map_values(&self, chain: ChainSpec, op: &PointOp) -> Result<OmegaModel, OmegaError> {
        let mut out = OmegaModel::new(chain);
        for (p, s) in &self.monadic {
            out.set_monadic(p, seq_map(&self.chain, op, s))?;
        }
        for (p, v) in &self.zeroary {
            let mapped = super::ops::scalar_apply(&self.chain, op, v, v);
            out.set_zeroary(p, mapped)?;
        }
        Ok(out)
    }
}
