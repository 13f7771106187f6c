//! JSON model files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::rational::Rational;

use super::{unflatten, FiniteModel, ModelError};

/// On-disk form: `{"chain": "nm5", "domain": ["a","b"],
/// "predicates": {"P": {"(a)": "1/2", "(b)": "1"}, "q": {"()": "1/2"}},
/// "constants": {}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub chain: ChainSpec,
    pub domain: Vec<String>,
    #[serde(default)]
    pub predicates: BTreeMap<String, BTreeMap<String, Rational>>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
}

fn parse_tuple(key: &str) -> Result<Vec<String>, ModelError> {
    let t = key.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ModelError::BadTuple(key.to_string()))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            let s = s.trim();
            if s.is_empty() {
                Err(ModelError::BadTuple(key.to_string()))
            } else {
                Ok(s.to_string())
            }
        })
        .collect()
}

fn tuple_key(names: &[&str]) -> String {
    format!("({})", names.join(","))
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<ModelFile, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialize")
    }

    pub fn into_model(self) -> Result<FiniteModel, ModelError> {
        let mut m = FiniteModel::new(self.chain, self.domain)?;
        let n = m.domain().len();
        for (pred, entries) in &self.predicates {
            let mut arity = None;
            let mut cells: Vec<Option<Rational>> = Vec::new();
            for (key, value) in entries {
                let tuple = parse_tuple(key)?;
                let k = *arity.get_or_insert(tuple.len());
                if k != tuple.len() {
                    return Err(ModelError::ArityConflict {
                        pred: pred.clone(),
                        first: k,
                        second: tuple.len(),
                    });
                }
                if cells.is_empty() {
                    cells = vec![None; n.pow(k as u32)];
                }
                let mut idx = 0;
                for name in &tuple {
                    let i = m
                        .individual(name)
                        .ok_or_else(|| ModelError::UnknownIndividual(name.clone()))?;
                    idx = idx * n + i;
                }
                cells[idx] = Some(value.clone());
            }
            let Some(k) = arity else {
                return Err(ModelError::Partial {
                    pred: pred.clone(),
                    tuple: "every tuple".into(),
                });
            };
            let mut values = Vec::with_capacity(cells.len());
            for (idx, c) in cells.into_iter().enumerate() {
                match c {
                    Some(v) => values.push(v),
                    None => {
                        let names: Vec<&str> = unflatten(idx, k, n)
                            .into_iter()
                            .map(|i| m.domain()[i].as_str())
                            .collect();
                        return Err(ModelError::Partial {
                            pred: pred.clone(),
                            tuple: tuple_key(&names),
                        });
                    }
                }
            }
            m.set_table(pred, k, values)?;
        }
        for (c, ind) in &self.constants {
            m.set_constant(c, ind)?;
        }
        Ok(m)
    }

    pub fn from_model(m: &FiniteModel) -> ModelFile {
        let n = m.domain().len();
        let predicates = m
            .predicates()
            .iter()
            .map(|(p, t)| {
                let entries = t
                    .values
                    .iter()
                    .enumerate()
                    .map(|(idx, v)| {
                        let names: Vec<&str> = unflatten(idx, t.arity, n)
                            .into_iter()
                            .map(|i| m.domain()[i].as_str())
                            .collect();
                        (tuple_key(&names), v.clone())
                    })
                    .collect();
                (p.clone(), entries)
            })
            .collect();
        ModelFile {
            chain: m.chain().clone(),
            domain: m.domain().to_vec(),
            predicates,
            constants: m
                .constants()
                .map(|(c, i)| (c.to_string(), i.to_string()))
                .collect(),
        }
    }
}

impl FiniteModel {
    pub fn from_json(text: &str) -> Result<FiniteModel, ModelError> {
        ModelFile::from_json(text)?.into_model()
    }

    pub fn to_json(&self) -> String {
        ModelFile::from_model(self).to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    const SAMPLE: &str = r#"{"chain": "nm5", "domain": ["a","b"],
        "predicates": {"P": {"(a)": "1/2", "(b)": "1"}, "q": {"()": "1/2"}},
        "constants": {}}"#;

    #[test]
    fn reads_the_documented_format() {
        let m = FiniteModel::from_json(SAMPLE).unwrap();
        assert_eq!(m.chain(), &ChainSpec::NmFin(5));
        let v = m
            .model_value(&parse("forall x. P(x) & q").unwrap())
            .unwrap()
            .into_value();
        assert_eq!(v, Rational::zero());
    }

    #[test]
    fn round_trips() {
        let m = FiniteModel::from_json(SAMPLE).unwrap();
        let again = FiniteModel::from_json(&m.to_json()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = |s: &str| FiniteModel::from_json(s).unwrap_err();
        assert!(matches!(
            bad(r#"{"chain":"nm5","domain":["a","b"],"predicates":{"P":{"(a)":"1/2"}}}"#),
            ModelError::Partial { .. }
        ));
        assert!(matches!(
            bad(r#"{"chain":"nm5","domain":["a"],"predicates":{"P":{"(a)":"1/3"}}}"#),
            ModelError::Chain(_)
        ));
        assert!(matches!(
            bad(r#"{"chain":"nm5","domain":["a"],"predicates":{"P":{"(c)":"1"}}}"#),
            ModelError::UnknownIndividual(_)
        ));
        assert!(matches!(
            bad(r#"{"chain":"nm5","domain":["a"],"predicates":{"P":{"(a)":"1","()":"1"}}}"#),
            ModelError::ArityConflict { .. }
        ));
        assert!(matches!(
            bad(r#"{"chain":"nm5","domain":["a"],"predicates":{"P":{"a":"1"}}}"#),
            ModelError::BadTuple(_)
        ));
        assert!(matches!(bad(r#"{"chain":"nm9x","domain":["a"]}"#), ModelError::Json(_)));
        assert!(matches!(
            bad(r#"{"chain":"nm5","domain":["a"],"constants":{"c":"z"}}"#),
            ModelError::UnknownIndividual(_)
        ));
    }
}
