//! Generators for the named formula families.
//!
//! `phi(x)` and `psi(x)` are instantiated as `P(x)` and `Q(x)`, `nu` as the
//! 0-ary atom `q`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("unknown schema `{0}` (expected sn, bp, cup, cdown, star, shift or sep)")]
    Unknown(String),
    #[error("schema `{0}` needs a parameter")]
    MissingParameter(String),
    #[error("schema `{0}` takes no parameter")]
    UnexpectedParameter(String),
    #[error("invalid parameter {value} for schema `{name}`: {reason}")]
    InvalidParameter {
        name: String,
        value: i64,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    /// `/\_{i<n} ((x_i -> x_{i+1}) -> x_{i+1}) -> \/_{i<=n} x_i`
    Sn(u32),
    /// `~(~p^2)^2 <-> (~(~p)^2)^2`
    Bp,
    /// `exists x. (P(x) -> forall y. P(y))`
    Cup,
    /// `exists x. (exists y. P(y) -> P(x))`
    Cdown,
    /// `forall x. (P(x) & q) <-> (forall x. P(x)) & q`
    Star,
    /// One of the eighteen quantifier shifting laws, numbered 1..=18.
    Shift(u8),
    /// `\/_{i=1..k} (p_i -> p_{i+1})`
    Sep(u32),
}

fn px() -> Formula {
    Formula::atom("P", &["x"])
}

fn qx() -> Formula {
    Formula::atom("Q", &["x"])
}

fn nu() -> Formula {
    Formula::prop("q")
}

fn all(f: Formula) -> Formula {
    Formula::forall("x", f)
}

fn ex(f: Formula) -> Formula {
    Formula::exists("x", f)
}

fn shifting_law(i: u8) -> Formula {
    use Formula as F;
    let (lhs, rhs) = match i {
        1 => (all(F::and(px(), nu())), F::and(all(px()), nu())),
        2 => (ex(F::and(px(), nu())), F::and(ex(px()), nu())),
        3 => (all(F::or(px(), nu())), F::or(all(px()), nu())),
        4 => (ex(F::or(px(), nu())), F::or(ex(px()), nu())),
        5 => (all(F::and(px(), qx())), F::and(all(px()), all(qx()))),
        6 => (ex(F::and(px(), qx())), F::and(ex(px()), ex(qx()))),
        7 => (all(F::or(px(), qx())), F::or(all(px()), all(qx()))),
        8 => (ex(F::or(px(), qx())), F::or(ex(px()), ex(qx()))),
        9 => (ex(F::strong(px(), nu())), F::strong(ex(px()), nu())),
        10 => (ex(F::strong(px(), qx())), F::strong(ex(px()), ex(qx()))),
        11 => (all(F::implies(px(), nu())), F::implies(ex(px()), nu())),
        12 => (all(F::implies(nu(), px())), F::implies(nu(), all(px()))),
        13 => (F::not(ex(px())), all(F::not(px()))),
        14 => (F::not(all(px())), ex(F::not(px()))),
        15 => (all(F::strong(px(), nu())), F::strong(all(px()), nu())),
        16 => (all(F::strong(px(), qx())), F::strong(all(px()), all(qx()))),
        17 => (ex(F::implies(px(), nu())), F::implies(all(px()), nu())),
        18 => (ex(F::implies(nu(), px())), F::implies(nu(), ex(px()))),
        _ => unreachable!("shifting law index checked by caller"),
    };
    F::iff(lhs, rhs)
}

impl Schema {
    pub fn formula(&self) -> Formula {
        use Formula as F;
        match *self {
            Schema::Sn(n) => {
                let x = |i: u32| F::prop(format!("x{i}"));
                let premise = F::big_and(
                    (0..n).map(|i| F::implies(F::implies(x(i), x(i + 1)), x(i + 1))),
                )
                .expect("n >= 1");
                let conclusion = F::big_or((0..=n).map(x)).expect("non-empty");
                F::implies(premise, conclusion)
            }
            Schema::Bp => {
                let p = F::prop("p");
                let lhs = F::not(F::square(F::not(F::square(p.clone()))));
                let rhs = F::square(F::not(F::square(F::not(p))));
                F::iff(lhs, rhs)
            }
            Schema::Cup => F::exists(
                "x",
                F::implies(px(), F::forall("y", F::atom("P", &["y"]))),
            ),
            Schema::Cdown => F::exists(
                "x",
                F::implies(F::exists("y", F::atom("P", &["y"])), px()),
            ),
            Schema::Star => shifting_law(15),
            Schema::Shift(i) => shifting_law(i),
            Schema::Sep(k) => {
                let p = |i: u32| F::prop(format!("p{i}"));
                F::big_or((1..=k).map(|i| F::implies(p(i), p(i + 1)))).expect("k >= 1")
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Schema::Sn(_) => "sn",
            Schema::Bp => "bp",
            Schema::Cup => "cup",
            Schema::Cdown => "cdown",
            Schema::Star => "star",
            Schema::Shift(_) => "shift",
            Schema::Sep(_) => "sep",
        }
    }

    /// Builds a schema from its id and parameter list.
    pub fn from_parts(name: &str, params: &[i64]) -> Result<Schema, SchemaError> {
        let lower = name.to_ascii_lowercase();
        let one = |lo: i64, hi: i64, reason: &'static str| -> Result<i64, SchemaError> {
            match params {
                [] => Err(SchemaError::MissingParameter(lower.clone())),
                [v] if (lo..=hi).contains(v) => Ok(*v),
                [v] => Err(SchemaError::InvalidParameter {
                    name: lower.clone(),
                    value: *v,
                    reason,
                }),
                [_, extra, ..] => Err(SchemaError::InvalidParameter {
                    name: lower.clone(),
                    value: *extra,
                    reason: "exactly one parameter expected",
                }),
            }
        };
        let none = |s: Schema| {
            if params.is_empty() {
                Ok(s)
            } else {
                Err(SchemaError::UnexpectedParameter(lower.clone()))
            }
        };
        match lower.as_str() {
            "sn" => Ok(Schema::Sn(one(1, 64, "must be positive")? as u32)),
            "sep" => Ok(Schema::Sep(one(1, 64, "must be positive")? as u32)),
            "shift" => Ok(Schema::Shift(one(1, 18, "laws are numbered 1..18")? as u8)),
            "bp" => none(Schema::Bp),
            "cup" => none(Schema::Cup),
            "cdown" => none(Schema::Cdown),
            "star" => none(Schema::Star),
            _ => Err(SchemaError::Unknown(name.to_string())),
        }
    }
}

/// Formula instance of the named schema.
pub fn schema(name: &str, params: &[i64]) -> Result<Formula, SchemaError> {
    Schema::from_parts(name, params).map(|s| s.formula())
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schema::Sn(n) => write!(f, "sn:{n}"),
            Schema::Shift(i) => write!(f, "shift:{i}"),
            Schema::Sep(k) => write!(f, "sep:{k}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Schema {
    type Err = SchemaError;

    /// Accepts `name` or `name:p1,p2,...`.
    fn from_str(s: &str) -> Result<Schema, SchemaError> {
        let (name, params) = match s.split_once(':') {
            Some((n, rest)) => {
                let params = rest
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<i64>().map_err(|_| SchemaError::InvalidParameter {
                            name: n.to_string(),
                            value: 0,
                            reason: "parameters must be integers",
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                (n, params)
            }
            None => (s, Vec::new()),
        };
        Schema::from_parts(name.trim(), &params)
    }
}
