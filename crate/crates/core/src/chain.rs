//! The chain families: carriers, NM and Gödel operations, order queries.
//!
//! Infinite carriers are membership predicates on rationals. All NM chains
//! here are subalgebras of the standard one, so `n(x) = 1 - x` throughout.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("{value} is not an element of {chain}")]
    NotInChain { chain: ChainSpec, value: Rational },
    #[error("{0} is infinite and cannot be enumerated")]
    Infinite(ChainSpec),
    #[error("invalid chain `{0}`: {1}")]
    Invalid(String, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainSpec {
    /// `{0, 1/(n-1), ..., 1}` with the NM operations.
    NmFin(u32),
    /// `{1/m} u {1 - 1/m}`.
    NmInf,
    /// `NmInf` without `1/2`.
    NmInfMinus,
    /// `{1/2 +- 1/(2m)} u {1/2}`.
    NmPrimeInf,
    /// `NmPrimeInf` without `1/2`.
    NmPrimeInfMinus,
    /// Rationals of `[0,1]` with the NM operations.
    StdNm,
    /// `[1-a, a] u {0,1}`; the parameter is always stored as `a = max(alpha, 1-alpha)`.
    Aalpha(Rational),
    /// `{0, 1/(n-1), ..., 1}` with the Gödel operations.
    GFin(u32),
    /// `{1 - 1/m} u {1}`.
    GUp,
    /// `{1/m} u {0}`.
    GDown,
    /// Rationals of `[0,1]` with the Gödel operations.
    StdG,
}

use ChainSpec::*;

fn in_unit(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

/// `q` is `1/m` for some positive integer `m`.
fn unit_fraction(q: &Rational) -> bool {
    q.is_positive() && q.is_unit_fraction()
}

impl ChainSpec {
    pub fn nm_fin(n: u32) -> Result<ChainSpec, ChainError> {
        if n < 2 {
            return Err(ChainError::Invalid(format!("nm{n}"), "size must be at least 2"));
        }
        Ok(NmFin(n))
    }

    pub fn g_fin(n: u32) -> Result<ChainSpec, ChainError> {
        if n < 2 {
            return Err(ChainError::Invalid(format!("g{n}"), "size must be at least 2"));
        }
        Ok(GFin(n))
    }

    /// `A_alpha`, normalized so that `A_alpha` and `A_{1-alpha}` coincide.
    pub fn a_alpha(alpha: Rational) -> Result<ChainSpec, ChainError> {
        if !alpha.is_positive() || alpha >= Rational::one() {
            return Err(ChainError::Invalid(
                format!("a:{alpha}"),
                "alpha must lie strictly between 0 and 1",
            ));
        }
        let c = alpha.complement();
        Ok(Aalpha(if alpha >= c { alpha } else { c }))
    }

    pub fn is_nm(&self) -> bool {
        !self.is_godel()
    }

    pub fn is_godel(&self) -> bool {
        matches!(self, GFin(_) | GUp | GDown | StdG)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NmFin(_) | GFin(_))
    }

    /// Number of elements of a finite chain.
    pub fn size(&self) -> Option<u32> {
        match self {
            NmFin(n) | GFin(n) => Some(*n),
            _ => None,
        }
    }

    pub fn has_fixpoint(&self) -> bool {
        match self {
            NmFin(n) => n % 2 == 1,
            NmInf | NmPrimeInf | StdNm | Aalpha(_) => true,
            _ => false,
        }
    }

    /// The negation fixpoint `1/2`, when it belongs to the chain.
    pub fn fixpoint(&self) -> Option<Rational> {
        self.has_fixpoint().then(Rational::half)
    }

    pub fn is_complete(&self) -> bool {
        !matches!(self, NmPrimeInfMinus)
    }

    /// Every element other than 0 and 1 has an immediate lower neighbour.
    pub fn all_have_predecessor(&self) -> bool {
        match self {
            NmFin(_) | NmInf | NmInfMinus | NmPrimeInfMinus | GFin(_) | GUp | GDown => true,
            NmPrimeInf | StdNm | StdG => false,
            // a = 1/2 degenerates to the three-element chain
            Aalpha(a) => *a == Rational::half(),
        }
    }

    /// Every element other than 0 and 1 has an immediate upper neighbour.
    pub fn all_have_successor(&self) -> bool {
        match self {
            NmFin(_) | NmInf | NmInfMinus | NmPrimeInfMinus | GFin(_) | GUp | GDown => true,
            NmPrimeInf | StdNm | StdG => false,
            Aalpha(a) => *a == Rational::half(),
        }
    }

    pub fn mem(&self, q: &Rational) -> bool {
        if !in_unit(q) {
            return false;
        }
        let half = Rational::half();
        match self {
            NmFin(n) | GFin(n) => (q * Rational::from(u64::from(n - 1))).is_integer(),
            NmInf => q.is_zero() || unit_fraction(q) || unit_fraction(&q.complement()),
            NmInfMinus => *q != half && NmInf.mem(q),
            NmPrimeInf => {
                let d = (q * Rational::from_integer(2) - Rational::one()).abs();
                *q == half || unit_fraction(&d)
            }
            NmPrimeInfMinus => *q != half && NmPrimeInf.mem(q),
            StdNm | StdG => true,
            Aalpha(a) => q.is_zero() || q.is_one() || (a.complement() <= *q && q <= a),
            GUp => q.is_one() || unit_fraction(&q.complement()),
            GDown => q.is_zero() || unit_fraction(q),
        }
    }

    pub fn check(&self, q: &Rational) -> Result<(), ChainError> {
        if self.mem(q) {
            Ok(())
        } else {
            Err(ChainError::NotInChain {
                chain: self.clone(),
                value: q.clone(),
            })
        }
    }

    pub fn element(&self, q: Rational) -> Result<ChainElement, ChainError> {
        self.check(&q)?;
        Ok(ChainElement {
            chain: self.clone(),
            value: q,
        })
    }

    /// The t-norm on raw values; the caller guarantees membership.
    pub fn tnorm(&self, x: &Rational, y: &Rational) -> Rational {
        if self.is_godel() || x > &y.complement() {
            x.min_ref(y).clone()
        } else {
            Rational::zero()
        }
    }

    /// The residuum on raw values; the caller guarantees membership.
    pub fn residuum(&self, x: &Rational, y: &Rational) -> Rational {
        if x <= y {
            Rational::one()
        } else if self.is_godel() {
            y.clone()
        } else {
            x.complement().max_ref(y).clone()
        }
    }

    pub fn negation(&self, x: &Rational) -> Rational {
        if self.is_godel() {
            if x.is_zero() {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            x.complement()
        }
    }

    /// Ascending list of all elements of a finite chain.
    pub fn enumerate(&self) -> Result<Vec<Rational>, ChainError> {
        match self {
            NmFin(n) | GFin(n) => {
                let d = i64::from(n - 1);
                Ok((0..=d).map(|i| Rational::new(i, d)).collect())
            }
            _ => Err(ChainError::Infinite(self.clone())),
        }
    }

    /// Greatest element `<= q`, or `None` when there is no greatest one.
    pub fn floor_in(&self, q: &Rational) -> Option<Rational> {
        if q.is_negative() {
            return None;
        }
        if *q >= Rational::one() {
            return Some(Rational::one());
        }
        let one = Rational::one();
        let half = Rational::half();
        let two = Rational::from_integer(2);
        match self {
            NmFin(n) | GFin(n) => {
                let d = Rational::from(u64::from(n - 1));
                Some((q * &d).floor() / d)
            }
            NmInf => Some(nm_inf_floor(q)),
            NmInfMinus => {
                let f = nm_inf_floor(q);
                Some(if f == half { Rational::new(1, 3) } else { f })
            }
            NmPrimeInf | NmPrimeInfMinus => {
                if *q == half {
                    return matches!(self, NmPrimeInf).then_some(half);
                }
                if *q > half {
                    let m = (q * &two - &one).recip().ceil();
                    Some(half + (&two * m).recip())
                } else {
                    let m = (&one - q * &two).recip().floor();
                    Some(half - (&two * m).recip())
                }
            }
            StdNm | StdG => Some(q.clone()),
            Aalpha(a) => Some(if q > a {
                a.clone()
            } else if *q >= a.complement() {
                q.clone()
            } else {
                Rational::zero()
            }),
            GUp => Some(one.clone() - q.complement().recip().floor().recip()),
            GDown => Some(if q.is_zero() {
                Rational::zero()
            } else {
                q.recip().ceil().recip()
            }),
        }
    }

    /// Least element `>= q`, or `None` when there is no least one.
    pub fn ceil_in(&self, q: &Rational) -> Option<Rational> {
        if *q > Rational::one() {
            return None;
        }
        if !q.is_positive() {
            return Some(Rational::zero());
        }
        match self {
            NmFin(n) | GFin(n) => {
                let d = Rational::from(u64::from(n - 1));
                Some((q * &d).ceil() / d)
            }
            GUp => Some(if q.is_one() {
                Rational::one()
            } else {
                Rational::one() - q.complement().recip().ceil().recip()
            }),
            GDown => Some(q.recip().floor().recip()),
            StdG => Some(q.clone()),
            // NM carriers are closed under 1 - x
            _ => self.floor_in(&q.complement()).map(|f| f.complement()),
        }
    }

    /// Whether `x` (an element other than 0 and 1) has an immediate lower neighbour.
    pub fn has_predecessor(&self, x: &Rational) -> bool {
        match self {
            NmPrimeInf => *x != Rational::half(),
            StdNm | StdG => false,
            Aalpha(a) => *x == a.complement(),
            _ => self.all_have_predecessor(),
        }
    }

    /// Whether `x` (an element other than 0 and 1) has an immediate upper neighbour.
    pub fn has_successor(&self, x: &Rational) -> bool {
        match self {
            NmPrimeInf => *x != Rational::half(),
            StdNm | StdG => false,
            Aalpha(a) => x == a,
            _ => self.all_have_successor(),
        }
    }

    /// A random element; `spread` bounds the denominators used for infinite carriers.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, spread: u32) -> Rational {
        let spread = i64::from(spread.max(3));
        let half = Rational::half();
        let m = |rng: &mut R| rng.gen_range(1..=spread);
        match self {
            NmFin(n) | GFin(n) => {
                let d = i64::from(n - 1);
                Rational::new(rng.gen_range(0..=d), d)
            }
            NmInf | NmInfMinus => loop {
                let r = Rational::new(1, m(rng));
                let v = if rng.gen_bool(0.5) { r } else { r.complement() };
                if self.mem(&v) {
                    return v;
                }
            },
            NmPrimeInf | NmPrimeInfMinus => {
                if matches!(self, NmPrimeInf) && rng.gen_ratio(1, 8) {
                    return half;
                }
                let d = Rational::new(1, 2 * m(rng));
                if rng.gen_bool(0.5) {
                    &half + d
                } else {
                    &half - d
                }
            }
            StdNm | StdG => {
                let d = m(rng);
                Rational::new(rng.gen_range(0..=d), d)
            }
            Aalpha(a) => match rng.gen_range(0..8) {
                0 => Rational::zero(),
                1 => Rational::one(),
                _ => {
                    let d = m(rng);
                    let lo = a.complement();
                    let width = a - &lo;
                    lo + width * Rational::new(rng.gen_range(0..=d), d)
                }
            },
            GUp => {
                if rng.gen_ratio(1, 8) {
                    Rational::one()
                } else {
                    Rational::new(1, m(rng)).complement()
                }
            }
            GDown => {
                if rng.gen_ratio(1, 8) {
                    Rational::zero()
                } else {
                    Rational::new(1, m(rng))
                }
            }
        }
    }

    /// The CLI name, e.g. `nm5`, `nm-prime-inf`, `a:3/4`.
    pub fn name(&self) -> String {
        self.to_string()
    }
}

fn nm_inf_floor(q: &Rational) -> Rational {
    // largest 1/m <= q and largest 1 - 1/m <= q
    let low = if q.is_zero() {
        Rational::zero()
    } else {
        q.recip().ceil().recip()
    };
    let high = Rational::one() - q.complement().recip().floor().recip();
    low.max(high)
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NmFin(n) => write!(f, "nm{n}"),
            NmInf => f.write_str("nm-inf"),
            NmInfMinus => f.write_str("nm-inf-minus"),
            NmPrimeInf => f.write_str("nm-prime-inf"),
            NmPrimeInfMinus => f.write_str("nm-prime-inf-minus"),
            StdNm => f.write_str("std-nm"),
            Aalpha(a) => write!(f, "a:{a}"),
            GFin(n) => write!(f, "g{n}"),
            GUp => f.write_str("g-up"),
            GDown => f.write_str("g-down"),
            StdG => f.write_str("std-g"),
        }
    }
}

impl FromStr for ChainSpec {
    type Err = ChainError;

    fn from_str(s: &str) -> Result<ChainSpec, ChainError> {
        let t = s.trim().to_ascii_lowercase();
        let fixed = match t.as_str() {
            "nm-inf" => Some(NmInf),
            "nm-inf-minus" => Some(NmInfMinus),
            "nm-prime-inf" => Some(NmPrimeInf),
            "nm-prime-inf-minus" => Some(NmPrimeInfMinus),
            "std-nm" => Some(StdNm),
            "g-up" => Some(GUp),
            "g-down" => Some(GDown),
            "std-g" => Some(StdG),
            _ => None,
        };
        if let Some(c) = fixed {
            return Ok(c);
        }
        if let Some(alpha) = t.strip_prefix("a:") {
            let a = alpha
                .parse::<Rational>()
                .map_err(|_| ChainError::Invalid(s.to_string(), "malformed alpha"))?;
            return ChainSpec::a_alpha(a);
        }
        let size = |digits: &str| {
            digits
                .parse::<u32>()
                .map_err(|_| ChainError::Invalid(s.to_string(), "unknown chain name"))
        };
        if let Some(d) = t.strip_prefix("nm") {
            return ChainSpec::nm_fin(size(d)?);
        }
        if let Some(d) = t.strip_prefix('g') {
            return ChainSpec::g_fin(size(d)?);
        }
        Err(ChainError::Invalid(s.to_string(), "unknown chain name"))
    }
}

impl Serialize for ChainSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ChainSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<ChainSpec, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A value certified to belong to its chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainElement {
    chain: ChainSpec,
    value: Rational,
}

impl ChainElement {
    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn into_value(self) -> Rational {
        self.value
    }

    fn same_chain(&self, other: &ChainElement) -> Result<(), ChainError> {
        if self.chain == other.chain {
            Ok(())
        } else {
            Err(ChainError::NotInChain {
                chain: self.chain.clone(),
                value: other.value.clone(),
            })
        }
    }

    fn wrap(&self, value: Rational) -> ChainElement {
        ChainElement {
            chain: self.chain.clone(),
            value,
        }
    }

    pub fn tnorm(&self, other: &ChainElement) -> Result<ChainElement, ChainError> {
        self.same_chain(other)?;
        Ok(self.wrap(self.chain.tnorm(&self.value, &other.value)))
    }

    pub fn residuum(&self, other: &ChainElement) -> Result<ChainElement, ChainError> {
        self.same_chain(other)?;
        Ok(self.wrap(self.chain.residuum(&self.value, &other.value)))
    }

    pub fn negation(&self) -> ChainElement {
        self.wrap(self.chain.negation(&self.value))
    }

    pub fn meet(&self, other: &ChainElement) -> Result<ChainElement, ChainError> {
        self.same_chain(other)?;
        Ok(self.wrap(self.value.min_ref(&other.value).clone()))
    }

    pub fn join(&self, other: &ChainElement) -> Result<ChainElement, ChainError> {
        self.same_chain(other)?;
        Ok(self.wrap(self.value.max_ref(&other.value).clone()))
    }
}

impl fmt::Display for ChainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}
