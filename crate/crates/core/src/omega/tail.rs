use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::rational::Rational;

/// `j -> base + coeff / (j + shift + 1)` for `j >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailExpr {
    pub base: Rational,
    #[serde(default = "Rational::zero")]
    pub coeff: Rational,
    #[serde(default)]
    pub shift: u64,
}

impl TailExpr {
    pub fn new(base: Rational, coeff: Rational, shift: u64) -> TailExpr {
        let shift = if coeff.is_zero() { 0 } else { shift };
        TailExpr { base, coeff, shift }
    }

    pub fn constant(v: Rational) -> TailExpr {
        TailExpr::new(v, Rational::zero(), 0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn at(&self, j: u64) -> Rational {
        if self.coeff.is_zero() {
            return self.base.clone();
        }
        &self.base + &self.coeff / Rational::from(j + self.shift + 1)
    }

    /// `j -> 1 - self(j)`.
    pub fn complement(&self) -> TailExpr {
        TailExpr::new(self.base.complement(), -&self.coeff, self.shift)
    }

    fn k(&self) -> Rational {
        Rational::from(self.shift + 1)
    }
}

impl fmt::Display for TailExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{} + ({})/(j+{})", self.base, self.coeff, self.shift + 1)
        }
    }
}

/// Ordering of `a(j)` against `b(j)` for every `j >= threshold`.
pub fn eventual_cmp(a: &TailExpr, b: &TailExpr) -> (Ordering, u64) {
    // (a(j) - b(j)) (j+k1)(j+k2) = c2 j^2 + c1 j + c0
    let (k1, k2) = (a.k(), b.k());
    let d = &a.base - &b.base;
    let c2 = d.clone();
    let c1 = &d * (&k1 + &k2) + &a.coeff - &b.coeff;
    let c0 = &d * &k1 * &k2 + &a.coeff * &k2 - &b.coeff * &k1;
    let coeffs = [c0, c1, c2];
    let Some(lead) = coeffs.iter().rposition(|c| !c.is_zero()) else {
        return (Ordering::Equal, 0);
    };
    let sign = coeffs[lead].signum();
    if lead == 0 {
        return (sign, 0);
    }
    // Cauchy bound on the real roots
    let top = coeffs[lead].abs();
    let bound = coeffs[..lead]
        .iter()
        .map(|c| c.abs() / &top)
        .max()
        .expect("lead > 0");
    let threshold = (bound + Rational::one()).floor() + Rational::one();
    (sign, threshold.to_u64().unwrap_or(u64::MAX))
}

/// A sequence given by finitely many exceptions over a tail expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventualSeq {
    pub tail: TailExpr,
    #[serde(default)]
    pub exceptions: BTreeMap<u64, Rational>,
}

impl EventualSeq {
    /// Builds the sequence, dropping exceptions that agree with the tail.
    pub fn new(tail: TailExpr, exceptions: BTreeMap<u64, Rational>) -> EventualSeq {
        let exceptions = exceptions
            .into_iter()
            .filter(|(j, v)| *v != tail.at(*j))
            .collect();
        EventualSeq { tail, exceptions }
    }

    pub fn constant(v: Rational) -> EventualSeq {
        EventualSeq::from_tail(TailExpr::constant(v))
    }

    pub fn from_tail(tail: TailExpr) -> EventualSeq {
        EventualSeq {
            tail,
            exceptions: BTreeMap::new(),
        }
    }

    pub fn at(&self, j: u64) -> Rational {
        match self.exceptions.get(&j) {
            Some(v) => v.clone(),
            None => self.tail.at(j),
        }
    }

    /// One past the largest exception index.
    pub fn prefix_len(&self) -> u64 {
        self.exceptions.keys().next_back().map_or(0, |j| j + 1)
    }

    /// Constant value, if the sequence is constant.
    pub fn as_constant(&self) -> Option<&Rational> {
        (self.tail.is_constant() && self.exceptions.is_empty()).then_some(&self.tail.base)
    }

    /// Why the sequence is not provably inside `chain`, if it is not.
    pub fn membership_error(&self, chain: &ChainSpec) -> Option<String> {
        for (j, v) in &self.exceptions {
            if !chain.mem(v) {
                return Some(format!("exception at {j} is {v}, not in {chain}"));
            }
        }
        let Some(start) = tail_start(chain, &self.tail) else {
            return Some(format!("tail {} is not provably inside {chain}", self.tail));
        };
        (0..start)
            .filter(|j| !self.exceptions.contains_key(j))
            .find(|j| !chain.mem(&self.tail.at(*j)))
            .map(|j| format!("tail value {} at {j} is not in {chain}", self.tail.at(j)))
    }
}

const MAX_PREFIX: u64 = 1 << 20;

/// An index from which every tail value provably lies in `chain`, by the
/// carrier pattern of each family.
fn tail_start(chain: &ChainSpec, t: &TailExpr) -> Option<u64> {
    use ChainSpec::*;
    if t.is_constant() {
        return chain.mem(&t.base).then_some(0);
    }
    let c = &t.coeff;
    // |coeff| = 1/m gives values 1/(m(j+k))
    let unit = c.abs().is_unit_fraction();
    match chain {
        NmFin(_) | GFin(_) => None,
        NmInf | NmInfMinus => {
            let ok = unit
                && ((t.base.is_zero() && c.is_positive()) || (t.base.is_one() && c.is_negative()));
            // from j = 2 on, m(j+k) >= 3, so 1/2 is never hit
            ok.then_some(if matches!(chain, NmInfMinus) { 2 } else { 0 })
        }
        NmPrimeInf | NmPrimeInfMinus => {
            let twice = c.abs() * Rational::from_integer(2);
            (t.base == Rational::half() && twice.is_unit_fraction()).then_some(0)
        }
        GUp => (unit && t.base.is_one() && c.is_negative()).then_some(0),
        GDown => (unit && t.base.is_zero() && c.is_positive()).then_some(0),
        StdNm | StdG => interval_start(t, &Rational::zero(), &Rational::one()),
        Aalpha(a) => interval_start(t, &a.complement(), a),
    }
}

/// First index from which the tail stays inside `[lo, hi]`.
fn interval_start(t: &TailExpr, lo: &Rational, hi: &Rational) -> Option<u64> {
    let inside = (lo < &t.base && &t.base < hi)
        || (t.base == *lo && t.coeff.is_positive())
        || (t.base == *hi && t.coeff.is_negative());
    if !inside {
        return None;
    }
    // values move monotonically toward the base; bound the side they come from
    let gap = if t.coeff.is_positive() {
        hi - &t.base
    } else {
        &t.base - lo
    };
    let need = (t.coeff.abs() / gap).ceil() - t.k();
    let start = if need.is_positive() {
        need.to_u64()?
    } else {
        0
    };
    (start <= MAX_PREFIX).then_some(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn t(b: &str, c: &str, s: u64) -> TailExpr {
        TailExpr::new(r(b), r(c), s)
    }

    #[test]
    fn tail_values_and_complement() {
        let x = t("1/2", "1/2", 0);
        assert_eq!(x.at(0), r("1"));
        assert_eq!(x.at(1), r("3/4"));
        let n = x.complement();
        assert_eq!(n, t("1/2", "-1/2", 0));
        for j in 0..20 {
            assert_eq!(n.at(j), x.at(j).complement());
        }
        assert_eq!(t("1/3", "0", 5).shift, 0);
    }

    #[test]
    fn eventual_comparison_matches_scan() {
        let tails = [
            t("0", "1", 0),
            t("0", "1", 3),
            t("1/4", "0", 0),
            t("1/2", "1/2", 0),
            t("1/2", "-1/2", 0),
            t("1/2", "1/4", 2),
            t("1", "-1", 0),
            t("1/3", "5", 1),
            t("1/3", "-7", 9),
            t("0", "1/3", 0),
        ];
        for a in &tails {
            for b in &tails {
                let (ord, n) = eventual_cmp(a, b);
                for j in n..n + 200 {
                    assert_eq!(a.at(j).cmp(&b.at(j)), ord, "{a} vs {b} at {j}");
                }
            }
        }
        let (ord, n) = eventual_cmp(&t("0", "1", 0), &t("1/4", "0", 0));
        assert_eq!(ord, Ordering::Less);
        assert!(n >= 4);
    }

    #[test]
    fn exceptions_equal_to_tail_are_dropped() {
        let s = EventualSeq::new(
            t("0", "1", 0),
            [(0, r("1")), (1, r("1/4"))].into_iter().collect(),
        );
        assert_eq!(s.exceptions.len(), 1);
        assert_eq!(s.at(1), r("1/4"));
        assert_eq!(s.at(2), r("1/3"));
        assert_eq!(s.prefix_len(), 2);
    }

    #[test]
    fn membership_patterns() {
        use ChainSpec::*;
        let ok = |c: &ChainSpec, s: &EventualSeq| s.membership_error(c).is_none();
        let seq = |b: &str, c: &str, sh: u64| EventualSeq::from_tail(t(b, c, sh));
        assert!(ok(&NmInf, &seq("0", "1", 0)));
        assert!(ok(&NmInf, &seq("1", "-1/3", 4)));
        assert!(!ok(&NmInf, &seq("0", "2", 0)));
        assert!(!ok(&NmInf, &seq("1/2", "1/4", 0)));
        // 1/(j+1) hits 1/2 at j = 1
        assert!(!ok(&NmInfMinus, &seq("0", "1", 0)));
        let patched = EventualSeq::new(t("0", "1", 0), [(1, r("1/3"))].into_iter().collect());
        assert!(ok(&NmInfMinus, &patched));
        assert!(ok(&NmPrimeInf, &seq("1/2", "1/2", 0)));
        assert!(ok(&NmPrimeInfMinus, &seq("1/2", "-1/6", 2)));
        assert!(!ok(&NmPrimeInfMinus, &seq("1/2", "0", 0)));
        assert!(!ok(&NmPrimeInf, &seq("1/2", "1/3", 0)));
        assert!(ok(&GUp, &seq("1", "-1", 0)));
        assert!(!ok(&GUp, &seq("0", "1", 0)));
        assert!(ok(&GDown, &seq("0", "1/2", 0)));
        assert!(ok(&StdNm, &seq("1/2", "1/4", 0)));
        assert!(!ok(&StdNm, &seq("1/2", "1", 0)));
        let patched = EventualSeq::new(t("1/2", "1", 0), [(0, r("1"))].into_iter().collect());
        assert!(ok(&StdNm, &patched));
        let a = ChainSpec::a_alpha(r("3/4")).unwrap();
        assert!(ok(&a, &seq("1/2", "1/4", 0)));
        assert!(ok(&a, &seq("1/4", "1/8", 0)));
        assert!(!ok(&a, &seq("1/4", "-1/8", 0)));
        assert!(!ok(&a, &seq("3/4", "1/8", 0)));
        // 1/2 + 1/(j+1) leaves [1/4, 3/4] until j = 3
        let early = EventualSeq::new(t("1/2", "1", 0), [(0, r("1"))].into_iter().collect());
        assert!(!ok(&a, &early));
        assert!(!ok(&NmFin(5), &seq("1/2", "1/4", 0)));
        assert!(ok(&NmFin(5), &seq("3/4", "0", 0)));
    }
}
