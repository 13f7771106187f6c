//! Exact rational numbers.
//!
//! Truth values are always exact fractions. Most values that show up in
//! practice have tiny numerators and denominators, so the representation
//! keeps an inline `i64` pair and only falls back to [`BigRational`] when a
//! result does not fit.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("malformed rational literal `{0}` (expected `p/q` or `p`)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// An exact, always-reduced fraction with positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    // reduced, den > 0
    Small { num: i64, den: i64 },
    // only used when the reduced value does not fit `Small`
    Big(BigRational),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    /// Builds `num/den`. Panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational::from_i128(num as i128, den as i128)
    }

    pub fn from_integer(n: i64) -> Rational {
        Rational(Repr::Small { num: n, den: 1 })
    }

    pub fn zero() -> Rational {
        Rational::from_integer(0)
    }

    pub fn one() -> Rational {
        Rational::from_integer(1)
    }

    pub fn half() -> Rational {
        Rational(Repr::Small { num: 1, den: 2 })
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    /// Canonicalizes a big fraction, demoting it to the inline form when it fits.
    pub fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(r)),
        }
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Rational {
        assert!(!den.is_zero(), "zero denominator");
        Rational::from_big(BigRational::new(num, den))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small { num: 1, den: 1 })
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn signum(&self) -> Ordering {
        if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }

    /// The numerator is exactly one (the value is a unit fraction `1/m`).
    pub fn is_unit_fraction(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num == 1,
            Repr::Big(b) => b.numer().is_one(),
        }
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small { num, den } => Rational::from_i128(*den as i128, *num as i128),
            Repr::Big(b) => Rational::from_big(b.recip()),
        }
    }

    pub fn floor(&self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational::from_integer(num.div_floor(den)),
            Repr::Big(b) => Rational::from_big(b.floor()),
        }
    }

    pub fn ceil(&self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational::from_integer(num.div_ceil(den)),
            Repr::Big(b) => Rational::from_big(b.ceil()),
        }
    }

    /// Integer value, if this is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    /// Integer value as `u64`, if non-negative integer that fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| u64::try_from(v).ok())
    }

    pub fn min_ref<'a>(&'a self, other: &'a Rational) -> &'a Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max_ref<'a>(&'a self, other: &'a Rational) -> &'a Rational {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => {
                Rational::from_i128(*den as i128 - *num as i128, *den as i128)
            }
            Repr::Big(b) => Rational::from_big(BigRational::one() - b),
        }
    }

    /// Approximate value, for display and diagnostics only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.to_big().to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $small:expr, $big:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) =
                    (&self.0, &rhs.0)
                {
                    let f: fn(i128, i128, i128, i128) -> Option<(i128, i128)> = $small;
                    if let Some((n, m)) = f(*a as i128, *b as i128, *c as i128, *d as i128) {
                        return Rational::from_i128(n, m);
                    }
                }
                let f: fn(BigRational, BigRational) -> BigRational = $big;
                Rational::from_big(f(self.to_big(), rhs.to_big()))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

binop!(
    Add,
    add,
    |a, b, c, d| Some((a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?, b.checked_mul(d)?)),
    |x, y| x + y
);
binop!(
    Sub,
    sub,
    |a, b, c, d| Some((a.checked_mul(d)?.checked_sub(c.checked_mul(b)?)?, b.checked_mul(d)?)),
    |x, y| x - y
);
binop!(
    Mul,
    mul,
    |a, b, c, d| Some((a.checked_mul(c)?, b.checked_mul(d)?)),
    |x, y| x * y
);
binop!(
    Div,
    div,
    |a, b, c, d| {
        assert!(c != 0, "division by zero");
        Some((a.checked_mul(d)?, b.checked_mul(c)?))
    },
    |x, y| {
        assert!(!y.is_zero(), "division by zero");
        x / y
    }
);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } => Rational::from_i128(-(*num as i128), *den as i128),
            Repr::Big(b) => Rational::from_big(-b),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Rational) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical form: a value that fits is never stored big
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                if b == d {
                    a.cmp(c)
                } else {
                    (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
                }
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Rational {
        match i64::try_from(n) {
            Ok(v) => Rational::from_integer(v),
            Err(_) => Rational::from_big(BigRational::from_integer(BigInt::from(n))),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Rational, ParseRationalError> {
        let t = s.trim();
        let malformed = || ParseRationalError::Malformed(s.to_string());
        let parse_int = |p: &str| -> Result<BigInt, ParseRationalError> {
            let p = p.trim();
            let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            p.parse::<BigInt>().map_err(|_| malformed())
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational::from_bigints(num, den))
            }
            None => Ok(Rational::from_big(BigRational::from_integer(parse_int(t)?))),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(Rational::new(2, 4), Rational::new(1, 2));
        assert_eq!(Rational::new(3, -6), Rational::new(-1, 2));
        assert_eq!(Rational::new(0, -5), Rational::zero());
        assert_eq!(Rational::new(-3, -6).to_string(), "1/2");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("1/2").to_string(), "1/2");
        assert_eq!(r("4/2").to_string(), "2");
        assert_eq!(r(" -3/9 ").to_string(), "-1/3");
        assert_eq!(r("7").to_string(), "7");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn arithmetic_small() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(r("1/2") - r("1/3"), r("1/6"));
        assert_eq!(r("2/3") * r("3/4"), r("1/2"));
        assert_eq!(r("2/3") / r("4/9"), r("3/2"));
        assert_eq!(-r("2/3"), r("-2/3"));
        assert_eq!(r("1/4").complement(), r("3/4"));
    }

    #[test]
    fn overflow_promotes_to_big_and_back() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.to_string(), "18446744073709551614");
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small { .. }));
        let tiny = Rational::new(1, i64::MAX);
        let prod = &tiny * &tiny;
        assert!(prod > Rational::zero());
        assert!(prod < tiny);
        assert_eq!(&prod / &tiny, tiny);
    }

    #[test]
    fn ordering_matches_real_order() {
        let mut v = [r("1/2"), r("-1/3"), r("2/3"), r("0"), r("1"), r("1/3")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["-1/3", "0", "1/3", "1/2", "2/3", "1"]);
        let big = Rational::from_integer(i64::MAX) + Rational::one();
        assert!(big > Rational::from_integer(i64::MAX));
        assert!(-big.clone() < Rational::from_integer(i64::MIN + 1));
    }

    #[test]
    fn floor_ceil_recip() {
        assert_eq!(r("5/2").floor(), r("2"));
        assert_eq!(r("5/2").ceil(), r("3"));
        assert_eq!(r("-5/2").floor(), r("-3"));
        assert_eq!(r("-5/2").ceil(), r("-2"));
        assert_eq!(r("4").ceil(), r("4"));
        assert_eq!(r("2/5").recip(), r("5/2"));
        assert_eq!(r("-2/5").recip(), r("-5/2"));
    }

    #[test]
    fn serde_as_string() {
        let v = serde_json::to_string(&r("3/4")).unwrap();
        assert_eq!(v, "\"3/4\"");
        let back: Rational = serde_json::from_str("\"6/8\"").unwrap();
        assert_eq!(back, r("3/4"));
    }
}
