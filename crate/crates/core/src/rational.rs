//! Exact rational scalars.
//!
//! [`Q`] keeps values that fit into `i64/i64` inline and only falls back to
//! heap-allocated big rationals when a checked small operation overflows.
//! Values are always normalised, so the small representation is used
//! whenever it is possible and equality/hashing can compare representations.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone)]
enum Repr {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Q(Repr);

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Q {
    pub fn new(numer: i64, denom: i64) -> Q {
        assert!(denom != 0, "zero denominator");
        Q(Repr::Small(Ratio::new(numer, denom)))
    }

    pub fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            // i64::MIN cannot be negated safely inside checked ops
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Q(Repr::Small(Ratio::new_raw(n, d)))
            }
            _ => Q(Repr::Big(Box::new(r))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => to_big(r),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) if r.is_integer() => Some(*r.numer()),
            Repr::Small(_) => None,
            Repr::Big(b) if b.is_integer() => b.numer().to_i64(),
            Repr::Big(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn recip(&self) -> Q {
        Q::one() / self
    }

    pub fn pow(&self, e: u32) -> Q {
        let mut acc = Q::one();
        for _ in 0..e {
            acc *= self;
        }
        acc
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $assign_trait:ident, $assign:ident) => {
        impl<'a> $trait<&'a Q> for &'a Q {
            type Output = Q;
            fn $method(self, rhs: &'a Q) -> Q {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Q(Repr::Small(r));
                    }
                }
                Q::from_big(self.to_big().$method(rhs.to_big()))
            }
        }
        impl $trait<Q> for Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Q> for Q {
            type Output = Q;
            fn $method(self, rhs: &'a Q) -> Q {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Q> for &'a Q {
            type Output = Q;
            fn $method(self, rhs: Q) -> Q {
                self.$method(&rhs)
            }
        }
        impl<'a> $assign_trait<&'a Q> for Q {
            fn $assign(&mut self, rhs: &'a Q) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_trait<Q> for Q {
            fn $assign(&mut self, rhs: Q) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, checked_add, AddAssign, add_assign);
binop!(Sub, sub, checked_sub, SubAssign, sub_assign);
binop!(Mul, mul, checked_mul, MulAssign, mul_assign);

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Q(Repr::Small(r));
            }
        }
        Q::from_big(self.to_big() / rhs.to_big())
    }
}
impl Div<Q> for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        (&self).div(&rhs)
    }
}
impl<'a> Div<&'a Q> for Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        (&self).div(rhs)
    }
}
impl<'a> Div<Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        self.div(&rhs)
    }
}
impl DivAssign<Q> for Q {
    fn div_assign(&mut self, rhs: Q) {
        *self = (&*self).div(&rhs);
    }
}
impl<'a> DivAssign<&'a Q> for Q {
    fn div_assign(&mut self, rhs: &'a Q) {
        *self = (&*self).div(rhs);
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}
impl<'a> Neg for &'a Q {
    type Output = Q;
    fn neg(self) -> Q {
        match &self.0 {
            Repr::Small(r) => Q(Repr::Small(-r)),
            Repr::Big(b) => Q::from_big(-(**b).clone()),
        }
    }
}

impl Zero for Q {
    fn zero() -> Q {
        Q(Repr::Small(Ratio::from_integer(0)))
    }
    fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }
}

impl One for Q {
    fn one() -> Q {
        Q(Repr::Small(Ratio::from_integer(1)))
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Q> for Q {
    fn sum<I: Iterator<Item = &'a Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |a, b| a + b)
    }
}

impl Product for Q {
    fn product<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::one(), |a, b| a * b)
    }
}

impl From<i64> for Q {
    fn from(v: i64) -> Q {
        Q(Repr::Small(Ratio::from_integer(v)))
    }
}

impl From<i32> for Q {
    fn from(v: i32) -> Q {
        Q::from(v as i64)
    }
}

impl From<usize> for Q {
    fn from(v: usize) -> Q {
        Q::from(v as i64)
    }
}

impl From<BigInt> for Q {
    fn from(v: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(v))
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            // normalised values never have a big representation that fits
            // the small one
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(r) => {
                0u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                // cross multiplication in i128 cannot overflow
                let l = *a.numer() as i128 * *b.denom() as i128;
                let r = *b.numer() as i128 * *a.denom() as i128;
                l.cmp(&r)
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => write!(f, "{}", r),
            Repr::Big(b) => write!(f, "{}", b),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error returned when parsing a rational from text fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal '{0}'")]
pub struct ParseQError(pub String);

impl FromStr for Q {
    type Err = ParseQError;
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let t = s.trim();
        let err = || ParseQError(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Q::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n choose k` for an arbitrary integer `n` and `k >= 0`.
pub fn binomial(n: i64, k: u64) -> Q {
    let mut acc = Q::one();
    for i in 0..k as i64 {
        acc = acc * Q::from(n - i) / Q::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> Q {
    (1..=n as i64).map(Q::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Q::from(i64::MAX / 2 + 7);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(_)));
    }

    #[test]
    fn parse_and_print() {
        let q: Q = "-6/4".parse().unwrap();
        assert_eq!(q, Q::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Q::from(5).to_string(), "5");
        assert!("1/0".parse::<Q>().is_err());
        assert!("x".parse::<Q>().is_err());
    }

    #[test]
    fn binomials_with_negative_upper_index() {
        assert_eq!(binomial(-1, 3), Q::from(-1));
        assert_eq!(binomial(-2, 2), Q::from(3));
        assert_eq!(binomial(5, 2), Q::from(10));
        assert_eq!(binomial(2, 3), Q::zero());
    }

    #[test]
    fn ordering_mixed() {
        let a = Q::new(1, 3);
        let b = Q::from(i64::MAX) * Q::from(4);
        assert!(a < b);
        assert!(-&b < a);
    }
}
