//! Exact number types: fixed-point costs, small rationals and square-root
//! bounds of the form `c·√r`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};
use std::str::FromStr;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational used for thinness parameters and cost ratios.
pub type Q = Ratio<i128>;

/// Number of fractional decimal digits a [`Cost`] can carry.
pub const COST_SCALE_DIGITS: u32 = 6;
const COST_SCALE: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("empty decimal string")]
    Empty,
    #[error("invalid decimal `{0}`")]
    Invalid(String),
    #[error("decimal `{0}` has more than {COST_SCALE_DIGITS} fractional digits")]
    TooPrecise(String),
    #[error("decimal `{0}` is out of range")]
    Overflow(String),
    #[error("negative cost `{0}`")]
    Negative(String),
}

/// A nonnegative decimal cost stored as an integer count of millionths.
///
/// All arithmetic is exact; there is no floating point anywhere in the cost
/// path, so certificate comparisons never need a tolerance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(i64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    pub fn from_units(units: i64) -> Self {
        Cost(units * COST_SCALE)
    }

    pub fn from_micros(micros: i64) -> Self {
        Cost(micros)
    }

    pub fn micros(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / COST_SCALE as f64
    }

    pub fn to_q(self) -> Q {
        Q::new(self.0 as i128, COST_SCALE as i128)
    }

    pub fn checked_add(self, other: Cost) -> Option<Cost> {
        self.0.checked_add(other.0).map(Cost)
    }

    pub fn times(self, k: i64) -> Cost {
        Cost(self.0 * k)
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        Cost(self.0 - rhs.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        iter.copied().sum()
    }
}

impl FromStr for Cost {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(DecimalError::Empty);
        }
        if s.starts_with('-') {
            return Err(DecimalError::Negative(s.to_string()));
        }
        let body = s.strip_prefix('+').unwrap_or(s);
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_ok(int_part)
            || !digits_ok(frac_part)
        {
            return Err(DecimalError::Invalid(s.to_string()));
        }
        if frac_part.len() > COST_SCALE_DIGITS as usize {
            return Err(DecimalError::TooPrecise(s.to_string()));
        }
        let overflow = || DecimalError::Overflow(s.to_string());
        let whole: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| overflow())?
        };
        let mut frac: i64 = 0;
        for (i, b) in frac_part.bytes().enumerate() {
            frac += i64::from(b - b'0') * 10i64.pow(COST_SCALE_DIGITS - 1 - i as u32);
        }
        whole
            .checked_mul(COST_SCALE)
            .and_then(|w| w.checked_add(frac))
            .map(Cost)
            .ok_or_else(overflow)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let whole = abs / COST_SCALE as u64;
        let frac = abs % COST_SCALE as u64;
        if frac == 0 {
            write!(f, "{sign}{whole}")
        } else {
            let digits = format!("{frac:06}");
            write!(f, "{sign}{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn q_to_string(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde helper for fields of type [`Q`]: written as a `p/q` string.
pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&q_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
    }
}

/// Serde helper for `Option<Q>` fields (`null` or a `p/q` string).
pub mod q_string_opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.collect_str(&q_to_string(q)),
            None => s.serialize_none(),
        }
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Q::new(n.trim().parse().ok()?, d))
        }
        None => Some(Q::from_integer(s.trim().parse().ok()?)),
    }
}

/// A nonnegative real of the form `coeff · √radicand`, compared exactly.
///
/// Bounds such as `k/(3√γ)` or `7√γ·α/k` are irrational for most genera;
/// every comparison squares both sides instead of rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    pub coeff: Q,
    pub radicand: u64,
}

impl Surd {
    pub fn rational(q: Q) -> Self {
        Surd {
            coeff: q,
            radicand: 1,
        }
    }

    pub fn new(coeff: Q, radicand: u64) -> Self {
        assert!(!coeff.is_negative(), "surd coefficient must be nonnegative");
        let (outside, inside) = extract_square(radicand);
        Surd {
            coeff: coeff * Q::from_integer(outside as i128),
            radicand: inside,
        }
    }

    /// `coeff² · radicand`, the exact square of the value.
    pub fn square(&self) -> Q {
        self.coeff * self.coeff * Q::from_integer(self.radicand as i128)
    }

    pub fn cmp_q(&self, q: &Q) -> Ordering {
        if q.is_negative() {
            return Ordering::Greater;
        }
        self.square().cmp(&(q * q))
    }

    pub fn scale(&self, q: Q) -> Surd {
        Surd::new(self.coeff * q, self.radicand)
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.radicand == 0
    }

    /// Smallest integer `m` with `m ≥ self`.
    pub fn ceil(&self) -> u128 {
        let sq = self.square();
        let guess = (sq.numer() / sq.denom()).max(0) as u128;
        let mut m = isqrt(guess);
        let at_least = |m: u128| Q::from_integer((m * m) as i128) >= sq;
        while !at_least(m) {
            m += 1;
        }
        while m > 0 && at_least(m - 1) {
            m -= 1;
        }
        m
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.square().cmp(&other.square()))
    }
}

impl Mul<Q> for Surd {
    type Output = Surd;
    fn mul(self, rhs: Q) -> Surd {
        self.scale(rhs)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 || self.coeff.is_zero() {
            write!(f, "{}", q_to_string(&self.coeff))
        } else {
            write!(f, "{}*sqrt({})", q_to_string(&self.coeff), self.radicand)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Splits `r` into `(a, b)` with `r = a²·b` and `b` squarefree.
fn extract_square(mut r: u64) -> (u64, u64) {
    if r == 0 {
        return (0, 1);
    }
    let mut outside = 1;
    let mut p = 2;
    while p * p <= r {
        while r.is_multiple_of(p * p) {
            r /= p * p;
            outside *= p;
        }
        p += 1;
    }
    (outside, r)
}

/// Integer square root (floor).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_costs() {
        let c: Cost = "12.5".parse().unwrap();
        assert_eq!(c.micros(), 12_500_000);
        assert_eq!(c.to_string(), "12.5");
        assert_eq!("7".parse::<Cost>().unwrap().to_string(), "7");
        assert_eq!(".25".parse::<Cost>().unwrap().micros(), 250_000);
        assert_eq!("0.000001".parse::<Cost>().unwrap().micros(), 1);
    }

    #[test]
    fn rejects_bad_costs() {
        assert!(matches!("".parse::<Cost>(), Err(DecimalError::Empty)));
        assert!(matches!(
            "-1".parse::<Cost>(),
            Err(DecimalError::Negative(_))
        ));
        assert!(matches!(
            "1.0000001".parse::<Cost>(),
            Err(DecimalError::TooPrecise(_))
        ));
        assert!(matches!(
            "1e3".parse::<Cost>(),
            Err(DecimalError::Invalid(_))
        ));
        assert!(matches!(".".parse::<Cost>(), Err(DecimalError::Invalid(_))));
    }

    #[test]
    fn surd_simplifies_and_compares() {
        let s = Surd::new(Q::from_integer(7), 12);
        assert_eq!(s.coeff, Q::from_integer(14));
        assert_eq!(s.radicand, 3);
        // 14√3 ≈ 24.25
        assert_eq!(s.cmp_q(&Q::from_integer(24)), Ordering::Greater);
        assert_eq!(s.cmp_q(&Q::from_integer(25)), Ordering::Less);
        assert_eq!(
            Surd::new(Q::from_integer(3), 4).cmp_q(&Q::from_integer(6)),
            Ordering::Equal
        );
    }

    #[test]
    fn surd_ceiling() {
        assert_eq!(Surd::new(Q::from_integer(3), 4).ceil(), 6);
        assert_eq!(Surd::new(Q::from_integer(1), 2).ceil(), 2);
        assert_eq!(Surd::new(Q::new(4, 3), 1).ceil(), 2);
        assert_eq!(Surd::rational(Q::from_integer(0)).ceil(), 0);
        // 12/(3·√2) = 2√2 ≈ 2.83
        assert_eq!(Surd::new(Q::new(12, 6), 2).ceil(), 3);
    }

    #[test]
    fn isqrt_matches_floor() {
        for n in 0..2000u128 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }
}
