//! Text and JSON rendering of exact rationals.
//!
//! Every rational in a report is written twice: exactly as `p/q` and as a
//! truncated decimal for reading.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

/// Digits after the point in decimal renderings.
pub const DECIMAL_PLACES: usize = 12;

/// `p/q` in lowest terms, always with a denominator.
pub fn exact(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `p` for integers, `p/q` otherwise.
pub fn compact(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        exact(x)
    }
}

/// Decimal expansion truncated toward zero after `places` digits.
pub fn decimal(x: &BigRational, places: usize) -> String {
    let negative = x.is_negative();
    let num = x.numer().abs();
    let den = x.denom().clone();
    let (int, mut rem) = num.div_rem(&den);
    let mut out = String::new();
    if negative && !x.is_zero() {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if places > 0 {
        out.push('.');
        let ten = BigInt::from(10);
        for _ in 0..places {
            rem *= &ten;
            let (d, r) = rem.div_rem(&den);
            out.push_str(&d.to_string());
            rem = r;
        }
    }
    out
}

/// Serializes as `{"exact": "p/q", "decimal": "…"}`.
pub struct Exact<'a>(pub &'a BigRational);

impl Serialize for Exact<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("exact", &exact(self.0))?;
        m.serialize_entry("decimal", &decimal(self.0, DECIMAL_PLACES))?;
        m.end()
    }
}

/// Parses `p/q`, an integer, or a decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let bad = || crate::Error::Parse(format!("invalid rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let (negative, int) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int),
        };
        if !int.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let value = BigRational::new(int * &scale + frac, scale);
        return Ok(if negative { -value } else { value });
    }
    s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

pub fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    Exact(x).serialize(s)
}

pub fn opt_rational<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => Exact(x).serialize(s),
        None => s.serialize_none(),
    }
}

pub fn rationals<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Exact(x))?;
    }
    seq.end()
}

pub fn interval<S: Serializer>(x: &crate::phase::interval::Interval, s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(2))?;
    m.serialize_entry("lo", &Exact(&x.lo))?;
    m.serialize_entry("hi", &Exact(&x.hi))?;
    m.end()
}

pub fn display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn renderings() {
        assert_eq!(exact(&r(2, 1)), "2/1");
        assert_eq!(compact(&r(2, 1)), "2");
        assert_eq!(compact(&r(-1, 2)), "-1/2");
        assert_eq!(decimal(&r(1, 3), 4), "0.3333");
        assert_eq!(decimal(&r(-1, 3), 2), "-0.33");
        assert_eq!(decimal(&r(-7, 2), 0), "-3");
        assert_eq!(decimal(&r(0, 1), 2), "0.00");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("4/5").unwrap(), r(4, 5));
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), r(-3, 1));
        for bad in ["1/0", "x", "1.", "1.-2", "--1.2", ""] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(Exact(&r(1, 5))).unwrap();
        assert_eq!(v["exact"], "1/5");
        assert_eq!(v["decimal"], "0.200000000000");
    }
}
