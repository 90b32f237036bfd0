//! Closed rational intervals and certified enclosures of logarithms.
//!
//! Endpoints are exact rationals. Transcendental values are enclosed by
//! truncated series with a rigorous tail bound, then rounded outward to
//! dyadic rationals so that denominators stay small.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::report::decimal;

/// Default enclosure width for derived constants.
pub fn default_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

const DYADIC_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Pass,
    Fail,
    Undecided,
}

impl Certainty {
    pub fn passed(self) -> bool {
        self == Certainty::Pass
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Pass => "PASS",
            Certainty::Fail => "FAIL",
            Certainty::Undecided => "UNDECIDED",
        })
    }
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn integer(n: i64) -> Self {
        Interval::point(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &BigRational) -> Interval {
        self.mul(&Interval::point(c.clone()))
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive() || o.hi.is_negative(), "interval divisor must exclude zero");
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        self.mul(&inv)
    }

    /// Certain verdict for `self ≤ other`.
    pub fn le(&self, other: &Interval) -> Certainty {
        if self.hi <= other.lo {
            Certainty::Pass
        } else if self.lo > other.hi {
            Certainty::Fail
        } else {
            Certainty::Undecided
        }
    }

    /// Rounds both endpoints outward to multiples of `2^-bits`.
    pub fn rounded_outward(&self, bits: u32) -> Interval {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Interval::new(lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", decimal(&self.lo, 15), decimal(&self.hi, 15))
    }
}

/// Encloses `atanh(z) = Σ z^{2i+1}/(2i+1)` for `0 ≤ z < 1/2`.
fn atanh_small(z: &BigRational, width: &BigRational) -> Interval {
    assert!(!z.is_negative() && z < &BigRational::new(1.into(), 2.into()));
    if z.is_zero() {
        return Interval::point(BigRational::zero());
    }
    let z2 = z * z;
    let one = BigRational::one();
    let tail_den = &one - &z2;
    let mut power = z.clone();
    let mut sum = BigRational::zero();
    let mut i = 0u64;
    loop {
        let denom = BigRational::from_integer(BigInt::from(2 * i + 1));
        sum += &power / &denom;
        power = &power * &z2;
        i += 1;
        // remaining terms are at most z^{2i+1}/((2i+1)(1 - z²))
        let tail = &power / (BigRational::from_integer(BigInt::from(2 * i + 1)) * &tail_den);
        if &tail < width {
            return Interval::new(sum.clone(), sum + tail);
        }
    }
}

/// Enclosure of `ln 2` of width below `width`.
pub fn ln2(width: &BigRational) -> Interval {
    let third = BigRational::new(1.into(), 3.into());
    let half = atanh_small(&third, &(width / BigRational::from_integer(4.into())));
    half.add(&half).rounded_outward(DYADIC_BITS)
}

/// Enclosure of `ln x` for rational `x > 0`, of width below `width`
/// (plus the outward rounding slack of `2^-64`).
pub fn ln(x: &BigRational, width: &BigRational) -> Interval {
    assert!(x.is_positive(), "logarithm of a nonpositive number");
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    let mut y = x.clone();
    let mut m: i64 = 0;
    while y >= two {
        y /= &two;
        m += 1;
    }
    while y < one {
        y *= &two;
        m -= 1;
    }
    let share = width / BigRational::from_integer(BigInt::from(4 * (m.unsigned_abs() + 1)));
    let z = (&y - &one) / (&y + &one);
    let half = atanh_small(&z, &share);
    let ln_y = half.add(&half);
    let ln_two = ln2(&share);
    let mut total = ln_y;
    let mul = Interval::integer(m);
    total = total.add(&ln_two.mul(&mul));
    total.rounded_outward(DYADIC_BITS)
}

/// Enclosure of `log_k(k+1)`.
pub fn log_k_of_k_plus_one(k: u32, width: &BigRational) -> Interval {
    let num = ln(&BigRational::from_integer(BigInt::from(k + 1)), &(width / BigRational::from_integer(16.into())));
    let den = ln(&BigRational::from_integer(BigInt::from(k)), &(width / BigRational::from_integer(16.into())));
    num.div(&den)
}

/// `λ = 2·log_k(k+1)`.
pub fn lambda(k: u32, width: &BigRational) -> Interval {
    log_k_of_k_plus_one(k, &(width / BigRational::from_integer(4.into()))).scale(&BigRational::from_integer(2.into()))
}

/// Enclosure of `√2` with dyadic endpoints.
pub fn sqrt2() -> Interval {
    let bits = DYADIC_BITS;
    let scaled = BigUint::from(2u32) << (2 * bits);
    let root = scaled.sqrt();
    let den = BigInt::one() << bits;
    let lo = BigRational::new(BigInt::from(root.clone()), den.clone());
    let hi = BigRational::new(BigInt::from(root + 1u32), den);
    Interval::new(lo, hi)
}

/// Exact test of `a ≤ √2·b`.
pub fn le_sqrt2_times(a: &BigRational, b: &BigRational) -> bool {
    match (a.is_negative(), b.is_negative()) {
        (true, false) => true,
        (false, true) => a.is_zero() && b.is_zero(),
        // both nonnegative: a² ≤ 2b²
        (false, false) => a * a <= BigRational::from_integer(2.into()) * b * b,
        // both negative: |a| ≥ √2|b|
        (true, true) => a * a >= BigRational::from_integer(2.into()) * b * b,
    }
}

/// `n` as an interval of integers times `λ`.
pub fn scaled(lambda: &Interval, n: u64) -> Interval {
    lambda.scale(&BigRational::from_integer(BigInt::from(n)))
}

/// `k^a ≤ (k+1)^b`, decided exactly.
pub fn power_le(k: u32, a: u32, b: u32) -> bool {
    BigUint::from(k).pow(a) <= BigUint::from(k + 1).pow(b)
}

/// Smallest integer `m ≥ 0` with `k^m > (k+1)^b`, i.e. `⌊b·log_k(k+1)⌋ + 1`.
pub fn floor_log_bound(k: u32, b: u32) -> u32 {
    let target = BigUint::from(k + 1).pow(b);
    let mut m = 0u32;
    let mut p = BigUint::one();
    let kk = BigUint::from(k);
    while p <= target {
        p *= &kk;
        m += 1;
    }
    m
}

/// True when `x` is an integer.
pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one() || x.numer().is_multiple_of(x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn ln2_is_tight() {
        let w = default_width();
        let i = ln2(&w);
        assert!(i.width() < w);
        assert!(i.lo < r(693_147_180_560, 1_000_000_000_000));
        assert!(i.hi > r(693_147_180_559, 1_000_000_000_000));
    }

    #[test]
    fn ln_of_various_values() {
        let w = default_width();
        for (x, approx) in [
            (r(3, 1), 1.0986122886681098),
            (r(1, 10), -std::f64::consts::LN_10),
            (r(1, 1), 0.0),
            (r(1000, 1), 6.907755278982137),
        ] {
            let i = ln(&x, &w);
            assert!(i.width() <= w, "{x}: width {}", i.width());
            assert!((i.to_f64() - approx).abs() < 1e-11, "{x}: {i}");
        }
    }

    #[test]
    fn lambda_for_three() {
        let w = default_width();
        let l = lambda(3, &w);
        assert!(l.width() <= w);
        assert!((l.to_f64() - 2.5237190142858297).abs() < 1e-11);
    }

    #[test]
    fn sqrt2_encloses() {
        let s = sqrt2();
        let two = r(2, 1);
        assert!(&s.lo * &s.lo <= two && two <= &s.hi * &s.hi);
    }

    #[test]
    fn sqrt2_comparison_exact() {
        assert!(le_sqrt2_times(&r(7, 5), &r(1, 1)));
        assert!(!le_sqrt2_times(&r(3, 2), &r(1, 1)));
        assert!(le_sqrt2_times(&r(-1, 1), &r(0, 1)));
        assert!(!le_sqrt2_times(&r(1, 1), &r(-1, 1)));
        assert!(le_sqrt2_times(&r(-3, 2), &r(-1, 1)));
        assert!(!le_sqrt2_times(&r(-1, 1), &r(-1, 1)));
    }

    #[test]
    fn power_bounds() {
        // 8·log₃4 ≈ 10.09
        assert!(power_le(3, 10, 8));
        assert!(!power_le(3, 11, 8));
        assert_eq!(floor_log_bound(3, 8), 11);
    }

    #[test]
    fn interval_ops() {
        let a = Interval::new(r(-1, 1), r(2, 1));
        let b = Interval::new(r(3, 1), r(4, 1));
        assert_eq!(a.mul(&b), Interval::new(r(-4, 1), r(8, 1)));
        assert_eq!(a.sub(&b), Interval::new(r(-5, 1), r(-1, 1)));
        assert_eq!(b.le(&Interval::integer(5)), Certainty::Pass);
        assert_eq!(b.le(&Interval::integer(2)), Certainty::Fail);
        assert_eq!(a.le(&Interval::integer(0)), Certainty::Undecided);
    }
}
