use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::phase::interval::Interval;
use crate::report::compact;

/// A polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpec {
    coefficients: Vec<BigRational>,
}

impl PolySpec {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        PolySpec { coefficients }
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        PolySpec::new(coefficients.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, n: u64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        self.coefficients
            .iter()
            .rev()
            .fold(Interval::point(BigRational::zero()), |acc, c| acc.mul(x).add(&Interval::point(c.clone())))
    }

    pub fn derivative(&self) -> PolySpec {
        PolySpec::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }
}

impl fmt::Display for PolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let coef = if i > 0 && mag.is_one() { String::new() } else { compact(&mag) };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}n")?,
                _ => write!(f, "{coef}n^{i}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid coefficient `{s}` in polynomial `{whole}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
    }
}

/// Accepts sums of terms `c`, `cn`, `cn^d`, `c*n^d` with rational `c`,
/// e.g. `n+4`, `10n+1`, `1/2n^2 - 3`. Exponentials such as `2^n` are
/// rejected: only polynomials are representable.
impl FromStr for PolySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if (c == '+' || c == '-') && i > 0 && !text[..i].ends_with('^') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);

        let mut coefficients: Vec<BigRational> = Vec::new();
        for term in terms {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in polynomial `{s}`")));
            }
            let (coef, degree) = match body.find('n') {
                None => {
                    if body.contains('^') {
                        return Err(Error::Parse(format!(
                            "`{body}` is not a polynomial term; exponents must apply to n (got `{s}`)"
                        )));
                    }
                    (parse_rational(body, s)?, 0usize)
                }
                Some(at) => {
                    let head = body[..at].trim_end_matches('*');
                    if head.contains('^') {
                        return Err(Error::Parse(format!(
                            "`{body}` is not a polynomial term; exponents must apply to n (got `{s}`)"
                        )));
                    }
                    let coef = if head.is_empty() { BigRational::one() } else { parse_rational(head, s)? };
                    let tail = &body[at + 1..];
                    let degree = if tail.is_empty() {
                        1
                    } else {
                        let exp = tail
                            .strip_prefix('^')
                            .ok_or_else(|| Error::Parse(format!("unexpected `{tail}` after n in polynomial `{s}`")))?;
                        exp.parse::<usize>().map_err(|_| {
                            Error::Parse(format!("exponent `{exp}` must be a nonnegative integer in `{s}`"))
                        })?
                    };
                    (coef, degree)
                }
            };
            if coefficients.len() <= degree {
                coefficients.resize(degree + 1, BigRational::zero());
            }
            let signed = if negative { -coef } else { coef };
            coefficients[degree] += signed;
        }
        Ok(PolySpec::new(coefficients))
    }
}
