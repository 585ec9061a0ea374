//! Exact integers and rationals, plus the few combinatorial number functions
//! the rest of the crate needs.
//!
//! `Integer` and `Rational` are the `num` big-number types. Rationals are
//! always kept in lowest terms with a positive denominator, which `num`
//! guarantees for every value built through its constructors and operators.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `n!`
pub fn factorial(n: u64) -> Integer {
    (2..=n).fold(Integer::one(), |acc, k| acc * k)
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
///
/// Computed multiplicatively: after step `j` the accumulator equals
/// `C(n - k + j, j)`, so every division is exact.
pub fn binomial(n: u64, k: i64) -> Integer {
    if k < 0 || k as u64 > n {
        return Integer::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = Integer::one();
    for j in 1..=k {
        acc *= n - k + j;
        let (q, r) = acc.div_rem(&Integer::from(j));
        debug_assert!(r.is_zero());
        acc = q;
    }
    acc
}

/// Multinomial coefficient `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u64]) -> Integer {
    let mut total = 0u64;
    let mut acc = Integer::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p as i64);
    }
    acc
}

/// `1 / n!` with the convention `1/n! = 0` for negative `n`.
pub fn inverse_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(Integer::one(), factorial(n as u64))
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn int_to_rational(n: Integer) -> Rational {
    Rational::from_integer(n)
}

pub fn parse_integer(s: &str) -> Result<Integer, ParseError> {
    Integer::from_str(s.trim()).map_err(|_| ParseError::Number(s.to_string()))
}

/// Parses `"a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(s)?)),
        Some((n, d)) => {
            let n = parse_integer(n)?;
            let d = parse_integer(d)?;
            if d.is_zero() {
                return Err(ParseError::Number(s.to_string()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Always prints `num/den`, including integers (`3/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Lexicographic rank of a sorted `k`-subset of `0..n`.
pub fn rank_subset(n: usize, subset: &[usize]) -> Integer {
    let k = subset.len();
    let mut rank = Integer::from(0);
    let mut next = 0;
    for (j, &s) in subset.iter().enumerate() {
        for c in next..s {
            rank += binomial((n - c - 1) as u64, (k - j - 1) as i64);
        }
        next = s + 1;
    }
    rank
}

/// Inverse of [`rank_subset`]; `None` if `rank` is out of range.
pub fn unrank_subset(n: usize, k: usize, rank: &Integer) -> Option<Vec<usize>> {
    if k > n || *rank < Integer::from(0) || *rank >= binomial(n as u64, k as i64) {
        return None;
    }
    let mut rank = rank.clone();
    let mut out = Vec::with_capacity(k);
    let mut c = 0;
    for j in 0..k {
        loop {
            let block = binomial((n - c - 1) as u64, (k - j - 1) as i64);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        out.push(c);
        c += 1;
    }
    Some(out)
}
