//! Exact integer and rational helpers used throughout the crate.
//!
//! Everything here is arbitrary precision; no floating point enters the
//! crate anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Binomial coefficient `n choose k`, exact.  Returns 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient with `BigInt` top argument; `n` may be negative,
/// in which case the usual polynomial extension is used.
pub fn binomial_big(n: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
    }
    for i in 1..=k {
        acc /= BigInt::from(i);
    }
    acc
}

/// Nonnegative gcd of all entries; 0 for an empty or all-zero slice.
pub fn gcd_all<'a, I>(xs: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Exact rational from an integer pair.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational from an integer.
pub fn int_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational in lowest terms: integers as plain decimals,
/// everything else as `num/den` with a positive denominator.
pub fn rat_display(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses a decimal integer, rejecting junk loudly.
pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Malformed(format!("not an integer: {s:?}")))
}

/// Parses `a` or `a/b` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_bigint(s)?)),
        Some((n, d)) => {
            let den = parse_bigint(d)?;
            if den.is_zero() {
                return Err(Error::Malformed(format!("zero denominator: {s:?}")));
            }
            Ok(BigRational::new(parse_bigint(n)?, den))
        }
    }
}

/// Parses a comma-separated value list where each token is `v` or `v^count`
/// (`count >= 1` repeats of `v`).
pub fn parse_repeated_list(s: &str) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Malformed(format!("empty coordinate in {s:?}")));
        }
        match token.split_once('^') {
            None => out.push(parse_rational(token)?),
            Some((v, c)) => {
                let count: usize = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad repeat count in {token:?}")))?;
                if count == 0 {
                    return Err(Error::Malformed(format!(
                        "repeat count must be positive in {token:?}"
                    )));
                }
                out.extend(std::iter::repeat_n(parse_rational(v)?, count));
            }
        }
    }
    Ok(out)
}

/// `base^exp` for big integers with a `usize` exponent.
pub fn big_pow(base: &BigInt, exp: usize) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 7), BigInt::zero());
        // Pascal's rule on a window, as an independent cross-check.
        for n in 1..=20u64 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                );
            }
        }
    }

    #[test]
    fn binomial_big_matches_u64_range() {
        for n in 0..=12u64 {
            for k in 0..=12u64 {
                assert_eq!(binomial_big(&BigInt::from(n), k), binomial(n, k));
            }
        }
        // (-1 choose 2) = 1, (-2 choose 3) = -4 under the polynomial extension.
        assert_eq!(binomial_big(&BigInt::from(-1), 2), BigInt::from(1));
        assert_eq!(binomial_big(&BigInt::from(-2), 3), BigInt::from(-4));
    }

    #[test]
    fn gcds() {
        let v = [BigInt::from(12), BigInt::from(-18), BigInt::from(30)];
        assert_eq!(gcd_all(v.iter()), BigInt::from(6));
        assert_eq!(gcd_all(std::iter::empty()), BigInt::zero());
        let z = [BigInt::zero(), BigInt::zero()];
        assert_eq!(gcd_all(z.iter()), BigInt::zero());
    }

    #[test]
    fn rational_round_trip() {
        let r = parse_rational("2739/7").unwrap();
        assert_eq!(rat_display(&r), "2739/7");
        let neg = parse_rational("-6/4").unwrap();
        assert_eq!(rat_display(&neg), "-3/2");
        let i = parse_rational("42").unwrap();
        assert_eq!(rat_display(&i), "42");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(big_pow(&BigInt::from(3), 0), BigInt::from(1));
        assert_eq!(big_pow(&BigInt::from(3), 4), BigInt::from(81));
    }
}
