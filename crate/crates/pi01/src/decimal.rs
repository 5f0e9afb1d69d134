//! Exact rationals from command-line text: `3`, `-0.25`, `1/10`, `2.5e-3`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use pi01_core::BigRational;

use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::usage(format!("not a number: {s:?}"));
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let ten = BigInt::from(10u8);
    let shift = exp - frac.len() as i32;
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let mut r = if shift >= 0 {
        BigRational::from_integer(digits * scale)
    } else {
        BigRational::new(digits, scale)
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Exact decimal text for a rational whose denominator divides a power of ten.
pub fn exact_decimal(r: &BigRational) -> Option<String> {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2u8), BigInt::from(5u8));
    let (mut e2, mut e5) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        e2 += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        e5 += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = e2.max(e5);
    let scale = num_traits::pow(BigInt::from(10u8), places);
    let v = (r * BigRational::from_integer(scale)).to_integer();
    let neg = v < BigInt::zero();
    let digits = v.magnitude().to_string();
    let out = if places == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (i, f) = padded.split_at(padded.len() - places);
        format!("{i}.{f}")
    };
    Some(if neg { format!("-{out}") } else { out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn forms() {
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("1/10").unwrap(), r(1, 10));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), r(1, 400));
        assert_eq!(parse_rational("1e3").unwrap(), r(1000, 1));
        for s in ["", "x", "1/0", "1..2", "--1", "e3", "."] {
            assert!(parse_rational(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(exact_decimal(&r(203, 10_000)).unwrap(), "0.0203");
        assert_eq!(exact_decimal(&r(-1, 4)).unwrap(), "-0.25");
        assert_eq!(exact_decimal(&r(7, 1)).unwrap(), "7");
        assert_eq!(exact_decimal(&r(1, 10)).unwrap(), "0.1");
        assert_eq!(
            exact_decimal(&r(203_000_500_000_007, 10_000_000_000_000_000)).unwrap(),
            "0.0203000500000007"
        );
        assert!(exact_decimal(&r(1, 3)).is_none());
    }
}
