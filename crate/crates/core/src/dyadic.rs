//! Dyadic rationals `m·2^e` with directed rounding.
//!
//! These are the endpoints of every [`Interval`](crate::Interval). Addition,
//! subtraction and multiplication are exact; every lossy step takes an explicit
//! [`Round`] direction so callers can round outward.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rounding direction for lossy dyadic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Self {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// The exact value `mant · 2^exp`.
///
/// Normalized so that `mant` is odd, or `mant == 0 && exp == 0`. Two equal
/// values therefore always have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `m / 2^k` rounded in direction `dir`.
pub(crate) fn shr_round(m: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 || m.is_zero() {
        return m.clone();
    }
    let mag = m.magnitude();
    let q = mag >> k;
    let exact = mag.trailing_zeros().map_or(true, |tz| tz >= k);
    let away = !exact
        && matches!(
            (m.sign(), dir),
            (Sign::Plus, Round::Up) | (Sign::Minus, Round::Down)
        );
    let q = if away { q + 1u32 } else { q };
    BigInt::from_biguint(m.sign(), q)
}

/// `a / b` rounded in direction `dir`; `b` must be nonzero.
pub(crate) fn div_round_int(a: &BigInt, b: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => a.div_floor(b),
        Round::Up => Integer::div_ceil(a, b),
    }
}

fn ldexp(mut f: f64, mut e: i64) -> f64 {
    let up = f64::from_bits(((1023 + 1000) as u64) << 52);
    let down = f64::from_bits(((1023 - 1000) as u64) << 52);
    while e > 1000 {
        f *= up;
        e -= 1000;
        if f.is_infinite() {
            return f;
        }
    }
    while e < -1000 {
        f *= down;
        e += 1000;
        if f == 0.0 {
            return f;
        }
    }
    f * f64::from_bits(((1023 + e) as u64) << 52)
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(0) => {}
            Some(tz) => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Dyadic::new(v.clone(), 0)
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Dyadic::new(BigInt::from(v.clone()), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(f: f64) -> Option<Self> {
        if !f.is_finite() {
            return None;
        }
        let bits = f.to_bits();
        let sign = bits >> 63;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(m);
        Some(Dyadic::new(if sign == 1 { -m } else { m }, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// `floor(log2 |self|)`, `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn significant_bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        (a, b, e)
    }

    /// Exact sum. Operands of wildly different magnitude produce long
    /// mantissas; use [`Dyadic::add_round`] when a bounded result suffices.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&-other)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Keep at most `bits` significant bits, rounding in direction `dir`.
    pub fn round(&self, bits: u32, dir: Round) -> Dyadic {
        let len = self.mant.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        Dyadic::new(shr_round(&self.mant, shift, dir), self.exp + shift as i64)
    }

    /// `self + other` rounded to `bits` significant bits.
    ///
    /// When one operand is far below the last retained bit of the other it is
    /// replaced by a sticky stand-in of the same sign, which rounds
    /// identically but keeps the aligned mantissa short.
    pub fn add_round(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.round(bits, dir);
        }
        if other.is_zero() {
            return self.round(bits, dir);
        }
        let (big, small) = if self.msb() >= other.msb() {
            (self, other)
        } else {
            (other, self)
        };
        let big_msb = big.msb().unwrap_or(0);
        let threshold = big.exp.min(big_msb - bits as i64 - 1) - 2;
        if small.msb().unwrap_or(0) < threshold {
            let sticky = Dyadic {
                mant: BigInt::from(small.signum()),
                exp: threshold - 1,
            };
            return big.add(&sticky).round(bits, dir);
        }
        self.add(other).round(bits, dir)
    }

    pub fn sub_round(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        self.add_round(&-other, bits, dir)
    }

    pub fn mul_round(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        self.mul(other).round(bits, dir)
    }

    /// `self / other` rounded to `bits` significant bits. Panics if `other`
    /// is zero; callers check the divisor.
    pub fn div_round(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = bits as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let s = want.max(0);
        let num = &self.mant << s as usize;
        let q = div_round_int(&num, &other.mant, dir);
        Dyadic::new(q, self.exp - other.exp - s).round(bits, dir)
    }

    /// Square root of a nonnegative value rounded to `bits` significant bits.
    pub fn sqrt_round(&self, bits: u32, dir: Round) -> Result<Dyadic> {
        if self.is_negative() {
            return Err(Error::domain("square root of a negative number"));
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let m = self.mant.magnitude();
        let mut s = (2 * bits as i64 + 2 - m.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let n: BigUint = m << s as usize;
        let mut r = n.sqrt();
        if dir == Round::Up && &r * &r != n {
            r += 1u32;
        }
        Ok(Dyadic::new(BigInt::from(r), (self.exp - s) / 2).round(bits, dir))
    }

    pub fn floor(&self) -> BigInt {
        self.to_int(Round::Down)
    }

    pub fn ceil(&self) -> BigInt {
        self.to_int(Round::Up)
    }

    /// Round to an integer in direction `dir`.
    pub fn to_int(&self, dir: Round) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            shr_round(&self.mant, (-self.exp) as u64, dir)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest dyadic with at most `bits` significant bits in direction
    /// `dir`; exact when `r` already is dyadic.
    pub fn from_rational(r: &BigRational, bits: u32, dir: Round) -> Dyadic {
        let (n, d) = (r.numer(), r.denom());
        if n.is_zero() {
            return Dyadic::zero();
        }
        let dm = d.magnitude();
        if dm.count_ones() == 1 {
            let k = dm.trailing_zeros().unwrap_or(0);
            return Dyadic::new(n.clone(), -(k as i64));
        }
        let s = bits as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let q = if s >= 0 {
            div_round_int(&(n << s as usize), d, dir)
        } else {
            div_round_int(n, &(d << (-s) as usize), dir)
        };
        Dyadic::new(q, -s).round(bits, dir)
    }

    /// Approximate conversion for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let (m, e) = if len > 60 {
            (&self.mant >> (len - 60) as usize, self.exp + len - 60)
        } else {
            (self.mant.clone(), self.exp)
        };
        ldexp(m.to_f64().unwrap_or(0.0), e)
    }

    /// Decimal scientific notation with `digits` significant digits, rounded
    /// in direction `dir` (so it stays a valid interval endpoint).
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1) as i64;
        let msb = self.msb().unwrap_or(0);
        // floor(msb * log10 2), 78913 / 2^18 ~ log10 2
        let d10 = (msb * 78913).div_euclid(1 << 18);
        let k = digits - 1 - d10;
        let ten = BigInt::from(10u32);
        let scaled = if k >= 0 {
            self.to_rational() * BigRational::from_integer(Pow::pow(&ten, k as u64))
        } else {
            self.to_rational() / BigRational::from_integer(Pow::pow(&ten, (-k) as u64))
        };
        let n = match dir {
            Round::Down => scaled.floor().to_integer(),
            Round::Up => scaled.ceil().to_integer(),
        };
        let neg = n.is_negative();
        let s = n.magnitude().to_string();
        let exp10 = s.len() as i64 - 1 - k;
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{exp10}")
        } else {
            format!("{sign}{head}.{tail}e{exp10}")
        }
    }
}

impl core::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl core::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match self.msb().cmp(&other.msb()) {
            Ordering::Equal => {
                let (a, b, _) = self.aligned(other);
                a.magnitude().cmp(b.magnitude())
            }
            ord => ord,
        };
        if sa < 0 {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<&BigUint> for Dyadic {
    fn from(v: &BigUint) -> Self {
        Dyadic::from_biguint(v)
    }
}

impl From<&BigInt> for Dyadic {
    fn from(v: &BigInt) -> Self {
        Dyadic::from_bigint(v)
    }
}

/// Formats as `m*2^e` with decimal `m` and `e`, the portable text form used
/// in checkpoints and certificates.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (m, e) = match s.split_once("*2^") {
            Some((m, e)) => (m, e),
            None => (s, "0"),
        };
        let mant: BigInt = m
            .parse()
            .map_err(|_| Error::Parse(format!("bad dyadic mantissa {m:?}")))?;
        let exp: i64 = e
            .parse()
            .map_err(|_| Error::Parse(format!("bad dyadic exponent {e:?}")))?;
        Ok(Dyadic::new(mant, exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(12, 0), d(3, 2));
        assert_eq!(d(0, 17), Dyadic::zero());
        assert_eq!(d(8, -3), Dyadic::one());
    }

    #[test]
    fn ordering_across_scales() {
        assert!(d(1, -200) < d(1, -199));
        assert!(d(-1, -200) > d(-1, -199));
        assert!(d(3, 0) > d(5, -1));
        assert!(d(-3, 0) < Dyadic::zero());
        assert_eq!(d(6, 0).cmp(&d(3, 1)), Ordering::Equal);
    }

    #[test]
    fn directed_rounding() {
        // 255 at 4 bits
        assert_eq!(d(255, 0).round(4, Round::Down), d(15, 4));
        assert_eq!(d(255, 0).round(4, Round::Up), d(1, 8));
        assert_eq!(d(-255, 0).round(4, Round::Down), d(-1, 8));
        assert_eq!(d(-255, 0).round(4, Round::Up), d(-15, 4));
    }

    #[test]
    fn sticky_add_matches_exact_rounding() {
        let big = d(0b1011_0111, 40);
        for small in [d(1, -3_000_000), d(-1, -3_000_000), d(7, -90)] {
            for dir in [Round::Down, Round::Up] {
                let fast = big.add_round(&small, 6, dir);
                let slow = big.add(&small).round(6, dir);
                assert_eq!(fast, slow, "{small} {dir:?}");
            }
        }
    }

    #[test]
    fn division_brackets_quotient() {
        let one = Dyadic::one();
        let three = d(3, 0);
        let lo = one.div_round(&three, 16, Round::Down);
        let hi = one.div_round(&three, 16, Round::Up);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(hi.sub(&lo) <= Dyadic::pow2(-17));
    }

    #[test]
    fn sqrt_brackets_root() {
        let two = d(2, 0);
        let lo = two.sqrt_round(64, Round::Down).unwrap();
        let hi = two.sqrt_round(64, Round::Up).unwrap();
        assert!(lo.mul(&lo) < two && two < hi.mul(&hi));
        assert_eq!(d(9, 0).sqrt_round(20, Round::Down).unwrap(), d(3, 0));
        assert!(d(-1, 0).sqrt_round(20, Round::Up).is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = d(-12345, -77);
        let s = x.to_string();
        assert_eq!(s, "-12345*2^-77");
        assert_eq!(s.parse::<Dyadic>().unwrap(), x);
        assert_eq!("42".parse::<Dyadic>().unwrap(), d(42, 0));
        assert!("1*2^x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn decimal_rendering_is_directed() {
        let third = Dyadic::from_rational(&BigRational::new(1.into(), 3.into()), 64, Round::Down);
        assert_eq!(third.to_decimal(5, Round::Down), "3.3333e-1");
        assert_eq!(third.to_decimal(5, Round::Up), "3.3334e-1");
        assert_eq!(d(2520, 0).to_decimal(6, Round::Down), "2.52e3");
    }

    #[test]
    fn f64_round_trip() {
        for v in [0.0, 1.5, -0.1, 1e300, 5e-324] {
            assert_eq!(Dyadic::from_f64(v).unwrap().to_f64(), v);
        }
        assert!(Dyadic::from_f64(f64::NAN).is_none());
    }
}
