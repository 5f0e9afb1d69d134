//! Outward-rounded interval arithmetic over dyadic endpoints.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Target number of significant bits kept in interval endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 16;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::domain(alloc::format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Precision(bits))
    }

    /// Like [`Precision::new`] but clamps to the minimum instead of failing.
    pub fn bits_at_least(bits: u32) -> Self {
        Precision(bits.max(Self::MIN_BITS))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn plus(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(96)
    }
}

/// Escalation schedule for certified comparisons: start at `initial_bits`,
/// multiply by `growth` until `max_bits` is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionPolicy {
    initial_bits: u32,
    max_bits: u32,
    growth_num: u32,
    growth_den: u32,
}

impl PrecisionPolicy {
    /// `growth` is the rational `growth_num / growth_den` and must exceed 1.
    pub fn new(initial_bits: u32, max_bits: u32, growth_num: u32, growth_den: u32) -> Result<Self> {
        Precision::new(initial_bits)?;
        if initial_bits > max_bits {
            return Err(Error::domain("initial precision exceeds the maximum"));
        }
        if growth_den == 0 || growth_num <= growth_den {
            return Err(Error::domain(
                "precision growth factor must be a rational > 1",
            ));
        }
        Ok(PrecisionPolicy {
            initial_bits,
            max_bits,
            growth_num,
            growth_den,
        })
    }

    pub fn fixed(bits: u32) -> Result<Self> {
        PrecisionPolicy::new(bits, bits, 2, 1)
    }

    pub fn initial_bits(&self) -> u32 {
        self.initial_bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn growth(&self) -> (u32, u32) {
        (self.growth_num, self.growth_den)
    }

    /// The finite, strictly increasing list of precisions to try. Always
    /// ends at `max_bits`.
    pub fn levels(&self) -> Vec<Precision> {
        let mut out = Vec::new();
        let mut bits = self.initial_bits as u64;
        loop {
            let b = bits.min(self.max_bits as u64) as u32;
            out.push(Precision(b));
            if b >= self.max_bits {
                break;
            }
            let next = (bits * self.growth_num as u64).div_ceil(self.growth_den as u64);
            bits = next.max(bits + 1);
        }
        out
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: 96,
            max_bits: 4096,
            growth_num: 2,
            growth_den: 1,
        }
    }
}

/// A closed interval `[lo, hi]` that contains the real quantity it stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(
                "interval lower endpoint exceeds upper endpoint",
            ));
        }
        Ok(Interval { lo, hi })
    }

    /// Caller guarantees `lo <= hi`.
    pub(crate) fn from_ordered(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: Dyadic) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Interval::point(Dyadic::from_int(v))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Interval::point(Dyadic::from_bigint(v))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn into_bounds(self) -> (Dyadic, Dyadic) {
        (self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn round_out(&self, prec: Precision) -> Interval {
        Interval {
            lo: self.lo.round(prec.bits(), Round::Down),
            hi: self.hi.round(prec.bits(), Round::Up),
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn add(&self, other: &Interval, prec: Precision) -> Interval {
        let b = prec.bits();
        Interval {
            lo: self.lo.add_round(&other.lo, b, Round::Down),
            hi: self.hi.add_round(&other.hi, b, Round::Up),
        }
    }

    pub fn sub(&self, other: &Interval, prec: Precision) -> Interval {
        self.add(&other.neg(), prec)
    }

    /// Exact sum without rounding; mantissas grow, so keep it to operands of
    /// comparable scale.
    pub fn add_exact(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn mul(&self, other: &Interval, prec: Precision) -> Interval {
        let b = prec.bits();
        if self.is_point() && other.is_point() {
            let p = self.lo.mul(&other.lo);
            return Interval {
                lo: p.round(b, Round::Down),
                hi: p.round(b, Round::Up),
            };
        }
        let products = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Interval {
            lo: lo.round(b, Round::Down),
            hi: hi.round(b, Round::Up),
        }
    }

    pub fn mul_int(&self, k: i64, prec: Precision) -> Interval {
        self.mul(&Interval::from_int(k), prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.mul_pow2(k),
            hi: self.hi.mul_pow2(k),
        }
    }

    pub fn div(&self, other: &Interval, prec: Precision) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::domain("division by an interval containing zero"));
        }
        if other.hi.is_negative() {
            return self.neg().div(&other.neg(), prec);
        }
        let b = prec.bits();
        let lo = if self.lo.is_negative() {
            self.lo.div_round(&other.lo, b, Round::Down)
        } else {
            self.lo.div_round(&other.hi, b, Round::Down)
        };
        let hi = if self.hi.is_negative() {
            self.hi.div_round(&other.hi, b, Round::Up)
        } else {
            self.hi.div_round(&other.lo, b, Round::Up)
        };
        Ok(Interval { lo, hi })
    }

    pub fn recip(&self, prec: Precision) -> Result<Interval> {
        Interval::from_int(1).div(self, prec)
    }

    pub fn square(&self, prec: Precision) -> Interval {
        let b = prec.bits();
        let (a, c) = (self.lo.mul(&self.lo), self.hi.mul(&self.hi));
        if self.contains_zero() {
            Interval {
                lo: Dyadic::zero(),
                hi: a.max(c).round(b, Round::Up),
            }
        } else {
            let (lo, hi) = if a <= c { (a, c) } else { (c, a) };
            Interval {
                lo: lo.round(b, Round::Down),
                hi: hi.round(b, Round::Up),
            }
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval {
                lo: Dyadic::zero(),
                hi: self.hi.clone().max(-&self.lo),
            }
        }
    }

    /// Enclosure of `max(x, y)` over `x ∈ self`, `y ∈ other`.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn sqrt(&self, prec: Precision) -> Result<Interval> {
        if self.lo.is_negative() {
            return Err(Error::domain(
                "square root of an interval with negative points",
            ));
        }
        let b = prec.bits();
        Ok(Interval {
            lo: self.lo.sqrt_round(b, Round::Down)?,
            hi: self.hi.sqrt_round(b, Round::Up)?,
        })
    }

    /// The integer `floor(x)` when it is the same for every `x` in the
    /// interval.
    pub fn floor_certain(&self) -> Option<BigInt> {
        let (a, b) = (self.lo.floor(), self.hi.floor());
        (a == b).then_some(a)
    }

    /// Approximate midpoint, for display only.
    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(17, Round::Down),
            self.hi.to_decimal(17, Round::Up)
        )
    }
}

/// Basic operations accepted by [`iv_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Square,
}

/// Dispatch a basic interval operation. Binary operations need `b`.
pub fn iv_arith(
    op: ArithOp,
    a: &Interval,
    b: Option<&Interval>,
    prec: Precision,
) -> Result<Interval> {
    let rhs = || b.ok_or_else(|| Error::domain("binary interval operation needs two operands"));
    match op {
        ArithOp::Add => Ok(a.add(rhs()?, prec)),
        ArithOp::Sub => Ok(a.sub(rhs()?, prec)),
        ArithOp::Mul => Ok(a.mul(rhs()?, prec)),
        ArithOp::Div => a.div(rhs()?, prec),
        ArithOp::Neg => Ok(a.neg()),
        ArithOp::Square => Ok(a.square(prec)),
    }
}

/// Enclosure of a rational; exact when `r` is dyadic.
pub fn iv_from_rational(r: &BigRational, prec: Precision) -> Interval {
    let lo = Dyadic::from_rational(r, prec.bits(), Round::Down);
    if lo.to_rational() == *r {
        return Interval::point(lo);
    }
    let hi = Dyadic::from_rational(r, prec.bits(), Round::Up);
    Interval { lo, hi }
}
