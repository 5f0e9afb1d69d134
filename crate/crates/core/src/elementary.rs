//! Certified `ln` and `exp`.
//!
//! `ln` reduces its argument to `f·2^e` with `f ∈ [1/√2, √2)` and sums the
//! `atanh` series for `(f-1)/(f+1)`; `exp` subtracts the nearest multiple of
//! `ln 2` and sums the Taylor series of the remainder. Both use integer
//! fixed-point with floor/ceil bounds and an explicit tail term, so no
//! platform transcendental routine is ever involved.

use alloc::format;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::fixed;
use crate::interval::{Interval, Precision};

/// Largest `|t|` accepted by `exp` is `2^EXP_ARG_MSB`.
const EXP_ARG_MSB: i64 = 41;

fn bitlen(v: i64) -> u32 {
    64 - v.unsigned_abs().leading_zeros()
}

pub(crate) fn fixed_to_interval(lo: BigInt, hi: BigInt, w: u32, prec: Precision) -> Interval {
    let lo = Dyadic::new(lo, -(w as i64)).round(prec.bits(), Round::Down);
    let hi = Dyadic::new(hi, -(w as i64)).round(prec.bits(), Round::Up);
    Interval::from_ordered(lo, hi)
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: Precision) -> Interval {
    let w = prec.bits() + 16;
    let (lo, hi) = fixed::ln2(w);
    fixed_to_interval(lo.into(), hi.into(), w, prec)
}

/// Fixed-point bounds `(lo, hi)` on `ln(x) · 2^w`; `x > 0`.
fn ln_fixed(x: &Dyadic, bits: u32) -> (BigInt, BigInt, u32) {
    let m = x.mantissa().magnitude();
    let len = m.bits();
    // m^2 >= 2^(2 len - 1) means m / 2^(len-1) >= sqrt 2
    let s = if (m * m).bits() >= 2 * len {
        len
    } else {
        len - 1
    };
    let e = x.exponent() + s as i64;
    let pow = BigUint::one() << s;
    let neg = m < &pow;
    let p = if neg { &pow - m } else { m - &pow };
    let q = m + &pow;
    let near_one = if e == 0 && !p.is_zero() {
        (q.bits() - p.bits()) as u32
    } else {
        0
    };
    let w = bits + 12 + bitlen(e) + near_one;
    let (a_lo, a_hi) = fixed::atanh(&p, &q, w);
    let (l2_lo, l2_hi) = fixed::ln2(w);
    let (e_lo, e_hi) = if e >= 0 {
        (l2_lo, l2_hi)
    } else {
        (l2_hi, l2_lo)
    };
    let ek = BigInt::from(e);
    let (f_lo, f_hi) = if neg {
        (-BigInt::from(a_hi << 1), -BigInt::from(a_lo << 1))
    } else {
        (BigInt::from(a_lo << 1), BigInt::from(a_hi << 1))
    };
    let lo = &ek * BigInt::from(e_lo) + f_lo;
    let hi = &ek * BigInt::from(e_hi) + f_hi;
    (lo, hi, w)
}

/// Bounds on `ln(n) · 2^w` for an integer `n ≥ 1`, as integers.
pub(crate) fn ln_fixed_at(n: u64, w: u32) -> (BigInt, BigInt) {
    let (lo, hi, w2) = ln_fixed(&Dyadic::from_biguint(&BigUint::from(n)), w);
    let shift = (w2 - w) as u64;
    (
        crate::dyadic::shr_round(&lo, shift, Round::Down),
        crate::dyadic::shr_round(&hi, shift, Round::Up),
    )
}

/// Enclosure of `ln x` for a positive dyadic point.
pub fn ln_point(x: &Dyadic, prec: Precision) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::domain("logarithm of a nonpositive number"));
    }
    let (lo, hi, w) = ln_fixed(x, prec.bits());
    Ok(fixed_to_interval(lo, hi, w, prec))
}

/// Enclosure of `ln n` for a positive integer.
pub fn ln_biguint(n: &BigUint, prec: Precision) -> Result<Interval> {
    ln_point(&Dyadic::from_biguint(n), prec)
}

pub fn ln_u64(n: u64, prec: Precision) -> Result<Interval> {
    ln_point(&Dyadic::from_biguint(&BigUint::from(n)), prec)
}

/// Bounds on `e^(r·2^-w) · 2^w` for fixed-point `r` with `|r| <= 2^w`.
fn exp_small(r: &BigInt, w: u32, dir: Round) -> BigUint {
    let y = r.magnitude();
    let (lo, hi) = fixed::exp_taylor(y, y, w);
    match (r.sign() == Sign::Minus, dir) {
        (false, Round::Down) => lo,
        (false, Round::Up) => hi,
        (true, Round::Down) => fixed::recip(&hi, w, false),
        (true, Round::Up) => fixed::recip(&lo, w, true),
    }
}

/// Lower and upper bounds on `e^t` for a dyadic point `t`.
pub fn exp_point(t: &Dyadic, prec: Precision) -> Result<(Dyadic, Dyadic)> {
    if t.is_zero() {
        return Ok((Dyadic::one(), Dyadic::one()));
    }
    let msb = t.msb().unwrap_or(0);
    if msb >= EXP_ARG_MSB {
        return Err(Error::capacity(
            format!("exp argument of magnitude 2^{msb} exceeds the supported exponent range"),
            Some(msb as u64 + 2),
        ));
    }
    let q = t.to_f64() / core::f64::consts::LN_2;
    let k = (q + 0.5f64.copysign(q)) as i64;
    let w = prec.bits() + 16 + bitlen(k);
    let (l2_lo, l2_hi) = fixed::ln2(w);
    let kk = BigInt::from(k);
    let (sub_lo, sub_hi) = if k >= 0 {
        (l2_hi, l2_lo)
    } else {
        (l2_lo, l2_hi)
    };
    let t_scaled = t.mul_pow2(w as i64);
    let t_lo = t_scaled.floor();
    let t_hi = t_scaled.ceil();
    let r_lo = t_lo - &kk * BigInt::from(sub_lo);
    let r_hi = t_hi - &kk * BigInt::from(sub_hi);
    let e_lo = exp_small(&r_lo, w, Round::Down);
    let e_hi = exp_small(&r_hi, w, Round::Up);
    let shift = k - w as i64;
    let lo = Dyadic::new(e_lo.into(), shift).round(prec.bits(), Round::Down);
    let hi = Dyadic::new(e_hi.into(), shift).round(prec.bits(), Round::Up);
    Ok((lo, hi))
}

impl Interval {
    /// Enclosure of `{ln t : t ∈ self}`; the interval must be positive.
    pub fn ln(&self, prec: Precision) -> Result<Interval> {
        if !self.lo().is_positive() {
            return Err(Error::domain(
                "logarithm of an interval reaching zero or below",
            ));
        }
        if self.is_point() {
            return ln_point(self.lo(), prec);
        }
        let (lo, _, w) = ln_fixed(self.lo(), prec.bits());
        let lo = Dyadic::new(lo, -(w as i64)).round(prec.bits(), Round::Down);
        let (_, hi, w) = ln_fixed(self.hi(), prec.bits());
        let hi = Dyadic::new(hi, -(w as i64)).round(prec.bits(), Round::Up);
        Ok(Interval::from_ordered(lo, hi))
    }

    /// Enclosure of `{e^t : t ∈ self}`.
    pub fn exp(&self, prec: Precision) -> Result<Interval> {
        if self.is_point() {
            let (lo, hi) = exp_point(self.lo(), prec)?;
            return Ok(Interval::from_ordered(lo, hi));
        }
        let (lo, _) = exp_point(self.lo(), prec)?;
        let (_, hi) = exp_point(self.hi(), prec)?;
        Ok(Interval::from_ordered(lo, hi))
    }
}

/// Interval natural logarithm.
pub fn iv_ln(x: &Interval, prec: Precision) -> Result<Interval> {
    x.ln(prec)
}

/// Interval exponential.
pub fn iv_exp(x: &Interval, prec: Precision) -> Result<Interval> {
    x.exp(prec)
}

/// Certified `floor` of a positive real given by an enclosure of its
/// logarithm, retried at growing precision. Used for quantities such as
/// `floor(x^(1-ε))` that are defined through `exp`.
pub fn floor_of_exp<F>(mut log_at: F, start: Precision, max_bits: u32) -> Result<BigInt>
where
    F: FnMut(Precision) -> Result<Interval>,
{
    let mut prec = start;
    loop {
        let v = log_at(prec)?.exp(prec)?;
        if let Some(f) = v.floor_certain() {
            return Ok(f);
        }
        if prec.bits() >= max_bits {
            return Err(Error::capacity(
                "floor is not decided before the precision limit",
                Some(prec.bits() as u64 * 2),
            ));
        }
        prec = Precision::bits_at_least(prec.bits() * 2);
    }
}
