//! Fixed-point series kernels. Every value is an integer `v` standing for
//! `v · 2^-w`; each routine returns a lower and an upper bound.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    Integer::div_ceil(a, b)
}

fn ceil_shr(a: &BigUint, k: u32) -> BigUint {
    let q = a >> k;
    if a.trailing_zeros().map_or(true, |tz| tz >= k as u64) {
        q
    } else {
        q + 1u32
    }
}

/// Bounds on `ln 2 · 2^w` from `ln 2 = 2·atanh(1/3)`.
pub(crate) fn ln2(w: u32) -> (BigUint, BigUint) {
    let one = BigUint::one() << (w + 1);
    let three = BigUint::from(3u32);
    let nine = BigUint::from(9u32);
    let mut p_lo = &one / &three;
    let mut p_hi = ceil_div(&one, &three);
    let (mut lo, mut hi) = (BigUint::zero(), BigUint::zero());
    let mut k = 0u32;
    while p_hi > BigUint::one() {
        let d = BigUint::from(2 * k + 1);
        lo += &p_lo / &d;
        hi += ceil_div(&p_hi, &d);
        p_lo /= &nine;
        p_hi = ceil_div(&p_hi, &nine);
        k += 1;
    }
    // remaining tail is at most 9/8 of the next power term
    hi += 2u32;
    (lo, hi)
}

/// Bounds on `atanh(p/q) · 2^w` for `0 <= p/q <= 1/5`.
pub(crate) fn atanh(p: &BigUint, q: &BigUint, w: u32) -> (BigUint, BigUint) {
    if p.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let num = p << w;
    let z_lo = &num / q;
    let z_hi = ceil_div(&num, q);
    let z2_lo = (&z_lo * &z_lo) >> w;
    let z2_hi = ceil_shr(&(&z_hi * &z_hi), w);
    let (mut p_lo, mut p_hi) = (z_lo, z_hi);
    let (mut lo, mut hi) = (BigUint::zero(), BigUint::zero());
    let mut k = 0u32;
    while p_hi > BigUint::one() {
        let d = BigUint::from(2 * k + 1);
        lo += &p_lo / &d;
        hi += ceil_div(&p_hi, &d);
        p_lo = (&p_lo * &z2_lo) >> w;
        p_hi = ceil_shr(&(&p_hi * &z2_hi), w);
        k += 1;
    }
    // tail <= p_K / (1 - z^2) <= 25/24 * p_hi
    hi += 2u32;
    (lo, hi)
}

/// Bounds on `e^y · 2^w` for `0 <= y <= 1`, given bounds `y_lo <= y·2^w <= y_hi`.
pub(crate) fn exp_taylor(y_lo: &BigUint, y_hi: &BigUint, w: u32) -> (BigUint, BigUint) {
    let unit = BigUint::one() << w;
    let (mut t_lo, mut t_hi) = (unit.clone(), unit.clone());
    let (mut lo, mut hi) = (unit.clone(), unit);
    let mut j = 1u32;
    while t_hi > BigUint::one() {
        let d = BigUint::from(j);
        t_lo = ((&t_lo * y_lo) >> w) / &d;
        t_hi = ceil_div(&ceil_shr(&(&t_hi * y_hi), w), &d);
        lo += &t_lo;
        hi += &t_hi;
        j += 1;
    }
    // once j > 2y the tail is bounded by the last term, which is <= 1
    hi += 1u32;
    (lo, hi)
}

/// `floor(2^(2w) / x)` or its ceiling: reciprocal in the same scale.
pub(crate) fn recip(x: &BigUint, w: u32, up: bool) -> BigUint {
    let num = BigUint::one() << (2 * w);
    if up {
        ceil_div(&num, x)
    } else {
        num / x
    }
}
