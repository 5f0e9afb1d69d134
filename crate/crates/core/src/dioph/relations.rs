//! Divisibility, gcd and lcm as existential relations with explicit witnesses.
//! All unknowns range over the nonnegative integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};

/// `a | b`: the `x` with `a·x = b`, if one exists.
pub fn rel_divides(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    if a.is_zero() {
        return b.is_zero().then(BigUint::zero);
    }
    let (q, r) = b.div_rem(a);
    r.is_zero().then_some(q)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

/// `a = gcd(b, c)` for `bc > 0`, witnessed by the least `(x, y) ≥ 0` with `a = b·x − c·y`.
pub fn rel_gcd(a: &BigUint, b: &BigUint, c: &BigUint) -> Result<Option<(BigUint, BigUint)>> {
    if b.is_zero() || c.is_zero() {
        return Err(Error::domain("the gcd relation needs bc > 0"));
    }
    let (bi, ci) = (BigInt::from(b.clone()), BigInt::from(c.clone()));
    let e = bi.extended_gcd(&ci);
    if e.gcd != BigInt::from(a.clone()) {
        return Ok(None);
    }
    // b·s + c·t = g, so x = s + k·c/g and y = −t + k·b/g
    let (cg, bg) = (&ci / &e.gcd, &bi / &e.gcd);
    let k = ceil_div(&-&e.x, &cg).max(ceil_div(&e.y, &bg));
    let x = e.x + &k * cg;
    let y = k * bg - e.y;
    debug_assert!(x.sign() != Sign::Minus && y.sign() != Sign::Minus);
    Ok(Some((x.magnitude().clone(), y.magnitude().clone())))
}

/// `a = lcm(b, c)` for `bc > 0`, decided as `bc = a·gcd(b, c)`.
pub fn rel_lcm(a: &BigUint, b: &BigUint, c: &BigUint) -> Result<bool> {
    if b.is_zero() || c.is_zero() {
        return Err(Error::domain("the lcm relation needs bc > 0"));
    }
    Ok(b * c == a * b.gcd(c))
}
