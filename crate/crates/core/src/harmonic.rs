//! Harmonic numbers `H_m = Σ_{k≤m} 1/k`.
//!
//! Small `m` are summed directly in fixed point. Large `m`, which in the
//! criterion are only known through `ln m`, go through
//! `H_m = ln m + γ + 1/(2m) − 1/(12m²) + R` with `0 < R < 1/(120m⁴)`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::constants::{gamma_enclosure, GAMMA_MAX_BITS};
use crate::dyadic::{Dyadic, Round};
use crate::elementary::{fixed_to_interval, ln_biguint};
use crate::error::{Error, Result};
use crate::interval::{Interval, Precision};

/// Largest `m` accepted by [`harmonic_direct`].
pub const DIRECT_CAP: u64 = 1_000_000_000;

/// γ at the requested precision, or at the certified maximum beyond it.
pub(crate) fn gamma_clamped(prec: Precision) -> Interval {
    let bits = prec.bits().min(GAMMA_MAX_BITS);
    gamma_enclosure(Precision::bits_at_least(bits)).expect("within the validated cap")
}

fn bitlen(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Direct summation of `H_m` for `1 ≤ m ≤ DIRECT_CAP`.
pub fn harmonic_direct(m: &BigUint, prec: Precision) -> Result<Interval> {
    let m = match m.to_u64() {
        Some(0) => return Err(Error::domain("harmonic number needs m >= 1")),
        Some(v) if v <= DIRECT_CAP => v,
        _ => {
            return Err(Error::capacity(
                alloc::format!("direct harmonic summation is capped at m = {DIRECT_CAP}"),
                None,
            ))
        }
    };
    // each floor loses less than one unit, m units in total; a few bits
    // short of the ideal scale still beat leaving the u128 path
    let ideal = prec.bits() + bitlen(m) + 2;
    let w = if ideal <= 132 { ideal.min(124) } else { ideal };
    let lo = if w <= 124 {
        let num = 1u128 << w;
        let flush = u128::MAX - num;
        let mut acc = BigUint::zero();
        let mut s = 0u128;
        for k in 1..=m {
            s += num / k as u128;
            if s > flush {
                acc += s;
                s = 0;
            }
        }
        acc + s
    } else {
        let num = BigUint::from(1u8) << w;
        let mut s = BigUint::zero();
        for k in 1..=m {
            s += &num / k;
        }
        s
    };
    let hi = &lo + m;
    Ok(fixed_to_interval(lo.into(), hi.into(), w, prec))
}

/// Enclosure of `H_m` from an enclosure of `ln m` and a lower bound on `m`.
pub fn harmonic_asymptotic(ln_m: &Interval, m_lower: &Dyadic, prec: Precision) -> Result<Interval> {
    if m_lower < &Dyadic::from_int(10) {
        return Err(Error::domain("asymptotic harmonic bound needs m >= 10"));
    }
    let work = prec.plus(8);
    let b = work.bits();
    let e = ln_m.exp(work)?;
    let m_lo = if e.lo() > m_lower {
        e.lo().clone()
    } else {
        m_lower.clone()
    };
    let m_hi = e.hi().clone().max(m_lo.clone());
    let one = Dyadic::one();
    let t_hi = one.div_round(&m_lo, b, Round::Up);
    let t_lo = one.div_round(&m_hi, b, Round::Down);
    // t/2 − t²/12 is increasing for t < 3
    let f = |t: &Dyadic, dir: Round| {
        let sq = t.mul_round(t, b, dir.flip());
        let twelfth = sq.div_round(&Dyadic::from_int(12), b, dir.flip());
        t.mul_pow2(-1).sub_round(&twelfth, b, dir)
    };
    let t4 = t_hi.mul_round(&t_hi, b, Round::Up);
    let t4 = t4.mul_round(&t4, b, Round::Up);
    let rem = t4.div_round(&Dyadic::from_int(120), b, Round::Up);
    let corr_hi = f(&t_hi, Round::Up).add_round(&rem, b, Round::Up);
    let corr = Interval::new(f(&t_lo, Round::Down), corr_hi)?;
    let h = ln_m.add(&gamma_clamped(work), work).add(&corr, work);
    Ok(h.round_out(prec))
}

/// [`harmonic_asymptotic`] for an explicitly known `m ≥ 10`.
pub fn harmonic_asymptotic_exact(m: &BigUint, prec: Precision) -> Result<Interval> {
    let ln_m = ln_biguint(m, prec.plus(8))?;
    harmonic_asymptotic(&ln_m, &Dyadic::from_biguint(m), prec)
}

/// `H_m` by whichever path fits: direct below `DIRECT_CAP`, asymptotic above.
pub fn harmonic(m: &BigUint, prec: Precision) -> Result<Interval> {
    if m <= &BigUint::from(DIRECT_CAP) {
        harmonic_direct(m, prec)
    } else {
        harmonic_asymptotic_exact(m, prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn harmonic_exact(m: u64) -> BigRational {
        let mut s = BigRational::zero();
        for k in 1..=m {
            s += BigRational::new(BigInt::from(1), BigInt::from(k));
        }
        s
    }

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    #[test]
    fn direct_small() {
        let one = harmonic_direct(&BigUint::from(1u8), p(64)).unwrap();
        assert!(one.contains(&Dyadic::one()));
        let four = harmonic_direct(&BigUint::from(4u8), p(64)).unwrap();
        assert!(four.contains_rational(&harmonic_exact(4)));
        assert!(four.width() <= Dyadic::pow2(-60));
        for m in [7u64, 100, 1000] {
            for bits in [40u32, 96, 140] {
                let h = harmonic_direct(&BigUint::from(m), p(bits)).unwrap();
                assert!(h.contains_rational(&harmonic_exact(m)), "{m} {bits}");
            }
        }
    }

    #[test]
    fn direct_errors() {
        assert!(matches!(
            harmonic_direct(&BigUint::zero(), p(32)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            harmonic_direct(&BigUint::from(DIRECT_CAP + 1), p(32)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn asymptotic_contains_exact() {
        for m in [10u64, 11, 50, 100, 777] {
            let h = harmonic_asymptotic_exact(&BigUint::from(m), p(96)).unwrap();
            assert!(h.contains_rational(&harmonic_exact(m)), "{m}");
        }
        assert!(matches!(
            harmonic_asymptotic_exact(&BigUint::from(9u8), p(96)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cross_method_overlap() {
        let mut m = 10u64;
        while m <= 1_000_000 {
            let big = BigUint::from(m);
            let d = harmonic_direct(&big, p(96)).unwrap();
            let a = harmonic_asymptotic_exact(&big, p(96)).unwrap();
            let o = d.intersect(&a).expect("overlap");
            assert!(o.width() <= Dyadic::pow2(-40), "{m}");
            m *= 10;
        }
        let d = harmonic_direct(&BigUint::from(518_400u32), p(96)).unwrap();
        let a = harmonic_asymptotic_exact(&BigUint::from(518_400u32), p(96)).unwrap();
        assert!(d.overlaps(&a));
    }

    #[test]
    fn asymptotic_refines() {
        let m = BigUint::from(123_456u32);
        let a = harmonic_asymptotic_exact(&m, p(64)).unwrap();
        let b = harmonic_asymptotic_exact(&m, p(128)).unwrap();
        assert!(a.encloses(&b));
    }

    #[test]
    fn implicit_m_uses_lower_bound() {
        // m known only through ln m, far beyond direct summation
        let ln_m = Interval::from_int(5_000_000);
        let lower = Dyadic::from_int(10);
        let h = harmonic_asymptotic(&ln_m, &lower, p(96)).unwrap();
        let base = ln_m.add(&gamma_clamped(p(200)), p(200));
        assert!(h.encloses(&base) || h.overlaps(&base));
        assert!(h.width() <= Dyadic::pow2(-60));
    }

    #[test]
    fn gamma_request_is_clamped() {
        let m = BigUint::from(1000u32);
        let h = harmonic_asymptotic_exact(&m, p(2000)).unwrap();
        assert!(h.contains_rational(&harmonic_exact(1000)));
    }
}
