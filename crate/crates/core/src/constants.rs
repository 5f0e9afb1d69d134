//! Embedded mathematical constants.
//!
//! Each constant is stored as the hexadecimal integer `floor(c · 2^1152)` and
//! guarded by an FNV-1a checksum of that text. The Euler–Mascheroni constant
//! is validated to [`GAMMA_MAX_BITS`] bits; asking for more is a capacity
//! error rather than a silent loss of rigor.

use core::hash::Hasher;

use num_bigint::{BigInt, BigUint};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{Interval, Precision};

const SCALE: i64 = 1152;

const GAMMA_HEX: &str = concat!(
    "93c467e37db0c7a4d1be3f810152cb56a1cecc3af65cc0190c03df34709affbd",
    "8e4b59fa03a9f0eed0649ccb621057d11056ae9132135a08e43b4673d74bafea",
    "58deb878cc86d733dbe7bf38154b36cf8a96d1567899aaae0c09d4c8b6b7b86f",
    "d2a1ea1de62ff8643ec7c271827977225e6ac2f0bd61c746961542a3ce3bea5d",
    "b54fe70e63e6d09f8fc28658e80567a4",
);
const GAMMA_FNV: u64 = 0x5085_0c97_a282_f45b;

const PI_HEX: &str = concat!(
    "3243f6a8885a308d313198a2e03707344a4093822299f31d0082efa98ec4e6c8",
    "9452821e638d01377be5466cf34e90c6cc0ac29b7c97c50dd3f84d5b5b547091",
    "79216d5d98979fb1bd1310ba698dfb5ac2ffd72dbd01adfb7b8e1afed6a267e9",
    "6ba7c9045f12c7f9924a19947b3916cf70801f2e2858efc16636920d871574e6",
    "9a458fea3f4933d7e0d95748f728eb658",
);
const PI_FNV: u64 = 0xed38_db0c_6da4_38eb;

/// Highest precision, in bits, for which γ is certified.
pub const GAMMA_MAX_BITS: u32 = 1024;

fn checked(hex: &str, sum: u64) -> BigUint {
    let mut h = fnv::FnvHasher::default();
    h.write(hex.as_bytes());
    assert_eq!(h.finish(), sum, "embedded constant failed its checksum");
    BigUint::parse_bytes(hex.as_bytes(), 16).expect("embedded constant is valid hex")
}

fn enclose(floor: BigUint, prec: Precision) -> Interval {
    let lo = Dyadic::new(BigInt::from(floor.clone()), -SCALE);
    let hi = Dyadic::new(BigInt::from(floor + 1u32), -SCALE);
    Interval::new(
        lo.round(prec.bits(), Round::Down),
        hi.round(prec.bits(), Round::Up),
    )
    .expect("ordered bounds")
}

/// Enclosure of Euler's constant γ = 0.5772156649…
pub fn gamma_enclosure(prec: Precision) -> Result<Interval> {
    if prec.bits() > GAMMA_MAX_BITS {
        return Err(Error::capacity(
            alloc::format!(
                "gamma is validated to {GAMMA_MAX_BITS} bits, {} requested",
                prec.bits()
            ),
            Some(prec.bits() as u64),
        ));
    }
    Ok(enclose(checked(GAMMA_HEX, GAMMA_FNV), prec))
}

/// Enclosure of π, valid for any precision up to the stored 1152 bits.
pub fn pi_enclosure(prec: Precision) -> Interval {
    enclose(checked(PI_HEX, PI_FNV), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    /// π from Machin's formula with exact rational arctangent partial sums.
    fn machin(terms: u32) -> (BigRational, BigRational) {
        fn atan_inv(x: i64, terms: u32) -> (BigRational, BigRational) {
            let mut s = BigRational::from_integer(0.into());
            let x2 = BigInt::from(x * x);
            let mut pow = BigInt::from(x);
            for k in 0..terms {
                let t = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * k + 1));
                if k % 2 == 0 {
                    s += t;
                } else {
                    s -= t;
                }
                pow *= &x2;
            }
            // alternating series: the next term bounds the error
            let next = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * terms + 1));
            if terms % 2 == 0 {
                (s.clone(), s + next)
            } else {
                (s.clone() - next, s)
            }
        }
        let (a_lo, a_hi) = atan_inv(5, terms);
        let (b_lo, b_hi) = atan_inv(239, terms);
        let four = BigRational::from_integer(4.into());
        let lo = (&a_lo * BigRational::from_integer(16.into())) - (&b_hi * &four);
        let hi = (&a_hi * BigRational::from_integer(16.into())) - (&b_lo * &four);
        (lo, hi)
    }

    #[test]
    fn pi_agrees_with_machin() {
        let (lo, hi) = machin(260);
        let pi = pi_enclosure(p(1100));
        assert!(pi.lo().to_rational() <= lo && hi <= pi.hi().to_rational());
        assert!(pi.width() <= Dyadic::pow2(-1098));
    }

    #[test]
    fn gamma_cap() {
        assert!(gamma_enclosure(p(1024)).is_ok());
        assert!(matches!(
            gamma_enclosure(p(1025)),
            Err(Error::Capacity {
                required_bits: Some(1025),
                ..
            })
        ));
    }

    #[test]
    fn gamma_width_and_digits() {
        for bits in [16u32, 53, 96, 500, 1024] {
            let g = gamma_enclosure(p(bits)).unwrap();
            assert!(g.width() <= Dyadic::pow2(8 - bits as i64), "{bits}");
            assert!(g.contains(&Dyadic::from_f64(0.5772156649015329).unwrap()) || bits > 50);
        }
        let g = gamma_enclosure(p(200)).unwrap();
        assert_eq!(
            g.lo().to_decimal(30, Round::Down),
            "5.77215664901532860606512090082e-1"
        );
    }
}
