use pi01_core::eh::{
    bv_level, bv_sum, e_max, e_star, eh_level, eh_sum, error_term, euler_phi, gpy_gap_count, li,
    LiTable,
};
use pi01_core::sieve::build_table;
use pi01_core::{BigInt, BigRational, Precision};
use proptest::prelude::*;

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn table_agrees_with_the_series() {
    let t = build_table(20_000).unwrap();
    let lt = LiTable::new(&t, 20_000).unwrap();
    let n = t.primes_upto(20_000).len();
    for i in (0..n).step_by(97).chain([n - 1]) {
        let (q, at, before) = lt.at_prime(i);
        assert!(at.overlaps(&li(q as u64, p(96)).unwrap()), "{q}");
        if q > 2 {
            assert!(before.overlaps(&li(q as u64 - 1, p(96)).unwrap()), "{q}");
        }
        assert!(at.width() < pi01_core::Dyadic::new(1.into(), -30));
    }
    assert!(lt.li_x().overlaps(&li(20_000, p(96)).unwrap()));
}

#[test]
fn progressions_partition_the_primes() {
    let t = build_table(5000).unwrap();
    for q in [1u64, 2, 3, 10, 30, 97, 210] {
        let mut total = 0;
        for a in 1..=q {
            if num_integer::gcd(a, q) == 1 {
                total += error_term(5000, q, a % q, &t, p(64)).unwrap().pi_qa;
            }
        }
        let dividing = t
            .primes_upto(5000)
            .iter()
            .filter(|&&r| q % r as u64 == 0)
            .count() as u64;
        assert_eq!(total + dividing, t.prime_pi(5000).unwrap(), "q = {q}");
        assert!(euler_phi(q) <= q);
    }
}

#[test]
fn e_star_dominates_and_grows() {
    let t = build_table(6000).unwrap();
    for q in [1u64, 3, 8, 13] {
        let mut prev = None;
        for x in (500..=6000).step_by(500) {
            let s = e_star(x, q, &t, p(64)).unwrap();
            assert!(!s.certainly_lt(&e_max(x, q, &t, p(64)).unwrap()), "{x} {q}");
            if let Some(prev) = prev {
                assert!(!s.certainly_lt(&prev), "{x} {q}");
            }
            prev = Some(s);
        }
    }
}

#[test]
fn bv_and_eh_agree_at_equal_levels() {
    let t = build_table(10_000).unwrap();
    let (b, eps) = (rat(0, 1), rat(1, 2));
    assert_eq!(bv_level(10_000, &b).unwrap(), 100);
    assert_eq!(eh_level(10_000, &eps).unwrap(), 100);
    let bv = bv_sum(10_000, &rat(1, 1), &b, &t, p(64)).unwrap();
    let eh = eh_sum(10_000, &eps, &t, p(64)).unwrap();
    assert_eq!(bv.sum, eh.sum);
}

proptest! {
    #[test]
    fn gap_counts_are_monotone(x in 3u64..20_000, dx in 0u64..500, h in 0u64..40) {
        let t = build_table(20_500).unwrap();
        let c = gpy_gap_count(x, h, &t).unwrap();
        prop_assert!(c <= gpy_gap_count(x + dx, h, &t).unwrap());
        prop_assert!(c <= gpy_gap_count(x, h + 2, &t).unwrap());
        prop_assert!(c < t.prime_pi(x).unwrap().max(1));
    }
}
