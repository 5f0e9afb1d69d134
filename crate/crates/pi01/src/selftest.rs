//! Quick brute-force oracle suites behind `pi01 selftest`.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use pi01_core::constants::gamma_enclosure;
use pi01_core::dioph::{self, DiophSystem, Polynomial};
use pi01_core::dmr::{check_dmr, dmr_oracle, dmr_rhs, BoundVariant};
use pi01_core::elementary::ln_u64;
use pi01_core::harmonic::{harmonic_asymptotic, harmonic_direct};
use pi01_core::matiyasevich::{explog_find_b, explog_holds, psi_gap_scan};
use pi01_core::sieve::build_table;
use pi01_core::{eh, Dyadic, Interval, Outcome, Precision, PrecisionPolicy};

use crate::cache;

type Check = fn() -> Result<(), String>;

fn p(bits: u32) -> Precision {
    Precision::new(bits).expect("valid precision")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn dmr_oracle_agreement() -> Result<(), String> {
    let t = build_table(64).map_err(e)?;
    for n in 1..=6 {
        for v in BoundVariant::ALL {
            let a = check_dmr(n, v, PrecisionPolicy::default(), &t)
                .map_err(e)?
                .outcome;
            let b = dmr_oracle(n, v, p(96), &t).map_err(e)?.outcome;
            ensure(a == b, || format!("n = {n}, {v}: {a} vs {b}"))?;
        }
    }
    Ok(())
}

fn rhs_ordering() -> Result<(), String> {
    for n in 2..=500 {
        let [g, r, c] = [
            BoundVariant::ImprovedGamma,
            BoundVariant::Rational25,
            BoundVariant::Classic36,
        ]
        .map(|v| dmr_rhs(n, v, p(96)));
        ensure(g.certainly_lt(&r) && r.certainly_lt(&c), || {
            format!("n = {n}")
        })?;
    }
    Ok(())
}

fn harmonic_cross() -> Result<(), String> {
    for k in 1..=5 {
        let m = 10u64.pow(k);
        let d = harmonic_direct(&BigUint::from(m), p(96)).map_err(e)?;
        let a = harmonic_asymptotic(
            &ln_u64(m, p(96)).map_err(e)?,
            &Dyadic::from_int(m as i64),
            p(96),
        )
        .map_err(e)?;
        ensure(d.overlaps(&a), || format!("m = {m}"))?;
    }
    Ok(())
}

fn harmonic_log_sandwich() -> Result<(), String> {
    let one = Interval::from_int(1);
    for n in 2..=1000u64 {
        let h = harmonic_direct(&BigUint::from(n), p(96)).map_err(e)?;
        let l = ln_u64(n, p(96)).map_err(e)?;
        ensure(
            h.sub(&one, p(96)).certainly_lt(&l) && l.certainly_lt(&h),
            || format!("n = {n}"),
        )?;
    }
    Ok(())
}

fn four_plus_gamma() -> Result<(), String> {
    let g = gamma_enclosure(p(96)).map_err(e)?;
    ensure(
        g.add(&Interval::from_int(4), p(96))
            .certainly_lt(&Interval::from_int(5)),
        || "4 + γ".into(),
    )
}

fn explog_examples() -> Result<(), String> {
    let u = BigUint::from;
    let r = explog_holds(&u(7u32), &u(2u32));
    ensure(r.witness_x == Some(u(4u32)), || {
        format!("explog(7, 2) gave {:?}", r.witness_x)
    })?;
    for a in 0..300u32 {
        let b = explog_find_b(&u(a));
        let mut brute = 0u32;
        while !explog_holds(&u(a), &u(brute)).holds {
            brute += 1;
        }
        ensure(b == u(brute), || format!("a = {a}: {b} vs {brute}"))?;
    }
    Ok(())
}

fn psi_gap() -> Result<(), String> {
    let t = build_table(5000).map_err(e)?;
    let g = psi_gap_scan(600, 5000, PrecisionPolicy::default(), &t).map_err(e)?;
    ensure(g.holds == 4401, || {
        format!("fails {:?}, undecided {:?}", g.fails, g.undecided)
    })
}

fn pell_brute() -> Result<(), String> {
    for a in 2..=5u64 {
        let d = a * a - 1;
        let mut n = 0;
        for y in 0..=10_000u64 {
            let t = d * y * y + 1;
            let x = t.sqrt();
            if x * x == t {
                let s = dioph::pell_seq(&BigUint::from(a), n).map_err(e)?;
                ensure(
                    s.chi == BigUint::from(x) && s.psi == BigUint::from(y),
                    || format!("a = {a}, n = {n}"),
                )?;
                n += 1;
            }
        }
    }
    Ok(())
}

fn theta1() -> Result<(), String> {
    let t4 = dioph::theta1_partial(4).map_err(e)?;
    let want = BigRational::new(
        BigInt::from(203_000_500_000_007u64),
        BigInt::from(10u64.pow(16)),
    );
    ensure(t4 == want, || format!("θ₁(4) = {t4}"))?;
    let primes = build_table(20).map_err(e)?.primes().to_vec();
    for n in 1..=5u32 {
        let got = dioph::prime_from_theta1(n, 6).map_err(e)?;
        ensure(got == BigUint::from(primes[n as usize - 1]), || {
            format!("p_{n} = {got}")
        })?;
    }
    Ok(())
}

fn relations() -> Result<(), String> {
    let u = BigUint::from;
    let w = dioph::rel_gcd(&u(3u32), &u(15u32), &u(6u32)).map_err(e)?;
    ensure(w == Some((u(1u32), u(2u32))), || format!("{w:?}"))?;
    let x = Polynomial::var("x");
    let y = Polynomial::var("y");
    let sys = DiophSystem::from_equations(vec![
        x.sub(&Polynomial::constant(1)),
        y.sub(&x.mul(&Polynomial::constant(2))),
    ]);
    let c = dioph::combine_sum_of_squares(&sys).map_err(e)?;
    for a in -5..=5 {
        for b in -5..=5 {
            let at: BTreeMap<String, BigInt> =
                [("x".into(), a.into()), ("y".into(), b.into())].into();
            let zero = dioph::poly_eval(&c, &at).map_err(e)? == BigInt::from(0);
            ensure(zero == ((a, b) == (1, 2)), || format!("({a}, {b})"))?;
        }
    }
    Ok(())
}

fn residue_partition() -> Result<(), String> {
    let t = build_table(1000).map_err(e)?;
    for q in [3u64, 4, 5, 12] {
        let mut total = 0;
        for a in 0..q {
            if num_integer::gcd(a, q) == 1 {
                total += t.prime_pi_progression(1000, q, a).map_err(e)?;
            }
        }
        let dividing = t
            .primes_upto(1000)
            .iter()
            .filter(|&&r| q % r as u64 == 0)
            .count() as u64;
        ensure(total + dividing == 168, || format!("q = {q}"))?;
    }
    Ok(())
}

fn lab_values() -> Result<(), String> {
    let t = build_table(3000).map_err(e)?;
    let g = eh::gpy_gap_count(100, 16, &t).map_err(e)?;
    ensure(g == 24, || format!("gpy(100, 16) = {g}"))?;
    let li = eh::li(100, p(96)).map_err(e)?;
    let lo = Dyadic::from_f64(29.080_977_803_96).expect("finite");
    let hi = Dyadic::from_f64(29.080_977_803_97).expect("finite");
    ensure(
        li.overlaps(&Interval::new(lo, hi).expect("ordered")),
        || format!("Li(100) = {li}"),
    )?;
    let v = eh::schoenfeld_check(2657, &t, p(64)).map_err(e)?;
    ensure(v.outcome == Outcome::Holds, || {
        format!("x = 2657: {}", v.outcome)
    })
}

fn sieve_cache() -> Result<(), String> {
    let t = build_table(10_000).map_err(e)?;
    let bytes = cache::encode(&t);
    let back = cache::decode(&bytes, "memory".as_ref()).map_err(e)?;
    ensure(back == t, || "round trip differs".into())?;
    let mut bad = bytes.clone();
    bad[100] ^= 1;
    ensure(cache::decode(&bad, "memory".as_ref()).is_err(), || {
        "corruption not detected".into()
    })
}

const SUITES: [(&str, Check); 14] = [
    ("dmr oracle agreement, n <= 6", dmr_oracle_agreement),
    ("dmr rhs ordering, n <= 500", rhs_ordering),
    ("harmonic direct vs asymptotic", harmonic_cross),
    ("H_n - 1 < ln n < H_n, n <= 1000", harmonic_log_sandwich),
    ("4 + gamma < 5", four_plus_gamma),
    ("explog witnesses and least b", explog_examples),
    ("psi gap, 600..5000", psi_gap),
    ("pell vs brute force", pell_brute),
    ("theta1 value and extraction", theta1),
    ("gcd witness, sum of squares", relations),
    ("residue partition, x = 1000", residue_partition),
    ("gpy count, Li(100), schoenfeld", lab_values),
    ("sieve cache round trip", sieve_cache),
    ("dmr check at n = 2000", dmr_2000),
];

fn dmr_2000() -> Result<(), String> {
    let t = build_table(2000).map_err(e)?;
    let v = check_dmr(
        2000,
        BoundVariant::Classic36,
        PrecisionPolicy::default(),
        &t,
    )
    .map_err(e)?;
    ensure(v.outcome == Outcome::Holds, || v.outcome.to_string())
}

/// Runs every suite, printing one line each; true when all pass.
pub fn run_all(out: &mut dyn Write) -> bool {
    let mut ok = true;
    for (name, check) in SUITES {
        let r = check();
        let _ = match &r {
            Ok(()) => writeln!(out, "pass  {name}"),
            Err(msg) => writeln!(out, "FAIL  {name}: {msg}"),
        };
        ok &= r.is_ok();
    }
    ok
}
