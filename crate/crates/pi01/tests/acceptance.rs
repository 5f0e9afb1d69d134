//! The ten acceptance criteria, one pass/fail line each.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Roots;
use pi01::scan::{scan_dmr, DmrScan, ScanOptions};
use pi01_core::constants::gamma_enclosure;
use pi01_core::dioph::{pell_seq, prime_from_theta1, theta1_partial};
use pi01_core::dmr::{check_dmr, dmr_oracle, dmr_rhs, BoundVariant};
use pi01_core::eh::{bv_level, bv_sum, eh_level, eh_sum, gpy_gap_count, schoenfeld_sweep};
use pi01_core::elementary::{ln_biguint, ln_u64};
use pi01_core::harmonic::{harmonic_asymptotic, harmonic_direct};
use pi01_core::matiyasevich::{counterexample_search, explog_find_b, psi_gap_scan, M6Form};
use pi01_core::sieve::build_table;
use pi01_core::{BigInt, BigRational, Dyadic, Interval, Outcome, Precision, PrecisionPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn within(limit: Duration, start: Instant, detail: String) -> Check {
    let t = start.elapsed();
    if t <= limit {
        Ok(format!(
            "{detail} in {:.1}s (limit {}s)",
            t.as_secs_f64(),
            limit.as_secs()
        ))
    } else {
        Err(format!(
            "{detail} but took {:.1}s (limit {}s)",
            t.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn c1_dmr_oracle() -> Check {
    let start = Instant::now();
    let t = build_table(64).unwrap();
    for n in 1..=8 {
        for v in BoundVariant::ALL {
            let a = check_dmr(n, v, PrecisionPolicy::default(), &t)
                .unwrap()
                .outcome;
            let b = dmr_oracle(n, v, p(96), &t).unwrap().outcome;
            if a != b {
                return Err(format!("n = {n}, {v}: asymptotic {a}, direct {b}"));
            }
        }
    }
    within(
        Duration::from_secs(120),
        start,
        "24 verdict pairs agree".into(),
    )
}

fn c2_dmr_scan() -> Check {
    let start = Instant::now();
    let t = build_table(5000).unwrap();
    let policy = PrecisionPolicy::new(96, 4096, 2, 1).unwrap();
    let s = DmrScan::new(1, 5000, BoundVariant::Classic36, policy).unwrap();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let r = scan_dmr(
        &s,
        &t,
        ScanOptions {
            workers,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    let c = &r.counts;
    if (c.holds, c.fails, c.undecided) != (5000, 0, 0) {
        return Err(format!(
            "{} holds, {} fails, {} undecided",
            c.holds, c.fails, c.undecided
        ));
    }
    within(
        Duration::from_secs(600),
        start,
        "5000 holds, 0 fails, 0 undecided".into(),
    )
}

fn c3_rhs_order() -> Check {
    let violations: Vec<u64> = (2..=5000u64)
        .filter(|&n| {
            let g = dmr_rhs(n, BoundVariant::ImprovedGamma, p(96));
            let r = dmr_rhs(n, BoundVariant::Rational25, p(96));
            let c = dmr_rhs(n, BoundVariant::Classic36, p(96));
            !(g.certainly_lt(&r) && r.certainly_lt(&c))
        })
        .collect();
    if violations.is_empty() {
        Ok("ImprovedGamma < Rational25 < Classic36 at all 4999 n".into())
    } else {
        Err(format!(
            "{} violations, first {}",
            violations.len(),
            violations[0]
        ))
    }
}

fn c4_psi_gap() -> Check {
    let start = Instant::now();
    let t = build_table(1_000_000).unwrap();
    let g = psi_gap_scan(600, 1_000_000, PrecisionPolicy::default(), &t).unwrap();
    if !g.fails.is_empty() || !g.undecided.is_empty() {
        return Err(format!("fails {:?}, undecided {:?}", g.fails, g.undecided));
    }
    within(
        Duration::from_secs(300),
        start,
        format!("{} holds on 600..=10^6", g.holds),
    )
}

/// `L_b(x)` against `L_b(x+1)` cross-multiplied as integers.
fn l_pair(b: u64, x: u64) -> (BigUint, BigUint, BigUint, BigUint) {
    let (e0, e1) = ((x * b) as u32, ((x + 1) * b) as u32);
    let u = BigUint::from;
    (
        u(x + 1).pow(e0),
        u(x).pow(e0),
        u(x + 2).pow(e1),
        u(x + 1).pow(e1),
    )
}

fn c5_explog() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD10F);
    let prec = p(96);
    let two = Dyadic::from_int(2);
    for _ in 0..1000 {
        let a: u64 = rng.gen_range(0..=1_000_000);
        let b = explog_find_b(&BigUint::from(a));
        let ln = ln_biguint(&BigUint::from(a + 1), prec).unwrap();
        let d = Interval::from_bigint(&BigInt::from(b.clone()))
            .sub(&ln, prec)
            .abs();
        if d.hi() >= &two {
            return Err(format!("a = {a}: b = {b}, |b - ln(a+1)| not certified < 2"));
        }
    }
    let mut pairs = 0;
    for b in 0..=30u64 {
        for x in b + 2..=b + 50 {
            let (n0, d0, n1, d1) = l_pair(b, x);
            // L(x) <= L(x+1) < 4 L(x)
            let left = &n1 * &d0;
            let right = &n0 * &d1;
            if left < right || left >= right * 4u8 {
                return Err(format!(
                    "monotonicity or step ratio fails at b = {b}, x = {x}"
                ));
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "1000 seeded cases certified, {pairs} exact step pairs"
    ))
}

fn c6_search() -> Check {
    let t = build_table(5000).unwrap();
    let r =
        counterexample_search(600, 5000, PrecisionPolicy::default(), &t, M6Form::Printed).unwrap();
    if let Some(s) = r.system {
        return Err(format!("system satisfied at n = {}", s.n));
    }
    if r.scanned != 4401 || !r.s2_unverified.is_empty() {
        return Err(format!(
            "scanned {}, |l - psi(n)| < 2 unverified at {:?}",
            r.scanned, r.s2_unverified
        ));
    }
    Ok("no counterexample on 600..=5000, |l - psi(n)| < 2 at every n".into())
}

fn c7_pell_theta() -> Check {
    for a in 2..=10u64 {
        let d = a * a - 1;
        let mut n = 0u64;
        for y in 0..=1_000_000u64 {
            let t = d as u128 * (y as u128) * (y as u128) + 1;
            let x = t.sqrt();
            if x * x == t {
                let s = pell_seq(&BigUint::from(a), n).unwrap();
                if s.chi != BigUint::from(x) || s.psi != BigUint::from(y) {
                    return Err(format!(
                        "a = {a}: brute ({x}, {y}) vs sequence ({}, {})",
                        s.chi, s.psi
                    ));
                }
                n += 1;
            }
        }
        if pell_seq(&BigUint::from(a), n).unwrap().psi <= BigUint::from(1_000_000u32) {
            return Err(format!(
                "a = {a}: sequence has more solutions than brute force"
            ));
        }
    }
    let want = BigRational::new(
        BigInt::from(203_000_500_000_007u64),
        BigInt::from(10u64.pow(16)),
    );
    if theta1_partial(4).unwrap() != want {
        return Err("theta1_partial(4) differs from 0.0203000500000007".into());
    }
    let primes = build_table(20).unwrap().primes().to_vec();
    for n in 1..=5u32 {
        if prime_from_theta1(n, 6).unwrap() != BigUint::from(primes[n as usize - 1]) {
            return Err(format!("p_{n} not recovered"));
        }
    }
    Ok("Pell brute force a <= 10, y <= 10^6 exact; theta1(4) exact; p1..p5 recovered".into())
}

fn c8_harmonic() -> Check {
    let prec = p(96);
    let limit = Dyadic::pow2(-40);
    let mut widest = Dyadic::zero();
    for k in 1..=6 {
        let m = 10u64.pow(k);
        let d = harmonic_direct(&BigUint::from(m), prec).unwrap();
        let a = harmonic_asymptotic(&ln_u64(m, prec).unwrap(), &Dyadic::from_int(m as i64), prec)
            .unwrap();
        match d.intersect(&a) {
            Some(o) if o.width() <= limit => widest = widest.max(o.width()),
            Some(o) => return Err(format!("m = {m}: overlap width {} > 2^-40", o.width())),
            None => return Err(format!("m = {m}: enclosures disjoint")),
        }
    }
    let one = Interval::from_int(1);
    let mut h = Interval::from_int(1);
    for n in 2..=10_000u64 {
        h = h.add(
            &Interval::from_int(1)
                .div(&Interval::from_int(n as i64), prec)
                .unwrap(),
            prec,
        );
        let l = ln_u64(n, prec).unwrap();
        if !(h.sub(&one, prec).certainly_lt(&l) && l.certainly_lt(&h)) {
            return Err(format!("H_n - 1 < ln n < H_n not certified at n = {n}"));
        }
    }
    let g = gamma_enclosure(prec)
        .unwrap()
        .add(&Interval::from_int(4), prec);
    if !g.certainly_lt(&Interval::from_int(5)) {
        return Err("4 + gamma < 5 not certified".into());
    }
    Ok(format!(
        "overlaps at 10..10^6 (widest 2^{:.1}); H_n sandwich to 10^4; 4 + gamma < 5",
        widest.to_f64().log2()
    ))
}

fn c9_lab() -> Check {
    let t = build_table(1_000_000).unwrap();
    let s = schoenfeld_sweep(2657, 1_000_000, &t, p(64)).unwrap();
    if s.outcome() != Outcome::Holds {
        return Err(format!(
            "Schoenfeld fails {:?}, undecided {:?}",
            s.fails, s.undecided
        ));
    }
    for x in [1000u64, 10_000] {
        let pi = t.prime_pi(x).unwrap();
        for q in [3u64, 4, 5, 12] {
            let sum: u64 = (0..q)
                .filter(|&a| num_integer::gcd(a, q) == 1)
                .map(|a| t.prime_pi_progression(x, q, a).unwrap())
                .sum();
            let dividing = t
                .primes_upto(x)
                .iter()
                .filter(|&&r| q % r as u64 == 0)
                .count() as u64;
            if sum + dividing != pi {
                return Err(format!("partition identity fails at x = {x}, q = {q}"));
            }
        }
    }
    let g = gpy_gap_count(100, 16, &t).unwrap();
    if g != 24 {
        return Err(format!("gpy_gap_count(100, 16) = {g}"));
    }
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    for (x, b, eps) in [
        (10_000u64, rat(0, 1), rat(1, 2)),
        (1_000_000, rat(1, 1), rat(6899, 10_000)),
    ] {
        let (qb, qe) = (bv_level(x, &b).unwrap(), eh_level(x, &eps).unwrap());
        if qb != qe {
            return Err(format!("x = {x}: levels {qb} and {qe} differ"));
        }
        let bv = bv_sum(x, &rat(1, 1), &b, &t, p(64)).unwrap();
        let eh = eh_sum(x, &eps, &t, p(64)).unwrap();
        if bv.sum != eh.sum {
            return Err(format!("x = {x}, Q = {qb}: sums differ"));
        }
    }
    Ok(format!(
        "Schoenfeld holds on 2657..=10^6 ({} stretches, {} single points); partition exact; gpy = 24; BV = EH at Q = 100, 72",
        s.stretches, s.pointwise
    ))
}

fn c10_determinism() -> Check {
    let t = build_table(2000).unwrap();
    let s = DmrScan::new(1, 2000, BoundVariant::Classic36, PrecisionPolicy::default()).unwrap();
    let serial = scan_dmr(
        &s,
        &t,
        ScanOptions {
            workers: 1,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    let parallel = scan_dmr(
        &s,
        &t,
        ScanOptions {
            workers: 8,
            ..ScanOptions::default()
        },
    )
    .unwrap();
    if serial.records != parallel.records {
        return Err("serial and 8-worker record sets differ".into());
    }
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("scan.jsonl");
    let (full, resumed) = (
        dir.path().join("full.json"),
        dir.path().join("resumed.json"),
    );
    let run = |extra: &[&str], out: &std::path::Path, with_cp: bool| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pi01"));
        c.args([
            "dmr",
            "scan",
            "--from",
            "1",
            "--to",
            "2000",
            "--workers",
            "8",
            "--out",
        ])
        .arg(out)
        .args(extra);
        if with_cp {
            c.arg("--checkpoint").arg(&cp);
        }
        c.output().unwrap()
    };
    let o = run(&[], &full, false);
    if o.status.code() != Some(0) {
        return Err("uninterrupted CLI scan failed".into());
    }
    let killed = run(&["--halt-after", "1000"], &resumed, true);
    if killed.status.success() {
        return Err("the scan was not killed".into());
    }
    let done = std::fs::read_to_string(&cp).unwrap().lines().count() - 1;
    if !(1000..2000).contains(&done) {
        return Err(format!("{done} records checkpointed before the kill"));
    }
    let o = run(&[], &resumed, true);
    if o.status.code() != Some(0) {
        return Err("resumed CLI scan failed".into());
    }
    if std::fs::read(&full).unwrap() != std::fs::read(&resumed).unwrap() {
        return Err("resumed report differs from the uninterrupted one".into());
    }
    Ok(format!(
        "1 vs 8 workers identical; killed after {done} of 2000, resumed report byte-identical"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("DMR oracle equivalence", c1_dmr_oracle),
        ("DMR finite scan", c2_dmr_scan),
        ("bound-variant ordering", c3_rhs_order),
        ("Matiyasevich gap criterion", c4_psi_gap),
        ("explog suite", c5_explog),
        ("counterexample search", c6_search),
        ("Pell and theta1", c7_pell_theta),
        ("harmonic kernel", c8_harmonic),
        ("EH lab", c9_lab),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS  {:>2}. {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {:>2}. {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
