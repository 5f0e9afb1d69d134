//! The ψ-gap criterion, the `explog` relation and the four-number
//! counterexample system.
//!
//! `explog(a, b)` asks for some `x > b + 1` with
//! `L_b(x) ≤ a + 1 < 4·L_b(x)`, where `L_b(x) = (1 + 1/x)^{xb}`. Since
//! `L_b` is nondecreasing with limit `e^b` and `L_b(x+1) < 4·L_b(x)`, the
//! relation holds exactly when `L_b(b+2) ≤ a + 1 < 4e^b`, and the witness is
//! the first `x ≥ b + 2` with `4·L_b(x) > a + 1`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::chebyshev::{height_bits, psi, ChebyshevScanner, PrimeLogs};
use crate::dyadic::Dyadic;
use crate::elementary::{ln2, ln_biguint, ln_u64};
use crate::error::{Error, Result};
use crate::interval::{Interval, Precision, PrecisionPolicy};
use crate::sieve::{product, ChebyshevTable};
use crate::verdict::{Outcome, Verdict};

/// Smallest `n` for which the ψ-gap inequality is claimed.
pub const GAP_START: u64 = 600;

const EXACT_SPAN: u64 = 64;
const EXACT_BITS: u64 = 1 << 16;

fn gap_sides(n: u64, psi_n: &Interval, prec: Precision) -> Result<(Interval, Interval)> {
    let lhs = psi_n.sub(&Interval::from_int(n as i64), prec).abs();
    let ln_n = ln_u64(n, prec)?;
    let rhs = Interval::from_int(n as i64)
        .sqrt(prec)?
        .mul(&ln_n.square(prec), prec);
    Ok((lhs, rhs))
}

/// Certified `|ψ(n) − n| < √n·ln²n` at any height `n ≥ 1`.
fn gap_verdict(n: u64, policy: PrecisionPolicy, table: &ChebyshevTable) -> Result<Verdict> {
    let mut last = None;
    for level in policy.levels() {
        let prec = height_bits(n, level);
        let (lhs, rhs) = gap_sides(n, &psi(n, table, prec)?, prec)?;
        let v = Verdict::compare(&lhs, &rhs, prec);
        if v.outcome != Outcome::Undecided {
            return Ok(v);
        }
        last = Some(v);
    }
    Ok(last.expect("nonempty policy"))
}

/// Certified verdict on `|ψ(n) − n| < √n·(ln n)²` for `n ≥ 600`.
pub fn psi_gap_check(n: u64, policy: PrecisionPolicy, table: &ChebyshevTable) -> Result<Verdict> {
    if n < GAP_START {
        return Err(Error::domain(alloc::format!(
            "the gap inequality is claimed from n = {GAP_START}, got {n}"
        )));
    }
    gap_verdict(n, policy, table)
}

/// Summary of a ψ-gap sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GapScan {
    pub from: u64,
    pub to: u64,
    pub holds: u64,
    pub fails: Vec<u64>,
    pub undecided: Vec<u64>,
}

/// Checks every `n` in `from..=to`, walking ψ incrementally.
pub fn psi_gap_scan(
    from: u64,
    to: u64,
    policy: PrecisionPolicy,
    table: &ChebyshevTable,
) -> Result<GapScan> {
    if from < GAP_START {
        return Err(Error::domain("the gap scan starts at n = 600 or later"));
    }
    table.check(to)?;
    let mut out = GapScan {
        from,
        to,
        ..GapScan::default()
    };
    if from > to {
        return Ok(out);
    }
    let first = height_bits(to, Precision::bits_at_least(policy.initial_bits()));
    let logs = PrimeLogs::new(table, to, first);
    let mut scan = ChebyshevScanner::new(table, &logs, from)?;
    loop {
        let n = scan.n();
        let (lhs, rhs) = gap_sides(n, &scan.psi(first), first)?;
        let mut v = Verdict::compare(&lhs, &rhs, first);
        if v.outcome == Outcome::Undecided {
            v = gap_verdict(n, policy, table)?;
        }
        match v.outcome {
            Outcome::Holds => out.holds += 1,
            Outcome::Fails => out.fails.push(n),
            Outcome::Undecided => out.undecided.push(n),
        }
        if n == to {
            break;
        }
        scan.advance()?;
    }
    Ok(out)
}

/// Why `explog(a, b)` fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refutation {
    /// `L_b(b+2) > a + 1`: every admissible `x` overshoots.
    MinTooLarge,
    /// `a + 1 ≥ 4e^b`: no `x` reaches far enough.
    LimitTooSmall,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Refutation::MinTooLarge => "min_too_large",
            Refutation::LimitTooSmall => "limit_too_small",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplogResult {
    pub holds: bool,
    pub witness_x: Option<BigUint>,
    pub refutation: Option<Refutation>,
}

impl ExplogResult {
    fn refuted(r: Refutation) -> Self {
        ExplogResult {
            holds: false,
            witness_x: None,
            refutation: Some(r),
        }
    }
}

fn bits_of(v: &BigUint) -> u32 {
    v.bits() as u32
}

/// `a + 1` with its logarithm cached at the precisions asked so far.
struct Target {
    a1: BigUint,
    logs: Vec<(u32, Interval)>,
}

impl Target {
    fn new(a1: BigUint) -> Self {
        Target {
            a1,
            logs: Vec::new(),
        }
    }

    fn ln(&mut self, prec: Precision) -> Interval {
        if let Some((_, v)) = self.logs.iter().find(|(b, _)| *b >= prec.bits()) {
            return v.clone();
        }
        let v = ln_biguint(&self.a1, prec).expect("a + 1 > 0");
        self.logs.push((prec.bits(), v.clone()));
        v
    }

    fn start_bits(&self) -> u32 {
        64 + 32 - bits_of(&self.a1).leading_zeros()
    }
}

/// Compares `factor · L_b(x)` with `a + 1`, exactly when the powers are
/// small and by interval logarithms otherwise. Never called where equality
/// is possible.
fn cmp_l(x: &BigUint, b: &BigUint, factor: u32, t: &mut Target) -> Ordering {
    cmp_l_exact(x, b, factor, &t.a1).unwrap_or_else(|| cmp_l_interval(x, b, factor, t))
}

fn cmp_l_exact(x: &BigUint, b: &BigUint, factor: u32, a1: &BigUint) -> Option<Ordering> {
    let xb = x * b;
    let small = x <= &(b + EXACT_SPAN)
        && xb
            .to_u64()
            .is_some_and(|e| e.saturating_mul(x.bits() + 1) <= EXACT_BITS);
    if !small {
        return None;
    }
    let e = xb.to_u32()?;
    let lhs = (x + 1u32).pow(e) * factor;
    let rhs = a1 * x.pow(e);
    Some(lhs.cmp(&rhs))
}

fn cmp_l_interval(x: &BigUint, b: &BigUint, factor: u32, t: &mut Target) -> Ordering {
    let x1 = Interval::from_bigint(&BigInt::from(x + 1u32));
    let xi = Interval::from_bigint(&BigInt::from(x.clone()));
    let xbi = Interval::from_bigint(&BigInt::from(x * b));
    let mut bits = t.start_bits() + bits_of(x) + bits_of(b);
    loop {
        let prec = Precision::bits_at_least(bits);
        let step = x1.div(&xi, prec.plus(bits_of(x))).expect("x > 0");
        let mut l = step.ln(prec).expect("positive").mul(&xbi, prec);
        if factor == 4 {
            l = l.add(&ln2(prec).mul_int(2, prec), prec);
        }
        let r = t.ln(prec);
        if l.hi() < r.lo() {
            return Ordering::Less;
        }
        if l.lo() > r.hi() {
            return Ordering::Greater;
        }
        bits *= 2;
    }
}

/// Decides `a + 1 < 4e^b` for `b ≥ 1`.
fn below_limit(b: &BigUint, t: &mut Target) -> bool {
    let bi = Interval::from_bigint(&BigInt::from(b.clone()));
    let mut bits = t.start_bits() + bits_of(b);
    loop {
        let prec = Precision::bits_at_least(bits);
        let r = bi.add(&ln2(prec).mul_int(2, prec), prec);
        let l = t.ln(prec);
        if l.hi() < r.lo() {
            return true;
        }
        if l.lo() > r.hi() {
            return false;
        }
        bits *= 2;
    }
}

/// Exact decision of `explog(a, b)` with a witness when it holds.
pub fn explog_holds(a: &BigUint, b: &BigUint) -> ExplogResult {
    explog_with(b, &mut Target::new(a + 1u32))
}

fn explog_with(b: &BigUint, t: &mut Target) -> ExplogResult {
    if b.is_zero() {
        // L_0 ≡ 1
        return if t.a1 < BigUint::from(4u32) {
            ExplogResult {
                holds: true,
                witness_x: Some(BigUint::from(2u32)),
                refutation: None,
            }
        } else {
            ExplogResult::refuted(Refutation::LimitTooSmall)
        };
    }
    let x0 = b + 2u32;
    // L_b(b+2) ≥ 2^b, so a large b overshoots without further work
    if b.to_u64().map_or(true, |bv| bv > t.a1.bits()) || cmp_l(&x0, b, 1, t) == Ordering::Greater {
        return ExplogResult::refuted(Refutation::MinTooLarge);
    }
    if !below_limit(b, t) {
        return ExplogResult::refuted(Refutation::LimitTooSmall);
    }
    let mut reaches = |x: &BigUint| cmp_l(x, b, 4, t) == Ordering::Greater;
    let witness = if reaches(&x0) {
        x0
    } else {
        // gallop to a reaching x, then bisect; the predicate is monotone
        let mut lo = x0.clone();
        let mut step = BigUint::one();
        let mut hi = &x0 + &step;
        while !reaches(&hi) {
            lo = hi;
            step <<= 1;
            hi = &lo + &step;
        }
        while &hi - &lo > BigUint::one() {
            let mid = (&lo + &hi) >> 1;
            if reaches(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    ExplogResult {
        holds: true,
        witness_x: Some(witness),
        refutation: None,
    }
}

/// The least `b` with `explog(a, b)`.
///
/// Every `b < ln(a+1) − ln 4` fails with `LimitTooSmall`, so the ascending
/// search starts just below that certified bound.
pub fn explog_find_b(a: &BigUint) -> BigUint {
    let mut t = Target::new(a + 1u32);
    let prec = Precision::bits_at_least(t.start_bits());
    let gap = t.ln(prec).sub(&ln2(prec).mul_int(2, prec), prec);
    let mut b = if gap.lo().is_positive() {
        gap.lo().floor().to_biguint().expect("positive")
    } else {
        BigUint::zero()
    };
    loop {
        if explog_with(&b, &mut t).holds {
            return b;
        }
        b += 1u32;
    }
}

/// `(m is a common multiple of 1..n, m is their least common multiple)`.
pub fn common_multiple_check(m: &BigUint, n: u64) -> (bool, bool) {
    let common = (1..=n).all(|d| (m % d).is_zero());
    if !common || m.is_zero() {
        return (common, false);
    }
    (common, m == &lcm_by_prime_powers(n))
}

fn lcm_by_prime_powers(n: u64) -> BigUint {
    let n = n as usize;
    let mut composite = alloc::vec![false; n + 1];
    let mut factors = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        let mut j = p * p;
        while j <= n {
            composite[j] = true;
            j += p;
        }
        let mut q = p;
        while q <= n / p {
            q *= p;
        }
        factors.push(BigUint::from(q));
    }
    product(factors)
}

/// Candidate values for the counterexample system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatSystem {
    pub k: BigUint,
    pub l: BigUint,
    pub m: BigUint,
    pub n: u64,
}

/// Which reading of the last condition to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum M6Form {
    /// `(l − n)² > 4n²k⁴`, as printed.
    #[default]
    Printed,
    /// `(l − n)² > 4nk⁴`, the form the converse argument produces.
    Derived,
}

/// Condition names in report order.
pub const CONDITION_KEYS: [&str; 7] = [
    "m1",
    "m2_negation",
    "m3",
    "m4_least",
    "explog_m_l",
    "explog_n_k",
    "m6",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    /// One outcome per entry of [`CONDITION_KEYS`].
    pub conditions: Vec<(&'static str, Outcome)>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|(_, o)| *o == Outcome::Holds)
    }

    pub fn get(&self, key: &str) -> Option<Outcome> {
        self.conditions
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, o)| *o)
    }
}

fn exact(b: bool) -> Outcome {
    if b {
        Outcome::Holds
    } else {
        Outcome::Fails
    }
}

/// Evaluates every condition of the system.
pub fn mat_conditions_check(
    sys: &MatSystem,
    policy: PrecisionPolicy,
    table: &ChebyshevTable,
    m6: M6Form,
) -> Result<ConditionReport> {
    conditions(sys, policy, table, m6, None)
}

fn conditions(
    sys: &MatSystem,
    policy: PrecisionPolicy,
    table: &ChebyshevTable,
    m6: M6Form,
    psi_hint: Option<(&Interval, Precision)>,
) -> Result<ConditionReport> {
    if sys.m.is_zero() {
        return Err(Error::domain("m must be positive"));
    }
    if sys.n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let mut gap = None;
    if let Some((psi_n, prec)) = psi_hint {
        let (lhs, rhs) = gap_sides(sys.n, psi_n, prec)?;
        let v = Verdict::compare(&lhs, &rhs, prec);
        if v.outcome != Outcome::Undecided {
            gap = Some(v.outcome);
        }
    }
    let gap = match gap {
        Some(o) => o,
        None => gap_verdict(sys.n, policy, table)?.outcome,
    };
    let m2 = match gap {
        Outcome::Holds => Outcome::Fails,
        Outcome::Fails => Outcome::Holds,
        Outcome::Undecided => Outcome::Undecided,
    };
    let (common, least) = common_multiple_check(&sys.m, sys.n);
    let m_l = explog_holds(&(&sys.m - 1u32), &sys.l).holds;
    let n_k = explog_holds(&BigUint::from(sys.n - 1), &sys.k).holds;
    let n = BigInt::from(sys.n);
    let diff = BigInt::from(sys.l.clone()) - &n;
    let k4 = BigInt::from(sys.k.pow(4));
    let bound = match m6 {
        M6Form::Printed => 4 * &n * &n * k4,
        M6Form::Derived => 4 * &n * k4,
    };
    let outcomes = [
        exact(sys.n >= GAP_START),
        m2,
        exact(common),
        exact(least),
        exact(m_l),
        exact(n_k),
        exact(&diff * &diff > bound),
    ];
    Ok(ConditionReport {
        conditions: CONDITION_KEYS.into_iter().zip(outcomes).collect(),
    })
}

/// Outcome of a counterexample search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub scanned: u64,
    /// First system passing every condition, if any.
    pub system: Option<MatSystem>,
    /// Heights where `|l − ψ(n)| < 2` was not certified.
    pub s2_unverified: Vec<u64>,
    /// Heights where `|k − ln n| < 2` was not certified.
    pub s3_unverified: Vec<u64>,
}

fn within_two(v: &BigUint, x: &Interval, prec: Precision) -> bool {
    let d = Interval::from_bigint(&BigInt::from(v.clone()))
        .sub(x, prec)
        .abs();
    d.hi() < &Dyadic::from_int(2)
}

/// Builds `m = lcm(1..n)`, `k`, `l` for each `n` in range and checks the system.
pub fn counterexample_search(
    n_lo: u64,
    n_hi: u64,
    policy: PrecisionPolicy,
    table: &ChebyshevTable,
    m6: M6Form,
) -> Result<SearchReport> {
    if n_lo < GAP_START {
        return Err(Error::domain("the search starts at n = 600 or later"));
    }
    table.check(n_hi)?;
    let mut report = SearchReport {
        scanned: 0,
        system: None,
        s2_unverified: Vec::new(),
        s3_unverified: Vec::new(),
    };
    let prec = height_bits(n_hi, Precision::bits_at_least(policy.initial_bits()));
    let logs = PrimeLogs::new(table, n_hi, prec);
    let mut m = table.lcm_upto(n_lo)?;
    let mut scan = ChebyshevScanner::new(table, &logs, n_lo)?;
    for n in n_lo..=n_hi {
        if n > n_lo {
            scan.advance()?;
            if table.prime_power_exponent(n)? > 0 {
                m *= table.eta(n)?;
            }
        }
        let k = explog_find_b(&BigUint::from(n - 1));
        let l = explog_find_b(&(&m - 1u32));
        if !within_two(&l, &scan.psi(prec), prec) {
            report.s2_unverified.push(n);
        }
        if !within_two(&k, &ln_u64(n, prec)?, prec) {
            report.s3_unverified.push(n);
        }
        report.scanned += 1;
        let sys = MatSystem {
            k,
            l,
            m: m.clone(),
            n,
        };
        let psi_n = scan.psi(prec);
        if conditions(&sys, policy, table, m6, Some((&psi_n, prec)))?.all_hold() {
            report.system = Some(sys);
            break;
        }
    }
    Ok(report)
}
