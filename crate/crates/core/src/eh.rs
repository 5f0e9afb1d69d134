//! Primes in arithmetic progressions at desk scale: `Li`, the error terms
//! `E(x;q,a)`, `E(x;q)` and `E*(x;q)`, level sums over `q ≤ Q`, the FGHM
//! threshold, small prime gaps and the Schoenfeld bound.
//!
//! A single `Li(x)` comes from the convergent series
//! `li(y) = γ + ln ln y + Σ (ln y)^k/(k·k!)`, differenced at 2 so that γ
//! cancels. Tables of `Li` at every prime (and the integer just before it),
//! which `E*` and the Schoenfeld sweep need, come from a running interval
//! Simpson rule in 128-bit fixed point.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::constants::pi_enclosure;
use crate::dyadic::Dyadic;
use crate::elementary::{floor_of_exp, ln2, ln_u64};
use crate::error::{Error, Result};
use crate::fixed;
use crate::interval::{iv_from_rational, Interval, Precision};
use crate::sieve::ChebyshevTable;
use crate::verdict::{Outcome, Verdict};

/// Largest `x` accepted by the table-based routines.
pub const X_CAP: u64 = 100_000_000;
/// Largest modulus accepted by the level sums.
pub const Q_CAP: u64 = 100_000;
/// Start of the range where the Schoenfeld inequality is claimed.
pub const SCHOENFELD_START: u64 = 2657;

fn check_x(x: u64) -> Result<()> {
    if x < 2 {
        return Err(Error::domain("x must be at least 2"));
    }
    if x > X_CAP {
        return Err(Error::capacity(
            alloc::format!("x is capped at {X_CAP}"),
            None,
        ));
    }
    Ok(())
}

fn check_table(x: u64, table: &ChebyshevTable) -> Result<()> {
    if x > table.limit() {
        return Err(Error::Range {
            value: x,
            limit: table.limit(),
        });
    }
    Ok(())
}

/// `Σ_{k≥1} L^k/(k·k!)` for `L > 0`.
fn li_series(l: &Interval, work: Precision) -> Result<Interval> {
    let l_hi = l.hi().clone();
    let mut term = l.clone();
    let mut sum = Interval::zero();
    let mut k: i64 = 1;
    loop {
        sum = sum.add(&term, work);
        // past k + 1 > 2L each ratio is below 1/2, so the tail is below the last term
        let ratio_small = Dyadic::from_int(k + 1) > l_hi.mul_pow2(1);
        let tiny = term.hi().mul_pow2(work.bits() as i64 + 4) < *sum.lo();
        if ratio_small && tiny {
            let tail = Interval::new(Dyadic::zero(), term.hi().clone())?;
            return Ok(sum.add(&tail, work));
        }
        k += 1;
        let step = l.mul_int(k - 1, work);
        term = term
            .mul(&step, work)
            .div(&Interval::from_int(k * k), work)?;
    }
}

/// `Li(x) = ∫₂ˣ dt/ln t`.
pub fn li(x: u64, prec: Precision) -> Result<Interval> {
    if x < 2 {
        return Err(Error::domain("Li(x) needs x >= 2"));
    }
    let work = prec.plus(24);
    let lx = ln_u64(x, work)?;
    let l2 = ln2(work);
    let head = lx.div(&l2, work)?.ln(work)?;
    let tail = li_series(&lx, work)?.sub(&li_series(&l2, work)?, work);
    Ok(head.add(&tail, work).round_out(prec))
}

/// Euler's totient by trial division.
pub fn euler_phi(q: u64) -> u64 {
    let mut n = q;
    let mut phi = q;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// `π(x;q,a)` together with its certified deviation from `Li(x)/φ(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhRecord {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    pub pi_qa: u64,
    pub li_over_phi: Interval,
    pub error: Interval,
}

fn check_progression(x: u64, q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::domain("the modulus must be at least 1"));
    }
    if q > x {
        return Err(Error::domain("the modulus must not exceed x"));
    }
    Ok(())
}

/// `E(x;q,a) = π(x;q,a) − Li(x)/φ(q)` for `gcd(a,q) = 1`.
pub fn error_term(
    x: u64,
    q: u64,
    a: u64,
    table: &ChebyshevTable,
    prec: Precision,
) -> Result<EhRecord> {
    check_x(x)?;
    check_table(x, table)?;
    check_progression(x, q)?;
    let pi_qa = table.prime_pi_progression(x, q, a)?;
    let li_over_phi = li(x, prec)?.div(&Interval::from_int(euler_phi(q) as i64), prec)?;
    let error = Interval::from_int(pi_qa as i64).sub(&li_over_phi, prec);
    Ok(EhRecord {
        x,
        q,
        a,
        pi_qa,
        li_over_phi,
        error,
    })
}

/// Prime counts in every residue class modulo `q`, primes `≤ x`.
fn class_counts(x: u64, q: u64, table: &ChebyshevTable) -> Vec<u64> {
    let mut counts = vec![0u64; q as usize];
    for &p in table.primes_upto(x) {
        counts[(p as u64 % q) as usize] += 1;
    }
    counts
}

/// `E(x;q) = max_{gcd(a,q)=1} |E(x;q,a)|`.
pub fn e_max(x: u64, q: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    check_x(x)?;
    check_table(x, table)?;
    check_progression(x, q)?;
    let lp = li(x, prec)?.div(&Interval::from_int(euler_phi(q) as i64), prec)?;
    let counts = class_counts(x, q, table);
    let coprime = (0..q).filter(|a| a.gcd(&q) == 1);
    let (lo_c, hi_c) = coprime.fold((u64::MAX, 0), |(lo, hi), a| {
        let c = counts[a as usize];
        (lo.min(c), hi.max(c))
    });
    let top = Interval::from_int(hi_c as i64).sub(&lp, prec).abs();
    let bottom = Interval::from_int(lo_c as i64).sub(&lp, prec).abs();
    Ok(top.max(&bottom))
}

// Fixed-point scales of the Li table: logarithms, integrands and running
// integrals, stored values.
const LN_BITS: u32 = 96;
const F_BITS: u32 = 48;
const TABLE_BITS: u32 = 40;
/// Simpson panels per segment are refined until the remainder is below
/// this many units of `2^-F_BITS`.
const REM_UNITS: f64 = 256.0;
const MAX_REFINE: u32 = 20;

/// `ln((q + p)/(q − p)) · 2^LN_BITS` as `2·atanh(p/q)`, for `p/q ≤ 1/3`.
fn ln_ratio(p: u128, q: u128) -> (u128, u128) {
    let (p2, q2) = (p * p, q * q);
    let mut t_lo = (p << LN_BITS) / q;
    let mut t_hi = (p << LN_BITS).div_ceil(q);
    let (mut lo, mut hi) = (0u128, 0u128);
    let mut d = 1u128;
    loop {
        if t_hi <= 1 {
            // the tail is at most 9/8 of a unit
            hi += 2;
            break;
        }
        lo += t_lo / d;
        hi += t_hi.div_ceil(d);
        t_lo = t_lo * p2 / q2;
        t_hi = (t_hi * p2).div_ceil(q2);
        d += 2;
    }
    (lo << 1, hi << 1)
}

/// Upper bound on `|d⁴/dt⁴ (1/ln t)|` over `t ≥ a`, given `ln a ≥ l`.
fn fourth_derivative_bound(a: f64, l: f64) -> f64 {
    let inv = 1.0 / l;
    let inv2 = inv * inv;
    let poly = inv2 * (6.0 + inv * (22.0 + inv * (36.0 + inv * 24.0)));
    let a2 = a * a;
    poly / (a2 * a2)
}

/// Walks `t` upward through integer points, integrating `1/ln t` between them.
struct Walker {
    t: u64,
    ln_lo: u128,
    ln_hi: u128,
}

impl Walker {
    fn new() -> Self {
        let (lo, hi) = fixed::ln2(LN_BITS);
        Walker {
            t: 2,
            ln_lo: lo.to_u128().expect("fits"),
            ln_hi: hi.to_u128().expect("fits"),
        }
    }

    /// `(floor, ceil)` of `2^F_BITS / ln t` at the current logarithm bounds.
    fn recip(lo: u128, hi: u128) -> (u128, u128) {
        let shift = LN_BITS - 64;
        let l_lo = lo >> shift;
        let l_hi = hi.div_ceil(1 << shift);
        let one = 1u128 << (F_BITS + 64);
        (one / l_hi, one.div_ceil(l_lo))
    }

    /// Bounds on `∫_t^b dt/ln t · 2^F_BITS`, moving to `b`.
    fn advance(&mut self, b: u64) -> (u128, u128) {
        let a = self.t;
        let g = b - a;
        let l_min = (self.ln_lo as f64) * (1.0 - 1e-12) / (1u128 << LN_BITS) as f64;
        let m4 = fourth_derivative_bound(a as f64, l_min);
        let g5 = {
            let g = g as f64;
            g * g * g * g * g
        };
        let scale = (1u64 << F_BITS) as f64 * (1.0 + 1e-9) / 2880.0;
        let mut s = 0u32;
        let mut rem = g5 * m4 * scale;
        while rem > REM_UNITS && s < MAX_REFINE {
            s += 1;
            rem /= 16.0;
        }
        let rem_units = rem as u128 + 1;
        let n = 1u128 << s;
        // points a + j·g/(2n), held as T_j = 2n·a + j·g
        let base = 2 * n * a as u128;
        let g = g as u128;
        let (mut ln_lo, mut ln_hi) = (self.ln_lo, self.ln_hi);
        let (f_lo, f_hi) = Self::recip(ln_lo, ln_hi);
        let (mut sum_lo, mut sum_hi) = (f_lo, f_hi);
        for j in 0..2 * n {
            let t = base + j * g;
            let (d_lo, d_hi) = ln_ratio(g, 2 * t + g);
            ln_lo += d_lo;
            ln_hi += d_hi;
            let (f_lo, f_hi) = Self::recip(ln_lo, ln_hi);
            let w = if j + 1 == 2 * n {
                1
            } else if j % 2 == 0 {
                4
            } else {
                2
            };
            sum_lo += w * f_lo;
            sum_hi += w * f_hi;
        }
        self.t = b;
        self.ln_lo = ln_lo;
        self.ln_hi = ln_hi;
        let den = 6 * n;
        let hi = (g * sum_hi).div_ceil(den);
        let lo = (g * sum_lo / den).saturating_sub(rem_units);
        (lo, hi)
    }
}

fn store(lo: u128, hi: u128) -> (u64, u64) {
    let shift = F_BITS - TABLE_BITS;
    ((lo >> shift) as u64, hi.div_ceil(1 << shift) as u64)
}

fn stored_interval(v: (u64, u64)) -> Interval {
    let e = -(TABLE_BITS as i64);
    Interval::new(Dyadic::new(v.0.into(), e), Dyadic::new(v.1.into(), e)).expect("ordered")
}

/// Running bounds on `max |c − Li|`, both sides scaled alike.
#[derive(Default)]
struct Peak {
    lo: i128,
    hi: i128,
}

impl Peak {
    fn over(&mut self, c: i128, li: (u64, u64)) {
        self.hi = self.hi.max(c - li.0 as i128);
        self.lo = self.lo.max(c - li.1 as i128);
    }

    fn under(&mut self, c: i128, li: (u64, u64)) {
        self.hi = self.hi.max(li.1 as i128 - c);
        self.lo = self.lo.max(li.0 as i128 - c);
    }
}

/// `Li` at every prime `p ≤ x`, at `p − 1`, and at `x`, in fixed point.
#[derive(Debug, Clone)]
pub struct LiTable {
    x: u64,
    primes: Vec<u32>,
    before: Vec<(u64, u64)>,
    at: Vec<(u64, u64)>,
    at_x: (u64, u64),
}

impl LiTable {
    pub fn new(table: &ChebyshevTable, x: u64) -> Result<Self> {
        check_x(x)?;
        check_table(x, table)?;
        let primes = table.primes_upto(x).to_vec();
        let mut before = Vec::with_capacity(primes.len());
        let mut at = Vec::with_capacity(primes.len());
        let mut walk = Walker::new();
        let (mut lo, mut hi) = (0u128, 0u128);
        let step = |walk: &mut Walker, to: u64, lo: &mut u128, hi: &mut u128| {
            if to > walk.t {
                let (a, b) = walk.advance(to);
                *lo += a;
                *hi += b;
            }
        };
        for &p in &primes {
            let p = p as u64;
            step(&mut walk, (p - 1).max(2), &mut lo, &mut hi);
            before.push(store(lo, hi));
            step(&mut walk, p, &mut lo, &mut hi);
            at.push(store(lo, hi));
        }
        step(&mut walk, x, &mut lo, &mut hi);
        Ok(LiTable {
            x,
            primes,
            before,
            at,
            at_x: store(lo, hi),
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// `Li(x)` from the table.
    pub fn li_x(&self) -> Interval {
        stored_interval(self.at_x)
    }

    /// `Li(p_i)` and `Li(p_i − 1)` for the `i`-th prime (from 0).
    pub fn at_prime(&self, i: usize) -> (u32, Interval, Interval) {
        (
            self.primes[i],
            stored_interval(self.at[i]),
            stored_interval(self.before[i]),
        )
    }

    /// `E*(x;q) = max_{2 ≤ y ≤ x} E(y;q)` over the table.
    ///
    /// Between consecutive primes every `π(y;q,a)` is constant while `Li`
    /// increases, so each `|E(y;q,a)|` peaks at one end of the stretch.
    pub fn e_star(&self, q: u64, prec: Precision) -> Result<Interval> {
        if q == 0 {
            return Err(Error::domain("the modulus must be at least 1"));
        }
        if q > Q_CAP {
            return Err(Error::capacity(
                alloc::format!("q is capped at {Q_CAP}"),
                None,
            ));
        }
        let phi = euler_phi(q);
        let q32 = q as u32;
        let unit = (phi as i128) << TABLE_BITS;
        let mut counts = vec![0u32; q as usize];
        // classes per count value, coprime classes only
        let mut hist: Vec<u64> = vec![phi];
        let (mut c_min, mut c_max) = (0usize, 0usize);
        // c_max − Li peaks where c_max first takes its value and Li − c_min
        // just before c_min moves on, so only those points need visiting
        let mut peak = Peak::default();
        for (i, &p) in self.primes.iter().enumerate() {
            if p > q32 || q32 % p != 0 {
                let a = (p % q32) as usize;
                let c = counts[a] as usize;
                if c == c_min && hist[c] == 1 && p > 2 {
                    peak.under(c_min as i128 * unit, self.before[i]);
                }
                hist[c] -= 1;
                counts[a] += 1;
                if hist.len() == c + 1 {
                    hist.push(0);
                }
                hist[c + 1] += 1;
                if c + 1 > c_max {
                    c_max = c + 1;
                    peak.over(c_max as i128 * unit, self.at[i]);
                }
                while hist[c_min] == 0 {
                    c_min += 1;
                }
            }
            if i == 0 {
                peak.over(c_max as i128 * unit, self.at[0]);
            }
        }
        peak.over(c_max as i128 * unit, self.at_x);
        peak.under(c_min as i128 * unit, self.at_x);
        let den = Interval::from_bigint(&BigInt::from(unit));
        let scaled = Interval::new(
            Dyadic::from_bigint(&peak.lo.into()),
            Dyadic::from_bigint(&peak.hi.into()),
        )?;
        scaled.div(&den, prec)
    }
}

/// `E*(x;q)` with a table built on the spot.
pub fn e_star(x: u64, q: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    check_progression(x, q)?;
    LiTable::new(table, x)?.e_star(q, prec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `Q = √x (ln x)^{−B}`
    Bv,
    /// `Q = x^{1−ε}`
    Eh,
    /// `Q = x·exp(−¼(A−1)(ln₂ x)²/ln₃ x)`
    Fghm,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Bv => "BV",
            Regime::Eh => "EH",
            Regime::Fghm => "FGHM",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Regime::Bv, Regime::Eh, Regime::Fghm]
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(alloc::format!("unknown regime {s:?}")))
    }
}

/// `Σ_{q≤Q} E*(x;q)` with the level `Q` and the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSumReport {
    pub x: u64,
    pub q_max: u64,
    pub regime: Regime,
    pub a: Option<BigRational>,
    pub b: Option<BigRational>,
    pub eps: Option<BigRational>,
    pub sum: Interval,
    /// `sum·(ln x)^A/x`, when `A` is given.
    pub ratio: Option<Interval>,
}

const LEVEL_START: u32 = 64;
const LEVEL_MAX_BITS: u32 = 4096;

fn rat_iv(r: &BigRational, prec: Precision) -> Interval {
    iv_from_rational(r, prec)
}

fn floor_to_level(v: BigInt) -> u64 {
    if v.is_negative() {
        0
    } else {
        v.to_u64().unwrap_or(u64::MAX)
    }
}

/// `⌊√x (ln x)^{−B}⌋`.
pub fn bv_level(x: u64, b: &BigRational) -> Result<u64> {
    if x < 16 {
        return Err(Error::domain("the level formulas need x >= 16"));
    }
    if b.is_zero() {
        return Ok(x.sqrt());
    }
    let f = floor_of_exp(
        |p| {
            let lx = ln_u64(x, p)?;
            let llx = lx.ln(p)?;
            Ok(lx.mul_pow2(-1).sub(&llx.mul(&rat_iv(b, p), p), p))
        },
        Precision::bits_at_least(LEVEL_START),
        LEVEL_MAX_BITS,
    )?;
    Ok(floor_to_level(f))
}

/// `⌊x^{1−ε}⌋` for `0 < ε < 1`.
pub fn eh_level(x: u64, eps: &BigRational) -> Result<u64> {
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::domain("ε must lie strictly between 0 and 1"));
    }
    let e = BigRational::one() - eps;
    let (num, den) = (e.numer().to_u32(), e.denom().to_u32());
    // small exponents go through an exact integer root, which also settles
    // the case where x^{1−ε} is itself an integer
    if let (Some(num), Some(den)) = (num, den) {
        if num <= 1024 {
            let v = num_bigint::BigUint::from(x).pow(num).nth_root(den);
            return Ok(v.to_u64().expect("below x"));
        }
    }
    let f = floor_of_exp(
        |p| Ok(ln_u64(x, p)?.mul(&rat_iv(&e, p), p)),
        Precision::bits_at_least(LEVEL_START),
        LEVEL_MAX_BITS,
    )?;
    Ok(floor_to_level(f))
}

fn ln_ln_ln(x: u64, prec: Precision) -> Result<(Interval, Interval, Interval)> {
    if x < 16 {
        return Err(Error::domain("ln ln ln x is positive only from x = 16 on"));
    }
    let l1 = ln_u64(x, prec)?;
    let l2 = l1.ln(prec)?;
    let l3 = l2.ln(prec)?;
    Ok((l1, l2, l3))
}

/// Logarithm of the FGHM level.
fn fghm_log(x: u64, a: &BigRational, prec: Precision) -> Result<Interval> {
    let (l1, l2, l3) = ln_ln_ln(x, prec)?;
    let am1 = rat_iv(&(a - BigRational::one()), prec);
    let expo = am1.mul(&l2.square(prec), prec).div(&l3, prec)?.mul_pow2(-2);
    Ok(l1.sub(&expo, prec))
}

/// `x·exp(−¼(A−1)(ln₂ x)²/ln₃ x)` for `A ≥ 1`, `x ≥ 16`.
pub fn fghm_threshold(x: u64, a: &BigRational, prec: Precision) -> Result<Interval> {
    if a < &BigRational::one() {
        return Err(Error::domain("the FGHM threshold needs A >= 1"));
    }
    ln_ln_ln(x, prec)?;
    if a.is_one() {
        return Ok(Interval::from_int(x as i64));
    }
    fghm_log(x, a, prec)?.exp(prec)
}

/// `⌊x·exp(−¼(A−1)(ln₂ x)²/ln₃ x)⌋`.
pub fn fghm_level(x: u64, a: &BigRational) -> Result<u64> {
    if a.is_one() {
        ln_ln_ln(x, Precision::bits_at_least(LEVEL_START))?;
        return Ok(x);
    }
    if a < &BigRational::one() {
        return Err(Error::domain("the FGHM threshold needs A >= 1"));
    }
    let f = floor_of_exp(
        |p| fghm_log(x, a, p),
        Precision::bits_at_least(LEVEL_START),
        LEVEL_MAX_BITS,
    )?;
    Ok(floor_to_level(f))
}

/// `Σ_{q≤Q} E*(x;q)` over a prepared table.
pub fn level_sum(table: &LiTable, q_max: u64, prec: Precision) -> Result<Interval> {
    check_level(table.x(), q_max)?;
    let mut sum = Interval::zero();
    for q in 1..=q_max {
        sum = sum.add(&table.e_star(q, prec.plus(8))?, prec.plus(8));
    }
    Ok(sum.round_out(prec))
}

/// Rejects levels beyond `Q_CAP` or `x`.
pub fn check_level(x: u64, q_max: u64) -> Result<()> {
    if q_max > Q_CAP {
        return Err(Error::capacity(
            alloc::format!("Q = {q_max} exceeds the cap {Q_CAP}"),
            None,
        ));
    }
    if q_max > x {
        return Err(Error::domain("the level must not exceed x"));
    }
    Ok(())
}

/// `sum·(ln x)^A/x`.
pub fn level_ratio(x: u64, a: &BigRational, sum: &Interval, prec: Precision) -> Result<Interval> {
    let work = prec.plus(16);
    let llx = ln_u64(x, work)?.ln(work)?;
    let pow = llx.mul(&rat_iv(a, work), work).exp(work)?;
    let v = sum
        .mul(&pow, work)
        .div(&Interval::from_int(x as i64), work)?;
    Ok(v.round_out(prec))
}

/// Assembles a report from a level and a sum computed elsewhere.
pub fn level_report(
    x: u64,
    q_max: u64,
    regime: Regime,
    params: [Option<BigRational>; 3],
    sum: Interval,
    prec: Precision,
) -> Result<LevelSumReport> {
    let [a, b, eps] = params;
    let ratio = match &a {
        Some(a) => Some(level_ratio(x, a, &sum, prec)?),
        None => None,
    };
    Ok(LevelSumReport {
        x,
        q_max,
        regime,
        a,
        b,
        eps,
        sum,
        ratio,
    })
}

fn run_level(x: u64, q_max: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    check_level(x, q_max)?;
    if q_max == 0 {
        return Ok(Interval::zero());
    }
    level_sum(&LiTable::new(table, x)?, q_max, prec)
}

/// Bombieri–Vinogradov level sum, `Q = ⌊√x (ln x)^{−B}⌋`.
pub fn bv_sum(
    x: u64,
    a: &BigRational,
    b: &BigRational,
    table: &ChebyshevTable,
    prec: Precision,
) -> Result<LevelSumReport> {
    check_x(x)?;
    let q_max = bv_level(x, b)?;
    let sum = run_level(x, q_max, table, prec)?;
    level_report(
        x,
        q_max,
        Regime::Bv,
        [Some(a.clone()), Some(b.clone()), None],
        sum,
        prec,
    )
}

/// Elliott–Halberstam level sum, `Q = ⌊x^{1−ε}⌋`.
pub fn eh_sum(
    x: u64,
    eps: &BigRational,
    table: &ChebyshevTable,
    prec: Precision,
) -> Result<LevelSumReport> {
    check_x(x)?;
    let q_max = eh_level(x, eps)?;
    let sum = run_level(x, q_max, table, prec)?;
    level_report(
        x,
        q_max,
        Regime::Eh,
        [None, None, Some(eps.clone())],
        sum,
        prec,
    )
}

/// Level sum at the FGHM threshold.
pub fn fghm_sum(
    x: u64,
    a: &BigRational,
    table: &ChebyshevTable,
    prec: Precision,
) -> Result<LevelSumReport> {
    check_x(x)?;
    let q_max = fghm_level(x, a)?;
    let sum = run_level(x, q_max, table, prec)?;
    level_report(
        x,
        q_max,
        Regime::Fghm,
        [Some(a.clone()), None, None],
        sum,
        prec,
    )
}

/// Consecutive primes `p < p' ≤ x` with `p' − p ≤ bound`.
pub fn gpy_gap_count(x: u64, bound: u64, table: &ChebyshevTable) -> Result<u64> {
    check_table(x, table)?;
    Ok(table
        .primes_upto(x)
        .windows(2)
        .filter(|w| (w[1] - w[0]) as u64 <= bound)
        .count() as u64)
}

/// `√x·ln x / (8π)`.
fn schoenfeld_bound(x: u64, prec: Precision) -> Result<Interval> {
    let xi = Interval::from_int(x as i64);
    let v = xi.sqrt(prec)?.mul(&ln_u64(x, prec)?, prec);
    v.div(&pi_enclosure(prec).mul_int(8, prec), prec)
}

/// `|π(x) − Li(x)| < √x·ln x/(8π)` at a single `x ≥ 2657`.
pub fn schoenfeld_check(x: u64, table: &ChebyshevTable, prec: Precision) -> Result<Verdict> {
    if x < SCHOENFELD_START {
        return Err(Error::domain(alloc::format!(
            "the bound is only claimed from x = {SCHOENFELD_START} on"
        )));
    }
    check_table(x, table)?;
    let work = prec.plus(8);
    let pi = Interval::from_int(table.prime_pi(x)? as i64);
    let lhs = pi.sub(&li(x, work)?, work).abs();
    Ok(Verdict::compare(&lhs, &schoenfeld_bound(x, work)?, prec))
}

/// Outcome of checking the Schoenfeld bound at every integer of a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchoenfeldSweep {
    pub from: u64,
    pub to: u64,
    /// Prime-free stretches settled as a whole.
    pub stretches: u64,
    /// Integers that needed an individual check.
    pub pointwise: u64,
    pub fails: Vec<u64>,
    pub undecided: Vec<u64>,
}

impl SchoenfeldSweep {
    pub fn outcome(&self) -> Outcome {
        if !self.fails.is_empty() {
            Outcome::Fails
        } else if !self.undecided.is_empty() {
            Outcome::Undecided
        } else {
            Outcome::Holds
        }
    }
}

/// Checks every integer `y ∈ [from, to]`.
///
/// On a stretch `[p, p' − 1]` between consecutive primes `π` is constant,
/// `Li` increases and the bound increases, so the stretch is settled by
/// `π − Li(p) < B(p)` and `Li(p' − 1) − π < B(p)`. Stretches that do not
/// settle this way fall back to checking each integer.
pub fn schoenfeld_sweep(
    from: u64,
    to: u64,
    table: &ChebyshevTable,
    prec: Precision,
) -> Result<SchoenfeldSweep> {
    if from < SCHOENFELD_START {
        return Err(Error::domain(alloc::format!(
            "the bound is only claimed from x = {SCHOENFELD_START} on"
        )));
    }
    if to < from {
        return Err(Error::domain("empty range"));
    }
    let lt = LiTable::new(table, to)?;
    let mut out = SchoenfeldSweep {
        from,
        to,
        stretches: 0,
        pointwise: 0,
        fails: Vec::new(),
        undecided: Vec::new(),
    };
    let single = |y: u64, out: &mut SchoenfeldSweep| -> Result<()> {
        out.pointwise += 1;
        match schoenfeld_check(y, table, prec)?.outcome {
            Outcome::Holds => {}
            Outcome::Fails => out.fails.push(y),
            Outcome::Undecided => out.undecided.push(y),
        }
        Ok(())
    };
    let first = lt.primes.partition_point(|&p| (p as u64) < from);
    let head_end = lt.primes.get(first).map_or(to, |&p| p as u64 - 1);
    for y in from..=head_end.min(to) {
        single(y, &mut out)?;
    }
    let unit = 1i128 << TABLE_BITS;
    // a stale bound from an earlier anchor is still a valid lower bound
    let mut anchor_bound: i128 = 0;
    for i in first..lt.primes.len() {
        let p = lt.primes[i] as u64;
        let (end, li_end) = match lt.primes.get(i + 1) {
            Some(&n) => (n as u64 - 1, lt.before[i + 1]),
            None => (to, lt.at_x),
        };
        let count = (i as i128 + 1) * unit;
        let li_start = lt.at[i];
        let worst = (count - li_start.0 as i128).max(li_end.1 as i128 - count);
        let mut settled = worst < anchor_bound;
        if !settled {
            let b = schoenfeld_bound(p, prec)?;
            anchor_bound = b
                .lo()
                .mul_pow2(TABLE_BITS as i64)
                .floor()
                .to_i128()
                .unwrap_or(i128::MAX);
            settled = worst < anchor_bound;
        }
        if settled {
            out.stretches += 1;
        } else {
            for y in p..=end {
                single(y, &mut out)?;
            }
        }
    }
    Ok(out)
}
