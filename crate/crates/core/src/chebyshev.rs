//! Certified ψ, ψ₁ and log δ.
//!
//! Every `ln p` is enclosed once as a fixed-point integer pair at scale
//! `2^-w`; ψ and ψ₁ are then exact integer combinations of those pairs, so
//! the only rounding is in the logs themselves.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::elementary::{fixed_to_interval, ln_fixed_at};
use crate::error::{Error, Result};
use crate::interval::{Interval, Precision};
use crate::sieve::ChebyshevTable;

/// Working precision for ψ and ψ₁ at height `n`:
/// `max(requested, 64 + 2⌈log₂(n+1)⌉)`.
pub fn height_bits(n: u64, prec: Precision) -> Precision {
    let lg = 64 - n.leading_zeros();
    Precision::bits_at_least(prec.bits().max(64 + 2 * lg))
}

fn scale_for(prec: Precision) -> u32 {
    prec.bits() + 16
}

/// Fixed-point enclosures of `ln p` for every prime up to a bound.
#[derive(Debug, Clone)]
pub struct PrimeLogs {
    w: u32,
    bound: u64,
    primes: Vec<u32>,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

impl PrimeLogs {
    /// Logs of the primes `≤ upto`, good for results at precision `prec`.
    pub fn new(table: &ChebyshevTable, upto: u64, prec: Precision) -> Self {
        let w = scale_for(prec);
        let primes = table.primes_upto(upto).to_vec();
        let (lo, hi) = primes.iter().map(|&p| ln_fixed_at(p as u64, w)).unzip();
        PrimeLogs {
            w,
            bound: upto,
            primes,
            lo,
            hi,
        }
    }

    pub fn scale(&self) -> u32 {
        self.w
    }

    /// Every prime up to this bound is covered.
    pub fn covers_upto(&self) -> u64 {
        self.bound
    }

    /// Whether these logs are precise enough for `prec`.
    pub fn serves(&self, prec: Precision) -> bool {
        self.w >= scale_for(prec)
    }

    fn index(&self, p: u64) -> usize {
        let i = self.primes.partition_point(|&q| (q as u64) < p);
        assert!(
            i < self.primes.len() && self.primes[i] as u64 == p,
            "prime {p} is not covered by these logs"
        );
        i
    }

    /// Fixed-point bounds on `ln p`.
    pub fn ln_prime(&self, p: u64) -> (&BigInt, &BigInt) {
        let i = self.index(p);
        (&self.lo[i], &self.hi[i])
    }

    fn weighted<F: Fn(u64) -> u128>(&self, upto: u64, weight: F) -> (BigInt, BigInt) {
        let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
        for (i, &p) in self.primes.iter().enumerate() {
            let p = p as u64;
            if p > upto {
                break;
            }
            let c = weight(p);
            if c == 0 {
                continue;
            }
            let c = BigInt::from(c);
            lo += &c * &self.lo[i];
            hi += &c * &self.hi[i];
        }
        (lo, hi)
    }

    /// ψ(n) as fixed-point bounds.
    pub fn psi_fixed(&self, n: u64) -> (BigInt, BigInt) {
        assert!(
            n <= self.bound,
            "logs cover primes up to {} only",
            self.bound
        );
        self.weighted(n, |p| {
            let mut k = 0u128;
            let mut q = p;
            loop {
                k += 1;
                match q.checked_mul(p) {
                    Some(v) if v <= n => q = v,
                    _ => break,
                }
            }
            k
        })
    }

    /// ψ₁(n) = Σ_{p^k < n} (n − p^k) ln p as fixed-point bounds.
    pub fn psi1_fixed(&self, n: u64) -> (BigInt, BigInt) {
        assert!(
            n <= self.bound + 1,
            "logs cover primes up to {} only",
            self.bound
        );
        self.weighted(n.saturating_sub(1), |p| {
            let mut c = 0u128;
            let mut q = p;
            while q < n {
                c += (n - q) as u128;
                match q.checked_mul(p) {
                    Some(v) => q = v,
                    None => break,
                }
            }
            c
        })
    }

    pub fn to_interval(&self, v: &(BigInt, BigInt), prec: Precision) -> Interval {
        fixed_to_interval(v.0.clone(), v.1.clone(), self.w, prec)
    }
}

/// ψ(n) = Σ_{j≤n} ln η(j) = ln lcm(1..n).
pub fn psi(n: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    table.check(n)?;
    let prec = height_bits(n, prec);
    let logs = PrimeLogs::new(table, n, prec);
    Ok(logs.to_interval(&logs.psi_fixed(n), prec))
}

/// ψ₁(n) = Σ_{j<n} (n − j) ln η(j), for `1 ≤ n ≤ N + 1`.
pub fn psi1(n: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    if n == 0 || n > table.limit() + 1 {
        return Err(Error::Range {
            value: n,
            limit: table.limit() + 1,
        });
    }
    let prec = height_bits(n, prec);
    let logs = PrimeLogs::new(table, n - 1, prec);
    Ok(logs.to_interval(&logs.psi1_fixed(n), prec))
}

/// ln δ(n); identical to [`psi1`].
pub fn delta_log(n: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    psi1(n, table, prec)
}

/// Walks ψ(n) and ψ₁(n) upward one integer at a time. Each step adds at
/// most one `ln p` and one fixed-point ψ, so a sweep costs O(N) additions.
#[derive(Debug, Clone)]
pub struct ChebyshevScanner<'a> {
    table: &'a ChebyshevTable,
    logs: &'a PrimeLogs,
    n: u64,
    psi: (BigInt, BigInt),
    psi1: (BigInt, BigInt),
}

impl<'a> ChebyshevScanner<'a> {
    /// Starts at height `n`; `logs` must cover every prime the scan reaches.
    pub fn new(table: &'a ChebyshevTable, logs: &'a PrimeLogs, n: u64) -> Result<Self> {
        table.check(n)?;
        Ok(ChebyshevScanner {
            table,
            logs,
            n,
            psi: logs.psi_fixed(n),
            psi1: logs.psi1_fixed(n),
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Moves to `n + 1`.
    pub fn advance(&mut self) -> Result<()> {
        let next = self.n + 1;
        let k = self.table.prime_power_exponent(next)?;
        self.psi1.0 += &self.psi.0;
        self.psi1.1 += &self.psi.1;
        if k > 0 {
            let p = self.table.eta(next)?;
            let (lo, hi) = self.logs.ln_prime(p);
            self.psi.0 += lo;
            self.psi.1 += hi;
        }
        self.n = next;
        Ok(())
    }

    pub fn psi_fixed(&self) -> &(BigInt, BigInt) {
        &self.psi
    }

    pub fn psi1_fixed(&self) -> &(BigInt, BigInt) {
        &self.psi1
    }

    pub fn psi(&self, prec: Precision) -> Interval {
        self.logs.to_interval(&self.psi, prec)
    }

    pub fn psi1(&self, prec: Precision) -> Interval {
        self.logs.to_interval(&self.psi1, prec)
    }
}
