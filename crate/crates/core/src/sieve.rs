//! Prime-power sieve.
//!
//! The table keeps one byte per integer `j ≤ N`: the exponent `k` when
//! `j = p^k` and zero otherwise. That single byte answers η(j), primality and
//! Λ(j), and is exactly what the on-disk cache stores.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::One;

use crate::error::{Error, Result};

/// Default memory budget, in table entries.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest `n` for which [`ChebyshevTable::delta_exact`] is computed.
pub const DELTA_EXACT_CAP: u64 = 12;

const SEGMENT: usize = 1 << 18;

/// Immutable sieve tables up to a limit `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebyshevTable {
    exps: Vec<u8>,
    primes: Vec<u32>,
}

fn small_primes(limit: usize) -> Vec<u32> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Builds the table up to `n` under the default memory budget.
pub fn build_table(n: u64) -> Result<ChebyshevTable> {
    ChebyshevTable::build_with_budget(n, DEFAULT_BUDGET)
}

impl ChebyshevTable {
    pub fn build(n: u64) -> Result<Self> {
        build_table(n)
    }

    /// Segmented sieve of Eratosthenes; `budget` caps the entry count.
    pub fn build_with_budget(n: u64, budget: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("sieve limit must be at least 1"));
        }
        if n + 1 > budget || n > u32::MAX as u64 {
            return Err(Error::capacity(
                alloc::format!("sieve limit {n} exceeds the memory budget of {budget} entries"),
                None,
            ));
        }
        let n = n as usize;
        let mut exps = vec![0u8; n + 1];
        let base = small_primes(n.sqrt());
        let mut primes = Vec::new();
        let mut seg = vec![false; SEGMENT];
        let mut start = 2usize;
        while start <= n {
            let end = (start + SEGMENT - 1).min(n);
            let len = end - start + 1;
            seg[..len].fill(false);
            for &p in &base {
                let p = p as usize;
                if p * p > end {
                    break;
                }
                let first = (p * p).max(start.div_ceil(p) * p);
                let mut j = first;
                while j <= end {
                    seg[j - start] = true;
                    j += p;
                }
            }
            for (i, &c) in seg[..len].iter().enumerate() {
                if !c {
                    exps[start + i] = 1;
                    primes.push((start + i) as u32);
                }
            }
            start = end + 1;
        }
        for &p in &base {
            let p = p as usize;
            let mut q = p * p;
            let mut k = 2u8;
            while q <= n {
                exps[q] = k;
                k += 1;
                match q.checked_mul(p) {
                    Some(v) => q = v,
                    None => break,
                }
            }
        }
        Ok(ChebyshevTable { exps, primes })
    }

    /// Rebuilds a table from its exponent bytes (index 0 included), as read
    /// from a cache file.
    pub fn from_exponents(exps: Vec<u8>) -> Result<Self> {
        if exps.len() < 2 || exps[0] != 0 || exps[1] != 0 {
            return Err(Error::Parse("malformed sieve exponent table".into()));
        }
        let primes = exps
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k == 1)
            .map(|(j, _)| j as u32)
            .collect();
        Ok(ChebyshevTable { exps, primes })
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn limit(&self) -> u64 {
        (self.exps.len() - 1) as u64
    }

    pub(crate) fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit() {
            Err(Error::Range {
                value: n,
                limit: self.limit(),
            })
        } else {
            Ok(())
        }
    }

    /// The exponent `k` with `j = p^k`, or 0 when `j` is not a prime power.
    pub fn prime_power_exponent(&self, j: u64) -> Result<u32> {
        self.check(j)?;
        Ok(self.exps[j as usize] as u32)
    }

    /// η(j): `p` when `j = p^k`, otherwise 1.
    pub fn eta(&self, j: u64) -> Result<u64> {
        Ok(match self.prime_power_exponent(j)? {
            0 => 1,
            1 => j,
            k => j.nth_root(k),
        })
    }

    pub fn is_prime(&self, j: u64) -> Result<bool> {
        Ok(self.prime_power_exponent(j)? == 1)
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `≤ x`.
    pub fn primes_upto(&self, x: u64) -> &[u32] {
        let k = self.primes.partition_point(|&p| p as u64 <= x);
        &self.primes[..k]
    }

    /// π(x).
    pub fn prime_pi(&self, x: u64) -> Result<u64> {
        if x > self.limit() {
            return Err(Error::Range {
                value: x,
                limit: self.limit(),
            });
        }
        Ok(self.primes_upto(x).len() as u64)
    }

    /// π(x; q, a): primes `≤ x` congruent to `a` modulo `q`.
    pub fn prime_pi_progression(&self, x: u64, q: u64, a: u64) -> Result<u64> {
        if q == 0 || a.gcd(&q) != 1 {
            return Err(Error::domain(alloc::format!("gcd({a}, {q}) is not 1")));
        }
        if x > self.limit() {
            return Err(Error::Range {
                value: x,
                limit: self.limit(),
            });
        }
        let a = a % q;
        Ok(self
            .primes_upto(x)
            .iter()
            .filter(|&&p| p as u64 % q == a)
            .count() as u64)
    }

    /// lcm(1, …, n) as the product of the largest prime powers `≤ n`.
    pub fn lcm_upto(&self, n: u64) -> Result<BigUint> {
        self.check(n)?;
        let factors: Vec<BigUint> = self
            .primes_upto(n)
            .iter()
            .map(|&p| {
                let p = p as u64;
                let mut q = p;
                while q <= n / p {
                    q *= p;
                }
                BigUint::from(q)
            })
            .collect();
        Ok(product(factors))
    }

    /// δ(n) = Π_{m<n} lcm(1..m), for `n ≤ DELTA_EXACT_CAP`.
    pub fn delta_exact(&self, n: u64) -> Result<BigUint> {
        if n > DELTA_EXACT_CAP {
            return Err(Error::capacity(
                alloc::format!("exact delta is capped at n = {DELTA_EXACT_CAP}; use delta_log"),
                None,
            ));
        }
        if n == 0 {
            return Err(Error::domain("delta is defined for n >= 1"));
        }
        let mut d = BigUint::one();
        for m in 1..n {
            d *= self.lcm_upto(m)?;
        }
        Ok(d)
    }
}

/// Balanced product, so large lcm values cost O(M(size) log count).
pub(crate) fn product(mut v: Vec<BigUint>) -> BigUint {
    if v.is_empty() {
        return BigUint::one();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a * b),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}
