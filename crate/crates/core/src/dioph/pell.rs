//! Pell sequences and the decimal prime constant θ₁ = Σ p_k·10^{−2^k}.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sieve::build_table;

/// Largest truncation accepted by [`theta1_partial`].
pub const THETA1_CAP: u32 = 6;

/// The `n`-th solution of `χ² − (a² − 1)ψ² = 1`, ordered by `ψ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellPair {
    pub a: BigUint,
    pub n: u64,
    pub chi: BigUint,
    pub psi: BigUint,
}

impl PellPair {
    /// Checks the Pell identity exactly.
    pub fn satisfies_identity(&self) -> bool {
        let d = &self.a * &self.a - 1u8;
        &self.chi * &self.chi == d * &self.psi * &self.psi + 1u8
    }
}

pub fn pell_seq(a: &BigUint, n: u64) -> Result<PellPair> {
    if a < &BigUint::from(2u8) {
        return Err(Error::domain("Pell sequences need a >= 2"));
    }
    let two_a = a << 1u8;
    let (mut chi0, mut chi1) = (BigUint::one(), a.clone());
    let (mut psi0, mut psi1) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let chi2 = &two_a * &chi1 - &chi0;
        let psi2 = &two_a * &psi1 - &psi0;
        chi0 = core::mem::replace(&mut chi1, chi2);
        psi0 = core::mem::replace(&mut psi1, psi2);
    }
    Ok(PellPair {
        a: a.clone(),
        n,
        chi: chi0,
        psi: psi0,
    })
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u8).pow(e)
}

/// Exact `Σ_{k≤K} p_k·10^{−2^k}` for `1 ≤ K ≤ THETA1_CAP`.
pub fn theta1_partial(k: u32) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::domain("θ₁ truncation needs K >= 1"));
    }
    if k > THETA1_CAP {
        return Err(Error::capacity(
            alloc::format!("θ₁ truncation is capped at K = {THETA1_CAP}"),
            None,
        ));
    }
    let table = build_table(20)?;
    let den = pow10(1 << k);
    let num: BigInt = table.primes()[..k as usize]
        .iter()
        .zip(1..=k)
        .map(|(&p, i)| BigInt::from(p) * pow10((1 << k) - (1 << i)))
        .sum();
    Ok(BigRational::new(num, den))
}

fn floor_scaled(theta: &BigRational, j: u32) -> BigInt {
    (theta * BigRational::from_integer(pow10(1 << j)))
        .floor()
        .to_integer()
}

fn extract(theta: &BigRational, n: u32) -> BigUint {
    let v = floor_scaled(theta, n) - pow10(1 << (n - 1)) * floor_scaled(theta, n - 1);
    v.to_biguint().expect("digit blocks are nonnegative")
}

/// `p_n = ⌊θ₁·10^{2^n}⌋ − 10^{2^{n−1}}·⌊θ₁·10^{2^{n−1}}⌋` on the K-term truncation, `1 ≤ n < K`.
pub fn prime_from_theta1(n: u32, k: u32) -> Result<BigUint> {
    if n == 0 || n >= k {
        return Err(Error::domain(alloc::format!(
            "extracting p_{n} needs 1 <= n < K = {k}"
        )));
    }
    Ok(extract(&theta1_partial(k)?, n))
}

/// `p_{n+1} = ⌊θ₁·10^{2^{n+1}}⌋ − 10^{2^n}·⌊θ₁·10^{2^n}⌋`, `1 ≤ n`, `n + 1 < K`.
pub fn prime_next_from_theta1(n: u32, k: u32) -> Result<BigUint> {
    if n == 0 || n + 1 >= k {
        return Err(Error::domain(alloc::format!(
            "extracting p_{} needs 1 <= n and n + 1 < K = {k}",
            n + 1
        )));
    }
    Ok(extract(&theta1_partial(k)?, n + 1))
}
