//! The harmonic-sum criterion `(H_{δ(n)} − n²/2)² < RHS(n)`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;

use crate::chebyshev::{height_bits, PrimeLogs};
use crate::dyadic::Dyadic;
use crate::elementary::exp_point;
use crate::error::{Error, Result};
use crate::harmonic::{gamma_clamped, harmonic_asymptotic, harmonic_direct};
use crate::interval::{Interval, Precision, PrecisionPolicy};
use crate::sieve::{ChebyshevTable, DELTA_EXACT_CAP};
use crate::verdict::{Outcome, Verdict};

/// Largest `n` for which [`dmr_oracle`] sums `H_{δ(n)}` term by term.
pub const ORACLE_CAP: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundVariant {
    /// `36 n³`
    Classic36,
    /// `(γ² + 8γ + 16) n³ + (2γ + 8) n^{3/2} + 1`
    ImprovedGamma,
    /// `25 n³ + 10 n^{3/2} + 1`
    Rational25,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 3] = [
        BoundVariant::Classic36,
        BoundVariant::ImprovedGamma,
        BoundVariant::Rational25,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundVariant::Classic36 => "classic36",
            BoundVariant::ImprovedGamma => "improved_gamma",
            BoundVariant::Rational25 => "rational25",
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Parse(alloc::format!("unknown bound variant {s:?}")))
    }
}

fn n_three_halves(n: u64, prec: Precision) -> Interval {
    let n_iv = Interval::from_int(n as i64);
    let root = n_iv.sqrt(prec).expect("n is nonnegative");
    root.mul(&n_iv, prec)
}

/// Right-hand side of the chosen bound.
pub fn dmr_rhs(n: u64, variant: BoundVariant, prec: Precision) -> Interval {
    let cube = Interval::from_bigint(&(BigUint::from(n).pow(3)).into());
    match variant {
        BoundVariant::Classic36 => cube.mul_int(36, prec),
        BoundVariant::Rational25 => {
            let t = n_three_halves(n, prec).mul_int(10, prec);
            cube.mul_int(25, prec)
                .add(&t, prec)
                .add(&Interval::from_int(1), prec)
        }
        BoundVariant::ImprovedGamma => {
            let work = prec.plus(8);
            let g4 = gamma_clamped(work).add(&Interval::from_int(4), work);
            let c3 = g4.square(work);
            let c1 = g4.mul_int(2, work);
            let t = n_three_halves(n, work).mul(&c1, work);
            c3.mul(&cube, work)
                .add(&t, work)
                .add(&Interval::from_int(1), work)
                .round_out(prec)
        }
    }
}

fn lhs_from_h(h: &Interval, n: u64, prec: Precision) -> Interval {
    let half_sq = Interval::point(Dyadic::from_int((n * n) as i64).mul_pow2(-1));
    h.sub(&half_sq, prec).square(prec)
}

/// Shared state for evaluating many `n`: prime logs built once.
#[derive(Debug)]
pub struct DmrEngine<'a> {
    table: &'a ChebyshevTable,
    policy: PrecisionPolicy,
    logs: PrimeLogs,
}

/// One certified evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmrEvaluation {
    pub n: u64,
    pub variant: BoundVariant,
    pub lhs: Interval,
    pub rhs: Interval,
    pub verdict: Verdict,
}

impl<'a> DmrEngine<'a> {
    /// Engine for heights up to `upto`, which must not exceed the table limit + 1.
    pub fn new(table: &'a ChebyshevTable, policy: PrecisionPolicy, upto: u64) -> Result<Self> {
        if upto == 0 || upto > table.limit() + 1 {
            return Err(Error::Range {
                value: upto,
                limit: table.limit() + 1,
            });
        }
        let first = Precision::bits_at_least(policy.initial_bits());
        let logs = PrimeLogs::new(table, upto - 1, height_bits(upto, first));
        Ok(DmrEngine {
            table,
            policy,
            logs,
        })
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    /// ln δ(n) at precision `prec`, reusing the shared logs when they suffice.
    fn delta_log(&self, n: u64, prec: Precision) -> Interval {
        if self.logs.serves(prec) && n <= self.logs.covers_upto() + 1 {
            self.logs.to_interval(&self.logs.psi1_fixed(n), prec)
        } else {
            let logs = PrimeLogs::new(self.table, n - 1, prec);
            logs.to_interval(&logs.psi1_fixed(n), prec)
        }
    }

    /// `(H_{δ(n)} − n²/2)²` at working precision `prec`.
    pub fn lhs(&self, n: u64, prec: Precision) -> Result<Interval> {
        if n == 0 {
            return Err(Error::domain("the criterion starts at n = 1"));
        }
        if n > self.table.limit() + 1 {
            return Err(Error::Range {
                value: n,
                limit: self.table.limit() + 1,
            });
        }
        let prec = height_bits(n, prec);
        let h = if n <= 3 {
            harmonic_direct(&self.table.delta_exact(n)?, prec)?
        } else {
            let ln_m = self.delta_log(n, prec);
            let m_lower = if n <= DELTA_EXACT_CAP {
                Dyadic::from_biguint(&self.table.delta_exact(n)?)
            } else {
                exp_point(ln_m.lo(), prec)?.0
            };
            harmonic_asymptotic(&ln_m, &m_lower, prec)?
        };
        Ok(lhs_from_h(&h, n, prec))
    }

    /// Certified verdict, escalating precision through the policy.
    pub fn evaluate(&self, n: u64, variant: BoundVariant) -> Result<DmrEvaluation> {
        let levels = self.policy.levels();
        let mut last = None;
        for prec in levels {
            let lhs = self.lhs(n, prec)?;
            let rhs = dmr_rhs(n, variant, prec);
            let verdict = Verdict::compare(&lhs, &rhs, prec);
            let done = verdict.outcome != Outcome::Undecided;
            last = Some(DmrEvaluation {
                n,
                variant,
                lhs,
                rhs,
                verdict,
            });
            if done {
                break;
            }
        }
        Ok(last.expect("a policy has at least one level"))
    }
}

/// Enclosure of the left-hand side at height `n`.
pub fn dmr_lhs(n: u64, table: &ChebyshevTable, prec: Precision) -> Result<Interval> {
    let engine = DmrEngine::new(table, PrecisionPolicy::fixed(prec.bits())?, n.max(1))?;
    engine.lhs(n, prec)
}

/// Certified verdict for a single `n`.
pub fn check_dmr(
    n: u64,
    variant: BoundVariant,
    policy: PrecisionPolicy,
    table: &ChebyshevTable,
) -> Result<Verdict> {
    let engine = DmrEngine::new(table, policy, n.max(1))?;
    Ok(engine.evaluate(n, variant)?.verdict)
}

/// Independent verdict by direct summation over the exact δ(n), `n ≤ ORACLE_CAP`.
pub fn dmr_oracle(
    n: u64,
    variant: BoundVariant,
    prec: Precision,
    table: &ChebyshevTable,
) -> Result<Verdict> {
    if n > ORACLE_CAP {
        return Err(Error::capacity(
            alloc::format!("the direct oracle is capped at n = {ORACLE_CAP}"),
            None,
        ));
    }
    let delta = table.delta_exact(n)?;
    let h = harmonic_direct(&delta, prec)?;
    let lhs = lhs_from_h(&h, n, prec);
    let rhs = dmr_rhs(n, variant, prec);
    Ok(Verdict::compare(&lhs, &rhs, prec))
}

/// Verdicts for every `n` in `lo..=hi`, in order.
pub fn dmr_range(
    engine: &DmrEngine<'_>,
    lo: u64,
    hi: u64,
    variant: BoundVariant,
) -> Result<Vec<DmrEvaluation>> {
    (lo..=hi).map(|n| engine.evaluate(n, variant)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_table;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn lhs_small_cases() {
        let t = build_table(100).unwrap();
        assert!(dmr_lhs(1, &t, p(64)).unwrap().contains_rational(&rat(1, 4)));
        assert!(dmr_lhs(2, &t, p(64)).unwrap().contains_rational(&rat(1, 1)));
        assert!(dmr_lhs(3, &t, p(64)).unwrap().contains_rational(&rat(9, 1)));
        assert!(matches!(dmr_lhs(0, &t, p(64)), Err(Error::Domain(_))));
    }

    #[test]
    fn lhs_paths_agree_at_seven() {
        let t = build_table(100).unwrap();
        let asym = dmr_lhs(7, &t, p(96)).unwrap();
        let h = harmonic_direct(&BigUint::from(518_400u32), p(96)).unwrap();
        let direct = lhs_from_h(&h, 7, p(96));
        assert!(asym.overlaps(&direct));
    }

    #[test]
    fn rhs_values() {
        assert_eq!(
            dmr_rhs(2, BoundVariant::Classic36, p(64)),
            Interval::from_int(288)
        );
        assert!(dmr_rhs(4, BoundVariant::Rational25, p(64)).contains(&Dyadic::from_int(1681)));
        // (γ + 5)² at n = 1
        let g5 = gamma_clamped(p(200))
            .add(&Interval::from_int(5), p(200))
            .square(p(200));
        assert!(dmr_rhs(1, BoundVariant::ImprovedGamma, p(96)).overlaps(&g5));
    }

    #[test]
    fn small_checks_hold() {
        let t = build_table(100).unwrap();
        let pol = PrecisionPolicy::default();
        for n in [1u64, 3, 5] {
            for v in BoundVariant::ALL {
                assert_eq!(
                    check_dmr(n, v, pol, &t).unwrap().outcome,
                    Outcome::Holds,
                    "{n} {v}"
                );
            }
        }
        assert_eq!(
            dmr_oracle(2, BoundVariant::Classic36, p(64), &t)
                .unwrap()
                .outcome,
            Outcome::Holds
        );
        assert!(dmr_oracle(9, BoundVariant::Classic36, p(64), &t).is_err());
    }

    #[test]
    fn variant_names_roundtrip() {
        for v in BoundVariant::ALL {
            assert_eq!(v.as_str().parse::<BoundVariant>().unwrap(), v);
        }
        assert!("classic".parse::<BoundVariant>().is_err());
    }
}
