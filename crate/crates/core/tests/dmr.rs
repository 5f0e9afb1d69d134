use pi01_core::dmr::{check_dmr, dmr_lhs, dmr_oracle, dmr_rhs, BoundVariant, DmrEngine};
use pi01_core::sieve::build_table;
use pi01_core::{Outcome, Precision, PrecisionPolicy};

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

#[test]
fn asymptotic_path_agrees_with_direct_oracle() {
    let t = build_table(100).unwrap();
    let pol = PrecisionPolicy::default();
    for n in 1..=7u64 {
        for v in BoundVariant::ALL {
            let fast = check_dmr(n, v, pol, &t).unwrap().outcome;
            let slow = dmr_oracle(n, v, p(96), &t).unwrap().outcome;
            assert_eq!(fast, slow, "n = {n}, {v}");
        }
    }
}

#[test]
fn escalation_never_flips_a_decided_verdict() {
    let t = build_table(3000).unwrap();
    for n in [1u64, 2, 9, 50, 400, 2500] {
        let mut seen = None;
        for bits in [16u32, 24, 48, 96, 192] {
            let o = check_dmr(
                n,
                BoundVariant::Classic36,
                PrecisionPolicy::fixed(bits).unwrap(),
                &t,
            )
            .unwrap()
            .outcome;
            if o != Outcome::Undecided {
                assert!(seen.map_or(true, |s| s == o), "{n} flipped at {bits} bits");
                seen = Some(o);
            }
        }
    }
}

#[test]
fn lhs_narrows_with_precision() {
    let t = build_table(2000).unwrap();
    for n in [20u64, 300, 1999] {
        let a = dmr_lhs(n, &t, p(96)).unwrap();
        let b = dmr_lhs(n, &t, p(192)).unwrap();
        assert!(b.width() < a.width(), "{n}");
        assert!(a.overlaps(&b));
    }
}

#[test]
fn rhs_variants_are_strictly_ordered() {
    for n in 2..=500u64 {
        let g = dmr_rhs(n, BoundVariant::ImprovedGamma, p(96));
        let r = dmr_rhs(n, BoundVariant::Rational25, p(96));
        let c = dmr_rhs(n, BoundVariant::Classic36, p(96));
        assert!(g.certainly_lt(&r) && r.certainly_lt(&c), "{n}");
    }
}

#[test]
fn engine_range_holds() {
    let t = build_table(400).unwrap();
    let e = DmrEngine::new(&t, PrecisionPolicy::default(), 400).unwrap();
    for v in BoundVariant::ALL {
        let all = pi01_core::dmr::dmr_range(&e, 1, 400, v).unwrap();
        assert!(
            all.iter().all(|r| r.verdict.outcome == Outcome::Holds),
            "{v}"
        );
    }
}
