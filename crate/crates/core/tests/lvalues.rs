use ec2part::arith::{is_squarefree, Ord2};
use ec2part::curves::{parse_curve, TwistDescriptor};
use ec2part::lvalues::{check_lemma, identity_holds, lalg_twist, sum_triple, CurveData, LemmaId};
use proptest::prelude::*;
use std::sync::OnceLock;

fn e11() -> &'static CurveData {
    static CD: OnceLock<CurveData> = OnceLock::new();
    CD.get_or_init(|| CurveData::new(&parse_curve("11a1").unwrap(), None).unwrap())
}

#[test]
fn twists_agree_with_series() {
    let cd = e11();
    for m in [-3, 5, -7, 13, -19, 21, -23] {
        let t = TwistDescriptor::new(m, 11).unwrap();
        let tv = lalg_twist(cd, &t).unwrap();
        let v = tv.cross_check(cd, 1e-6).unwrap();
        assert!(v.pass, "M={m}: {v:?}");
    }
}

#[test]
fn odd_count_lemma_on_seventeen() {
    // 17a1 has rational 2-torsion, so the odd-count lemma never applies
    let cd = CurveData::new(&parse_curve("17a1").unwrap(), None).unwrap();
    let c = check_lemma(&cd, LemmaId::OddCounts, 3).unwrap();
    assert!(!c.hypotheses_met && c.holds.is_none());
}

#[test]
fn sums_of_the_trivial_modulus_are_finite() {
    let t = sum_triple(e11(), 3).unwrap();
    assert_eq!(t.m, 3);
    assert_ne!(t.ord2_s_prime(), Ord2::Infinite);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn divisor_identity(m in 3u64..160) {
        prop_assume!(m % 2 == 1 && m % 11 != 0 && is_squarefree(m as i64));
        prop_assert!(identity_holds(e11(), m).unwrap());
        let c = check_lemma(e11(), LemmaId::DivisorSum, m).unwrap();
        prop_assert_eq!(c.holds, Some(true));
    }

    #[test]
    fn lemmas_never_fail(m in 3u64..120, l in 0usize..4) {
        prop_assume!(m % 2 == 1 && m % 11 != 0 && is_squarefree(m as i64));
        let c = check_lemma(e11(), LemmaId::ALL[l], m).unwrap();
        prop_assert_ne!(c.holds, Some(false));
        prop_assert_eq!(c.holds.is_some(), c.hypotheses_met);
    }
}
