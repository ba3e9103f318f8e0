use ec2part::arith::{is_prime, Ord2};
use ec2part::descent::{
    aq_ns, conjecture_scan, lalg_denominator_check, ns_curves, verify_thm_a, NsData,
};
use ec2part::Error;

#[test]
fn denominator_at_73() {
    let data = NsData::new(-3, None).unwrap();
    let c = lalg_denominator_check(&data).unwrap();
    assert_eq!(ec2part::arith::rational_string(&c.lalg.value), "1/2");
    assert_eq!(c.a2, 1);
    assert!(c.holds);
}

#[test]
fn ledgers_at_73() {
    let data = NsData::new(-3, None).unwrap();
    let qs: Vec<u64> = data.pair.three_mod_four_inert(100).into_iter().take(5).collect();
    assert_eq!(qs, [7, 11, 31, 43, 47]);
    for q in qs {
        let l = verify_thm_a(&data, q).unwrap();
        assert_eq!((l.lalg_ord2, l.selmer2_order, l.torsion_order), (0, 1, 2));
        assert_eq!(l.tamagawa[&73], 2);
        assert_eq!(l.tamagawa[&q], 2);
        assert!(l.identity_holds);
    }
    assert!(matches!(verify_thm_a(&data, 3), Err(Error::Precondition(_))));
    assert!(matches!(verify_thm_a(&data, 13), Err(Error::Precondition(_))));
}

#[test]
fn products_of_two_inert_primes() {
    let data = NsData::new(-3, None).unwrap();
    let rows = conjecture_scan(&data, 1, 1000).unwrap();
    assert_eq!(rows.first().unwrap().m, 77);
    assert!(rows.iter().any(|r| r.m == 217));
    for r in &rows {
        assert_eq!(r.ord2_base, Ord2::Finite(-1));
        assert!(r.hypothesis && r.conclusion, "M = {}", r.m);
        assert_eq!(r.ord2_lalg_twist, Ord2::Finite(1));
    }
}

#[test]
fn hecke_congruences_below_500() {
    for u in [-3, 5, 13] {
        let pair = ns_curves(u).unwrap();
        for q in (2..500).filter(|&q| is_prime(q)) {
            assert!(aq_ns(&pair, q).unwrap().holds, "p = {} q = {q}", pair.p);
        }
    }
}
