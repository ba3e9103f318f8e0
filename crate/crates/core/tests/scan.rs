use ec2part::arith::is_squarefree;
use ec2part::curves::parse_curve;
use ec2part::lvalues::{CurveData, ReportOptions, TheoremId};
use ec2part::scan::{family, run_scan, FamilySpec, ScanSummary, SignRule};

fn spec(primes: &[u64], max_r: usize, sign: SignRule) -> FamilySpec {
    FamilySpec { primes: primes.to_vec(), min_r: 1, max_r, sign, max_abs_m: None }
}

#[test]
fn family_sizes() {
    let ps = [3, 5, 7, 13, 23];
    let all = family(&spec(&ps, 2, SignRule::Auto), 11).unwrap();
    assert_eq!(all.len(), 5 + 10);
    assert!(all.iter().all(|t| t.m.rem_euclid(4) == 1 && is_squarefree(t.m)));
    let pos = family(&spec(&ps, 2, SignRule::Positive), 11).unwrap();
    let neg = family(&spec(&ps, 2, SignRule::Negative), 11).unwrap();
    assert_eq!(pos.len() + neg.len(), all.len());
    assert!(pos.iter().all(|t| t.m > 0) && neg.iter().all(|t| t.m < 0));
    // 11 divides the conductor and drops out
    assert_eq!(family(&spec(&[11], 1, SignRule::Auto), 11).unwrap().len(), 0);
}

#[test]
fn scans_are_thread_independent() {
    let cd = CurveData::new(&parse_curve("11a1").unwrap(), None).unwrap();
    let tw = family(&spec(&[3, 5, 23, 31, 37], 2, SignRule::Auto), 11).unwrap();
    let opts = ReportOptions { theorems: vec![TheoremId::T1], with_sums: true, numeric_tol: Some(1e-6) };
    let a = run_scan(&cd, &tw, &opts, Some(1)).unwrap();
    let b = run_scan(&cd, &tw, &opts, None).unwrap();
    let json = |r: &[_]| serde_json::to_string(&r.iter().map(|x: &ec2part::Result<_>| x.as_ref().unwrap()).collect::<Vec<_>>()).unwrap();
    assert_eq!(json(&a), json(&b));
    let s = ScanSummary::of(&a);
    assert_eq!((s.twists, s.conclusions_held, s.errors, s.numeric_failed), (15, 15, 0, 0));
}
