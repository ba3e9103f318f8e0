use ec2part::arith::{factor, gcd_i64};
use ec2part::curves::parse_curve;
use ec2part::lvalues::CurveData;
use ec2part::modsym::{eigendata, ModSymSpace};
use num_rational::BigRational;

fn totient(n: i64) -> i64 {
    (1..=n).filter(|&k| gcd_i64(k, n) == 1).count() as i64
}

/// Genus of X_0(N) from the index, elliptic points and cusps.
fn genus(n: u64) -> i64 {
    let ps = factor(n);
    let mu = ps.iter().fold(n as i64, |acc, &(p, _)| acc / p as i64 * (p as i64 + 1));
    let nu2 = (0..n).filter(|x| (x * x + 1) % n == 0).count() as i64;
    let nu3 = (0..n).filter(|x| (x * x + x + 1) % n == 0).count() as i64;
    let n = n as i64;
    let cusps: i64 = (1..=n).filter(|d| n % d == 0).map(|d| totient(gcd_i64(d, n / d))).sum();
    (12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps) / 12
}

#[test]
fn cuspidal_dimension_is_twice_genus() {
    for n in [11, 14, 17, 19, 20, 24, 27, 32, 36, 37, 43, 49, 64] {
        let s = ModSymSpace::build(n).unwrap();
        assert_eq!(s.cuspidal_dim() as i64, 2 * genus(n), "N={n}");
    }
}

#[test]
fn direct_value_matches_reported() {
    for (label, num, den) in [("11a1", 1, 5), ("37b1", 2, 3), ("19a1", 1, 3)] {
        let e = parse_curve(label).unwrap();
        let eig = eigendata(&e, None).unwrap();
        let want = BigRational::new(num.into(), den.into());
        assert_eq!(eig.lalg_direct(), want, "{label}");
        assert_eq!(CurveData::new(&e, None).unwrap().lalg.value, want);
    }
}

#[test]
fn cache_is_written_once() {
    let dir = tempfile::tempdir().unwrap();
    let e = parse_curve("14a1").unwrap();
    let a = eigendata(&e, Some(dir.path())).unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some());
    let b = eigendata(&e, Some(dir.path())).unwrap();
    assert_eq!(a.lalg_direct(), b.lalg_direct());
    assert_eq!(a.symbol(2, 9).unwrap(), b.symbol(2, 9).unwrap());
}

#[test]
fn symbols_respect_conjugation() {
    // {0, -k/m} is the reflection of {0, k/m}: x+ is even, x- is odd
    let e = parse_curve("11a1").unwrap();
    let eig = eigendata(&e, None).unwrap();
    for m in [3, 7, 13] {
        for k in 1..m {
            if gcd_i64(k, m) != 1 {
                continue;
            }
            let (a, b) = (eig.symbol(k, m).unwrap(), eig.symbol(-k, m).unwrap());
            assert_eq!(a.x_plus, b.x_plus);
            assert_eq!(a.x_minus, -b.x_minus);
        }
    }
}
