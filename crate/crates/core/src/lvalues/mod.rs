//! Exact algebraic L-values of a curve and its quadratic twists, the
//! modular-symbol sums behind them, and checks of the 2-adic statements about
//! those values.

mod primes;
mod sums;
mod theorems;
mod twist;

pub use primes::{PrimeFilter, PrimePredicate};
pub use sums::{check_lemma, identity_holds, lemma_two_identity, sum_triple, LemmaCheck, LemmaId, SumTriple};
pub use theorems::{verify_theorem, TheoremId, TheoremVerdict};
pub use twist::{
    lalg_twist, pin_bridge, ReportOptions, root_number_twist, tamagawa_ord2_twist, twist_report, TwistLValue,
    TwistReport, BRIDGE_MAX_EXPONENT, BRIDGE_TOL,
};

use crate::analytic::{agm_periods, PeriodData};
use crate::arith::{primes_up_to, rational_string, Ord2};
use crate::curves::{lookup_label, CurveModel, TwoDivisionData};
use crate::error::{Error, Result};
use crate::modsym::{eigendata, EigenData, SymbolPair};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::path::Path;
use std::sync::Arc;

/// An exact rational L-value with its 2-adic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgLValue {
    pub value: BigRational,
    pub ord2: Ord2,
}

impl AlgLValue {
    pub fn new(value: BigRational) -> Self {
        let ord2 = Ord2::of(&value);
        AlgLValue { value, ord2 }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        crate::arith::to_f64(&self.value)
    }
}

impl Serialize for AlgLValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            value: String,
            ord2: &'a Ord2,
        }
        Repr { value: rational_string(&self.value), ord2: &self.ord2 }.serialize(s)
    }
}

impl std::fmt::Display for AlgLValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (ord2 {})", rational_string(&self.value), self.ord2)
    }
}

/// Everything the L-value code needs about one optimal curve, computed once.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub curve: CurveModel,
    pub eig: Arc<EigenData>,
    pub periods: PeriodData,
    pub two_division: TwoDivisionData,
    pub lalg: AlgLValue,
    /// Global root number of the curve itself.
    pub root_number: i32,
}

impl CurveData {
    pub fn new(curve: &CurveModel, cache_dir: Option<&Path>) -> Result<Self> {
        let eig = eigendata(curve, cache_dir)?;
        let lalg = lalg(curve, &eig)?;
        let root_number = curve_root_number(curve, &lalg)?;
        Ok(CurveData {
            curve: curve.clone(),
            periods: agm_periods(curve),
            two_division: curve.two_division_data(),
            eig,
            lalg,
            root_number,
        })
    }

    pub fn level(&self) -> u64 {
        self.curve.conductor()
    }

    pub fn symbol(&self, k: i64, m: i64) -> Result<SymbolPair> {
        self.eig.symbol(k, m)
    }

    pub fn has_rational_two_torsion(&self) -> bool {
        !self.two_division.is_irreducible
    }

    /// Inertness in the cubic field; `None` when it is undefined (reducible
    /// cubic, or a ramified or bad prime).
    pub fn inert_in_f(&self, q: u64) -> Option<bool> {
        self.two_division.is_inert(q, self.level()).ok()
    }
}

/// Root number of a curve: the corpus value when known, otherwise `+1` when
/// the exact central value is nonzero.
fn curve_root_number(curve: &CurveModel, lalg: &AlgLValue) -> Result<i32> {
    if let Some(entry) = curve.label().and_then(|l| lookup_label(l).ok()) {
        if entry.coefficients.iter().zip(curve.coefficients()).all(|(a, b)| BigInt::from(*a) == *b) {
            return Ok(entry.root_number);
        }
    }
    if !lalg.is_zero() {
        return Ok(1);
    }
    Err(Error::Precondition(format!(
        "root number of {} is unknown (vanishing central value)",
        curve.name()
    )))
}

/// `L(E,1)/Omega^+` from the sum over `k mod l` for one odd good prime `l`.
pub fn lalg_with_prime(curve: &CurveModel, eig: &EigenData, l: u64) -> Result<BigRational> {
    if l % 2 == 0 || !curve.is_good(l) {
        return Err(Error::InvalidInput(format!("auxiliary prime {l} must be odd and good")));
    }
    let n = curve.n_q(l)?;
    if n == 0 {
        return Err(Error::InvalidInput(format!("N_{l} = 0")));
    }
    let mut total = BigRational::zero();
    for k in 1..l as i64 {
        total += eig.symbol(k, l as i64)?.x_plus;
    }
    Ok(-total / BigRational::from_integer(n.into()))
}

/// The first `count` odd good primes usable as auxiliary primes.
pub fn auxiliary_primes(curve: &CurveModel, count: usize) -> Vec<u64> {
    primes_up_to(10_000)
        .into_iter()
        .filter(|&l| l > 2 && curve.is_good(l) && curve.n_q(l).is_ok_and(|n| n != 0))
        .take(count)
        .collect()
}

/// `L^(alg)(E,1) = L(E,1)/Omega^+` using the smallest auxiliary prime.
pub fn lalg(curve: &CurveModel, eig: &EigenData) -> Result<AlgLValue> {
    let l = auxiliary_primes(curve, 1)[0];
    Ok(AlgLValue::new(lalg_with_prime(curve, eig, l)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::parse_curve;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn corpus_values() {
        for (label, n, d) in [("11a1", 1, 5), ("37b1", 2, 3), ("17a1", 1, 4), ("21a1", 1, 4), ("73a1", 1, 2)] {
            let cd = CurveData::new(&parse_curve(label).unwrap(), None).unwrap();
            assert_eq!(cd.lalg.value, q(n, d), "{label}");
        }
    }

    #[test]
    fn auxiliary_prime_independent() {
        for label in ["11a1", "37b1", "19a1", "26b1"] {
            let e = parse_curve(label).unwrap();
            let eig = eigendata(&e, None).unwrap();
            let vals: Vec<_> = auxiliary_primes(&e, 3)
                .into_iter()
                .map(|l| lalg_with_prime(&e, &eig, l).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[0] == w[1]), "{label}: {vals:?}");
            assert_eq!(vals[0], eig.lalg_direct());
        }
    }

    #[test]
    fn ord2_marker() {
        assert_eq!(AlgLValue::new(q(2, 3)).ord2, Ord2::Finite(1));
        assert_eq!(AlgLValue::new(q(0, 1)).ord2, Ord2::Infinite);
        let json = serde_json::to_string(&AlgLValue::new(q(1, 4))).unwrap();
        assert_eq!(json, r#"{"value":"1/4","ord2":-2}"#);
    }
}
