//! Weierstrass models over Q: minimalization, reduction data, point counts,
//! 2-division arithmetic, quadratic twists and rational torsion.

mod corpus;
mod count;
mod division;
mod torsion;
mod twist;

pub use corpus::{corpus, lookup_label, parse_curve, CorpusEntry};
pub use count::{ap_table, count_points};
pub use division::{count_padic_roots, TwoDivisionData};
pub use twist::TwistDescriptor;

use crate::arith::{primes_up_to, valuation};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

/// Cap on primes for which point counting is done by enumeration.
pub const POINT_COUNT_LIMIT: u64 = 1_000_000;

/// Bound for trial division when factoring discriminants.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// A globally minimal integral Weierstrass model
/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveModel {
    a: [BigInt; 5],
    conductor: u64,
    disc: BigInt,
    label: Option<String>,
}

/// Standard b- and c-invariants of a Weierstrass model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

pub fn invariants(a: &[BigInt; 5]) -> Invariants {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8: BigInt = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - 24 * &b4;
    let b2_cubed: BigInt = &b2 * &b2 * &b2;
    let c6: BigInt = 36 * &b2 * &b4 - 216 * &b6 - b2_cubed;
    let b2b2b8: BigInt = &b2 * &b2 * &b8;
    let disc: BigInt = -b2b2b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
    Invariants { b2, b4, b6, b8, c4, c6, disc }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_LIMIT))
}

/// Factor a nonzero big integer by trial division. The cofactor left after
/// the loop is accepted only when it is provably prime (below the square of
/// the last trial divisor).
pub fn factor_big(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut rest = n.abs();
    let mut out = Vec::new();
    for &p in small_primes() {
        if rest.is_one() {
            return Ok(out);
        }
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            let q = rest.to_u64().expect("cofactor below p^2 fits in u64");
            out.push((q, 1));
            return Ok(out);
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if rest.is_one() {
        Ok(out)
    } else {
        Err(Error::Capacity(format!(
            "integer {n} has a prime factor above {TRIAL_DIVISION_LIMIT}"
        )))
    }
}

/// Rebuild the reduced model (a1, a3 in {0,1}, a2 in {-1,0,1}) with the
/// given c-invariants, or `None` when no integral model has them.
fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<[BigInt; 5]> {
    let mut b2 = (-c6).mod_floor(&BigInt::from(12));
    if b2 > BigInt::from(6) {
        b2 -= 12;
    }
    let exact = |num: BigInt, den: i64| -> Option<BigInt> {
        let (q, r) = num.div_rem(&BigInt::from(den));
        r.is_zero().then_some(q)
    };
    let b4 = exact(&b2 * &b2 - c4, 24)?;
    let b6 = exact(-(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - c6, 216)?;
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let a2 = exact(&b2 - &a1, 4)?;
    let a4 = exact(&b4 - &a1 * &a3, 2)?;
    let a6 = exact(&b6 - &a3, 4)?;
    let a = [a1, a2, a3, a4, a6];
    let inv = invariants(&a);
    (inv.c4 == *c4 && inv.c6 == *c6).then_some(a)
}

/// Globally minimal reduced model isomorphic to `raw`, with its discriminant.
fn minimal_coefficients(raw: &[BigInt; 5]) -> Result<([BigInt; 5], Vec<(u64, u32)>)> {
    let inv = invariants(raw);
    if inv.disc.is_zero() {
        return Err(Error::Singular);
    }
    let factors = factor_big(&inv.disc)?;
    let val = |x: &BigInt, p: u64| valuation(x, p).map(|v| v as i64).unwrap_or(i64::MAX);
    let mut base = BigInt::one();
    let mut bound2 = 0i64;
    let mut bound3 = 0i64;
    for &(p, e) in &factors {
        let e = e as i64;
        if e < 12 {
            continue;
        }
        let k = (e / 12).min(val(&inv.c4, p) / 4).min(val(&inv.c6, p) / 6);
        match p {
            2 => bound2 = k,
            3 => bound3 = k,
            _ => base *= BigInt::from(p).pow(k as u32),
        }
    }
    for e2 in (0..=bound2).rev() {
        for e3 in (0..=bound3).rev() {
            let u = &base * BigInt::from(2).pow(e2 as u32) * BigInt::from(3).pow(e3 as u32);
            let u2 = &u * &u;
            let u4 = &u2 * &u2;
            let u6 = &u4 * &u2;
            if !(&inv.c4 % &u4).is_zero() || !(&inv.c6 % &u6).is_zero() {
                continue;
            }
            if let Some(a) = model_from_c4c6(&(&inv.c4 / &u4), &(&inv.c6 / &u6)) {
                let disc = invariants(&a).disc;
                let factors = factor_big(&disc)?;
                return Ok((a, factors));
            }
        }
    }
    Err(Error::InvalidInput(
        "no integral model found for the given invariants".into(),
    ))
}

/// Conductor exponent of the minimal model at `p`, where the caller supplies
/// the exponent for additive reduction at 2 or 3 when it is known.
fn conductor_exponent(
    p: u64,
    c4: &BigInt,
    additive_small: &dyn Fn(u64) -> Option<u32>,
) -> Result<u32> {
    if valuation(c4, p) == Some(0) {
        return Ok(1);
    }
    if p >= 5 {
        return Ok(2);
    }
    additive_small(p).ok_or_else(|| {
        Error::Unsupported(format!(
            "conductor exponent at {p} for additive reduction needs Tate's algorithm"
        ))
    })
}

impl CurveModel {
    /// Minimalize raw coefficients and compute the conductor from the
    /// reduction types. Additive reduction at 2 or 3 is not supported here.
    pub fn minimalize(raw: [BigInt; 5]) -> Result<CurveModel> {
        Self::minimalize_with(raw, None, &|_| None)
    }

    /// Minimalize with a known conductor (corpus metadata).
    pub fn with_conductor(raw: [BigInt; 5], conductor: u64, label: Option<String>) -> Result<Self> {
        let (a, factors) = minimal_coefficients(&raw)?;
        let disc = invariants(&a).disc;
        for (p, _) in factor_small(conductor) {
            if !factors.iter().any(|&(q, _)| q == p) {
                return Err(Error::InvalidInput(format!(
                    "conductor {conductor} has prime {p} not dividing the discriminant"
                )));
            }
        }
        Ok(CurveModel { a, conductor, disc, label })
    }

    pub(crate) fn minimalize_with(
        raw: [BigInt; 5],
        label: Option<String>,
        additive_small: &dyn Fn(u64) -> Option<u32>,
    ) -> Result<CurveModel> {
        let (a, factors) = minimal_coefficients(&raw)?;
        let inv = invariants(&a);
        let mut conductor = 1u64;
        for &(p, _) in &factors {
            let f = conductor_exponent(p, &inv.c4, additive_small)?;
            conductor = conductor
                .checked_mul(p.pow(f))
                .ok_or_else(|| Error::Capacity("conductor overflows u64".into()))?;
        }
        Ok(CurveModel { a, conductor, disc: inv.disc, label })
    }

    pub fn from_i64(raw: [i64; 5]) -> Result<CurveModel> {
        Self::minimalize(raw.map(BigInt::from))
    }

    pub fn coefficients(&self) -> &[BigInt; 5] {
        &self.a
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn invariants(&self) -> Invariants {
        invariants(&self.a)
    }

    pub fn disc_sign(&self) -> i32 {
        if self.disc.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Display name: label when present, else the coefficient tuple.
    pub fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => format!("{self}"),
        }
    }

    /// Primes dividing the minimal discriminant.
    pub fn bad_primes(&self) -> Vec<u64> {
        factor_big(&self.disc)
            .expect("minimal discriminant was factored at construction")
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }

    pub fn is_good(&self, q: u64) -> bool {
        !(&self.disc % BigInt::from(q)).is_zero()
    }

    /// Trace of Frobenius with the bad-prime convention (1 split, -1 non-split,
    /// 0 additive), from the count of all points of the reduction.
    pub fn a_p(&self, q: u64) -> Result<i64> {
        if q > POINT_COUNT_LIMIT {
            return Err(Error::Capacity(format!(
                "point counting is limited to q <= {POINT_COUNT_LIMIT}, got {q}"
            )));
        }
        if !crate::arith::is_prime(q) {
            return Err(Error::InvalidInput(format!("{q} is not prime")));
        }
        Ok(q as i64 + 1 - count_points(&self.a, q) as i64)
    }

    /// `N_q = q + 1 - a_q`.
    pub fn n_q(&self, q: u64) -> Result<i64> {
        Ok(q as i64 + 1 - self.a_p(q)?)
    }

    pub fn two_division_data(&self) -> TwoDivisionData {
        TwoDivisionData::of(self)
    }

    /// Whether `q` is inert in the cubic field cut out by the 2-division
    /// polynomial.
    pub fn is_inert_in_f(&self, q: u64) -> Result<bool> {
        self.two_division_data().is_inert(q, self.conductor)
    }

    /// Order of `E(Q_q)[2]`.
    pub fn local_two_torsion_order(&self, q: u64) -> Result<u32> {
        if q % 2 == 0 {
            return Err(Error::Precondition("local 2-torsion needs an odd prime".into()));
        }
        let roots = count_padic_roots(&self.two_division_data().scaled_cubic(), q, 20)?;
        Ok(1 + roots as u32)
    }

    /// Minimal model of the quadratic twist by the square-free integer `m`.
    pub fn twist(&self, m: i64) -> Result<CurveModel> {
        twist::twist_model(self, m)
    }

    pub fn torsion_order(&self) -> Result<u64> {
        torsion::torsion_order(self)
    }

    /// Whether `E[2](Q)` is nontrivial.
    pub fn has_rational_two_torsion(&self) -> bool {
        !self.two_division_data().is_irreducible
    }
}

fn factor_small(n: u64) -> Vec<(u64, u32)> {
    crate::arith::factor(n)
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.a;
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: [i64; 5]) -> [BigInt; 5] {
        v.map(BigInt::from)
    }

    #[test]
    fn eleven_a_is_minimal() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        assert_eq!(e.coefficients(), &big([0, -1, 1, -10, -20]));
        assert_eq!(e.disc(), &BigInt::from(-161051));
        assert_eq!(e.conductor(), 11);
    }

    #[test]
    fn scaled_model_unscales() {
        // a_i -> 2^i a_i scales by u = 2.
        let (min, _) = minimal_coefficients(&big([0, 0, 0, 0, -432])).unwrap();
        let (back, _) = minimal_coefficients(&big([0, 0, 0, 0, -432 * 64])).unwrap();
        assert_eq!(back, min);
        assert_eq!(min, big([0, 0, 1, 0, -7]));
        let scaled = CurveModel::minimalize(big([0, -4, 8, -160, -1280])).unwrap();
        assert_eq!(scaled.coefficients(), &big([0, -1, 1, -10, -20]));
    }

    #[test]
    fn neumann_setzer_73() {
        let e = CurveModel::from_i64([1, -1, 0, 4, -3]).unwrap();
        assert_eq!(e.disc(), &BigInt::from(-73 * 73));
        assert_eq!(e.conductor(), 73);
        assert_eq!(e.coefficients(), &big([1, -1, 0, 4, -3]));
    }

    #[test]
    fn singular_model_rejected() {
        assert_eq!(CurveModel::from_i64([0, 0, 0, 0, 0]), Err(Error::Singular));
        assert_eq!(CurveModel::from_i64([0, 0, 0, -3, 2]), Err(Error::Singular));
    }

    #[test]
    fn bad_prime_traces() {
        let e = CurveModel::from_i64([1, -1, 0, 4, -3]).unwrap();
        assert_eq!(e.a_p(73).unwrap(), 1);
        assert_eq!(e.a_p(2).unwrap(), 1);
        let e11 = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        assert_eq!(e11.a_p(11).unwrap(), 1);
        assert_eq!(e11.a_p(3).unwrap(), -1);
        assert!(matches!(e11.a_p(1_000_003), Err(Error::Capacity(_))));
    }

    #[test]
    fn disc_sign_preserved_under_minimalization() {
        let raw = big([0, 0, 0, -27 * 496 * 16, -54 * 20008 * 64]);
        let e = CurveModel::minimalize(raw).unwrap();
        assert_eq!(e.coefficients(), &big([0, -1, 1, -10, -20]));
    }
}
