use super::sums::{sum_triple, SumTriple};
use super::theorems::{verdict_with, TheoremId, TheoremVerdict};
use super::{AlgLValue, CurveData};
use crate::analytic::{agm_periods, coefficients, compare, lseries_at_one, required_terms, Verdict};
use crate::arith::kronecker;
use crate::curves::{CurveModel, TwistDescriptor};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Relative tolerance when pinning the period bridge to a power of 2.
pub const BRIDGE_TOL: f64 = 1e-9;
/// Largest `|j|` accepted for a bridge factor `2^j`.
pub const BRIDGE_MAX_EXPONENT: i32 = 4;

/// An exact twisted central value and how it was assembled.
#[derive(Clone, Debug, Serialize)]
pub struct TwistLValue {
    pub twist: TwistDescriptor,
    pub lalg: AlgLValue,
    /// `sum_{k=1}^{(m-1)/2} chi(k) x(k/m)`, with the real part for `M > 0`
    /// and the imaginary part for `M < 0`.
    #[serde(serialize_with = "ser_rational")]
    pub chi_sum: BigRational,
    /// `j` with `Omega^(+-)(E) / (sqrt|M| Omega_oo(E^(M))) = 2^j`.
    pub bridge_exponent: i32,
    pub root_number: i32,
    #[serde(skip)]
    pub twist_curve: CurveModel,
    pub omega_twist: f64,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::arith::rational_string(x))
}

/// The exponent `j` with `ratio = 2^j`, or a bridge failure.
pub fn pin_bridge(ratio: f64) -> Result<i32> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::PeriodBridge { ratio });
    }
    let j = ratio.log2().round() as i32;
    let exact = 2f64.powi(j);
    if j.abs() > BRIDGE_MAX_EXPONENT || (ratio - exact).abs() > BRIDGE_TOL * exact {
        return Err(Error::PeriodBridge { ratio });
    }
    Ok(j)
}

/// Root number of `E^(M)`: `(M / -C) w(E)`.
pub fn root_number_twist(cd: &CurveData, twist: &TwistDescriptor) -> i32 {
    kronecker(twist.m, -(cd.level() as i64)) * cd.root_number
}

/// `sum_{q | M} ord_2 #E(Q_q)[2]`, the 2-part of the Tamagawa factors at the
/// twisting primes.
pub fn tamagawa_ord2_twist(curve: &CurveModel, twist: &TwistDescriptor) -> Result<u32> {
    let mut total = 0;
    for &q in &twist.primes {
        total += curve.local_two_torsion_order(q)?.trailing_zeros();
    }
    Ok(total)
}

/// `L(E^(M),1) / Omega_oo(E^(M))` as an exact rational.
pub fn lalg_twist(cd: &CurveData, twist: &TwistDescriptor) -> Result<TwistLValue> {
    if twist.primes.iter().any(|q| cd.level() % q == 0) {
        return Err(Error::InvalidInput(format!("{} is not coprime to the level", twist.m)));
    }
    let (den_plus, den_minus) = cd.eig.x_dens();
    let den = if twist.m > 0 { den_plus } else { den_minus };
    let chi_sum = BigRational::new(cd.eig.half_chi_sum(twist.m).into(), den.into());
    let root_number = root_number_twist(cd, twist);
    if root_number == -1 && !chi_sum.is_zero() {
        return Err(Error::Normalization(format!(
            "twist by {} has root number -1 but a nonzero character sum {chi_sum}",
            twist.m
        )));
    }
    if chi_sum.is_negative() {
        return Err(Error::Normalization(format!(
            "negative character sum {chi_sum} for the twist by {}",
            twist.m
        )));
    }
    let twist_curve = cd.curve.twist(twist.m)?;
    let omega_twist = agm_periods(&twist_curve).omega_plus;
    let omega_e = if twist.m > 0 { cd.periods.omega_plus } else { cd.periods.omega_minus };
    let ratio = omega_e / ((twist.modulus() as f64).sqrt() * omega_twist);
    let bridge_exponent = pin_bridge(ratio)?;
    let two = BigRational::from_integer(2.into());
    let factor = two.pow(bridge_exponent + 1);
    Ok(TwistLValue {
        twist: twist.clone(),
        lalg: AlgLValue::new(&chi_sum * factor),
        chi_sum,
        bridge_exponent,
        root_number,
        twist_curve,
        omega_twist,
    })
}

impl TwistLValue {
    /// Compare `lalg * Omega_oo(E^(M))` with the series for `L(E^(M), 1)`,
    /// using `a_n(E^(M)) = chi(n) a_n(E)` and conductor `C M^2`.
    pub fn cross_check(&self, cd: &CurveData, tolerance: f64) -> Result<Verdict> {
        let exact = self.lalg.to_f64() * self.omega_twist;
        if self.root_number == -1 {
            return Ok(compare(exact, 0.0, tolerance));
        }
        let conductor = cd.level() * self.twist.modulus() * self.twist.modulus();
        let target = if exact == 0.0 { 1e-14 } else { (1e-3 * tolerance * exact.abs()).max(1e-15) };
        let n = required_terms(conductor, target);
        let coeffs = coefficients(&cd.curve, n)?;
        let l = lseries_at_one(&coeffs, self.twist.m, conductor, 1, n, target)?;
        Ok(compare(exact, l.value, tolerance))
    }
}

/// Which extras to attach to a [`TwistReport`].
#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub theorems: Vec<TheoremId>,
    pub with_sums: bool,
    /// Tolerance for the numerical cross-check, if wanted.
    pub numeric_tol: Option<f64>,
}

/// Everything known about one twist, as emitted by scans.
#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub curve: String,
    pub m: i64,
    pub factorization: String,
    pub r: usize,
    pub lalg: AlgLValue,
    pub bridge_exponent: i32,
    pub root_number: i32,
    pub tamagawa_ord2: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sums: Option<SumTriple>,
    pub verdicts: BTreeMap<TheoremId, TheoremVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<Verdict>,
}

pub fn twist_report(cd: &CurveData, twist: &TwistDescriptor, opts: &ReportOptions) -> Result<TwistReport> {
    let tv = lalg_twist(cd, twist)?;
    let mut verdicts = BTreeMap::new();
    for &id in &opts.theorems {
        verdicts.insert(id, verdict_with(cd, id, twist, &tv)?);
    }
    let sums = if opts.with_sums { Some(sum_triple(cd, twist.modulus())?) } else { None };
    let numeric = opts.numeric_tol.map(|tol| tv.cross_check(cd, tol)).transpose()?;
    Ok(TwistReport {
        curve: cd.curve.name(),
        m: twist.m,
        factorization: twist.factorization_string(),
        r: twist.r(),
        lalg: tv.lalg,
        bridge_exponent: tv.bridge_exponent,
        root_number: tv.root_number,
        tamagawa_ord2: tamagawa_ord2_twist(&cd.curve, twist)?,
        sums,
        verdicts,
        numeric,
    })
}
