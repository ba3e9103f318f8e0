use super::integrate::{period_integral, terms_for_height};
use super::lseries::{coefficients, lseries_at_one, required_terms};
use super::periods::{agm_periods, PeriodData};
use crate::curves::CurveModel;
use crate::error::Result;
use crate::modsym::PeriodPair;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Values below this are treated as zero on both sides.
pub const ABS_FLOOR: f64 = 1e-12;

/// Outcome of comparing an exact value against the numerical oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub exact: f64,
    pub numeric: f64,
    /// Relative discrepancy, or absolute when both sides are below the floor.
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn compare(exact: f64, numeric: f64, tolerance: f64) -> Verdict {
    let (discrepancy, pass) = if exact.abs() < ABS_FLOOR && numeric.abs() < ABS_FLOOR {
        ((exact - numeric).abs(), true)
    } else {
        let d = (exact - numeric).abs() / numeric.abs().max(ABS_FLOOR);
        (d, d < tolerance)
    };
    Verdict { exact, numeric, discrepancy, tolerance, pass }
}

/// Compare `lalg * Omega_oo(curve)` against the series for `L(curve, 1)`.
///
/// `curve` is the model being evaluated (a twist is passed as its own minimal
/// model), so the series is built from its own point counts.
pub fn cross_validate(
    curve: &CurveModel,
    root_number: i32,
    lalg: f64,
    tolerance: f64,
) -> Result<Verdict> {
    let omega = agm_periods(curve).omega_plus;
    if root_number == -1 {
        return Ok(compare(lalg * omega, 0.0, tolerance));
    }
    let target = (tolerance * 1e-3 * omega * lalg.abs().max(1e-3)).max(1e-15);
    let n = required_terms(curve.conductor(), target);
    let coeffs = coefficients(curve, n)?;
    let l = lseries_at_one(&coeffs, 1, curve.conductor(), root_number, n, target)?;
    Ok(compare(lalg * omega, l.value, tolerance))
}

/// Compare an exact period pair on `{0, k/m}` with the numerical integral.
///
/// Returns the verdicts for the real and imaginary parts.
pub fn check_period_pair(
    curve: &CurveModel,
    periods: &PeriodData,
    pair: &PeriodPair,
    k: i64,
    m: i64,
    tolerance: f64,
) -> Result<(Verdict, Verdict)> {
    let scale = if pair.lattice_type == 2 { 0.5 } else { 1.0 };
    let re = pair.s.to_f64().unwrap() * scale * periods.omega_plus;
    let im = pair.t.to_f64().unwrap() * scale * periods.omega_minus;
    let n = terms_for_height(2.0 / (curve.conductor() as f64 * m as f64));
    let coeffs = coefficients(curve, n)?;
    let z = period_integral(&coeffs, curve.conductor(), k, m)?;
    // Relative to the lattice scale, not the (possibly zero) component.
    let rel = |exact: f64, numeric: f64, unit: f64| {
        let d = (exact - numeric).abs() / unit;
        Verdict { exact, numeric, discrepancy: d, tolerance, pass: d < tolerance }
    };
    Ok((rel(re, z.re, periods.omega_plus), rel(im, z.im, periods.omega_minus)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modsym::eigendata;

    #[test]
    fn compare_floor() {
        assert!(compare(0.0, 1e-14, 1e-8).pass);
        assert!(!compare(0.2, 0.3, 1e-8).pass);
        assert!(compare(0.2, 0.2 + 1e-12, 1e-8).pass);
    }

    #[test]
    fn exact_symbols_match_integrals() {
        for a in [[0, -1, 1, -10, -20], [0, 1, 1, -23, -50], [1, -1, 1, -1, -14]] {
            let e = CurveModel::from_i64(a).unwrap();
            let eig = eigendata(&e, None).unwrap();
            let per = agm_periods(&e);
            for (k, m) in [(1i64, 3i64), (2, 7), (3, 7), (5, 13), (4, 9), (7, 19)] {
                if num_integer::gcd(m as u64, e.conductor()) != 1 {
                    continue;
                }
                let pair = eig.period_pair(k, m).unwrap();
                let (re, im) = check_period_pair(&e, &per, &pair, k, m, 1e-8).unwrap();
                assert!(re.pass, "{a:?} {k}/{m} re {re:?}");
                assert!(im.pass, "{a:?} {k}/{m} im {im:?}");
            }
        }
    }

    #[test]
    fn lvalue_agrees() {
        let e = CurveModel::from_i64([0, 1, 1, -23, -50]).unwrap();
        assert!(cross_validate(&e, 1, 2.0 / 3.0, 1e-8).unwrap().pass);
        assert!(!cross_validate(&e, 1, 1.0 / 3.0, 1e-8).unwrap().pass);
    }
}
