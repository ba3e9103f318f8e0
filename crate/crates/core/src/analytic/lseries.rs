use crate::arith::{kronecker, spf_table};
use crate::curves::{ap_table, CurveModel};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Dirichlet coefficients `a_n` of a curve for `n <= len`, index 0 unused.
#[derive(Clone, Debug)]
pub struct Coefficients {
    an: Vec<i64>,
}

impl Coefficients {
    pub fn compute(curve: &CurveModel, len: u64) -> Result<Self> {
        let aps = ap_table(curve, len.max(2))?;
        let len = len as usize;
        let mut ap = vec![0i64; len + 1];
        for (p, a) in aps {
            ap[p as usize] = a;
        }
        let spf = spf_table(len);
        let mut an = vec![0i64; len + 1];
        if len >= 1 {
            an[1] = 1;
        }
        for n in 2..=len {
            let p = spf[n] as usize;
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            let good = curve.conductor() % p as u64 != 0;
            // a_{p^k} by the Hecke recursion (bad primes: a_p^k).
            let (mut prev, mut cur) = (1i64, ap[p]);
            for _ in 1..k {
                let next = if good { ap[p] * cur - p as i64 * prev } else { ap[p] * cur };
                (prev, cur) = (cur, next);
            }
            an[n] = cur * an[m];
        }
        Ok(Coefficients { an })
    }

    pub fn len(&self) -> u64 {
        (self.an.len() - 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.an.len() <= 1
    }

    pub fn get(&self, n: u64) -> i64 {
        self.an[n as usize]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.an
    }
}

fn coeff_cache() -> &'static Mutex<HashMap<String, Arc<Coefficients>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Coefficients>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached coefficients of at least length `len`. Entries are only replaced
/// by longer ones.
pub fn coefficients(curve: &CurveModel, len: u64) -> Result<Arc<Coefficients>> {
    let key = format!("{curve}");
    if let Some(c) = coeff_cache().lock().unwrap().get(&key) {
        if c.len() >= len {
            return Ok(c.clone());
        }
    }
    let c = Arc::new(Coefficients::compute(curve, len)?);
    let mut cache = coeff_cache().lock().unwrap();
    let keep = cache.get(&key).is_some_and(|old| old.len() >= c.len());
    if !keep {
        cache.insert(key, c.clone());
    }
    Ok(c)
}

/// Number of terms after which the series tail for conductor `n` is below
/// `tol`, using `|a_n| / n <= 2`.
pub fn required_terms(conductor: u64, tol: f64) -> u64 {
    let mut t = 1u64;
    while tail_bound(conductor, t) > tol {
        t = (t as f64 * 1.2).ceil() as u64 + 1;
    }
    t
}

/// Bound on `2 sum_{n > t} |a_n/n| x^n` with `x = exp(-2 pi / sqrt(N))`.
pub fn tail_bound(conductor: u64, t: u64) -> f64 {
    let x = (-2.0 * PI / (conductor as f64).sqrt()).exp();
    4.0 * x.powf(t as f64 + 1.0) / (1.0 - x)
}

/// A numerical value of `L(E,1)` with its truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LSeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// `L(E^(M), 1)` for the twist by `m_twist` (1 for the curve itself) with
/// conductor `conductor`, using `nterms` terms and `a_n(E^M) = chi_M(n) a_n`.
/// Requires root number +1.
pub fn lseries_at_one(
    coeffs: &Coefficients,
    m_twist: i64,
    conductor: u64,
    root_number: i32,
    nterms: u64,
    tol: f64,
) -> Result<LSeriesValue> {
    if root_number != 1 {
        return Err(Error::Precondition(
            "the series L(E,1) = 2 sum a_n/n exp(-2 pi n / sqrt N) needs root number +1".into(),
        ));
    }
    let required = required_terms(conductor, tol);
    if nterms < required || coeffs.len() < nterms {
        return Err(Error::InsufficientTerms { required, given: nterms.min(coeffs.len()) });
    }
    let x = (-2.0 * PI / (conductor as f64).sqrt()).exp();
    let mut sum = CompensatedSum::new();
    let mut xn = 1.0;
    for n in 1..=nterms {
        xn *= x;
        let a = coeffs.get(n);
        if a == 0 {
            continue;
        }
        let chi = if m_twist == 1 { 1 } else { kronecker(m_twist, n as i64) as i64 };
        if chi != 0 {
            sum.add((chi * a) as f64 / n as f64 * xn);
        }
    }
    Ok(LSeriesValue {
        value: 2.0 * sum.value(),
        tail_bound: tail_bound(conductor, nterms),
        terms: nterms,
    })
}

/// `F(z) = sum a_n/n exp(2 pi i n z)`, the primitive of `2 pi i f(z) dz`
/// vanishing at the cusp at infinity.
pub fn eichler_integral(coeffs: &Coefficients, z: Complex64, nterms: u64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=nterms.min(coeffs.len()) {
        qn *= q;
        if n % 64 == 0 {
            // re-anchor the running power to limit error growth
            qn = (Complex64::new(0.0, 2.0 * PI * n as f64) * z).exp();
        }
        let a = coeffs.get(n);
        if a != 0 {
            let t = qn * (a as f64 / n as f64);
            re.add(t.re);
            im.add(t.im);
        }
    }
    Complex64::new(re.value(), im.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::agm_periods;

    #[test]
    fn eleven_a_coefficients() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let c = Coefficients::compute(&e, 30).unwrap();
        let expect = [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4, 4, -1, -4];
        for (n, a) in expect.iter().enumerate() {
            assert_eq!(c.get(n as u64 + 1), *a, "n={}", n + 1);
        }
    }

    #[test]
    fn l_over_omega() {
        for (a, n, expect) in [
            ([0, -1, 1, -10, -20], 11u64, 0.2),
            ([1, -1, 0, 4, -3], 73, 0.5),
            ([0, 1, 1, -23, -50], 37, 2.0 / 3.0),
        ] {
            let e = CurveModel::from_i64(a).unwrap();
            let c = coefficients(&e, 2000).unwrap();
            let l = lseries_at_one(&c, 1, n, 1, 2000, 1e-14).unwrap();
            let ratio = l.value / agm_periods(&e).omega_plus;
            assert!((ratio - expect).abs() < 1e-8, "{a:?}: {ratio}");
            // doubling the terms moves the value by less than the tail bound
            let l2 = lseries_at_one(&c, 1, n, 1, 1000, 1e-10).unwrap();
            assert!((l.value - l2.value).abs() <= l2.tail_bound);
        }
    }

    #[test]
    fn insufficient_terms_reported() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let c = coefficients(&e, 100).unwrap();
        let err = lseries_at_one(&c, -3, 99, 1, 10, 1e-12).unwrap_err();
        assert!(matches!(err, Error::InsufficientTerms { .. }));
        assert!(lseries_at_one(&c, 1, 11, -1, 100, 1e-12).is_err());
    }
}
