use super::lseries::{eichler_integral, Coefficients};
use crate::arith::inverse_mod;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A matrix `[[a, k], [N c, m]]` in Gamma_0(N) sending 0 to `k/m`, with the
/// smallest `|c|`.
pub fn gamma_to(level: u64, k: i64, m: i64) -> Result<[i64; 4]> {
    let n = level as i64;
    let k = k.rem_euclid(m);
    if num_integer::gcd(k, m) != 1 || num_integer::gcd(m, n) != 1 {
        return Err(Error::InvalidInput(format!("need gcd(k,m) = gcd(m,N) = 1 for {k}/{m}")));
    }
    if m == 1 {
        return Ok([1, 0, 0, 1]);
    }
    // a m - k N c = 1  =>  k N c = -1 mod m
    let inv = inverse_mod(k * n, m).expect("k N is a unit mod m");
    let mut c = (-inv).rem_euclid(m);
    if c > m / 2 {
        c -= m;
    }
    let a = (1 + k * n * c) / m;
    debug_assert_eq!(a * m - k * n * c, 1);
    Ok([a, k, n * c, m])
}

/// Number of series terms needed to evaluate the Eichler integral at height
/// `y` to about `1e-17` relative.
pub fn terms_for_height(y: f64) -> u64 {
    (40.0 / (2.0 * PI * y)).ceil() as u64 + 10
}

/// Numerical `<{0, k/m}, f> = 2 pi i int_0^{k/m} f(z) dz`.
pub fn period_integral(coeffs: &Coefficients, level: u64, k: i64, m: i64) -> Result<Complex64> {
    let [a, b, c, d] = gamma_to(level, k, m)?;
    if c == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // z = (-d + i)/c has c z + d = i, so z and g z share the height 1/|c|.
    let cf = c as f64;
    let z = Complex64::new(-d as f64 / cf, 1.0 / cf);
    let z = if z.im < 0.0 { Complex64::new(z.re, -z.im) } else { z };
    let gz = (z * a as f64 + b as f64) / (z * cf + d as f64);
    let nterms = terms_for_height(z.im.min(gz.im));
    if coeffs.len() < nterms {
        return Err(Error::InsufficientTerms { required: nterms, given: coeffs.len() });
    }
    Ok(eichler_integral(coeffs, gz, nterms) - eichler_integral(coeffs, z, nterms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_in_gamma0() {
        for (k, m) in [(1i64, 3i64), (2, 7), (5, 13), (4, 9)] {
            let [a, b, c, d] = gamma_to(11, k, m).unwrap();
            assert_eq!(a * d - b * c, 1);
            assert_eq!(c % 11, 0);
            assert_eq!((b, d), (k, m));
        }
        assert!(gamma_to(11, 1, 22).is_err());
    }
}
