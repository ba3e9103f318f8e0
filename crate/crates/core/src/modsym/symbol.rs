//! Modular symbols `{0, k/m}` as sums of Manin symbols, and the value types
//! returned by the pairing.

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Manin symbols `(c:d)` whose sum is `{0, k/m}`, from the continued
/// fraction convergents of `k/m`. Includes the leading `(0:1) = {0, oo}`.
pub fn cf_manin_symbols(k: i64, m: i64) -> Vec<(i64, i64)> {
    assert!(m > 0, "denominator must be positive");
    let k = k.rem_euclid(m);
    let g = k.gcd(&m);
    let (k, m) = (k / g, m / g);
    if k == 0 {
        return Vec::new();
    }
    let (mut x, mut y) = (k, m);
    let (mut q_prev2, mut q_prev) = (1i64, 0i64);
    let mut out = vec![(0, 1)];
    let mut sign = -1i64;
    while y != 0 {
        let a = x.div_euclid(y);
        (x, y) = (y, x - a * y);
        let q = a * q_prev + q_prev2;
        out.push((sign * q, q_prev));
        (q_prev2, q_prev) = (q_prev, q);
        sign = -sign;
    }
    out
}

/// Real and imaginary parts of `<{0,k/m}, f>` in units of the periods
/// `Omega^+` and `Omega^-`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolPair {
    pub x_plus: BigRational,
    pub x_minus: BigRational,
}

/// Coordinates `(s, t)` of `<{0,k/m}, f>` in the period lattice basis.
///
/// For a lattice of type 2 (negative discriminant) the value is
/// `(s Omega^+ + i t Omega^-) / 2`; for type 1 it is `s Omega^+ + i t Omega^-`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodPair {
    pub s: BigRational,
    pub t: BigRational,
    pub lattice_type: u8,
}
