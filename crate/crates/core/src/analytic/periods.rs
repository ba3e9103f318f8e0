use crate::curves::CurveModel;
use crate::numeric::real_roots;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Real and imaginary period data of the Neron lattice.
///
/// Type 2 (negative discriminant) lattices have basis
/// `[Omega^+, (Omega^+ + i Omega^-)/2]`; type 1 lattices `[Omega^+, i Omega^-]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodData {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub lattice_type: u8,
    /// Relative accuracy estimate.
    pub precision: f64,
    pub agm_iterations: u32,
}

/// Arithmetic-geometric mean with its iteration count.
pub fn agm(mut a: f64, mut b: f64) -> (f64, u32) {
    let mut it = 0;
    while (a - b).abs() > 1e-15 * a.abs() && it < 60 {
        (a, b) = ((a + b) / 2.0, (a * b).sqrt());
        it += 1;
    }
    (a, it)
}

impl PeriodData {
    pub fn area(&self) -> f64 {
        let full = self.omega_plus * self.omega_minus;
        if self.lattice_type == 2 {
            full / 2.0
        } else {
            full
        }
    }
}

/// Periods of the model's invariant differential via the AGM.
pub fn agm_periods(curve: &CurveModel) -> PeriodData {
    let inv = curve.invariants();
    let b2 = inv.b2.to_f64().unwrap();
    let b4 = inv.b4.to_f64().unwrap();
    let b6 = inv.b6.to_f64().unwrap();
    let roots = real_roots(&[b6, 2.0 * b4, b2, 4.0]);
    if curve.disc_sign() > 0 {
        let (e1, e2, e3) = (roots[0], roots[1], roots[2]);
        let (ap, i1) = agm((e1 - e3).sqrt(), (e1 - e2).sqrt());
        let (am, i2) = agm((e1 - e3).sqrt(), (e2 - e3).sqrt());
        PeriodData {
            omega_plus: PI / ap,
            omega_minus: PI / am,
            lattice_type: 1,
            precision: 1e-14,
            agm_iterations: i1.max(i2),
        }
    } else {
        let e1 = roots[0];
        let beta = 3.0 * e1 + b2 / 4.0;
        let alpha = (3.0 * e1 * e1 + b2 * e1 / 2.0 + b4 / 2.0).sqrt();
        let (ap, i1) = agm(2.0 * alpha.sqrt(), (2.0 * alpha + beta).sqrt());
        let (am, i2) = agm(2.0 * alpha.sqrt(), (2.0 * alpha - beta).sqrt());
        PeriodData {
            omega_plus: 2.0 * PI / ap,
            omega_minus: 2.0 * PI / am,
            lattice_type: 2,
            precision: 1e-14,
            agm_iterations: i1.max(i2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn known_periods() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let p = agm_periods(&e);
        assert_eq!(p.lattice_type, 2);
        assert!(close(p.omega_plus, 1.269209304, 1e-9));
        assert!(close(p.omega_minus, 2.917633234, 1e-9));
        let e = CurveModel::from_i64([0, 1, 1, -23, -50]).unwrap();
        let p = agm_periods(&e);
        assert_eq!(p.lattice_type, 1);
        assert!(close(p.omega_plus, 1.088521593, 1e-9));
        assert!(p.agm_iterations < 60);
    }

    /// g2 of the lattice from the Eisenstein series must equal c4 / 12.
    fn g2_of_lattice(w1: Complex64, w2: Complex64) -> Complex64 {
        let tau = w2 / w1;
        let tau = if tau.im < 0.0 { -tau } else { tau };
        let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
        let mut e4 = Complex64::new(1.0, 0.0);
        let mut qn = Complex64::new(1.0, 0.0);
        for n in 1..200u64 {
            qn *= q;
            let sigma3: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum();
            e4 += qn * 240.0 * sigma3 as f64;
        }
        (Complex64::new(2.0 * PI, 0.0) / w1).powu(4) * e4 / 12.0
    }

    #[test]
    fn lattice_invariant_matches_c4() {
        for a in [[0, -1, 1, -10, -20], [0, 1, 1, -23, -50], [1, -1, 0, 4, -3], [1, 0, 0, -4, -1]] {
            let e = CurveModel::from_i64(a).unwrap();
            let p = agm_periods(&e);
            let w1 = Complex64::new(p.omega_plus, 0.0);
            let w2 = if p.lattice_type == 2 {
                Complex64::new(p.omega_plus / 2.0, p.omega_minus / 2.0)
            } else {
                Complex64::new(0.0, p.omega_minus)
            };
            let g2 = g2_of_lattice(w1, w2);
            let c4 = e.invariants().c4.to_f64().unwrap();
            assert!((g2.re - c4 / 12.0).abs() < 1e-8 * c4.abs().max(1.0), "{a:?}: {g2} vs {}", c4 / 12.0);
            assert!(g2.im.abs() < 1e-8 * c4.abs().max(1.0));
        }
    }

    #[test]
    fn scaling_divides_periods() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let p = agm_periods(&e);
        // The u = 2 model has invariant differential scaled by 1/2 relative
        // to the minimal one, so its periods are Omega / 2 after unscaling.
        let inv = e.invariants();
        let b = [
            inv.b2.to_f64().unwrap() * 4.0,
            inv.b4.to_f64().unwrap() * 16.0,
            inv.b6.to_f64().unwrap() * 64.0,
        ];
        let r = real_roots(&[b[2], 2.0 * b[1], b[0], 4.0]);
        let e1 = r[0];
        let beta = 3.0 * e1 + b[0] / 4.0;
        let alpha = (3.0 * e1 * e1 + b[0] * e1 / 2.0 + b[1] / 2.0).sqrt();
        let scaled = 2.0 * PI / agm(2.0 * alpha.sqrt(), (2.0 * alpha + beta).sqrt()).0;
        assert!(close(scaled * 2.0, p.omega_plus, 1e-12));
    }
}
