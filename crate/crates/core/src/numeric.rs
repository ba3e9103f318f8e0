//! Small floating-point helpers: compensated summation, polynomial roots and
//! rational recognition.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    // coeffs low to high; returns (p(z), p'(z))
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a real polynomial (coefficients low to high, nonzero
/// leading coefficient) by Durand-Kerner iteration followed by Newton polish.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (p, _) = horner(&monic, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = p / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= p / dp;
        }
    }
    z
}

/// Real roots (imaginary part negligible), sorted descending.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let roots = poly_roots(coeffs);
    let scale = roots.iter().fold(1.0f64, |m, r| m.max(r.norm()));
    let mut out: Vec<f64> = roots
        .into_iter()
        .filter(|r| r.im.abs() <= 1e-7 * scale)
        .map(|r| r.re)
        .collect();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

/// Best rational approximation `p/q` with `q <= max_den` within `tol`, found
/// by continued fractions.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1 as i64, k1 as i64));
        }
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
        let r = real_roots(&[6.0, -5.0, -2.0, 1.0]);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([3.0, 1.0, -2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let r = real_roots(&[1.0, 1.0, -1.0, 1.0]);
        assert_eq!(r.len(), 1);
        assert!((r[0] + 0.5436890126920764).abs() < 1e-12);
    }

    #[test]
    fn rationals() {
        assert_eq!(recognize_rational(-3.0 / 7.0, 100, 1e-12), Some((-3, 7)));
        assert_eq!(recognize_rational(0.2, 100, 1e-12), Some((1, 5)));
        assert_eq!(recognize_rational(std::f64::consts::PI, 100, 1e-12), None);
    }

    #[test]
    fn compensated() {
        let s: CompensatedSum = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(s.value(), 1.0);
    }
}
