use super::CurveModel;
use crate::error::{Error, Result};
use crate::numeric::{poly_roots, real_roots, recognize_rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// The 2-division cubic of a curve.
///
/// When the cubic is irreducible, `cubic` is a reduced monic integral
/// generator of the same cubic field (smallest discriminant, then smallest
/// root size); otherwise it is the scaled cubic `X^3 + b2 X^2 + 8 b4 X + 16 b6`
/// whose roots are `4x` for the 2-torsion abscissae `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoDivisionData {
    /// Coefficients from degree 0 to degree 3.
    pub cubic: [BigInt; 4],
    pub cubic_disc: BigInt,
    pub is_irreducible: bool,
    scaled: [BigInt; 4],
}

pub(crate) fn cubic_disc(c: &[BigInt; 4]) -> BigInt {
    let [d, cc, b, a] = c;
    b * b * cc * cc - 4 * a * cc * cc * cc - 4 * b * b * b * d - 27 * a * a * d * d
        + 18 * a * b * cc * d
}

fn eval(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn to_f64_poly(poly: &[BigInt]) -> Vec<f64> {
    poly.iter().map(|c| c.to_f64().unwrap()).collect()
}

/// Whether a monic integral polynomial has an integer (hence rational) root.
fn has_rational_root(poly: &[BigInt]) -> bool {
    if poly[0].is_zero() {
        return true;
    }
    real_roots(&to_f64_poly(poly)).iter().any(|r| {
        let c = r.round() as i64;
        (c - 1..=c + 1).any(|x| eval(poly, &BigInt::from(x)).is_zero())
    })
}

type QPoly = Vec<BigRational>;

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn qpoly_rem(mut a: QPoly, m: &[BigRational]) -> QPoly {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        let shift = a.len() - dm;
        for i in 0..dm {
            a[shift + i] -= &lead * &m[i];
        }
    }
    a
}

/// Exact check that `g(P(x)) == 0` modulo the monic cubic `f`.
fn maps_root(g: &[BigInt; 4], p: &[BigRational], f: &[BigInt; 4]) -> bool {
    let f: QPoly = f.iter().map(|c| BigRational::from(c.clone())).collect();
    let mut acc: QPoly = vec![BigRational::from(g[3].clone())];
    for c in g[..3].iter().rev() {
        acc = qpoly_rem(qpoly_mul(&acc, p), &f);
        acc[0] += BigRational::from(c.clone());
    }
    acc.iter().all(|c| c.is_zero())
}

/// Whether the monic cubics `f` and `g` generate the same field, witnessed by
/// an exact polynomial map sending a root of `f` to a root of `g`.
fn same_field(f: &[BigInt; 4], f_roots: &[Complex64], g: &[BigInt; 4]) -> bool {
    let g_roots = poly_roots(&to_f64_poly(g));
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in perms {
        // Lagrange interpolation P with P(f_roots[i]) = g_roots[perm[i]].
        let mut coeffs = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (tj, tk) = (f_roots[j], f_roots[k]);
            let w = g_roots[perm[i]] / ((f_roots[i] - tj) * (f_roots[i] - tk));
            coeffs[0] += w * tj * tk;
            coeffs[1] -= w * (tj + tk);
            coeffs[2] += w;
        }
        let mut p = Vec::with_capacity(3);
        for c in coeffs {
            let tol = 1e-7 * c.norm().max(1e-6);
            if c.im.abs() > 1e-6 * (1.0 + c.norm()) {
                break;
            }
            match recognize_rational(c.re, 1_000_000_000, tol) {
                Some((n, d)) => p.push(BigRational::new(n.into(), d.into())),
                None => break,
            }
        }
        if p.len() == 3 && maps_root(g, &p, f) {
            return true;
        }
    }
    false
}

fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(x.numer()) && sq(x.denom())
}

/// Search small monic cubics for a reduced generator of the field of `f`.
fn reduce_cubic(f: &[BigInt; 4]) -> Option<[BigInt; 4]> {
    let disc_f = cubic_disc(f);
    let f_roots = poly_roots(&to_f64_poly(f));
    let mut candidates = Vec::new();
    for a2 in -2i64..=2 {
        for a1 in -10i64..=10 {
            for a0 in -10i64..=10 {
                let g = [a0, a1, a2, 1].map(BigInt::from);
                let d = cubic_disc(&g);
                if d.is_zero() || d.signum() != disc_f.signum() {
                    continue;
                }
                if !is_rational_square(&BigRational::new(disc_f.clone(), d.clone())) {
                    continue;
                }
                if has_rational_root(&g) {
                    continue;
                }
                let roots = poly_roots(&to_f64_poly(&g));
                let t2: f64 = roots.iter().map(|r| r.norm_sqr()).sum();
                let biggest_real = real_roots(&to_f64_poly(&g))
                    .into_iter()
                    .max_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap())
                    .unwrap();
                let positive = biggest_real > 0.0;
                let key = (d.abs(), (t2 * 1e6).round() as i64, positive, [a2, a1, a0]);
                candidates.push((key, g));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.cmp(&y.0));
    candidates
        .into_iter()
        .map(|(_, g)| g)
        .find(|g| same_field(f, &f_roots, g))
}

impl TwoDivisionData {
    pub fn of(curve: &CurveModel) -> Self {
        let inv = curve.invariants();
        let scaled = [16 * &inv.b6, 8 * &inv.b4, inv.b2.clone(), BigInt::one()];
        let is_irreducible = !has_rational_root(&scaled);
        let cubic = if is_irreducible {
            reduce_cubic(&scaled).unwrap_or_else(|| scaled.clone())
        } else {
            scaled.clone()
        };
        let cubic_disc = cubic_disc(&cubic);
        TwoDivisionData { cubic, cubic_disc, is_irreducible, scaled }
    }

    /// `X^3 + b2 X^2 + 8 b4 X + 16 b6`, low degree first.
    pub fn scaled_cubic(&self) -> [BigInt; 4] {
        self.scaled.clone()
    }

    /// Whether `q` is inert in the cubic field, i.e. the reduced cubic has no
    /// root mod `q`.
    pub fn is_inert(&self, q: u64, conductor: u64) -> Result<bool> {
        if !self.is_irreducible {
            return Err(Error::Unsupported(
                "inertness needs an irreducible 2-division cubic".into(),
            ));
        }
        if q % 2 == 0 || !crate::arith::is_prime(q) {
            return Err(Error::InvalidInput(format!("{q} is not an odd prime")));
        }
        let qb = BigInt::from(q);
        if (&self.cubic_disc % &qb).is_zero() || conductor % q == 0 {
            return Err(Error::Precondition(format!(
                "{q} divides the cubic discriminant or the conductor"
            )));
        }
        Ok(!(0..q).any(|x| eval(&self.cubic, &BigInt::from(x)).mod_floor(&qb).is_zero()))
    }

    pub fn cubic_string(&self) -> String {
        let mut s = String::from("x^3");
        for (deg, c) in self.cubic[..3].iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            let coeff = if mag.is_one() && deg > 0 { String::new() } else { mag.to_string() };
            let var = match deg {
                2 => "x^2",
                1 => "x",
                _ => "",
            };
            s.push_str(&format!("{sign}{coeff}{var}"));
        }
        s
    }
}

fn strip_content(poly: &mut [BigInt], p: &BigInt) {
    if poly.iter().all(|c| c.is_zero()) {
        return;
    }
    while poly.iter().all(|c| (c % p).is_zero()) {
        for c in poly.iter_mut() {
            *c /= p;
        }
    }
}

/// `poly(r + p t)` as a polynomial in `t`.
fn shift_scale(poly: &[BigInt], r: &BigInt, p: &BigInt) -> Vec<BigInt> {
    let n = poly.len();
    // Taylor shift by r
    let mut c = poly.to_vec();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &c[j + 1] * r;
            c[j] += t;
        }
    }
    let mut pk = BigInt::one();
    for coeff in c.iter_mut() {
        *coeff *= &pk;
        pk *= p;
    }
    c
}

/// Number of roots in `Z_p` of an integral polynomial (coefficients low to
/// high) with simple roots, by recursive Hensel lifting.
pub fn count_padic_roots(poly: &[BigInt], p: u64, depth: u32) -> Result<usize> {
    let pb = BigInt::from(p);
    let mut poly = poly.to_vec();
    strip_content(&mut poly, &pb);
    if poly.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let deriv: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut total = 0;
    for r in 0..p {
        let rb = BigInt::from(r);
        if !(eval(&poly, &rb) % &pb).is_zero() {
            continue;
        }
        if !(eval(&deriv, &rb) % &pb).is_zero() {
            total += 1;
            continue;
        }
        if depth == 0 {
            return Err(Error::Undecided { place: format!("Q_{p} root count"), precision: 20 });
        }
        total += count_padic_roots(&shift_scale(&poly, &rb, &pb), p, depth - 1)?;
    }
    Ok(total)
}
