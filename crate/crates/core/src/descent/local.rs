//! Local solubility of the quartics `d w^2 = f(z)` attached to the two
//! isogenies, decided by sign analysis at the real place and by Hensel
//! lifting over residue classes at finite places.
//!
//! Nothing here uses the closed-form membership criteria in `selmer`, so the
//! two can be compared.

use super::NsPair;
use crate::arith::jacobi;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

/// Lifting depth for odd places before escalating.
pub const PRECISION_ODD: u32 = 12;
/// Lifting depth at 2 before escalating.
pub const PRECISION_TWO: u32 = 16;
/// Depth at which an unresolved place is reported as undecided.
pub const MAX_PRECISION: u32 = 40;

/// Which isogeny a homogeneous space belongs to: `C_d` for `phi`, `C'_d`
/// for its dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Isogeny {
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "phihat")]
    PhiHat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Integer quartic `g`, coefficients from the constant term up, such that
/// the homogeneous space for `d` has a `Q_v`-point iff `g(z)` is a square in
/// `Q_v` for some `z` in `P^1(Q_v)`.
///
/// With `M/d = a/b` in lowest terms, `g = d b^2 f(z)` where `f` is the right
/// hand side of `d w^2 = f(z)`.
pub fn quartic(pair: &NsPair, iso: Isogeny, m: i64, d: i64) -> Result<[BigInt; 5]> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be nonzero".into()));
    }
    let c = BigRational::new(m.into(), d.into());
    let (a, b) = (c.numer().clone(), c.denom().clone());
    let (u, p, d) = (BigInt::from(pair.u), BigInt::from(pair.p), BigInt::from(d));
    let z = BigInt::zero();
    Ok(match iso {
        // d w^2 = 4p - (c z^2 - 2u)^2
        Isogeny::Phi => [256 * &d * &b * &b, z.clone(), 4 * &d * &a * &b * &u, z, -&d * &a * &a],
        // d w^2 = 64 p^3 + p (c z^2 - u p)^2
        Isogeny::PhiHat => {
            let p2 = &p * &p;
            [&d * &p2 * &p2 * &b * &b, z.clone(), -2 * &d * &u * &p2 * &a * &b, z, &d * &p * &a * &a]
        }
    })
}

fn eval(g: &[BigInt; 5], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative(g: &[BigInt; 5]) -> [BigInt; 5] {
    [&g[1] * 1, &g[2] * 2, &g[3] * 3, &g[4] * 4, BigInt::zero()]
}

fn val(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Whether the integer `n` is a square in `Q_p` (zero counts).
fn is_local_square(n: &BigInt, p: u64) -> bool {
    if n.is_zero() {
        return true;
    }
    let pb = BigInt::from(p);
    let v = val(n, &pb);
    if v % 2 == 1 {
        return false;
    }
    let unit = n / pb.pow(v);
    if p == 2 {
        unit.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        let r = unit.mod_floor(&pb).to_i64().expect("residue fits");
        jacobi(r, p as i64) == 1
    }
}

enum Step {
    Soluble,
    Insoluble,
    Refine,
}

/// Decide the class `z = x mod p^n`, or ask for refinement.
fn classify(g: &[BigInt; 5], dg: &[BigInt; 5], x: &BigInt, n: u32, p: u64) -> Step {
    let gx = eval(g, x);
    if is_local_square(&gx, p) {
        return Step::Soluble;
    }
    let pb = BigInt::from(p);
    let lambda = val(&gx, &pb) as i64;
    let dgx = eval(dg, x);
    let mu = if dgx.is_zero() { i64::MAX / 4 } else { val(&dgx, &pb) as i64 };
    let n = n as i64;
    // a simple root of g lies in the class
    if mu < n && lambda >= mu + n {
        return Step::Soluble;
    }
    // g(x + p^n t) = g(x) (1 + O(p^e)) on the whole class
    let e = (2 * n).min(mu + n) - lambda;
    if e <= 0 {
        return Step::Refine;
    }
    if p != 2 || e >= 3 || lambda % 2 == 1 {
        return Step::Insoluble;
    }
    let unit = gx / pb.pow(lambda as u32);
    if e == 2 && unit.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
        return Step::Insoluble;
    }
    Step::Refine
}

fn search(g: &[BigInt; 5], dg: &[BigInt; 5], p: u64, x: BigInt, n: u32, cap: u32) -> Option<bool> {
    match classify(g, dg, &x, n, p) {
        Step::Soluble => Some(true),
        Step::Insoluble => Some(false),
        Step::Refine => {
            if n >= cap {
                return None;
            }
            let step = BigInt::from(p).pow(n);
            let mut undecided = false;
            for i in 0..p {
                match search(g, dg, p, &x + &step * i, n + 1, cap) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => undecided = true,
                }
            }
            (!undecided).then_some(false)
        }
    }
}

/// Remove the largest even power of `p` dividing every coefficient.
fn strip_content(g: &[BigInt; 5], p: u64) -> [BigInt; 5] {
    let pb = BigInt::from(p);
    let k = g.iter().filter(|c| !c.is_zero()).map(|c| val(c, &pb)).min().unwrap_or(0) / 2;
    let s = pb.pow(2 * k);
    g.clone().map(|c| c / &s)
}

fn soluble_at_prime(g: &[BigInt; 5], p: u64, cap: u32) -> Option<bool> {
    let g = strip_content(g, p);
    let dg = derivative(&g);
    let rev = [g[4].clone(), g[3].clone(), g[2].clone(), g[1].clone(), g[0].clone()];
    let drev = derivative(&rev);
    // z in Z_p, then z = 1/t with t in pZ_p (t = 0 is the point at infinity)
    let affine = search(&g, &dg, p, BigInt::zero(), 0, cap);
    if affine == Some(true) {
        return affine;
    }
    let infinite = search(&rev, &drev, p, BigInt::zero(), 1, cap);
    match (affine, infinite) {
        (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

/// The even quartic `g = A z^4 + B z^2 + C` takes a nonnegative value on
/// `P^1(R)`.
fn soluble_at_infinity(g: &[BigInt; 5]) -> bool {
    let (a, b, c) = (&g[4], &g[2], &g[0]);
    if a.is_positive() || !c.is_negative() {
        return true;
    }
    // a < 0 and c < 0: the maximum over s = z^2 >= 0 sits at s = -b/(2a)
    b.is_positive() && 4 * a * c - b * b <= BigInt::zero()
}

/// Local solubility at one place with lifting depth `k` (at most
/// [`MAX_PRECISION`]); an unresolved class gives [`Error::Undecided`].
pub fn local_points_oracle(pair: &NsPair, iso: Isogeny, m: i64, d: i64, place: Place, k: u32) -> Result<bool> {
    if k > MAX_PRECISION {
        return Err(Error::InvalidInput(format!("precision {k} exceeds {MAX_PRECISION}")));
    }
    let g = quartic(pair, iso, m, d)?;
    match place {
        Place::Infinity => Ok(soluble_at_infinity(&g)),
        Place::Prime(p) => soluble_at_prime(&g, p, k)
            .ok_or(Error::Undecided { place: place.to_string(), precision: k }),
    }
}

/// [`local_points_oracle`] at the default depth, retried at
/// [`MAX_PRECISION`] before giving up.
pub fn locally_soluble(pair: &NsPair, iso: Isogeny, m: i64, d: i64, place: Place) -> Result<bool> {
    let k = match place {
        Place::Prime(2) => PRECISION_TWO,
        _ => PRECISION_ODD,
    };
    match local_points_oracle(pair, iso, m, d, place, k) {
        Err(Error::Undecided { .. }) => local_points_oracle(pair, iso, m, d, place, MAX_PRECISION),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::super::ns_curves;
    use super::*;

    /// An integer `z < p^k` with `g(z)` a local square.
    fn brute_square_mod(g: &[BigInt; 5], p: u64, k: u32) -> bool {
        let modulus = BigInt::from(p).pow(k);
        let bound = modulus.to_u64().unwrap();
        (0..bound).any(|z| is_local_square(&eval(g, &BigInt::from(z)), p))
    }

    #[test]
    fn local_squares() {
        let sq = |n: i64, p| is_local_square(&BigInt::from(n), p);
        assert!(sq(17, 2) && !sq(5, 2) && sq(-7, 2) && !sq(2, 2) && sq(0, 2));
        assert!(sq(2, 7) && !sq(3, 7) && sq(49 * 2, 7) && !sq(7 * 2, 7));
    }

    #[test]
    fn trivial_class_is_everywhere_soluble() {
        let pair = ns_curves(-3).unwrap();
        for iso in [Isogeny::Phi, Isogeny::PhiHat] {
            for m in [-7, 57, 5, -11] {
                for place in [Place::Infinity, Place::Prime(2), Place::Prime(73), Place::Prime(3), Place::Prime(7)] {
                    assert!(locally_soluble(&pair, iso, m, 1, place).unwrap(), "{iso:?} M={m} {place}");
                }
            }
        }
    }

    #[test]
    fn known_obstructions() {
        let pair = ns_curves(-3).unwrap();
        assert!(!locally_soluble(&pair, Isogeny::Phi, -7, 2, Place::Prime(2)).unwrap());
        assert!(!locally_soluble(&pair, Isogeny::Phi, -7, 73, Place::Prime(73)).unwrap());
        assert!(!locally_soluble(&pair, Isogeny::PhiHat, -7, -1, Place::Infinity).unwrap());
        assert!(locally_soluble(&pair, Isogeny::Phi, -7, -1, Place::Infinity).unwrap());
    }

    #[test]
    fn lifting_agrees_with_residue_search() {
        // any integral witness is a point, so lifting must not miss it
        let pair = ns_curves(-3).unwrap();
        for d in [1, -1, 3, -3, 5, 7, -7, 21] {
            for p in [3u64, 5, 7] {
                let g = quartic(&pair, Isogeny::Phi, 105, d).unwrap();
                let g = strip_content(&g, p);
                let found = brute_square_mod(&g, p, 2);
                if found {
                    assert_eq!(soluble_at_prime(&g, p, 12), Some(true), "d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn precision_cap() {
        let pair = ns_curves(-3).unwrap();
        assert!(local_points_oracle(&pair, Isogeny::Phi, -7, 1, Place::Prime(2), 41).is_err());
    }
}
