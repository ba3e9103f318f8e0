use super::{factor_big, invariants, CurveModel};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::numeric::real_roots;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Affine point or the identity on `Y^2 = X^3 + A X + B`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Pt {
    Inf,
    Aff(BigRational, BigRational),
}

fn add(p: &Pt, q: &Pt, a: &BigRational) -> Pt {
    match (p, q) {
        (Pt::Inf, _) => q.clone(),
        (_, Pt::Inf) => p.clone(),
        (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => {
            let lambda = if x1 == x2 {
                if (y1 + y2).is_zero() {
                    return Pt::Inf;
                }
                (BigRational::from_integer(3.into()) * x1 * x1 + a)
                    / (BigRational::from_integer(2.into()) * y1)
            } else {
                (y2 - y1) / (x2 - x1)
            };
            let x3 = &lambda * &lambda - x1 - x2;
            let y3 = lambda * (x1 - &x3) - y1;
            Pt::Aff(x3, y3)
        }
    }
}

/// Order of `p` if it is at most 16, else `None`.
fn small_order(p: &Pt, a: &BigRational) -> Option<u64> {
    let mut acc = p.clone();
    for n in 1..=16 {
        if acc == Pt::Inf {
            return Some(n);
        }
        acc = add(&acc, p, a);
    }
    None
}

/// Upper bound from the gcd of `#E(F_q)` over good odd primes.
fn gcd_bound(curve: &CurveModel) -> u64 {
    let mut g = 0u64;
    let mut used = 0;
    for q in primes_up_to(2000).into_iter().skip(1) {
        if !curve.is_good(q) {
            continue;
        }
        g = g.gcd(&(curve.n_q(q).unwrap() as u64));
        used += 1;
        if used >= 30 {
            break;
        }
    }
    g
}

/// Rational torsion points via the Nagell-Lutz criterion on the short model
/// `Y^2 = X^3 - 27 c4 X - 54 c6`, confirmed by exact orders.
fn nagell_lutz_count(curve: &CurveModel) -> Result<u64> {
    let inv = invariants(curve.coefficients());
    let a: BigInt = -27 * &inv.c4;
    let b: BigInt = -54 * &inv.c6;
    let d = 4 * &a * &a * &a + 27 * &b * &b;
    let mut ys = vec![BigInt::from(1)];
    for (p, e) in factor_big(&d)? {
        let mut next = Vec::new();
        for y in &ys {
            let mut pk = BigInt::from(1);
            for _ in 0..=e / 2 {
                next.push(y * &pk);
                pk *= p;
            }
        }
        ys = next;
    }
    ys.push(BigInt::zero());
    let aq = BigRational::from_integer(a.clone());
    let mut count = 1u64;
    for y in ys {
        let c0 = &b - &y * &y;
        let cubic = [c0.to_f64().unwrap(), a.to_f64().unwrap(), 0.0, 1.0];
        let mut xs: Vec<BigInt> = Vec::new();
        for r in real_roots(&cubic) {
            let c = BigInt::from(r.round() as i64);
            for dx in -1i64..=1 {
                let x = &c + dx;
                let cube: BigInt = &x * &x * &x;
                if (cube + &a * &x + &c0).is_zero() && !xs.contains(&x) {
                    xs.push(x);
                }
            }
        }
        for x in xs {
            let p = Pt::Aff(BigRational::from_integer(x), BigRational::from_integer(y.clone()));
            if small_order(&p, &aq).is_some() {
                count += if y.is_zero() { 1 } else { 2 };
            }
        }
    }
    Ok(count)
}

pub(crate) fn torsion_order(curve: &CurveModel) -> Result<u64> {
    let bound = gcd_bound(curve);
    let found = nagell_lutz_count(curve)?;
    if found != bound {
        return Err(Error::TorsionConfirmation(format!(
            "point-count bound {bound} but {found} torsion points exhibited"
        )));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_torsion() {
        let cases: [([i64; 5], u64); 5] = [
            ([0, -1, 1, -10, -20], 5),
            ([1, 0, 0, -4, -1], 8),
            ([1, -1, 0, 4, -3], 2),
            ([1, -1, 1, -1, -14], 4),
            ([0, 1, 1, -23, -50], 3),
        ];
        for (a, t) in cases {
            let e = CurveModel::from_i64(a).unwrap();
            assert_eq!(e.torsion_order().unwrap(), t, "{a:?}");
        }
    }
}
