use super::{invariants, CurveModel, POINT_COUNT_LIMIT};
use crate::arith::{pow_mod, primes_up_to, sqrt_mod};
use std::collections::HashMap;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

fn residue(x: &BigInt, q: u64) -> i64 {
    x.mod_floor(&BigInt::from(q)).to_i64().unwrap()
}

/// Number of points of the reduction mod `q` of the model, including the
/// point at infinity and any singular point.
pub fn count_points(a: &[BigInt; 5], q: u64) -> u64 {
    if q <= 3 {
        let [a1, a2, a3, a4, a6] = a.each_ref().map(|c| residue(c, q));
        let q = q as i64;
        let mut n = 1;
        for x in 0..q {
            for y in 0..q {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if (lhs - rhs).rem_euclid(q) == 0 {
                    n += 1;
                }
            }
        }
        return n;
    }
    let inv = invariants(a);
    if q > BSGS_THRESHOLD && residue(&inv.disc, q) != 0 {
        let a4 = residue(&(-27 * &inv.c4), q) as u64;
        let a6 = residue(&(-54 * &inv.c6), q) as u64;
        if let Some(n) = order_bsgs(a4, a6, q) {
            return n;
        }
    }
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    let qi = q as i64;
    let b2 = residue(&inv.b2, q);
    let b4 = residue(&(2 * &inv.b4), q);
    let b6 = residue(&inv.b6, q);
    let mut is_square = vec![false; q as usize];
    for y in 0..qi {
        is_square[((y * y) % qi) as usize] = true;
    }
    let mut n = 1u64;
    for x in 0..qi {
        let g = (((4 * x + b2) % qi * x + b4) % qi * x + b6).rem_euclid(qi);
        n += if g == 0 {
            1
        } else if is_square[g as usize] {
            2
        } else {
            0
        };
    }
    n
}

/// Good primes above this use baby-step giant-step instead of enumeration.
const BSGS_THRESHOLD: u64 = 1000;

type Pt = Option<(u64, u64)>;

/// Group law on `y^2 = x^3 + a x + b` over `F_p`, `p > 3` (`b` is implicit in the points).
struct ShortCurve {
    a: u64,
    p: u64,
}

impl ShortCurve {
    fn inv(&self, x: u64) -> u64 {
        pow_mod(x, self.p - 2, self.p)
    }

    fn neg(&self, pt: Pt) -> Pt {
        pt.map(|(x, y)| (x, (self.p - y) % self.p))
    }

    fn add(&self, s: Pt, t: Pt) -> Pt {
        let p = self.p;
        let ((x1, y1), (x2, y2)) = match (s, t) {
            (None, _) => return t,
            (_, None) => return s,
            (Some(u), Some(v)) => (u, v),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return None;
            }
            (3 * x1 % p * x1 % p + self.a) % p * self.inv(2 * y1 % p) % p
        } else {
            (y2 + p - y1) % p * self.inv((x2 + p - x1) % p) % p
        };
        let x3 = (lambda * lambda % p + 2 * p - x1 - x2) % p;
        let y3 = (lambda * ((x1 + p - x3) % p) % p + p - y1) % p;
        Some((x3, y3))
    }

    fn mul(&self, mut pt: Pt, mut n: u64) -> Pt {
        let mut acc = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, pt);
            }
            pt = self.add(pt, pt);
            n >>= 1;
        }
        acc
    }

    /// All `N` in `[lo, lo + width]` with `N pt = O`.
    fn annihilators(&self, pt: Pt, lo: u64, width: u64) -> Vec<u64> {
        let s = (width as f64).sqrt() as u64 + 1;
        let mut baby: HashMap<u64, u64> = HashMap::with_capacity(s as usize);
        let mut cur = None;
        for j in 1..s {
            cur = self.add(cur, pt);
            match cur {
                None => return self.multiples_of_order(pt, j, lo, width),
                Some((x, _)) => {
                    if baby.insert(x, j).is_some() {
                        // jP = +-j'P: the order is below 2s
                        return self.multiples_of_order(pt, 2 * s, lo, width);
                    }
                }
            }
        }
        let giant = self.neg(self.mul(pt, s));
        let mut r = self.neg(self.mul(pt, lo));
        let mut out = Vec::new();
        for i in 0..=s {
            let mut ks = Vec::new();
            match r {
                None => ks.push(i * s),
                Some((x, y)) => {
                    if let Some(&j) = baby.get(&x) {
                        let (_, yj) = self.mul(pt, j).unwrap();
                        if yj == y {
                            ks.push(i * s + j);
                        } else if i * s >= j {
                            ks.push(i * s - j);
                        }
                    }
                }
            }
            for k in ks {
                if k <= width && self.mul(pt, lo + k).is_none() {
                    out.push(lo + k);
                }
            }
            r = self.add(r, giant);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn multiples_of_order(&self, pt: Pt, bound: u64, lo: u64, width: u64) -> Vec<u64> {
        let mut cur = None;
        for n in 1..=bound {
            cur = self.add(cur, pt);
            if cur.is_none() {
                return (lo..=lo + width).filter(|m| m % n == 0).collect();
            }
        }
        Vec::new()
    }
}

/// `#E(F_p)` by intersecting the annihilator sets of a few points inside the
/// Hasse interval; `None` when that does not pin a single value.
fn order_bsgs(a: u64, b: u64, p: u64) -> Option<u64> {
    let curve = ShortCurve { a, p };
    let w = ((4 * p) as f64).sqrt() as u64 + 1;
    let lo = (p + 1).saturating_sub(w);
    let width = p + 1 + w - lo;
    let mut cands: Option<Vec<u64>> = None;
    let mut tries = 0;
    for x in 0..p {
        let rhs = ((x * x % p * x) % p + a * x % p + b) % p;
        if rhs == 0 {
            continue;
        }
        let Some(y) = sqrt_mod(rhs as i64, p) else { continue };
        let found = curve.annihilators(Some((x, y)), lo, width);
        let next: Vec<u64> = match cands {
            None => found,
            Some(c) => c.into_iter().filter(|n| found.contains(n)).collect(),
        };
        match next.len() {
            0 => return None,
            1 => return Some(next[0]),
            _ => {}
        }
        cands = Some(next);
        tries += 1;
        if tries == 12 {
            return None;
        }
    }
    None
}

/// Traces `a_p` for all primes `p <= bound`, computed in parallel.
pub fn ap_table(curve: &CurveModel, bound: u64) -> Result<Vec<(u64, i64)>> {
    if bound > POINT_COUNT_LIMIT {
        return Err(Error::Capacity(format!(
            "a_p table bound {bound} exceeds {POINT_COUNT_LIMIT}"
        )));
    }
    let primes = primes_up_to(bound);
    Ok(primes
        .par_iter()
        .map(|&p| (p, p as i64 + 1 - count_points(curve.coefficients(), p) as i64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[BigInt; 5], q: u64) -> u64 {
        let [a1, a2, a3, a4, a6] = a.each_ref().map(|c| residue(c, q));
        let q = q as i64;
        let mut n = 1;
        for x in 0..q {
            for y in 0..q {
                let d = y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6);
                if d.rem_euclid(q) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn residue_table_matches_enumeration() {
        let e = CurveModel::from_i64([1, -1, 0, 4, -3]).unwrap();
        for q in primes_up_to(200) {
            assert_eq!(count_points(e.coefficients(), q), brute(e.coefficients(), q), "q={q}");
        }
    }

    #[test]
    fn bsgs_matches_enumeration() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let inv = e.invariants();
        for q in primes_up_to(5000).into_iter().filter(|&q| q > 3 && q != 11) {
            let a4 = residue(&(-27 * &inv.c4), q) as u64;
            let a6 = residue(&(-54 * &inv.c6), q) as u64;
            if let Some(n) = order_bsgs(a4, a6, q) {
                assert_eq!(n, brute_short(a4, a6, q), "q={q}");
            }
        }
        // j = 0 and j = 1728 curves have extra automorphisms
        for (a4, a6) in [(0u64, 1u64), (1, 0), (0, 5)] {
            for q in [1009u64, 1013, 2003, 4001] {
                if let Some(n) = order_bsgs(a4, a6, q) {
                    assert_eq!(n, brute_short(a4, a6, q), "({a4},{a6}) q={q}");
                }
            }
        }
    }

    fn brute_short(a: u64, b: u64, p: u64) -> u64 {
        let mut sq = vec![0u64; p as usize];
        for y in 0..p {
            sq[(y * y % p) as usize] += 1;
        }
        1 + (0..p).map(|x| sq[((x * x % p * x + a * x + b) % p) as usize]).sum::<u64>()
    }

    #[test]
    fn hasse_bound() {
        let e = CurveModel::from_i64([0, 1, 1, -23, -50]).unwrap();
        for (p, a) in ap_table(&e, 2000).unwrap() {
            if e.is_good(p) {
                assert!((a * a) as u64 <= 4 * p, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn eleven_a_traces() {
        let e = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let t: Vec<i64> = ap_table(&e, 13).unwrap().into_iter().map(|(_, a)| a).collect();
        assert_eq!(t, vec![-2, -1, 1, -2, 1, 4]);
    }
}
