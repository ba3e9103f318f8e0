//! Hecke operators on Manin symbols via Heilbronn matrices.

use super::space::ModSymSpace;
use crate::linalg::QVec;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Cremona's Heilbronn matrices `[a, b, c, d]` of determinant `p`.
pub fn heilbronn_cremona(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let mut out = vec![[1, 0, 0, p]];
    if p == 2 {
        out.extend([[2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]]);
        return out;
    }
    let half = (p - 1) / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = round_div(a, b);
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

/// `a / b` rounded to the nearest integer, halves away from zero.
fn round_div(a: i64, b: i64) -> i64 {
    let q = a as f64 / b as f64;
    q.round() as i64
}

/// Multiset of Manin symbol indices making up `T_p` applied to symbol `i`.
pub fn hecke_image(space: &ModSymSpace, heil: &[[i64; 4]], i: usize) -> BTreeMap<usize, i64> {
    let (u, v) = space.p1().get(i);
    let (u, v) = (u as i64, v as i64);
    let mut acc = BTreeMap::new();
    for &[a, b, c, d] in heil {
        if let Some(j) = space.p1().index_of(u * a + v * c, u * b + v * d) {
            *acc.entry(j).or_insert(0) += 1;
        }
    }
    acc
}

/// Row of `T_p` for the basis symbol `i`: coordinates of `T_p(i)`.
pub fn hecke_row(space: &ModSymSpace, heil: &[[i64; 4]], i: usize) -> QVec {
    let terms: Vec<(usize, i64)> = hecke_image(space, heil, i).into_iter().collect();
    space.vector_of(&terms)
}

/// Matrix of `T_p` on the full space, one row per basis symbol.
pub fn hecke_matrix(space: &ModSymSpace, p: u64) -> Vec<QVec> {
    let heil = heilbronn_cremona(p);
    space.basis().iter().map(|&b| hecke_row(space, &heil, b)).collect()
}

/// Product of two square matrices given as rows (row vector convention).
pub fn mat_mul(a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            let mut out = vec![BigRational::zero(); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heilbronn_determinants() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for [a, b, c, d] in heilbronn_cremona(p) {
                assert_eq!(a * d - b * c, p as i64, "p={p}");
            }
        }
    }

    #[test]
    fn hecke_operators_commute() {
        let s = ModSymSpace::build(37).unwrap();
        let ps = [2u64, 3, 5, 7, 11, 13];
        let mats: Vec<_> = ps.iter().map(|&p| hecke_matrix(&s, p)).collect();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                assert_eq!(mat_mul(&mats[i], &mats[j]), mat_mul(&mats[j], &mats[i]));
            }
        }
    }
}
