//! Manin-symbol presentation of the rational homology of X_0(N) relative to
//! the cusps, with its boundary map to cusp classes.

use super::p1::{p1_size, P1List};
use crate::arith::{factor, kronecker, xgcd};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, QVec};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Largest level accepted by [`ModSymSpace::build`].
pub const MAX_LEVEL: u64 = 10_000;

/// Euler phi of a small integer.
fn phi(n: u64) -> u64 {
    factor(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Number of cusps of X_0(N).
pub fn num_cusps(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| phi(d.gcd(&(n / d)))).sum()
}

/// Genus of X_0(N) from the Riemann-Hurwitz formula.
pub fn genus_x0(n: u64) -> u64 {
    let f = factor(n);
    let mu = p1_size(n) as i64;
    let nu2: i64 = if n % 4 == 0 {
        0
    } else {
        f.iter().map(|&(p, _)| 1 + kronecker(-4, p as i64) as i64).product()
    };
    let nu3: i64 = if n % 9 == 0 {
        0
    } else {
        f.iter().map(|&(p, _)| 1 + kronecker(-3, p as i64) as i64).product()
    };
    let cusps = num_cusps(n) as i64;
    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 cusps
    ((12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps) / 12) as u64
}

/// A matrix in SL2(Z) whose bottom row reduces to `(c, d)` mod N.
pub fn lift_to_sl2z(n: u64, c: u64, d: u64) -> [i64; 4] {
    let ni = n as i64;
    let c = if c == 0 { ni } else { c as i64 };
    let mut d = d as i64;
    while c.gcd(&d) != 1 {
        d += ni;
    }
    let (_, x, y) = xgcd(d, c);
    // x d + y c = 1, so [[x, -y], [c, d]] has determinant 1.
    [x, -y, c, d]
}

/// Cusp classes under Gamma_0(N), identified on demand.
#[derive(Clone, Debug, Default)]
struct CuspClasses {
    reps: Vec<(i64, i64)>,
    memo: HashMap<(i64, i64), usize>,
}

impl CuspClasses {
    fn equivalent(n: i64, (a1, c1): (i64, i64), (a2, c2): (i64, i64)) -> bool {
        let g = c1.gcd(&n);
        if g != c2.gcd(&n) {
            return false;
        }
        (1..n.max(2)).filter(|s| s.gcd(&n) == 1).any(|s| {
            (s * c1 - c2).rem_euclid(n) == 0 && (a1 - s * a2).rem_euclid(g) == 0
        })
    }

    /// Class index of the cusp `a/c` with `gcd(a, c) = 1`.
    fn class(&mut self, n: u64, a: i64, c: i64) -> usize {
        let ni = n as i64;
        let (a, c) = normal_cusp((a, c));
        let key = (a.rem_euclid(ni), c.rem_euclid(ni));
        if let Some(&i) = self.memo.get(&key) {
            return i;
        }
        let found = self.reps.iter().position(|&r| Self::equivalent(ni, (a, c), r));
        let i = found.unwrap_or_else(|| {
            self.reps.push((a, c));
            self.reps.len() - 1
        });
        self.memo.insert(key, i);
        i
    }
}

/// The space of weight-2 modular symbols for Gamma_0(N) over Q.
#[derive(Clone, Debug)]
pub struct ModSymSpace {
    level: u64,
    p1: P1List,
    /// Coordinates of every Manin symbol in the quotient basis.
    coords: Vec<QVec>,
    /// Manin symbol indices of the free generators.
    basis: Vec<usize>,
    /// `(tail, head)` cusp classes of each Manin symbol `{g0, g oo}`.
    ends: Vec<(usize, usize)>,
    cusp_reps: Vec<(i64, i64)>,
}

impl ModSymSpace {
    pub fn build(level: u64) -> Result<Self> {
        if level < 2 {
            return Err(Error::InvalidInput(format!("level {level} too small")));
        }
        if level > MAX_LEVEL {
            return Err(Error::Capacity(format!(
                "modular symbol spaces are limited to level {MAX_LEVEL}"
            )));
        }
        let p1 = P1List::new(level);
        let n = p1.len();
        let sym = |i: usize| {
            let (c, d) = p1.get(i);
            (c as i64, d as i64)
        };

        // Two-term relations x + x sigma = 0 with sigma (c:d) = (d:-c).
        let mut two: Vec<Option<(usize, i32)>> = vec![None; n];
        let mut gens = Vec::new();
        let mut col_of = HashMap::new();
        for i in 0..n {
            let (c, d) = sym(i);
            let j = p1.index_of(d, -c).expect("sigma preserves P1");
            if i == j {
                continue;
            }
            let rep = i.min(j);
            let col = *col_of.entry(rep).or_insert_with(|| {
                gens.push(rep);
                gens.len() - 1
            });
            two[i] = Some((col, if i == rep { 1 } else { -1 }));
        }

        // Three-term relations x + x tau + x tau^2 = 0 with tau (c:d) = (d:-c-d).
        let ng = gens.len();
        let mut rel = Echelon::new(ng);
        let mut seen = vec![false; n];
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let (c, d) = sym(i);
            let j = p1.index_of(d, -c - d).unwrap();
            let k = p1.index_of(-c - d, c).unwrap();
            let mut row = vec![BigRational::zero(); ng];
            for t in [i, j, k] {
                seen[t] = true;
                if let Some((col, s)) = two[t] {
                    row[col] += BigRational::from_integer(s.into());
                }
            }
            rel.add_row(row);
        }

        let free = rel.free_columns();
        let dim = free.len();
        let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut gen_coords: Vec<QVec> = vec![vec![BigRational::zero(); dim]; ng];
        for (&f, &i) in &pos {
            gen_coords[f][i] = BigRational::one();
        }
        for (p, r) in rel.rows() {
            for (&f, &i) in &pos {
                if !r[f].is_zero() {
                    gen_coords[p][i] = -r[f].clone();
                }
            }
        }
        let coords: Vec<QVec> = (0..n)
            .map(|i| match two[i] {
                None => vec![BigRational::zero(); dim],
                Some((col, s)) => {
                    if s == 1 {
                        gen_coords[col].clone()
                    } else {
                        gen_coords[col].iter().map(|x| -x).collect()
                    }
                }
            })
            .collect();
        let basis = free.iter().map(|&f| gens[f]).collect();

        let mut cusps = CuspClasses::default();
        let ends = (0..n)
            .map(|i| {
                let (c, d) = p1.get(i);
                let [a, b, c, d] = lift_to_sl2z(level, c, d);
                let tail = cusps.class(level, b, d);
                let head = cusps.class(level, a, c);
                (tail, head)
            })
            .collect();
        let cusp_reps = cusps.reps;
        let ncusps = cusp_reps.len();

        let space = ModSymSpace { level, p1, coords, basis, ends, cusp_reps };
        let g = genus_x0(level) as usize;
        if space.dim() != 2 * g + ncusps - 1 || ncusps as u64 != num_cusps(level) {
            return Err(Error::Normalization(format!(
                "level {level}: dimension {} with {ncusps} cusps, genus {g}",
                space.dim()
            )));
        }
        Ok(space)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn p1(&self) -> &P1List {
        &self.p1
    }

    /// Dimension of the full (relative) space.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ncusps(&self) -> usize {
        self.cusp_reps.len()
    }

    /// Dimension of the cuspidal subspace.
    pub fn cuspidal_dim(&self) -> usize {
        self.dim() + 1 - self.ncusps()
    }

    pub fn genus(&self) -> u64 {
        genus_x0(self.level)
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn coords(&self, i: usize) -> &QVec {
        &self.coords[i]
    }

    /// Cusp classes `(tail, head)` of Manin symbol `i`.
    pub fn ends(&self, i: usize) -> (usize, usize) {
        self.ends[i]
    }

    pub fn num_symbols(&self) -> usize {
        self.p1.len()
    }

    /// Index of the cusp class of `a/c` (with `gcd(a, c) = 1`).
    pub fn cusp_class(&self, a: i64, c: i64) -> usize {
        let n = self.level as i64;
        self.cusp_reps
            .iter()
            .position(|&r| CuspClasses::equivalent(n, normal_cusp((a, c)), r))
            .expect("every cusp class occurs as a symbol endpoint")
    }

    /// Coordinates of an integral combination of Manin symbols.
    pub fn vector_of(&self, terms: &[(usize, i64)]) -> QVec {
        let mut v = vec![BigRational::zero(); self.dim()];
        for &(i, m) in terms {
            let m = BigRational::from_integer(m.into());
            for (x, y) in v.iter_mut().zip(&self.coords[i]) {
                if !y.is_zero() {
                    *x += &m * y;
                }
            }
        }
        v
    }

    /// Image of the vector under the star involution, as a vector.
    pub fn star_row(&self, b: usize) -> QVec {
        let (c, d) = self.p1.get(b);
        let j = self.p1.index_of(-(c as i64), d as i64).unwrap();
        self.coords[j].clone()
    }
}

fn normal_cusp((a, c): (i64, i64)) -> (i64, i64) {
    if c < 0 || (c == 0 && a < 0) {
        (-a, -c)
    } else {
        (a, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_oracle() {
        for (n, g) in [(11, 1), (26, 2), (37, 2), (49, 1), (121, 6), (142, 17), (22, 2), (23, 2)] {
            assert_eq!(genus_x0(n), g, "N={n}");
        }
        assert_eq!(num_cusps(11), 2);
        assert_eq!(num_cusps(49), 8);
    }

    #[test]
    fn small_spaces() {
        let s = ModSymSpace::build(11).unwrap();
        assert_eq!(s.num_symbols(), 12);
        assert_eq!(s.cuspidal_dim(), 2);
        let s = ModSymSpace::build(26).unwrap();
        assert_eq!(s.cuspidal_dim(), 4);
        let s = ModSymSpace::build(49).unwrap();
        assert_eq!(s.num_symbols(), 56);
        assert_eq!(s.cuspidal_dim(), 2);
    }

    #[test]
    fn capacity() {
        assert!(matches!(ModSymSpace::build(10_001), Err(Error::Capacity(_))));
    }

    #[test]
    fn relations_vanish() {
        let s = ModSymSpace::build(37).unwrap();
        let p1 = s.p1();
        for i in 0..s.num_symbols() {
            let (c, d) = p1.get(i);
            let (c, d) = (c as i64, d as i64);
            let j = p1.index_of(d, -c).unwrap();
            assert!(s.vector_of(&[(i, 1), (j, 1)]).iter().all(|x| x.is_zero()));
            let j = p1.index_of(d, -c - d).unwrap();
            let k = p1.index_of(-c - d, c).unwrap();
            assert!(s.vector_of(&[(i, 1), (j, 1), (k, 1)]).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn sl2_lifts() {
        for (c, d) in [(0u64, 1u64), (3, 5), (2, 3), (7, 0), (13, 2)] {
            let [a, b, cc, dd] = lift_to_sl2z(26, c, d);
            assert_eq!(a * dd - b * cc, 1);
            assert_eq!(cc.rem_euclid(26) as u64, c);
            assert_eq!(dd.rem_euclid(26) as u64, d);
        }
    }
}
