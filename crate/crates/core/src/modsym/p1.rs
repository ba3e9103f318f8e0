//! The projective line over Z/N, indexing right cosets of Gamma_0(N).

use crate::arith::{factor, xgcd};
use num_integer::Integer;
use std::collections::HashMap;

/// Dense lookup is used below this level; above it a hash map.
const DENSE_LIMIT: u64 = 3000;

/// Canonical representative of `(u:v)` in P1(Z/N), or `None` when
/// `gcd(u, v, N) > 1`.
///
/// The first coordinate becomes `gcd(u, N)` and the second is the least value
/// reachable by scaling with units fixing the first.
pub fn normalize(n: u64, u: i64, v: i64) -> Option<(u64, u64)> {
    if n == 1 {
        return Some((0, 0));
    }
    let ni = n as i64;
    let u = u.rem_euclid(ni);
    let v = v.rem_euclid(ni);
    if u == 0 {
        return (v.gcd(&ni) == 1).then_some((0, 1));
    }
    let (g, s, _) = xgcd(u, ni);
    if g.gcd(&v) != 1 {
        return None;
    }
    let mut s = s.rem_euclid(ni);
    let step = ni / g;
    while s.gcd(&ni) != 1 {
        s = (s + step) % ni;
    }
    let v = ((s as i128 * v as i128) % ni as i128) as i64;
    let mut best = v;
    if g != 1 {
        let vstep = ((v as i128 * step as i128) % ni as i128) as i64;
        let (mut w, mut t) = (v, 1i64);
        for _ in 1..g {
            w = (w + vstep) % ni;
            t = (t + step) % ni;
            if w < best && t.gcd(&ni) == 1 {
                best = w;
            }
        }
    }
    Some((g as u64, best as u64))
}

/// `#P1(Z/N) = N * prod_{p | N} (1 + 1/p)`.
pub fn p1_size(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p + 1))
}

/// Enumeration of P1(Z/N) with a reverse index.
#[derive(Clone, Debug)]
pub struct P1List {
    n: u64,
    elems: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
    dense: Option<Vec<u32>>,
}

impl P1List {
    pub fn new(n: u64) -> Self {
        let mut elems = vec![normalize(n, 0, 1).unwrap()];
        let mut index = HashMap::new();
        index.insert(elems[0], 0);
        let divisors: Vec<u64> = (1..n).filter(|d| n % d == 0).collect();
        for &c in &divisors {
            for d in 0..n {
                if let Some(x) = normalize(n, c as i64, d as i64) {
                    if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(x) {
                        slot.insert(elems.len());
                        elems.push(x);
                    }
                }
            }
        }
        let dense = (n <= DENSE_LIMIT).then(|| {
            let mut table = vec![u32::MAX; (n * n) as usize];
            for c in 0..n {
                for d in 0..n {
                    if let Some(x) = normalize(n, c as i64, d as i64) {
                        table[(c * n + d) as usize] = index[&x] as u32;
                    }
                }
            }
            table
        });
        P1List { n, elems, index, dense }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> (u64, u64) {
        self.elems[i]
    }

    /// Index of the class of `(c:d)`, or `None` if it is not in P1.
    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.n as i64;
        if let Some(table) = &self.dense {
            let k = (c.rem_euclid(n) * n + d.rem_euclid(n)) as usize;
            let i = table[k];
            return (i != u32::MAX).then_some(i as usize);
        }
        normalize(self.n, c, d).map(|x| self.index[&x])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_class(n: u64, c: i64, d: i64) -> (u64, u64) {
        let ni = n as i64;
        (1..ni)
            .filter(|s| s.gcd(&ni) == 1)
            .map(|s| ((s * c).rem_euclid(ni) as u64, (s * d).rem_euclid(ni) as u64))
            .min()
            .unwrap()
    }

    #[test]
    fn sizes() {
        for n in [11u64, 26, 37, 49, 121, 142] {
            assert_eq!(P1List::new(n).len() as u64, p1_size(n), "N={n}");
        }
        assert_eq!(p1_size(11), 12);
        assert_eq!(p1_size(49), 56);
    }

    proptest! {
        #[test]
        fn normalization_is_canonical(n in 2u64..80, c1 in 0i64..200, d1 in 0i64..200, s in 1i64..200) {
            let ni = n as i64;
            prop_assume!(s.gcd(&ni) == 1);
            let a = normalize(n, c1, d1);
            let b = normalize(n, s * c1, s * d1);
            prop_assert_eq!(a, b);
            if a.is_some() {
                let other = normalize(n, 7 * c1 + 1, d1);
                let same = other.is_some()
                    && brute_class(n, c1, d1) == brute_class(n, 7 * c1 + 1, d1);
                prop_assert_eq!(a == other, same);
            }
        }
    }
}
