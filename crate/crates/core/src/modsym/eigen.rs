//! Rational Hecke eigen-functionals on modular symbols, normalized to be
//! primitive on integral homology.

use super::hecke::{heilbronn_cremona, hecke_row};
use super::p1::P1List;
use super::space::ModSymSpace;
use super::symbol::{cf_manin_symbols, PeriodPair, SymbolPair};
use crate::arith::{is_squarefree, kronecker, primes_up_to};
use crate::curves::CurveModel;
use crate::error::{Error, Result};
use crate::linalg::{dot, Echelon};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

/// Largest prime used when searching for a one-dimensional eigenspace.
pub const PMAX_CAP: u64 = 200;

/// Normalized plus and minus eigen-functionals of a newform with rational
/// coefficients.
///
/// `phi_plus[i] / den_plus` is the value of the plus functional on the i-th
/// Manin symbol. The functionals take coprime integer values on integral
/// homology; `x_plus = phi_plus / 2` for lattices of type 2 and `phi_plus`
/// for type 1 (likewise for minus).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenData {
    pub level: u64,
    pub lattice_type: u8,
    pub pmax: u64,
    pub eigenvalues: BTreeMap<u64, i64>,
    pub phi_plus: Vec<i64>,
    pub den_plus: i64,
    pub phi_minus: Vec<i64>,
    pub den_minus: i64,
    #[serde(skip)]
    p1: Option<Arc<P1List>>,
}

impl PartialEq for EigenData {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.lattice_type == other.lattice_type
            && self.eigenvalues == other.eigenvalues
            && self.phi_plus == other.phi_plus
            && self.den_plus == other.den_plus
            && self.phi_minus == other.phi_minus
            && self.den_minus == other.den_minus
    }
}

fn rational_gcd(values: &[BigRational]) -> Option<BigRational> {
    let nz: Vec<&BigRational> = values.iter().filter(|v| !v.is_zero()).collect();
    if nz.is_empty() {
        return None;
    }
    let l = nz.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let g = nz
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(&(v.numer() * (&l / v.denom()))));
    Some(BigRational::new(g, l))
}

/// Values of the functional on the fundamental cycles of the graph whose
/// vertices are cusp classes and whose edges are Manin symbols.
fn cycle_values(space: &ModSymSpace, values: &[BigRational]) -> Vec<BigRational> {
    let nv = space.ncusps();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for i in 0..space.num_symbols() {
        let (t, h) = space.ends(i);
        adj[t].push((h, i));
        adj[h].push((t, i));
    }
    let mut pot: Vec<Option<BigRational>> = vec![None; nv];
    for root in 0..nv {
        if pot[root].is_some() {
            continue;
        }
        pot[root] = Some(BigRational::zero());
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, i) in &adj[u] {
                if pot[v].is_some() {
                    continue;
                }
                let (t, _) = space.ends(i);
                let pu = pot[u].clone().unwrap();
                pot[v] = Some(if t == u { pu + &values[i] } else { pu - &values[i] });
                queue.push_back(v);
            }
        }
    }
    (0..space.num_symbols())
        .map(|i| {
            let (t, h) = space.ends(i);
            &values[i] - (pot[h].as_ref().unwrap() - pot[t].as_ref().unwrap())
        })
        .collect()
}

/// The eigen-functional of the given star sign, as values on Manin symbols,
/// scaled to be primitive integral on homology. Returns the kernel dimension
/// on failure.
fn eigen_functional(
    space: &ModSymSpace,
    sign: i64,
    traces: &[(u64, i64)],
) -> std::result::Result<Vec<BigRational>, usize> {
    let dim = space.dim();
    let mut ech = Echelon::new(dim);
    for (col, &b) in space.basis().iter().enumerate() {
        let mut row = space.star_row(b);
        row[col] -= BigRational::from_integer(sign.into());
        ech.add_row(row);
    }
    for &(p, ap) in traces {
        let heil = heilbronn_cremona(p);
        for (col, &b) in space.basis().iter().enumerate() {
            let mut row = hecke_row(space, &heil, b);
            row[col] -= BigRational::from_integer(ap.into());
            ech.add_row(row);
        }
    }
    let ns = ech.nullspace();
    if ns.len() != 1 {
        return Err(ns.len());
    }
    let phi = &ns[0];
    let values: Vec<BigRational> =
        (0..space.num_symbols()).map(|i| dot(phi, space.coords(i))).collect();
    let scale = rational_gcd(&cycle_values(space, &values)).ok_or(0usize)?;
    Ok(values.into_iter().map(|v| v / &scale).collect())
}

fn to_common(values: &[BigRational]) -> Result<(Vec<i64>, i64)> {
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let nums = values
        .iter()
        .map(|v| (v.numer() * (&den / v.denom())).to_i64())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Capacity("symbol values overflow i64".into()))?;
    Ok((nums, den.to_i64().unwrap()))
}

/// Identify the newform of `curve` in `space` using `T_p` for good primes
/// `p <= pmax`.
pub fn hecke_eigen(space: &ModSymSpace, curve: &CurveModel, pmax: u64) -> Result<EigenData> {
    if curve.conductor() != space.level() {
        return Err(Error::InvalidInput(format!(
            "curve conductor {} differs from space level {}",
            curve.conductor(),
            space.level()
        )));
    }
    let traces: Vec<(u64, i64)> = primes_up_to(pmax)
        .into_iter()
        .filter(|p| space.level() % p != 0)
        .map(|p| curve.a_p(p).map(|a| (p, a)))
        .collect::<Result<_>>()?;
    let plus = eigen_functional(space, 1, &traces);
    let minus = eigen_functional(space, -1, &traces);
    let (plus, minus) = match (plus, minus) {
        (Ok(p), Ok(m)) => (p, m),
        (Err(0), _) | (_, Err(0)) => return Err(Error::CurveNotFound(space.level())),
        (Err(d), _) | (_, Err(d)) => return Err(Error::AmbiguousEigenspace { pmax, dim: d }),
    };
    let (phi_plus, den_plus) = to_common(&plus)?;
    let (phi_minus, den_minus) = to_common(&minus)?;
    let mut eig = EigenData {
        level: space.level(),
        lattice_type: if curve.disc_sign() < 0 { 2 } else { 1 },
        pmax,
        eigenvalues: traces.into_iter().collect(),
        phi_plus,
        den_plus,
        phi_minus,
        den_minus,
        p1: Some(Arc::new(space.p1().clone())),
    };
    eig.fix_signs();
    Ok(eig)
}

/// Like [`hecke_eigen`], raising `pmax` until the eigenspace is determined.
pub fn hecke_eigen_auto(space: &ModSymSpace, curve: &CurveModel) -> Result<EigenData> {
    let mut pmax = 30;
    loop {
        match hecke_eigen(space, curve, pmax) {
            Err(Error::AmbiguousEigenspace { .. }) if pmax < PMAX_CAP => pmax *= 2,
            other => return other,
        }
    }
}

impl EigenData {
    /// Rebuild the coset index after deserialization.
    pub fn restore(&mut self) {
        if self.p1.is_none() {
            self.p1 = Some(Arc::new(P1List::new(self.level)));
        }
    }

    fn p1(&self) -> &P1List {
        self.p1.as_ref().expect("EigenData used before restore()")
    }

    /// Denominator relating `phi` to `x`: 2 for type 2 lattices, else 1.
    fn type_factor(&self) -> i64 {
        if self.lattice_type == 2 {
            2
        } else {
            1
        }
    }

    /// Numerators of `(phi_plus, phi_minus)` on `{0, k/m}`, over
    /// `(den_plus, den_minus)`.
    pub fn phi_nums(&self, k: i64, m: i64) -> (i128, i128) {
        let p1 = self.p1();
        let mut acc = (0i128, 0i128);
        for (c, d) in cf_manin_symbols(k, m) {
            let i = p1.index_of(c, d).expect("convergent symbols lie in P1");
            acc.0 += self.phi_plus[i] as i128;
            acc.1 += self.phi_minus[i] as i128;
        }
        acc
    }

    /// Denominators of `x_plus` and `x_minus` numerators from [`phi_nums`].
    ///
    /// [`phi_nums`]: EigenData::phi_nums
    pub fn x_dens(&self) -> (i128, i128) {
        let t = self.type_factor() as i128;
        (self.den_plus as i128 * t, self.den_minus as i128 * t)
    }

    pub fn symbol(&self, k: i64, m: i64) -> Result<SymbolPair> {
        if m <= 0 {
            return Err(Error::InvalidInput(format!("denominator {m} must be positive")));
        }
        if (m as u64).gcd(&self.level) != 1 {
            return Err(Error::InvalidInput(format!(
                "gcd({m}, {}) > 1 for symbol {{0,{k}/{m}}}",
                self.level
            )));
        }
        let (p, q) = self.phi_nums(k, m);
        let (dp, dq) = self.x_dens();
        Ok(SymbolPair {
            x_plus: BigRational::new(p.into(), dp.into()),
            x_minus: BigRational::new(q.into(), dq.into()),
        })
    }

    pub fn period_pair(&self, k: i64, m: i64) -> Result<PeriodPair> {
        let sym = self.symbol(k, m)?;
        let t = BigRational::from_integer(self.type_factor().into());
        let pair = PeriodPair {
            s: sym.x_plus * &t,
            t: sym.x_minus * &t,
            lattice_type: self.lattice_type,
        };
        if !pair.s.is_integer() || !pair.t.is_integer() {
            return Err(Error::Normalization(format!(
                "non-integral period pair ({}, {}) at {k}/{m}",
                pair.s, pair.t
            )));
        }
        if self.lattice_type == 2 && (pair.s.numer() - pair.t.numer()).is_odd() {
            return Err(Error::Normalization(format!(
                "period pair ({}, {}) at {k}/{m} has mixed parity",
                pair.s, pair.t
            )));
        }
        Ok(pair)
    }

    /// `L(E,1) / Omega^+` read off from `{0, oo}`, which pairs to `-L(f,1)`.
    pub fn lalg_direct(&self) -> BigRational {
        let i = self.p1().index_of(0, 1).unwrap();
        let (dp, _) = self.x_dens();
        -BigRational::new(self.phi_plus[i].into(), dp.into())
    }

    /// Half-range character sum `sum_{k=1}^{(m-1)/2} chi(k) phi(k/m)` (plus
    /// part for `M > 0`, minus part for `M < 0`), numerator over the `phi`
    /// denominator of that sign.
    pub fn half_chi_sum(&self, m_signed: i64) -> i128 {
        let m = m_signed.abs();
        (1..=(m - 1) / 2)
            .map(|k| {
                let chi = kronecker(m_signed, k) as i128;
                if chi == 0 {
                    return 0;
                }
                let (p, q) = self.phi_nums(k, m);
                chi * if m_signed > 0 { p } else { q }
            })
            .sum()
    }

    /// Fix the signs: the plus functional makes `L(E,1)/Omega^+` positive,
    /// and the minus functional makes the first nonzero negative twist sum
    /// positive (twisted central values are nonnegative).
    fn fix_signs(&mut self) {
        let i0 = self.p1().index_of(0, 1).unwrap();
        let v0 = self.phi_plus[i0];
        let flip_plus = if v0 != 0 {
            v0 > 0
        } else {
            self.phi_plus.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0)
        };
        if flip_plus {
            self.phi_plus.iter_mut().for_each(|v| *v = -*v);
        }
        let level = self.level as i64;
        let first = (3..2000)
            .map(|m: i64| -m)
            .filter(|&m| m.rem_euclid(4) == 1 && is_squarefree(m) && m.gcd(&level) == 1)
            .map(|m| self.half_chi_sum(m))
            .find(|&s| s != 0);
        if first.is_some_and(|s| s < 0) {
            self.phi_minus.iter_mut().for_each(|v| *v = -*v);
        }
    }

    /// Denominators of the functionals on relative homology.
    pub fn denominators(&self) -> (i64, i64) {
        let reduce = |nums: &[i64], den: i64| {
            let g = nums.iter().fold(den, |acc, &v| acc.gcd(&v));
            den / g
        };
        (reduce(&self.phi_plus, self.den_plus), reduce(&self.phi_minus, self.den_minus))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("eigen data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut e: EigenData =
            serde_json::from_str(text).map_err(|err| Error::Cache(err.to_string()))?;
        e.restore();
        if e.phi_plus.len() != e.p1().len() || e.phi_minus.len() != e.p1().len() {
            return Err(Error::Cache("symbol table length mismatch".into()));
        }
        if e.den_plus <= 0 || e.den_minus <= 0 {
            return Err(Error::Cache("nonpositive denominator".into()));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::lookup_label;

    fn eig(label: &str) -> EigenData {
        let e = lookup_label(label).unwrap().model().unwrap();
        let s = ModSymSpace::build(e.conductor()).unwrap();
        hecke_eigen_auto(&s, &e).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn direct_l_values() {
        for (label, n, d) in [("11a1", 1, 5), ("37b1", 2, 3), ("17a1", 1, 4), ("21a1", 1, 4), ("73a1", 1, 2)] {
            assert_eq!(eig(label).lalg_direct(), q(n, d), "{label}");
        }
    }

    #[test]
    fn eleven_a_symbols() {
        let e = eig("11a1");
        assert_eq!(e.eigenvalues[&2], -2);
        assert_eq!(e.eigenvalues[&3], -1);
        let total: BigRational = (0..5).map(|k| e.symbol(k, 5).unwrap().x_plus).sum();
        assert_eq!(total, q(-1, 1));
        assert_eq!(e.symbol(0, 1).unwrap(), SymbolPair { x_plus: q(0, 1), x_minus: q(0, 1) });
        for m in [3i64, 7, 13, 23] {
            for k in 1..m {
                let a = e.symbol(k, m).unwrap();
                let b = e.symbol(m - k, m).unwrap();
                assert_eq!(a.x_plus, b.x_plus);
                assert_eq!(a.x_minus, -b.x_minus);
                assert_eq!(e.symbol(k + 3 * m, m).unwrap(), a);
                e.period_pair(k, m).unwrap();
            }
        }
        assert_eq!(5 % e.denominators().0, 0);
        assert_eq!(5 % e.denominators().1, 0);
        assert!(e.symbol(1, 22).is_err());
    }

    #[test]
    fn level_26_has_two_forms() {
        let a = eig("26a1");
        let b = eig("26b1");
        assert_ne!(a.eigenvalues[&3], b.eigenvalues[&3]);
        assert_ne!(a.phi_plus, b.phi_plus);
        let s = ModSymSpace::build(26).unwrap();
        let e = lookup_label("26a1").unwrap().model().unwrap();
        assert!(matches!(hecke_eigen(&s, &e, 2), Err(Error::AmbiguousEigenspace { .. })));
    }

    #[test]
    fn wrong_traces_not_found() {
        let s = ModSymSpace::build(11).unwrap();
        let e37 = lookup_label("37b1").unwrap().model().unwrap();
        let fake = CurveModel::with_conductor(
            e37.coefficients().clone(),
            11,
            None,
        );
        assert!(fake.is_err() || matches!(hecke_eigen(&s, &fake.unwrap(), 30), Err(Error::CurveNotFound(11))));
    }

    #[test]
    fn json_round_trip() {
        let e = eig("11a1");
        let back = EigenData::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.symbol(2, 7).unwrap(), e.symbol(2, 7).unwrap());
    }
}
