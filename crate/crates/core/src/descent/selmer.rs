use super::local::{locally_soluble, Isogeny, Place};
use super::{NsPair, NsTwistClass, SquareClasses};
use crate::arith::{factor, jacobi, kronecker, sqrt_mod};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SelmerKind {
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "phihat")]
    PhiHat,
    #[serde(rename = "two(A)")]
    TwoA,
    #[serde(rename = "two(A')")]
    TwoAPrime,
}

/// An isogeny Selmer group as a subgroup of `Q(2, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelmerDescriptor {
    pub kind: SelmerKind,
    pub m: i64,
    /// Square-free representatives in basis order.
    pub elements: Vec<i64>,
    pub order: u64,
    /// Order after dividing out the image of rational torsion.
    pub quotient_order: u64,
    /// Square roots used by the criteria, by prime: `a^2 = p` for `phi`,
    /// `b^2 = -1` for `phihat`.
    pub witnesses: BTreeMap<u64, u64>,
}

fn legendre(a: i64, q: u64) -> i32 {
    jacobi(a.rem_euclid(q as i64), q as i64)
}

struct Criteria<'a> {
    pair: &'a NsPair,
    class: NsTwistClass,
    roots: BTreeMap<u64, u64>,
}

impl<'a> Criteria<'a> {
    fn new(pair: &'a NsPair, m: i64, iso: Isogeny) -> Result<Self> {
        let class = NsTwistClass::new(pair, m)?;
        let target = match iso {
            Isogeny::Phi => pair.p as i64,
            Isogeny::PhiHat => -1,
        };
        let mut roots = BTreeMap::new();
        for &q in &class.n_plus {
            let r = sqrt_mod(target, q)
                .ok_or_else(|| Error::Falsified(format!("{target} has no square root mod {q}")))?;
            roots.insert(q, r);
        }
        Ok(Criteria { pair, class, roots })
    }

    /// `(x/q)` for `x = c + s r` with both square roots `r`; the two must
    /// agree.
    fn symbol_both_roots(&self, q: u64, c: i64, s: i64) -> Result<i32> {
        let r = self.roots[&q] as i64;
        let (plus, minus) = (legendre(c + s * r, q), legendre(c - s * r, q));
        if plus != minus || plus == 0 {
            return Err(Error::Falsified(format!(
                "the two square roots mod {q} give different symbols ({plus}, {minus})"
            )));
        }
        Ok(plus)
    }

    fn phi_member(&self, d: i64) -> Result<bool> {
        // 2 can be a local norm at 2 when M = 3 mod 4, e.g. A'^(7) has a
        // rational point with x in the class 2
        if self.class.m.rem_euclid(4) != 1 {
            return Err(Error::Precondition(format!("closed form for phi needs M = 1 mod 4, got {}", self.class.m)));
        }
        let e = d.abs();
        let n = self.class.n();
        if n % e != 0 {
            return Ok(false);
        }
        let m_plus = self.class.r_plus.iter().chain(&self.class.n_plus);
        for &q in m_plus {
            if e % q as i64 != 0 && legendre(e, q) != 1 {
                return Ok(false);
            }
        }
        let u = self.pair.u;
        for &q in &self.class.n_plus {
            if e % q as i64 == 0 && legendre(self.class.m / e, q) != self.symbol_both_roots(q, 2 * u, 2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn phihat_member(&self, d: i64) -> Result<bool> {
        let p = self.pair.p as i64;
        let e = if d % p == 0 { d / p } else { d };
        if e <= 0 || self.class.m_plus() % e != 0 {
            return Ok(false);
        }
        let ok_mod = if self.class.m.rem_euclid(4) == 1 { e % 4 == 1 } else { e % 8 == 1 };
        if !ok_mod {
            return Ok(false);
        }
        for &q in self.class.n_plus.iter().chain(&self.class.n_minus) {
            if e % q as i64 != 0 && legendre(e, q) != 1 {
                return Ok(false);
            }
        }
        let u = self.pair.u;
        for &q in &self.class.n_plus {
            if e % q as i64 == 0 && legendre(self.class.m / e, q) != self.symbol_both_roots(q, u, 8)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn member(&self, iso: Isogeny, d: i64) -> Result<bool> {
        match iso {
            Isogeny::Phi => self.phi_member(d),
            Isogeny::PhiHat => self.phihat_member(d),
        }
    }
}

/// Membership of `d` in `S^(phi)(A^(M))` by the closed-form criteria, for
/// `M = 1 mod 4`.
pub fn phi_criterion(pair: &NsPair, m: i64, d: i64) -> Result<bool> {
    Criteria::new(pair, m, Isogeny::Phi)?.phi_member(d)
}

/// Membership of `d` in `S^(phihat)(A'^(M))` by the closed-form criteria.
pub fn phihat_criterion(pair: &NsPair, m: i64, d: i64) -> Result<bool> {
    Criteria::new(pair, m, Isogeny::PhiHat)?.phihat_member(d)
}

fn selmer(pair: &NsPair, m: i64, iso: Isogeny) -> Result<SelmerDescriptor> {
    let criteria = Criteria::new(pair, m, iso)?;
    let mut elements = Vec::new();
    let local = iso == Isogeny::Phi && m.rem_euclid(4) != 1;
    for d in SquareClasses::new(pair.p, m).elements() {
        let member = if local { oracle_member(pair, iso, m, d)? } else { criteria.member(iso, d)? };
        if member {
            elements.push(d);
        }
    }
    // image of the rational 2-torsion point of the other curve
    let (kind, torsion) = match iso {
        Isogeny::Phi => (SelmerKind::Phi, -1),
        Isogeny::PhiHat => (SelmerKind::PhiHat, pair.p as i64),
    };
    if !elements.contains(&torsion) {
        return Err(Error::Falsified(format!("{torsion} is missing from the {kind:?} Selmer group of M = {m}")));
    }
    let order = elements.len() as u64;
    Ok(SelmerDescriptor { kind, m, elements, order, quotient_order: order / 2, witnesses: criteria.roots })
}

pub fn selmer_phi(pair: &NsPair, m: i64) -> Result<SelmerDescriptor> {
    selmer(pair, m, Isogeny::Phi)
}

pub fn selmer_phihat(pair: &NsPair, m: i64) -> Result<SelmerDescriptor> {
    selmer(pair, m, Isogeny::PhiHat)
}

/// Membership of `d` decided by local solubility at `inf` and every prime
/// of `2pM`. Any undecided place is an error.
pub fn oracle_member(pair: &NsPair, iso: Isogeny, m: i64, d: i64) -> Result<bool> {
    let mut places = vec![Place::Infinity, Place::Prime(2), Place::Prime(pair.p)];
    places.extend(factor(m.unsigned_abs()).into_iter().map(|(q, _)| Place::Prime(q)));
    let mut all = true;
    for place in places {
        all &= locally_soluble(pair, iso, m, d, place)?;
    }
    Ok(all)
}

/// Closed-form membership compared with local solubility for every class
/// of `Q(2, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub m: i64,
    pub compared: usize,
    /// `(isogeny, d)` where the two disagree.
    pub mismatches: Vec<(Isogeny, i64)>,
    /// Isogenies whose closed form does not apply to this `M`.
    pub not_applicable: Vec<Isogeny>,
}

impl OracleCheck {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Run both membership tests over `Q(2, M)`. An undecided place is an error.
pub fn oracle_equivalence(pair: &NsPair, m: i64) -> Result<OracleCheck> {
    let mut check = OracleCheck { m, compared: 0, mismatches: vec![], not_applicable: vec![] };
    for iso in [Isogeny::Phi, Isogeny::PhiHat] {
        if iso == Isogeny::Phi && m.rem_euclid(4) != 1 {
            check.not_applicable.push(iso);
            continue;
        }
        let criteria = Criteria::new(pair, m, iso)?;
        for d in SquareClasses::new(pair.p, m).elements() {
            check.compared += 1;
            if criteria.member(iso, d)? != oracle_member(pair, iso, m, d)? {
                check.mismatches.push((iso, d));
            }
        }
    }
    Ok(check)
}

/// Bounds on the order of a 2-Selmer group modulo torsion, from the exact
/// sequence through the isogeny Selmer groups and the parity of its rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selmer2 {
    pub kind: SelmerKind,
    pub m: i64,
    pub root_number: i32,
    pub lower: u64,
    pub upper: u64,
    /// Set when the bounds meet.
    pub order: Option<u64>,
}

fn pinned(kind: SelmerKind, m: i64, sub: u64, target: u64, root_number: i32) -> Result<Selmer2> {
    let lo = sub.trailing_zeros();
    let hi = lo + target.trailing_zeros();
    let odd = u32::from(root_number == -1);
    let exps: Vec<u32> = (lo..=hi).filter(|e| e % 2 == odd).collect();
    let (Some(&a), Some(&b)) = (exps.first(), exps.last()) else {
        return Err(Error::Falsified(format!(
            "no 2-Selmer order between 2^{lo} and 2^{hi} has the parity of root number {root_number} (M = {m})"
        )));
    };
    Ok(Selmer2 { kind, m, root_number, lower: 1 << a, upper: 1 << b, order: (a == b).then_some(1 << a) })
}

/// Root number of `A^(M)`: `A` has prime conductor and split multiplicative
/// reduction there, so `w(A) = a_p(A) = 1`, and twisting multiplies by
/// `(M / -p)`.
pub fn ns_root_number(pair: &NsPair, m: i64) -> Result<i32> {
    let w = pair.a.a_p(pair.p)? as i32;
    Ok(kronecker(m, -(pair.p as i64)) * w)
}

/// Orders of the 2-Selmer groups of `A^(M)` and `A'^(M)` modulo torsion,
/// for `M = 1 mod 4`.
pub fn selmer2(pair: &NsPair, m: i64) -> Result<(Selmer2, Selmer2)> {
    if m.rem_euclid(4) != 1 {
        return Err(Error::Precondition(format!("M = {m} is not 1 mod 4")));
    }
    let phi = selmer_phi(pair, m)?;
    let phihat = selmer_phihat(pair, m)?;
    let w = ns_root_number(pair, m)?;
    Ok((
        pinned(SelmerKind::TwoA, m, phi.quotient_order, phihat.order, w)?,
        pinned(SelmerKind::TwoAPrime, m, phihat.quotient_order, phi.order, w)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{ns_curves, square_class_product};
    use super::*;

    #[test]
    fn small_groups_at_73() {
        let pair = ns_curves(-3).unwrap();
        let s = selmer_phi(&pair, -7).unwrap();
        assert_eq!((s.elements.as_slice(), s.order, s.quotient_order), (&[1, -1][..], 2, 1));
        let s = selmer_phihat(&pair, -7).unwrap();
        assert_eq!((s.elements.as_slice(), s.order), (&[1, 73][..], 2));
        let s = selmer_phi(&pair, 57).unwrap();
        assert_eq!(s.quotient_order, 4);
        assert_eq!(selmer_phihat(&pair, 57).unwrap().order, 2);
    }

    #[test]
    fn witnesses_are_square_roots() {
        let pair = ns_curves(-3).unwrap();
        let q = (5..200u64).find(|&q| crate::arith::is_prime(q) && q % 4 == 1 && !pair.inert(q)).unwrap();
        let s = selmer_phi(&pair, q as i64).unwrap();
        let a = s.witnesses[&q];
        assert_eq!(a * a % q, 73 % q);
        let s = selmer_phihat(&pair, q as i64).unwrap();
        let b = s.witnesses[&q];
        assert_eq!((b * b + 1) % q, 0);
    }

    #[test]
    fn inert_prime_families() {
        let pair = ns_curves(-3).unwrap();
        // M = eps R_-
        for m in [-7, -11, 77, -31 * 7 * 11] {
            assert_eq!(selmer2(&pair, m).unwrap().0.order, Some(1), "M={m}");
        }
        // M = N_-
        assert_eq!(selmer2(&pair, 57).unwrap().0.order, Some(4));
        // M = -p0 R_- with p0 = 3 mod 4 split
        assert_eq!(selmer2(&pair, -3).unwrap().0.order, Some(2));
        assert_eq!(selmer2(&pair, -3 * 7 * 11).unwrap().0.order, Some(2));
        // M = q0 R_- with q0 = 1 mod 4 inert
        assert_eq!(selmer2(&pair, 5).unwrap().1.order, Some(2));
        assert!(selmer2(&pair, 7).is_err());
    }

    #[test]
    fn three_mod_four_uses_local_solubility() {
        let pair = ns_curves(-3).unwrap();
        let s = selmer_phi(&pair, 7).unwrap();
        assert!(s.elements.contains(&2) && s.elements.contains(&-1));
        assert!(phi_criterion(&pair, 7, 2).is_err());
    }

    #[test]
    fn groups_are_closed() {
        let pair = ns_curves(-3).unwrap();
        for m in [57, -7 * 13, 5 * 3 * 19, -15] {
            for s in [selmer_phi(&pair, m).unwrap(), selmer_phihat(&pair, m).unwrap()] {
                assert!(s.order.is_power_of_two());
                for &x in &s.elements {
                    for &y in &s.elements {
                        assert!(s.elements.contains(&square_class_product(x, y)), "M={m} {x}*{y}");
                    }
                }
            }
        }
    }

    #[test]
    fn criteria_match_local_solubility() {
        let pair = ns_curves(-3).unwrap();
        for m in [-7, -11, 57, 5, -3, 13, -15, 7, 3 * 19 * 5, 3, 11, -5, 35, -21, 91] {
            let c = oracle_equivalence(&pair, m).unwrap();
            assert!(c.agrees(), "M={m} {:?}", c.mismatches);
            assert_eq!(c.not_applicable.is_empty(), m.rem_euclid(4) == 1);
        }
    }
}
