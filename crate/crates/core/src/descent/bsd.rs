use super::selmer::selmer2;
use super::{NsData, NsPair, NsTwistClass};
use crate::arith::{is_prime, jacobi, valuation, Ord2};
use crate::curves::TwistDescriptor;
use crate::error::{Error, Result};
use crate::lvalues::{lalg_twist, sum_triple, AlgLValue};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NsCurve {
    A,
    #[serde(rename = "A'")]
    APrime,
}

/// Tamagawa factors of `A^(M)` or `A'^(M)` at `p` and at the primes of `M`,
/// computed from the reduction types and compared with the closed forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamagawaNs {
    pub curve: NsCurve,
    pub m: i64,
    pub c: BTreeMap<u64, u32>,
    pub real_components: u32,
    /// `ord_2 #E(Q_q)[2]` for `q | M`.
    pub local_two_torsion_ord2: BTreeMap<u64, u32>,
}

impl TamagawaNs {
    pub fn ord2_total(&self) -> u32 {
        self.c.values().map(|c| c.trailing_zeros()).sum()
    }
}

fn residue(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().expect("residue fits")
}

/// `c_q` of the twist by `M` at an odd `q | M` of good reduction for `E`:
/// type `I0*`, so `1 +` the roots mod `q` of
/// `T^3 + m (b2/4) T^2 + m^2 (b4/2) T + m^3 (b6/4)` with `m = M/q`.
fn c_i0_star(curve: &crate::curves::CurveModel, m: i64, q: u64) -> u32 {
    let inv = curve.invariants();
    let i2 = (q + 1) / 2;
    let i4 = i2 * i2 % q;
    let mq = (m / q as i64).rem_euclid(q as i64) as u64;
    let c2 = residue(&inv.b2, q) * i4 % q * mq % q;
    let c1 = residue(&inv.b4, q) * i2 % q * (mq * mq % q) % q;
    let c0 = residue(&inv.b6, q) * i4 % q * (mq * mq % q * mq % q) % q;
    let roots = (0..q).filter(|&t| (((t + c2) % q * t + c1) % q * t + c0) % q == 0).count();
    1 + roots as u32
}

/// `c_p` of a twist unramified at the multiplicative prime `p`.
fn c_multiplicative(curve: &crate::curves::CurveModel, m: i64, p: u64) -> Result<u32> {
    let v = valuation(curve.disc(), p).unwrap_or(0);
    let split = curve.a_p(p)? * jacobi(m.rem_euclid(p as i64), p as i64) as i64 == 1;
    Ok(if split { v } else { 2 - v % 2 })
}

/// Tamagawa factors of the twist by odd square-free `M` prime to `p`.
/// Disagreement with the closed forms is a [`Error::Falsified`].
pub fn tamagawa_ns(pair: &NsPair, m: i64, which: NsCurve) -> Result<TamagawaNs> {
    let class = NsTwistClass::new(pair, m)?;
    let curve = match which {
        NsCurve::A => &pair.a,
        NsCurve::APrime => &pair.a_prime,
    };
    let mut c = BTreeMap::new();
    let mut local = BTreeMap::new();
    c.insert(pair.p, c_multiplicative(curve, m, pair.p)?);
    for q in class.primes() {
        c.insert(q, c_i0_star(curve, m, q));
        local.insert(q, curve.local_two_torsion_order(q)?.trailing_zeros());
    }
    let real_components = if curve.disc_sign() < 0 { 1 } else { 2 };
    let t = TamagawaNs { curve: which, m, c, real_components, local_two_torsion_ord2: local };

    let (cp, comps) = match which {
        NsCurve::A => (2, 1),
        NsCurve::APrime => (1, 2),
    };
    let mut bad = Vec::new();
    if t.c[&pair.p] != cp || t.real_components != comps {
        bad.push(format!("c_p = {}, components = {}", t.c[&pair.p], t.real_components));
    }
    for q in class.primes() {
        let want = match which {
            NsCurve::A if q % 4 == 3 => 2,
            NsCurve::APrime if pair.inert(q) => 2,
            _ => 4,
        };
        let got = t.c[&q];
        if got != want || got.trailing_zeros() != t.local_two_torsion_ord2[&q] {
            bad.push(format!("c_{q} = {got}, expected {want}, ord_2 #E(Q_q)[2] = {}", t.local_two_torsion_ord2[&q]));
        }
    }
    if !bad.is_empty() {
        return Err(Error::Falsified(format!("Tamagawa factors of {which:?}^({m}): {}", bad.join("; "))));
    }
    Ok(t)
}

/// Predicted and observed `a_q` for `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AqVerdict {
    pub q: u64,
    pub a_q: i64,
    /// 4 for a congruence, 0 for an exact value.
    pub modulus: u32,
    pub predicted: i64,
    pub holds: bool,
}

/// Check the predicted behaviour of `a_q(A)` against a point count; a
/// mismatch is a [`Error::Falsified`].
pub fn aq_ns(pair: &NsPair, q: u64) -> Result<AqVerdict> {
    if !is_prime(q) {
        return Err(Error::InvalidInput(format!("{q} is not prime")));
    }
    let (modulus, predicted) = if q == 2 {
        (0, if pair.p % 16 == 1 { -1 } else { 1 })
    } else if q == pair.p {
        (0, 1)
    } else if q % 4 == 1 || pair.inert(q) {
        (4, 2)
    } else {
        (4, 0)
    };
    let a_q = pair.a.a_p(q)?;
    let holds = if modulus == 0 { a_q == predicted } else { a_q.rem_euclid(4) == predicted };
    if !holds {
        return Err(Error::Falsified(format!(
            "a_{q} = {a_q} for p = {} but {predicted}{} was predicted",
            pair.p,
            if modulus == 0 { String::new() } else { format!(" mod {modulus}") }
        )));
    }
    Ok(AqVerdict { q, a_q, modulus, predicted, holds })
}

/// The 2-part of the BSD formula for `A^(M)` in rank 0:
/// `ord_2 L^alg = ord_2 #Sha + sum ord_2 c_v + ord_2 #components - 2 ord_2 #tors`.
#[derive(Clone, Debug, Serialize)]
pub struct BsdLedger {
    pub p: u64,
    pub m: i64,
    pub lalg: AlgLValue,
    pub lalg_ord2: i64,
    /// Order of the 2-Selmer group modulo torsion.
    pub selmer2_order: u64,
    /// From the descent: rank 0 and `Sha[2] = 0` when `selmer2_order = 1`.
    pub rank: u32,
    pub tamagawa: BTreeMap<u64, u32>,
    pub tamagawa_ord2_total: u32,
    pub real_components: u32,
    pub torsion_order: u64,
    /// `ord_2 #Sha` forced by the formula.
    pub sha2_prediction: i64,
    /// `ord_2 #Sha` from the descent.
    pub descent_sha2: i64,
    pub identity_holds: bool,
    /// Inputs taken from the literature rather than computed.
    pub cited: Vec<String>,
}

/// The ledger for `A^(-q)` with `u = 5 mod 8`, `q = 3 mod 4` inert in
/// `Q(sqrt p)`. Every component that disagrees is a [`Error::Falsified`].
pub fn verify_thm_a(data: &NsData, q: u64) -> Result<BsdLedger> {
    let pair = &data.pair;
    if pair.u.rem_euclid(8) != 5 {
        return Err(Error::Precondition(format!("u = {} is not 5 mod 8", pair.u)));
    }
    if !is_prime(q) || q % 4 != 3 || q == pair.p || !pair.inert(q) {
        return Err(Error::Precondition(format!(
            "q = {q} must be a prime = 3 mod 4, inert in Q(sqrt {})",
            pair.p
        )));
    }
    let m = -(q as i64);
    let tl = lalg_twist(&data.cd, &TwistDescriptor::new(m, pair.p)?)?;
    let lalg_ord2 = tl
        .lalg
        .ord2
        .finite()
        .ok_or_else(|| Error::Falsified(format!("L(A^({m}), 1) vanishes for p = {}", pair.p)))?;
    let (s2, _) = selmer2(pair, m)?;
    let selmer2_order = s2.order.ok_or_else(|| {
        Error::Falsified(format!("2-Selmer order of A^({m}) is not pinned: {}..{}", s2.lower, s2.upper))
    })?;
    let tam = tamagawa_ns(pair, m, NsCurve::A)?;
    let torsion_order = tl.twist_curve.torsion_order()?;
    let tors2 = torsion_order.trailing_zeros() as i64;
    let tam2 = tam.ord2_total();
    let comps2 = tam.real_components.trailing_zeros() as i64;
    let sha2_prediction = lalg_ord2 - tam2 as i64 - comps2 + 2 * tors2;
    let descent_sha2 = 0;
    let ledger = BsdLedger {
        p: pair.p,
        m,
        lalg: tl.lalg.clone(),
        lalg_ord2,
        selmer2_order,
        rank: 0,
        tamagawa: tam.c.clone(),
        tamagawa_ord2_total: tam2,
        real_components: tam.real_components,
        torsion_order,
        sha2_prediction,
        descent_sha2,
        identity_holds: sha2_prediction == descent_sha2,
        cited: vec!["finiteness of Sha for analytic rank 0 (Kolyvagin)".into()],
    };
    let mut bad = Vec::new();
    if lalg_ord2 != 0 {
        bad.push(format!("ord_2 L^alg = {lalg_ord2}"));
    }
    if selmer2_order != 1 {
        bad.push(format!("2-Selmer order {selmer2_order}"));
    }
    if tam.c[&pair.p] != 2 || tam.c[&q] != 2 {
        bad.push(format!("Tamagawa factors {:?}", tam.c));
    }
    if torsion_order != 2 {
        bad.push(format!("torsion order {torsion_order}"));
    }
    if !ledger.identity_holds {
        bad.push(format!("BSD 2-part predicts ord_2 Sha = {sha2_prediction}"));
    }
    if !bad.is_empty() {
        return Err(Error::Falsified(format!("A^({m}) for p = {}: {}", pair.p, bad.join("; "))));
    }
    Ok(ledger)
}

/// `ord_2 L^alg(A) = -1` together with the mechanism behind it.
#[derive(Clone, Debug, Serialize)]
pub struct DenominatorCheck {
    pub p: u64,
    pub u: i64,
    pub lalg: AlgLValue,
    pub a2: i64,
    /// `x^+({0, 1/2})`, an integer equal to `-(3 - a_2) L^alg`.
    pub half_symbol: String,
    pub holds: bool,
}

pub fn lalg_denominator_check(data: &NsData) -> Result<DenominatorCheck> {
    let pair = &data.pair;
    if pair.u.rem_euclid(8) != 5 {
        return Err(Error::Precondition(format!("u = {} is not 5 mod 8", pair.u)));
    }
    let lalg = data.cd.lalg.clone();
    let a2 = pair.a.a_p(2)?;
    let half = data.cd.symbol(1, 2)?.x_plus;
    let two = BigRational::from_integer(2.into());
    let scaled = BigRational::from_integer((3 - a2).into()) * &lalg.value;
    let holds = a2 == 1
        && scaled == -&half
        && half.is_integer()
        && (&lalg.value * &two).is_integer()
        && !lalg.value.is_integer()
        && lalg.ord2 == Ord2::Finite(-1);
    let check = DenominatorCheck {
        p: pair.p,
        u: pair.u,
        lalg,
        a2,
        half_symbol: crate::arith::rational_string(&half),
        holds,
    };
    if !holds {
        return Err(Error::Falsified(format!(
            "p = {}: L^alg = {}, a_2 = {a2}, x+({{0,1/2}}) = {}",
            pair.p, check.lalg, check.half_symbol
        )));
    }
    Ok(check)
}

/// One twist `M = q_1 ... q_2r` in the scan of products of primes that are
/// `3 mod 4` and inert in `Q(sqrt p)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub m: i64,
    pub primes: Vec<u64>,
    pub ord2_base: Ord2,
    pub ord2_s_chi: Ord2,
    pub ord2_s_prime: Ord2,
    pub ord2_lalg_twist: Ord2,
    /// `ord_2 L^alg(A) = -1` and `ord_2 S'' = ord_2 S'`.
    pub hypothesis: bool,
    /// `ord_2 L^alg(A^(M)) = 2r - 1`.
    pub conclusion: bool,
}

fn products(primes: &[u64], count: usize, bound: u64) -> Vec<Vec<u64>> {
    fn go(primes: &[u64], start: usize, left: usize, prod: u64, bound: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..primes.len() {
            let next = prod.saturating_mul(primes[i]);
            if next > bound {
                break;
            }
            cur.push(primes[i]);
            go(primes, i + 1, left - 1, next, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(primes, 0, count, 1, bound, &mut vec![], &mut out);
    out.sort_by_key(|v| v.iter().product::<u64>());
    out
}

/// Tabulate the twists by products of `2r` distinct primes `3 mod 4` inert
/// in `Q(sqrt p)` with `M <= bound`. Nothing is asserted.
pub fn conjecture_scan(data: &NsData, r: usize, bound: u64) -> Result<Vec<ConjectureRow>> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be at least 1".into()));
    }
    let primes = data.pair.three_mod_four_inert(bound);
    let base = data.cd.lalg.ord2;
    products(&primes, 2 * r, bound)
        .into_par_iter()
        .map(|ps| {
            let m: i64 = ps.iter().map(|&q| q as i64).product();
            let sums = sum_triple(&data.cd, m as u64)?;
            let tl = lalg_twist(&data.cd, &TwistDescriptor::new(m, data.pair.p)?)?;
            let (s_chi, s_prime) = (sums.ord2_s_chi(), sums.ord2_s_prime());
            Ok(ConjectureRow {
                m,
                primes: ps,
                ord2_base: base,
                ord2_s_chi: s_chi,
                ord2_s_prime: s_prime,
                ord2_lalg_twist: tl.lalg.ord2,
                hypothesis: base == Ord2::Finite(-1) && s_chi == s_prime,
                conclusion: tl.lalg.ord2 == Ord2::Finite(2 * r as i64 - 1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::ns_curves;
    use super::*;

    #[test]
    fn tamagawa_at_73() {
        let pair = ns_curves(-3).unwrap();
        let t = tamagawa_ns(&pair, -7, NsCurve::A).unwrap();
        assert_eq!(t.c, BTreeMap::from([(7, 2), (73, 2)]));
        assert_eq!(t.real_components, 1);
        let t = tamagawa_ns(&pair, -7, NsCurve::APrime).unwrap();
        assert_eq!(t.c, BTreeMap::from([(7, 2), (73, 1)]));
        assert_eq!(t.real_components, 2);
        let q = (5..300u64).find(|&q| is_prime(q) && q % 4 == 1 && !pair.inert(q)).unwrap();
        assert_eq!(tamagawa_ns(&pair, q as i64, NsCurve::A).unwrap().c[&q], 4);
        assert_eq!(tamagawa_ns(&pair, q as i64, NsCurve::APrime).unwrap().c[&q], 4);
    }

    #[test]
    fn hecke_congruences() {
        let pair = ns_curves(-3).unwrap();
        assert_eq!(aq_ns(&pair, 2).unwrap().a_q, 1);
        assert_eq!(aq_ns(&pair, 73).unwrap().a_q, 1);
        let v = aq_ns(&pair, 7).unwrap();
        assert_eq!((v.modulus, v.predicted), (4, 2));
        let v = aq_ns(&pair, 3).unwrap();
        assert_eq!((v.modulus, v.predicted), (4, 0));
        assert!(aq_ns(&pair, 9).is_err());
    }

    #[test]
    fn prime_products() {
        let ps = products(&[7, 11, 31, 43], 2, 400);
        assert_eq!(ps, vec![vec![7, 11], vec![7, 31], vec![7, 43], vec![11, 31]]);
    }
}
