//! Neumann-Setzer curves of prime conductor `p = u^2 + 64`: explicit
//! 2-isogeny descents for their quadratic twists, Tamagawa factors, the
//! congruences of `a_q`, and the 2-part of the BSD formula.

mod bsd;
mod local;
mod selmer;

pub use bsd::{
    aq_ns, conjecture_scan, lalg_denominator_check, tamagawa_ns, verify_thm_a, AqVerdict, BsdLedger,
    ConjectureRow, DenominatorCheck, NsCurve, TamagawaNs,
};
pub use local::{
    local_points_oracle, locally_soluble, quartic, Isogeny, Place, MAX_PRECISION, PRECISION_ODD, PRECISION_TWO,
};
pub use selmer::{
    ns_root_number, oracle_equivalence, oracle_member, phi_criterion, phihat_criterion, selmer2, selmer_phi, selmer_phihat, Selmer2, SelmerDescriptor,
    SelmerKind, OracleCheck,
};

use crate::arith::{factor, gcd_i64, is_prime, is_squarefree, jacobi};
use crate::curves::CurveModel;
use crate::error::{Error, Result};
use crate::lvalues::CurveData;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::path::Path;

/// The two curves of conductor `p = u^2 + 64`.
#[derive(Clone, Debug, Serialize)]
pub struct NsPair {
    pub u: i64,
    pub p: u64,
    #[serde(serialize_with = "ser_model")]
    pub a: CurveModel,
    #[serde(serialize_with = "ser_model")]
    pub a_prime: CurveModel,
    /// `D` with `Q(A[2]) = Q(sqrt D)`.
    pub two_division_field_a: i64,
    /// `D` with `Q(A'[2]) = Q(sqrt D)`.
    pub two_division_field_a_prime: i64,
}

fn ser_model<S: serde::Serializer>(c: &CurveModel, s: S) -> std::result::Result<S::Ok, S::Error> {
    let a: Vec<String> = c.coefficients().iter().map(|x| x.to_string()).collect();
    s.serialize_str(&format!("[{}]", a.join(",")))
}

/// Square-free part of a nonzero integer, keeping the sign.
fn squarefree_kernel(n: i64) -> i64 {
    let mut k: i64 = factor(n.unsigned_abs())
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p as i64)
        .product();
    if n < 0 {
        k = -k;
    }
    k
}

/// Validated Neumann-Setzer pair for `u = 1 mod 4` with `u^2 + 64` prime.
pub fn ns_curves(u: i64) -> Result<NsPair> {
    if u.rem_euclid(4) != 1 {
        return Err(Error::InvalidInput(format!("u = {u} is not 1 mod 4")));
    }
    let p = u
        .checked_mul(u)
        .and_then(|s| s.checked_add(64))
        .ok_or_else(|| Error::Capacity(format!("u = {u} is too large")))? as u64;
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("u^2 + 64 = {p} is not prime")));
    }
    let c = (u - 1) / 4;
    let a = CurveModel::from_i64([1, c, 0, 4, u])?;
    let a_prime = CurveModel::from_i64([1, c, 0, -1, 0])?;
    let pi = BigInt::from(p);
    if *a.disc() != -(&pi * &pi) || *a_prime.disc() != pi {
        return Err(Error::Falsified(format!(
            "discriminants {} and {} for u = {u} are not -p^2 and p",
            a.disc(),
            a_prime.disc()
        )));
    }
    if a.conductor() != p || a_prime.conductor() != p {
        return Err(Error::Falsified(format!("conductor of the pair for u = {u} is not {p}")));
    }
    for (name, curve) in [("A", &a), ("A'", &a_prime)] {
        if curve.torsion_order()? != 2 {
            return Err(Error::Falsified(format!("{name} for u = {u} does not have torsion Z/2")));
        }
    }
    // the quadratic factors X^2 - 2uX + p and X^2 + 4uX - 256 of the
    // 2-division polynomials on the isogeny models
    let pi64 = p as i64;
    Ok(NsPair {
        u,
        p,
        a,
        a_prime,
        two_division_field_a: squarefree_kernel(4 * u * u - 4 * pi64),
        two_division_field_a_prime: squarefree_kernel(16 * u * u + 1024),
    })
}

impl NsPair {
    /// Whether the odd prime `q != p` is inert in `Q(sqrt p)`.
    pub fn inert(&self, q: u64) -> bool {
        jacobi(self.p as i64, q as i64) == -1
    }

    /// Primes `q <= bound` with `q = 3 mod 4` and inert in `Q(sqrt p)`.
    pub fn three_mod_four_inert(&self, bound: u64) -> Vec<u64> {
        crate::arith::primes_up_to(bound).into_iter().filter(|&q| q % 4 == 3 && self.inert(q)).collect()
    }
}

/// A pair together with the modular-symbol data of `A`.
#[derive(Clone, Debug)]
pub struct NsData {
    pub pair: NsPair,
    pub cd: CurveData,
}

impl NsData {
    pub fn new(u: i64, cache_dir: Option<&Path>) -> Result<Self> {
        let pair = ns_curves(u)?;
        let cd = CurveData::new(&pair.a, cache_dir)?;
        Ok(NsData { pair, cd })
    }
}

/// `M = epsilon R N` split by the behaviour of its primes in `Q(sqrt p)`
/// (`R` inert, `N` split) and by residue mod 4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NsTwistClass {
    pub m: i64,
    pub epsilon: i32,
    pub r_plus: Vec<u64>,
    pub r_minus: Vec<u64>,
    pub n_plus: Vec<u64>,
    pub n_minus: Vec<u64>,
}

fn product(v: &[u64]) -> i64 {
    v.iter().map(|&q| q as i64).product()
}

impl NsTwistClass {
    pub fn new(pair: &NsPair, m: i64) -> Result<Self> {
        if m == 0 || m % 2 == 0 || !is_squarefree(m) || gcd_i64(m, pair.p as i64) != 1 {
            return Err(Error::InvalidInput(format!(
                "M = {m} must be odd, square-free and prime to {}",
                pair.p
            )));
        }
        let mut c = NsTwistClass {
            m,
            epsilon: m.signum() as i32,
            r_plus: vec![],
            r_minus: vec![],
            n_plus: vec![],
            n_minus: vec![],
        };
        for (q, _) in factor(m.unsigned_abs()) {
            let bucket = match (pair.inert(q), q % 4 == 1) {
                (true, true) => &mut c.r_plus,
                (true, false) => &mut c.r_minus,
                (false, true) => &mut c.n_plus,
                (false, false) => &mut c.n_minus,
            };
            bucket.push(q);
        }
        Ok(c)
    }

    pub fn r(&self) -> i64 {
        product(&self.r_plus) * product(&self.r_minus)
    }

    pub fn n(&self) -> i64 {
        product(&self.n_plus) * product(&self.n_minus)
    }

    /// Product of the primes of `M` that are `1 mod 4`.
    pub fn m_plus(&self) -> i64 {
        product(&self.r_plus) * product(&self.n_plus)
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> =
            [&self.r_plus, &self.r_minus, &self.n_plus, &self.n_minus].into_iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

/// `Q(2, M)`: square classes with even order outside `2pM`, on the basis
/// `-1, 2, p` followed by the primes of `M` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareClasses {
    pub generators: Vec<i64>,
}

impl SquareClasses {
    pub fn new(p: u64, m: i64) -> Self {
        let mut generators = vec![-1, 2, p as i64];
        generators.extend(factor(m.unsigned_abs()).into_iter().map(|(q, _)| q as i64));
        SquareClasses { generators }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn element(&self, mask: u64) -> i64 {
        self.generators.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, g)| g).product()
    }

    /// Basis coordinates of a square-free representative.
    pub fn mask_of(&self, d: i64) -> Option<u64> {
        let mut mask = u64::from(d < 0);
        let mut rest = d.abs();
        for (i, &g) in self.generators.iter().enumerate().skip(1) {
            if rest % g == 0 {
                rest /= g;
                mask |= 1 << i;
            }
        }
        (rest == 1).then_some(mask)
    }

    /// All representatives, ordered by basis coordinates.
    pub fn elements(&self) -> Vec<i64> {
        (0..1u64 << self.rank()).map(|m| self.element(m)).collect()
    }
}

/// Product of two square-free integers modulo squares.
pub fn square_class_product(a: i64, b: i64) -> i64 {
    let g = gcd_i64(a, b);
    (a / g) * (b / g)
}

/// A rational point on one of the isogeny models, or the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RationalPoint {
    Identity,
    Affine { x: BigRational, y: BigRational },
}

impl RationalPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        RationalPoint::Affine { x, y }
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `(a, b)` with the source model `y^2 = x^3 + a x^2 + b x` of the isogeny:
/// `A^(M)` for `Phi`, `A'^(M)` for `PhiHat`.
pub fn isogeny_model(pair: &NsPair, iso: Isogeny, m: i64) -> (BigInt, BigInt) {
    let (u, m, p) = (BigInt::from(pair.u), BigInt::from(m), BigInt::from(pair.p));
    match iso {
        Isogeny::Phi => (-2 * &u * &m, &p * &m * &m),
        Isogeny::PhiHat => (4 * &u * &m, -256 * &m * &m),
    }
}

/// Whether `pt` lies on `y^2 = x^3 + a x^2 + b x`.
pub fn on_model(a: &BigInt, b: &BigInt, pt: &RationalPoint) -> bool {
    match pt {
        RationalPoint::Identity => true,
        RationalPoint::Affine { x, y } => {
            let (a, b) = (BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()));
            y * y == x * x * x + a * x * x + b * x
        }
    }
}

/// `phi: A^(M) -> A'^(M)` or its dual, in exact arithmetic.
pub fn isogeny_apply(pair: &NsPair, iso: Isogeny, pt: &RationalPoint, m: i64) -> Result<RationalPoint> {
    let (a, b) = isogeny_model(pair, iso, m);
    if !on_model(&a, &b, pt) {
        return Err(Error::InvalidInput("point is not on the source model".into()));
    }
    let RationalPoint::Affine { x, y } = pt else {
        return Ok(RationalPoint::Identity);
    };
    if x.is_zero() {
        return Ok(RationalPoint::Identity);
    }
    let b = BigRational::from_integer(b);
    let x2 = x * x;
    Ok(match iso {
        Isogeny::Phi => RationalPoint::affine(y * y / &x2, y * (&b - &x2) / &x2),
        Isogeny::PhiHat => RationalPoint::affine(y * y / (q(4) * &x2), y * (&b - &x2) / (q(8) * &x2)),
    })
}

/// Doubling on `y^2 = x^3 + a x^2 + b x`.
pub fn double(a: &BigInt, b: &BigInt, pt: &RationalPoint) -> RationalPoint {
    let RationalPoint::Affine { x, y } = pt else {
        return RationalPoint::Identity;
    };
    if y.is_zero() {
        return RationalPoint::Identity;
    }
    let (a, b) = (BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()));
    let lambda = (q(3) * x * x + q(2) * &a * x + &b) / (q(2) * y);
    let x3 = &lambda * &lambda - &a - q(2) * x;
    let y3 = -(y + &lambda * (&x3 - x));
    RationalPoint::affine(x3, y3)
}

/// First integral point with `y != 0` and `1 <= |x| <= bound` on `A^(M)`.
pub fn find_point(pair: &NsPair, m: i64, bound: i64) -> Option<RationalPoint> {
    let (a, b) = isogeny_model(pair, Isogeny::Phi, m);
    for x in (1..=bound).flat_map(|x| [x, -x]) {
        let xb = BigInt::from(x);
        let rhs = &xb * &xb * &xb + &a * &xb * &xb + &b * &xb;
        if rhs <= BigInt::zero() {
            continue;
        }
        let y = rhs.sqrt();
        if &y * &y == rhs {
            return Some(RationalPoint::affine(
                BigRational::from_integer(xb),
                BigRational::from_integer(y),
            ));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_for_73() {
        let pair = ns_curves(-3).unwrap();
        assert_eq!(pair.p, 73);
        let want: Vec<BigInt> = [1, -1, 0, 4, -3].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(pair.a.coefficients().to_vec(), want);
        assert_eq!(pair.two_division_field_a, -1);
        assert_eq!(pair.two_division_field_a_prime, 73);
        // the isogeny model of A is a model of A
        let short = CurveModel::from_i64([0, 6, 0, 73, 0]).unwrap();
        assert_eq!(short.coefficients(), pair.a.coefficients());
        assert_eq!(ns_curves(5).unwrap().p, 89);
        assert!(ns_curves(3).is_err());
        assert!(ns_curves(1).is_err(), "65 is composite");
    }

    #[test]
    fn twist_classes() {
        let pair = ns_curves(-3).unwrap();
        let c = NsTwistClass::new(&pair, 57).unwrap();
        assert_eq!(c.n_minus, [3, 19]);
        assert_eq!(c.n(), 57);
        assert_eq!(c.r(), 1);
        let c = NsTwistClass::new(&pair, -7).unwrap();
        assert_eq!((c.epsilon, c.r_minus.as_slice()), (-1, &[7u64][..]));
        assert!(NsTwistClass::new(&pair, 146).is_err());
    }

    #[test]
    fn square_classes() {
        let g = SquareClasses::new(73, -7);
        assert_eq!(g.generators, [-1, 2, 73, 7]);
        assert_eq!(g.elements().len(), 16);
        for (i, d) in g.elements().into_iter().enumerate() {
            assert_eq!(g.mask_of(d), Some(i as u64));
        }
        assert_eq!(square_class_product(-14, 21), -6);
        assert_eq!(g.mask_of(3), None);
    }

    #[test]
    fn isogenies_compose_to_doubling() {
        let pair = ns_curves(-3).unwrap();
        assert_eq!(
            isogeny_apply(&pair, Isogeny::Phi, &RationalPoint::affine(q(0), q(0)), 5).unwrap(),
            RationalPoint::Identity
        );
        assert_eq!(
            isogeny_apply(&pair, Isogeny::PhiHat, &RationalPoint::Identity, 5).unwrap(),
            RationalPoint::Identity
        );
        let mut checked = 0;
        for m in [1, 5, -7, 13, -15, 17, 21, -23, 29] {
            let Some(pt) = find_point(&pair, m, 2000) else { continue };
            let image = isogeny_apply(&pair, Isogeny::Phi, &pt, m).unwrap();
            let (a2, b2) = isogeny_model(&pair, Isogeny::PhiHat, m);
            assert!(on_model(&a2, &b2, &image), "M={m}");
            let back = isogeny_apply(&pair, Isogeny::PhiHat, &image, m).unwrap();
            let (a, b) = isogeny_model(&pair, Isogeny::Phi, m);
            assert_eq!(back, double(&a, &b, &pt), "M={m}");
            checked += 1;
        }
        assert!(checked >= 2, "too few twists with a small point");
        assert!(isogeny_apply(&pair, Isogeny::Phi, &RationalPoint::affine(q(1), q(1)), 1).is_err());
    }
}
