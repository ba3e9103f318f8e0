use super::CurveData;
use crate::arith::{factor, is_squarefree, kronecker, squarefree_divisors, Ord2};
use crate::error::{Error, Result};
use crate::modsym::SymbolPair;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// The sums `S_m`, `S'_m` and the character sum `S''_m` of `{0, k/m}` over
/// `k = 1..m`, in period units.
///
/// The character is `k -> (m*/k)` with `m* = +-m = 1 mod 4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumTriple {
    pub m: u64,
    pub s: SymbolPair,
    pub s_prime: SymbolPair,
    pub s_chi: SymbolPair,
    pub chi_modulus: i64,
}

impl SumTriple {
    /// `ord_2(S'_m / Omega^+)`.
    pub fn ord2_s_prime(&self) -> Ord2 {
        Ord2::of(&self.s_prime.x_plus)
    }

    /// 2-adic order of the surviving component of `S''_m`: real for an even
    /// character, imaginary for an odd one.
    pub fn ord2_s_chi(&self) -> Ord2 {
        if self.chi_modulus > 0 {
            Ord2::of(&self.s_chi.x_plus)
        } else {
            Ord2::of(&self.s_chi.x_minus)
        }
    }
}

fn zero_pair() -> SymbolPair {
    SymbolPair { x_plus: BigRational::zero(), x_minus: BigRational::zero() }
}

fn add_scaled(acc: &mut SymbolPair, v: &SymbolPair, c: i64) {
    let c = BigRational::from_integer(c.into());
    acc.x_plus += &v.x_plus * &c;
    acc.x_minus += &v.x_minus * &c;
}

fn check_modulus(cd: &CurveData, m: u64) -> Result<()> {
    if m <= 1 || m % 2 == 0 || !is_squarefree(m as i64) || m.gcd(&cd.level()) != 1 {
        return Err(Error::InvalidInput(format!(
            "{m} must be odd, square-free, > 1 and coprime to {}",
            cd.level()
        )));
    }
    Ok(())
}

pub fn sum_triple(cd: &CurveData, m: u64) -> Result<SumTriple> {
    check_modulus(cd, m)?;
    let mi = m as i64;
    let chi_modulus = if mi % 4 == 1 { mi } else { -mi };
    let (mut s, mut s_prime, mut s_chi) = (zero_pair(), zero_pair(), zero_pair());
    for k in 1..=mi {
        let v = cd.symbol(k, mi)?;
        add_scaled(&mut s, &v, 1);
        if k.gcd(&mi) == 1 {
            add_scaled(&mut s_prime, &v, 1);
            add_scaled(&mut s_chi, &v, kronecker(chi_modulus, k) as i64);
        }
    }
    Ok(SumTriple { m, s, s_prime, s_chi, chi_modulus })
}

fn primes_of(m: u64) -> Vec<u64> {
    factor(m).into_iter().map(|(p, _)| p).collect()
}

/// `S_m` for any positive `m` coprime to the level (`S_1 = 0`).
fn s_full(cd: &CurveData, m: u64) -> Result<SymbolPair> {
    let mut acc = zero_pair();
    for k in 1..=m as i64 {
        add_scaled(&mut acc, &cd.symbol(k, m as i64)?, 1);
    }
    Ok(acc)
}

fn s_coprime(cd: &CurveData, m: u64) -> Result<SymbolPair> {
    let mut acc = zero_pair();
    for k in (1..=m as i64).filter(|k| k.gcd(&(m as i64)) == 1) {
        add_scaled(&mut acc, &cd.symbol(k, m as i64)?, 1);
    }
    Ok(acc)
}

/// Both sides of the divisor identity
/// `sum_{l|m} S_l = sum_d 2^(r-d) sum_{n|m, r(n)=d} S'_n`.
pub fn lemma_two_identity(cd: &CurveData, m: u64) -> Result<(SymbolPair, SymbolPair)> {
    check_modulus(cd, m)?;
    let primes = primes_of(m);
    let r = primes.len() as u32;
    let (mut lhs, mut rhs) = (zero_pair(), zero_pair());
    for l in squarefree_divisors(&primes) {
        add_scaled(&mut lhs, &s_full(cd, l)?, 1);
        if l > 1 {
            let d = primes_of(l).len() as u32;
            add_scaled(&mut rhs, &s_coprime(cd, l)?, 1i64 << (r - d));
        }
    }
    Ok((lhs, rhs))
}

/// `(prod (1+q_i) - prod a_{q_i}) L^(alg) = -sum_{l|m} S_l / Omega^+`, exactly.
pub fn identity_holds(cd: &CurveData, m: u64) -> Result<bool> {
    check_modulus(cd, m)?;
    let primes = primes_of(m);
    let mut p1 = BigRational::one();
    let mut pa = BigRational::one();
    for &q in &primes {
        p1 *= BigRational::from_integer((q as i64 + 1).into());
        pa *= BigRational::from_integer(cd.curve.a_p(q)?.into());
    }
    let (lhs, _) = lemma_two_identity(cd, m)?;
    Ok((p1 - pa) * &cd.lalg.value == -lhs.x_plus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LemmaId {
    #[serde(rename = "L2.2")]
    DivisorSum,
    #[serde(rename = "L2.3")]
    OddCounts,
    #[serde(rename = "L2.4")]
    HalfLevel,
    #[serde(rename = "L2.5")]
    LowerBound,
}

impl LemmaId {
    pub const ALL: [LemmaId; 4] =
        [LemmaId::DivisorSum, LemmaId::OddCounts, LemmaId::HalfLevel, LemmaId::LowerBound];
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::DivisorSum => "L2.2",
            LemmaId::OddCounts => "L2.3",
            LemmaId::HalfLevel => "L2.4",
            LemmaId::LowerBound => "L2.5",
        })
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown lemma `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub lemma: LemmaId,
    pub m: u64,
    pub hypotheses_met: bool,
    /// `None` when the hypotheses fail.
    pub holds: Option<bool>,
    pub ord2_s_prime: Ord2,
}

/// Check one lemma instance. Hypotheses are evaluated, never assumed.
pub fn check_lemma(cd: &CurveData, lemma: LemmaId, m: u64) -> Result<LemmaCheck> {
    check_modulus(cd, m)?;
    let primes = primes_of(m);
    let l_ord = cd.lalg.ord2.finite();
    let nq: Vec<i64> = primes.iter().map(|&q| cd.curve.n_q(q)).collect::<Result<_>>()?;
    let ord_n = |n: i64| Ord2::of(&BigRational::from_integer(n.into())).finite();
    let hypotheses_met = match lemma {
        LemmaId::DivisorSum => true,
        LemmaId::OddCounts => {
            l_ord.is_some() && !cd.has_rational_two_torsion() && nq.iter().all(|n| n % 2 != 0)
        }
        LemmaId::HalfLevel => {
            l_ord == Some(-1)
                && primes.iter().zip(&nq).all(|(q, n)| q % 4 == 3 && n.rem_euclid(4) == 2)
        }
        LemmaId::LowerBound => {
            l_ord.is_some_and(|lo| nq.iter().any(|&n| ord_n(n).is_some_and(|o| o + lo > 0)))
        }
    };
    let s_prime = s_coprime(cd, m)?;
    let ord2_s_prime = Ord2::of(&s_prime.x_plus);
    let holds = if !hypotheses_met {
        None
    } else {
        Some(match lemma {
            LemmaId::DivisorSum => {
                let (lhs, rhs) = lemma_two_identity(cd, m)?;
                lhs == rhs
            }
            LemmaId::OddCounts => ord2_s_prime == cd.lalg.ord2,
            LemmaId::HalfLevel => ord2_s_prime == Ord2::Finite(primes.len() as i64 - 1),
            LemmaId::LowerBound => match ord2_s_prime {
                Ord2::Infinite => true,
                Ord2::Finite(v) => v >= 1,
            },
        })
    };
    Ok(LemmaCheck { lemma, m, hypotheses_met, holds, ord2_s_prime })
}
