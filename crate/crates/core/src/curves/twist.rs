use super::{invariants, CurveModel};
use crate::arith::{factor, is_squarefree, kronecker, valuation_i64};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// A square-free twisting parameter `M = epsilon * q_1 ... q_r` with
/// `M = 1 mod 4`, coprime to a fixed conductor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDescriptor {
    pub m: i64,
    pub epsilon: i32,
    pub primes: Vec<u64>,
}

impl TwistDescriptor {
    pub fn new(m: i64, conductor: u64) -> Result<Self> {
        if m == 0 || m == 1 {
            return Err(Error::InvalidInput(format!("twist parameter {m} is trivial")));
        }
        if !is_squarefree(m) {
            return Err(Error::InvalidInput(format!("{m} is not square-free")));
        }
        if m.rem_euclid(4) != 1 {
            return Err(Error::InvalidInput(format!("{m} is not 1 mod 4")));
        }
        let primes: Vec<u64> = factor(m.unsigned_abs()).into_iter().map(|(p, _)| p).collect();
        if let Some(q) = primes.iter().find(|&&q| conductor % q == 0) {
            return Err(Error::InvalidInput(format!(
                "{m} shares the prime {q} with the conductor {conductor}"
            )));
        }
        Ok(TwistDescriptor { m, epsilon: m.signum() as i32, primes })
    }

    pub fn r(&self) -> usize {
        self.primes.len()
    }

    /// `|M|`.
    pub fn modulus(&self) -> u64 {
        self.m.unsigned_abs()
    }

    /// The quadratic character `k -> (M/k)`.
    pub fn chi(&self, k: i64) -> i32 {
        if k == 0 {
            return if self.modulus() == 1 { 1 } else { 0 };
        }
        kronecker(self.m, k.abs()) * if k < 0 { self.epsilon } else { 1 }
    }

    pub fn factorization_string(&self) -> String {
        let body: Vec<String> = self.primes.iter().map(|q| q.to_string()).collect();
        let sign = if self.epsilon < 0 { "-" } else { "" };
        format!("{sign}{}", body.join("*"))
    }
}

/// Minimal model of the twist of `curve` by the square-free integer `m`.
pub(crate) fn twist_model(curve: &CurveModel, m: i64) -> Result<CurveModel> {
    if m == 0 || m == 1 {
        return Err(Error::InvalidInput(format!("twist parameter {m} is trivial")));
    }
    if !is_squarefree(m) {
        return Err(Error::InvalidInput(format!("{m} is not square-free")));
    }
    let inv = invariants(curve.coefficients());
    let mb = BigInt::from(m);
    let raw = [
        BigInt::from(0),
        BigInt::from(0),
        BigInt::from(0),
        -27 * &inv.c4 * &mb * &mb,
        -54 * &inv.c6 * &mb * &mb * &mb,
    ];
    let base_conductor = curve.conductor();
    let label = curve.label().map(|l| format!("{l}^({m})"));
    let additive = |p: u64| -> Option<u32> {
        let unramified = match p {
            2 => m.rem_euclid(4) == 1,
            _ => m % 3 != 0,
        };
        let base = valuation_i64(base_conductor as i64, p).unwrap_or(0);
        if unramified {
            Some(base)
        } else if p == 3 && base <= 1 {
            Some(2)
        } else {
            None
        }
    };
    CurveModel::minimalize_with(raw, label, &additive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn e11() -> CurveModel {
        CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap()
    }

    #[test]
    fn descriptor_validation() {
        assert!(TwistDescriptor::new(-15, 11).is_ok());
        assert!(TwistDescriptor::new(-1, 11).is_err());
        assert!(TwistDescriptor::new(5, 11).is_ok());
        assert!(TwistDescriptor::new(-11 * 3, 11).is_err());
        assert!(TwistDescriptor::new(45, 11).is_err());
        let t = TwistDescriptor::new(-15, 11).unwrap();
        assert_eq!(t.primes, vec![3, 5]);
        assert_eq!(t.epsilon, -1);
        assert_eq!(t.chi(3), 0);
        assert_eq!(t.chi(2), kronecker(-15, 2));
    }

    #[test]
    fn twist_is_involution() {
        let e = e11();
        for m in [-3, 5, -7, 13, -15, 21] {
            let t = e.twist(m).unwrap();
            assert_eq!(t.conductor(), 11 * (m * m) as u64, "M={m}");
            let back = t.twist(m).unwrap();
            assert_eq!(back.coefficients(), e.coefficients());
        }
    }

    #[test]
    fn twisted_traces() {
        let e = e11();
        let t = e.twist(-7).unwrap();
        assert_eq!(t.a_p(3).unwrap(), 1);
        for q in primes_up_to(300).into_iter().filter(|&q| q > 7 && q != 11) {
            let chi = kronecker(-7, q as i64) as i64;
            assert_eq!(t.a_p(q).unwrap(), chi * e.a_p(q).unwrap(), "q={q}");
        }
    }

    #[test]
    fn ns_twist_conductor() {
        let a = CurveModel::from_i64([1, -1, 0, 4, -3]).unwrap();
        assert_eq!(a.twist(-7).unwrap().conductor(), 73 * 49);
        assert_eq!(a.twist(57).unwrap().conductor(), 73 * 57 * 57);
    }
}
