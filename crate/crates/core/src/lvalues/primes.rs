use super::CurveData;
use crate::arith::{kronecker, primes_up_to};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// One condition on an odd prime `q` of good reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PrimePredicate {
    /// Inert in the cubic field of the 2-division polynomial.
    InertInF,
    /// `q = residue mod modulus`.
    Residue { modulus: u64, residue: u64 },
    /// `(d / q) = -1`: inert in `Q(sqrt d)`.
    InertIn(i64),
    /// `(d / q) = 1`: split in `Q(sqrt d)`.
    SplitIn(i64),
}

impl PrimePredicate {
    fn holds(&self, cd: &CurveData, q: u64) -> Result<bool> {
        Ok(match *self {
            PrimePredicate::InertInF => {
                if cd.has_rational_two_torsion() {
                    return Err(Error::Unsupported(format!(
                        "{} has a rational 2-torsion point, so its 2-division cubic is reducible",
                        cd.curve.name()
                    )));
                }
                cd.inert_in_f(q) == Some(true)
            }
            PrimePredicate::Residue { modulus, residue } => q % modulus == residue,
            PrimePredicate::InertIn(d) => kronecker(d, q as i64) == -1,
            PrimePredicate::SplitIn(d) => kronecker(d, q as i64) == 1,
        })
    }
}

impl fmt::Display for PrimePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimePredicate::InertInF => write!(f, "inert-f"),
            PrimePredicate::Residue { modulus, residue } => write!(f, "{residue}mod{modulus}"),
            PrimePredicate::InertIn(d) => write!(f, "inert:{d}"),
            PrimePredicate::SplitIn(d) => write!(f, "split:{d}"),
        }
    }
}

impl FromStr for PrimePredicate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown prime predicate `{s}`"));
        let s = s.trim();
        if s == "inert-f" {
            return Ok(PrimePredicate::InertInF);
        }
        if let Some(d) = s.strip_prefix("inert:") {
            return d.parse().map(PrimePredicate::InertIn).map_err(|_| bad());
        }
        if let Some(d) = s.strip_prefix("split:") {
            return d.parse().map(PrimePredicate::SplitIn).map_err(|_| bad());
        }
        if let Some((r, m)) = s.split_once("mod") {
            let (residue, modulus): (u64, u64) =
                (r.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?);
            if modulus == 0 || residue >= modulus {
                return Err(bad());
            }
            return Ok(PrimePredicate::Residue { modulus, residue });
        }
        Err(bad())
    }
}

/// A conjunction of predicates, written comma-separated, e.g.
/// `3mod4,inert:17`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PrimeFilter(pub Vec<PrimePredicate>);

impl PrimeFilter {
    /// Odd primes `q <= bound` of good reduction satisfying every predicate.
    pub fn select(&self, cd: &CurveData, bound: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for q in primes_up_to(bound) {
            if q == 2 || cd.level() % q == 0 {
                continue;
            }
            let mut ok = true;
            for p in &self.0 {
                if !p.holds(cd, q)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(q);
            }
        }
        Ok(out)
    }
}

impl FromStr for PrimeFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(PrimeFilter)
    }
}

impl fmt::Display for PrimeFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}
