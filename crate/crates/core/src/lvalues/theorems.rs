use super::twist::{lalg_twist, TwistLValue};
use super::CurveData;
use crate::arith::{valuation_i64, Ord2};
use crate::curves::TwistDescriptor;
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// The six non-vanishing and lower-bound statements for twisted values.
///
/// * `T1`: negative discriminant, `E[2](Q) = 0`, `ord_2 L^(alg)(E) = 0`, all
///   twisting primes inert in the cubic field; asserts `ord_2 = 0`.
/// * `T1-1`: the positive-discriminant analogue with `ord_2 L^(alg)(E) = 1`
///   and `M > 0`; asserts `ord_2 = 1`.
/// * `T2`: negative discriminant, `M = +-q`, `ord_2 N_q = -ord_2 L^(alg)(E) != 0`;
///   asserts `ord_2 = 0`.
/// * `T2-1`: positive discriminant, `M = q = 1 mod 4`,
///   `ord_2 N_q = 1 - ord_2 L^(alg)(E) != 0`; asserts `ord_2 = 1`.
/// * `T3`: negative discriminant, some `q | M` with
///   `ord_2 N_q > -ord_2 L^(alg)(E)`; asserts `ord_2 >= 1`.
/// * `T3-1`: positive discriminant; asserts `ord_2 >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    #[serde(rename = "T1")]
    T1,
    #[serde(rename = "T1-1")]
    T1_1,
    #[serde(rename = "T2")]
    T2,
    #[serde(rename = "T2-1")]
    T2_1,
    #[serde(rename = "T3")]
    T3,
    #[serde(rename = "T3-1")]
    T3_1,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] =
        [TheoremId::T1, TheoremId::T1_1, TheoremId::T2, TheoremId::T2_1, TheoremId::T3, TheoremId::T3_1];

    /// The asserted conclusion as text.
    pub fn claim(self) -> &'static str {
        match self {
            TheoremId::T1 | TheoremId::T2 => "ord2 = 0",
            TheoremId::T1_1 | TheoremId::T2_1 => "ord2 = 1",
            TheoremId::T3 | TheoremId::T3_1 => "ord2 >= 1",
        }
    }

    fn conclusion(self, ord: Ord2) -> bool {
        match self {
            TheoremId::T1 | TheoremId::T2 => ord == Ord2::Finite(0),
            TheoremId::T1_1 | TheoremId::T2_1 => ord == Ord2::Finite(1),
            TheoremId::T3 | TheoremId::T3_1 => ord.finite().is_none_or(|v| v >= 1),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremId::T1 => "T1",
            TheoremId::T1_1 => "T1-1",
            TheoremId::T2 => "T2",
            TheoremId::T2_1 => "T2-1",
            TheoremId::T3 => "T3",
            TheoremId::T3_1 => "T3-1",
        })
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub hypotheses_met: bool,
    /// `None` when the hypotheses fail.
    pub conclusion_holds: Option<bool>,
    pub ord2: Ord2,
}

fn hypotheses(cd: &CurveData, id: TheoremId, twist: &TwistDescriptor) -> Result<bool> {
    let neg = cd.curve.disc_sign() < 0;
    let lord = cd.lalg.ord2.finite();
    let all_inert = || twist.primes.iter().all(|&q| cd.inert_in_f(q) == Some(true));
    let ord_nq = |q: u64| -> Result<i64> {
        Ok(valuation_i64(cd.curve.n_q(q)?, 2).map_or(i64::MAX, |v| v as i64))
    };
    Ok(match id {
        TheoremId::T1 => neg && !cd.has_rational_two_torsion() && lord == Some(0) && all_inert(),
        TheoremId::T1_1 => {
            !neg && !cd.has_rational_two_torsion() && lord == Some(1) && twist.m > 0 && all_inert()
        }
        TheoremId::T2 => match (lord, twist.primes.as_slice()) {
            (Some(l), &[q]) if neg => {
                let o = ord_nq(q)?;
                o == -l && o != 0
            }
            _ => false,
        },
        TheoremId::T2_1 => match (lord, twist.primes.as_slice()) {
            (Some(l), &[q]) if !neg && twist.m > 0 && q % 4 == 1 => {
                let o = ord_nq(q)?;
                o == 1 - l && o != 0
            }
            _ => false,
        },
        TheoremId::T3 => match lord {
            Some(l) if neg => {
                let mut any = false;
                for &q in &twist.primes {
                    any |= ord_nq(q)? > -l;
                }
                any
            }
            _ => false,
        },
        TheoremId::T3_1 => !neg && lord.is_some(),
    })
}

/// Verdict for one theorem on one twist, given its computed value.
pub(crate) fn verdict_with(
    cd: &CurveData,
    id: TheoremId,
    twist: &TwistDescriptor,
    value: &TwistLValue,
) -> Result<TheoremVerdict> {
    let met = hypotheses(cd, id, twist)?;
    let ord2 = value.lalg.ord2;
    Ok(TheoremVerdict {
        theorem: id,
        hypotheses_met: met,
        conclusion_holds: met.then(|| id.conclusion(ord2)),
        ord2,
    })
}

/// Check the hypotheses of `id` on `(E, M)` and, when they hold, compare the
/// exact twisted value against the asserted 2-adic order.
pub fn verify_theorem(cd: &CurveData, id: TheoremId, twist: &TwistDescriptor) -> Result<TheoremVerdict> {
    let value = lalg_twist(cd, twist)?;
    verdict_with(cd, id, twist, &value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::parse_curve;

    fn data(label: &str) -> CurveData {
        CurveData::new(&parse_curve(label).unwrap(), None).unwrap()
    }

    #[test]
    fn examples() {
        let cd = data("11a1");
        let v = verify_theorem(&cd, TheoremId::T1, &TwistDescriptor::new(-15, 11).unwrap()).unwrap();
        assert!(v.hypotheses_met);
        assert_eq!(v.conclusion_holds, Some(true));
        let cd = data("37b1");
        let v = verify_theorem(&cd, TheoremId::T3_1, &TwistDescriptor::new(5, 37).unwrap()).unwrap();
        assert_eq!(v.conclusion_holds, Some(true));
        let cd = data("17a1");
        let v = verify_theorem(&cd, TheoremId::T1, &TwistDescriptor::new(-3, 17).unwrap()).unwrap();
        assert!(!v.hypotheses_met);
        assert_eq!(v.conclusion_holds, None);
        let v = verify_theorem(&cd, TheoremId::T2, &TwistDescriptor::new(-3, 17).unwrap()).unwrap();
        assert_eq!(v.conclusion_holds, Some(true));
    }

    #[test]
    fn ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.to_string().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!(serde_json::to_string(&TheoremId::T2_1).unwrap(), "\"T2-1\"");
    }
}
