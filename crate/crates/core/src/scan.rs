//! Twist families `M = epsilon q_1 ... q_r` and batch evaluation over them.

use crate::analytic::{coefficients, required_terms};
use crate::curves::TwistDescriptor;
use crate::error::{Error, Result};
use crate::lvalues::{twist_report, CurveData, ReportOptions, TwistReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the sign of `M` is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    /// The unique sign making `M = 1 mod 4`.
    #[default]
    Auto,
    /// Only products that are already `1 mod 4`.
    Positive,
    /// Only products whose negative is `1 mod 4`.
    Negative,
}

/// A family of twists built from a list of primes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub primes: Vec<u64>,
    pub min_r: usize,
    pub max_r: usize,
    #[serde(default)]
    pub sign: SignRule,
    /// Upper bound on `|M|`.
    pub max_abs_m: Option<u64>,
}

/// Largest `|M|` a scan accepts.
pub const MAX_ABS_M: u64 = 10_000_000;

/// All twist parameters of the family, sorted by `|M|` then sign.
pub fn family(spec: &FamilySpec, conductor: u64) -> Result<Vec<TwistDescriptor>> {
    let bound = spec.max_abs_m.unwrap_or(MAX_ABS_M);
    if bound > MAX_ABS_M {
        return Err(Error::Capacity(format!("|M| bound {bound} exceeds {MAX_ABS_M}")));
    }
    let mut primes = spec.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u64, usize)> = vec![(0, 1, 0)];
    while let Some((start, prod, r)) = stack.pop() {
        if r >= spec.min_r.max(1) {
            let p = prod as i64;
            let m = match spec.sign {
                SignRule::Auto => Some(if p % 4 == 1 { p } else { -p }),
                SignRule::Positive => (p % 4 == 1).then_some(p),
                SignRule::Negative => (p % 4 == 3).then_some(-p),
            };
            if let Some(m) = m {
                if let Ok(t) = TwistDescriptor::new(m, conductor) {
                    out.push(t);
                }
            }
        }
        if r == spec.max_r {
            continue;
        }
        for (i, &q) in primes.iter().enumerate().skip(start) {
            if q == 2 || prod.saturating_mul(q) > bound {
                continue;
            }
            stack.push((i + 1, prod * q, r + 1));
        }
    }
    out.sort_by_key(|t| (t.modulus(), t.m));
    Ok(out)
}

/// Counts over a finished scan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub twists: usize,
    pub hypotheses_met: usize,
    pub conclusions_held: usize,
    pub conclusions_failed: usize,
    pub numeric_failed: usize,
    pub errors: usize,
}

impl ScanSummary {
    pub fn of(results: &[Result<TwistReport>]) -> Self {
        let mut s = ScanSummary { twists: results.len(), ..Default::default() };
        for r in results {
            match r {
                Err(_) => s.errors += 1,
                Ok(rep) => {
                    for v in rep.verdicts.values() {
                        if v.hypotheses_met {
                            s.hypotheses_met += 1;
                        }
                        match v.conclusion_holds {
                            Some(true) => s.conclusions_held += 1,
                            Some(false) => s.conclusions_failed += 1,
                            None => {}
                        }
                    }
                    if rep.numeric.is_some_and(|v| !v.pass) {
                        s.numeric_failed += 1;
                    }
                }
            }
        }
        s
    }
}

/// Evaluate every twist in order. Work is spread over `threads` workers (all
/// cores when `None`); output order is the order of `twists`.
pub fn run_scan(
    cd: &CurveData,
    twists: &[TwistDescriptor],
    opts: &ReportOptions,
    threads: Option<usize>,
) -> Result<Vec<Result<TwistReport>>> {
    if let (Some(_), Some(max)) = (opts.numeric_tol, twists.iter().map(|t| t.modulus()).max()) {
        // one shared a_n table long enough for the largest twisted conductor
        let conductor = cd.level() * max * max;
        coefficients(&cd.curve, required_terms(conductor, 1e-15))?;
    }
    let work = || twists.par_iter().map(|t| twist_report(cd, t, opts)).collect::<Vec<_>>();
    match threads {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(pool.install(work))
        }
    }
}
