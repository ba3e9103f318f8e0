use crate::outcome::Outcome;
use crate::{Ctx, Format, ScanArgs};
use ec2part::analytic::{coefficients, compare, lseries_at_one, required_terms, Verdict};
use ec2part::arith::{rational_string, Ord2};
use ec2part::curves::{parse_curve, TwistDescriptor};
use ec2part::lvalues::{
    lalg_twist, sum_triple, CurveData, PrimeFilter, ReportOptions, TheoremId, TheoremVerdict, TwistReport,
};
use ec2part::scan::{family, run_scan, FamilySpec, ScanSummary};
use ec2part::{Error, Result};
use serde::Serialize;
use serde_json::json;
use std::io::Write;

pub fn emit(out: &mut dyn Write, line: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
}

pub fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    emit(out, s)
}

pub fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(out)
}

pub fn csv_row(w: &mut csv::Writer<&mut dyn Write>, row: &[String]) -> Result<()> {
    w.write_record(row).map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
}

fn no_csv(ctx: &Ctx, command: &str) -> Result<()> {
    if ctx.format == Format::Csv {
        return Err(Error::Unsupported(format!("`{command}` has no CSV output")));
    }
    Ok(())
}

pub fn load(ctx: &Ctx, curve: &str) -> Result<CurveData> {
    let model = parse_curve(curve)?;
    CurveData::new(&model, ctx.settings.cache_dir.as_deref())
}

fn model_string(cd: &CurveData) -> String {
    let a: Vec<String> = cd.curve.coefficients().iter().map(|c| c.to_string()).collect();
    format!("[{}]", a.join(","))
}

pub fn info(ctx: &Ctx, curve: &str, an: Option<u64>, out: &mut dyn Write) -> Result<Outcome> {
    no_csv(ctx, "info")?;
    let cd = load(ctx, curve)?;
    let torsion = cd.curve.torsion_order()?;
    let coeffs = an.map(|n| coefficients(&cd.curve, n)).transpose()?;
    let an_list: Option<Vec<(u64, i64)>> = coeffs.as_ref().map(|c| (1..=c.len()).map(|n| (n, c.get(n))).collect());
    match ctx.format {
        Format::Json => emit_json(
            out,
            &json!({
                "curve": cd.curve.name(),
                "model": model_string(&cd),
                "conductor": cd.level(),
                "discriminant": cd.curve.disc().to_string(),
                "torsion_order": torsion,
                "two_division_cubic": cd.two_division.cubic_string(),
                "two_division_irreducible": cd.two_division.is_irreducible,
                "lattice_type": cd.periods.lattice_type,
                "omega_plus": cd.periods.omega_plus,
                "omega_minus": cd.periods.omega_minus,
                "root_number": cd.root_number,
                "lalg": cd.lalg,
                "an": an_list,
            }),
        )?,
        _ => {
            emit(out, format!("curve          {}", cd.curve.name()))?;
            emit(out, format!("model          {}", model_string(&cd)))?;
            emit(out, format!("conductor      {}", cd.level()))?;
            emit(out, format!("discriminant   {}", cd.curve.disc()))?;
            emit(out, format!("torsion        {torsion}"))?;
            emit(
                out,
                format!(
                    "2-division     {} ({})",
                    cd.two_division.cubic_string(),
                    if cd.two_division.is_irreducible { "irreducible" } else { "reducible" }
                ),
            )?;
            emit(out, format!("lattice type   {}", cd.periods.lattice_type))?;
            emit(out, format!("omega+         {:.15}", cd.periods.omega_plus))?;
            emit(out, format!("omega-         {:.15}", cd.periods.omega_minus))?;
            emit(out, format!("root number    {}", cd.root_number))?;
            emit(out, format!("lalg           {}", cd.lalg))?;
            for (n, a) in an_list.unwrap_or_default() {
                emit(out, format!("a_{n} = {a}"))?;
            }
        }
    }
    Ok(Outcome::Verified)
}

/// `lalg * omega` against the series for the twist by `m` (1 for the curve
/// itself), with `--terms` overriding the term count.
fn numeric(ctx: &Ctx, cd: &CurveData, m: i64, root_number: i32, exact: f64, tol: f64) -> Result<Verdict> {
    if root_number == -1 {
        return Ok(compare(exact, 0.0, tol));
    }
    let conductor = cd.level() * m.unsigned_abs().pow(2);
    let target = (1e-3 * tol * exact.abs()).max(1e-15);
    let n = ctx.settings.terms.unwrap_or_else(|| required_terms(conductor, target));
    let coeffs = coefficients(&cd.curve, n)?;
    let l = lseries_at_one(&coeffs, m, conductor, 1, n, target)?;
    Ok(compare(exact, l.value, tol))
}

#[derive(Serialize)]
struct LalgRow {
    curve: String,
    m: i64,
    value: String,
    ord2: Ord2,
    root_number: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    bridge_exponent: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sums: Option<ec2part::lvalues::SumTriple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<Verdict>,
}

pub fn lalg(ctx: &Ctx, curve: &str, twists: &[i64], sums: bool, out: &mut dyn Write) -> Result<Outcome> {
    let cd = load(ctx, curve)?;
    let mut rows = Vec::new();
    if twists.is_empty() {
        let numeric = ctx
            .settings
            .tol
            .map(|tol| numeric(ctx, &cd, 1, cd.root_number, cd.lalg.to_f64() * cd.periods.omega_plus, tol))
            .transpose()?;
        rows.push(LalgRow {
            curve: cd.curve.name(),
            m: 1,
            value: rational_string(&cd.lalg.value),
            ord2: cd.lalg.ord2,
            root_number: cd.root_number,
            bridge_exponent: None,
            sums: None,
            numeric,
        });
    }
    for &m in twists {
        let t = TwistDescriptor::new(m, cd.level())?;
        let tv = lalg_twist(&cd, &t)?;
        let numeric = ctx
            .settings
            .tol
            .map(|tol| numeric(ctx, &cd, m, tv.root_number, tv.lalg.to_f64() * tv.omega_twist, tol))
            .transpose()?;
        rows.push(LalgRow {
            curve: cd.curve.name(),
            m,
            value: rational_string(&tv.lalg.value),
            ord2: tv.lalg.ord2,
            root_number: tv.root_number,
            bridge_exponent: Some(tv.bridge_exponent),
            sums: if sums { Some(sum_triple(&cd, t.modulus())?) } else { None },
            numeric,
        });
    }
    let outcome = if rows.iter().any(|r| r.numeric.is_some_and(|v| !v.pass)) { Outcome::Failed } else { Outcome::Verified };
    match ctx.format {
        Format::Json => {
            for r in &rows {
                emit_json(out, r)?;
            }
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            csv_row(&mut w, &["curve", "m", "lalg", "ord2", "root_number", "bridge_exponent", "numeric_pass"].map(String::from))?;
            for r in &rows {
                csv_row(
                    &mut w,
                    &[
                        r.curve.clone(),
                        r.m.to_string(),
                        r.value.clone(),
                        r.ord2.to_string(),
                        r.root_number.to_string(),
                        r.bridge_exponent.map(|j| j.to_string()).unwrap_or_default(),
                        r.numeric.map(|v| v.pass.to_string()).unwrap_or_default(),
                    ],
                )?;
            }
        }
        Format::Text => {
            for r in &rows {
                let mut line = format!("{} M={} lalg={} ord2={} w={}", r.curve, r.m, r.value, r.ord2, r.root_number);
                if let Some(j) = r.bridge_exponent {
                    line += &format!(" j={j}");
                }
                if let Some(s) = &r.sums {
                    line += &format!(" ord2(S')={} ord2(S'')={}", s.ord2_s_prime(), s.ord2_s_chi());
                }
                if let Some(v) = r.numeric {
                    line += &format!(" numeric={:.12} rel={:.1e} {}", v.numeric, v.discrepancy, if v.pass { "ok" } else { "MISMATCH" });
                }
                emit(out, line)?;
            }
        }
    }
    Ok(outcome)
}

pub fn primes(ctx: &Ctx, curve: &str, filter: &str, bound: u64, out: &mut dyn Write) -> Result<Outcome> {
    let cd = load(ctx, curve)?;
    let f: PrimeFilter = filter.parse()?;
    let list = f.select(&cd, bound)?;
    match ctx.format {
        Format::Json => emit_json(
            out,
            &json!({ "curve": cd.curve.name(), "filter": f.to_string(), "bound": bound, "primes": list }),
        )?,
        Format::Csv => {
            let mut w = csv_writer(out);
            csv_row(&mut w, &["q".to_string()])?;
            for q in &list {
                csv_row(&mut w, &[q.to_string()])?;
            }
        }
        Format::Text => {
            let s: Vec<String> = list.iter().map(|q| q.to_string()).collect();
            emit(out, s.join(", "))?;
        }
    }
    Ok(Outcome::Verified)
}

fn verdict_word(v: &TheoremVerdict) -> &'static str {
    match v.conclusion_holds {
        None => "skipped",
        Some(true) => "held",
        Some(false) => "FAILED",
    }
}

fn report_outcome(r: &Result<TwistReport>) -> Outcome {
    match r {
        Err(e) => Outcome::of_error(e),
        Ok(rep) => {
            if rep.verdicts.values().any(|v| v.conclusion_holds == Some(false)) {
                Outcome::Alarming
            } else if rep.numeric.is_some_and(|v| !v.pass) {
                Outcome::Failed
            } else if !rep.verdicts.is_empty() && rep.verdicts.values().all(|v| !v.hypotheses_met) {
                Outcome::Skipped
            } else {
                Outcome::Verified
            }
        }
    }
}

pub fn scan(ctx: &Ctx, args: &ScanArgs, out: &mut dyn Write) -> Result<Outcome> {
    let cd = load(ctx, &args.curve)?;
    let filter: PrimeFilter = args.filter.parse()?;
    let theorems = if args.theorems.is_empty() {
        TheoremId::ALL.to_vec()
    } else {
        args.theorems.iter().map(|t| t.parse()).collect::<Result<Vec<TheoremId>>>()?
    };
    let spec = FamilySpec {
        primes: filter.select(&cd, args.bound)?,
        min_r: args.min_r,
        max_r: args.max_r,
        sign: args.sign_rule()?,
        max_abs_m: args.max_m,
    };
    let twists = family(&spec, cd.level())?;
    let opts = ReportOptions { theorems, with_sums: args.sums, numeric_tol: ctx.settings.tol };
    let results = run_scan(&cd, &twists, &opts, None)?;
    let summary = ScanSummary::of(&results);
    let outcome = results.iter().map(report_outcome).max().unwrap_or(Outcome::Verified);

    match ctx.format {
        Format::Json => {
            for (t, r) in twists.iter().zip(&results) {
                match r {
                    Ok(rep) => emit_json(out, rep)?,
                    Err(e) => emit_json(out, &json!({ "m": t.m, "error": e.to_string() }))?,
                }
            }
            emit_json(out, &json!({ "summary": summary }))?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            let header = [
                "m", "factorization", "r", "lalg", "ord2", "root_number", "bridge_exponent", "tamagawa_ord2",
                "verdicts", "numeric_pass", "error",
            ];
            csv_row(&mut w, &header.map(String::from))?;
            for (t, r) in twists.iter().zip(&results) {
                let row = match r {
                    Ok(rep) => {
                        let verdicts: Vec<String> =
                            rep.verdicts.iter().map(|(id, v)| format!("{id}={}", verdict_word(v))).collect();
                        vec![
                            rep.m.to_string(),
                            rep.factorization.clone(),
                            rep.r.to_string(),
                            rational_string(&rep.lalg.value),
                            rep.lalg.ord2.to_string(),
                            rep.root_number.to_string(),
                            rep.bridge_exponent.to_string(),
                            rep.tamagawa_ord2.to_string(),
                            verdicts.join(";"),
                            rep.numeric.map(|v| v.pass.to_string()).unwrap_or_default(),
                            String::new(),
                        ]
                    }
                    Err(e) => {
                        let mut row = vec![t.m.to_string(), t.factorization_string(), t.r().to_string()];
                        row.extend(std::iter::repeat_n(String::new(), 7));
                        row.push(e.to_string());
                        row
                    }
                };
                csv_row(&mut w, &row)?;
            }
        }
        Format::Text => {
            for (t, r) in twists.iter().zip(&results) {
                match r {
                    Ok(rep) => {
                        let mut line = format!(
                            "M={} ({}) lalg={} ord2={} w={}",
                            rep.m,
                            rep.factorization,
                            rational_string(&rep.lalg.value),
                            rep.lalg.ord2,
                            rep.root_number
                        );
                        for (id, v) in &rep.verdicts {
                            line += &format!(" {id}:{}", verdict_word(v));
                        }
                        if let Some(v) = rep.numeric {
                            line += if v.pass { " numeric:ok" } else { " numeric:MISMATCH" };
                        }
                        emit(out, line)?;
                    }
                    Err(e) => emit(out, format!("M={} error: {e}", t.m))?,
                }
            }
            emit(
                out,
                format!(
                    "twists {}, hypotheses met {}, conclusions held {}, failed {}, numeric failed {}, errors {}",
                    summary.twists,
                    summary.hypotheses_met,
                    summary.conclusions_held,
                    summary.conclusions_failed,
                    summary.numeric_failed,
                    summary.errors
                ),
            )?;
        }
    }
    Ok(outcome)
}
