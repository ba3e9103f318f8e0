use crate::commands::{csv_row, csv_writer, emit, emit_json};
use crate::outcome::Outcome;
use crate::{Ctx, Format};
use ec2part::arith::{is_squarefree, primes_up_to};
use ec2part::descent::{
    aq_ns, conjecture_scan, lalg_denominator_check, ns_curves, oracle_equivalence, selmer2, selmer_phi,
    selmer_phihat, tamagawa_ns, verify_thm_a, NsCurve, NsData, NsPair, Selmer2, SelmerDescriptor,
};
use ec2part::{Error, Result};
use serde_json::json;
use std::collections::BTreeMap;
use std::io::Write;

/// `key=value` arguments plus the one bare word naming the subcommand.
struct NsArgs {
    sub: Option<String>,
    kv: BTreeMap<String, String>,
}

impl NsArgs {
    fn parse(args: &[String]) -> Result<Self> {
        let mut sub = None;
        let mut kv = BTreeMap::new();
        for a in args {
            match a.split_once('=') {
                Some((k, v)) => {
                    if kv.insert(k.to_ascii_lowercase(), v.to_string()).is_some() {
                        return Err(Error::InvalidInput(format!("`{k}` given twice")));
                    }
                }
                None if sub.is_none() => sub = Some(a.clone()),
                None => return Err(Error::InvalidInput(format!("unexpected argument `{a}`"))),
            }
        }
        Ok(NsArgs { sub, kv })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.kv
            .get(key)
            .map(|v| v.parse().map_err(|_| Error::InvalidInput(format!("bad value `{v}` for `{key}`"))))
            .transpose()
    }

    fn need<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| Error::InvalidInput(format!("missing `{key}=`")))
    }

    fn only(&self, keys: &[&str]) -> Result<()> {
        match self.kv.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidInput(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// `a..b` (inclusive) or a comma-separated list.
fn parse_range(s: &str) -> Result<Vec<i64>> {
    let bad = || Error::InvalidInput(format!("bad range `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (i64, i64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        if b < a || b - a > 1_000_000 {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

pub fn run(ctx: &Ctx, grid: bool, args: &[String], out: &mut dyn Write) -> Result<Outcome> {
    let a = NsArgs::parse(args)?;
    if grid {
        if a.sub.is_some() {
            return Err(Error::InvalidInput("--grid takes only u= and M=".into()));
        }
        a.only(&["u", "m"])?;
        return run_grid(&parse_range(&a.need::<String>("u")?)?, &parse_range(&a.need::<String>("m")?)?, out);
    }
    let u: i64 = a.need("u")?;
    match a.sub.as_deref() {
        Some("descent") => {
            a.only(&["u", "m"])?;
            descent(ctx, &ns_curves(u)?, a.need("m")?, out)
        }
        Some("bsd") => {
            a.only(&["u", "q", "first"])?;
            let data = NsData::new(u, ctx.settings.cache_dir.as_deref())?;
            let qs = match (a.get::<u64>("q")?, a.get::<usize>("first")?) {
                (Some(q), None) => vec![q],
                (None, Some(n)) => first_qualifying(&data.pair, n),
                _ => return Err(Error::InvalidInput("bsd needs exactly one of q= or first=".into())),
            };
            bsd(ctx, &data, &qs, out)
        }
        Some("conjecture") => {
            a.only(&["u", "r", "bound"])?;
            let data = NsData::new(u, ctx.settings.cache_dir.as_deref())?;
            conjecture(ctx, &data, a.need("r")?, a.need("bound")?, out)
        }
        Some("aq") => {
            a.only(&["u", "bound"])?;
            aq(ctx, &ns_curves(u)?, a.get("bound")?.unwrap_or(500), out)
        }
        Some("denominator") => {
            a.only(&["u"])?;
            let data = NsData::new(u, ctx.settings.cache_dir.as_deref())?;
            let c = lalg_denominator_check(&data)?;
            match ctx.format {
                Format::Json => emit_json(out, &c)?,
                _ => emit(
                    out,
                    format!("p={} lalg={} a_2={} x+(1/2)={} holds={}", c.p, c.lalg, c.a2, c.half_symbol, c.holds),
                )?,
            }
            Ok(Outcome::Verified)
        }
        Some(s) => Err(Error::InvalidInput(format!("unknown ns subcommand `{s}`"))),
        None => Err(Error::InvalidInput(
            "ns needs one of descent, bsd, conjecture, aq, denominator or --grid".into(),
        )),
    }
}

fn first_qualifying(pair: &NsPair, n: usize) -> Vec<u64> {
    let mut bound = 100;
    loop {
        let qs = pair.three_mod_four_inert(bound);
        if qs.len() >= n {
            return qs.into_iter().take(n).collect();
        }
        bound *= 2;
    }
}

fn selmer2_text(s: &Selmer2) -> String {
    match s.order {
        Some(o) => o.to_string(),
        None => format!("{}..{}", s.lower, s.upper),
    }
}

fn group_text(s: &SelmerDescriptor) -> String {
    let e: Vec<String> = s.elements.iter().map(|d| d.to_string()).collect();
    format!("{{{}}} order {} (mod torsion {})", e.join(", "), s.order, s.quotient_order)
}

fn descent(ctx: &Ctx, pair: &NsPair, m: i64, out: &mut dyn Write) -> Result<Outcome> {
    let phi = selmer_phi(pair, m)?;
    let phihat = selmer_phihat(pair, m)?;
    let two = if m.rem_euclid(4) == 1 { Some(selmer2(pair, m)?) } else { None };
    let oracle = oracle_equivalence(pair, m)?;
    let tam_a = tamagawa_ns(pair, m, NsCurve::A)?;
    let tam_b = tamagawa_ns(pair, m, NsCurve::APrime)?;
    let outcome = if oracle.agrees() { Outcome::Verified } else { Outcome::Alarming };
    match ctx.format {
        Format::Json => emit_json(
            out,
            &json!({
                "pair": pair,
                "m": m,
                "phi": phi,
                "phihat": phihat,
                "selmer2_a": two.as_ref().map(|t| &t.0),
                "selmer2_a_prime": two.as_ref().map(|t| &t.1),
                "oracle": oracle,
                "tamagawa_a": tam_a,
                "tamagawa_a_prime": tam_b,
            }),
        )?,
        _ => {
            emit(out, format!("p={} u={} M={m}", pair.p, pair.u))?;
            emit(out, format!("S^phi(A^(M))       {}", group_text(&phi)))?;
            emit(out, format!("S^phihat(A'^(M))   {}", group_text(&phihat)))?;
            match &two {
                Some((a, b)) => {
                    emit(out, format!("Sel2(A^(M))/tors   {} (root number {})", selmer2_text(a), a.root_number))?;
                    emit(out, format!("Sel2(A'^(M))/tors  {}", selmer2_text(b)))?;
                }
                None => emit(out, "Sel2 not bounded: M is not 1 mod 4")?,
            }
            emit(
                out,
                format!(
                    "oracle             {} classes compared, {} mismatches",
                    oracle.compared,
                    oracle.mismatches.len()
                ),
            )?;
            emit(out, format!("tamagawa A^(M)     {:?}, components {}", tam_a.c, tam_a.real_components))?;
            emit(out, format!("tamagawa A'^(M)    {:?}, components {}", tam_b.c, tam_b.real_components))?;
        }
    }
    Ok(outcome)
}

fn bsd(ctx: &Ctx, data: &NsData, qs: &[u64], out: &mut dyn Write) -> Result<Outcome> {
    let mut outcome = Outcome::Verified;
    for &q in qs {
        match verify_thm_a(data, q) {
            Ok(l) => match ctx.format {
                Format::Json => emit_json(out, &l)?,
                _ => emit(
                    out,
                    format!(
                        "p={} M={} ord2(lalg)={} Sel2/tors={} c={:?} components={} torsion={} ord2(Sha): formula {} descent {} pass",
                        l.p,
                        l.m,
                        l.lalg_ord2,
                        l.selmer2_order,
                        l.tamagawa,
                        l.real_components,
                        l.torsion_order,
                        l.sha2_prediction,
                        l.descent_sha2
                    ),
                )?,
            },
            Err(e) => {
                let o = Outcome::of_error(&e);
                if o == Outcome::Failed {
                    return Err(e);
                }
                outcome = outcome.max(o);
                match ctx.format {
                    Format::Json => emit_json(out, &json!({ "p": data.pair.p, "q": q, "error": e.to_string() }))?,
                    _ => emit(out, format!("p={} q={q}: {e}", data.pair.p))?,
                }
            }
        }
    }
    Ok(outcome)
}

fn conjecture(ctx: &Ctx, data: &NsData, r: usize, bound: u64, out: &mut dyn Write) -> Result<Outcome> {
    let rows = conjecture_scan(data, r, bound)?;
    let outcome = rows
        .iter()
        .map(|row| match (row.hypothesis, row.conclusion) {
            (true, true) => Outcome::Verified,
            (true, false) => Outcome::Alarming,
            (false, _) => Outcome::Skipped,
        })
        .max()
        .unwrap_or(Outcome::Verified);
    match ctx.format {
        Format::Json => {
            for row in &rows {
                emit_json(out, row)?;
            }
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            let header = ["m", "primes", "ord2_base", "ord2_s_chi", "ord2_s_prime", "ord2_lalg_twist", "hypothesis", "conclusion"];
            csv_row(&mut w, &header.map(String::from))?;
            for row in &rows {
                let ps: Vec<String> = row.primes.iter().map(|q| q.to_string()).collect();
                csv_row(
                    &mut w,
                    &[
                        row.m.to_string(),
                        ps.join("*"),
                        row.ord2_base.to_string(),
                        row.ord2_s_chi.to_string(),
                        row.ord2_s_prime.to_string(),
                        row.ord2_lalg_twist.to_string(),
                        row.hypothesis.to_string(),
                        row.conclusion.to_string(),
                    ],
                )?;
            }
        }
        Format::Text => {
            for row in &rows {
                emit(
                    out,
                    format!(
                        "M={} ord2(S'')={} ord2(S')={} ord2(lalg)={} hypothesis={} conclusion={}",
                        row.m, row.ord2_s_chi, row.ord2_s_prime, row.ord2_lalg_twist, row.hypothesis, row.conclusion
                    ),
                )?;
            }
            emit(out, format!("{} twists", rows.len()))?;
        }
    }
    Ok(outcome)
}

fn aq(ctx: &Ctx, pair: &NsPair, bound: u64, out: &mut dyn Write) -> Result<Outcome> {
    let mut verdicts = Vec::new();
    for q in primes_up_to(bound.saturating_sub(1)) {
        match aq_ns(pair, q) {
            Ok(v) => verdicts.push(v),
            Err(e) => {
                emit(out, format!("p={} q={q}: {e}", pair.p))?;
                return Ok(Outcome::of_error(&e));
            }
        }
    }
    match ctx.format {
        Format::Json => {
            for v in &verdicts {
                emit_json(out, v)?;
            }
        }
        _ => emit(out, format!("p={}: a_q congruences hold for all {} primes q < {bound}", pair.p, verdicts.len()))?,
    }
    Ok(Outcome::Verified)
}

fn run_grid(us: &[i64], ms: &[i64], out: &mut dyn Write) -> Result<Outcome> {
    let pairs: Vec<NsPair> = us.iter().filter_map(|&u| ns_curves(u).ok()).collect();
    let mut w = csv_writer(out);
    let header = [
        "u", "p", "m", "root_number", "phi_order", "phihat_order", "selmer2_a", "selmer2_a_prime", "classes_compared",
        "oracle_agrees", "tamagawa_a", "tamagawa_a_prime",
    ];
    csv_row(&mut w, &header.map(String::from))?;
    let mut outcome = Outcome::Verified;
    for pair in &pairs {
        for &m in ms {
            let p = pair.p as i64;
            if m % 2 == 0 || m == 1 || m.rem_euclid(4) != 1 || !is_squarefree(m) || m % p == 0 {
                continue;
            }
            let row = (|| -> Result<Vec<String>> {
                let phi = selmer_phi(pair, m)?;
                let phihat = selmer_phihat(pair, m)?;
                let (a, b) = selmer2(pair, m)?;
                let oracle = oracle_equivalence(pair, m)?;
                let ta = tamagawa_ns(pair, m, NsCurve::A)?;
                let tb = tamagawa_ns(pair, m, NsCurve::APrime)?;
                let fmt_c = |c: &BTreeMap<u64, u32>| c.iter().map(|(q, v)| format!("{q}:{v}")).collect::<Vec<_>>().join(" ");
                Ok(vec![
                    pair.u.to_string(),
                    pair.p.to_string(),
                    m.to_string(),
                    a.root_number.to_string(),
                    phi.order.to_string(),
                    phihat.order.to_string(),
                    selmer2_text(&a),
                    selmer2_text(&b),
                    oracle.compared.to_string(),
                    oracle.agrees().to_string(),
                    fmt_c(&ta.c),
                    fmt_c(&tb.c),
                ])
            })();
            match row {
                Ok(r) => {
                    if r[9] == "false" {
                        outcome = outcome.max(Outcome::Alarming);
                    }
                    csv_row(&mut w, &r)?;
                }
                Err(e) => {
                    outcome = outcome.max(Outcome::of_error(&e));
                    let mut r = vec![pair.u.to_string(), pair.p.to_string(), m.to_string()];
                    r.extend(std::iter::repeat_n(String::new(), 8));
                    r.push(e.to_string());
                    csv_row(&mut w, &r)?;
                }
            }
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsing() {
        let a = NsArgs::parse(&["u=-3".into(), "bsd".into(), "q=7".into()]).unwrap();
        assert_eq!(a.sub.as_deref(), Some("bsd"));
        assert_eq!(a.need::<i64>("u").unwrap(), -3);
        assert!(a.only(&["u"]).is_err());
        assert!(NsArgs::parse(&["bsd".into(), "descent".into()]).is_err());
        assert!(NsArgs::parse(&["u=1".into(), "u=2".into()]).is_err());
        assert_eq!(parse_range("-3..1").unwrap(), [-3, -2, -1, 0, 1]);
        assert_eq!(parse_range("5,13").unwrap(), [5, 13]);
        assert!(parse_range("4..1").is_err());
    }
}
