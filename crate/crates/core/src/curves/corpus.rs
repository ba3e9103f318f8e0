use super::CurveModel;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::sync::OnceLock;

const TABLE: &str = include_str!("../../data/curves.txt");

/// One row of the bundled curve table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub label: String,
    pub coefficients: [i64; 5],
    pub conductor: u64,
    pub root_number: i32,
}

fn parse_table(text: &str) -> Vec<CorpusEntry> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let f: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(f.len(), 8, "malformed corpus row: {line}");
            let n = |i: usize| f[i].parse::<i64>().expect("corpus field");
            CorpusEntry {
                label: f[0].to_string(),
                coefficients: [n(1), n(2), n(3), n(4), n(5)],
                conductor: n(6) as u64,
                root_number: n(7) as i32,
            }
        })
        .collect()
}

pub fn corpus() -> &'static [CorpusEntry] {
    static ENTRIES: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| parse_table(TABLE))
}

impl CorpusEntry {
    pub fn model(&self) -> Result<CurveModel> {
        CurveModel::with_conductor(
            self.coefficients.map(BigInt::from),
            self.conductor,
            Some(self.label.clone()),
        )
    }
}

/// Find a corpus entry by label. Matching is case-insensitive and a missing
/// trailing curve number defaults to 1 ("37B" finds "37b1").
pub fn lookup_label(label: &str) -> Result<&'static CorpusEntry> {
    let key = label.trim().to_ascii_lowercase();
    let with_one = format!("{key}1");
    corpus()
        .iter()
        .find(|e| e.label == key || e.label == with_one)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Parse a curve given as a corpus label or as five comma-separated
/// coefficients (optionally in brackets).
pub fn parse_curve(input: &str) -> Result<CurveModel> {
    let s = input.trim();
    if s.contains(',') {
        let body = s.trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::InvalidInput(format!("expected five coefficients, got `{s}`")));
        }
        let mut a = [0i64; 5];
        for (slot, p) in a.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient `{p}`")))?;
        }
        let model = CurveModel::from_i64(a)?;
        let known = corpus()
            .iter()
            .find(|e| e.coefficients.map(BigInt::from) == *model.coefficients());
        return match known {
            Some(e) => e.model(),
            None => Ok(model),
        };
    }
    lookup_label(s)?.model()
}
