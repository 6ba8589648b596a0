//! Per-unit indicator reports and their CSV/JSON serializations.
//!
//! Column order is fixed: unit, n_papers, i3_classed, i3_quantile,
//! share_pct, one class_count column per class, mocr, mecr, rcr, mncs,
//! energy, exergy, entropy. CSV numbers carry 6 significant digits; JSON
//! keeps full precision. Both serializations are byte-deterministic.

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::Error;
use crate::indicators::{baselines, i3, i3_share, CountBasis, I3Form, Indicator};
use crate::percentile::{PercentileScheme, TieRule};

/// All indicator values for one unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub unit: String,
    pub n_papers: u64,
    pub i3_classed: f64,
    pub i3_quantile: f64,
    /// Quantile-form share of the whole corpus; `None` when the corpus
    /// carries zero quantile mass.
    pub share_pct: Option<f64>,
    pub class_counts: Vec<u64>,
    pub mocr: f64,
    pub mecr: f64,
    pub rcr: Option<f64>,
    pub mncs: Option<f64>,
    pub energy: f64,
    pub exergy: f64,
    pub entropy: f64,
}

/// A full per-unit report, rows ordered by the selected indicator
/// (descending; undefined values last, ties by unit label).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub dimension: String,
    pub scheme: String,
    pub tie_rule: TieRule,
    pub indicator: Indicator,
    pub basis: CountBasis,
    pub rows: Vec<ReportRow>,
}

fn row_value(row: &ReportRow, indicator: Indicator) -> Option<f64> {
    match indicator {
        Indicator::I3Classed => Some(row.i3_classed),
        Indicator::I3Quantile => Some(row.i3_quantile),
        Indicator::Rcr => row.rcr,
        Indicator::Mncs => row.mncs,
        Indicator::Exergy => Some(row.exergy),
    }
}

/// Builds the per-unit report for one dimension, sorted by `indicator`.
pub fn build_report(
    corpus: &Corpus,
    dimension: &str,
    indicator: Indicator,
    scheme: &PercentileScheme,
    rule: TieRule,
    basis: CountBasis,
) -> Result<Report, Error> {
    if corpus.is_empty() {
        return Err(Error::invalid("no papers"));
    }
    let labels = corpus.labels(dimension);
    if labels.is_empty() {
        return Err(Error::invalid(format!(
            "unknown dimension {dimension:?} (no paper carries it)"
        )));
    }
    let all: Vec<_> = corpus.papers().iter().collect();
    let mut rows = Vec::with_capacity(labels.len());
    for label in labels {
        let subset = corpus.subset(dimension, label);
        let scored = i3(&subset.papers, corpus, scheme, rule, basis)?;
        let base = baselines(&subset.papers, corpus, basis)?;
        let share_pct = match i3_share(
            &subset.papers,
            &all,
            corpus,
            scheme,
            rule,
            basis,
            I3Form::Quantile,
        ) {
            Ok(s) => Some(s),
            Err(Error::Undefined(_)) => None,
            Err(e) => return Err(e),
        };
        rows.push(ReportRow {
            unit: label.to_string(),
            n_papers: subset.papers.len() as u64,
            i3_classed: scored.i3_classed,
            i3_quantile: scored.i3_quantile,
            share_pct,
            class_counts: scored.class_counts,
            mocr: base.mocr,
            mecr: base.mecr,
            rcr: base.rcr,
            mncs: base.mncs,
            energy: base.energy,
            exergy: base.exergy,
            entropy: base.entropy,
        });
    }
    rows.sort_by(|a, b| {
        match (row_value(a, indicator), row_value(b, indicator)) {
            (Some(x), Some(y)) => y
                .partial_cmp(&x)
                .expect("indicator values are finite")
                .then_with(|| a.unit.cmp(&b.unit)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.unit.cmp(&b.unit),
        }
    });
    Ok(Report {
        dimension: dimension.to_string(),
        scheme: scheme.name().to_string(),
        tie_rule: rule,
        indicator,
        basis,
        rows,
    })
}

impl Report {
    /// CSV with the fixed column order; floats at 6 significant digits,
    /// undefined values as empty fields.
    pub fn to_csv(&self) -> String {
        let classes = self.rows.first().map_or(0, |r| r.class_counts.len());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "unit".to_string(),
            "n_papers".to_string(),
            "i3_classed".to_string(),
            "i3_quantile".to_string(),
            "share_pct".to_string(),
        ];
        for k in 1..=classes {
            header.push(format!("class_count_{k}"));
        }
        header.extend(
            ["mocr", "mecr", "rcr", "mncs", "energy", "exergy", "entropy"]
                .map(String::from),
        );
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let mut record = vec![
                row.unit.clone(),
                row.n_papers.to_string(),
                fmt_sig(row.i3_classed, 6),
                fmt_sig(row.i3_quantile, 6),
                opt_sig(row.share_pct),
            ];
            record.extend(row.class_counts.iter().map(u64::to_string));
            record.push(fmt_sig(row.mocr, 6));
            record.push(fmt_sig(row.mecr, 6));
            record.push(opt_sig(row.rcr));
            record.push(opt_sig(row.mncs));
            record.push(fmt_sig(row.energy, 6));
            record.push(fmt_sig(row.exergy, 6));
            record.push(fmt_sig(row.entropy, 6));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Pretty JSON with full float precision.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn opt_sig(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| fmt_sig(x, 6))
}

/// Formats `x` with `sig` significant digits, fixed or scientific notation
/// by magnitude (fixed for decimal exponents in [-4, sig)), trailing zeros
/// trimmed. Examples at 6 digits: `123456`, `1.23457e6`, `0.0001234`,
/// `0.666667`, `100`, `0`.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let formatted = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp_str) = formatted.split_once('e').expect("exponent notation");
    let exp: i32 = exp_str.parse().expect("numeric exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let body = if exp >= -4 && (exp as i64) < sig as i64 {
        let point = exp + 1; // digits before the decimal point
        let mut s = String::new();
        if point <= 0 {
            s.push_str("0.");
            for _ in 0..(-point) {
                s.push('0');
            }
            s.push_str(&digits);
        } else if point as usize >= digits.len() {
            s.push_str(&digits);
            for _ in 0..(point as usize - digits.len()) {
                s.push('0');
            }
        } else {
            s.push_str(&digits[..point as usize]);
            s.push('.');
            s.push_str(&digits[point as usize..]);
        }
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let head = &digits[..1];
        let tail = digits[1..].trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
