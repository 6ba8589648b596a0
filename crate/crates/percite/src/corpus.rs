//! Paper-level citation data: records, reference sets, ingestion.
//!
//! A corpus is immutable once built. Construction canonicalizes the paper
//! order (sorted by `paper_id`), so any permutation of the input rows yields
//! the same corpus and therefore byte-identical downstream reports.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};

use serde::Deserialize;

use crate::error::Error;

/// Column prefix marking a unit dimension in the CSV header,
/// e.g. `unit:journal`.
const UNIT_PREFIX: &str = "unit:";

/// One publication with its citation count and unit memberships.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperRecord {
    /// Opaque identifier, unique within a corpus.
    pub paper_id: String,
    /// Times cited, whole counts.
    pub citations: u64,
    /// Key of the reference set this paper is ranked against
    /// (field/year stratum; composition is up to the data preparer).
    pub refset_key: String,
    /// Dimension name → unit label ("journal" → "J. Foo", ...). Papers
    /// without a label in some dimension are absent from that dimension's
    /// subsets.
    pub units: BTreeMap<String, String>,
    /// Citing-side fractional citation count, populated by
    /// [`crate::fractional::fractional_counts`].
    pub fractional_citations: Option<f64>,
}

impl PaperRecord {
    pub fn new(
        paper_id: impl Into<String>,
        citations: u64,
        refset_key: impl Into<String>,
    ) -> Self {
        PaperRecord {
            paper_id: paper_id.into(),
            citations,
            refset_key: refset_key.into(),
            units: BTreeMap::new(),
            fractional_citations: None,
        }
    }

    pub fn with_unit(mut self, dimension: impl Into<String>, label: impl Into<String>) -> Self {
        self.units.insert(dimension.into(), label.into());
        self
    }
}

/// The multiset of counts a paper is percentile-ranked against.
///
/// Values are kept sorted non-decreasing. Counts are reals so the same type
/// carries integer citation counts and fractional citation counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    key: String,
    counts: Vec<f64>,
}

impl ReferenceSet {
    /// Builds a reference set from raw values. Rejects empty input and
    /// negative or non-finite values.
    pub fn new(key: impl Into<String>, mut values: Vec<f64>) -> Result<Self, Error> {
        let key = key.into();
        if values.is_empty() {
            return Err(Error::invalid(format!(
                "reference set {key:?} must contain at least one count"
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::invalid(format!(
                "reference set {key:?}: counts must be finite and non-negative (got {bad})"
            )));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        Ok(ReferenceSet { key, counts: values })
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    /// Counts in non-decreasing order.
    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    /// Multiset cardinality N (always ≥ 1).
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: N ≥ 1
    }
}

/// A validated, immutable collection of papers plus their reference sets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    papers: Vec<PaperRecord>,
    refsets: BTreeMap<String, ReferenceSet>,
    fractional_refsets: BTreeMap<String, ReferenceSet>,
}

/// Result of slicing a corpus by one unit label. `dimension_known`
/// distinguishes "no paper carries that label" from "no paper carries that
/// dimension at all".
#[derive(Debug, Clone)]
pub struct SubsetResult<'a> {
    pub papers: Vec<&'a PaperRecord>,
    pub dimension_known: bool,
}

/// Input encodings accepted by [`Corpus::ingest`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// Infers the format from a file extension (`.csv` / `.jsonl`).
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Some(Format::Csv),
            Some("jsonl") => Some(Format::Jsonl),
            _ => None,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::invalid(format!(
                "unknown format {other:?} (expected csv or jsonl)"
            ))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJsonPaper {
    paper_id: String,
    citations: u64,
    refset_key: String,
    #[serde(default)]
    units: BTreeMap<String, String>,
}

impl Corpus {
    /// Builds a corpus from records: sorts by `paper_id`, checks uniqueness,
    /// and constructs one reference set per `refset_key`.
    ///
    /// Fractional reference sets are built for every key whose papers all
    /// carry a fractional citation value.
    pub fn from_records(mut papers: Vec<PaperRecord>) -> Result<Self, Error> {
        papers.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
        for pair in papers.windows(2) {
            if pair[0].paper_id == pair[1].paper_id {
                return Err(Error::invalid(format!(
                    "duplicate paper_id {:?}",
                    pair[0].paper_id
                )));
            }
        }
        let mut int_values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        let mut frac_values: BTreeMap<String, Vec<Option<f64>>> = BTreeMap::new();
        for p in &papers {
            if p.refset_key.is_empty() {
                return Err(Error::invalid(format!(
                    "paper {:?}: missing refset_key",
                    p.paper_id
                )));
            }
            if let Some(f) = p.fractional_citations {
                if !f.is_finite() || f < 0.0 {
                    return Err(Error::invalid(format!(
                        "paper {:?}: fractional_citations must be finite and non-negative",
                        p.paper_id
                    )));
                }
            }
            int_values
                .entry(p.refset_key.clone())
                .or_default()
                .push(p.citations as f64);
            frac_values
                .entry(p.refset_key.clone())
                .or_default()
                .push(p.fractional_citations);
        }
        let mut refsets = BTreeMap::new();
        for (key, values) in int_values {
            let set = ReferenceSet::new(key.clone(), values)?;
            refsets.insert(key, set);
        }
        let mut fractional_refsets = BTreeMap::new();
        for (key, values) in frac_values {
            if values.iter().all(Option::is_some) {
                let values = values.into_iter().flatten().collect();
                fractional_refsets.insert(key.clone(), ReferenceSet::new(key, values)?);
            }
        }
        Ok(Corpus {
            papers,
            refsets,
            fractional_refsets,
        })
    }

    /// Reads and validates a corpus from a CSV or JSONL stream.
    ///
    /// CSV requires a header with `paper_id`, `citations`, `refset_key` and
    /// zero or more `unit:<dimension>` columns. JSONL takes one object per
    /// line with the same field names and `units` as a nested object.
    pub fn ingest(reader: impl Read, format: Format) -> Result<Self, Error> {
        let records = match format {
            Format::Csv => read_csv(reader)?,
            Format::Jsonl => read_jsonl(reader)?,
        };
        Corpus::from_records(records)
    }

    /// Papers in canonical (`paper_id`-sorted) order.
    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn paper(&self, paper_id: &str) -> Option<&PaperRecord> {
        self.papers
            .binary_search_by(|p| p.paper_id.as_str().cmp(paper_id))
            .ok()
            .map(|i| &self.papers[i])
    }

    /// Reference set over integer citation counts.
    pub fn refset(&self, key: &str) -> Option<&ReferenceSet> {
        self.refsets.get(key)
    }

    pub fn refsets(&self) -> &BTreeMap<String, ReferenceSet> {
        &self.refsets
    }

    /// Reference set over fractional citation counts, if populated for
    /// every paper under `key`.
    pub fn fractional_refset(&self, key: &str) -> Option<&ReferenceSet> {
        self.fractional_refsets.get(key)
    }

    /// All dimension names appearing on at least one paper.
    pub fn dimensions(&self) -> BTreeSet<&str> {
        self.papers
            .iter()
            .flat_map(|p| p.units.keys().map(String::as_str))
            .collect()
    }

    /// All labels of one dimension.
    pub fn labels(&self, dimension: &str) -> BTreeSet<&str> {
        self.papers
            .iter()
            .filter_map(|p| p.units.get(dimension).map(String::as_str))
            .collect()
    }

    /// Corpus CSV in the ingest schema: `paper_id,citations,refset_key`
    /// plus one `unit:<dimension>` column per dimension (sorted). Papers in
    /// canonical order, so the output is byte-deterministic.
    pub fn to_csv(&self) -> String {
        let dims: Vec<&str> = self.dimensions().into_iter().collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "paper_id".to_string(),
            "citations".to_string(),
            "refset_key".to_string(),
        ];
        header.extend(dims.iter().map(|d| format!("{UNIT_PREFIX}{d}")));
        w.write_record(&header).expect("in-memory write");
        for p in &self.papers {
            let mut record = vec![
                p.paper_id.clone(),
                p.citations.to_string(),
                p.refset_key.clone(),
            ];
            for d in &dims {
                record.push(p.units.get(*d).cloned().unwrap_or_default());
            }
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Corpus JSONL in the ingest schema, one object per paper in
    /// canonical order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for p in &self.papers {
            #[derive(serde::Serialize)]
            struct Line<'a> {
                paper_id: &'a str,
                citations: u64,
                refset_key: &'a str,
                units: &'a BTreeMap<String, String>,
            }
            let line = Line {
                paper_id: &p.paper_id,
                citations: p.citations,
                refset_key: &p.refset_key,
                units: &p.units,
            };
            out.push_str(&serde_json::to_string(&line).expect("paper serializes"));
            out.push('\n');
        }
        out
    }

    /// Papers whose `units[dimension]` equals `label`, in canonical order.
    /// Subset papers stay members of their reference sets.
    pub fn subset<'a>(&'a self, dimension: &str, label: &str) -> SubsetResult<'a> {
        let mut dimension_known = false;
        let mut papers = Vec::new();
        for p in &self.papers {
            if let Some(l) = p.units.get(dimension) {
                dimension_known = true;
                if l == label {
                    papers.push(p);
                }
            }
        }
        SubsetResult {
            papers,
            dimension_known,
        }
    }
}

fn read_csv(reader: impl Read) -> Result<Vec<PaperRecord>, Error> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(format!("bad CSV header: {e}")))?
        .clone();

    let mut id_col = None;
    let mut cites_col = None;
    let mut key_col = None;
    let mut unit_cols: Vec<(usize, String)> = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        match name {
            "paper_id" => id_col = Some(i),
            "citations" => cites_col = Some(i),
            "refset_key" => key_col = Some(i),
            _ if name.starts_with(UNIT_PREFIX) => {
                let dim = &name[UNIT_PREFIX.len()..];
                if dim.is_empty() {
                    return Err(Error::parse("unit column with empty dimension name"));
                }
                unit_cols.push((i, dim.to_string()));
            }
            other => {
                return Err(Error::parse(format!(
                    "unknown column {other:?} (expected paper_id, citations, refset_key, unit:<dimension>)"
                )));
            }
        }
    }
    let id_col = id_col.ok_or_else(|| Error::parse("missing column paper_id"))?;
    let cites_col = cites_col.ok_or_else(|| Error::parse("missing column citations"))?;
    let key_col = key_col.ok_or_else(|| Error::parse("missing column refset_key"))?;

    let mut papers = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 1; // 1-based data row, header excluded
        let record = record.map_err(|e| Error::parse(format!("row {row}: {e}")))?;
        let get = |col: usize| record.get(col).unwrap_or("");
        let paper_id = get(id_col);
        if paper_id.is_empty() {
            return Err(Error::parse(format!("row {row}: missing paper_id")));
        }
        let citations: u64 = get(cites_col).parse().map_err(|_| {
            Error::parse(format!(
                "row {row}: citations must be a non-negative integer (got {:?})",
                get(cites_col)
            ))
        })?;
        let refset_key = get(key_col);
        if refset_key.is_empty() {
            return Err(Error::parse(format!("row {row}: missing refset_key")));
        }
        let mut paper = PaperRecord::new(paper_id, citations, refset_key);
        for (col, dim) in &unit_cols {
            let label = get(*col);
            if !label.is_empty() {
                paper.units.insert(dim.clone(), label.to_string());
            }
        }
        papers.push(paper);
    }
    check_duplicate_with_row(&papers)?;
    Ok(papers)
}

fn read_jsonl(reader: impl Read) -> Result<Vec<PaperRecord>, Error> {
    let mut papers = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let row = idx + 1;
        let line = line.map_err(|e| Error::parse(format!("line {row}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawJsonPaper = serde_json::from_str(&line)
            .map_err(|e| Error::parse(format!("line {row}: {e}")))?;
        if raw.paper_id.is_empty() {
            return Err(Error::parse(format!("line {row}: missing paper_id")));
        }
        if raw.refset_key.is_empty() {
            return Err(Error::parse(format!("line {row}: missing refset_key")));
        }
        let mut paper = PaperRecord::new(raw.paper_id, raw.citations, raw.refset_key);
        paper.units = raw
            .units
            .into_iter()
            .filter(|(_, label)| !label.is_empty())
            .collect();
        papers.push(paper);
    }
    check_duplicate_with_row(&papers)?;
    Ok(papers)
}

/// Reports duplicates with the offending input row, before canonical
/// sorting destroys row positions.
fn check_duplicate_with_row(papers: &[PaperRecord]) -> Result<(), Error> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for (idx, p) in papers.iter().enumerate() {
        if let Some(first) = seen.insert(&p.paper_id, idx + 1) {
            return Err(Error::parse(format!(
                "duplicate paper_id {:?} (rows {first} and {})",
                p.paper_id,
                idx + 1
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC_CSV: &str = "\
paper_id,citations,refset_key,unit:journal
a,0,k1,J1
b,2,k1,J2
c,5,k1,J1
";

    #[test]
    fn ingest_builds_one_refset() {
        let corpus = Corpus::ingest(BASIC_CSV.as_bytes(), Format::Csv).unwrap();
        assert_eq!(corpus.len(), 3);
        let rs = corpus.refset("k1").unwrap();
        assert_eq!(rs.len(), 3);
        assert_eq!(rs.counts(), &[0.0, 2.0, 5.0]);
    }

    #[test]
    fn ingest_rejects_negative_citations() {
        let csv = "paper_id,citations,refset_key\na,1,k\nb,-1,k\n";
        let err = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "{msg}");
        assert!(msg.contains("non-negative integer"), "{msg}");
    }

    #[test]
    fn ingest_rejects_fractional_citations_column_value() {
        let csv = "paper_id,citations,refset_key\na,2.5,k\n";
        let err = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn ingest_rejects_duplicate_id() {
        let csv = "paper_id,citations,refset_key\nx,1,k\nx,2,k\n";
        let err = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("duplicate paper_id"), "{msg}");
        assert!(msg.contains('x'), "{msg}");
    }

    #[test]
    fn ingest_rejects_missing_refset_key() {
        let csv = "paper_id,citations,refset_key\na,1,\n";
        let err = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap_err();
        assert!(err.to_string().contains("missing refset_key"));
    }

    #[test]
    fn ingest_rejects_unknown_column() {
        let csv = "paper_id,citations,refset_key,doi\na,1,k,x\n";
        let err = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap_err();
        assert!(err.to_string().contains("doi"));
    }

    #[test]
    fn row_order_does_not_matter() {
        let reversed = "\
paper_id,citations,refset_key,unit:journal
c,5,k1,J1
b,2,k1,J2
a,0,k1,J1
";
        let c1 = Corpus::ingest(BASIC_CSV.as_bytes(), Format::Csv).unwrap();
        let c2 = Corpus::ingest(reversed.as_bytes(), Format::Csv).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn jsonl_roundtrip_and_validation() {
        let jsonl = r#"{"paper_id":"a","citations":3,"refset_key":"k","units":{"journal":"J1"}}
{"paper_id":"b","citations":0,"refset_key":"k"}
"#;
        let corpus = Corpus::ingest(jsonl.as_bytes(), Format::Jsonl).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(corpus.paper("a").unwrap().units["journal"], "J1");

        let bad = r#"{"paper_id":"a","citations":-1,"refset_key":"k"}"#;
        let err = Corpus::ingest(bad.as_bytes(), Format::Jsonl).unwrap_err();
        assert!(err.to_string().contains("line 1"));

        let frac = r#"{"paper_id":"a","citations":1.5,"refset_key":"k"}"#;
        assert!(Corpus::ingest(frac.as_bytes(), Format::Jsonl).is_err());
    }

    #[test]
    fn subset_filters_by_label() {
        let csv = "\
paper_id,citations,refset_key,unit:journal
a,1,k,J1
b,2,k,J2
c,3,k,J1
d,4,k,
e,5,k,J3
";
        let corpus = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap();
        let hit = corpus.subset("journal", "J1");
        assert!(hit.dimension_known);
        assert_eq!(
            hit.papers.iter().map(|p| p.paper_id.as_str()).collect::<Vec<_>>(),
            vec!["a", "c"]
        );

        let empty = corpus.subset("journal", "nope");
        assert!(empty.dimension_known);
        assert!(empty.papers.is_empty());

        let unknown = corpus.subset("country", "NL");
        assert!(!unknown.dimension_known);
        assert!(unknown.papers.is_empty());
    }

    #[test]
    fn refset_sizes_sum_to_paper_count() {
        let csv = "\
paper_id,citations,refset_key
a,1,k1
b,2,k1
c,3,k2
d,4,k3
";
        let corpus = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap();
        let total: usize = corpus.refsets().values().map(ReferenceSet::len).sum();
        assert_eq!(total, corpus.len());
    }

    #[test]
    fn labels_partition_corpus_when_dimension_is_total() {
        let mut papers = Vec::new();
        for i in 0..40u64 {
            let label = format!("L{}", i % 5);
            papers.push(
                PaperRecord::new(format!("p{i:02}"), i, "k").with_unit("lab", label),
            );
        }
        let corpus = Corpus::from_records(papers).unwrap();
        let mut seen = 0usize;
        for label in corpus.labels("lab") {
            seen += corpus.subset("lab", label).papers.len();
        }
        assert_eq!(seen, corpus.len());
    }

    #[test]
    fn serializers_round_trip() {
        let csv = "\
paper_id,citations,refset_key,unit:journal,unit:lab
a,1,k,J1,
b,2,k,,L1
c,0,k2,J2,L2
";
        let corpus = Corpus::ingest(csv.as_bytes(), Format::Csv).unwrap();
        let back = Corpus::ingest(corpus.to_csv().as_bytes(), Format::Csv).unwrap();
        assert_eq!(corpus, back);
        let back = Corpus::ingest(corpus.to_jsonl().as_bytes(), Format::Jsonl).unwrap();
        assert_eq!(corpus, back);
        // writers are deterministic
        assert_eq!(corpus.to_csv(), back.to_csv());
        assert_eq!(corpus.to_jsonl(), back.to_jsonl());
    }

    #[test]
    fn refset_rejects_empty_and_negative() {
        assert!(ReferenceSet::new("k", vec![]).is_err());
        assert!(ReferenceSet::new("k", vec![-1.0]).is_err());
        assert!(ReferenceSet::new("k", vec![f64::NAN]).is_err());
    }
}
