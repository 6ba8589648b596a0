//! Citing-side fractional citation counts: every reference in a citing
//! document distributes weight 1/nr to the paper it cites, normalizing for
//! differences in citation potential across fields.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read};

use serde::Deserialize;

use crate::corpus::{Corpus, Format, ReferenceSet};
use crate::error::Error;

/// One reference from a citing document to a corpus paper. `nr` is the
/// total number of cited references the citing document lists, so each
/// event carries weight 1/nr ∈ (0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitingEvent {
    pub citing_id: String,
    pub cited_id: String,
    pub nr: u32,
}

/// What divides each citation when computing its weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenominatorMode {
    /// 1/nr with nr = all references the citing document lists (default).
    #[default]
    TotalReferences,
    /// 1/k with k = the citing document's references that resolve in the
    /// corpus. Sensitivity-analysis mode: every citing document then
    /// contributes exactly 1.0 in total.
    InCorpusReferences,
}

impl std::str::FromStr for DenominatorMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "total" => Ok(DenominatorMode::TotalReferences),
            "in-corpus" => Ok(DenominatorMode::InCorpusReferences),
            other => Err(Error::invalid(format!(
                "unknown denominator mode {other:?} (expected total or in-corpus)"
            ))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    citing_id: String,
    cited_id: String,
    nr: u32,
}

/// Reads citing events from CSV (`citing_id,cited_id,nr` header) or JSONL.
pub fn ingest_events(reader: impl Read, format: Format) -> Result<Vec<CitingEvent>, Error> {
    let events = match format {
        Format::Csv => read_events_csv(reader)?,
        Format::Jsonl => read_events_jsonl(reader)?,
    };
    check_unique_pairs(&events)?;
    Ok(events)
}

fn validate_event(e: &CitingEvent, at: &str) -> Result<(), Error> {
    if e.citing_id.is_empty() {
        return Err(Error::parse(format!("{at}: missing citing_id")));
    }
    if e.cited_id.is_empty() {
        return Err(Error::parse(format!("{at}: missing cited_id")));
    }
    if e.nr == 0 {
        return Err(Error::parse(format!(
            "{at}: nr must be a positive integer (event {} -> {})",
            e.citing_id, e.cited_id
        )));
    }
    Ok(())
}

fn read_events_csv(reader: impl Read) -> Result<Vec<CitingEvent>, Error> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(format!("bad events CSV header: {e}")))?
        .clone();
    let mut citing_col = None;
    let mut cited_col = None;
    let mut nr_col = None;
    for (i, name) in headers.iter().enumerate() {
        match name {
            "citing_id" => citing_col = Some(i),
            "cited_id" => cited_col = Some(i),
            "nr" => nr_col = Some(i),
            other => {
                return Err(Error::parse(format!(
                    "unknown events column {other:?} (expected citing_id, cited_id, nr)"
                )));
            }
        }
    }
    let citing_col = citing_col.ok_or_else(|| Error::parse("missing column citing_id"))?;
    let cited_col = cited_col.ok_or_else(|| Error::parse("missing column cited_id"))?;
    let nr_col = nr_col.ok_or_else(|| Error::parse("missing column nr"))?;

    let mut events = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| Error::parse(format!("events row {row}: {e}")))?;
        let get = |col: usize| record.get(col).unwrap_or("");
        let nr: u32 = get(nr_col).parse().map_err(|_| {
            Error::parse(format!(
                "events row {row}: nr must be a positive integer (got {:?})",
                get(nr_col)
            ))
        })?;
        let event = CitingEvent {
            citing_id: get(citing_col).to_string(),
            cited_id: get(cited_col).to_string(),
            nr,
        };
        validate_event(&event, &format!("events row {row}"))?;
        events.push(event);
    }
    Ok(events)
}

fn read_events_jsonl(reader: impl Read) -> Result<Vec<CitingEvent>, Error> {
    let mut events = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let row = idx + 1;
        let line = line.map_err(|e| Error::parse(format!("events line {row}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawEvent = serde_json::from_str(&line)
            .map_err(|e| Error::parse(format!("events line {row}: {e}")))?;
        let event = CitingEvent {
            citing_id: raw.citing_id,
            cited_id: raw.cited_id,
            nr: raw.nr,
        };
        validate_event(&event, &format!("events line {row}"))?;
        events.push(event);
    }
    Ok(events)
}

fn check_unique_pairs(events: &[CitingEvent]) -> Result<(), Error> {
    let mut seen = BTreeSet::new();
    for e in events {
        if !seen.insert((e.citing_id.as_str(), e.cited_id.as_str())) {
            return Err(Error::invalid(format!(
                "duplicate citing event {} -> {}; repeated reference records are rejected",
                e.citing_id, e.cited_id
            )));
        }
    }
    Ok(())
}

/// Computes fractional citation counts for every paper and returns a new
/// corpus with `fractional_citations` populated (papers never cited get 0)
/// and fractional reference sets built per key. Integer citation counts
/// and everything derived from them are untouched.
pub fn fractional_counts(
    events: &[CitingEvent],
    corpus: &Corpus,
    mode: DenominatorMode,
) -> Result<Corpus, Error> {
    check_unique_pairs(events)?;
    for e in events {
        validate_event(e, "event")?;
        if corpus.paper(&e.cited_id).is_none() {
            return Err(Error::invalid(format!(
                "event {} -> {}: cited_id does not match any paper",
                e.citing_id, e.cited_id
            )));
        }
    }
    let in_corpus_refs: BTreeMap<&str, u32> = {
        let mut m = BTreeMap::new();
        for e in events {
            *m.entry(e.citing_id.as_str()).or_insert(0u32) += 1;
        }
        m
    };

    // fixed summation order (cited_id, then citing_id) keeps totals
    // bit-stable under any input ordering of the events
    let mut ordered: Vec<&CitingEvent> = events.iter().collect();
    ordered.sort_by(|a, b| {
        (a.cited_id.as_str(), a.citing_id.as_str())
            .cmp(&(b.cited_id.as_str(), b.citing_id.as_str()))
    });
    let mut totals: BTreeMap<&str, f64> = BTreeMap::new();
    for e in ordered {
        let denominator = match mode {
            DenominatorMode::TotalReferences => e.nr,
            DenominatorMode::InCorpusReferences => in_corpus_refs[e.citing_id.as_str()],
        };
        *totals.entry(e.cited_id.as_str()).or_insert(0.0) += 1.0 / denominator as f64;
    }

    let papers = corpus
        .papers()
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.fractional_citations = Some(*totals.get(p.paper_id.as_str()).unwrap_or(&0.0));
            p
        })
        .collect();
    Corpus::from_records(papers)
}

/// The fractional-count reference set under `key`. Errors when the key is
/// unknown or fractional counts were never computed for it.
pub fn fractional_refset<'a>(corpus: &'a Corpus, key: &str) -> Result<&'a ReferenceSet, Error> {
    if let Some(rs) = corpus.fractional_refset(key) {
        return Ok(rs);
    }
    if corpus.refset(key).is_some() {
        Err(Error::MissingFractional(format!(
            "reference set {key:?} has no fractional counts; run fractional_counts first"
        )))
    } else {
        Err(Error::invalid(format!("unknown reference-set key {key:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::PaperRecord;
    use crate::indicators::{baselines, i3, CountBasis};
    use crate::percentile::{percentile_of, PercentileScheme, TieRule};
    use proptest::prelude::*;

    fn corpus(ids: &[&str]) -> Corpus {
        let papers = ids
            .iter()
            .enumerate()
            .map(|(i, id)| PaperRecord::new(*id, (i * i) as u64 % 7, "k"))
            .collect();
        Corpus::from_records(papers).unwrap()
    }

    fn ev(citing: &str, cited: &str, nr: u32) -> CitingEvent {
        CitingEvent {
            citing_id: citing.to_string(),
            cited_id: cited.to_string(),
            nr,
        }
    }

    #[test]
    fn weight_is_one_over_nr() {
        let c = corpus(&["A", "B", "C"]);
        let events = [ev("x", "A", 10), ev("x", "B", 10)];
        let out = fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
        assert_eq!(out.paper("A").unwrap().fractional_citations, Some(0.1));
        assert_eq!(out.paper("B").unwrap().fractional_citations, Some(0.1));
        assert_eq!(out.paper("C").unwrap().fractional_citations, Some(0.0));
    }

    #[test]
    fn single_reference_carries_unit_weight() {
        let c = corpus(&["A"]);
        let out =
            fractional_counts(&[ev("x", "A", 1)], &c, DenominatorMode::TotalReferences).unwrap();
        assert_eq!(out.paper("A").unwrap().fractional_citations, Some(1.0));
    }

    #[test]
    fn unresolved_cited_id_names_the_event() {
        let c = corpus(&["A"]);
        let err = fractional_counts(&[ev("x", "missing", 3)], &c, DenominatorMode::TotalReferences)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('x') && msg.contains("missing"), "{msg}");
    }

    #[test]
    fn zero_nr_and_duplicate_pairs_rejected() {
        let c = corpus(&["A"]);
        assert!(
            fractional_counts(&[ev("x", "A", 0)], &c, DenominatorMode::TotalReferences).is_err()
        );
        let dup = [ev("x", "A", 2), ev("x", "A", 2)];
        let err = fractional_counts(&dup, &c, DenominatorMode::TotalReferences).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn conservation_over_citing_documents() {
        let c = corpus(&["A", "B", "C", "D"]);
        // x lists 3 references, all in-corpus; y lists 2, one in-corpus
        let events = [
            ev("x", "A", 3),
            ev("x", "B", 3),
            ev("x", "C", 3),
            ev("y", "D", 2),
        ];
        let out = fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
        let total: f64 = out
            .papers()
            .iter()
            .map(|p| p.fractional_citations.unwrap())
            .sum();
        // x contributes 3/3 = 1, y contributes 1/2
        assert!((total - 1.5).abs() < 1e-12);

        // with the in-corpus denominator every citing document gives 1.0
        let out = fractional_counts(&events, &c, DenominatorMode::InCorpusReferences).unwrap();
        let total: f64 = out
            .papers()
            .iter()
            .map(|p| p.fractional_citations.unwrap())
            .sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn integer_pipeline_unaffected() {
        let c = corpus(&["A", "B", "C", "D", "E"]);
        let scheme = PercentileScheme::quartiles();
        let papers: Vec<_> = c.papers().iter().collect();
        let before_i3 = i3(&papers, &c, &scheme, TieRule::Midpoint, CountBasis::Cited).unwrap();
        let before_base = baselines(&papers, &c, CountBasis::Cited).unwrap();

        let events = [ev("x", "A", 4), ev("x", "C", 4), ev("y", "B", 1)];
        let after = fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
        let papers: Vec<_> = after.papers().iter().collect();
        let after_i3 = i3(&papers, &after, &scheme, TieRule::Midpoint, CountBasis::Cited).unwrap();
        let after_base = baselines(&papers, &after, CountBasis::Cited).unwrap();
        assert_eq!(before_i3, after_i3);
        assert_eq!(before_base, after_base);
    }

    #[test]
    fn fractional_refset_feeds_percentile_engine() {
        let c = corpus(&["A", "B", "C"]);
        let events = [ev("x", "A", 10), ev("y", "B", 10), ev("z", "C", 1)];
        let out = fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
        let rs = fractional_refset(&out, "k").unwrap();
        assert_eq!(rs.counts(), &[0.1, 0.1, 1.0]);
        // 2 of 3 strictly below 1.0
        assert_eq!(
            percentile_of(1.0, rs, TieRule::StrictlyBelow),
            100.0 * 2.0 / 3.0
        );
    }

    #[test]
    fn equal_fractional_values_sit_at_fifty() {
        let c = corpus(&["A", "B", "C"]);
        let events = [ev("x", "A", 3), ev("x", "B", 3), ev("x", "C", 3)];
        let out = fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
        let rs = fractional_refset(&out, "k").unwrap();
        for p in out.papers() {
            assert_eq!(
                percentile_of(p.fractional_citations.unwrap(), rs, TieRule::Midpoint),
                50.0
            );
        }
    }

    #[test]
    fn single_paper_midpoint_is_fifty() {
        let c = corpus(&["A"]);
        let out =
            fractional_counts(&[ev("x", "A", 2)], &c, DenominatorMode::TotalReferences).unwrap();
        let rs = fractional_refset(&out, "k").unwrap();
        assert_eq!(percentile_of(0.5, rs, TieRule::Midpoint), 50.0);
    }

    #[test]
    fn missing_fractional_values_are_an_error() {
        let c = corpus(&["A"]);
        assert!(matches!(
            fractional_refset(&c, "k"),
            Err(Error::MissingFractional(_))
        ));
        assert!(matches!(
            fractional_refset(&c, "nope"),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn events_csv_ingest_and_errors() {
        let csv = "citing_id,cited_id,nr\nx,A,3\ny,B,1\n";
        let events = ingest_events(csv.as_bytes(), Format::Csv).unwrap();
        assert_eq!(events.len(), 2);
        assert_eq!(events[0], ev("x", "A", 3));

        let bad_nr = "citing_id,cited_id,nr\nx,A,0\n";
        let err = ingest_events(bad_nr.as_bytes(), Format::Csv).unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");

        let neg = "citing_id,cited_id,nr\nx,A,-2\n";
        assert!(ingest_events(neg.as_bytes(), Format::Csv).is_err());

        let dup = "citing_id,cited_id,nr\nx,A,2\nx,A,2\n";
        assert!(ingest_events(dup.as_bytes(), Format::Csv).is_err());

        let unknown = "citing_id,cited_id,nr,weight\nx,A,2,0.5\n";
        assert!(ingest_events(unknown.as_bytes(), Format::Csv).is_err());
    }

    #[test]
    fn events_jsonl_ingest() {
        let jsonl = "{\"citing_id\":\"x\",\"cited_id\":\"A\",\"nr\":4}\n";
        let events = ingest_events(jsonl.as_bytes(), Format::Jsonl).unwrap();
        assert_eq!(events, vec![ev("x", "A", 4)]);

        let zero = "{\"citing_id\":\"x\",\"cited_id\":\"A\",\"nr\":0}\n";
        assert!(ingest_events(zero.as_bytes(), Format::Jsonl).is_err());
    }

    proptest! {
        #[test]
        fn totals_independent_of_event_order(
            refs in prop::collection::vec((0usize..6, 0usize..4), 1..20),
        ) {
            let ids = ["A", "B", "C", "D", "E", "F"];
            let citing = ["w", "x", "y", "z"];
            let mut events = Vec::new();
            let mut seen = BTreeSet::new();
            for (cited, doc) in refs {
                if seen.insert((doc, cited)) {
                    events.push(ev(citing[doc], ids[cited], 5));
                }
            }
            let c = corpus(&ids);
            let forward =
                fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
            events.reverse();
            let backward =
                fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
            prop_assert_eq!(forward, backward);
        }

        #[test]
        fn per_citing_totals_are_one_when_all_refs_in_corpus(
            doc_sizes in prop::collection::vec(1usize..6, 1..5),
        ) {
            let ids = ["A", "B", "C", "D", "E", "F"];
            let mut events = Vec::new();
            for (d, &size) in doc_sizes.iter().enumerate() {
                for cited in &ids[..size] {
                    events.push(ev(&format!("doc{d}"), cited, size as u32));
                }
            }
            let c = corpus(&ids);
            let out =
                fractional_counts(&events, &c, DenominatorMode::TotalReferences).unwrap();
            let total: f64 = out
                .papers()
                .iter()
                .map(|p| p.fractional_citations.unwrap())
                .sum();
            prop_assert!((total - doc_sizes.len() as f64).abs() < 1e-12);
        }
    }
}
