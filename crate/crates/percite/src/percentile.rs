//! Percentile ranks of citation counts within a reference set, and the
//! class schemes that aggregate them.
//!
//! The percentile of a count `c` in a reference set of size `N` is driven by
//! two integers: `below = |{x : x < c}|` and `ties = |{x : x = c}|`. The tie
//! rule decides how ties contribute:
//!
//! - `strictly_below`:  `100 * below / N`
//! - `below_or_equal`:  `100 * (below + ties) / N`
//! - `midpoint`:        `100 * (below + ties/2) / N`
//!
//! For any input, `strictly_below <= midpoint <= below_or_equal`.

use serde::{Deserialize, Serialize};

use crate::corpus::ReferenceSet;
use crate::error::Error;

/// How tied counts contribute to a percentile rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    StrictlyBelow,
    BelowOrEqual,
    /// Half credit for ties. Unbiased for skewed counts: the mean midpoint
    /// percentile over any reference set is exactly 50.
    #[default]
    Midpoint,
}

impl TieRule {
    pub fn as_str(self) -> &'static str {
        match self {
            TieRule::StrictlyBelow => "strictly_below",
            TieRule::BelowOrEqual => "below_or_equal",
            TieRule::Midpoint => "midpoint",
        }
    }
}

impl std::str::FromStr for TieRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "strictly_below" => Ok(TieRule::StrictlyBelow),
            "below_or_equal" => Ok(TieRule::BelowOrEqual),
            "midpoint" => Ok(TieRule::Midpoint),
            other => Err(Error::invalid(format!(
                "unknown tie rule {other:?} (expected strictly_below, below_or_equal or midpoint)"
            ))),
        }
    }
}

impl std::fmt::Display for TieRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// (`below`, `ties`) for `value` against sorted `counts`.
pub(crate) fn count_below_and_tied(counts: &[f64], value: f64) -> (usize, usize) {
    let below = counts.partition_point(|&x| x < value);
    let upto = counts.partition_point(|&x| x <= value);
    (below, upto - below)
}

/// Percentile from the two counting integers. Single correctly-rounded
/// division per rule; used by the engine and by exactness checks alike.
pub(crate) fn percentile_from_counts(below: usize, ties: usize, n: usize, rule: TieRule) -> f64 {
    let n = n as f64;
    match rule {
        TieRule::StrictlyBelow => 100.0 * below as f64 / n,
        TieRule::BelowOrEqual => 100.0 * (below + ties) as f64 / n,
        TieRule::Midpoint => 100.0 * (below as f64 + 0.5 * ties as f64) / n,
    }
}

/// Percentile rank of `value` within `refset` under `rule`, in [0, 100].
pub fn percentile_of(value: f64, refset: &ReferenceSet, rule: TieRule) -> f64 {
    let (below, ties) = count_below_and_tied(refset.counts(), value);
    percentile_from_counts(below, ties, refset.len(), rule)
}

#[derive(Deserialize)]
struct SchemeDoc {
    name: String,
    boundaries: Vec<f64>,
    weights: Vec<u32>,
}

/// A partition of the percentile axis [0, 100] into weighted classes.
///
/// `boundaries` are strictly increasing cut points in (0, 100); class `k`
/// (0-based) covers `[b[k-1], b[k])`, lower bound inclusive, with the top
/// class closed at 100. `weights` are strictly increasing positive integers,
/// one per class, lowest class first.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(try_from = "SchemeDoc")]
pub struct PercentileScheme {
    name: String,
    boundaries: Vec<f64>,
    weights: Vec<u32>,
}

impl TryFrom<SchemeDoc> for PercentileScheme {
    type Error = Error;
    fn try_from(doc: SchemeDoc) -> Result<Self, Error> {
        PercentileScheme::new(doc.name, doc.boundaries, doc.weights)
    }
}

impl<'de> Deserialize<'de> for PercentileScheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = SchemeDoc::deserialize(d)?;
        PercentileScheme::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl PercentileScheme {
    pub fn new(
        name: impl Into<String>,
        boundaries: Vec<f64>,
        weights: Vec<u32>,
    ) -> Result<Self, Error> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::invalid("scheme name must be non-empty"));
        }
        if boundaries.is_empty() {
            return Err(Error::invalid("scheme must define at least one boundary"));
        }
        for b in &boundaries {
            if !b.is_finite() || *b <= 0.0 || *b >= 100.0 {
                return Err(Error::invalid(format!(
                    "scheme boundaries must lie strictly inside (0, 100), got {b}"
                )));
            }
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("scheme boundaries must be strictly increasing"));
        }
        if weights.len() != boundaries.len() + 1 {
            return Err(Error::invalid(format!(
                "scheme must have one weight per class: {} boundaries need {} weights, got {}",
                boundaries.len(),
                boundaries.len() + 1,
                weights.len()
            )));
        }
        if weights[0] == 0 {
            return Err(Error::invalid("scheme weights must be positive"));
        }
        if weights.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("scheme weights must be strictly increasing"));
        }
        Ok(PercentileScheme {
            name,
            boundaries,
            weights,
        })
    }

    /// Four quartile classes weighted 1..4.
    pub fn quartiles() -> Self {
        PercentileScheme::new("quartiles", vec![25.0, 50.0, 75.0], vec![1, 2, 3, 4])
            .expect("builtin scheme is valid")
    }

    /// Six classes (bottom half, then 75/90/95/99 cuts) weighted 1..6.
    pub fn nsb6() -> Self {
        PercentileScheme::new(
            "nsb6",
            vec![50.0, 75.0, 90.0, 95.0, 99.0],
            vec![1, 2, 3, 4, 5, 6],
        )
        .expect("builtin scheme is valid")
    }

    /// Two classes split at the 90th percentile, weighted 1 and 2.
    pub fn top10() -> Self {
        PercentileScheme::new("top10", vec![90.0], vec![1, 2]).expect("builtin scheme is valid")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "quartiles" => Some(Self::quartiles()),
            "nsb6" => Some(Self::nsb6()),
            "top10" => Some(Self::top10()),
            _ => None,
        }
    }

    pub const BUILTIN_NAMES: [&'static str; 3] = ["quartiles", "nsb6", "top10"];

    /// Parses and validates a scheme from its JSON form
    /// `{"name": ..., "boundaries": [...], "weights": [...]}`.
    pub fn from_json(json: &str) -> Result<Self, Error> {
        let doc: SchemeDoc =
            serde_json::from_str(json).map_err(|e| Error::parse(format!("bad scheme JSON: {e}")))?;
        PercentileScheme::try_from(doc)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of classes (= weights).
    pub fn classes(&self) -> usize {
        self.weights.len()
    }

    /// Maps a percentile to its `(class_index, weight)`; index is 0-based
    /// from the lowest class. Errors outside [0, 100].
    pub fn class_of(&self, percentile: f64) -> Result<(usize, u32), Error> {
        if !(0.0..=100.0).contains(&percentile) {
            return Err(Error::invalid(format!(
                "percentile {percentile} outside [0, 100]"
            )));
        }
        let idx = self.boundaries.partition_point(|&b| b <= percentile);
        Ok((idx, self.weights[idx]))
    }

    /// Fraction of `refset` members falling in each class under `rule`.
    /// Sums to 1 up to float rounding.
    pub fn expected_class_proportions(&self, refset: &ReferenceSet, rule: TieRule) -> Vec<f64> {
        let counts = self.member_class_counts(refset, rule);
        let n = refset.len() as f64;
        counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Number of `refset` members per class under `rule`.
    pub fn member_class_counts(&self, refset: &ReferenceSet, rule: TieRule) -> Vec<u64> {
        let mut tally = vec![0u64; self.classes()];
        let counts = refset.counts();
        let mut i = 0;
        while i < counts.len() {
            // one lookup per tie group
            let value = counts[i];
            let mut j = i + 1;
            while j < counts.len() && counts[j] == value {
                j += 1;
            }
            let p = percentile_from_counts(i, j - i, counts.len(), rule);
            let (class, _) = self.class_of(p).expect("percentile in range");
            tally[class] += (j - i) as u64;
            i = j;
        }
        tally
    }
}
