//! Percentile-based citation impact analytics.
//!
//! Citation distributions are heavily right-skewed, which makes indicators
//! built on means (RCR, MNCS, the EEE triple) unstable rank criteria. This
//! crate scores every paper as a percentile of its reference set and
//! aggregates those percentiles into the additive impact indicator exposed
//! by [`indicators::i3`], alongside the mean-based baselines so the two
//! families can be compared on the same data.
//!
//! The pipeline:
//!
//! 1. [`corpus`] — ingest paper-level citation counts (CSV/JSONL), build
//!    reference sets per field/year stratum, slice the corpus by unit
//!    (journal, institute, ...).
//! 2. [`percentile`] — percentile of a count within its reference set under
//!    an explicit tie rule, plus percentile-rank class schemes (quartiles,
//!    the six NSB classes, custom).
//! 3. [`indicators`] — the percentile-sum indicator in classed and
//!    continuous-quantile form, impact shares, mean-based baselines, unit
//!    rankings and ranking comparison.
//! 4. [`stats`] — chi-square goodness of fit, per-class proportion z-tests
//!    and Mann-Whitney U, treating evaluated sets as subsets of their
//!    reference set rather than independent samples.
//! 5. [`fractional`] — citing-side fractional citation counts (1/nr per
//!    reference) for cross-field normalization.
//! 6. [`synth`] — deterministic skewed-corpus generation and the frozen
//!    rank-reversal fixture.
//!
//! All computation is deterministic: identical inputs produce byte-identical
//! reports regardless of input row order.

pub mod corpus;
pub mod error;
pub mod fractional;
pub mod indicators;
pub mod percentile;
pub mod report;
pub mod special;
pub mod stats;
pub mod synth;

pub use corpus::{Corpus, Format, PaperRecord, ReferenceSet};
pub use error::Error;
pub use indicators::{BaselineResult, CountBasis, I3Form, I3Result, Indicator, Ranking};
pub use percentile::{PercentileScheme, TieRule};
pub use stats::TestResult;
