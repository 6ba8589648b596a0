//! Impact indicators: the additive percentile-sum indicator (classed and
//! quantile forms), impact shares, mean-based baselines, unit rankings.
//!
//! Percentile sums and all baseline means are accumulated as exact rationals
//! and converted to `f64` once at the API boundary. Every percentile is a
//! ratio of small integers, so this costs little and makes the algebraic
//! identities (additivity, share totals, RCR = MNCS on a single reference
//! set) hold exactly instead of merely within float tolerance.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::corpus::{Corpus, PaperRecord, ReferenceSet};
use crate::error::Error;
use crate::percentile::{count_below_and_tied, percentile_from_counts, PercentileScheme, TieRule};

/// Which per-paper count feeds the indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountBasis {
    /// Integer times-cited counts (the default pipeline).
    #[default]
    Cited,
    /// Citing-side fractional counts; requires
    /// [`crate::fractional::fractional_counts`] to have run.
    FractionalCiting,
}

/// Which form of the percentile-sum indicator a share is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum I3Form {
    #[default]
    Quantile,
    Classed,
}

/// Indicators a unit ranking can be ordered by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    I3Classed,
    I3Quantile,
    Rcr,
    Mncs,
    Exergy,
}

impl Indicator {
    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::I3Classed => "i3_classed",
            Indicator::I3Quantile => "i3_quantile",
            Indicator::Rcr => "rcr",
            Indicator::Mncs => "mncs",
            Indicator::Exergy => "exergy",
        }
    }
}

impl std::str::FromStr for Indicator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "i3_classed" => Ok(Indicator::I3Classed),
            "i3_quantile" => Ok(Indicator::I3Quantile),
            "rcr" => Ok(Indicator::Rcr),
            "mncs" => Ok(Indicator::Mncs),
            "exergy" => Ok(Indicator::Exergy),
            other => Err(Error::invalid(format!(
                "unknown indicator {other:?} (expected i3_classed, i3_quantile, rcr, mncs or exergy)"
            ))),
        }
    }
}

impl std::fmt::Display for Indicator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both forms of the percentile-sum indicator over one paper set.
#[derive(Debug, Clone, PartialEq)]
pub struct I3Result {
    /// Σ over classes of weight_k · n_k.
    pub i3_classed: f64,
    /// Σ over papers of their percentile value.
    pub i3_quantile: f64,
    /// Papers per class, lowest class first; sums to the paper count.
    pub class_counts: Vec<u64>,
    /// Name of the scheme that produced the classes.
    pub scheme: String,
    pub rule: TieRule,
}

/// Mean-based indicators over one paper set.
///
/// `rcr` is the rate of averages (mean observed / mean expected), `mncs`
/// the average of rates (mean of per-paper observed/expected). They agree
/// when all papers share one reference set and diverge otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    /// Mean observed citation count.
    pub mocr: f64,
    /// Mean of each paper's reference-set mean.
    pub mecr: f64,
    /// mocr / mecr; `None` when mecr = 0.
    pub rcr: Option<f64>,
    /// Mean over papers of count / refset mean; `None` when any refset
    /// mean is 0.
    pub mncs: Option<f64>,
    /// Σ count².
    pub energy: f64,
    /// C² / P for C = Σ count, P = papers.
    pub exergy: f64,
    /// energy − exergy = P · population variance; 0 iff all counts equal.
    pub entropy: f64,
}

/// One unit's position in a ranking. `value` is `None` when the indicator
/// is undefined for the unit (flagged, ranked last, never dropped).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedUnit {
    pub unit: String,
    pub value: Option<f64>,
    pub rank: usize,
}

/// Units of one dimension ordered by an indicator, best first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub dimension: String,
    pub indicator: Indicator,
    pub units: Vec<RankedUnit>,
}

/// Per-unit rank movement between two rankings. `delta` = rank under B
/// minus rank under A; positive means the unit does worse under B.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankShift {
    pub unit: String,
    pub value_a: Option<f64>,
    pub value_b: Option<f64>,
    pub rank_a: usize,
    pub rank_b: usize,
    pub delta: i64,
}

/// How two rankings of the same units differ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankComparison {
    pub indicator_a: Indicator,
    pub indicator_b: Indicator,
    /// Spearman rank correlation 1 − 6Σd²/(n(n²−1)).
    pub spearman_rho: f64,
    /// Units ordered by their rank under A.
    pub units: Vec<RankShift>,
    /// Discordant pairs (u, v): u above v under A but below v under B.
    pub swaps: Vec<(String, String)>,
}

/// Exact per-paper percentile as a rational: numerator/denominator scaled
/// by 100, matching `percentile_from_counts` in real arithmetic.
fn percentile_ratio(below: usize, ties: usize, n: usize, rule: TieRule) -> BigRational {
    let big = |v: usize| BigInt::from(v);
    match rule {
        TieRule::StrictlyBelow => BigRational::new(big(100 * below), big(n)),
        TieRule::BelowOrEqual => BigRational::new(big(100 * (below + ties)), big(n)),
        TieRule::Midpoint => BigRational::new(big(100 * (2 * below + ties)), big(2 * n)),
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational within f64 range")
}

/// Count and reference set for one paper under a basis.
fn paper_value<'a>(
    paper: &PaperRecord,
    corpus: &'a Corpus,
    basis: CountBasis,
) -> Result<(f64, &'a ReferenceSet), Error> {
    match basis {
        CountBasis::Cited => {
            let refset = corpus.refset(&paper.refset_key).ok_or_else(|| {
                Error::UnresolvedRefset {
                    paper_id: paper.paper_id.clone(),
                    refset_key: paper.refset_key.clone(),
                }
            })?;
            Ok((paper.citations as f64, refset))
        }
        CountBasis::FractionalCiting => {
            let value = paper.fractional_citations.ok_or_else(|| {
                Error::MissingFractional(format!(
                    "paper {:?} has no fractional citation count; run fractional_counts first",
                    paper.paper_id
                ))
            })?;
            let refset = corpus.fractional_refset(&paper.refset_key).ok_or_else(|| {
                Error::MissingFractional(format!(
                    "no fractional reference set under key {:?}",
                    paper.refset_key
                ))
            })?;
            Ok((value, refset))
        }
    }
}

struct I3Parts {
    quantile: BigRational,
    classed: u64,
    class_counts: Vec<u64>,
}

fn i3_parts(
    papers: &[&PaperRecord],
    corpus: &Corpus,
    scheme: &PercentileScheme,
    rule: TieRule,
    basis: CountBasis,
) -> Result<I3Parts, Error> {
    let mut quantile = BigRational::zero();
    let mut classed = 0u64;
    let mut class_counts = vec![0u64; scheme.classes()];
    for paper in papers {
        let (value, refset) = paper_value(paper, corpus, basis)?;
        let (below, ties) = count_below_and_tied(refset.counts(), value);
        let n = refset.len();
        quantile += percentile_ratio(below, ties, n, rule);
        let p = percentile_from_counts(below, ties, n, rule);
        let (class, weight) = scheme.class_of(p).expect("percentile in [0, 100]");
        classed += weight as u64;
        class_counts[class] += 1;
    }
    Ok(I3Parts {
        quantile,
        classed,
        class_counts,
    })
}

/// Percentile-sum indicator over `papers`, scored against their reference
/// sets in `corpus`. Additive over disjoint paper sets; an empty set yields
/// zeros.
pub fn i3(
    papers: &[&PaperRecord],
    corpus: &Corpus,
    scheme: &PercentileScheme,
    rule: TieRule,
    basis: CountBasis,
) -> Result<I3Result, Error> {
    let parts = i3_parts(papers, corpus, scheme, rule, basis)?;
    Ok(I3Result {
        i3_classed: parts.classed as f64,
        i3_quantile: ratio_to_f64(&parts.quantile),
        class_counts: parts.class_counts,
        scheme: scheme.name().to_string(),
        rule,
    })
}

/// Percentage of the reference set's indicator mass contained in `subset`.
/// `subset` must be contained in `reference_papers` (by paper id); papers
/// stay scored against their full reference sets.
pub fn i3_share(
    subset: &[&PaperRecord],
    reference_papers: &[&PaperRecord],
    corpus: &Corpus,
    scheme: &PercentileScheme,
    rule: TieRule,
    basis: CountBasis,
    form: I3Form,
) -> Result<f64, Error> {
    let reference_ids: BTreeSet<&str> = reference_papers
        .iter()
        .map(|p| p.paper_id.as_str())
        .collect();
    if let Some(outside) = subset
        .iter()
        .find(|p| !reference_ids.contains(p.paper_id.as_str()))
    {
        return Err(Error::invalid(format!(
            "subset paper {:?} is not in the reference paper set",
            outside.paper_id
        )));
    }
    let sub = i3_parts(subset, corpus, scheme, rule, basis)?;
    let whole = i3_parts(reference_papers, corpus, scheme, rule, basis)?;
    let hundred = BigRational::from_integer(BigInt::from(100));
    match form {
        I3Form::Quantile => {
            if whole.quantile.is_zero() {
                return Err(Error::undefined(
                    "share: reference i3_quantile is zero".to_string(),
                ));
            }
            Ok(ratio_to_f64(&(hundred * sub.quantile / whole.quantile)))
        }
        I3Form::Classed => {
            if whole.classed == 0 {
                return Err(Error::undefined(
                    "share: reference i3_classed is zero".to_string(),
                ));
            }
            let ratio = BigRational::new(
                BigInt::from(100 * sub.classed),
                BigInt::from(whole.classed),
            );
            Ok(ratio_to_f64(&ratio))
        }
    }
}

/// Exact value of a count as a rational. Counts are either integers or
/// fractional sums; both are finite doubles, hence exactly representable.
fn count_ratio(value: f64) -> BigRational {
    BigRational::from_float(value).expect("counts are finite")
}

/// Exact mean of a reference set's counts.
fn refset_mean_ratio(refset: &ReferenceSet) -> BigRational {
    let sum: BigRational = refset.counts().iter().map(|&v| count_ratio(v)).sum();
    sum / BigRational::from_integer(BigInt::from(refset.len()))
}

/// Mean-based indicators over `papers`. Errors on an empty set; undefined
/// ratios (zero expected values) come back as `None`, never as NaN.
pub fn baselines(
    papers: &[&PaperRecord],
    corpus: &Corpus,
    basis: CountBasis,
) -> Result<BaselineResult, Error> {
    if papers.is_empty() {
        return Err(Error::invalid(
            "baselines require at least one paper".to_string(),
        ));
    }
    let p_count = BigRational::from_integer(BigInt::from(papers.len()));
    let mut mean_cache: BTreeMap<&str, BigRational> = BTreeMap::new();

    let mut sum_counts = BigRational::zero();
    let mut sum_squares = BigRational::zero();
    let mut sum_means = BigRational::zero();
    let mut sum_rates = Some(BigRational::zero());
    for paper in papers {
        let (value, refset) = paper_value(paper, corpus, basis)?;
        let v = count_ratio(value);
        let mean = mean_cache
            .entry(refset.key())
            .or_insert_with(|| refset_mean_ratio(refset))
            .clone();
        sum_counts += &v;
        sum_squares += &v * &v;
        sum_means += &mean;
        sum_rates = match sum_rates {
            Some(acc) if !mean.is_zero() => Some(acc + v / mean),
            _ => None,
        };
    }

    let mocr = &sum_counts / &p_count;
    let mecr = &sum_means / &p_count;
    let rcr = if mecr.is_zero() {
        None
    } else {
        Some(ratio_to_f64(&(&mocr / &mecr)))
    };
    let mncs = sum_rates.map(|s| ratio_to_f64(&(s / &p_count)));
    let energy = sum_squares;
    let exergy = &sum_counts * &sum_counts / &p_count;
    let entropy = &energy - &exergy;
    Ok(BaselineResult {
        mocr: ratio_to_f64(&mocr),
        mecr: ratio_to_f64(&mecr),
        rcr,
        mncs,
        energy: ratio_to_f64(&energy),
        exergy: ratio_to_f64(&exergy),
        entropy: ratio_to_f64(&entropy),
    })
}

/// Indicator value for one unit's papers, `None` where undefined.
fn unit_value(
    papers: &[&PaperRecord],
    corpus: &Corpus,
    indicator: Indicator,
    scheme: &PercentileScheme,
    rule: TieRule,
    basis: CountBasis,
) -> Result<Option<f64>, Error> {
    match indicator {
        Indicator::I3Classed => Ok(Some(i3(papers, corpus, scheme, rule, basis)?.i3_classed)),
        Indicator::I3Quantile => Ok(Some(i3(papers, corpus, scheme, rule, basis)?.i3_quantile)),
        Indicator::Rcr => Ok(baselines(papers, corpus, basis)?.rcr),
        Indicator::Mncs => Ok(baselines(papers, corpus, basis)?.mncs),
        Indicator::Exergy => Ok(Some(baselines(papers, corpus, basis)?.exergy)),
    }
}

/// Ranks the units of `dimension` by `indicator`, descending. Ties break by
/// unit label ascending; units with an undefined value rank last, flagged
/// by `value: None`.
pub fn rank_units(
    corpus: &Corpus,
    dimension: &str,
    indicator: Indicator,
    scheme: &PercentileScheme,
    rule: TieRule,
    basis: CountBasis,
) -> Result<Ranking, Error> {
    let labels = corpus.labels(dimension);
    if labels.len() < 2 {
        return Err(Error::invalid(format!(
            "dimension {dimension:?} must label at least two units (found {})",
            labels.len()
        )));
    }
    let mut units = Vec::with_capacity(labels.len());
    for label in labels {
        let subset = corpus.subset(dimension, label);
        let value = unit_value(&subset.papers, corpus, indicator, scheme, rule, basis)?;
        units.push(RankedUnit {
            unit: label.to_string(),
            value,
            rank: 0,
        });
    }
    units.sort_by(|a, b| match (a.value, b.value) {
        (Some(x), Some(y)) => y
            .partial_cmp(&x)
            .expect("indicator values are finite")
            .then_with(|| a.unit.cmp(&b.unit)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.unit.cmp(&b.unit),
    });
    for (i, u) in units.iter_mut().enumerate() {
        u.rank = i + 1;
    }
    Ok(Ranking {
        dimension: dimension.to_string(),
        indicator,
        units,
    })
}

/// Spearman rank correlation, per-unit rank deltas and discordant pairs
/// between two rankings of the same unit set.
pub fn compare_rankings(a: &Ranking, b: &Ranking) -> Result<RankComparison, Error> {
    let b_by_unit: BTreeMap<&str, &RankedUnit> =
        b.units.iter().map(|u| (u.unit.as_str(), u)).collect();
    if a.units.len() != b.units.len() {
        return Err(Error::invalid(format!(
            "rankings cover different unit sets ({} vs {} units)",
            a.units.len(),
            b.units.len()
        )));
    }
    for u in &a.units {
        if !b_by_unit.contains_key(u.unit.as_str()) {
            return Err(Error::invalid(format!(
                "unit {:?} present in one ranking but not the other",
                u.unit
            )));
        }
    }
    let n = a.units.len();
    if n < 2 {
        return Err(Error::invalid(
            "ranking comparison requires at least two units".to_string(),
        ));
    }

    let mut units = Vec::with_capacity(n);
    let mut d2_sum = 0i64;
    for ua in &a.units {
        let ub = b_by_unit[ua.unit.as_str()];
        let delta = ub.rank as i64 - ua.rank as i64;
        d2_sum += delta * delta;
        units.push(RankShift {
            unit: ua.unit.clone(),
            value_a: ua.value,
            value_b: ub.value,
            rank_a: ua.rank,
            rank_b: ub.rank,
            delta,
        });
    }
    let n_f = n as f64;
    let spearman_rho = 1.0 - 6.0 * d2_sum as f64 / (n_f * (n_f * n_f - 1.0));

    let mut swaps = Vec::new();
    for i in 0..units.len() {
        for j in (i + 1)..units.len() {
            // units[] is ordered by rank_a, so i precedes j under A
            if units[i].rank_b > units[j].rank_b {
                swaps.push((units[i].unit.clone(), units[j].unit.clone()));
            }
        }
    }
    Ok(RankComparison {
        indicator_a: a.indicator,
        indicator_b: b.indicator,
        spearman_rho,
        units,
        swaps,
    })
}
