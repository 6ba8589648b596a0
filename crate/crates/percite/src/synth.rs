//! Deterministic synthetic corpora: skewed citation-count generators for
//! desk-scale experiments and the frozen rank-reversal fixture.
//!
//! Randomness comes from an in-repo xorshift64* stream so the same seed
//! reproduces the same corpus on any platform.

use crate::corpus::{Corpus, PaperRecord};
use crate::error::Error;

/// Reference-set key used by all generated corpora.
pub const SYNTH_REFSET_KEY: &str = "synthetic";
/// Dimension name under which `unit_layout` labels are attached.
pub const SYNTH_DIMENSION: &str = "unit";

/// xorshift64* pseudo-random stream.
///
/// state ^= state >> 12; state ^= state << 25; state ^= state >> 27;
/// output = state · 0x2545F4914F6CDD1D. A zero seed is remapped to a fixed
/// nonzero constant (the all-zero state is a fixed point of the shifts).
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        Xorshift64Star {
            state: if seed == 0 { 0x9E37_79B9_7F4A_7C15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state ^= self.state >> 12;
        self.state ^= self.state << 25;
        self.state ^= self.state >> 27;
        self.state.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1), 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe as a logarithm argument.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Citation-count distribution to draw from.
#[derive(Debug, Clone, PartialEq)]
pub enum GenDistribution {
    /// exp(μ + σ·Z) floored to an integer; right-skewed for σ ≥ 1.
    Lognormal { mu: f64, sigma: f64 },
    /// P(c) ∝ (c+1)^(−α) over c = 0..=c_max.
    DiscretePowerLaw { alpha: f64, c_max: u64 },
    Constant { c: u64 },
}

/// Everything that determines a generated corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub distribution: GenDistribution,
    pub n_papers: usize,
    pub seed: u64,
    /// Consecutive blocks of papers per unit label; the block sizes may sum
    /// to less than `n_papers` (the remainder stays unlabeled).
    pub unit_layout: Vec<(String, usize)>,
}

/// Caps floored draws so every count is an exactly-representable integer.
const MAX_COUNT: f64 = 9_007_199_254_740_992.0; // 2^53

fn validate(spec: &GenSpec) -> Result<(), Error> {
    if spec.n_papers == 0 {
        return Err(Error::invalid("generate: n_papers must be positive"));
    }
    match &spec.distribution {
        GenDistribution::Lognormal { mu, sigma } => {
            if !mu.is_finite() || !sigma.is_finite() || *sigma < 0.0 {
                return Err(Error::invalid(format!(
                    "generate: lognormal needs finite mu and sigma >= 0 (got mu={mu}, sigma={sigma})"
                )));
            }
        }
        GenDistribution::DiscretePowerLaw { alpha, c_max } => {
            if !alpha.is_finite() || *alpha <= 0.0 {
                return Err(Error::invalid(format!(
                    "generate: power law needs alpha > 0 (got {alpha})"
                )));
            }
            if *c_max > 10_000_000 {
                return Err(Error::invalid(format!(
                    "generate: power-law c_max {c_max} too large (limit 10^7)"
                )));
            }
        }
        GenDistribution::Constant { .. } => {}
    }
    let mut labeled = 0usize;
    let mut seen = std::collections::BTreeSet::new();
    for (label, count) in &spec.unit_layout {
        if label.is_empty() {
            return Err(Error::invalid("generate: empty unit label"));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::invalid(format!(
                "generate: duplicate unit label {label:?}"
            )));
        }
        labeled = labeled
            .checked_add(*count)
            .ok_or_else(|| Error::invalid("generate: unit layout overflows"))?;
    }
    if labeled > spec.n_papers {
        return Err(Error::invalid(format!(
            "generate: unit layout assigns {labeled} papers but n_papers is {}",
            spec.n_papers
        )));
    }
    Ok(())
}

/// One standard-normal draw (Box-Muller, cosine branch only so the stream
/// advances exactly two values per draw).
fn standard_normal(rng: &mut Xorshift64Star) -> f64 {
    let u1 = rng.next_open01();
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Generates a corpus from `spec`. Pure function of its input: the same
/// `GenSpec` always yields the same corpus.
pub fn generate(spec: &GenSpec) -> Result<Corpus, Error> {
    validate(spec)?;
    let mut rng = Xorshift64Star::new(spec.seed);

    // inverse-CDF table for the power law, built once
    let cumulative = match &spec.distribution {
        GenDistribution::DiscretePowerLaw { alpha, c_max } => {
            let mut acc = 0.0;
            let mut cum = Vec::with_capacity(*c_max as usize + 1);
            for c in 0..=*c_max {
                acc += ((c + 1) as f64).powf(-alpha);
                cum.push(acc);
            }
            Some(cum)
        }
        _ => None,
    };

    let draw = |rng: &mut Xorshift64Star| -> u64 {
        match &spec.distribution {
            GenDistribution::Lognormal { mu, sigma } => {
                let z = standard_normal(rng);
                (mu + sigma * z).exp().min(MAX_COUNT).floor() as u64
            }
            GenDistribution::DiscretePowerLaw { .. } => {
                let cum = cumulative.as_ref().expect("table built above");
                let total = *cum.last().expect("c_max + 1 entries");
                let u = rng.next_f64() * total;
                cum.partition_point(|&acc| acc <= u) as u64
            }
            GenDistribution::Constant { c } => *c,
        }
    };

    let width = spec.n_papers.to_string().len();
    let mut unit_blocks = Vec::new();
    let mut start = 0usize;
    for (label, count) in &spec.unit_layout {
        unit_blocks.push((start, start + count, label.as_str()));
        start += count;
    }

    let mut papers = Vec::with_capacity(spec.n_papers);
    for i in 0..spec.n_papers {
        let count = draw(&mut rng);
        let mut paper = PaperRecord::new(
            format!("P{:0width$}", i + 1, width = width),
            count,
            SYNTH_REFSET_KEY,
        );
        if let Some((_, _, label)) = unit_blocks.iter().find(|(s, e, _)| (*s..*e).contains(&i)) {
            paper = paper.with_unit(SYNTH_DIMENSION, *label);
        }
        papers.push(paper);
    }
    Corpus::from_records(papers)
}

/// Per-unit citation counts of the frozen rank-reversal fixture.
///
/// Unit means decrease monotonically U1 > U2 > ... > U7, so the mean-based
/// ranking is U1 first and U6 sixth. Percentile sums tell another story:
/// U6's thirty papers each collect midpoint percentile 1600/42 ≈ 38.1, a
/// quantile mass of ≈ 1142.9 that dwarfs U1's single paper at ≈ 98.8, so
/// the percentile ranking puts U6 first and U1 fifth.
const REVERSAL_UNITS: [(&str, &[u64]); 7] = [
    ("U1", &[1000]),
    ("U2", &[900, 900, 900]),
    ("U3", &[800, 800, 800]),
    ("U4", &[700, 700, 700]),
    ("U5", &[500]),
    ("U6", &[15; 30]),
    ("U7", &[10]),
];

/// Dimension name of the reversal fixture's units.
pub const REVERSAL_DIMENSION: &str = "group";

/// A fixed 42-paper, 7-unit corpus (single reference set) in which the
/// unit ranked 1st by MNCS ranks 5th by the quantile indicator and the
/// unit ranked 6th by MNCS ranks 1st. The counts are synthetic, frozen in
/// source, and re-scored from scratch on every call.
pub fn reversal_fixture() -> Corpus {
    let mut papers = Vec::new();
    for (label, counts) in REVERSAL_UNITS {
        for (i, &c) in counts.iter().enumerate() {
            papers.push(
                PaperRecord::new(format!("{label}-{:02}", i + 1), c, "all")
                    .with_unit(REVERSAL_DIMENSION, label),
            );
        }
    }
    Corpus::from_records(papers).expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::{compare_rankings, rank_units, CountBasis, Indicator};
    use crate::percentile::{PercentileScheme, TieRule};
    use std::collections::BTreeMap;

    #[test]
    fn xorshift_stream_is_pinned() {
        // reference values computed from the xorshift64* recurrence
        // independently of this implementation
        let mut rng = Xorshift64Star::new(1);
        assert_eq!(rng.next_u64(), 0x47e4_ce4b_896c_dd1d);
        assert_eq!(rng.next_u64(), 0xabcf_a6a8_e079_651d);
        assert_eq!(rng.next_u64(), 0xb9d1_0d8f_eb73_1f57);

        let mut rng = Xorshift64Star::new(42);
        assert_eq!(rng.next_u64(), 0x56ce_4ab7_719b_a3a0);
        let mut rng = Xorshift64Star::new(42);
        assert_eq!(rng.next_f64(), 0.33908526400192196);

        // zero seed is remapped, not degenerate
        let mut rng = Xorshift64Star::new(0);
        assert_eq!(rng.next_u64(), 0x0d83_b3e2_9a21_487a);
    }

    #[test]
    fn uniform_draws_cover_unit_interval() {
        let mut rng = Xorshift64Star::new(7);
        let n = 10_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
            sum += u;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.02);
    }

    fn spec(distribution: GenDistribution, n: usize, seed: u64) -> GenSpec {
        GenSpec {
            distribution,
            n_papers: n,
            seed,
            unit_layout: Vec::new(),
        }
    }

    #[test]
    fn constant_distribution() {
        let corpus = generate(&spec(GenDistribution::Constant { c: 3 }, 5, 1)).unwrap();
        assert_eq!(corpus.len(), 5);
        assert!(corpus.papers().iter().all(|p| p.citations == 3));
    }

    #[test]
    fn generation_is_deterministic() {
        let s = spec(
            GenDistribution::Lognormal { mu: 1.0, sigma: 1.2 },
            500,
            99,
        );
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());

        let other = spec(
            GenDistribution::Lognormal { mu: 1.0, sigma: 1.2 },
            500,
            100,
        );
        assert_ne!(generate(&s).unwrap(), generate(&other).unwrap());
    }

    fn sample_stats(counts: &[u64]) -> (f64, f64, f64) {
        let n = counts.len() as f64;
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
        let mut sorted: Vec<u64> = counts.to_vec();
        sorted.sort_unstable();
        let median = sorted[sorted.len() / 2] as f64;
        let m2 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
        let m3 = counts.iter().map(|&c| (c as f64 - mean).powi(3)).sum::<f64>() / n;
        let skewness = m3 / m2.powf(1.5);
        (mean, median, skewness)
    }

    #[test]
    fn lognormal_output_is_right_skewed() {
        for sigma in [1.0, 1.2] {
            let corpus = generate(&spec(
                GenDistribution::Lognormal { mu: 1.0, sigma },
                10_000,
                42,
            ))
            .unwrap();
            let counts: Vec<u64> = corpus.papers().iter().map(|p| p.citations).collect();
            let (mean, median, skewness) = sample_stats(&counts);
            assert!(mean > median, "sigma={sigma}: mean {mean} vs median {median}");
            assert!(skewness > 2.0, "sigma={sigma}: skewness {skewness}");
        }
    }

    #[test]
    fn power_law_mass_concentrates_at_zero() {
        let corpus = generate(&spec(
            GenDistribution::DiscretePowerLaw { alpha: 2.5, c_max: 100 },
            2_000,
            7,
        ))
        .unwrap();
        let mut freq = BTreeMap::new();
        for p in corpus.papers() {
            assert!(p.citations <= 100);
            *freq.entry(p.citations).or_insert(0u32) += 1;
        }
        let zero = freq.get(&0).copied().unwrap_or(0);
        assert!(zero > 500, "c=0 should dominate, got {zero}");
        assert!(zero > freq.get(&100).copied().unwrap_or(0));

        // heavier tails for smaller alpha, same seed
        let heavy = generate(&spec(
            GenDistribution::DiscretePowerLaw { alpha: 1.5, c_max: 100 },
            5_000,
            11,
        ))
        .unwrap();
        let light = generate(&spec(
            GenDistribution::DiscretePowerLaw { alpha: 3.0, c_max: 100 },
            5_000,
            11,
        ))
        .unwrap();
        let mean = |c: &Corpus| {
            c.papers().iter().map(|p| p.citations as f64).sum::<f64>() / c.len() as f64
        };
        assert!(mean(&heavy) > mean(&light));
    }

    #[test]
    fn unit_layout_assigns_consecutive_blocks() {
        let mut s = spec(GenDistribution::Constant { c: 1 }, 10, 5);
        s.unit_layout = vec![("A".to_string(), 3), ("B".to_string(), 4)];
        let corpus = generate(&s).unwrap();
        let a = corpus.subset(SYNTH_DIMENSION, "A");
        let b = corpus.subset(SYNTH_DIMENSION, "B");
        assert_eq!(a.papers.len(), 3);
        assert_eq!(b.papers.len(), 4);
        // remainder unlabeled
        let labeled: usize = corpus
            .papers()
            .iter()
            .filter(|p| p.units.contains_key(SYNTH_DIMENSION))
            .count();
        assert_eq!(labeled, 7);
    }

    #[test]
    fn generate_rejects_bad_specs() {
        assert!(generate(&spec(GenDistribution::Constant { c: 1 }, 0, 1)).is_err());
        let mut s = spec(GenDistribution::Constant { c: 1 }, 3, 1);
        s.unit_layout = vec![("A".to_string(), 4)];
        assert!(generate(&s).is_err());
        s.unit_layout = vec![("A".to_string(), 1), ("A".to_string(), 1)];
        assert!(generate(&s).is_err());
        assert!(generate(&spec(
            GenDistribution::Lognormal { mu: 1.0, sigma: -1.0 },
            3,
            1
        ))
        .is_err());
        assert!(generate(&spec(
            GenDistribution::DiscretePowerLaw { alpha: 0.0, c_max: 10 },
            3,
            1
        ))
        .is_err());
    }

    #[test]
    fn reversal_fixture_shape() {
        let corpus = reversal_fixture();
        assert_eq!(corpus.len(), 42);
        assert_eq!(corpus.labels(REVERSAL_DIMENSION).len(), 7);
        assert_eq!(corpus.refsets().len(), 1);
        assert_eq!(reversal_fixture(), corpus);
    }

    #[test]
    fn reversal_fixture_reverses_ranks() {
        let corpus = reversal_fixture();
        let scheme = PercentileScheme::quartiles();
        let by_mean = rank_units(
            &corpus,
            REVERSAL_DIMENSION,
            Indicator::Mncs,
            &scheme,
            TieRule::Midpoint,
            CountBasis::Cited,
        )
        .unwrap();
        let by_quantile = rank_units(
            &corpus,
            REVERSAL_DIMENSION,
            Indicator::I3Quantile,
            &scheme,
            TieRule::Midpoint,
            CountBasis::Cited,
        )
        .unwrap();

        let rank_of = |r: &crate::indicators::Ranking, unit: &str| {
            r.units.iter().find(|u| u.unit == unit).unwrap().rank
        };
        assert_eq!(by_mean.units[0].unit, "U1");
        assert_eq!(rank_of(&by_mean, "U6"), 6);
        assert_eq!(by_quantile.units[0].unit, "U6");
        assert_eq!(rank_of(&by_quantile, "U1"), 5);

        let cmp = compare_rankings(&by_mean, &by_quantile).unwrap();
        assert!(cmp.spearman_rho < 0.6, "rho = {}", cmp.spearman_rho);
        assert!((cmp.spearman_rho - 0.25).abs() < 1e-12);
    }

    /// Re-derives both fixture rankings from the raw counts with plain
    /// loops: unit means for the mean-based order, per-paper midpoint
    /// percentiles for the quantile order. No indicator code involved.
    #[test]
    fn reversal_fixture_hand_recomputation() {
        let corpus = reversal_fixture();
        let all: Vec<u64> = corpus.papers().iter().map(|p| p.citations).collect();
        let n = all.len() as f64;
        let grand_mean = all.iter().sum::<u64>() as f64 / n;

        let mut mean_by_unit = BTreeMap::new();
        let mut quantile_by_unit = BTreeMap::new();
        for unit in corpus.labels(REVERSAL_DIMENSION) {
            let counts: Vec<u64> = corpus
                .subset(REVERSAL_DIMENSION, unit)
                .papers
                .iter()
                .map(|p| p.citations)
                .collect();
            let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
            mean_by_unit.insert(unit.to_string(), mean / grand_mean);
            let quantile: f64 = counts
                .iter()
                .map(|&c| {
                    let below = all.iter().filter(|&&x| x < c).count() as f64;
                    let ties = all.iter().filter(|&&x| x == c).count() as f64;
                    100.0 * (below + 0.5 * ties) / n
                })
                .sum();
            quantile_by_unit.insert(unit.to_string(), quantile);
        }
        let order = |m: &BTreeMap<String, f64>| {
            let mut units: Vec<_> = m.iter().collect();
            units.sort_by(|a, b| b.1.partial_cmp(a.1).unwrap());
            units.into_iter().map(|(u, _)| u.clone()).collect::<Vec<_>>()
        };
        assert_eq!(
            order(&mean_by_unit),
            vec!["U1", "U2", "U3", "U4", "U5", "U6", "U7"]
        );
        assert_eq!(
            order(&quantile_by_unit),
            vec!["U6", "U2", "U3", "U4", "U1", "U5", "U7"]
        );
    }
}
