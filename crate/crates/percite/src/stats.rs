//! Non-parametric tests of observed class distributions against
//! expectations derived from the reference set.
//!
//! Evaluated sets are treated as subsets of their reference set, not as
//! independent samples: expected proportions come from scoring the whole
//! reference set, and the subset is never removed from it.

use serde::Serialize;

use crate::error::Error;
use crate::special::{erfc, regularized_gamma_q};

/// Observed/expected/standardized-residual triple for one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassStat {
    pub observed: f64,
    pub expected: f64,
    pub std_residual: f64,
}

/// Outcome of one significance test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    #[serde(rename = "test")]
    pub test_name: String,
    pub statistic: f64,
    /// Degrees of freedom where the test has them (chi-square).
    pub df: Option<u64>,
    /// Two-sided unless the test is inherently one-tailed; always in [0, 1].
    pub p_value: f64,
    pub classes: Vec<ClassStat>,
    /// Diagnostics that do not invalidate the result (small expected
    /// counts, approximation fallbacks).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Expected per-class counts for a subset of size `n` under per-class
/// `proportions` (which must sum to 1). Real-valued, never rounded.
pub fn expected_counts(n: u64, proportions: &[f64]) -> Result<Vec<f64>, Error> {
    if proportions.is_empty() {
        return Err(Error::invalid("expected_counts: no classes"));
    }
    if let Some(bad) = proportions.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::invalid(format!(
            "expected_counts: proportions must be finite and non-negative (got {bad})"
        )));
    }
    let sum: f64 = proportions.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "expected_counts: proportions sum to {sum}, not 1"
        )));
    }
    Ok(proportions.iter().map(|p| n as f64 * p).collect())
}

/// Chi-square goodness of fit of observed class counts against expected
/// real-valued counts. `df = classes − 1`; the p-value is the upper tail of
/// the chi-square distribution.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<TestResult, Error> {
    if observed.len() != expected.len() {
        return Err(Error::invalid(format!(
            "chi-square: {} observed classes vs {} expected",
            observed.len(),
            expected.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::invalid(
            "chi-square needs at least two classes".to_string(),
        ));
    }
    for (k, e) in expected.iter().enumerate() {
        if !e.is_finite() || *e <= 0.0 {
            return Err(Error::invalid(format!(
                "chi-square: expected count {e} in class {}; merge classes so every expected count is positive",
                k + 1
            )));
        }
    }
    let total_obs: u64 = observed.iter().sum();
    let total_exp: f64 = expected.iter().sum();
    let tol = 1e-6 * total_exp.max(1.0);
    if (total_obs as f64 - total_exp).abs() > tol {
        return Err(Error::invalid(format!(
            "chi-square: observed total {total_obs} does not match expected total {total_exp}"
        )));
    }

    let mut statistic = 0.0;
    let mut classes = Vec::with_capacity(observed.len());
    let mut warnings = Vec::new();
    for (k, (&o, &e)) in observed.iter().zip(expected).enumerate() {
        let o = o as f64;
        let diff = o - e;
        statistic += diff * diff / e;
        classes.push(ClassStat {
            observed: o,
            expected: e,
            std_residual: diff / e.sqrt(),
        });
        if e < 5.0 {
            warnings.push(format!(
                "class {}: expected count {e:.3} below 5; chi-square approximation may be unreliable",
                k + 1
            ));
        }
    }
    let df = (observed.len() - 1) as u64;
    let p_value = regularized_gamma_q(df as f64 / 2.0, statistic / 2.0).clamp(0.0, 1.0);
    Ok(TestResult {
        test_name: "chi_square_gof".to_string(),
        statistic,
        df: Some(df),
        p_value,
        classes,
        warnings,
    })
}

/// Two-sided z-test of one class proportion: observed `o` of `n` subset
/// papers in the class, against reference proportion `pi` from a reference
/// set of size `reference_n` (the subset included).
pub fn ztest_class_proportion(
    observed: u64,
    n: u64,
    pi: f64,
    reference_n: u64,
) -> Result<TestResult, Error> {
    if n == 0 {
        return Err(Error::invalid("z-test: empty subset"));
    }
    if n > reference_n {
        return Err(Error::invalid(format!(
            "z-test: subset size {n} exceeds reference size {reference_n}"
        )));
    }
    if observed > n {
        return Err(Error::invalid(format!(
            "z-test: observed {observed} exceeds subset size {n}"
        )));
    }
    if !pi.is_finite() || pi <= 0.0 || pi >= 1.0 {
        return Err(Error::invalid(format!(
            "z-test: degenerate class proportion {pi}"
        )));
    }
    let rate = observed as f64 / n as f64;
    let se = (pi * (1.0 - pi) / n as f64).sqrt();
    let z = (rate - pi) / se;
    let p_value = erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0);
    Ok(TestResult {
        test_name: "class_proportion_z".to_string(),
        statistic: z,
        df: None,
        p_value,
        classes: vec![ClassStat {
            observed: observed as f64,
            expected: n as f64 * pi,
            std_residual: z,
        }],
        warnings: Vec::new(),
    })
}

/// Tie groups of the pooled sample: (group size, members from A, doubled
/// midrank). Doubling keeps midranks integral.
fn tie_groups(pooled: &[(f64, bool)]) -> Vec<(usize, usize, i64)> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // 1-based ranks i+1 ..= j, midrank (i+1 + j)/2, doubled i+j+1
        let a_members = pooled[i..j].iter().filter(|(_, is_a)| *is_a).count();
        groups.push((j - i, a_members, (i + j + 1) as i64));
        i = j;
    }
    groups
}

/// Number of label assignments per doubled-rank-sum of the smaller set,
/// computed group by group. Counts are exact integers held in f64 (they
/// only ever add and multiply by small binomials).
fn rank_sum_distribution(groups: &[(usize, usize, i64)], m: usize, n_total: usize) -> Vec<f64> {
    let width = 2 * n_total * m + 1;
    let mut ways = vec![vec![0.0f64; width]; m + 1];
    ways[0][0] = 1.0;
    for &(g, _, dmid) in groups {
        let jmax = g.min(m);
        let mut binom = vec![1.0f64; jmax + 1];
        for j in 1..=jmax {
            binom[j] = binom[j - 1] * (g - j + 1) as f64 / j as f64;
        }
        let mut next = vec![vec![0.0f64; width]; m + 1];
        for k in 0..=m {
            for s in 0..width {
                let w = ways[k][s];
                if w == 0.0 {
                    continue;
                }
                for j in 0..=g.min(m - k) {
                    next[k + j][s + j * dmid as usize] += w * binom[j];
                }
            }
        }
        ways = next;
    }
    ways.pop().expect("m+1 rows")
}

/// How the Mann-Whitney two-sided p-value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UMethod {
    /// Tail of the permutation distribution of labels; exact, feasible
    /// only for small `n_A · n_B`.
    Exact,
    /// Normal approximation with tie-corrected variance and a 0.5
    /// continuity correction.
    NormalApprox,
}

/// Largest `n_A · n_B` the exact method accepts before the distribution
/// table gets too large.
const U_EXACT_CAP: usize = 10_000;

/// Mann-Whitney U between two sets of counts, with midrank tie handling.
///
/// For `n_A · n_B ≤ 2000` the two-sided p-value is exact over the
/// permutation distribution of labels (all tail comparisons in integer
/// arithmetic); larger inputs use the normal approximation. The reported
/// statistic is U of `a`.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<TestResult, Error> {
    let method = if a.len() * b.len() <= 2000 {
        UMethod::Exact
    } else {
        UMethod::NormalApprox
    };
    mann_whitney_u_with(a, b, method)
}

/// [`mann_whitney_u`] with the p-value method chosen by the caller
/// instead of by input size.
pub fn mann_whitney_u_with(a: &[f64], b: &[f64], method: UMethod) -> Result<TestResult, Error> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid(
            "mann-whitney: both sets must be non-empty".to_string(),
        ));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::invalid(
            "mann-whitney: counts must be finite".to_string(),
        ));
    }
    let (n_a, n_b) = (a.len(), b.len());
    if method == UMethod::Exact && n_a * n_b > U_EXACT_CAP {
        return Err(Error::invalid(format!(
            "mann-whitney: exact method infeasible for n_A * n_B = {} (cap {U_EXACT_CAP})",
            n_a * n_b
        )));
    }
    let n = n_a + n_b;
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
    let groups = tie_groups(&pooled);

    // doubled rank sum of A; 2·U_A = 2·R_A − n_A(n_A+1)
    let r2_a: i64 = groups.iter().map(|&(_, ka, dmid)| ka as i64 * dmid).sum();
    let u2_a = r2_a - (n_a * (n_a + 1)) as i64;
    let u_a = u2_a as f64 / 2.0;

    if method == UMethod::Exact {
        // run the permutation distribution over the smaller set; deviations
        // |2U − 2μ| are identical for both sets
        let (m, groups_m): (usize, Vec<(usize, usize, i64)>) = if n_a <= n_b {
            (n_a, groups.clone())
        } else {
            (
                n_b,
                groups
                    .iter()
                    .map(|&(g, ka, dmid)| (g, g - ka, dmid))
                    .collect(),
            )
        };
        let r2_obs: i64 = groups_m
            .iter()
            .map(|&(_, km, dmid)| km as i64 * dmid)
            .sum();
        // dev = |2U_m − 2μ_m| = |S − m(m+1) − m·(n−m)| = |S − m(n+1)|
        let center = (m * (n + 1)) as i64;
        let dev_obs = (r2_obs - center).abs();
        let dist = rank_sum_distribution(&groups_m, m, n);
        let mut tail = 0.0;
        let mut total = 0.0;
        for (s, &w) in dist.iter().enumerate() {
            total += w;
            if (s as i64 - center).abs() >= dev_obs {
                tail += w;
            }
        }
        return Ok(TestResult {
            test_name: "mann_whitney_u_exact".to_string(),
            statistic: u_a,
            df: None,
            p_value: (tail / total).clamp(0.0, 1.0),
            classes: Vec::new(),
            warnings: Vec::new(),
        });
    }

    let mu = n_a as f64 * n_b as f64 / 2.0;
    let tie_term: f64 = groups
        .iter()
        .map(|&(g, _, _)| {
            let t = g as f64;
            t * t * t - t
        })
        .sum();
    let n_f = n as f64;
    let var = n_a as f64 * n_b as f64 / 12.0 * ((n_f + 1.0) - tie_term / (n_f * (n_f - 1.0)));
    let (p_value, warnings) = if var <= 0.0 {
        // all counts identical: U is degenerate at its mean
        (1.0, vec!["all pooled counts tied; U is degenerate".to_string()])
    } else {
        let z = ((u_a - mu).abs() - 0.5).max(0.0) / var.sqrt();
        (
            erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0),
            Vec::new(),
        )
    };
    Ok(TestResult {
        test_name: "mann_whitney_u_normal".to_string(),
        statistic: u_a,
        df: None,
        p_value,
        classes: Vec::new(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expected_counts_worked_examples() {
        let q = expected_counts(100, &[0.25, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(q, vec![25.0, 25.0, 25.0, 25.0]);

        let zero = expected_counts(0, &[0.5, 0.5]).unwrap();
        assert_eq!(zero, vec![0.0, 0.0]);

        let nsb = expected_counts(40, &[0.50, 0.25, 0.15, 0.05, 0.04, 0.01]).unwrap();
        assert_eq!(nsb, vec![20.0, 10.0, 6.0, 2.0, 1.6, 0.4]);

        assert!(expected_counts(10, &[0.6, 0.6]).is_err());
        assert!(expected_counts(10, &[]).is_err());
        assert!(expected_counts(10, &[1.2, -0.2]).is_err());
    }

    #[test]
    fn chi_square_exact_fit_has_p_one() {
        let r = chi_square_gof(&[25, 25, 25, 25], &[25.0, 25.0, 25.0, 25.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.df, Some(3));
        assert!(r.classes.iter().all(|c| c.std_residual == 0.0));
    }

    #[test]
    fn chi_square_thirty_seventy() {
        let r = chi_square_gof(&[30, 70], &[50.0, 50.0]).unwrap();
        assert_eq!(r.statistic, 16.0);
        assert_eq!(r.df, Some(1));
        // reference value from high-precision evaluation of the upper tail
        assert!((r.p_value - 6.33424836662398e-5).abs() < 1e-12, "{}", r.p_value);
        // residuals carry sign
        assert!(r.classes[0].std_residual < 0.0);
        assert!(r.classes[1].std_residual > 0.0);
    }

    #[test]
    fn chi_square_critical_value_near_five_percent() {
        let p = regularized_gamma_q(0.5, 3.841 / 2.0);
        assert!((p - 0.05).abs() < 1e-3);
        assert!((p - 0.0500136837639567).abs() < 1e-12);
    }

    #[test]
    fn chi_square_rejects_bad_input() {
        assert!(chi_square_gof(&[10], &[10.0]).is_err());
        assert!(chi_square_gof(&[10, 10], &[10.0]).is_err());
        let zero_exp = chi_square_gof(&[10, 10], &[20.0, 0.0]).unwrap_err();
        assert!(zero_exp.to_string().contains("merge classes"));
        assert!(chi_square_gof(&[10, 10], &[5.0, 5.0]).is_err()); // totals differ
    }

    #[test]
    fn chi_square_warns_on_small_expected_counts() {
        let r = chi_square_gof(&[3, 17], &[2.0, 18.0]).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("below 5"));
    }

    #[test]
    fn chi_square_p_monotone_in_statistic() {
        for df in [1u64, 3, 9] {
            let mut last = 1.0;
            for step in 1..30 {
                let stat = step as f64 * 0.7;
                let p = regularized_gamma_q(df as f64 / 2.0, stat / 2.0);
                assert!(p < last, "df={df} stat={stat}");
                last = p;
            }
        }
    }

    #[test]
    fn chi_square_invariant_under_class_permutation() {
        let obs = [12u64, 30, 8, 50];
        let exp = [20.0, 25.0, 15.0, 40.0];
        let base = chi_square_gof(&obs, &exp).unwrap();
        let perm = [2usize, 0, 3, 1];
        let obs_p: Vec<u64> = perm.iter().map(|&i| obs[i]).collect();
        let exp_p: Vec<f64> = perm.iter().map(|&i| exp[i]).collect();
        let permuted = chi_square_gof(&obs_p, &exp_p).unwrap();
        assert_eq!(base.statistic, permuted.statistic);
        assert_eq!(base.p_value, permuted.p_value);
    }

    #[test]
    fn ztest_at_expectation_is_null() {
        let r = ztest_class_proportion(25, 100, 0.25, 400).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.classes[0].expected, 25.0);
    }

    #[test]
    fn ztest_worked_example() {
        let r = ztest_class_proportion(20, 100, 0.10, 1000).unwrap();
        assert!((r.statistic - 10.0 / 3.0).abs() < 1e-12);
        assert!((r.p_value - 8.6e-4).abs() < 5e-6, "{}", r.p_value);
        // reference value from high-precision normal tail
        assert!((r.p_value - 8.5812066639367e-4).abs() < 1e-12);
    }

    #[test]
    fn ztest_rejects_degenerate_input() {
        assert!(ztest_class_proportion(0, 0, 0.5, 10).is_err());
        assert!(ztest_class_proportion(5, 20, 0.0, 100).is_err());
        assert!(ztest_class_proportion(5, 20, 1.0, 100).is_err());
        assert!(ztest_class_proportion(5, 20, 0.5, 10).is_err()); // n > N
        assert!(ztest_class_proportion(25, 20, 0.5, 100).is_err()); // o > n
    }

    #[test]
    fn mann_whitney_extreme_and_symmetric_cases() {
        let a = [10.0, 11.0, 12.0];
        let b = [1.0, 2.0];
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.statistic, 6.0); // n_A · n_B

        let same = [3.0, 7.0, 7.0, 9.0];
        let r = mann_whitney_u(&same, &same).unwrap();
        assert_eq!(r.statistic, 8.0); // n²/2
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn mann_whitney_small_exact_example() {
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.test_name, "mann_whitney_u_exact");
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn mann_whitney_rejects_empty() {
        assert!(mann_whitney_u(&[], &[1.0]).is_err());
        assert!(mann_whitney_u(&[1.0], &[]).is_err());
    }

    #[test]
    fn forced_method_matches_auto_and_respects_cap() {
        let a = [1.0, 5.0, 7.0, 9.0];
        let b = [2.0, 3.0, 8.0];
        let auto = mann_whitney_u(&a, &b).unwrap();
        let exact = mann_whitney_u_with(&a, &b, UMethod::Exact).unwrap();
        assert_eq!(auto.test_name, "mann_whitney_u_exact");
        assert_eq!(auto.p_value, exact.p_value);

        let normal = mann_whitney_u_with(&a, &b, UMethod::NormalApprox).unwrap();
        assert_eq!(normal.test_name, "mann_whitney_u_normal");
        assert_eq!(normal.statistic, exact.statistic);

        let big = vec![0.0; 150];
        assert!(mann_whitney_u_with(&big, &big, UMethod::Exact).is_err());
    }

    /// U(A, B) by direct pair counting: Σ [a > b] + ½[a = b].
    fn pair_count_u(a: &[f64], b: &[f64]) -> f64 {
        let mut u = 0.0;
        for &x in a {
            for &y in b {
                if x > y {
                    u += 1.0;
                } else if x == y {
                    u += 0.5;
                }
            }
        }
        u
    }

    /// Literal enumeration oracle: walk every way to label the pooled
    /// multiset, score U by pair counting, accumulate the two-sided tail.
    fn enumeration_oracle(a: &[f64], b: &[f64]) -> f64 {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let n = pooled.len();
        let n_a = a.len();
        let mu = n_a as f64 * b.len() as f64 / 2.0;
        let dev_obs = (pair_count_u(a, b) - mu).abs();
        let mut tail = 0usize;
        let mut total = 0usize;
        let mut index = vec![0usize; n_a];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            start: usize,
            depth: usize,
            n: usize,
            index: &mut Vec<usize>,
            pooled: &[f64],
            mu: f64,
            dev_obs: f64,
            tail: &mut usize,
            total: &mut usize,
        ) {
            let n_a = index.len();
            if depth == n_a {
                let set_a: Vec<f64> = index.iter().map(|&i| pooled[i]).collect();
                let set_b: Vec<f64> = (0..n)
                    .filter(|i| !index.contains(i))
                    .map(|i| pooled[i])
                    .collect();
                let dev = (pair_count_u(&set_a, &set_b) - mu).abs();
                *total += 1;
                if dev >= dev_obs - 1e-9 {
                    *tail += 1;
                }
                return;
            }
            for i in start..n {
                index[depth] = i;
                rec(i + 1, depth + 1, n, index, pooled, mu, dev_obs, tail, total);
            }
        }
        rec(0, 0, n, &mut index, &pooled, mu, dev_obs, &mut tail, &mut total);
        tail as f64 / total as f64
    }

    #[test]
    fn mann_whitney_exact_matches_enumeration_oracle() {
        let cases: [(&[f64], &[f64]); 6] = [
            (&[1.0, 2.0], &[3.0, 4.0]),
            (&[1.0, 5.0, 9.0], &[2.0, 2.0, 7.0]),
            (&[0.0, 0.0, 1.0], &[0.0, 2.0]),
            (&[4.0], &[1.0, 2.0, 3.0, 4.0, 5.0]),
            (&[2.0, 2.0, 2.0], &[2.0, 2.0]),
            (&[10.0, 3.0, 8.0, 8.0], &[1.0, 8.0, 2.0]),
        ];
        for (a, b) in cases {
            let engine = mann_whitney_u(a, b).unwrap();
            assert_eq!(engine.test_name, "mann_whitney_u_exact");
            let oracle = enumeration_oracle(a, b);
            assert!(
                (engine.p_value - oracle).abs() < 1e-12,
                "a={a:?} b={b:?}: {} vs {oracle}",
                engine.p_value
            );
        }
    }

    #[test]
    fn mann_whitney_normal_path_reasonable() {
        // force the approximation with n_A·n_B > 2000
        let a: Vec<f64> = (0..50).map(|i| (i * 7 % 101) as f64).collect();
        let b: Vec<f64> = (0..50).map(|i| (i * 13 % 97) as f64 + 0.5).collect();
        let r = mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.test_name, "mann_whitney_u_normal");
        assert!((0.0..=1.0).contains(&r.p_value));
        assert!(r.p_value > 0.05, "similar distributions should not reject");
    }

    #[test]
    fn test_result_serializes_with_interface_field_names() {
        let r = chi_square_gof(&[30, 70], &[50.0, 50.0]).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"test\":\"chi_square_gof\""));
        assert!(json.contains("\"statistic\""));
        assert!(json.contains("\"df\":1"));
        assert!(json.contains("\"p_value\""));
        assert!(json.contains("\"classes\""));
    }

    proptest! {
        #[test]
        fn midrank_u_equals_pair_count_u(
            a in prop::collection::vec(0u32..8, 1..8),
            b in prop::collection::vec(0u32..8, 1..8),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let r = mann_whitney_u(&a, &b).unwrap();
            prop_assert_eq!(r.statistic, pair_count_u(&a, &b));
        }

        #[test]
        fn exact_p_matches_enumeration(
            a in prop::collection::vec(0u32..5, 1..5),
            b in prop::collection::vec(0u32..5, 1..5),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let engine = mann_whitney_u(&a, &b).unwrap();
            let oracle = enumeration_oracle(&a, &b);
            prop_assert!((engine.p_value - oracle).abs() < 1e-12);
        }

        #[test]
        fn mann_whitney_symmetric_in_arguments(
            a in prop::collection::vec(0u32..10, 1..10),
            b in prop::collection::vec(0u32..10, 1..10),
        ) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            let ab = mann_whitney_u(&a, &b).unwrap();
            let ba = mann_whitney_u(&b, &a).unwrap();
            prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
            // U_A + U_B = n_A·n_B
            prop_assert_eq!(ab.statistic + ba.statistic, (a.len() * b.len()) as f64);
        }
    }
}
