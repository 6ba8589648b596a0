//! Batch CLI over the library: ingest/validate, per-unit reports,
//! subset significance tests, ranking comparison, synthetic corpora.
//!
//! Exit codes: 0 success, 1 internal failure, 2 input or usage error.
//! Outputs depend only on the flags and input bytes.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use percite::corpus::{Corpus, Format};
use percite::fractional::{fractional_counts, ingest_events, DenominatorMode};
use percite::indicators::{compare_rankings, i3, i3_share, rank_units, CountBasis, I3Form, Indicator};
use percite::percentile::{PercentileScheme, TieRule};
use percite::report::{build_report, fmt_sig};
use percite::stats::{chi_square_gof, ztest_class_proportion, TestResult};
use percite::synth::{generate, reversal_fixture, GenDistribution, GenSpec};

#[derive(Parser)]
#[command(
    name = "percite",
    version,
    about = "Percentile-based citation impact reports",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a corpus (and optionally citing events) and summarize it
    Ingest(IngestCmd),
    /// Per-unit indicator report for one dimension
    Compute(ComputeCmd),
    /// Significance tests of one unit subset against its reference sets
    Test(TestCmd),
    /// Compare the rankings two indicators induce on the same dimension
    Compare(CompareCmd),
    /// Generate a synthetic corpus
    Synth(SynthCmd),
}

/// Corpus input plus the optional fractional-counting pipeline.
#[derive(Args)]
struct InputArgs {
    /// Corpus file; format inferred from the .csv / .jsonl extension
    #[arg(long)]
    input: PathBuf,
    /// Citing-events file (citing_id, cited_id, nr) for fractional counts
    #[arg(long)]
    events: Option<PathBuf>,
    /// Fractional weight denominator: total | in-corpus
    #[arg(long, default_value = "total")]
    denominator: String,
    /// Score fractional citation counts instead of integer counts
    /// (requires --events)
    #[arg(long)]
    fractional: bool,
}

#[derive(Args)]
struct SchemeArgs {
    /// Builtin scheme (quartiles | nsb6 | top10) or path to a scheme JSON
    #[arg(long, default_value = "nsb6")]
    scheme: String,
    /// Tie rule: strictly_below | below_or_equal | midpoint
    #[arg(long, default_value = "midpoint")]
    tie_rule: String,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Summary format: text | json
    #[arg(long, default_value = "text")]
    format: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ComputeCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Unit dimension to report on (e.g. journal)
    #[arg(long)]
    dimension: String,
    /// Indicator the rows are sorted by
    #[arg(long, default_value = "i3_quantile")]
    indicator: String,
    /// Report format: csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TestCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Unit dimension of the subset
    #[arg(long)]
    dimension: String,
    /// Unit label selecting the subset
    #[arg(long)]
    label: String,
    /// Report format: json | csv
    #[arg(long, default_value = "json")]
    format: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Unit dimension to rank
    #[arg(long)]
    dimension: String,
    /// Indicators to compare; pass exactly twice
    #[arg(long = "indicator")]
    indicators: Vec<String>,
    /// Report format: json | csv
    #[arg(long, default_value = "json")]
    format: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SynthCmd {
    /// Number of papers to generate
    #[arg(long)]
    n: Option<usize>,
    /// PRNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Distribution: lognormal | power-law | constant
    #[arg(long, default_value = "lognormal")]
    distribution: String,
    /// Lognormal location
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Lognormal scale
    #[arg(long, default_value_t = 1.2)]
    sigma: f64,
    /// Power-law exponent
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    /// Power-law maximum count
    #[arg(long, default_value_t = 1000)]
    cmax: u64,
    /// Constant citation count
    #[arg(long, default_value_t = 1)]
    value: u64,
    /// Unit layout as LABEL:COUNT,LABEL:COUNT,... (consecutive blocks)
    #[arg(long)]
    units: Option<String>,
    /// Emit a frozen fixture instead of sampling: reversal
    #[arg(long)]
    fixture: Option<String>,
    /// Corpus format: csv | jsonl
    #[arg(long, default_value = "csv")]
    format: String,
    #[command(flatten)]
    output: OutputArgs,
}

/// Input/usage problems exit 2; failures of the run itself exit 1.
enum CliError {
    Input(String),
    Internal(String),
}

impl From<percite::Error> for CliError {
    fn from(e: percite::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Ingest(cmd) => cmd_ingest(cmd),
        Cmd::Compute(cmd) => cmd_compute(cmd),
        Cmd::Test(cmd) => cmd_test(cmd),
        Cmd::Compare(cmd) => cmd_compare(cmd),
        Cmd::Synth(cmd) => cmd_synth(cmd),
    }
}

fn detect_format(path: &Path) -> Result<Format, CliError> {
    Format::from_path(path).ok_or_else(|| {
        CliError::Input(format!(
            "{}: cannot infer format; use a .csv or .jsonl extension",
            path.display()
        ))
    })
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    let format = detect_format(path)?;
    Corpus::ingest(open(path)?, format)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl InputArgs {
    /// Loads the corpus, runs fractional counting when events are given,
    /// and picks the count basis.
    fn load(&self) -> Result<(Corpus, CountBasis), CliError> {
        let corpus = load_corpus(&self.input)?;
        let corpus = match &self.events {
            Some(path) => {
                let format = detect_format(path)?;
                let events = ingest_events(open(path)?, format)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                let mode: DenominatorMode = self.denominator.parse()?;
                fractional_counts(&events, &corpus, mode)?
            }
            None => {
                if self.fractional {
                    return Err(CliError::Input(
                        "--fractional requires --events".to_string(),
                    ));
                }
                corpus
            }
        };
        let basis = if self.fractional {
            CountBasis::FractionalCiting
        } else {
            CountBasis::Cited
        };
        Ok((corpus, basis))
    }
}

impl SchemeArgs {
    fn resolve(&self) -> Result<(PercentileScheme, TieRule), CliError> {
        let scheme = match PercentileScheme::builtin(&self.scheme) {
            Some(s) => s,
            None => {
                let path = Path::new(&self.scheme);
                let json = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Input(format!(
                        "scheme {:?} is not a builtin ({}) and not a readable file: {e}",
                        self.scheme,
                        PercentileScheme::BUILTIN_NAMES.join(", ")
                    ))
                })?;
                PercentileScheme::from_json(&json)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            }
        };
        let rule: TieRule = self.tie_rule.parse()?;
        Ok((scheme, rule))
    }
}

impl OutputArgs {
    fn write(&self, content: &str) -> Result<(), CliError> {
        let mut content = content.to_string();
        if !content.ends_with('\n') {
            content.push('\n');
        }
        match &self.out {
            Some(path) => std::fs::write(path, content)
                .map_err(|e| CliError::Internal(format!("{}: {e}", path.display()))),
            None => std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Internal(format!("stdout: {e}"))),
        }
    }
}

fn cmd_ingest(cmd: IngestCmd) -> Result<(), CliError> {
    let (corpus, _) = cmd.input.load()?;
    let dimensions: Vec<&str> = corpus.dimensions().into_iter().collect();
    let summary = match cmd.format.as_str() {
        "text" => {
            let mut s = format!(
                "papers: {}\nreference_sets: {}\n",
                corpus.len(),
                corpus.refsets().len()
            );
            s.push_str(&format!("dimensions: {}\n", dimensions.join(", ")));
            s
        }
        "json" => {
            #[derive(Serialize)]
            struct Summary<'a> {
                papers: usize,
                reference_sets: usize,
                dimensions: Vec<&'a str>,
            }
            serde_json::to_string_pretty(&Summary {
                papers: corpus.len(),
                reference_sets: corpus.refsets().len(),
                dimensions,
            })
            .map_err(|e| CliError::Internal(e.to_string()))?
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown ingest format {other:?} (expected text or json)"
            )));
        }
    };
    cmd.output.write(&summary)
}

fn cmd_compute(cmd: ComputeCmd) -> Result<(), CliError> {
    let (corpus, basis) = cmd.input.load()?;
    let (scheme, rule) = cmd.scheme.resolve()?;
    let indicator: Indicator = cmd.indicator.parse()?;
    let report = build_report(&corpus, &cmd.dimension, indicator, &scheme, rule, basis)?;
    let rendered = match cmd.format.as_str() {
        "csv" => report.to_csv(),
        "json" => report.to_json(),
        other => {
            return Err(CliError::Input(format!(
                "unknown format {other:?} (expected csv or json)"
            )));
        }
    };
    cmd.output.write(&rendered)
}

#[derive(Serialize)]
struct ClassZEntry {
    /// 1-based class index, lowest class first.
    class: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<TestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

#[derive(Serialize)]
struct SubsetTestReport {
    dimension: String,
    label: String,
    n_subset: u64,
    n_reference: u64,
    scheme: String,
    tie_rule: TieRule,
    basis: CountBasis,
    share_pct: Option<f64>,
    chi_square: TestResult,
    class_z: Vec<ClassZEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn cmd_test(cmd: TestCmd) -> Result<(), CliError> {
    let (corpus, basis) = cmd.input.load()?;
    let (scheme, rule) = cmd.scheme.resolve()?;
    if corpus.is_empty() {
        return Err(CliError::Input("no papers".to_string()));
    }
    let subset = corpus.subset(&cmd.dimension, &cmd.label);
    if !subset.dimension_known {
        return Err(CliError::Input(format!(
            "unknown dimension {:?} (no paper carries it)",
            cmd.dimension
        )));
    }
    if subset.papers.is_empty() {
        return Err(CliError::Input(format!(
            "empty subset: no paper labeled {:?} in dimension {:?}",
            cmd.label, cmd.dimension
        )));
    }

    let mut warnings = Vec::new();

    // observed class counts of the subset
    let scored = i3(&subset.papers, &corpus, &scheme, rule, basis)?;
    let observed = scored.class_counts;

    // expected counts: each paper contributes its reference set's class
    // proportions (subset stays inside the reference set)
    let mut prop_cache: std::collections::BTreeMap<&str, Vec<f64>> =
        std::collections::BTreeMap::new();
    let mut expected = vec![0.0f64; scheme.classes()];
    for paper in &subset.papers {
        let key = paper.refset_key.as_str();
        let refset = match basis {
            CountBasis::Cited => corpus
                .refset(key)
                .ok_or_else(|| CliError::Input(format!("unresolved reference set {key:?}")))?,
            CountBasis::FractionalCiting => corpus.fractional_refset(key).ok_or_else(|| {
                CliError::Input(format!("no fractional reference set under {key:?}"))
            })?,
        };
        let props = prop_cache
            .entry(key)
            .or_insert_with(|| scheme.expected_class_proportions(refset, rule));
        for (e, p) in expected.iter_mut().zip(props.iter()) {
            *e += p;
        }
    }

    let chi_square = chi_square_gof(&observed, &expected)?;

    let n_subset = subset.papers.len() as u64;
    let n_reference = corpus.len() as u64;
    let mut class_z = Vec::with_capacity(scheme.classes());
    for (k, (&o, &e)) in observed.iter().zip(&expected).enumerate() {
        let pi = e / n_subset as f64;
        let entry = if pi <= 0.0 || pi >= 1.0 {
            ClassZEntry {
                class: k + 1,
                result: None,
                skipped: Some(format!("degenerate expected proportion {pi}")),
            }
        } else {
            ClassZEntry {
                class: k + 1,
                result: Some(ztest_class_proportion(o, n_subset, pi, n_reference)?),
                skipped: None,
            }
        };
        class_z.push(entry);
    }

    let all: Vec<_> = corpus.papers().iter().collect();
    let share_pct = match i3_share(
        &subset.papers,
        &all,
        &corpus,
        &scheme,
        rule,
        basis,
        I3Form::Quantile,
    ) {
        Ok(s) => Some(s),
        Err(percite::Error::Undefined(msg)) => {
            warnings.push(format!("share undefined: {msg}"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let report = SubsetTestReport {
        dimension: cmd.dimension,
        label: cmd.label,
        n_subset,
        n_reference,
        scheme: scheme.name().to_string(),
        tie_rule: rule,
        basis,
        share_pct,
        chi_square,
        class_z,
        warnings,
    };
    let rendered = match cmd.format.as_str() {
        "json" => {
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?
        }
        "csv" => test_report_csv(&report),
        other => {
            return Err(CliError::Input(format!(
                "unknown format {other:?} (expected json or csv)"
            )));
        }
    };
    cmd.output.write(&rendered)
}

/// Tidy CSV of a subset test report: one row for the share, one per class
/// for each test; statistic/df/p repeat on class rows.
fn test_report_csv(report: &SubsetTestReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "test",
        "class",
        "observed",
        "expected",
        "std_residual",
        "statistic",
        "df",
        "p_value",
    ])
    .expect("in-memory write");
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| fmt_sig(x, 6));
    w.write_record([
        "i3_share".to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        opt(report.share_pct),
        String::new(),
        String::new(),
    ])
    .expect("in-memory write");
    let chi = &report.chi_square;
    for (k, class) in chi.classes.iter().enumerate() {
        w.write_record([
            chi.test_name.clone(),
            (k + 1).to_string(),
            fmt_sig(class.observed, 6),
            fmt_sig(class.expected, 6),
            fmt_sig(class.std_residual, 6),
            fmt_sig(chi.statistic, 6),
            chi.df.map_or_else(String::new, |d| d.to_string()),
            fmt_sig(chi.p_value, 6),
        ])
        .expect("in-memory write");
    }
    for entry in &report.class_z {
        let Some(z) = &entry.result else { continue };
        let class = &z.classes[0];
        w.write_record([
            z.test_name.clone(),
            entry.class.to_string(),
            fmt_sig(class.observed, 6),
            fmt_sig(class.expected, 6),
            fmt_sig(class.std_residual, 6),
            fmt_sig(z.statistic, 6),
            String::new(),
            fmt_sig(z.p_value, 6),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[derive(Serialize)]
struct CompareReport {
    dimension: String,
    scheme: String,
    tie_rule: TieRule,
    basis: CountBasis,
    #[serde(flatten)]
    comparison: percite::indicators::RankComparison,
}

fn cmd_compare(cmd: CompareCmd) -> Result<(), CliError> {
    if cmd.indicators.len() != 2 {
        return Err(CliError::Input(format!(
            "--indicator must be given exactly twice (got {})",
            cmd.indicators.len()
        )));
    }
    let (corpus, basis) = cmd.input.load()?;
    let (scheme, rule) = cmd.scheme.resolve()?;
    if corpus.is_empty() {
        return Err(CliError::Input("no papers".to_string()));
    }
    let ind_a: Indicator = cmd.indicators[0].parse()?;
    let ind_b: Indicator = cmd.indicators[1].parse()?;
    let rank_a = rank_units(&corpus, &cmd.dimension, ind_a, &scheme, rule, basis)?;
    let rank_b = rank_units(&corpus, &cmd.dimension, ind_b, &scheme, rule, basis)?;
    let comparison = compare_rankings(&rank_a, &rank_b)?;
    let report = CompareReport {
        dimension: cmd.dimension,
        scheme: scheme.name().to_string(),
        tie_rule: rule,
        basis,
        comparison,
    };
    let rendered = match cmd.format.as_str() {
        "json" => {
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?
        }
        "csv" => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "unit",
                "value_a",
                "value_b",
                "rank_a",
                "rank_b",
                "delta",
                "spearman_rho",
            ])
            .expect("in-memory write");
            let opt = |v: Option<f64>| v.map_or_else(String::new, |x| fmt_sig(x, 6));
            for u in &report.comparison.units {
                w.write_record([
                    u.unit.clone(),
                    opt(u.value_a),
                    opt(u.value_b),
                    u.rank_a.to_string(),
                    u.rank_b.to_string(),
                    u.delta.to_string(),
                    fmt_sig(report.comparison.spearman_rho, 6),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown format {other:?} (expected json or csv)"
            )));
        }
    };
    cmd.output.write(&rendered)
}

fn parse_unit_layout(spec: &str) -> Result<Vec<(String, usize)>, CliError> {
    let mut layout = Vec::new();
    for part in spec.split(',') {
        let (label, count) = part.split_once(':').ok_or_else(|| {
            CliError::Input(format!(
                "bad unit layout entry {part:?} (expected LABEL:COUNT)"
            ))
        })?;
        let count: usize = count.parse().map_err(|_| {
            CliError::Input(format!("bad unit count {count:?} in layout entry {part:?}"))
        })?;
        layout.push((label.to_string(), count));
    }
    Ok(layout)
}

fn cmd_synth(cmd: SynthCmd) -> Result<(), CliError> {
    let corpus = match cmd.fixture.as_deref() {
        Some("reversal") => {
            if cmd.n.is_some() {
                return Err(CliError::Input(
                    "--fixture and --n are mutually exclusive".to_string(),
                ));
            }
            reversal_fixture()
        }
        Some(other) => {
            return Err(CliError::Input(format!(
                "unknown fixture {other:?} (expected reversal)"
            )));
        }
        None => {
            let n_papers = cmd
                .n
                .ok_or_else(|| CliError::Input("--n is required without --fixture".to_string()))?;
            let distribution = match cmd.distribution.as_str() {
                "lognormal" => GenDistribution::Lognormal {
                    mu: cmd.mu,
                    sigma: cmd.sigma,
                },
                "power-law" => GenDistribution::DiscretePowerLaw {
                    alpha: cmd.alpha,
                    c_max: cmd.cmax,
                },
                "constant" => GenDistribution::Constant { c: cmd.value },
                other => {
                    return Err(CliError::Input(format!(
                        "unknown distribution {other:?} (expected lognormal, power-law or constant)"
                    )));
                }
            };
            let unit_layout = match &cmd.units {
                Some(spec) => parse_unit_layout(spec)?,
                None => Vec::new(),
            };
            generate(&GenSpec {
                distribution,
                n_papers,
                seed: cmd.seed,
                unit_layout,
            })?
        }
    };
    let rendered = match cmd.format.as_str() {
        "csv" => corpus.to_csv(),
        "jsonl" => corpus.to_jsonl(),
        other => {
            return Err(CliError::Input(format!(
                "unknown format {other:?} (expected csv or jsonl)"
            )));
        }
    };
    cmd.output.write(&rendered)
}
