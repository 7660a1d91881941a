//! `corplex`: extract, sample and compare text corpora.

mod input;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use corplex::controversy::{controversy_m_with, ranking_tsv, RevertOptions};
use corplex::ingest::ExtractOptions;
use corplex::lexstats::{
    corpus_stats, heaps_curve, heaps_fit, herdan_c, ngram_counts_sections, table_entropy,
    type_token_counts, unigram_entropy, zipf_table, BoundaryPolicy, CheckpointPolicy,
    MIN_HEAPS_TOKENS,
};
use corplex::posstats::{
    cosine_angle, similarity_tsv, tag_distribution, tag_ngram_table, PosCondition,
};
use corplex::readability::{corpus_fog, gunning_fog};
use corplex::report::{compare_corpora, deterministic_json, plot_tsv, CompareOptions, PlotData};
use corplex::sampling::{
    apply_condition, build_paired_sample, build_sample, ConditionSpec, ProcessedText, Sample,
    SampleOptions, SelectionLevel,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "corplex",
    version,
    about = "Compare the lexical and readability statistics of text corpora"
)]
struct Cli {
    /// Report progress on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert an article dump to JSON lines {id, title, text}.
    Extract(ExtractArgs),
    /// Draw a size-balanced sample of lines.
    Sample(SampleArgs),
    /// Vocabulary size, Herdan's C, entropy and sentence statistics.
    Stats(TextArgs),
    /// Word or tag n-gram counts.
    Ngram(NgramArgs),
    /// Compare tag n-gram distributions of two tagged corpora.
    Pos(PosArgs),
    /// Gunning fog index, pooled or per document.
    Fog(FogArgs),
    /// Controversy scores from a revision-history dump.
    Conflict(ConflictArgs),
    /// Full comparison of two corpora under each condition.
    Compare(CompareArgs),
    /// Data behind Zipf, Heaps and tag-distribution plots.
    Plotdata(PlotArgs),
    /// Download a dump to a local file.
    Fetch(FetchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Raw,
    Post,
}

impl From<Boundary> for BoundaryPolicy {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Raw => BoundaryPolicy::Raw,
            Boundary::Post => BoundaryPolicy::Postprocessed,
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    /// MediaWiki XML export or JSON lines file.
    input: PathBuf,
    /// Keep redirect pages.
    #[arg(long)]
    keep_redirects: bool,
    /// Keep pages outside the main namespace.
    #[arg(long)]
    all_namespaces: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("size").required(true).args(["target", "like"]))]
struct SampleArgs {
    /// Pool to sample from.
    pool: PathBuf,
    /// Target size in the condition's unit.
    #[arg(long)]
    target: Option<u64>,
    /// Match the size of this corpus.
    #[arg(long)]
    like: Option<PathBuf>,
    /// Condition whose unit (C or W) sets the size measure.
    #[arg(long, default_value = "WB")]
    condition: ConditionSpec,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Select single lines instead of whole articles.
    #[arg(long)]
    line_level: bool,
    /// Take the pool articles whose titles match those of --like.
    #[arg(long)]
    paired: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Where to write the manifest; defaults to OUTPUT.manifest.json.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct TextArgs {
    /// .xml dump, .jsonl documents, or plain text with blank lines between documents.
    input: PathBuf,
    #[arg(long, default_value = "WB")]
    condition: ConditionSpec,
    /// File of substrings; lines containing any of them are dropped.
    #[arg(long)]
    exclude_patterns: Option<PathBuf>,
    /// Drop words with characters outside ISO-8859-1.
    #[arg(long)]
    latin1_only: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct NgramArgs {
    #[command(flatten)]
    text: TextArgs,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value = "post")]
    boundary: Boundary,
    /// Count tags of a `token/TAG` file instead of words.
    #[arg(long)]
    tagged: bool,
    #[arg(long, default_value = "O")]
    pos_condition: PosCondition,
}

#[derive(Args)]
struct PosArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "O")]
    pos_condition: PosCondition,
    /// Single order to compare; default is 2 through 5.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "post")]
    boundary: Boundary,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct FogArgs {
    #[command(flatten)]
    text: TextArgs,
    /// Report every document instead of the pooled index.
    #[arg(long)]
    per_document: bool,
}

#[derive(Args)]
struct ConflictArgs {
    /// Revision-history XML dump.
    input: PathBuf,
    /// Match the earliest identical revision instead of the most recent.
    #[arg(long)]
    earliest: bool,
    /// Blame the latest intervening editor other than the reverter.
    #[arg(long)]
    skip_own_edits: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct CompareArgs {
    /// Reference corpus, used whole.
    a: PathBuf,
    /// Corpus sampled to the reference size.
    b: PathBuf,
    /// Conditions to run; repeat for several. Default is all eight.
    #[arg(long)]
    condition: Vec<ConditionSpec>,
    /// Largest n-gram order.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "post")]
    boundary: Boundary,
    #[arg(long)]
    exclude_patterns: Option<PathBuf>,
    /// Drop words with characters outside ISO-8859-1.
    #[arg(long)]
    latin1_only: bool,
    /// Use the title-matched articles of B instead of a random sample.
    #[arg(long)]
    paired: bool,
    /// Select single lines instead of whole articles.
    #[arg(long)]
    line_level: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    Zipf,
    Heaps,
    NgramZipf,
    PosDist,
}

#[derive(Args)]
struct PlotArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: PlotKind,
    #[arg(long, default_value = "WB")]
    condition: ConditionSpec,
    #[arg(long, default_value = "O")]
    pos_condition: PosCondition,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value = "post")]
    boundary: Boundary,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FetchArgs {
    url: String,
    #[arg(short, long)]
    output: PathBuf,
}

/// Bad flag combinations found after parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Info
        } else {
            log::LevelFilter::Warn
        })
        .format_timestamp(None)
        .format_target(false)
        .init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Extract(a) => extract(a),
        Command::Sample(a) => sample(a),
        Command::Stats(a) => stats(a),
        Command::Ngram(a) => ngram(a),
        Command::Pos(a) => pos(a),
        Command::Fog(a) => fog(a),
        Command::Conflict(a) => conflict(a),
        Command::Compare(a) => compare(a),
        Command::Plotdata(a) => plotdata(a),
        Command::Fetch(a) => fetch(a),
    }
}

/// Write to a file, or to stdout when no path is given.
fn emit(output: Option<&Path>, data: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, data).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(deterministic_json(value)?)
}

fn tsv_pairs(rows: &[(&str, String)]) -> String {
    let mut out = String::from("metric\tvalue\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k}\t{v}");
    }
    out
}

fn extract(a: ExtractArgs) -> Result<()> {
    let opts = ExtractOptions {
        skip_redirects: !a.keep_redirects,
        main_namespace_only: !a.all_namespaces,
        ..Default::default()
    };
    let (docs, _) = input::read_documents(&a.input, opts)?;
    let mut out = String::new();
    for d in &docs {
        out.push_str(&serde_json::to_string(d)?);
        out.push('\n');
    }
    emit(a.output.as_deref(), &out)
}

fn sample(a: SampleArgs) -> Result<()> {
    let pool = input::read_pool(&a.pool)?;
    let unit = a.condition.unit;
    let (sample, target): (Sample, u64) = if a.paired {
        let Some(like) = a.like.as_deref() else {
            return Err(usage("--paired needs --like"));
        };
        let reference = input::read_pool(like)?;
        let paired = build_paired_sample(&reference, &pool);
        if !paired.unmatched.is_empty() {
            log::warn!(
                "{} titles without a counterpart in {}",
                paired.unmatched.len(),
                a.pool.display()
            );
        }
        (paired.sample, Sample::whole(&reference).size(unit))
    } else {
        let target = match (a.target, &a.like) {
            (Some(t), _) => t,
            (None, Some(like)) => Sample::whole(&input::read_pool(like)?).size(unit),
            (None, None) => unreachable!("clap enforces one of --target, --like"),
        };
        let opts = SampleOptions {
            unit,
            target,
            seed: a.seed,
            level: if a.line_level {
                SelectionLevel::Line
            } else {
                SelectionLevel::Article
            },
        };
        (build_sample(&pool, &opts).context("sampling")?, target)
    };
    let manifest = sample.manifest(unit, target, a.pool.display().to_string());
    let manifest_path = a.manifest.or_else(|| {
        a.output
            .as_ref()
            .map(|o| PathBuf::from(format!("{}.manifest.json", o.display())))
    });
    emit(a.output.as_deref(), &sample.to_text())?;
    match manifest_path {
        Some(p) => emit(Some(&p), &json(&manifest)?),
        None => {
            eprint!("{}", json(&manifest)?);
            Ok(())
        }
    }
}

fn load_text(args: &TextArgs) -> Result<ProcessedText> {
    let pool = input::read_pool(&args.input)?;
    let patterns = match &args.exclude_patterns {
        Some(p) => input::read_patterns(p)?,
        None => Vec::new(),
    };
    let mut text = apply_condition(&Sample::whole(&pool), args.condition, &patterns);
    if args.latin1_only {
        text = text.latin1_only();
    }
    if text.dropped_lines > 0 {
        log::info!("{} lines dropped by exclude patterns", text.dropped_lines);
    }
    Ok(text)
}

#[derive(Serialize)]
struct StatsOutput {
    condition: ConditionSpec,
    #[serde(rename = "V")]
    types: u64,
    #[serde(rename = "N")]
    tokens: u64,
    #[serde(rename = "C")]
    herdan_c: f64,
    entropy_bits: f64,
    corpus_stats: corplex::lexstats::CorpusStats,
    heaps_exponent: Option<f64>,
    heaps_stderr: Option<f64>,
}

fn stats(a: TextArgs) -> Result<()> {
    let text = load_text(&a)?;
    let tokens = text.surfaces();
    let tt = type_token_counts(&tokens);
    let sentences: Vec<_> = text.sentences().cloned().collect();
    let heaps = if tt.tokens >= MIN_HEAPS_TOKENS {
        Some(heaps_fit(&tokens, &CheckpointPolicy::default())?)
    } else {
        None
    };
    let out = StatsOutput {
        condition: a.condition,
        types: tt.types,
        tokens: tt.tokens,
        herdan_c: herdan_c(tt.types, tt.tokens)?,
        entropy_bits: unigram_entropy(&tokens)?,
        corpus_stats: corpus_stats(&sentences)?,
        heaps_exponent: heaps.as_ref().map(|h| h.exponent),
        heaps_stderr: heaps.as_ref().map(|h| h.stderr),
    };
    let data = match a.format {
        Format::Json => json(&out)?,
        Format::Tsv => {
            let cs = &out.corpus_stats;
            let mut rows = vec![
                ("condition", out.condition.code()),
                ("V", out.types.to_string()),
                ("N", out.tokens.to_string()),
                ("C", format!("{:.6}", out.herdan_c)),
                ("entropy_bits", format!("{:.6}", out.entropy_bits)),
                ("chars_per_word", format!("{:.6}", cs.chars_per_word)),
                (
                    "words_per_sentence",
                    format!("{:.6}", cs.words_per_sentence),
                ),
                (
                    "separators_per_sentence",
                    format!("{:.6}", cs.separators_per_sentence),
                ),
                (
                    "content_words_per_subsentence",
                    format!("{:.6}", cs.content_words_per_subsentence),
                ),
            ];
            if let Some(h) = &heaps {
                rows.push(("heaps_exponent", format!("{:.6}", h.exponent)));
                rows.push(("heaps_stderr", format!("{:.6}", h.stderr)));
            }
            tsv_pairs(&rows)
        }
    };
    emit(None, &data)
}

#[derive(Serialize)]
struct TableSummary {
    n: usize,
    boundary: BoundaryPolicy,
    condition: String,
    total: u64,
    distinct: usize,
    entropy_bits: Option<f64>,
}

fn ngram(a: NgramArgs) -> Result<()> {
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let (table, label) = if a.tagged {
        let tagged = input::read_tagged(&a.text.input)?;
        let sentences = a.pos_condition.prepare(&tagged.sentences);
        (
            tag_ngram_table(&sentences, a.n, a.boundary.into())?,
            a.pos_condition.to_string(),
        )
    } else {
        let text = load_text(&a.text)?;
        (
            ngram_counts_sections(&text.sections(), a.n, a.boundary.into())?,
            a.text.condition.code(),
        )
    };
    let data = match a.text.format {
        Format::Tsv => table.to_tsv(),
        Format::Json => json(&TableSummary {
            n: table.n(),
            boundary: table.policy(),
            condition: label,
            total: table.total(),
            distinct: table.len(),
            entropy_bits: if table.is_empty() {
                None
            } else {
                Some(table_entropy(&table)?)
            },
        })?,
    };
    emit(None, &data)
}

fn pos(a: PosArgs) -> Result<()> {
    let orders: Vec<usize> = match a.n {
        Some(0) => return Err(usage("--n must be at least 1")),
        Some(n) => vec![n],
        None => (2..=5).collect(),
    };
    let ta = a
        .pos_condition
        .prepare(&input::read_tagged(&a.a)?.sentences);
    let tb = a
        .pos_condition
        .prepare(&input::read_tagged(&a.b)?.sentences);
    let mut rows = Vec::new();
    for n in orders {
        let x = tag_ngram_table(&ta, n, a.boundary.into())?;
        let y = tag_ngram_table(&tb, n, a.boundary.into())?;
        rows.push(cosine_angle(&x, &y).with_context(|| format!("comparing {n}-grams"))?);
    }
    let data = match a.format {
        Format::Json => json(&rows)?,
        Format::Tsv => similarity_tsv(&rows),
    };
    emit(None, &data)
}

#[derive(Serialize)]
struct DocumentFog {
    index: usize,
    #[serde(flatten)]
    fog: corplex::readability::FogReport,
}

fn fog(a: FogArgs) -> Result<()> {
    let text = load_text(&a.text)?;
    let data = if a.per_document {
        let rows: Vec<DocumentFog> = text
            .documents
            .iter()
            .enumerate()
            .filter_map(|(index, d)| match gunning_fog(d) {
                Ok(fog) => Some(DocumentFog { index, fog }),
                Err(e) => {
                    log::warn!("document {index} skipped: {e}");
                    None
                }
            })
            .collect();
        match a.text.format {
            Format::Json => json(&rows)?,
            Format::Tsv => {
                let mut out = String::from("index\twords\tsentences\tcomplex_words\tF\n");
                for r in &rows {
                    let f = &r.fog;
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{:.6}",
                        r.index, f.words, f.sentences, f.complex_words, f.fog
                    );
                }
                out
            }
        }
    } else {
        let f = corpus_fog(&text.documents)?;
        match a.text.format {
            Format::Json => json(&f)?,
            Format::Tsv => tsv_pairs(&[
                ("words", f.pooled.words.to_string()),
                ("sentences", f.pooled.sentences.to_string()),
                ("complex_words", f.pooled.complex_words.to_string()),
                ("F", format!("{:.6}", f.pooled.fog)),
                ("document_mean", format!("{:.6}", f.mean)),
                ("document_stderr", format!("{:.6}", f.stderr)),
                ("documents", f.per_document.len().to_string()),
            ]),
        }
    };
    emit(None, &data)
}

fn conflict(a: ConflictArgs) -> Result<()> {
    let (pages, _) = input::read_histories(&a.input)?;
    let opts = RevertOptions {
        match_earliest: a.earliest,
        skip_own_edits: a.skip_own_edits,
    };
    let scores = pages
        .iter()
        .map(|p| {
            controversy_m_with(&p.revisions, opts).with_context(|| format!("page {}", p.page_id))
        })
        .collect::<Result<Vec<_>>>()?;
    let data = match a.format {
        Format::Json => json(&scores)?,
        Format::Tsv => ranking_tsv(&scores),
    };
    emit(None, &data)
}

fn compare(a: CompareArgs) -> Result<()> {
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let pa = input::read_pool(&a.a)?;
    let pb = input::read_pool(&a.b)?;
    let opts = CompareOptions {
        conditions: if a.condition.is_empty() {
            ConditionSpec::ALL.to_vec()
        } else {
            a.condition
        },
        ngram_max_n: a.n,
        seed: a.seed,
        level: if a.line_level {
            SelectionLevel::Line
        } else {
            SelectionLevel::Article
        },
        boundary: a.boundary.into(),
        exclude_patterns: match &a.exclude_patterns {
            Some(p) => input::read_patterns(p)?,
            None => Vec::new(),
        },
        paired: a.paired,
        latin1_only: a.latin1_only,
    };
    let report = compare_corpora(&pa, &pb, &opts)?;
    emit(a.output.as_deref(), &report.to_json()?)
}

fn plotdata(a: PlotArgs) -> Result<()> {
    let text_args = |input: &Path| TextArgs {
        input: input.to_owned(),
        condition: a.condition,
        exclude_patterns: None,
        latin1_only: false,
        format: Format::Tsv,
    };
    let data = match a.kind {
        PlotKind::Zipf | PlotKind::Heaps => {
            let text = load_text(&text_args(&a.input))?;
            let tokens = text.surfaces();
            if matches!(a.kind, PlotKind::Zipf) {
                plot_tsv(PlotData::Zipf(&zipf_table(&tokens)))
            } else {
                plot_tsv(PlotData::Heaps(&heaps_curve(
                    &tokens,
                    &CheckpointPolicy::Every,
                )))
            }
        }
        PlotKind::NgramZipf => {
            if a.n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let text = load_text(&text_args(&a.input))?;
            let table = ngram_counts_sections(&text.sections(), a.n, a.boundary.into())?;
            plot_tsv(PlotData::NgramZipf(&table))
        }
        PlotKind::PosDist => {
            let tagged = input::read_tagged(&a.input)?;
            let sentences = a.pos_condition.prepare(&tagged.sentences);
            plot_tsv(PlotData::PosDist(&tag_distribution(&sentences)))
        }
    };
    emit(a.output.as_deref(), &data)
}

fn fetch(a: FetchArgs) -> Result<()> {
    if !(a.url.starts_with("http://") || a.url.starts_with("https://")) {
        return Err(usage(format!("not an http(s) URL: {}", a.url)));
    }
    let response = ureq::get(&a.url)
        .call()
        .with_context(|| format!("downloading {}", a.url))?;
    let mut reader = response.into_reader();
    let mut file = std::fs::File::create(&a.output)
        .with_context(|| format!("cannot create {}", a.output.display()))?;
    let bytes = std::io::copy(&mut reader, &mut file)?;
    if bytes == 0 {
        bail!("{} returned an empty body", a.url);
    }
    log::info!("wrote {bytes} bytes to {}", a.output.display());
    Ok(())
}
