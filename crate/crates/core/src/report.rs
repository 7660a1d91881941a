//! Corpus-pair comparison reports and plot-data export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lexstats::{
    corpus_stats, herdan_c, ngram_counts_sections, table_entropy, type_token_counts,
    unigram_entropy, BoundaryPolicy, CorpusStats, CountTable, ZipfRow,
};
use crate::posstats::{cosine_angle, Similarity};
use crate::readability::{corpus_fog, welch_t_test, FogReport, WelchResult};
use crate::sampling::{
    apply_condition, build_paired_sample, build_sample, size_ratio, ConditionSpec, Pool,
    ProcessedText, Sample, SampleOptions, SelectionLevel, SizeUnit, SIZE_RATIO_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareOptions {
    pub conditions: Vec<ConditionSpec>,
    pub ngram_max_n: usize,
    pub seed: u64,
    pub level: SelectionLevel,
    pub boundary: BoundaryPolicy,
    pub exclude_patterns: Vec<String>,
    /// Take the title-matched articles of corpus b instead of a random sample.
    pub paired: bool,
    /// Drop words with characters outside ISO-8859-1.
    pub latin1_only: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            conditions: ConditionSpec::ALL.to_vec(),
            ngram_max_n: 5,
            seed: 42,
            level: SelectionLevel::Article,
            boundary: BoundaryPolicy::Postprocessed,
            exclude_patterns: Vec::new(),
            paired: false,
            latin1_only: false,
        }
    }
}

/// Metrics of one corpus under one condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusBlock {
    pub condition: ConditionSpec,
    pub documents: u64,
    pub size_chars: u64,
    pub size_words: u64,
    pub dropped_lines: u64,
    #[serde(rename = "V")]
    pub types: u64,
    #[serde(rename = "N")]
    pub tokens: u64,
    #[serde(rename = "C")]
    pub herdan_c: f64,
    pub entropy_bits: f64,
    /// Entropy of the n-gram table for each n.
    pub ngram_entropy_bits: BTreeMap<usize, f64>,
    pub fog: FogReport,
    pub fog_document_mean: f64,
    pub fog_document_stderr: f64,
    pub corpus_stats: CorpusStats,
}

/// Metrics relating the two corpora under one condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossBlock {
    pub condition: ConditionSpec,
    pub size_ratio: f64,
    /// Whether the size ratio is within the balancing tolerance.
    pub balanced: bool,
    #[serde(rename = "C_ratio")]
    pub c_ratio: f64,
    pub entropy_delta_bits: f64,
    pub ngram_entropy_delta_bits: BTreeMap<usize, f64>,
    pub cosine_angles: Vec<Similarity>,
    /// Per-document fog of a against b.
    pub welch_fog: WelchResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: ConditionSpec,
    pub a: CorpusBlock,
    pub b: CorpusBlock,
    pub cross: CrossBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub seed: u64,
    pub paired: bool,
    pub boundary: BoundaryPolicy,
    pub ngram_max_n: usize,
    pub conditions: Vec<ConditionReport>,
}

impl ComparisonReport {
    /// Pretty JSON with sorted keys and floats rounded to six significant
    /// digits, so equal inputs always give equal bytes.
    pub fn to_json(&self) -> Result<String> {
        deterministic_json(self)
    }
}

/// Serialize with sorted keys and six-significant-digit floats.
pub fn deterministic_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)
        .map_err(|e| Error::domain(format!("serialization failed: {e}")))?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| Error::domain(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Round to six significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .map(round_sig6)
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

struct Analysed {
    block: CorpusBlock,
    tables: Vec<CountTable>,
    doc_fog: Vec<f64>,
}

fn analyse(
    sample: &Sample,
    text: &ProcessedText,
    cond: ConditionSpec,
    opts: &CompareOptions,
) -> Result<Analysed> {
    let label = cond.code();
    let tokens = text.surfaces();
    let tt = type_token_counts(&tokens);
    let c = herdan_c(tt.types, tt.tokens).map_err(|e| e.in_stage("herdan", &label))?;
    let entropy = unigram_entropy(&tokens).map_err(|e| e.in_stage("entropy", &label))?;
    let sections = text.sections();
    let mut tables = Vec::with_capacity(opts.ngram_max_n);
    let mut ngram_entropy = BTreeMap::new();
    for n in 1..=opts.ngram_max_n {
        let t = ngram_counts_sections(&sections, n, opts.boundary)
            .map_err(|e| e.in_stage("ngram", &label))?;
        if !t.is_empty() {
            ngram_entropy.insert(
                n,
                table_entropy(&t).map_err(|e| e.in_stage("ngram", &label))?,
            );
        }
        tables.push(t);
    }
    let fog = corpus_fog(&text.documents).map_err(|e| e.in_stage("fog", &label))?;
    let sentences: Vec<_> = text.sentences().cloned().collect();
    let stats = corpus_stats(&sentences).map_err(|e| e.in_stage("corpus_stats", &label))?;
    Ok(Analysed {
        block: CorpusBlock {
            condition: cond,
            documents: text.documents.len() as u64,
            size_chars: sample.size_chars,
            size_words: sample.size_words,
            dropped_lines: text.dropped_lines as u64,
            types: tt.types,
            tokens: tt.tokens,
            herdan_c: c,
            entropy_bits: entropy,
            ngram_entropy_bits: ngram_entropy,
            fog: fog.pooled,
            fog_document_mean: fog.mean,
            fog_document_stderr: fog.stderr,
            corpus_stats: stats,
        },
        tables,
        doc_fog: fog.per_document,
    })
}

/// Compare corpus `a`, taken whole, with a sample of corpus `b` balanced to
/// `a`'s size in each condition's unit.
pub fn compare_corpora(a: &Pool, b: &Pool, opts: &CompareOptions) -> Result<ComparisonReport> {
    if opts.conditions.is_empty() {
        return Err(Error::domain("no conditions requested"));
    }
    let sample_a = Sample::whole(a);
    let mut samples_b: BTreeMap<bool, Sample> = BTreeMap::new();
    let mut reports = Vec::with_capacity(opts.conditions.len());
    for &cond in &opts.conditions {
        let label = cond.code();
        let key = cond.unit == SizeUnit::Character;
        if let std::collections::btree_map::Entry::Vacant(slot) = samples_b.entry(key) {
            let s = if opts.paired {
                build_paired_sample(a, b).sample
            } else {
                let target = sample_a.size(cond.unit);
                build_sample(
                    b,
                    &SampleOptions {
                        unit: cond.unit,
                        target,
                        seed: opts.seed,
                        level: opts.level,
                    },
                )
                .map_err(|e| e.in_stage("sample", &label))?
            };
            slot.insert(s);
        }
        let sample_b = &samples_b[&key];
        let mut text_a = apply_condition(&sample_a, cond, &opts.exclude_patterns);
        let mut text_b = apply_condition(sample_b, cond, &opts.exclude_patterns);
        if opts.latin1_only {
            text_a = text_a.latin1_only();
            text_b = text_b.latin1_only();
        }
        let ra = analyse(&sample_a, &text_a, cond, opts)?;
        let rb = analyse(sample_b, &text_b, cond, opts)?;

        let mut cosine_angles = Vec::new();
        for (ta, tb) in ra.tables.iter().zip(&rb.tables) {
            if !ta.is_empty() && !tb.is_empty() {
                cosine_angles.push(cosine_angle(ta, tb).map_err(|e| e.in_stage("cosine", &label))?);
            }
        }
        let ngram_entropy_delta_bits = ra
            .block
            .ngram_entropy_bits
            .iter()
            .filter_map(|(n, ha)| rb.block.ngram_entropy_bits.get(n).map(|hb| (*n, ha - hb)))
            .collect();
        let ratio = size_ratio(&sample_a, sample_b, cond.unit)
            .map_err(|e| e.in_stage("size_ratio", &label))?;
        if (ratio - 1.0).abs() > SIZE_RATIO_TOLERANCE {
            log::info!("[{label}] size ratio {ratio:.6} is outside the balancing tolerance");
        }
        let cross = CrossBlock {
            condition: cond,
            size_ratio: ratio,
            balanced: (ratio - 1.0).abs() <= SIZE_RATIO_TOLERANCE,
            c_ratio: ra.block.herdan_c / rb.block.herdan_c,
            entropy_delta_bits: ra.block.entropy_bits - rb.block.entropy_bits,
            ngram_entropy_delta_bits,
            cosine_angles,
            welch_fog: welch_t_test(&ra.doc_fog, &rb.doc_fog)
                .map_err(|e| e.in_stage("welch", &label))?,
        };
        reports.push(ConditionReport {
            condition: cond,
            a: ra.block,
            b: rb.block,
            cross,
        });
    }
    Ok(ComparisonReport {
        seed: opts.seed,
        paired: opts.paired,
        boundary: opts.boundary,
        ngram_max_n: opts.ngram_max_n,
        conditions: reports,
    })
}

/// Data behind one plot.
#[derive(Debug, Clone, Copy)]
pub enum PlotData<'a> {
    Zipf(&'a [ZipfRow]),
    Heaps(&'a [(u64, u64)]),
    NgramZipf(&'a CountTable),
    PosDist(&'a [(String, f64)]),
}

/// TSV with a header row.
pub fn plot_tsv(data: PlotData<'_>) -> String {
    let mut out = String::new();
    match data {
        PlotData::Zipf(rows) => {
            out.push_str("rank\tfreq\n");
            for r in rows {
                let _ = writeln!(out, "{}\t{}", r.rank, r.freq);
            }
        }
        PlotData::Heaps(points) => {
            out.push_str("N\tV\n");
            for (n, v) in points {
                let _ = writeln!(out, "{n}\t{v}");
            }
        }
        PlotData::NgramZipf(table) => {
            out.push_str("rank\tfreq\tngram\n");
            for (i, (k, c)) in table.ranked().into_iter().enumerate() {
                let _ = writeln!(out, "{}\t{c}\t{k}", i + 1);
            }
        }
        PlotData::PosDist(rows) => {
            out.push_str("tag\trelative_frequency\n");
            let mut rows = rows.to_vec();
            rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            for (tag, f) in rows {
                let _ = writeln!(out, "{tag}\t{}", round_sig6(f));
            }
        }
    }
    out
}

/// Write plot data to `path`.
pub fn emit_plot_data(data: PlotData<'_>, path: &Path) -> Result<()> {
    std::fs::write(path, plot_tsv(data))?;
    Ok(())
}
