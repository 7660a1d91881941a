//! Size-balanced samples and the eight processing conditions.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Document;
use crate::text::{
    filter_punctuation, is_latin1, porter_stem, split_sentences, tokenize, Sentence, Token,
    TokenKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeUnit {
    Character,
    Word,
}

impl SizeUnit {
    /// Size of one line: Unicode scalar values, or whitespace-separated words.
    pub fn measure(self, line: &str) -> u64 {
        match self {
            SizeUnit::Character => line.chars().count() as u64,
            SizeUnit::Word => line.split_whitespace().count() as u64,
        }
    }
}

impl fmt::Display for SizeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeUnit::Character => "character",
            SizeUnit::Word => "word",
        })
    }
}

/// One of CB, CN, WB, WN, CBP, CNP, WBP, WNP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConditionSpec {
    pub unit: SizeUnit,
    pub keep_punctuation: bool,
    pub stem: bool,
}

impl ConditionSpec {
    pub const ALL: [ConditionSpec; 8] = {
        const fn c(unit: SizeUnit, keep_punctuation: bool, stem: bool) -> ConditionSpec {
            ConditionSpec {
                unit,
                keep_punctuation,
                stem,
            }
        }
        use SizeUnit::*;
        [
            c(Character, true, false),
            c(Character, false, false),
            c(Word, true, false),
            c(Word, false, false),
            c(Character, true, true),
            c(Character, false, true),
            c(Word, true, true),
            c(Word, false, true),
        ]
    };

    pub fn code(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ConditionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = match self.unit {
            SizeUnit::Character => 'C',
            SizeUnit::Word => 'W',
        };
        let p = if self.keep_punctuation { 'B' } else { 'N' };
        write!(f, "{u}{p}{}", if self.stem { "P" } else { "" })
    }
}

impl FromStr for ConditionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::parse(
                "condition",
                format!("{s:?} is not one of CB, CN, WB, WN, CBP, CNP, WBP, WNP"),
            )
        };
        let b = s.as_bytes();
        if !(b.len() == 2 || (b.len() == 3 && b[2] == b'P')) {
            return Err(bad());
        }
        let unit = match b[0] {
            b'C' => SizeUnit::Character,
            b'W' => SizeUnit::Word,
            _ => return Err(bad()),
        };
        let keep_punctuation = match b[1] {
            b'B' => true,
            b'N' => false,
            _ => return Err(bad()),
        };
        Ok(ConditionSpec {
            unit,
            keep_punctuation,
            stem: b.len() == 3,
        })
    }
}

impl Serialize for ConditionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConditionSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A titled group of lines to sample from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolDocument {
    pub title: String,
    pub lines: Vec<String>,
}

/// Candidate lines grouped by source article.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pool {
    pub documents: Vec<PoolDocument>,
}

impl Pool {
    /// Non-blank lines of each document, trimmed.
    pub fn from_documents<'a>(docs: impl IntoIterator<Item = &'a Document>) -> Self {
        let documents = docs
            .into_iter()
            .map(|d| PoolDocument {
                title: d.title.clone(),
                lines: d
                    .body
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(str::to_owned)
                    .collect(),
            })
            .filter(|d| !d.lines.is_empty())
            .collect();
        Pool { documents }
    }

    /// Plain text with documents separated by blank lines.
    pub fn from_text(text: &str) -> Self {
        let mut documents = Vec::new();
        let mut current: Vec<String> = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() {
                if !current.is_empty() {
                    documents.push(PoolDocument {
                        title: String::new(),
                        lines: std::mem::take(&mut current),
                    });
                }
            } else {
                current.push(line.to_owned());
            }
        }
        if !current.is_empty() {
            documents.push(PoolDocument {
                title: String::new(),
                lines: current,
            });
        }
        Pool { documents }
    }

    /// Treat every non-blank line as its own document.
    pub fn from_lines<S: AsRef<str>>(lines: impl IntoIterator<Item = S>) -> Self {
        let documents = lines
            .into_iter()
            .filter_map(|l| {
                let l = l.as_ref().trim();
                (!l.is_empty()).then(|| PoolDocument {
                    title: String::new(),
                    lines: vec![l.to_owned()],
                })
            })
            .collect();
        Pool { documents }
    }

    pub fn total_size(&self, unit: SizeUnit) -> u64 {
        self.documents
            .iter()
            .flat_map(|d| &d.lines)
            .map(|l| unit.measure(l))
            .sum()
    }

    pub fn line_count(&self) -> usize {
        self.documents.iter().map(|d| d.lines.len()).sum()
    }
}

/// Whether random selection picks whole articles or single lines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionLevel {
    #[default]
    Article,
    Line,
}

/// Selected lines with their sizes and provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub lines: Vec<String>,
    /// Index of the pool document each line came from.
    pub origins: Vec<u32>,
    pub size_chars: u64,
    pub size_words: u64,
    pub seed: u64,
}

impl Sample {
    fn empty(seed: u64) -> Self {
        Sample {
            lines: Vec::new(),
            origins: Vec::new(),
            size_chars: 0,
            size_words: 0,
            seed,
        }
    }

    fn push(&mut self, line: &str, origin: u32) {
        self.size_chars += SizeUnit::Character.measure(line);
        self.size_words += SizeUnit::Word.measure(line);
        self.lines.push(line.to_owned());
        self.origins.push(origin);
    }

    /// Every line of every document, unsampled.
    pub fn whole(pool: &Pool) -> Self {
        let mut s = Sample::empty(0);
        for (i, d) in pool.documents.iter().enumerate() {
            for l in &d.lines {
                s.push(l, i as u32);
            }
        }
        s
    }

    pub fn size(&self, unit: SizeUnit) -> u64 {
        match unit {
            SizeUnit::Character => self.size_chars,
            SizeUnit::Word => self.size_words,
        }
    }

    /// True when the stored sizes match the lines.
    pub fn sizes_consistent(&self) -> bool {
        let c: u64 = self
            .lines
            .iter()
            .map(|l| SizeUnit::Character.measure(l))
            .sum();
        let w: u64 = self.lines.iter().map(|l| SizeUnit::Word.measure(l)).sum();
        c == self.size_chars && w == self.size_words && self.origins.len() == self.lines.len()
    }

    /// Lines grouped by origin document, in order of first appearance.
    pub fn documents(&self) -> Vec<Vec<&str>> {
        let mut index: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
        let mut groups: Vec<Vec<&str>> = Vec::new();
        for (line, &o) in self.lines.iter().zip(&self.origins) {
            let g = *index.entry(o).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(line);
        }
        groups
    }

    /// One line per selected line, with a blank line wherever the source
    /// document changes. [`Pool::from_text`] reads this back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.lines.iter().enumerate() {
            if i > 0 && self.origins[i] != self.origins[i - 1] {
                out.push('\n');
            }
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    pub fn manifest(
        &self,
        unit: SizeUnit,
        target: u64,
        source: impl Into<String>,
    ) -> SampleManifest {
        SampleManifest {
            seed: self.seed,
            unit,
            target,
            achieved: self.size(unit),
            source: source.into(),
        }
    }
}

/// Sidecar record written next to a persisted sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub seed: u64,
    pub unit: SizeUnit,
    pub target: u64,
    pub achieved: u64,
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleOptions {
    pub unit: SizeUnit,
    pub target: u64,
    pub seed: u64,
    pub level: SelectionLevel,
}

/// Draw from `pool` until the sample size first reaches `target`.
///
/// Units (articles or lines) are visited in a seeded random order without
/// replacement; lines are appended one at a time, and selection stops at the
/// first line whose addition reaches the target.
pub fn build_sample(pool: &Pool, opts: &SampleOptions) -> Result<Sample> {
    if opts.target == 0 {
        return Err(Error::domain("target size must be positive"));
    }
    let units: Vec<(u32, u32)> = match opts.level {
        SelectionLevel::Article => (0..pool.documents.len() as u32)
            .map(|d| (d, u32::MAX))
            .collect(),
        SelectionLevel::Line => pool
            .documents
            .iter()
            .enumerate()
            .flat_map(|(d, doc)| (0..doc.lines.len() as u32).map(move |l| (d as u32, l)))
            .collect(),
    };
    let mut order: Vec<usize> = (0..units.len()).collect();
    let mut rng = SplitMix64::seed_from_u64(opts.seed);
    let mut sample = Sample::empty(opts.seed);
    for i in 0..order.len() {
        // Partial Fisher-Yates: fix position i, leave the tail unshuffled.
        let j = i + rng.random_range(0..(order.len() - i) as u64) as usize;
        order.swap(i, j);
        let (d, l) = units[order[i]];
        let doc = &pool.documents[d as usize];
        let lines = if l == u32::MAX {
            &doc.lines[..]
        } else {
            std::slice::from_ref(&doc.lines[l as usize])
        };
        for line in lines {
            sample.push(line, d);
            if sample.size(opts.unit) >= opts.target {
                return Ok(sample);
            }
        }
    }
    Err(Error::InsufficientPool {
        achieved: sample.size(opts.unit),
        target: opts.target,
    })
}

/// Line-level balanced sample from a flat list of lines.
pub fn build_balanced_sample<S: AsRef<str>>(
    pool: &[S],
    target: u64,
    unit: SizeUnit,
    seed: u64,
) -> Result<Sample> {
    let pool = Pool {
        documents: vec![PoolDocument {
            title: String::new(),
            lines: pool.iter().map(|l| l.as_ref().to_owned()).collect(),
        }],
    };
    build_sample(
        &pool,
        &SampleOptions {
            unit,
            target,
            seed,
            level: SelectionLevel::Line,
        },
    )
}

/// Result of title-matched selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedSample {
    pub sample: Sample,
    /// Titles in the reference pool with no counterpart.
    pub unmatched: Vec<String>,
}

/// For each article of `reference`, in order, take the whole article of
/// `candidates` with the same title.
pub fn build_paired_sample(reference: &Pool, candidates: &Pool) -> PairedSample {
    let by_title: std::collections::HashMap<&str, usize> = candidates
        .documents
        .iter()
        .enumerate()
        .rev()
        .map(|(i, d)| (d.title.as_str(), i))
        .collect();
    let mut sample = Sample::empty(0);
    let mut unmatched = Vec::new();
    for d in &reference.documents {
        match by_title.get(d.title.as_str()) {
            Some(&i) => {
                for l in &candidates.documents[i].lines {
                    sample.push(l, i as u32);
                }
            }
            None => unmatched.push(d.title.clone()),
        }
    }
    PairedSample { sample, unmatched }
}

/// size(a) / size(b) in the given unit.
pub fn size_ratio(a: &Sample, b: &Sample, unit: SizeUnit) -> Result<f64> {
    let (sa, sb) = (a.size(unit), b.size(unit));
    if sa == 0 || sb == 0 {
        return Err(Error::domain("size ratio of an empty sample"));
    }
    Ok(sa as f64 / sb as f64)
}

/// Largest accepted |ratio - 1| for a balanced pair.
pub const SIZE_RATIO_TOLERANCE: f64 = 3e-4;

/// Sentences of one condition, grouped by source document.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ProcessedText {
    pub documents: Vec<Vec<Sentence>>,
    /// Lines removed by exclude patterns.
    pub dropped_lines: usize,
}

impl ProcessedText {
    /// Drop tokens with characters outside ISO-8859-1, and any sentence or
    /// document left empty.
    pub fn latin1_only(mut self) -> Self {
        for doc in &mut self.documents {
            for s in doc.iter_mut() {
                s.tokens.retain(|t| is_latin1(&t.surface));
            }
            doc.retain(|s| !s.is_empty());
        }
        self.documents.retain(|d| !d.is_empty());
        self
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flatten()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences().flat_map(|s| &s.tokens)
    }

    /// Token surfaces in order.
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens().map(Token::as_str).collect()
    }

    /// Sentences as lists of lowercased surfaces, per document. Word n-grams
    /// are types, so they fold case the same way vocabulary counts do.
    pub fn sections(&self) -> Vec<Vec<Vec<String>>> {
        self.documents
            .iter()
            .map(|d| {
                d.iter()
                    .map(|s| s.tokens.iter().map(|t| t.surface.to_lowercase()).collect())
                    .collect()
            })
            .collect()
    }
}

/// Process one line under a condition.
fn process_line(line: &str, cond: ConditionSpec) -> Vec<Sentence> {
    let mut sentences = split_sentences(tokenize(line));
    for s in &mut sentences {
        if !cond.keep_punctuation {
            s.tokens = filter_punctuation(std::mem::take(&mut s.tokens));
        }
        if cond.stem {
            for t in s.tokens.iter_mut().filter(|t| t.kind == TokenKind::Word) {
                let stem = porter_stem(&t.surface);
                if !stem.is_empty() && stem != t.surface {
                    *t = Token::new(stem);
                }
            }
        }
    }
    sentences.retain(|s| !s.is_empty());
    sentences
}

/// Tokenize, split and process a sample under `cond`.
///
/// Lines containing any of `exclude_patterns` (case-sensitive substring) are
/// dropped whole first. Sentence structure survives punctuation removal;
/// sentences left empty are dropped.
pub fn apply_condition<S: AsRef<str> + Sync>(
    sample: &Sample,
    cond: ConditionSpec,
    exclude_patterns: &[S],
) -> ProcessedText {
    let processed: Vec<Option<Vec<Sentence>>> = sample
        .lines
        .par_iter()
        .map(|line| {
            if exclude_patterns.iter().any(|p| line.contains(p.as_ref())) {
                None
            } else {
                Some(process_line(line, cond))
            }
        })
        .collect();
    let mut out = ProcessedText::default();
    let mut last_origin = None;
    for (sentences, &origin) in processed.into_iter().zip(&sample.origins) {
        let Some(sentences) = sentences else {
            out.dropped_lines += 1;
            continue;
        };
        if last_origin != Some(origin) {
            out.documents.push(Vec::new());
            last_origin = Some(origin);
        }
        out.documents.last_mut().unwrap().extend(sentences);
    }
    out.documents.retain(|d| !d.is_empty());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_codes_round_trip() {
        let codes: Vec<String> = ConditionSpec::ALL.iter().map(ConditionSpec::code).collect();
        assert_eq!(codes, ["CB", "CN", "WB", "WN", "CBP", "CNP", "WBP", "WNP"]);
        for c in ConditionSpec::ALL {
            assert_eq!(c.code().parse::<ConditionSpec>().unwrap(), c);
        }
        for bad in ["", "C", "XB", "CX", "CBQ", "cb", "CBPP"] {
            assert!(bad.parse::<ConditionSpec>().is_err(), "{bad}");
        }
    }

    fn lines(words: usize, count: usize) -> Vec<String> {
        (0..count)
            .map(|i| {
                (0..words)
                    .map(|w| format!("w{i}x{w}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }

    #[test]
    fn exact_fit() {
        let s = build_balanced_sample(&lines(10, 30), 100, SizeUnit::Word, 1).unwrap();
        assert_eq!(s.lines.len(), 10);
        assert_eq!(s.size_words, 100);
    }

    #[test]
    fn first_crossing() {
        let s = build_balanced_sample(&lines(7, 30), 100, SizeUnit::Word, 1).unwrap();
        assert_eq!(s.lines.len(), 15);
        assert_eq!(s.size_words, 105);
        assert!(s.sizes_consistent());
    }

    #[test]
    fn pool_too_small() {
        let e = build_balanced_sample(&lines(7, 3), 100, SizeUnit::Word, 1).unwrap_err();
        assert!(matches!(
            e,
            Error::InsufficientPool {
                achieved: 21,
                target: 100
            }
        ));
        assert!(build_balanced_sample(&lines(7, 3), 0, SizeUnit::Word, 1).is_err());
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let pool = lines(5, 200);
        let a = build_balanced_sample(&pool, 300, SizeUnit::Character, 42).unwrap();
        let b = build_balanced_sample(&pool, 300, SizeUnit::Character, 42).unwrap();
        let c = build_balanced_sample(&pool, 300, SizeUnit::Character, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.lines, c.lines);
    }

    #[test]
    fn article_level_keeps_articles_together() {
        let docs: Vec<Document> = (0..20)
            .map(|i| Document {
                id: i.to_string(),
                title: format!("T{i}"),
                body: format!("first {i} line\nsecond {i} line\nthird {i} line"),
            })
            .collect();
        let pool = Pool::from_documents(&docs);
        let opts = SampleOptions {
            unit: SizeUnit::Word,
            target: 25,
            seed: 7,
            level: SelectionLevel::Article,
        };
        let s = build_sample(&pool, &opts).unwrap();
        assert_eq!(s.size_words, 27);
        let groups = s.documents();
        assert_eq!(groups.len(), 3);
        assert!(groups.iter().all(|g| g.len() == 3));
    }

    #[test]
    fn text_round_trip() {
        let mut s = Sample::empty(0);
        s.push("a b", 3);
        s.push("c", 3);
        s.push("d e", 1);
        assert_eq!(s.to_text(), "a b\nc\n\nd e\n");
        let p = Pool::from_text(&s.to_text());
        assert_eq!(p.documents.len(), 2);
        assert_eq!(Sample::whole(&p).lines, s.lines);
    }

    #[test]
    fn ratio() {
        let mut a = Sample::empty(0);
        a.push(&"x".repeat(10002), 0);
        let mut b = Sample::empty(0);
        b.push(&"y".repeat(10000), 0);
        assert!((size_ratio(&a, &b, SizeUnit::Character).unwrap() - 1.0002).abs() < 1e-12);
        assert!(size_ratio(&a, &Sample::empty(0), SizeUnit::Character).is_err());
    }

    fn one_line(text: &str) -> Sample {
        let mut s = Sample::empty(0);
        s.push(text, 0);
        s
    }

    #[test]
    fn conditions_on_text() {
        let s = one_line("It has 30 days.");
        let get = |c: &str| -> Vec<String> {
            apply_condition(&s, c.parse().unwrap(), &[] as &[&str])
                .surfaces()
                .into_iter()
                .map(str::to_owned)
                .collect()
        };
        assert_eq!(get("WB"), ["It", "has", "30", "days", "."]);
        assert_eq!(get("WN"), ["It", "has", "30", "days"]);
        let s = one_line("amazed cats");
        let t = apply_condition(&s, "WNP".parse().unwrap(), &[] as &[&str]);
        assert_eq!(t.surfaces(), ["amaz", "cat"]);
    }

    #[test]
    fn latin1_filter() {
        let mut s = Sample::empty(0);
        s.push("Café in 東京.", 0);
        s.push("東京", 1);
        let t = apply_condition(&s, "WB".parse().unwrap(), &[] as &[&str]).latin1_only();
        assert_eq!(t.surfaces(), ["Café", "in", "."]);
        assert_eq!(t.documents.len(), 1);
    }

    #[test]
    fn sections_fold_case() {
        let mut s = Sample::empty(0);
        s.push("The cat. The dog.", 0);
        s.push("Cats.", 1);
        let t = apply_condition(&s, "WN".parse().unwrap(), &[] as &[&str]);
        assert_eq!(
            t.sections(),
            [
                vec![vec!["the", "cat"], vec!["the", "dog"]],
                vec![vec!["cats"]]
            ]
        );
        assert_eq!(t.surfaces()[0], "The");
    }

    #[test]
    fn exclude_drops_lines() {
        let mut s = Sample::empty(0);
        s.push("Foo is a commune of France.", 0);
        s.push("Bar is a town.", 1);
        let t = apply_condition(&s, "WB".parse().unwrap(), &["is a commune of"]);
        assert_eq!(t.dropped_lines, 1);
        assert_eq!(t.documents.len(), 1);
        assert_eq!(t.surfaces()[0], "Bar");
    }

    #[test]
    fn paired_by_title() {
        let mk = |t: &str, body: &str| Document {
            id: t.into(),
            title: t.into(),
            body: body.into(),
        };
        let simple = Pool::from_documents(&[mk("A", "a1"), mk("B", "b1"), mk("Z", "z1")]);
        let main = Pool::from_documents(&[mk("B", "B main"), mk("A", "A main\nmore")]);
        let p = build_paired_sample(&simple, &main);
        assert_eq!(p.sample.lines, ["A main", "more", "B main"]);
        assert_eq!(p.unmatched, ["Z"]);
    }
}
