//! Part-of-speech tag statistics over externally tagged text.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexstats::{ngram_counts_sections, BoundaryPolicy, CountTable};

/// Penn Treebank tags, including the punctuation tags.
pub const PENN_TAGS: &[&str] = &[
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "(", ")", "``", "''", "#", "$",
    "-LRB-", "-RRB-", "HYPH", "NFP",
];

pub fn is_penn_tag(tag: &str) -> bool {
    PENN_TAGS.contains(&tag)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub pairs: Vec<(String, String)>,
}

impl TaggedSentence {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn tags(&self) -> Vec<&str> {
        self.pairs.iter().map(|(_, t)| t.as_str()).collect()
    }
}

/// Parsed tagged text with a count of tags outside [`PENN_TAGS`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaggedText {
    pub sentences: Vec<TaggedSentence>,
    pub unknown_tags: u64,
}

/// Parse `token/TAG` entries, one sentence per line. The tag follows the
/// last unescaped `/`; `\/` in a token stands for a literal slash.
pub fn parse_tagged(input: &str) -> Result<TaggedText> {
    let mut out = TaggedText::default();
    for (i, line) in input.lines().enumerate() {
        let mut pairs = Vec::new();
        for entry in line.split_whitespace() {
            let (token, tag) = split_entry(entry).ok_or_else(|| {
                Error::parse(
                    format!("line {}", i + 1),
                    format!("entry {entry:?} has no tag"),
                )
            })?;
            if !is_penn_tag(&tag) {
                out.unknown_tags += 1;
            }
            pairs.push((token, tag));
        }
        if !pairs.is_empty() {
            out.sentences.push(TaggedSentence { pairs });
        }
    }
    if out.unknown_tags > 0 {
        log::warn!(
            "{} tags outside the Penn Treebank inventory",
            out.unknown_tags
        );
    }
    Ok(out)
}

fn split_entry(entry: &str) -> Option<(String, String)> {
    let bytes = entry.as_bytes();
    let slash = (0..bytes.len())
        .rev()
        .find(|&i| bytes[i] == b'/' && (i == 0 || bytes[i - 1] != b'\\'))?;
    let (token, tag) = (&entry[..slash], &entry[slash + 1..]);
    if token.is_empty() || tag.is_empty() {
        return None;
    }
    Some((token.replace("\\/", "/"), tag.to_owned()))
}

fn is_proper(tag: &str) -> bool {
    tag == "NNP" || tag == "NNPS"
}

/// Collapse each run of adjacent NNP/NNPS tokens into one `_`-joined token.
/// The merged tag is NNPS when the run ends in NNPS, NNP otherwise.
pub fn merge_adjacent_proper_nouns(s: &TaggedSentence) -> TaggedSentence {
    let mut pairs: Vec<(String, String)> = Vec::with_capacity(s.pairs.len());
    let mut in_run = false;
    for (tok, tag) in &s.pairs {
        if is_proper(tag) {
            if in_run {
                let last = pairs.last_mut().expect("run has a head");
                last.0.push('_');
                last.0.push_str(tok);
                last.1.clone_from(tag);
                continue;
            }
            in_run = true;
        } else {
            in_run = false;
        }
        pairs.push((tok.clone(), tag.clone()));
    }
    TaggedSentence { pairs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosCondition {
    /// Original tagging.
    O,
    /// NER-merged tagging.
    N,
    /// Original, proper-noun runs merged.
    SO,
    /// NER-merged, proper-noun runs merged.
    SN,
}

impl PosCondition {
    pub fn is_shortened(self) -> bool {
        matches!(self, PosCondition::SO | PosCondition::SN)
    }

    /// Apply the merge pass when the condition calls for it.
    pub fn prepare(self, sentences: &[TaggedSentence]) -> Vec<TaggedSentence> {
        if self.is_shortened() {
            sentences.iter().map(merge_adjacent_proper_nouns).collect()
        } else {
            sentences.to_vec()
        }
    }
}

impl FromStr for PosCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(PosCondition::O),
            "N" => Ok(PosCondition::N),
            "SO" => Ok(PosCondition::SO),
            "SN" => Ok(PosCondition::SN),
            _ => Err(Error::parse(
                "POS condition",
                format!("{s:?} is not one of O, N, SO, SN"),
            )),
        }
    }
}

impl std::fmt::Display for PosCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Tag n-gram counts, with the same boundary handling as word n-grams.
pub fn tag_ngram_table(
    sentences: &[TaggedSentence],
    n: usize,
    policy: BoundaryPolicy,
) -> Result<CountTable> {
    let tags: Vec<Vec<&str>> = sentences.iter().map(TaggedSentence::tags).collect();
    ngram_counts_sections(std::slice::from_ref(&tags), n, policy)
}

/// Relative frequency of each tag, descending, ties by tag.
pub fn tag_distribution(sentences: &[TaggedSentence]) -> Vec<(String, f64)> {
    let mut counts: std::collections::HashMap<&str, u64> = std::collections::HashMap::new();
    let mut total = 0u64;
    for s in sentences {
        for (_, t) in &s.pairs {
            *counts.entry(t).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut v: Vec<(&str, u64)> = counts.into_iter().collect();
    v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    v.into_iter()
        .map(|(t, c)| (t.to_owned(), c as f64 / total as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub n: usize,
    pub similarity: f64,
    pub angle_degrees: f64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn reduced_counts(t: &CountTable) -> std::collections::HashMap<&str, u128> {
    let g = t.iter().fold(0, |g, (_, c)| gcd(g, c)).max(1);
    t.iter().map(|(k, c)| (k, (c / g) as u128)).collect()
}

/// Angle between two count tables viewed as vectors over their keys.
///
/// Counts are reduced by each table's gcd and accumulated exactly in
/// integers, so scaling a table by a constant and comparing a table with
/// itself give exact results.
pub fn cosine_angle(a: &CountTable, b: &CountTable) -> Result<Similarity> {
    if a.n() != b.n() {
        return Err(Error::domain(format!(
            "cannot compare {}-grams with {}-grams",
            a.n(),
            b.n()
        )));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("cosine of an empty table"));
    }
    let ra = reduced_counts(a);
    let rb = reduced_counts(b);
    let norm = |r: &std::collections::HashMap<&str, u128>| r.values().map(|c| c * c).sum::<u128>();
    let (small, large) = if ra.len() <= rb.len() {
        (&ra, &rb)
    } else {
        (&rb, &ra)
    };
    let dot: u128 = small
        .iter()
        .filter_map(|(k, c)| large.get(k).map(|d| c * d))
        .sum();
    let (na, nb) = (norm(&ra), norm(&rb));
    let exact = matches!((dot.checked_mul(dot), na.checked_mul(nb)), (Some(x), Some(y)) if x == y);
    let similarity = if exact {
        1.0
    } else {
        (dot as f64 / ((na as f64) * (nb as f64)).sqrt()).clamp(-1.0, 1.0)
    };
    Ok(Similarity {
        n: a.n(),
        similarity,
        angle_degrees: angle_from_similarity(similarity),
    })
}

/// arccos in degrees, clamped to the valid domain.
pub fn angle_from_similarity(similarity: f64) -> f64 {
    similarity.clamp(-1.0, 1.0).acos().to_degrees()
}

/// Rows `n`, similarity and angle for each comparison.
pub fn similarity_tsv(rows: &[Similarity]) -> String {
    let mut out = String::from("n\tsimilarity\tangle_degrees\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{:.6}\t{:.4}", r.n, r.similarity, r.angle_degrees);
    }
    out
}
