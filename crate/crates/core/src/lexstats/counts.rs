//! N-gram count tables with sentence-boundary handling.
//!
//! A section (typically one document) is laid out as
//! `§ s1 § s2 § ... § sk §` and every length-`n` window is enumerated.
//! Under [`BoundaryPolicy::Postprocessed`], the boundary nearest the window
//! centre governs: a window centred on it is dropped (odd `n`), otherwise
//! the shorter side is overwritten with `§`. Windows whose two nearest
//! boundaries are equally far from the centre, and windows made only of
//! `§`, are dropped.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::text::BOUNDARY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryPolicy {
    Raw,
    #[serde(rename = "post")]
    Postprocessed,
}

impl std::str::FromStr for BoundaryPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(BoundaryPolicy::Raw),
            "post" | "postprocessed" => Ok(BoundaryPolicy::Postprocessed),
            other => Err(Error::parse(
                "boundary policy",
                format!("unknown policy {other:?}"),
            )),
        }
    }
}

/// Counts of n-grams keyed by their space-joined symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n: usize,
    policy: BoundaryPolicy,
    entries: HashMap<String, u64>,
    total: u64,
}

impl CountTable {
    pub fn new(n: usize, policy: BoundaryPolicy) -> Self {
        CountTable {
            n,
            policy,
            entries: HashMap::new(),
            total: 0,
        }
    }

    /// Build a table from explicit keys. Keys are space-joined symbol lists.
    pub fn from_counts<K: Into<String>>(
        n: usize,
        policy: BoundaryPolicy,
        counts: impl IntoIterator<Item = (K, u64)>,
    ) -> Result<Self> {
        let mut t = CountTable::new(n, policy);
        for (k, c) in counts {
            let k = k.into();
            if k.split(' ').count() != n {
                return Err(Error::domain(format!("key {k:?} is not a {n}-gram")));
            }
            t.add(k, c);
        }
        Ok(t)
    }

    fn add(&mut self, key: String, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(key).or_insert(0) += count;
        self.total += count;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn policy(&self) -> BoundaryPolicy {
        self.policy
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct keys.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, symbols: &[&str]) -> u64 {
        self.entries.get(&symbols.join(" ")).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(k, &c)| (k.as_str(), c))
    }

    /// Entries by descending count, ties in lexicographic key order.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Key-wise addition.
    pub fn merge(&mut self, other: CountTable) -> Result<()> {
        if other.n != self.n || other.policy != self.policy {
            return Err(Error::domain(
                "cannot merge tables of different order or policy",
            ));
        }
        if self.entries.is_empty() {
            self.entries = other.entries;
            self.total = other.total;
            return Ok(());
        }
        for (k, c) in other.entries {
            self.add(k, c);
        }
        Ok(())
    }

    /// Check the stored total and, for postprocessed odd-order tables, that
    /// no key has the boundary marker at its centre.
    pub fn check_invariants(&self) -> Result<()> {
        let sum: u64 = self.entries.values().sum();
        if sum != self.total {
            return Err(Error::domain(format!(
                "total {} != sum of counts {sum}",
                self.total
            )));
        }
        if self.policy == BoundaryPolicy::Postprocessed && self.n % 2 == 1 {
            let centre = self.n / 2;
            if let Some(k) = self
                .entries
                .keys()
                .find(|k| k.split(' ').nth(centre) == Some(BOUNDARY))
            {
                return Err(Error::domain(format!(
                    "key {k:?} has the boundary at its centre"
                )));
            }
        }
        Ok(())
    }

    /// TSV lines `key\tcount`, ranked.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.ranked() {
            let _ = writeln!(out, "{k}\t{c}");
        }
        out
    }
}

const MARK: u32 = 0;

/// Id-keyed counter for one batch of sections.
#[derive(Default)]
struct Counter<'a> {
    ids: FxHashMap<&'a str, u32>,
    names: Vec<&'a str>,
    counts: FxHashMap<SmallVec<[u32; 6]>, u64>,
}

impl<'a> Counter<'a> {
    fn new() -> Self {
        Counter {
            names: vec![BOUNDARY],
            ..Default::default()
        }
    }

    fn intern(&mut self, s: &'a str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(s);
        self.ids.insert(s, id);
        id
    }

    fn count_section<Sen, S>(
        &mut self,
        section: &'a [Sen],
        n: usize,
        policy: BoundaryPolicy,
        seq: &mut Vec<u32>,
    ) where
        Sen: AsRef<[S]> + 'a,
        S: AsRef<str> + 'a,
    {
        seq.clear();
        seq.push(MARK);
        for sentence in section {
            let sentence = sentence.as_ref();
            if sentence.is_empty() {
                continue;
            }
            for sym in sentence {
                let id = self.intern(sym.as_ref());
                seq.push(id);
            }
            seq.push(MARK);
        }
        if seq.len() < n {
            return;
        }
        let mut window: SmallVec<[u32; 6]> = SmallVec::with_capacity(n);
        for w in seq.windows(n) {
            window.clear();
            window.extend_from_slice(w);
            if policy == BoundaryPolicy::Postprocessed && !postprocess_window(&mut window) {
                continue;
            }
            match self.counts.get_mut(window.as_slice()) {
                Some(c) => *c += 1,
                None => {
                    self.counts.insert(window.clone(), 1);
                }
            }
        }
    }

    fn into_table(self, n: usize, policy: BoundaryPolicy) -> CountTable {
        let mut table = CountTable::new(n, policy);
        table.entries.reserve(self.counts.len());
        let mut key = String::new();
        for (ids, c) in self.counts {
            key.clear();
            for (i, id) in ids.iter().enumerate() {
                if i > 0 {
                    key.push(' ');
                }
                key.push_str(self.names[*id as usize]);
            }
            table.add(key.clone(), c);
        }
        table
    }
}

/// Apply the boundary rule in place. Returns false when the window is dropped.
fn postprocess_window(w: &mut [u32]) -> bool {
    let n = w.len();
    let mut nearest: Option<usize> = None;
    let mut best = usize::MAX;
    let mut tied = false;
    for (i, &s) in w.iter().enumerate() {
        if s != MARK {
            continue;
        }
        // Twice the distance from the centre, to stay in integers.
        let d = (2 * i).abs_diff(n - 1);
        if d < best {
            best = d;
            nearest = Some(i);
            tied = false;
        } else if d == best {
            tied = true;
        }
    }
    let Some(p) = nearest else {
        return true;
    };
    if tied || best == 0 {
        return false;
    }
    if p < n - 1 - p {
        w[..p].fill(MARK);
    } else {
        w[p + 1..].fill(MARK);
    }
    w.iter().any(|&s| s != MARK)
}

fn check_order(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::domain("n-gram order must be at least 1"));
    }
    Ok(())
}

/// Count n-grams over one section of sentences.
pub fn ngram_counts<Sen, S>(
    sentences: &[Sen],
    n: usize,
    policy: BoundaryPolicy,
) -> Result<CountTable>
where
    Sen: AsRef<[S]>,
    S: AsRef<str>,
{
    ngram_counts_sections(std::slice::from_ref(&sentences), n, policy)
}

/// Count n-grams over several sections, each padded with its own boundaries.
pub fn ngram_counts_sections<Sec, Sen, S>(
    sections: &[Sec],
    n: usize,
    policy: BoundaryPolicy,
) -> Result<CountTable>
where
    Sec: AsRef<[Sen]>,
    Sen: AsRef<[S]>,
    S: AsRef<str>,
{
    check_order(n)?;
    let mut counter = Counter::new();
    let mut seq = Vec::new();
    for section in sections {
        counter.count_section(section.as_ref(), n, policy, &mut seq);
    }
    Ok(counter.into_table(n, policy))
}

/// Parallel counting: sections are split into `shards` contiguous groups,
/// counted independently and merged by key-wise addition.
pub fn ngram_counts_sharded<Sec, Sen, S>(
    sections: &[Sec],
    n: usize,
    policy: BoundaryPolicy,
    shards: usize,
) -> Result<CountTable>
where
    Sec: AsRef<[Sen]> + Sync,
    Sen: AsRef<[S]>,
    S: AsRef<str>,
{
    check_order(n)?;
    let shards = shards.max(1);
    let chunk = sections.len().div_ceil(shards).max(1);
    let tables: Vec<CountTable> = sections
        .par_chunks(chunk)
        .map(|part| ngram_counts_sections(part, n, policy))
        .collect::<Result<_>>()?;
    let mut merged = CountTable::new(n, policy);
    for t in tables {
        merged.merge(t)?;
    }
    Ok(merged)
}

/// Shannon entropy of the table's relative frequencies, in bits.
pub fn table_entropy(t: &CountTable) -> Result<f64> {
    if t.total == 0 {
        return Err(Error::domain("entropy of an empty table"));
    }
    let mut counts: Vec<u64> = t.entries.values().copied().collect();
    Ok(entropy_of_counts(&mut counts, t.total))
}

/// Entropy of a count vector. Counts are sorted first so the result does not
/// depend on hash iteration order.
pub(crate) fn entropy_of_counts(counts: &mut [u64], total: u64) -> f64 {
    counts.sort_unstable();
    let total = total as f64;
    let h: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}
