//! Revert detection and the mutual-revert controversy score.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use md5::{Digest, Md5};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::RevisionRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevertEvent {
    pub restored_rev: usize,
    pub reverting_rev: usize,
    pub reverting_editor: String,
    pub reverted_editor: String,
    pub self_revert: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RevertOptions {
    /// Match the earliest identical revision instead of the most recent one.
    pub match_earliest: bool,
    /// Attribute the revert to the latest intermediate editor other than the
    /// reverter, instead of always the author of the previous revision.
    pub skip_own_edits: bool,
}

fn digest(text: &str) -> [u8; 16] {
    Md5::digest(text.as_bytes()).into()
}

fn check_sorted(history: &[RevisionRecord]) -> Result<()> {
    if let Some(w) = history
        .windows(2)
        .find(|w| w[1].rev_index <= w[0].rev_index)
    {
        return Err(Error::domain(format!(
            "history not sorted: revision {} follows {}",
            w[1].rev_index, w[0].rev_index
        )));
    }
    Ok(())
}

pub fn detect_reverts(history: &[RevisionRecord]) -> Result<Vec<RevertEvent>> {
    detect_reverts_with(history, RevertOptions::default())
}

/// Find revisions that restore an earlier, non-adjacent revision byte for byte.
///
/// A revision identical to its immediate predecessor is a null edit and is
/// never a revert. Positions in the history slice are reported, which equal
/// `rev_index` for histories produced by the dump reader.
pub fn detect_reverts_with(
    history: &[RevisionRecord],
    opts: RevertOptions,
) -> Result<Vec<RevertEvent>> {
    check_sorted(history)?;
    let hashes: Vec<[u8; 16]> = history.iter().map(|r| digest(&r.raw_text)).collect();
    // Hash -> positions seen so far, ascending.
    let mut seen: HashMap<[u8; 16], Vec<usize>> = HashMap::new();
    let mut events = Vec::new();
    for k in 0..history.len() {
        let h = hashes[k];
        let null_edit = k > 0 && hashes[k - 1] == h;
        if !null_edit {
            let earlier = seen.get(&h).map(Vec::as_slice).unwrap_or(&[]);
            let candidates = &earlier[..earlier.partition_point(|&i| i + 1 < k)];
            let restored = if opts.match_earliest {
                candidates.first()
            } else {
                candidates.last()
            };
            if let Some(&i) = restored {
                let reverter = &history[k].editor;
                let mut reverted = &history[k - 1].editor;
                if opts.skip_own_edits {
                    if let Some(r) = history[i + 1..k]
                        .iter()
                        .rev()
                        .find(|r| &r.editor != reverter)
                    {
                        reverted = &r.editor;
                    }
                }
                events.push(RevertEvent {
                    restored_rev: i,
                    reverting_rev: k,
                    reverting_editor: reverter.clone(),
                    reverted_editor: reverted.clone(),
                    self_revert: reverter == reverted,
                });
            }
        }
        seen.entry(h).or_default().push(k);
    }
    Ok(events)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutualPair {
    pub x: String,
    pub y: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControversyScore {
    pub page_id: String,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "E")]
    pub e: u64,
    pub pairs: Vec<MutualPair>,
    pub excluded_pair: Option<MutualPair>,
    pub revert_events: Vec<RevertEvent>,
}

pub fn controversy_m(history: &[RevisionRecord]) -> Result<ControversyScore> {
    controversy_m_with(history, RevertOptions::default())
}

/// E times the summed weights min(N_x, N_y) of all mutually reverting editor
/// pairs, leaving out the heaviest pair.
pub fn controversy_m_with(
    history: &[RevisionRecord],
    opts: RevertOptions,
) -> Result<ControversyScore> {
    if history.is_empty() {
        return Err(Error::domain("controversy of an empty history"));
    }
    let events = detect_reverts_with(history, opts)?;
    let mut edits: HashMap<&str, u64> = HashMap::new();
    for r in history {
        *edits.entry(r.editor.as_str()).or_insert(0) += 1;
    }
    let directed: BTreeSet<(&str, &str)> = events
        .iter()
        .filter(|e| !e.self_revert)
        .map(|e| (e.reverting_editor.as_str(), e.reverted_editor.as_str()))
        .collect();
    let pairs: Vec<MutualPair> = directed
        .iter()
        .filter(|(x, y)| x < y && directed.contains(&(*y, *x)))
        .map(|&(x, y)| MutualPair {
            x: x.to_owned(),
            y: y.to_owned(),
            weight: edits[x].min(edits[y]),
        })
        .collect();
    // Pairs are in ascending name order, so the first maximum wins ties.
    let top = pairs
        .iter()
        .enumerate()
        .fold(None::<(usize, u64)>, |best, (i, p)| match best {
            Some((_, w)) if w >= p.weight => best,
            _ => Some((i, p.weight)),
        })
        .map(|(i, _)| i);
    let sum: u64 = pairs.iter().map(|p| p.weight).sum();
    let e = edits.len() as u64;
    let m = match top {
        Some(i) => e * (sum - pairs[i].weight),
        None => 0,
    };
    Ok(ControversyScore {
        page_id: history[0].page_id.clone(),
        m,
        e,
        excluded_pair: top.map(|i| pairs[i].clone()),
        pairs,
        revert_events: events,
    })
}

/// `page_id\tM` by descending M, ties by page id.
pub fn ranking_tsv(scores: &[ControversyScore]) -> String {
    let mut rows: BTreeMap<(std::cmp::Reverse<u64>, &str), ()> = BTreeMap::new();
    for s in scores {
        rows.insert((std::cmp::Reverse(s.m), s.page_id.as_str()), ());
    }
    let mut out = String::from("page_id\tM\n");
    for ((m, id), ()) in rows {
        let _ = writeln!(out, "{id}\t{}", m.0);
    }
    out
}
