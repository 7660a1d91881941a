//! Type/token counts, Herdan's C, Zipf rank tables and Heaps fits.
//!
//! Types are counted case-insensitively: every token is lowercased first.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::counts::entropy_of_counts;
use crate::error::{Error, Result};

/// Smallest corpus on which a Heaps fit is attempted.
pub const MIN_HEAPS_TOKENS: u64 = 1000;
/// Smallest number of checkpoints for a Heaps fit.
pub const MIN_HEAPS_CHECKPOINTS: usize = 5;

fn fold(s: &str) -> std::borrow::Cow<'_, str> {
    if s.chars().any(char::is_uppercase) {
        std::borrow::Cow::Owned(s.to_lowercase())
    } else {
        std::borrow::Cow::Borrowed(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeTokenCounts {
    /// Distinct case-folded types, V.
    pub types: u64,
    /// Tokens, N.
    pub tokens: u64,
}

pub fn type_token_counts<S: AsRef<str>>(tokens: &[S]) -> TypeTokenCounts {
    let mut seen: FxHashSet<std::borrow::Cow<'_, str>> = FxHashSet::default();
    for t in tokens {
        seen.insert(fold(t.as_ref()));
    }
    TypeTokenCounts {
        types: seen.len() as u64,
        tokens: tokens.len() as u64,
    }
}

/// Herdan's C = ln V / ln N.
pub fn herdan_c(types: u64, tokens: u64) -> Result<f64> {
    if types < 2 || tokens < 2 {
        return Err(Error::domain(format!(
            "Herdan's C needs V >= 2 and N >= 2 (V={types}, N={tokens})"
        )));
    }
    if types > tokens {
        return Err(Error::domain(format!("V={types} exceeds N={tokens}")));
    }
    Ok((types as f64).ln() / (tokens as f64).ln())
}

fn frequencies<S: AsRef<str>>(tokens: &[S]) -> FxHashMap<std::borrow::Cow<'_, str>, u64> {
    let mut freq: FxHashMap<std::borrow::Cow<'_, str>, u64> = FxHashMap::default();
    for t in tokens {
        *freq.entry(fold(t.as_ref())).or_insert(0) += 1;
    }
    freq
}

/// Entropy in bits of the case-folded unigram distribution.
pub fn unigram_entropy<S: AsRef<str>>(tokens: &[S]) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::domain("entropy of an empty token sequence"));
    }
    let mut counts: Vec<u64> = frequencies(tokens).into_values().collect();
    Ok(entropy_of_counts(&mut counts, tokens.len() as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZipfRow {
    pub rank: u64,
    pub token: String,
    pub freq: u64,
}

/// Types by descending frequency, ties in lexicographic order, ranks from 1.
pub fn zipf_table<S: AsRef<str>>(tokens: &[S]) -> Vec<ZipfRow> {
    let mut rows: Vec<(String, u64)> = frequencies(tokens)
        .into_iter()
        .map(|(k, v)| (k.into_owned(), v))
        .collect();
    rows.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.into_iter()
        .enumerate()
        .map(|(i, (token, freq))| ZipfRow {
            rank: i as u64 + 1,
            token,
            freq,
        })
        .collect()
}

/// Where the vocabulary size is sampled along the token stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckpointPolicy {
    /// `points` log-spaced positions from `start` to the full length.
    LogSpaced { points: usize, start: u64 },
    /// Every position 1..=N.
    Every,
    /// The given positions; those beyond N are ignored.
    Explicit(Vec<u64>),
}

impl Default for CheckpointPolicy {
    fn default() -> Self {
        CheckpointPolicy::LogSpaced {
            points: 50,
            start: 100,
        }
    }
}

impl CheckpointPolicy {
    /// Sorted, deduplicated checkpoint positions within 1..=total.
    pub fn positions(&self, total: u64) -> Vec<u64> {
        let mut out = match self {
            CheckpointPolicy::Every => (1..=total).collect(),
            CheckpointPolicy::Explicit(v) => v.clone(),
            CheckpointPolicy::LogSpaced { points, start } => {
                let start = (*start).max(1);
                if total < start || *points == 0 {
                    Vec::new()
                } else if *points == 1 {
                    vec![total]
                } else {
                    let (lo, hi) = ((start as f64).ln(), (total as f64).ln());
                    let step = (hi - lo) / (*points as f64 - 1.0);
                    let mut v: Vec<u64> = (0..*points)
                        .map(|k| (lo + step * k as f64).exp().round() as u64)
                        .collect();
                    v[0] = start;
                    *v.last_mut().unwrap() = total;
                    v
                }
            }
        };
        out.retain(|&p| p >= 1 && p <= total);
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// `(N, V)` pairs at the policy's checkpoints.
pub fn heaps_curve<S: AsRef<str>>(tokens: &[S], policy: &CheckpointPolicy) -> Vec<(u64, u64)> {
    let positions = policy.positions(tokens.len() as u64);
    let mut seen: FxHashSet<std::borrow::Cow<'_, str>> = FxHashSet::default();
    let mut out = Vec::with_capacity(positions.len());
    let mut next = positions.iter().peekable();
    for (i, t) in tokens.iter().enumerate() {
        seen.insert(fold(t.as_ref()));
        let n = i as u64 + 1;
        if next.peek() == Some(&&n) {
            out.push((n, seen.len() as u64));
            next.next();
        }
        if next.peek().is_none() {
            break;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeapsFit {
    /// Slope b of ln V = ln a + b ln N.
    pub exponent: f64,
    /// ln a.
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub checkpoints: Vec<(u64, u64)>,
}

/// Fit V = a·N^b by least squares on the log-log vocabulary curve.
pub fn heaps_fit<S: AsRef<str>>(tokens: &[S], policy: &CheckpointPolicy) -> Result<HeapsFit> {
    let n = tokens.len() as u64;
    if n < MIN_HEAPS_TOKENS {
        return Err(Error::domain(format!(
            "Heaps fit needs at least {MIN_HEAPS_TOKENS} tokens, got {n}"
        )));
    }
    fit_power_law(heaps_curve(tokens, policy))
}

/// Least-squares fit of ln V on ln N over precomputed points.
pub fn fit_power_law(points: Vec<(u64, u64)>) -> Result<HeapsFit> {
    if points.len() < MIN_HEAPS_CHECKPOINTS {
        return Err(Error::domain(format!(
            "Heaps fit needs at least {MIN_HEAPS_CHECKPOINTS} checkpoints, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, v)| n == 0 || v == 0) {
        return Err(Error::domain("checkpoint with zero tokens or types"));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| (v as f64).ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::domain("checkpoints do not vary"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    Ok(HeapsFit {
        exponent: slope,
        intercept,
        stderr,
        checkpoints: points,
    })
}
