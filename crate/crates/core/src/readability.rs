//! Gunning fog index and Welch's two-sample t-test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{is_complex, Sentence};

/// Fog index together with the counts it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FogReport {
    pub words: u64,
    pub sentences: u64,
    pub complex_words: u64,
    #[serde(rename = "F")]
    pub fog: f64,
}

impl FogReport {
    /// F = 0.4 (w/s + 100 c/w).
    pub fn from_counts(words: u64, sentences: u64, complex_words: u64) -> Result<Self> {
        if words == 0 || sentences == 0 {
            return Err(Error::domain(format!(
                "fog index needs at least one word and one sentence (w={words}, s={sentences})"
            )));
        }
        if complex_words > words {
            return Err(Error::domain("more complex words than words"));
        }
        Ok(FogReport {
            words,
            sentences,
            complex_words,
            fog: fog_formula(words, sentences, complex_words),
        })
    }

    /// Recompute the index from the stored counts.
    pub fn recompute(&self) -> f64 {
        fog_formula(self.words, self.sentences, self.complex_words)
    }
}

fn fog_formula(w: u64, s: u64, c: u64) -> f64 {
    let (w, s, c) = (w as f64, s as f64, c as f64);
    0.4 * (w / s + 100.0 * c / w)
}

fn fog_counts(sentences: &[Sentence]) -> (u64, u64, u64) {
    let (mut w, mut s, mut c) = (0u64, 0u64, 0u64);
    for sentence in sentences.iter().filter(|x| !x.is_empty()) {
        s += 1;
        for t in sentence.tokens.iter().filter(|t| t.is_word()) {
            w += 1;
            if is_complex(&t.surface) {
                c += 1;
            }
        }
    }
    (w, s, c)
}

/// Fog index of a text. Only word tokens count as words; a word is complex
/// when it has three or more estimated syllables.
pub fn gunning_fog(sentences: &[Sentence]) -> Result<FogReport> {
    let (w, s, c) = fog_counts(sentences);
    FogReport::from_counts(w, s, c)
}

/// Count, mean and unbiased variance of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub n: u64,
    pub mean: f64,
    pub variance: f64,
}

impl GroupStats {
    /// Values are summed in sorted order so the result does not depend on
    /// input order. A single value has variance 0.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("statistics of an empty sample"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite value in sample"));
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let variance = if v.len() < 2 {
            0.0
        } else {
            let mut dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
            dev.sort_by(f64::total_cmp);
            dev.iter().sum::<f64>() / (n - 1.0)
        };
        Ok(GroupStats {
            n: v.len() as u64,
            mean,
            variance,
        })
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        (self.variance / self.n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFog {
    /// Fog over the counts of all documents taken together.
    pub pooled: FogReport,
    /// Per-document fog values.
    pub per_document: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
    /// True when there was only one document, so `stderr` is not meaningful.
    pub single_document: bool,
    /// Documents without any word token, left out.
    pub skipped_documents: u64,
}

/// Fog per document, their mean and standard error, and the pooled index.
/// Documents without words are skipped and counted.
pub fn corpus_fog<D: AsRef<[Sentence]>>(documents: &[D]) -> Result<CorpusFog> {
    if documents.is_empty() {
        return Err(Error::domain("fog of an empty corpus"));
    }
    let mut per_document = Vec::with_capacity(documents.len());
    let mut skipped_documents = 0;
    let (mut w, mut s, mut c) = (0, 0, 0);
    for d in documents {
        let (dw, ds, dc) = fog_counts(d.as_ref());
        if dw == 0 {
            skipped_documents += 1;
            continue;
        }
        per_document.push(FogReport::from_counts(dw, ds, dc)?.fog);
        w += dw;
        s += ds;
        c += dc;
    }
    if per_document.is_empty() {
        return Err(Error::domain("no document contains a word"));
    }
    let stats = GroupStats::from_values(&per_document)?;
    Ok(CorpusFog {
        skipped_documents,
        pooled: FogReport::from_counts(w, s, c)?,
        mean: stats.mean,
        stderr: stats.stderr(),
        single_document: stats.n == 1,
        per_document,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchResult {
    pub t: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p: f64,
}

/// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of freedom.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::domain(format!(
            "t-test needs at least two values per group (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    let ga = GroupStats::from_values(a)?;
    let gb = GroupStats::from_values(b)?;
    if ga.variance == 0.0 && gb.variance == 0.0 {
        return Err(Error::Degenerate("both groups have zero variance".into()));
    }
    let qa = ga.variance / ga.n as f64;
    let qb = gb.variance / gb.n as f64;
    let t = (ga.mean - gb.mean) / (qa + qb).sqrt();
    let df = (qa + qb).powi(2) / (qa * qa / (ga.n as f64 - 1.0) + qb * qb / (gb.n as f64 - 1.0));
    let p = if t == 0.0 {
        1.0
    } else {
        regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)
    };
    Ok(WelchResult {
        t,
        df,
        p: p.clamp(0.0, 1.0),
    })
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// I_x(a, b).
fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

/// Continued fraction for the incomplete beta, modified Lentz.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-15;
    let clamp = |v: f64| if v.abs() < TINY { TINY } else { v };
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
