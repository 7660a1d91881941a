//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use corplex::controversy::{controversy_m_with, RevertOptions};
use corplex::lexstats::{
    fit_power_law, heaps_fit, herdan_c, ngram_counts, ngram_counts_sections, ngram_counts_sharded,
    table_entropy, type_token_counts, unigram_entropy, CheckpointPolicy,
};
use corplex::posstats::{angle_from_similarity, cosine_angle};
use corplex::readability::{corpus_fog, gunning_fog, welch_t_test};
use corplex::text::{split_text, BOUNDARY};
use corplex::{BoundaryPolicy, CountTable, RevisionRecord, Sentence, Token};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Normal, Zipf};
use statrs::distribution::{ContinuousCDF, StudentsT};

const FOG_TOLERANCE: f64 = 1e-12;
const FOG_TIME: Duration = Duration::from_secs(1);
const HERDAN_DELETION_LIMIT: f64 = 1e-3;
const HERDAN_TIME: Duration = Duration::from_secs(10);
const HEAPS_EXACT_TOLERANCE: f64 = 1e-6;
const HEAPS_ZIPF_TOLERANCE: f64 = 0.05;
const HEAPS_TIME: Duration = Duration::from_secs(30);
const BOUNDARY_TIME: Duration = Duration::from_secs(60);
const CONTROVERSY_TIME: Duration = Duration::from_secs(10);
const ANGLE_TOLERANCE: f64 = 0.01;
const WELCH_T_TOLERANCE: f64 = 1e-9;
const WELCH_P_TOLERANCE: f64 = 1e-6;
const ENTROPY_TOLERANCE: f64 = 1e-4;
const THROUGHPUT_TIME: Duration = Duration::from_secs(10);
const MIN_SPEEDUP: f64 = 2.0;
const SIZE: usize = 1_000_000;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn zipf_tokens(n: usize, s: f64, seed: u64) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let z = Zipf::new(1e12, s).unwrap();
    (0..n)
        .map(|_| (z.sample(&mut rng) as u64).to_string())
        .collect()
}

fn fog_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    for case in 0..50 {
        let s = rng.random_range(1..20u64);
        let w = rng.random_range(s..s * 30 + 1);
        let c = rng.random_range(0..=w);
        // One- and three-syllable words, distributed over s sentences.
        let mut sentences = vec![Vec::new(); s as usize];
        for i in 0..w {
            let word = if i < c { "elephant" } else { "cat" };
            let target = if i < s { i } else { rng.random_range(0..s) };
            sentences[target as usize].push(Token::new(word));
        }
        let sentences: Vec<Sentence> = sentences
            .into_iter()
            .map(|mut tokens| {
                tokens.push(Token::new("."));
                Sentence { tokens }
            })
            .collect();
        let got = gunning_fog(&sentences).map_err(|e| e.to_string())?;
        let (wf, sf, cf) = (w as f64, s as f64, c as f64);
        let want = 0.4 * (wf / sf + 100.0 * cf / wf);
        ensure(
            (got.words, got.sentences, got.complex_words) == (w, s, c),
            || format!("case {case}: counted {got:?}, built ({w}, {s}, {c})"),
        )?;
        ensure((got.fog - want).abs() <= FOG_TOLERANCE, || {
            format!("case {case}: F {} vs {want}", got.fog)
        })?;
    }
    let took = within(start, FOG_TIME)?;
    Ok(format!("50 texts within {FOG_TOLERANCE:e} in {took:.2?}"))
}

fn herdan_stability() -> Outcome {
    let start = Instant::now();
    let c = |v, n| herdan_c(v, n).map_err(|e| e.to_string());
    ensure(c(10, 100)? == 0.5, || "C(10, 100) != 0.5".into())?;
    for n in [2, 17, 1000, 123_456] {
        ensure(c(n, n)? == 1.0, || format!("C({n}, {n}) != 1"))?;
    }
    let tokens = zipf_tokens(SIZE, 1.2, 2);
    let full = type_token_counts(&tokens);
    let mut rng = StdRng::seed_from_u64(3);
    let kept: Vec<&String> = tokens
        .iter()
        .filter(|_| rng.random::<f64>() >= 0.05)
        .collect();
    let part = type_token_counts(&kept);
    let (cf, cp) = (c(full.types, full.tokens)?, c(part.types, part.tokens)?);
    let change = (cf - cp).abs() / cf;
    ensure(change < HERDAN_DELETION_LIMIT, || {
        format!("5% deletion moved C by {:.4}%", change * 100.0)
    })?;
    let took = within(start, HERDAN_TIME)?;
    Ok(format!(
        "closed forms exact; 5% deletion from {} tokens moved C by {:.4}% (< {}%) in {took:.2?}",
        full.tokens,
        change * 100.0,
        HERDAN_DELETION_LIMIT * 100.0
    ))
}

fn heaps_recovery() -> Outcome {
    let start = Instant::now();
    for q in 1..=4u32 {
        for a in 1..=3u64 {
            let points = (2u64..40).map(|m| (m.pow(q), a * m)).collect();
            let fit = fit_power_law(points).map_err(|e| e.to_string())?;
            let b = 1.0 / q as f64;
            ensure((fit.exponent - b).abs() < HEAPS_EXACT_TOLERANCE, || {
                format!("V = {a}·N^{b}: fitted {}", fit.exponent)
            })?;
        }
    }
    // A token stream whose vocabulary is exactly floor(N^(1/q)).
    for q in [1u32, 2, 3] {
        let top: u64 = if q == 1 { 1200 } else { 60 };
        let len = top.pow(q);
        let mut fresh = 0u64;
        let tokens: Vec<String> = (1..=len)
            .map(|p| {
                if (fresh + 1).pow(q) == p {
                    fresh += 1;
                    format!("t{fresh}")
                } else {
                    "t1".to_owned()
                }
            })
            .collect();
        let checkpoints = CheckpointPolicy::Explicit((2..=top).map(|m| m.pow(q)).collect());
        let fit = heaps_fit(&tokens, &checkpoints).map_err(|e| e.to_string())?;
        ensure(
            (fit.exponent - 1.0 / q as f64).abs() < HEAPS_EXACT_TOLERANCE,
            || format!("stream with V = N^(1/{q}): fitted {}", fit.exponent),
        )?;
    }
    let s = 1.4;
    let tokens = zipf_tokens(SIZE, s, 4);
    let fit = heaps_fit(&tokens, &CheckpointPolicy::default()).map_err(|e| e.to_string())?;
    ensure(
        (fit.exponent - 1.0 / s).abs() <= HEAPS_ZIPF_TOLERANCE,
        || {
            format!(
                "Zipf({s}) exponent {:.4}, expected {:.4} ± {HEAPS_ZIPF_TOLERANCE}",
                fit.exponent,
                1.0 / s
            )
        },
    )?;
    let took = within(start, HEAPS_TIME)?;
    Ok(format!(
        "exact laws within {HEAPS_EXACT_TOLERANCE:e}; Zipf({s}) exponent {:.4} vs 1/s = {:.4} in {took:.2?}",
        fit.exponent,
        1.0 / s
    ))
}

/// Literal reading of the omit/replace rule on one window.
fn oracle_window(window: &[&str]) -> Option<Vec<String>> {
    let n = window.len() as i64;
    let marks: Vec<i64> = (0..n).filter(|&i| window[i as usize] == BOUNDARY).collect();
    if marks.is_empty() {
        return Some(window.iter().map(|s| s.to_string()).collect());
    }
    let dist = |i: i64| (2 * i - (n - 1)).abs();
    let best = marks.iter().map(|&i| dist(i)).min().unwrap();
    let nearest: Vec<i64> = marks.iter().copied().filter(|&i| dist(i) == best).collect();
    if nearest.len() > 1 {
        return None;
    }
    let p = nearest[0];
    if n % 2 == 1 && p == (n - 1) / 2 {
        return None;
    }
    let (left, right) = (p, n - 1 - p);
    let out: Vec<String> = (0..n)
        .map(|i| {
            let replaced = (left < right && i < p) || (right < left && i > p);
            if replaced {
                BOUNDARY
            } else {
                window[i as usize]
            }
            .to_string()
        })
        .collect();
    if out.iter().all(|t| t == BOUNDARY) {
        None
    } else {
        Some(out)
    }
}

fn oracle_counts(sentences: &[Vec<&str>], n: usize) -> HashMap<String, u64> {
    let mut seq = vec![BOUNDARY];
    for s in sentences {
        seq.extend(s.iter().copied());
        seq.push(BOUNDARY);
    }
    let mut counts = HashMap::new();
    for w in seq.windows(n) {
        if let Some(key) = oracle_window(w) {
            *counts.entry(key.join(" ")).or_insert(0) += 1;
        }
    }
    counts
}

fn same_table(t: &CountTable, oracle: &HashMap<String, u64>) -> bool {
    t.len() == oracle.len() && t.iter().all(|(k, c)| oracle.get(k) == Some(&c))
}

fn boundary_oracle() -> Outcome {
    let start = Instant::now();
    let symbols = ["a", "b", "c"];
    let mut sentences: Vec<Vec<&str>> = Vec::new();
    for len in 1..=4u32 {
        for code in 0..3usize.pow(len) {
            sentences.push(
                (0..len)
                    .map(|i| symbols[code / 3usize.pow(i) % 3])
                    .collect(),
            );
        }
    }
    let k = sentences.len();
    // Multisets as non-decreasing index tuples of size 0 to 3.
    let mut multisets: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..k {
        multisets.push(vec![i]);
        for j in i..k {
            multisets.push(vec![i, j]);
            for l in j..k {
                multisets.push(vec![i, j, l]);
            }
        }
    }
    let mut checked = 0u64;
    for m in &multisets {
        let group: Vec<Vec<&str>> = m.iter().map(|&i| sentences[i].clone()).collect();
        for n in 1..=5 {
            let t = ngram_counts(&group, n, BoundaryPolicy::Postprocessed)
                .map_err(|e| e.to_string())?;
            let oracle = oracle_counts(&group, n);
            ensure(same_table(&t, &oracle), || {
                format!("{group:?}, n = {n}: table differs from oracle")
            })?;
            checked += 1;
        }
    }
    let took = within(start, BOUNDARY_TIME)?;
    Ok(format!(
        "{} multisets x n = 1..5 ({checked} tables) match in {took:.2?}",
        multisets.len()
    ))
}

fn oracle_m(history: &[RevisionRecord], opts: RevertOptions) -> u64 {
    let mut directed = BTreeSet::new();
    for k in 0..history.len() {
        if k > 0 && history[k].raw_text == history[k - 1].raw_text {
            continue;
        }
        let matches: Vec<usize> = (0..k.saturating_sub(1))
            .filter(|&i| history[i].raw_text == history[k].raw_text)
            .collect();
        let restored = if opts.match_earliest {
            matches.first()
        } else {
            matches.last()
        };
        let Some(&i) = restored else { continue };
        let reverter = &history[k].editor;
        let mut reverted = &history[k - 1].editor;
        if opts.skip_own_edits {
            for r in (i + 1..k).rev() {
                if &history[r].editor != reverter {
                    reverted = &history[r].editor;
                    break;
                }
            }
        }
        if reverter != reverted {
            directed.insert((reverter.clone(), reverted.clone()));
        }
    }
    let mut edits: HashMap<&str, u64> = HashMap::new();
    for r in history {
        *edits.entry(&r.editor).or_default() += 1;
    }
    let mut weights: Vec<(u64, String, String)> = directed
        .iter()
        .filter(|(x, y)| x < y && directed.contains(&(y.clone(), x.clone())))
        .map(|(x, y)| {
            (
                edits[x.as_str()].min(edits[y.as_str()]),
                x.clone(),
                y.clone(),
            )
        })
        .collect();
    weights.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| (&a.1, &a.2).cmp(&(&b.1, &b.2))));
    let rest: u64 = weights.iter().skip(1).map(|w| w.0).sum();
    edits.len() as u64 * rest
}

fn controversy_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let (mut nonzero, mut single_pair) = (0, 0);
    for h in 0..1000 {
        let len = rng.random_range(1..=20);
        let history: Vec<RevisionRecord> = (0..len)
            .map(|i| RevisionRecord {
                page_id: format!("p{h}"),
                rev_index: i,
                timestamp: chrono::DateTime::from_timestamp(i as i64 * 60, 0).unwrap(),
                editor: format!("E{}", rng.random_range(0..5)),
                raw_text: ["x", "y", "z", "w"][rng.random_range(0..4)].to_owned(),
            })
            .collect();
        for (earliest, skip) in [(false, false), (true, false), (false, true), (true, true)] {
            let opts = RevertOptions {
                match_earliest: earliest,
                skip_own_edits: skip,
            };
            let got = controversy_m_with(&history, opts).map_err(|e| e.to_string())?;
            let want = oracle_m(&history, opts);
            ensure(got.m == want, || {
                format!("history {h} ({opts:?}): M = {} vs oracle {want}", got.m)
            })?;
            if opts == RevertOptions::default() {
                if got.pairs.len() == 1 {
                    single_pair += 1;
                    ensure(got.m == 0, || {
                        format!("history {h}: single pair but M = {}", got.m)
                    })?;
                }
                if got.m > 0 {
                    nonzero += 1;
                }
            }
        }
    }
    let took = within(start, CONTROVERSY_TIME)?;
    Ok(format!(
        "1000 histories x 4 option sets match ({nonzero} with M > 0, {single_pair} single-pair with M = 0) in {took:.2?}"
    ))
}

fn table(rng: &mut StdRng) -> CountTable {
    let keys = ["a b", "b c", "c a", "a a", "b b", "c c", "a c"];
    let mut entries = Vec::new();
    for k in keys {
        if rng.random::<f64>() < 0.7 {
            entries.push((k.to_owned(), rng.random_range(1..100u64)));
        }
    }
    if entries.is_empty() {
        entries.push(("a b".to_owned(), 1));
    }
    CountTable::from_counts(2, BoundaryPolicy::Raw, entries).unwrap()
}

fn cosine_math() -> Outcome {
    let err = |e: corplex::Error| e.to_string();
    let a =
        CountTable::from_counts(1, BoundaryPolicy::Raw, [("x", 3u64), ("y", 5)]).map_err(err)?;
    let d = CountTable::from_counts(1, BoundaryPolicy::Raw, [("z", 2u64)]).map_err(err)?;
    let same = cosine_angle(&a, &a).map_err(err)?;
    ensure(same.similarity == 1.0 && same.angle_degrees == 0.0, || {
        format!("identical: {same:?}")
    })?;
    let disjoint = cosine_angle(&a, &d).map_err(err)?;
    ensure(
        disjoint.similarity == 0.0 && disjoint.angle_degrees == 90.0,
        || format!("disjoint: {disjoint:?}"),
    )?;
    let angle = angle_from_similarity(0.991);
    ensure((angle - 7.70).abs() <= ANGLE_TOLERANCE, || {
        format!("0.991 -> {angle}")
    })?;
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..100 {
        let (x, y) = (table(&mut rng), table(&mut rng));
        let k = rng.random_range(2..1000u64);
        let scaled = CountTable::from_counts(
            2,
            BoundaryPolicy::Raw,
            x.iter().map(|(key, c)| (key.to_owned(), c * k)),
        )
        .map_err(err)?;
        let (base, moved) = (
            cosine_angle(&x, &y).map_err(err)?,
            cosine_angle(&scaled, &y).map_err(err)?,
        );
        ensure(base == moved, || {
            format!("pair {i}: scaling by {k} changed {base:?} to {moved:?}")
        })?;
    }
    Ok(format!(
        "identical (1, 0°), disjoint (0, 90°), 0.991 -> {angle:.4}°, 100 scaled pairs exact"
    ))
}

fn welch_reference() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut worst_t, mut worst_p) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let group = |rng: &mut StdRng| -> Vec<f64> {
            let n = rng.random_range(2..40);
            let dist =
                Normal::new(rng.random_range(-5.0..5.0), rng.random_range(0.1..10.0)).unwrap();
            (0..n).map(|_| dist.sample(rng)).collect()
        };
        let (a, b) = (group(&mut rng), group(&mut rng));
        let got = welch_t_test(&a, &b).map_err(|e| e.to_string())?;
        let moments = |x: &[f64]| {
            let n = x.len() as f64;
            let m = x.iter().sum::<f64>() / n;
            (
                n,
                m,
                x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0),
            )
        };
        let ((na, ma, va), (nb, mb, vb)) = (moments(&a), moments(&b));
        let (sa, sb) = (va / na, vb / nb);
        let t = (ma - mb) / (sa + sb).sqrt();
        let df = (sa + sb).powi(2) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
        let p = 2.0 * StudentsT::new(0.0, 1.0, df).unwrap().cdf(-t.abs());
        let (dt, dp) = ((got.t - t).abs(), (got.p - p).abs());
        ensure(dt <= WELCH_T_TOLERANCE && dp <= WELCH_P_TOLERANCE, || {
            format!("pair {i}: t {} vs {t}, p {} vs {p}", got.t, got.p)
        })?;
        worst_t = worst_t.max(dt);
        worst_p = worst_p.max(dp);
    }
    Ok(format!(
        "100 pairs, max |Δt| = {worst_t:.1e}, max |Δp| = {worst_p:.1e}"
    ))
}

fn entropy_checks() -> Outcome {
    let err = |e: corplex::Error| e.to_string();
    let h4 = unigram_entropy(&["a", "b", "c", "d"]).map_err(err)?;
    ensure(h4 == 2.0, || format!("uniform-4: {h4}"))?;
    let t =
        CountTable::from_counts(1, BoundaryPolicy::Raw, [("a", 3u64), ("b", 1)]).map_err(err)?;
    let h31 = table_entropy(&t).map_err(err)?;
    ensure((h31 - 0.8113).abs() <= ENTROPY_TOLERANCE, || {
        format!("(3, 1): {h31}")
    })?;
    let sections = synthetic_sections(100_000, 8);
    for n in 1..=5 {
        for policy in [BoundaryPolicy::Raw, BoundaryPolicy::Postprocessed] {
            let single = ngram_counts_sections(&sections, n, policy).map_err(err)?;
            for shards in [2, 4, 7] {
                let sharded = ngram_counts_sharded(&sections, n, policy, shards).map_err(err)?;
                ensure(sharded == single, || {
                    format!("n = {n}, {policy:?}, {shards} shards differ")
                })?;
            }
        }
    }
    Ok(format!(
        "uniform-4 = 2 bits, (3, 1) = {h31:.4} bits, sharded = single pass on 10^5 tokens"
    ))
}

/// Documents of Zipf-distributed sentences with about `tokens` tokens.
fn synthetic_sections(tokens: usize, seed: u64) -> Vec<Vec<Vec<String>>> {
    let words = zipf_tokens(tokens, 1.1, seed);
    let mut rng = StdRng::seed_from_u64(seed + 1);
    let mut docs = Vec::new();
    let mut rest = &words[..];
    while !rest.is_empty() {
        let mut doc = Vec::new();
        for _ in 0..rng.random_range(5..40) {
            let len = rng.random_range(1..25).min(rest.len());
            if len == 0 {
                break;
            }
            doc.push(rest[..len].to_vec());
            rest = &rest[len..];
        }
        docs.push(doc);
    }
    docs
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Run the binary in `dir`; fail on a non-zero exit or on any diagnostic.
fn run(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_corplex"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&o.stderr);
    ensure(o.status.success(), || {
        format!("corplex {args:?} failed: {stderr}")
    })?;
    ensure(stderr.is_empty(), || {
        format!("corplex {args:?} warned: {stderr}")
    })?;
    Ok(o.stdout)
}

fn determinism() -> Outcome {
    let golden = fixtures().join("golden");
    let args = ["compare", "simple.jsonl", "main.jsonl", "--seed", "42"];
    let first = run(&golden, &args)?;
    let second = run(&golden, &args)?;
    ensure(first == second, || "two runs differ".into())?;
    Ok(format!("two compare runs, {} identical bytes", first.len()))
}

fn throughput() -> Outcome {
    let err = |e: corplex::Error| e.to_string();
    let text: Vec<String> = synthetic_sections(SIZE, 9)
        .into_iter()
        .map(|doc| {
            doc.iter()
                .map(|s| {
                    let mut line = s
                        .iter()
                        .map(|w| format!("w{w}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    line.push('.');
                    line
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let (docs, tokens) = single.install(|| -> Result<_, String> {
        let docs: Vec<Vec<Sentence>> = text.iter().map(|d| split_text(d)).collect();
        let surfaces: Vec<&str> = docs
            .iter()
            .flatten()
            .flat_map(|s| s.tokens.iter().map(Token::as_str))
            .collect();
        let tt = type_token_counts(&surfaces);
        herdan_c(tt.types, tt.tokens).map_err(err)?;
        unigram_entropy(&surfaces).map_err(err)?;
        let sections: Vec<Vec<Vec<&str>>> = docs
            .iter()
            .map(|d| d.iter().map(Sentence::surfaces).collect())
            .collect();
        for n in 1..=3 {
            table_entropy(
                &ngram_counts_sections(&sections, n, BoundaryPolicy::Postprocessed).map_err(err)?,
            )
            .map_err(err)?;
        }
        corpus_fog(&docs).map_err(err)?;
        Ok((docs, tt.tokens))
    })?;
    let pipeline = within(start, THROUGHPUT_TIME)?;

    let sections: Vec<Vec<Vec<&str>>> = docs
        .iter()
        .map(|d| d.iter().map(Sentence::surfaces).collect())
        .collect();
    let n = 3;
    let t0 = Instant::now();
    let one = single
        .install(|| ngram_counts_sharded(&sections, n, BoundaryPolicy::Postprocessed, 1))
        .map_err(err)?;
    let serial = t0.elapsed();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let t1 = Instant::now();
    let sharded = four
        .install(|| ngram_counts_sharded(&sections, n, BoundaryPolicy::Postprocessed, 4))
        .map_err(err)?;
    let parallel = t1.elapsed();
    ensure(one == sharded, || {
        "4-shard table differs from single pass".into()
    })?;
    let speedup = serial.as_secs_f64() / parallel.as_secs_f64();
    let cpus = std::thread::available_parallelism().map_or(1, |n| n.get());
    ensure(speedup >= MIN_SPEEDUP, || {
        format!(
            "pipeline on {tokens} tokens {pipeline:.2?}; 4 shards identical but speedup {speedup:.2}x < {MIN_SPEEDUP}x \
             ({cpus} CPU available)"
        )
    })?;
    Ok(format!(
        "pipeline on {tokens} tokens {pipeline:.2?}; 4 shards identical, speedup {speedup:.2}x on {cpus} CPUs"
    ))
}

fn end_to_end() -> Outcome {
    let fixtures = fixtures();
    let golden = fixtures.join("golden");
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let g = work.path().join("golden");
    std::fs::create_dir(&g).map_err(|e| e.to_string())?;
    for f in ["simple.xml", "main.xml", "history.xml"] {
        std::fs::copy(fixtures.join(f), work.path().join(f)).map_err(|e| e.to_string())?;
    }
    // Same steps as fixtures/regen.sh.
    run(&g, &["extract", "../simple.xml", "-o", "simple.jsonl"])?;
    run(&g, &["extract", "../main.xml", "-o", "main.jsonl"])?;
    run(
        &g,
        &[
            "sample",
            "main.jsonl",
            "--like",
            "simple.jsonl",
            "-o",
            "sample_wb.txt",
        ],
    )?;
    run(
        &g,
        &[
            "sample",
            "main.jsonl",
            "--like",
            "simple.jsonl",
            "--condition",
            "CB",
            "-o",
            "sample_cb.txt",
        ],
    )?;
    run(
        &g,
        &["compare", "simple.jsonl", "main.jsonl", "-o", "report.json"],
    )?;
    std::fs::write(
        g.join("conflict.json"),
        run(&g, &["conflict", "../history.xml"])?,
    )
    .map_err(|e| e.to_string())?;
    std::fs::write(
        g.join("conflict.tsv"),
        run(&g, &["conflict", "../history.xml", "--format", "tsv"])?,
    )
    .map_err(|e| e.to_string())?;
    let files = [
        "simple.jsonl",
        "main.jsonl",
        "sample_wb.txt",
        "sample_wb.txt.manifest.json",
        "sample_cb.txt",
        "sample_cb.txt.manifest.json",
        "report.json",
        "conflict.json",
        "conflict.tsv",
    ];
    for f in files {
        let got = std::fs::read(g.join(f)).map_err(|e| e.to_string())?;
        let want = std::fs::read(golden.join(f)).map_err(|e| format!("{f}: {e}"))?;
        ensure(got == want, || format!("{f} differs from the golden file"))?;
    }
    // Redirects and non-article pages are the documented skips; they are
    // reported at info level only.
    let o = Command::new(env!("CARGO_BIN_EXE_corplex"))
        .args(["extract", "../main.xml", "-o", "check.jsonl", "--verbose"])
        .current_dir(&g)
        .output()
        .map_err(|e| e.to_string())?;
    let log = String::from_utf8_lossy(&o.stderr);
    ensure(log.lines().all(|l| l.starts_with("[INFO ")), || {
        format!("unexpected diagnostics: {log}")
    })?;
    ensure(
        log.contains("1 redirects and 1 non-article pages skipped"),
        || format!("skips not reported: {log}"),
    )?;
    Ok(format!(
        "{} golden files byte-exact, no warnings",
        files.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("fog formula", fog_exactness),
        ("Herdan's C", herdan_stability),
        ("Heaps fit", heaps_recovery),
        ("boundary postprocessing oracle", boundary_oracle),
        ("controversy oracle", controversy_oracle),
        ("cosine and angle", cosine_math),
        ("Welch's t-test", welch_reference),
        ("entropy and sharding", entropy_checks),
        ("determinism", determinism),
        ("throughput", throughput),
        ("end-to-end fixture", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
