//! Reading corpora from dumps, JSON lines and plain text.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use corplex::ingest::{
    parse_article_dump, parse_revision_dump, Document, DumpFormat, DumpStats, ExtractOptions,
    PageHistory,
};
use corplex::posstats::{parse_tagged, TaggedText};
use corplex::sampling::Pool;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Xml,
    Jsonl,
    Text,
}

pub fn detect(path: &Path) -> InputKind {
    match path.extension().and_then(|e| e.to_str()) {
        Some("xml") => InputKind::Xml,
        Some("jsonl" | "json" | "ndjson") => InputKind::Jsonl,
        _ => InputKind::Text,
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

pub fn report_stats(what: &str, path: &Path, stats: &DumpStats) {
    log::info!(
        "{what} {}: {} pages, {} kept, {} redirects and {} non-article pages skipped",
        path.display(),
        stats.pages_seen,
        stats.documents,
        stats.skipped_redirect,
        stats.skipped_namespace
    );
    let warn = |n: u64, msg: &str| {
        if n > 0 {
            log::warn!("{}: {n} {msg}", path.display());
        }
    };
    warn(stats.skipped_empty, "pages empty after cleanup");
    warn(
        stats.unknown_entities,
        "unknown character entities left as-is",
    );
    warn(stats.missing_contributor, "revisions without a contributor");
    warn(stats.reordered_pages, "pages with out-of-order revisions");
}

/// Documents from an XML export or a JSON lines file.
pub fn read_documents(path: &Path, opts: ExtractOptions) -> Result<(Vec<Document>, DumpStats)> {
    let format = match detect(path) {
        InputKind::Xml => DumpFormat::XmlExport,
        InputKind::Jsonl => DumpFormat::Jsonl,
        InputKind::Text => anyhow::bail!(
            "{}: expected an .xml dump or a .jsonl document file",
            path.display()
        ),
    };
    let mut reader = parse_article_dump(open(path)?, format, opts);
    let docs = reader
        .by_ref()
        .collect::<corplex::Result<Vec<_>>>()
        .with_context(|| format!("reading {}", path.display()))?;
    let stats = reader.stats();
    report_stats("read", path, &stats);
    Ok((docs, stats))
}

/// A sampling pool from any supported input. Plain text is split into
/// documents at blank lines.
pub fn read_pool(path: &Path) -> Result<Pool> {
    match detect(path) {
        InputKind::Text => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Ok(Pool::from_text(&text))
        }
        _ => {
            let (docs, _) = read_documents(path, ExtractOptions::default())?;
            Ok(Pool::from_documents(&docs))
        }
    }
}

pub fn read_histories(path: &Path) -> Result<(Vec<PageHistory>, DumpStats)> {
    let mut reader = parse_revision_dump(open(path)?);
    let pages = reader
        .by_ref()
        .collect::<corplex::Result<Vec<_>>>()
        .with_context(|| format!("reading {}", path.display()))?;
    let stats = reader.stats();
    report_stats("read history", path, &stats);
    Ok((pages, stats))
}

pub fn read_tagged(path: &Path) -> Result<TaggedText> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_tagged(&text).with_context(|| format!("reading {}", path.display()))
}

pub fn read_patterns(path: &Path) -> Result<Vec<String>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}
