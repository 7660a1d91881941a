//! Streaming readers for MediaWiki XML exports and JSON-lines article files.

use std::io::BufRead;

use chrono::{DateTime, Utc};
use quick_xml::events::Event;
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use super::markup::{strip_markup_with, MarkupOptions, MarkupStats};
use crate::error::{Error, Result};

/// Editor name used when a revision carries no contributor.
pub const UNKNOWN_EDITOR: &str = "UNKNOWN";

/// A cleaned article. Serializes as `{"id", "title", "text"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub title: String,
    #[serde(rename = "text")]
    pub body: String,
}

/// One revision of a page, with its text kept byte-exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionRecord {
    pub page_id: String,
    pub rev_index: usize,
    pub timestamp: DateTime<Utc>,
    pub editor: String,
    pub raw_text: String,
}

/// All revisions of one page in timestamp order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageHistory {
    pub page_id: String,
    pub title: String,
    pub revisions: Vec<RevisionRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpFormat {
    XmlExport,
    Jsonl,
}

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    /// Skip pages whose wikitext starts with `#REDIRECT`.
    pub skip_redirects: bool,
    /// Keep only pages in namespace 0 when the dump states a namespace.
    pub main_namespace_only: bool,
    pub markup: MarkupOptions,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            skip_redirects: true,
            main_namespace_only: true,
            markup: MarkupOptions::default(),
        }
    }
}

/// Warning counters for a dump read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DumpStats {
    pub pages_seen: u64,
    pub documents: u64,
    pub skipped_empty: u64,
    pub skipped_redirect: u64,
    pub skipped_namespace: u64,
    pub unknown_entities: u64,
    pub missing_contributor: u64,
    pub reordered_pages: u64,
}

impl DumpStats {
    /// Counters that represent warnings rather than routine filtering.
    pub fn warnings(&self) -> u64 {
        self.skipped_empty + self.unknown_entities + self.missing_contributor + self.reordered_pages
    }
}

#[derive(Debug, Default)]
struct RawRevision {
    timestamp: Option<String>,
    username: Option<String>,
    ip: Option<String>,
    text: String,
}

#[derive(Debug, Default)]
struct RawPage {
    id: Option<String>,
    title: String,
    ns: Option<String>,
    revisions: Vec<RawRevision>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Title,
    PageId,
    Ns,
    Timestamp,
    Username,
    Ip,
    Text,
}

/// Pull parser producing one raw `<page>` at a time.
struct PageReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    latest_only: bool,
    done: bool,
}

impl<R: BufRead> PageReader<R> {
    fn new(input: R, latest_only: bool) -> Self {
        let mut reader = Reader::from_reader(input);
        reader.config_mut().trim_text(false);
        Self {
            reader,
            buf: Vec::new(),
            latest_only,
            done: false,
        }
    }

    fn error(&self, page: Option<&RawPage>, message: impl std::fmt::Display) -> Error {
        page_error(self.reader.buffer_position(), page, message)
    }

    fn next_page(&mut self) -> Result<Option<RawPage>> {
        if self.done {
            return Ok(None);
        }
        let mut path: Vec<Vec<u8>> = Vec::new();
        let mut page: Option<RawPage> = None;
        let mut field: Option<Field> = None;
        let mut value = String::new();
        loop {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(e) => e,
                Err(e) => {
                    self.done = true;
                    return Err(self.error(page.as_ref(), e));
                }
            };
            match event {
                Event::Start(e) => {
                    let name = e.local_name().as_ref().to_vec();
                    path.push(name);
                    if path.last().map(Vec::as_slice) == Some(b"page") {
                        page = Some(RawPage::default());
                    } else if let Some(p) = page.as_mut() {
                        if path_ends(&path, &[b"page", b"revision"]) {
                            p.revisions.push(RawRevision::default());
                        }
                        field = classify(&path);
                        value.clear();
                    }
                }
                Event::Empty(e) => {
                    if let Some(p) = page.as_mut() {
                        if e.local_name().as_ref() == b"revision" && path_ends(&path, &[b"page"]) {
                            p.revisions.push(RawRevision::default());
                        }
                    }
                }
                Event::Text(t) => {
                    if field.is_some() {
                        let text = t.unescape().map_err(|e| {
                            page_error(self.reader.buffer_position(), page.as_ref(), e)
                        })?;
                        value.push_str(&text);
                    }
                }
                Event::CData(t) => {
                    if field.is_some() {
                        value.push_str(&String::from_utf8_lossy(&t.into_inner()));
                    }
                }
                Event::End(_) => {
                    if let (Some(f), Some(p)) = (field.take(), page.as_mut()) {
                        store(p, f, std::mem::take(&mut value), self.latest_only);
                    }
                    let closed = path.pop();
                    if closed.as_deref() == Some(b"page".as_slice()) {
                        if let Some(p) = page.take() {
                            return Ok(Some(p));
                        }
                    }
                }
                Event::Eof => {
                    self.done = true;
                    if page.is_some() {
                        return Err(
                            self.error(page.as_ref(), "unexpected end of input inside <page>")
                        );
                    }
                    return Ok(None);
                }
                _ => {}
            }
        }
    }
}

fn path_ends(path: &[Vec<u8>], suffix: &[&[u8]]) -> bool {
    path.len() >= suffix.len()
        && path[path.len() - suffix.len()..]
            .iter()
            .zip(suffix)
            .all(|(a, b)| a.as_slice() == *b)
}

fn classify(path: &[Vec<u8>]) -> Option<Field> {
    if path_ends(path, &[b"page", b"title"]) {
        Some(Field::Title)
    } else if path_ends(path, &[b"page", b"id"]) {
        Some(Field::PageId)
    } else if path_ends(path, &[b"page", b"ns"]) {
        Some(Field::Ns)
    } else if path_ends(path, &[b"revision", b"timestamp"]) {
        Some(Field::Timestamp)
    } else if path_ends(path, &[b"revision", b"contributor", b"username"]) {
        Some(Field::Username)
    } else if path_ends(path, &[b"revision", b"contributor", b"ip"]) {
        Some(Field::Ip)
    } else if path_ends(path, &[b"revision", b"text"]) {
        Some(Field::Text)
    } else {
        None
    }
}

fn store(page: &mut RawPage, field: Field, value: String, latest_only: bool) {
    match field {
        Field::Title => page.title = value,
        Field::PageId => page.id = Some(value.trim().to_owned()),
        Field::Ns => page.ns = Some(value.trim().to_owned()),
        _ => {
            let Some(rev) = page.revisions.last_mut() else {
                return;
            };
            match field {
                Field::Timestamp => rev.timestamp = Some(value.trim().to_owned()),
                Field::Username => rev.username = Some(value),
                Field::Ip => rev.ip = Some(value),
                Field::Text => rev.text = value,
                _ => unreachable!(),
            }
            if latest_only && page.revisions.len() > 1 && field == Field::Text {
                // Drop all but the newest revision.
                let keep = pick_latest(&page.revisions);
                let newest = page.revisions.swap_remove(keep);
                page.revisions.clear();
                page.revisions.push(newest);
            }
        }
    }
}

/// Index of the revision with the greatest timestamp; later entries win ties.
fn pick_latest(revs: &[RawRevision]) -> usize {
    let mut best = 0;
    for (i, r) in revs.iter().enumerate().skip(1) {
        if r.timestamp >= revs[best].timestamp {
            best = i;
        }
    }
    best
}

fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(raw)
        .ok()
        .map(|t| t.with_timezone(&Utc))
}

fn is_redirect(text: &str) -> bool {
    let head = text.trim_start();
    head.len() >= 9 && head[..9].eq_ignore_ascii_case("#redirect")
}

/// Iterator over cleaned [`Document`]s from an article dump.
pub struct ArticleReader<R: BufRead> {
    source: ArticleSource<R>,
    opts: ExtractOptions,
    stats: DumpStats,
}

enum ArticleSource<R: BufRead> {
    Xml(PageReader<R>),
    Jsonl {
        input: R,
        line_no: usize,
        done: bool,
    },
}

/// Stream documents out of `input`. Memory is bounded by a single page.
pub fn parse_article_dump<R: BufRead>(
    input: R,
    format: DumpFormat,
    opts: ExtractOptions,
) -> ArticleReader<R> {
    let source = match format {
        DumpFormat::XmlExport => ArticleSource::Xml(PageReader::new(input, true)),
        DumpFormat::Jsonl => ArticleSource::Jsonl {
            input,
            line_no: 0,
            done: false,
        },
    };
    ArticleReader {
        source,
        opts,
        stats: DumpStats::default(),
    }
}

#[derive(Deserialize)]
struct JsonArticle {
    id: serde_json::Value,
    title: String,
    text: String,
}

impl<R: BufRead> ArticleReader<R> {
    pub fn stats(&self) -> DumpStats {
        self.stats
    }

    /// Clean one page; `Ok(None)` means the page was skipped.
    fn finish(
        &mut self,
        id: String,
        title: String,
        ns: Option<&str>,
        text: &str,
    ) -> Result<Option<Document>> {
        self.stats.pages_seen += 1;
        if self.opts.main_namespace_only && ns.is_some_and(|n| n != "0") {
            self.stats.skipped_namespace += 1;
            return Ok(None);
        }
        if self.opts.skip_redirects && is_redirect(text) {
            self.stats.skipped_redirect += 1;
            return Ok(None);
        }
        let mut mstats = MarkupStats::default();
        let body =
            strip_markup_with(text, &self.opts.markup, &mut mstats).map_err(|e| match e {
                Error::Markup { offset, message } => Error::Markup {
                    offset,
                    message: format!("{message} (page {title:?})"),
                },
                other => other,
            })?;
        self.stats.unknown_entities += mstats.unknown_entities;
        if body.is_empty() || title.trim().is_empty() {
            log::warn!("skipping page {title:?}: empty text or title");
            self.stats.skipped_empty += 1;
            return Ok(None);
        }
        self.stats.documents += 1;
        Ok(Some(Document { id, title, body }))
    }

    fn next_xml(&mut self) -> Option<Result<Document>> {
        loop {
            let ArticleSource::Xml(reader) = &mut self.source else {
                unreachable!()
            };
            let page = match reader.next_page() {
                Ok(Some(p)) => p,
                Ok(None) => return None,
                Err(e) => return Some(Err(e)),
            };
            let text = page
                .revisions
                .get(pick_latest(&page.revisions))
                .map(|r| r.text.as_str())
                .unwrap_or("");
            let id = page.id.clone().unwrap_or_default();
            match self.finish(id, page.title.clone(), page.ns.as_deref(), text) {
                Ok(Some(doc)) => return Some(Ok(doc)),
                Ok(None) => continue,
                Err(e) => return Some(Err(e)),
            }
        }
    }

    fn next_jsonl(&mut self) -> Option<Result<Document>> {
        loop {
            let ArticleSource::Jsonl {
                input,
                line_no,
                done,
            } = &mut self.source
            else {
                unreachable!()
            };
            if *done {
                return None;
            }
            let mut line = String::new();
            let offset_line = *line_no + 1;
            match input.read_line(&mut line) {
                Ok(0) => {
                    *done = true;
                    return None;
                }
                Ok(_) => *line_no += 1,
                Err(e) => {
                    *done = true;
                    return Some(Err(e.into()));
                }
            }
            if line.trim().is_empty() {
                continue;
            }
            let rec: JsonArticle = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) => {
                    return Some(Err(Error::parse(
                        format!("line {offset_line}"),
                        e.to_string(),
                    )))
                }
            };
            let id = match rec.id {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            match self.finish(id, rec.title, None, &rec.text) {
                Ok(Some(doc)) => return Some(Ok(doc)),
                Ok(None) => continue,
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

impl<R: BufRead> Iterator for ArticleReader<R> {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.source {
            ArticleSource::Xml(_) => self.next_xml(),
            ArticleSource::Jsonl { .. } => self.next_jsonl(),
        }
    }
}

/// Iterator over per-page revision histories of a full-history export.
pub struct RevisionReader<R: BufRead> {
    pages: PageReader<R>,
    stats: DumpStats,
}

pub fn parse_revision_dump<R: BufRead>(input: R) -> RevisionReader<R> {
    RevisionReader {
        pages: PageReader::new(input, false),
        stats: DumpStats::default(),
    }
}

impl<R: BufRead> RevisionReader<R> {
    pub fn stats(&self) -> DumpStats {
        self.stats
    }

    fn build(&mut self, page: RawPage) -> Result<PageHistory> {
        self.stats.pages_seen += 1;
        let page_id = page.id.clone().unwrap_or_default();
        let mut dated = Vec::with_capacity(page.revisions.len());
        for rev in page.revisions {
            let raw_ts = rev.timestamp.as_deref().unwrap_or("");
            let timestamp = parse_timestamp(raw_ts).ok_or_else(|| {
                Error::parse(
                    format!("page {:?}", page.title),
                    format!("bad revision timestamp {raw_ts:?}"),
                )
            })?;
            let editor = match rev.username.or(rev.ip) {
                Some(e) if !e.trim().is_empty() => e,
                _ => {
                    self.stats.missing_contributor += 1;
                    log::warn!("page {:?}: revision without contributor", page.title);
                    UNKNOWN_EDITOR.to_owned()
                }
            };
            dated.push((timestamp, editor, rev.text));
        }
        if dated.windows(2).any(|w| w[1].0 < w[0].0) {
            self.stats.reordered_pages += 1;
            log::warn!(
                "page {:?}: revisions out of timestamp order, reordering",
                page.title
            );
            dated.sort_by_key(|r| r.0);
        }
        let revisions = dated
            .into_iter()
            .enumerate()
            .map(
                |(rev_index, (timestamp, editor, raw_text))| RevisionRecord {
                    page_id: page_id.clone(),
                    rev_index,
                    timestamp,
                    editor,
                    raw_text,
                },
            )
            .collect();
        Ok(PageHistory {
            page_id,
            title: page.title,
            revisions,
        })
    }
}

impl<R: BufRead> Iterator for RevisionReader<R> {
    type Item = Result<PageHistory>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.pages.next_page() {
            Ok(Some(p)) => Some(self.build(p)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    }
}

fn page_error(position: u64, page: Option<&RawPage>, message: impl std::fmt::Display) -> Error {
    let location = match page {
        Some(p) if !p.title.is_empty() => format!("page {:?}, byte {position}", p.title),
        _ => format!("byte {position}"),
    };
    Error::parse(location, message.to_string())
}
