//! Reduction of MediaWiki markup to plain text.
//!
//! Templates and tables are removed by brace matching (never expanded), links
//! collapse to their anchor text, and HTML entities are decoded. The full
//! pass is applied until the text stops changing, so the result is a fixed
//! point: stripping already-stripped text returns it unchanged.

use std::sync::LazyLock;

use regex::Regex;

use super::entities;
use crate::error::{Error, Result};

/// Default limit on `{{` nesting before the input is rejected.
pub const DEFAULT_MAX_TEMPLATE_DEPTH: usize = 16;

const MAX_PASSES: usize = 64;

#[derive(Debug, Clone)]
pub struct MarkupOptions {
    pub max_template_depth: usize,
}

impl Default for MarkupOptions {
    fn default() -> Self {
        Self {
            max_template_depth: DEFAULT_MAX_TEMPLATE_DEPTH,
        }
    }
}

/// Warning counters collected while stripping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MarkupStats {
    /// `&name;` references with a name outside the HTML 4 set, left literally.
    pub unknown_entities: u64,
}

static COMMENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?s)<!--.*?(?:-->|\z)").unwrap());
static REF: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?is)<ref\b[^>]*/\s*>|<ref\b[^>]*>.*?</ref\s*>").unwrap());
static DROPPED_ELEMENTS: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?is)<(math|gallery|timeline|score|syntaxhighlight|source|imagemap)\b[^>]*>.*?</(?:math|gallery|timeline|score|syntaxhighlight|source|imagemap)\s*>",
    )
    .unwrap()
});
static BREAK_TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)<br\s*/?\s*>").unwrap());
static HTML_TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"</?[A-Za-z][^<>]*>").unwrap());
static EXTERNAL_LINK: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\[(?:https?://|ftp://|//)[^\s\]]*(?:[ \t]+([^\]\n]*))?\]").unwrap()
});
static EMPHASIS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"''+").unwrap());
static MAGIC_WORD: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"__[A-Z]+__").unwrap());
static HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^=+[ \t]*(.*?)[ \t]*=+[ \t]*$").unwrap());
static LIST_MARKER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[*#:;]+[ \t]*").unwrap());
static RULE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^-{4,}").unwrap());
static INTERLANGUAGE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[a-z]{2,3}(?:-[a-z]+)*:").unwrap());

const DROPPED_NAMESPACES: &[&str] = &["category", "file", "image", "media"];

/// Strip markup with default options, discarding warning counters.
pub fn strip_markup(raw: &str) -> Result<String> {
    strip_markup_with(raw, &MarkupOptions::default(), &mut MarkupStats::default())
}

pub fn strip_markup_with(
    raw: &str,
    opts: &MarkupOptions,
    stats: &mut MarkupStats,
) -> Result<String> {
    let mut current = single_pass(raw, opts, &mut MarkupStats::default())?;
    for _ in 0..MAX_PASSES {
        let mut pass_stats = MarkupStats::default();
        let next = single_pass(&current, opts, &mut pass_stats)?;
        if next == current {
            stats.unknown_entities += pass_stats.unknown_entities;
            return Ok(current);
        }
        current = next;
    }
    Ok(current)
}

fn single_pass(raw: &str, opts: &MarkupOptions, stats: &mut MarkupStats) -> Result<String> {
    let text = raw.replace("\r\n", "\n").replace('\r', "\n");
    let text = COMMENT.replace_all(&text, "");
    let text = REF.replace_all(&text, "");
    let text = DROPPED_ELEMENTS.replace_all(&text, "");
    let text = remove_balanced(&text, "{{", "}}", Some(opts.max_template_depth))?;
    let text = remove_balanced(&text, "{|", "|}", None)?;
    let text = render_links(&text);
    let text = EXTERNAL_LINK.replace_all(&text, "$1");
    let text = BREAK_TAG.replace_all(&text, " ");
    let text = HTML_TAG.replace_all(&text, "");
    let text = decode_entities(&text, stats);
    let text = EMPHASIS.replace_all(&text, "");
    let text = MAGIC_WORD.replace_all(&text, "");
    Ok(normalize_lines(&text))
}

/// Remove every `open ... close` span, nested spans included. Unmatched
/// markers are removed on their own.
fn remove_balanced(
    text: &str,
    open: &str,
    close: &str,
    max_depth: Option<usize>,
) -> Result<String> {
    if !text.contains(open) && !text.contains(close) {
        return Ok(text.to_owned());
    }
    let bytes = text.as_bytes();
    let (ob, cb) = (open.as_bytes(), close.as_bytes());
    let mut stack: Vec<usize> = Vec::new();
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i + 1 < bytes.len() {
        if bytes[i..].starts_with(ob) {
            stack.push(i);
            if let Some(limit) = max_depth {
                if stack.len() > limit {
                    return Err(Error::Markup {
                        offset: i,
                        message: format!("template nesting deeper than {limit}"),
                    });
                }
            }
            i += ob.len();
        } else if bytes[i..].starts_with(cb) {
            match stack.pop() {
                Some(start) => spans.push((start, i + cb.len())),
                None => spans.push((i, i + cb.len())),
            }
            i += cb.len();
        } else {
            i += 1;
        }
    }
    spans.extend(stack.into_iter().map(|s| (s, s + ob.len())));
    spans.sort_unstable();

    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (start, end) in spans {
        if end <= cursor {
            continue;
        }
        if start > cursor {
            out.push_str(&text[cursor..start]);
        }
        cursor = cursor.max(end);
    }
    out.push_str(&text[cursor..]);
    Ok(out)
}

/// Replace `[[...]]` links by their visible text. Category, file and
/// interlanguage links disappear entirely.
fn render_links(text: &str) -> String {
    if !text.contains("[[") && !text.contains("]]") {
        return text.to_owned();
    }
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    loop {
        let open = rest.find("[[");
        let stray = rest.find("]]");
        match (open, stray) {
            (None, None) => {
                out.push_str(rest);
                return out;
            }
            (_, Some(c)) if open.is_none_or(|o| c < o) => {
                out.push_str(&rest[..c]);
                rest = &rest[c + 2..];
            }
            (Some(o), _) => {
                out.push_str(&rest[..o]);
                let after = &rest[o + 2..];
                match matching_close(after) {
                    Some(len) => {
                        out.push_str(&link_text(&after[..len]));
                        rest = &after[len + 2..];
                    }
                    None => rest = after,
                }
            }
            (None, Some(_)) => unreachable!(),
        }
    }
}

/// Length of the link body up to its matching `]]`, honouring nesting.
fn matching_close(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i + 1 < bytes.len() {
        if bytes[i] == b'[' && bytes[i + 1] == b'[' {
            depth += 1;
            i += 2;
        } else if bytes[i] == b']' && bytes[i + 1] == b']' {
            if depth == 0 {
                return Some(i);
            }
            depth -= 1;
            i += 2;
        } else {
            i += 1;
        }
    }
    None
}

fn link_text(body: &str) -> String {
    let (target, anchor) = match split_top_level_pipe(body) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let target = target.trim();
    let lowered = target.to_ascii_lowercase();
    if let Some((prefix, _)) = lowered.split_once(':') {
        if DROPPED_NAMESPACES.contains(&prefix.trim()) || INTERLANGUAGE.is_match(&lowered) {
            return String::new();
        }
    }
    match anchor {
        Some(a) if !a.trim().is_empty() => render_links(a),
        _ => target.trim_start_matches(':').to_owned(),
    }
}

fn split_top_level_pipe(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' if bytes.get(i + 1) == Some(&b'[') => {
                depth += 1;
                i += 1;
            }
            b']' if bytes.get(i + 1) == Some(&b']') => {
                depth = depth.saturating_sub(1);
                i += 1;
            }
            b'|' if depth == 0 => return Some(i),
            _ => {}
        }
        i += 1;
    }
    None
}

/// Decode HTML 4 named references and numeric references.
pub fn decode_entities(text: &str, stats: &mut MarkupStats) -> String {
    if !text.contains('&') {
        return text.to_owned();
    }
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        match parse_reference(tail) {
            Some((len, Some(ch))) => {
                out.push(ch);
                rest = &tail[len..];
            }
            Some((len, None)) => {
                stats.unknown_entities += 1;
                out.push_str(&tail[..len]);
                rest = &tail[len..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

/// Parses `&...;` at the start of `s`. Returns the reference length and the
/// decoded character, or `None` as the character for unknown names.
fn parse_reference(s: &str) -> Option<(usize, Option<char>)> {
    let semi = s[1..].find(';').map(|i| i + 1)?;
    let name = &s[1..semi];
    if name.is_empty() || name.len() > 12 {
        return None;
    }
    if let Some(num) = name.strip_prefix('#') {
        let code = if let Some(hex) = num.strip_prefix(['x', 'X']) {
            if hex.is_empty() || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
                return None;
            }
            u32::from_str_radix(hex, 16).ok()?
        } else {
            if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            num.parse().ok()?
        };
        return match char::from_u32(code) {
            Some(c) if !c.is_control() || c == '\n' || c == '\t' => Some((semi + 1, Some(c))),
            _ => None,
        };
    }
    if !name.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return None;
    }
    Some((semi + 1, entities::lookup(name)))
}

fn normalize_lines(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_break = 0usize;
    for raw_line in text.split('\n') {
        let line = collapse_blanks(raw_line);
        let line = match HEADING.captures(&line) {
            Some(c) => c[1].to_owned(),
            None => line,
        };
        let line = LIST_MARKER.replace(&line, "");
        let line = RULE.replace(&line, "");
        let line = line.trim();
        if line.is_empty() {
            pending_break += 1;
            continue;
        }
        if !out.is_empty() {
            out.push_str(if pending_break > 0 { "\n\n" } else { "\n" });
        }
        pending_break = 0;
        out.push_str(line);
    }
    out
}

fn collapse_blanks(line: &str) -> String {
    let mut out = String::with_capacity(line.len());
    let mut in_blank = false;
    for c in line.chars() {
        if c.is_whitespace() {
            if !in_blank {
                out.push(' ');
            }
            in_blank = true;
        } else {
            out.push(c);
            in_blank = false;
        }
    }
    out.trim().to_owned()
}
