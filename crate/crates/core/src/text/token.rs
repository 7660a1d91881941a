use serde::{Deserialize, Serialize};

/// Characters removed by the no-punctuation conditions, and split off word
/// edges by the tokenizer.
pub const PUNCTUATION_SET: [char; 9] = [',', '.', '?', '(', ')', ';', '"', '!', ':'];

/// Pseudo-symbol placed between sentences when counting n-grams.
pub const BOUNDARY: &str = "§";

const CLITICS: &[&str] = &["n't", "'s", "'re", "'ve", "'ll", "'d", "'m", "'"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Punctuation,
    Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
}

impl Token {
    /// Build a token, classifying its surface.
    ///
    /// # Panics
    /// If `surface` is empty or contains whitespace.
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        assert!(
            !surface.is_empty() && !surface.chars().any(char::is_whitespace),
            "token surface must be non-empty without whitespace: {surface:?}"
        );
        let kind = classify(&surface);
        Token { surface, kind }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn as_str(&self) -> &str {
        &self.surface
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.surface
    }
}

fn classify(s: &str) -> TokenKind {
    if s.chars().all(in_punctuation_set) {
        return TokenKind::Punctuation;
    }
    let bytes = s.as_bytes();
    let numeric = bytes[0].is_ascii_digit()
        && bytes[bytes.len() - 1].is_ascii_digit()
        && bytes
            .iter()
            .all(|b| b.is_ascii_digit() || *b == b'.' || *b == b',');
    if numeric {
        TokenKind::Number
    } else {
        TokenKind::Word
    }
}

pub(crate) fn in_punctuation_set(c: char) -> bool {
    PUNCTUATION_SET.contains(&c)
}

/// Split cleaned text into tokens.
///
/// Text is split on whitespace; characters of [`PUNCTUATION_SET`] are peeled
/// off both ends of each chunk one at a time, and contractions such as `'s`
/// or `n't` become separate tokens. Interior punctuation (hyphens, decimal
/// points, thousands separators) stays put.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        split_chunk(chunk, &mut out);
    }
    out
}

fn split_chunk(chunk: &str, out: &mut Vec<Token>) {
    let mut rest = chunk;
    while let Some(c) = rest.chars().next().filter(|c| in_punctuation_set(*c)) {
        out.push(Token::new(c.to_string()));
        rest = &rest[c.len_utf8()..];
    }
    if rest.is_empty() {
        return;
    }
    let mut suffix: Vec<&str> = Vec::new();
    loop {
        if let Some(c) = rest.chars().next_back().filter(|c| in_punctuation_set(*c)) {
            let cut = rest.len() - c.len_utf8();
            suffix.push(&rest[cut..]);
            rest = &rest[..cut];
            continue;
        }
        match clitic_split(rest) {
            Some(cut) => {
                suffix.push(&rest[cut..]);
                rest = &rest[..cut];
            }
            None => break,
        }
    }
    if !rest.is_empty() {
        out.push(Token::new(rest));
    }
    out.extend(suffix.into_iter().rev().map(Token::new));
}

/// Byte offset where a trailing clitic starts, if the chunk has one and
/// something precedes it.
fn clitic_split(s: &str) -> Option<usize> {
    let normalized;
    let probe = if s.contains('\u{2019}') {
        normalized = s.replace('\u{2019}', "'");
        normalized.as_str()
    } else {
        s
    };
    let lower = probe.to_lowercase();
    for clitic in CLITICS {
        if lower.ends_with(clitic) && lower.len() > clitic.len() {
            // Map the cut back onto the original string by character count.
            let n_chars = clitic.chars().count();
            let cut = s.char_indices().rev().nth(n_chars - 1).map(|(i, _)| i)?;
            if cut == 0 {
                return None;
            }
            if *clitic == "'" && !s[..cut].ends_with(['s', 'S']) {
                return None;
            }
            return Some(cut);
        }
    }
    None
}
