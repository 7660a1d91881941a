//! Tokenization, sentence splitting, punctuation filtering, stemming and
//! syllable counting. Everything here is pure and deterministic.

mod porter;
mod sentence;
mod syllable;
mod token;

pub use porter::porter_stem;
pub use sentence::{split_sentences, split_text, Sentence};
pub use syllable::{count_syllables, has_no_letters, is_complex};
pub use token::{tokenize, Token, TokenKind, BOUNDARY, PUNCTUATION_SET};

/// Drop punctuation tokens, those made only of [`PUNCTUATION_SET`] characters.
pub fn filter_punctuation(tokens: Vec<Token>) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| t.kind != TokenKind::Punctuation)
        .collect()
}

/// True when every character is representable in ISO-8859-1.
pub fn is_latin1(surface: &str) -> bool {
    surface.chars().all(|c| (c as u32) < 0x100)
}

/// Space-joined token surfaces.
pub fn join_tokens(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(Token::as_str)
        .collect::<Vec<_>>()
        .join(" ")
}
