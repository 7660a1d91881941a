use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{Sentence, TokenKind};

/// Characters that split a sentence into subsentences.
pub const SUBSENTENCE_SEPARATORS: [char; 6] = [',', ':', ';', '(', ')', '"'];

/// Corpus-level averages of sentence structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub sentences: u64,
    pub tokens: u64,
    pub words: u64,
    /// Mean characters per word-kind token.
    pub chars_per_word: f64,
    /// Mean tokens per sentence.
    pub words_per_sentence: f64,
    /// Mean subsentence separators per sentence.
    pub separators_per_sentence: f64,
    /// Non-punctuation tokens per subsentence, where a sentence with k
    /// separators has k + 1 subsentences.
    pub content_words_per_subsentence: f64,
}

pub fn corpus_stats(sentences: &[Sentence]) -> Result<CorpusStats> {
    let sentences: Vec<&Sentence> = sentences.iter().filter(|s| !s.is_empty()).collect();
    if sentences.is_empty() {
        return Err(Error::domain("corpus statistics of an empty corpus"));
    }
    let (mut tokens, mut words, mut word_chars, mut separators, mut content) =
        (0u64, 0u64, 0u64, 0u64, 0u64);
    for s in &sentences {
        for t in &s.tokens {
            tokens += 1;
            match t.kind {
                TokenKind::Word => {
                    words += 1;
                    word_chars += t.surface.chars().count() as u64;
                    content += 1;
                }
                TokenKind::Number => content += 1,
                TokenKind::Punctuation => {
                    separators += t
                        .surface
                        .chars()
                        .filter(|c| SUBSENTENCE_SEPARATORS.contains(c))
                        .count() as u64;
                }
            }
        }
    }
    let n = sentences.len() as u64;
    let subsentences = n + separators;
    Ok(CorpusStats {
        sentences: n,
        tokens,
        words,
        chars_per_word: if words == 0 {
            0.0
        } else {
            word_chars as f64 / words as f64
        },
        words_per_sentence: tokens as f64 / n as f64,
        separators_per_sentence: separators as f64 / n as f64,
        content_words_per_subsentence: content as f64 / subsentences as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::split_text;

    #[test]
    fn simple_sentence() {
        let s = split_text("It has 30 days.");
        let c = corpus_stats(&s).unwrap();
        assert_eq!(c.words_per_sentence, 5.0);
        assert_eq!(c.words, 3);
        assert_eq!(c.chars_per_word, 3.0);
        assert_eq!(c.separators_per_sentence, 0.0);
        assert_eq!(c.content_words_per_subsentence, 4.0);
    }

    #[test]
    fn separators_split_subsentences() {
        let s = split_text("a, b (c) d.");
        let c = corpus_stats(&s).unwrap();
        assert_eq!(c.separators_per_sentence, 3.0);
        assert_eq!(c.content_words_per_subsentence, 1.0);
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(corpus_stats(&[]).is_err());
    }
}
