use serde::Serialize;

use super::token::{tokenize, Token};

/// Tokens that never end a sentence when followed by a period. Compared
/// case-insensitively, without the trailing period.
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "e.g", "i.e", "cf", "al",
    "approx", "no", "nos", "vol", "vols", "fig", "figs", "ed", "eds", "inc", "ltd", "co", "corp",
    "dept", "univ", "est", "gen", "col", "lt", "sgt", "capt", "cmdr", "adm", "gov", "sen", "rep",
    "rev", "hon", "mt", "ft", "ave", "blvd", "rd", "jan", "feb", "mar", "apr", "jun", "jul", "aug",
    "sep", "sept", "oct", "nov", "dec", "ca", "pp", "ch", "sec", "u.s", "u.k", "a.m", "p.m",
    "ph.d", "b.c", "a.d",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(Token::as_str).collect()
    }

    /// Space-joined surfaces, the one-sentence-per-line output form.
    pub fn to_line(&self) -> String {
        self.surfaces().join(" ")
    }
}

fn is_terminal(t: &Token) -> bool {
    matches!(t.surface.as_str(), "." | "!" | "?")
}

fn is_abbreviation(t: &Token) -> bool {
    let lower = t.surface.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

fn is_initial(t: &Token) -> bool {
    let mut chars = t.surface.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if c.is_uppercase())
}

/// Group a token stream into sentences.
///
/// A sentence ends after `.`, `!` or `?` unless the token before a period is
/// a known abbreviation or a single capital initial. Directly following
/// terminals, closing parentheses and a closing double quote stay with the
/// sentence they close. Leftover tokens form a final sentence.
pub fn split_sentences(tokens: Vec<Token>) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut quotes = 0usize;
    let mut closing = false;
    for tok in tokens {
        if closing {
            let absorbs =
                is_terminal(&tok) || tok.surface == ")" || (tok.surface == "\"" && quotes % 2 == 1);
            if !absorbs {
                sentences.push(Sentence {
                    tokens: std::mem::take(&mut current),
                });
                quotes = 0;
                closing = false;
            }
        }
        if tok.surface == "\"" {
            quotes += 1;
        }
        let ends = is_terminal(&tok)
            && !(tok.surface == "."
                && current
                    .last()
                    .is_some_and(|prev| is_abbreviation(prev) || is_initial(prev)));
        current.push(tok);
        if ends {
            closing = true;
        }
    }
    if !current.is_empty() {
        sentences.push(Sentence { tokens: current });
    }
    sentences
}

/// Tokenize and split plain text. Line breaks are hard sentence boundaries.
pub fn split_text(text: &str) -> Vec<Sentence> {
    text.lines()
        .flat_map(|line| split_sentences(tokenize(line)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abbreviation_does_not_split() {
        let s = split_text("Dr. Smith arrived. He left.");
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].to_line(), "Dr . Smith arrived .");
    }

    #[test]
    fn single_sentence() {
        let s = split_text("It has 30 days.");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].len(), 5);
    }

    #[test]
    fn empty_input() {
        assert!(split_text("").is_empty());
        assert!(split_sentences(Vec::new()).is_empty());
    }

    #[test]
    fn initials_quotes_and_fragments() {
        let s = split_text("J. R. Tolkien wrote it. \"Go!\" he said. A fragment");
        let lines: Vec<_> = s.iter().map(Sentence::to_line).collect();
        assert_eq!(
            lines,
            vec![
                "J . R . Tolkien wrote it .",
                "\" Go ! \"",
                "he said .",
                "A fragment"
            ]
        );
    }

    #[test]
    fn lines_are_boundaries() {
        assert_eq!(split_text("Heading\nBody text.").len(), 2);
    }

    #[test]
    fn stacked_terminals_stay_together() {
        let s = split_text("Really?! Yes.");
        assert_eq!(s[0].to_line(), "Really ? !");
    }
}
