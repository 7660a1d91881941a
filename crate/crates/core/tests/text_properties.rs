use corplex::ingest::{parse_article_dump, strip_markup, DumpFormat, ExtractOptions};
use corplex::text::{
    count_syllables, filter_punctuation, join_tokens, porter_stem, split_sentences, tokenize,
    Token, TokenKind, PUNCTUATION_SET,
};
use proptest::prelude::*;

fn wikitext() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-zA-Z ]{0,12}",
        Just("[[".to_owned()),
        Just("]]".to_owned()),
        Just("{{".to_owned()),
        Just("}}".to_owned()),
        Just("{|".to_owned()),
        Just("|}".to_owned()),
        Just("|".to_owned()),
        Just("''".to_owned()),
        Just("'''".to_owned()),
        Just("&amp;".to_owned()),
        Just("&lt;".to_owned()),
        Just("&gt;".to_owned()),
        Just("&#65;".to_owned()),
        Just("&bogus;".to_owned()),
        Just("<ref>".to_owned()),
        Just("</ref>".to_owned()),
        Just("<!--".to_owned()),
        Just("-->".to_owned()),
        Just("<br/>".to_owned()),
        Just("==".to_owned()),
        Just("\n".to_owned()),
        Just("\n*".to_owned()),
        Just("Category:".to_owned()),
        Just("[http://x.org y]".to_owned()),
    ];
    prop::collection::vec(piece, 0..30).prop_map(|v| v.concat())
}

fn text() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-zA-Z]{1,8}",
        "[0-9]{1,4}",
        "[0-9]{1,2}[.,][0-9]{1,3}",
        Just("Dr.".to_owned()),
        Just("U.S.".to_owned()),
        Just("don't".to_owned()),
        Just("Kant's".to_owned()),
        Just("students'".to_owned()),
        Just("well-known".to_owned()),
        Just("é".to_owned()),
        prop::sample::select(PUNCTUATION_SET.to_vec()).prop_map(String::from),
        Just("'".to_owned()),
        Just("-".to_owned()),
    ];
    let sep = prop_oneof![Just(" "), Just(""), Just("\n"), Just("  ")];
    prop::collection::vec((piece, sep), 0..40)
        .prop_map(|v| v.into_iter().map(|(p, s)| format!("{p}{s}")).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn strip_markup_is_idempotent_and_never_grows(raw in wikitext()) {
        if let Ok(once) = strip_markup(&raw) {
            prop_assert!(once.len() <= raw.len());
            let twice = strip_markup(&once).unwrap();
            prop_assert_eq!(twice, once);
        }
    }

    #[test]
    fn jsonl_dumps_concatenate(a in prop::collection::vec("[a-z ]{1,20}", 0..5), b in prop::collection::vec("[a-z ]{1,20}", 0..5)) {
        let dump = |bodies: &[String], offset: usize| -> String {
            bodies
                .iter()
                .enumerate()
                .map(|(i, t)| format!("{{\"id\":{},\"title\":\"T{}\",\"text\":{:?}}}\n", i + offset, i + offset, t))
                .collect()
        };
        let (da, db) = (dump(&a, 0), dump(&b, 100));
        let parse = |s: &str| -> Vec<_> {
            parse_article_dump(s.as_bytes(), DumpFormat::Jsonl, ExtractOptions::default())
                .collect::<Result<Vec<_>, _>>()
                .unwrap()
        };
        let mut expected = parse(&da);
        expected.extend(parse(&db));
        prop_assert_eq!(parse(&format!("{da}{db}")), expected);
    }

    #[test]
    fn tokenize_is_idempotent(t in text()) {
        let tokens = tokenize(&t);
        prop_assert_eq!(tokenize(&join_tokens(&tokens)), tokens.clone());
        for tok in &tokens {
            prop_assert!(!tok.surface.is_empty());
            prop_assert!(!tok.surface.chars().any(char::is_whitespace));
            let all_set = tok.surface.chars().all(|c| PUNCTUATION_SET.contains(&c));
            prop_assert_eq!(tok.kind == TokenKind::Punctuation, all_set);
        }
    }

    #[test]
    fn sentences_partition_tokens(t in text()) {
        let tokens = tokenize(&t);
        let sentences = split_sentences(tokens.clone());
        prop_assert!(sentences.iter().all(|s| !s.is_empty()));
        let rejoined: Vec<Token> = sentences.into_iter().flat_map(|s| s.tokens).collect();
        prop_assert_eq!(rejoined, tokens);
    }

    #[test]
    fn filter_is_idempotent_and_order_preserving(t in text()) {
        let tokens = tokenize(&t);
        let once = filter_punctuation(tokens.clone());
        prop_assert_eq!(filter_punctuation(once.clone()), once.clone());
        let kept: Vec<Token> = tokens.into_iter().filter(|t| t.kind != TokenKind::Punctuation).collect();
        prop_assert_eq!(once, kept);
    }

    #[test]
    fn syllables_bounded(w in "[a-zA-Z]{1,20}") {
        let vowels = w.chars().filter(|c| "aeiouyAEIOUY".contains(*c)).count();
        let n = count_syllables(&w);
        prop_assert!(n >= 1 && n <= vowels + 1, "{} -> {}", w, n);
    }

    #[test]
    fn stem_never_longer(w in "[a-zA-Z]{1,20}|\\PC{1,10}") {
        prop_assert!(porter_stem(&w).len() <= w.len());
    }
}
