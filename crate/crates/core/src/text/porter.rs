//! The original Porter suffix-stripping algorithm (steps 1a through 5b).
//!
//! This is the algorithm as first published, not the later revisions found
//! in some reference implementations: step 2 maps `abli` to `able`, there is
//! no `logi` rule, and short words are not exempted.

/// Stem a single word.
///
/// The word is folded to lowercase first. Anything that is not purely ASCII
/// alphabetic (numbers, hyphenated compounds, accented words) is returned
/// unchanged.
pub fn porter_stem(word: &str) -> String {
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_alphabetic()) {
        return word.to_owned();
    }
    let mut w = Word(word.to_ascii_lowercase().into_bytes());
    w.step1a();
    w.step1b();
    w.step1c();
    w.step2();
    w.step3();
    w.step4();
    w.step5a();
    w.step5b();
    // Only ASCII letters remain.
    String::from_utf8(w.0).expect("ascii")
}

struct Word(Vec<u8>);

impl Word {
    fn is_consonant(&self, i: usize) -> bool {
        match self.0[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in the first `len` letters.
    fn measure(&self, len: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        while i < len && self.is_consonant(i) {
            i += 1;
        }
        loop {
            while i < len && !self.is_consonant(i) {
                i += 1;
            }
            if i >= len {
                return m;
            }
            while i < len && self.is_consonant(i) {
                i += 1;
            }
            m += 1;
        }
    }

    fn has_vowel(&self, len: usize) -> bool {
        (0..len).any(|i| !self.is_consonant(i))
    }

    fn ends_double_consonant(&self, len: usize) -> bool {
        len >= 2 && self.0[len - 1] == self.0[len - 2] && self.is_consonant(len - 1)
    }

    /// cvc where the final consonant is not w, x or y.
    fn ends_cvc(&self, len: usize) -> bool {
        len >= 3
            && self.is_consonant(len - 3)
            && !self.is_consonant(len - 2)
            && self.is_consonant(len - 1)
            && !matches!(self.0[len - 1], b'w' | b'x' | b'y')
    }

    fn ends_with(&self, suffix: &str) -> bool {
        self.0.ends_with(suffix.as_bytes())
    }

    fn stem_len(&self, suffix: &str) -> usize {
        self.0.len() - suffix.len()
    }

    fn replace_suffix(&mut self, suffix: &str, replacement: &str) {
        let keep = self.stem_len(suffix);
        self.0.truncate(keep);
        self.0.extend_from_slice(replacement.as_bytes());
    }

    /// Apply the longest matching rule when the remaining stem has measure
    /// above `min_measure`. Only the longest match is ever considered.
    fn apply_rules(&mut self, rules: &[(&str, &str)], min_measure: usize) -> bool {
        let matched = rules
            .iter()
            .filter(|(suffix, _)| self.ends_with(suffix))
            .max_by_key(|(suffix, _)| suffix.len());
        match matched {
            Some(&(suffix, replacement)) if self.measure(self.stem_len(suffix)) > min_measure => {
                self.replace_suffix(suffix, replacement);
                true
            }
            _ => false,
        }
    }

    fn step1a(&mut self) {
        if self.ends_with("sses") || self.ends_with("ies") {
            let n = self.0.len();
            self.0.truncate(n - 2);
        } else if self.ends_with("ss") {
        } else if self.ends_with("s") {
            self.0.pop();
        }
    }

    fn step1b(&mut self) {
        if self.ends_with("eed") {
            if self.measure(self.stem_len("eed")) > 0 {
                self.0.pop();
            }
            return;
        }
        let stripped = if self.ends_with("ed") && self.has_vowel(self.stem_len("ed")) {
            self.replace_suffix("ed", "");
            true
        } else if self.ends_with("ing") && self.has_vowel(self.stem_len("ing")) {
            self.replace_suffix("ing", "");
            true
        } else {
            false
        };
        if !stripped {
            return;
        }
        let len = self.0.len();
        if self.ends_with("at") || self.ends_with("bl") || self.ends_with("iz") {
            self.0.push(b'e');
        } else if self.ends_double_consonant(len) && !matches!(self.0[len - 1], b'l' | b's' | b'z')
        {
            self.0.pop();
        } else if self.measure(len) == 1 && self.ends_cvc(len) {
            self.0.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if self.ends_with("y") && self.has_vowel(self.0.len() - 1) {
            let n = self.0.len();
            self.0[n - 1] = b'i';
        }
    }

    fn step2(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("ational", "ate"),
            ("tional", "tion"),
            ("enci", "ence"),
            ("anci", "ance"),
            ("izer", "ize"),
            ("abli", "able"),
            ("alli", "al"),
            ("entli", "ent"),
            ("eli", "e"),
            ("ousli", "ous"),
            ("ization", "ize"),
            ("ation", "ate"),
            ("ator", "ate"),
            ("alism", "al"),
            ("iveness", "ive"),
            ("fulness", "ful"),
            ("ousness", "ous"),
            ("aliti", "al"),
            ("iviti", "ive"),
            ("biliti", "ble"),
        ];
        self.apply_rules(RULES, 0);
    }

    fn step3(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("icate", "ic"),
            ("ative", ""),
            ("alize", "al"),
            ("iciti", "ic"),
            ("ical", "ic"),
            ("ful", ""),
            ("ness", ""),
        ];
        self.apply_rules(RULES, 0);
    }

    fn step4(&mut self) {
        const SUFFIXES: &[&str] = &[
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
            "ou", "ism", "ate", "iti", "ous", "ive", "ize",
        ];
        let Some(suffix) = SUFFIXES
            .iter()
            .filter(|s| self.ends_with(s))
            .max_by_key(|s| s.len())
        else {
            return;
        };
        let stem = self.stem_len(suffix);
        if self.measure(stem) <= 1 {
            return;
        }
        if *suffix == "ion" && !(stem > 0 && matches!(self.0[stem - 1], b's' | b't')) {
            return;
        }
        self.0.truncate(stem);
    }

    fn step5a(&mut self) {
        if !self.ends_with("e") {
            return;
        }
        let stem = self.0.len() - 1;
        let m = self.measure(stem);
        if m > 1 || (m == 1 && !self.ends_cvc(stem)) {
            self.0.pop();
        }
    }

    fn step5b(&mut self) {
        let len = self.0.len();
        if self.measure(len) > 1 && self.ends_double_consonant(len) && self.0[len - 1] == b'l' {
            self.0.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inflections_share_a_stem() {
        assert_eq!(porter_stem("amazing"), "amaz");
        assert_eq!(porter_stem("amazed"), "amaz");
        assert_eq!(porter_stem("amazes"), "amaz");
    }

    #[test]
    fn step_examples() {
        assert_eq!(porter_stem("caresses"), "caress");
        assert_eq!(porter_stem("sky"), "sky");
        assert_eq!(porter_stem("feed"), "feed");
        assert_eq!(porter_stem("hopping"), "hop");
        assert_eq!(porter_stem("filing"), "file");
        assert_eq!(porter_stem("generalizations"), "gener");
        assert_eq!(porter_stem("controll"), "control");
    }

    #[test]
    fn folds_case_and_passes_non_alphabetic() {
        assert_eq!(porter_stem("Amazing"), "amaz");
        assert_eq!(porter_stem("30"), "30");
        assert_eq!(porter_stem("co-op"), "co-op");
        assert_eq!(porter_stem("café"), "café");
        assert_eq!(porter_stem(""), "");
    }
}
