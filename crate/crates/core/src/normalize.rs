//! Text normalization applied to every corpus before tokenization.
//!
//! Text is composed to NFC, case folded with Unicode default case folding,
//! recomposed, and split on Unicode whitespace. Rejoining the tokens with
//! single spaces gives the canonical text that character n-grams run over.

use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

/// Description of the normalization, echoed into run records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizationInfo {
    pub unicode_form: &'static str,
    pub case: &'static str,
    pub whitespace: &'static str,
    pub character_ngrams: &'static str,
}

pub const NORMALIZATION: NormalizationInfo = NormalizationInfo {
    unicode_form: "NFC",
    case: "unicode default case folding",
    whitespace: "runs of unicode whitespace collapsed to one space",
    character_ngrams: "windows over words joined by single spaces, spanning word boundaries",
};

/// Normalizes `text` and returns its word tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let folded = fold(text);
    folded.split_whitespace().map(str::to_owned).collect()
}

/// Normalizes `text` into its canonical single-space-joined form.
pub fn normalize(text: &str) -> String {
    tokenize(text).join(" ")
}

fn fold(text: &str) -> String {
    let composed: String = text.nfc().collect();
    let folded = caseless::default_case_fold_str(&composed);
    folded.nfc().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn collapses_whitespace_and_lowercases() {
        assert_eq!(tokenize("The  cat\n sat"), vec!["the", "cat", "sat"]);
        assert_eq!(normalize("  A\tB\u{3000}c \n\n"), "a b c");
    }

    #[test]
    fn composes_and_folds() {
        // e + combining acute composes to U+00E9
        assert_eq!(normalize("Cafe\u{301}"), "caf\u{e9}");
        assert_eq!(normalize("STRASSE Straße"), "strasse strasse");
    }

    #[test]
    fn empty_and_blank_inputs() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" \n\t ").is_empty());
    }

    proptest! {
        #[test]
        fn idempotent(s in "\\PC{0,64}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once.clone());
        }

        #[test]
        fn tokens_have_no_whitespace(s in "\\PC{0,64}") {
            for t in tokenize(&s) {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }
    }
}
