//! Word and character n-gram features, background feature selection and
//! fixed-space frequency vectors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::corpus::{SubCorpus, TokenStream};
use crate::error::{Error, Result};

/// Default number of features kept in a feature space.
pub const DEFAULT_K: usize = 5_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    Word,
    Character,
}

/// One of the five supported n-gram feature types: W1, W2, C2, C3, C4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureType {
    kind: FeatureKind,
    n: usize,
}

impl FeatureType {
    pub const W1: FeatureType = FeatureType { kind: FeatureKind::Word, n: 1 };
    pub const W2: FeatureType = FeatureType { kind: FeatureKind::Word, n: 2 };
    pub const C2: FeatureType = FeatureType { kind: FeatureKind::Character, n: 2 };
    pub const C3: FeatureType = FeatureType { kind: FeatureKind::Character, n: 3 };
    pub const C4: FeatureType = FeatureType { kind: FeatureKind::Character, n: 4 };

    pub const ALL: [FeatureType; 5] = [Self::W1, Self::W2, Self::C2, Self::C3, Self::C4];

    pub fn new(kind: FeatureKind, n: usize) -> Result<Self> {
        let ok = match kind {
            FeatureKind::Word => (1..=2).contains(&n),
            FeatureKind::Character => (2..=4).contains(&n),
        };
        if ok {
            Ok(Self { kind, n })
        } else {
            let prefix = if kind == FeatureKind::Word { "W" } else { "C" };
            Err(Error::UnknownFeatureType(format!("{prefix}{n}")))
        }
    }

    pub fn kind(self) -> FeatureKind {
        self.kind
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn is_character(self) -> bool {
        self.kind == FeatureKind::Character
    }
}

impl fmt::Display for FeatureType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            FeatureKind::Word => 'W',
            FeatureKind::Character => 'C',
        };
        write!(f, "{prefix}{}", self.n)
    }
}

impl FromStr for FeatureType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('W') => FeatureKind::Word,
            Some('C') => FeatureKind::Character,
            _ => return Err(Error::UnknownFeatureType(s.to_owned())),
        };
        let n = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownFeatureType(s.to_owned()))?;
        Self::new(kind, n).map_err(|_| Error::UnknownFeatureType(s.to_owned()))
    }
}

impl Serialize for FeatureType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical text of a word sequence with byte offsets of words and characters,
/// so every n-gram is a borrowed slice.
struct JoinedText {
    text: String,
    word_spans: Vec<(usize, usize)>,
}

impl JoinedText {
    fn new(words: &[String]) -> Self {
        let mut text = String::with_capacity(words.iter().map(|w| w.len() + 1).sum());
        let mut word_spans = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            let start = text.len();
            text.push_str(w);
            word_spans.push((start, text.len()));
        }
        Self { text, word_spans }
    }

    fn for_each_ngram<'a>(&'a self, ft: FeatureType, mut f: impl FnMut(&'a str)) {
        let n = ft.n;
        match ft.kind {
            FeatureKind::Word => {
                for w in self.word_spans.windows(n) {
                    f(&self.text[w[0].0..w[n - 1].1]);
                }
            }
            FeatureKind::Character => {
                let mut bounds: Vec<usize> = self.text.char_indices().map(|(i, _)| i).collect();
                bounds.push(self.text.len());
                for b in bounds.windows(n + 1) {
                    f(&self.text[b[0]..b[n]]);
                }
            }
        }
    }
}

/// Counts every n-gram of `feature_type` in `words`.
///
/// Word n-grams are `n` consecutive words joined by one space. Character
/// n-grams are windows of `n` scalar values over the words joined by single
/// spaces, so they may span word boundaries.
pub fn extract_ngrams(words: &[String], feature_type: FeatureType) -> HashMap<String, usize> {
    let joined = JoinedText::new(words);
    let mut counts: HashMap<String, usize> = HashMap::new();
    joined.for_each_ngram(feature_type, |g| {
        if let Some(c) = counts.get_mut(g) {
            *c += 1;
        } else {
            counts.insert(g.to_owned(), 1);
        }
    });
    counts
}

/// Content fingerprint of a feature space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceId([u8; 16]);

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{b:02x}"))
    }
}

/// The ordered top-k vocabulary of one feature type.
#[derive(Debug, Clone)]
pub struct FeatureSpace {
    feature_type: FeatureType,
    k: usize,
    source_corpus_id: String,
    items: Vec<String>,
    index: HashMap<String, usize>,
    id: SpaceId,
}

#[derive(Serialize, Deserialize)]
struct FeatureSpaceFile {
    feature_type: FeatureType,
    k: usize,
    source_corpus_id: String,
    items: Vec<String>,
}

impl FeatureSpace {
    /// Builds a space from an explicit item list; items must be distinct and at most `k`.
    pub fn new(
        feature_type: FeatureType,
        k: usize,
        source_corpus_id: impl Into<String>,
        items: Vec<String>,
    ) -> Result<Self> {
        if items.len() > k {
            return Err(Error::InvalidParameter(format!(
                "{} items exceed k = {k}",
                items.len()
            )));
        }
        let mut index = HashMap::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            if index.insert(item.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate feature `{item}`"
                )));
            }
        }
        let mut hasher = Sha256::new();
        hasher.update(feature_type.to_string().as_bytes());
        for item in &items {
            hasher.update([0u8]);
            hasher.update(item.as_bytes());
        }
        let digest = hasher.finalize();
        let mut id = [0u8; 16];
        id.copy_from_slice(&digest[..16]);
        Ok(Self {
            feature_type,
            k,
            source_corpus_id: source_corpus_id.into(),
            items,
            index,
            id: SpaceId(id),
        })
    }

    pub fn feature_type(&self) -> FeatureType {
        self.feature_type
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn source_corpus_id(&self) -> &str {
        &self.source_corpus_id
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn position(&self, item: &str) -> Option<usize> {
        self.index.get(item).copied()
    }

    pub fn to_json(&self) -> String {
        let file = FeatureSpaceFile {
            feature_type: self.feature_type,
            k: self.k,
            source_corpus_id: self.source_corpus_id.clone(),
            items: self.items.clone(),
        };
        serde_json::to_string_pretty(&file).expect("feature space serializes")
    }

    pub fn from_json(json: &str) -> std::result::Result<Self, String> {
        let file: FeatureSpaceFile = serde_json::from_str(json).map_err(|e| e.to_string())?;
        Self::new(file.feature_type, file.k, file.source_corpus_id, file.items)
            .map_err(|e| e.to_string())
    }
}

/// Selects the `k` most frequent n-grams of `background`.
///
/// Items are ordered by count, descending, with ties broken by code point order.
pub fn select_features(background: &TokenStream, feature_type: FeatureType, k: usize) -> FeatureSpace {
    let joined = JoinedText::new(background.words());
    let mut counts: HashMap<&str, usize> = HashMap::new();
    joined.for_each_ngram(feature_type, |g| *counts.entry(g).or_default() += 1);
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    // str ordering is byte-wise UTF-8, which matches code point order
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(k);
    let items = ranked.into_iter().map(|(g, _)| g.to_owned()).collect();
    FeatureSpace::new(feature_type, k, background.corpus_id(), items)
        .expect("counted n-grams are distinct")
}

/// Counts of every feature-space item in one sample, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    space_id: SpaceId,
    counts: Vec<u64>,
    total_ngrams: u64,
}

impl FrequencyVector {
    /// Wraps raw counts, e.g. for tests or externally computed vectors.
    pub fn from_counts(space_id: SpaceId, counts: Vec<u64>, total_ngrams: u64) -> Self {
        Self {
            space_id,
            counts,
            total_ngrams,
        }
    }

    pub fn space_id(&self) -> SpaceId {
        self.space_id
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// All n-gram occurrences in the sample, in the space or not.
    pub fn total_ngrams(&self) -> u64 {
        self.total_ngrams
    }
}

/// Counts each item of `space` among the n-grams of `sample`.
pub fn vectorize(sample: &SubCorpus, space: &FeatureSpace) -> FrequencyVector {
    vectorize_words(sample.words(), space)
}

pub fn vectorize_words(words: &[String], space: &FeatureSpace) -> FrequencyVector {
    let joined = JoinedText::new(words);
    let mut counts = vec![0u64; space.len()];
    let mut total = 0u64;
    joined.for_each_ngram(space.feature_type, |g| {
        total += 1;
        if let Some(&i) = space.index.get(g) {
            counts[i] += 1;
        }
    });
    FrequencyVector {
        space_id: space.id,
        counts,
        total_ngrams: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn counts(pairs: &[(&str, usize)]) -> HashMap<String, usize> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn parses_and_prints_types() {
        for ft in FeatureType::ALL {
            assert_eq!(ft.to_string().parse::<FeatureType>().unwrap(), ft);
        }
        assert_eq!("c4".parse::<FeatureType>().unwrap(), FeatureType::C4);
        for bad in ["W3", "C1", "C5", "X2", "", "W"] {
            assert!(bad.parse::<FeatureType>().is_err(), "{bad}");
        }
        assert!(FeatureType::new(FeatureKind::Word, 3).is_err());
    }

    #[test]
    fn word_unigrams() {
        assert_eq!(
            extract_ngrams(&words("the cat"), FeatureType::W1),
            counts(&[("the", 1), ("cat", 1)])
        );
    }

    #[test]
    fn word_bigrams_join_with_space() {
        assert_eq!(
            extract_ngrams(&words("a b a b"), FeatureType::W2),
            counts(&[("a b", 2), ("b a", 1)])
        );
        assert!(extract_ngrams(&words("a"), FeatureType::W2).is_empty());
    }

    #[test]
    fn character_trigrams_span_boundaries() {
        assert_eq!(
            extract_ngrams(&words("the cat"), FeatureType::C3),
            counts(&[("the", 1), ("he ", 1), ("e c", 1), (" ca", 1), ("cat", 1)])
        );
        // "a a a": windows "a a", " a ", "a a"
        assert_eq!(
            extract_ngrams(&words("a a a"), FeatureType::C3),
            counts(&[("a a", 2), (" a ", 1)])
        );
    }

    #[test]
    fn character_ngrams_use_scalar_values() {
        let g = extract_ngrams(&words("éß"), FeatureType::C2);
        assert_eq!(g, counts(&[("éß", 1)]));
    }

    #[test]
    fn select_orders_by_count_then_code_point() {
        let bg = TokenStream::from_text("bg", "a b a c").unwrap();
        let space = select_features(&bg, FeatureType::W1, 2);
        assert_eq!(space.items(), ["a", "b"]);
        assert_eq!(space.source_corpus_id(), "bg");

        let bg = TokenStream::from_text("bg", "x y z").unwrap();
        let space = select_features(&bg, FeatureType::W1, DEFAULT_K);
        assert_eq!(space.len(), 3);
        assert_eq!(space.k(), DEFAULT_K);
    }

    #[test]
    fn vectorize_counts_and_totals() {
        let space = FeatureSpace::new(FeatureType::W1, 2, "bg", vec!["a".into(), "b".into()]).unwrap();
        let v = vectorize_words(&words("a a c"), &space);
        assert_eq!(v.counts(), [2, 0]);
        assert_eq!(v.total_ngrams(), 3);
        assert_eq!(v.space_id(), space.id());

        let v = vectorize_words(&words("x y z"), &space);
        assert!(v.counts().iter().all(|&c| c == 0));
    }

    #[test]
    fn vectorizing_background_reproduces_its_counts() {
        let text = "the cat sat on the mat and the dog sat on the log";
        let bg = TokenStream::from_text("bg", text).unwrap();
        for ft in FeatureType::ALL {
            let space = select_features(&bg, ft, 10);
            let v = vectorize_words(bg.words(), &space);
            // independent recount by naive substring windows
            let joined = bg.words().join(" ");
            let chars: Vec<char> = joined.chars().collect();
            for (item, &count) in space.items().iter().zip(v.counts()) {
                let expected = match ft.kind() {
                    FeatureKind::Word => bg
                        .words()
                        .windows(ft.n())
                        .filter(|w| w.join(" ") == *item)
                        .count(),
                    FeatureKind::Character => chars
                        .windows(ft.n())
                        .filter(|w| w.iter().collect::<String>() == *item)
                        .count(),
                };
                assert_eq!(count as usize, expected, "{ft} {item:?}");
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let bg = TokenStream::from_text("bg", "b a c a b a").unwrap();
        let space = select_features(&bg, FeatureType::C2, 4);
        let back = FeatureSpace::from_json(&space.to_json()).unwrap();
        assert_eq!(back.items(), space.items());
        assert_eq!(back.id(), space.id());
        assert_eq!(back.feature_type(), FeatureType::C2);

        let dup = r#"{"feature_type":"W1","k":5,"source_corpus_id":"x","items":["a","a"]}"#;
        assert!(FeatureSpace::from_json(dup).is_err());
        let over = r#"{"feature_type":"W1","k":1,"source_corpus_id":"x","items":["a","b"]}"#;
        assert!(FeatureSpace::from_json(over).is_err());
    }

    fn word_seq() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec("[a-dé]{1,3}", 1..30)
    }

    proptest! {
        #[test]
        fn total_ngram_counts(ws in word_seq(), ft_i in 0usize..5) {
            let ft = FeatureType::ALL[ft_i];
            let total: usize = extract_ngrams(&ws, ft).values().sum();
            let len = match ft.kind() {
                FeatureKind::Word => ws.len(),
                FeatureKind::Character => ws.join(" ").chars().count(),
            };
            prop_assert_eq!(total, len.saturating_sub(ft.n() - 1));
        }

        #[test]
        fn concatenation_differs_only_at_boundary(
            a in word_seq(), b in word_seq(), ft_i in 0usize..5
        ) {
            let ft = FeatureType::ALL[ft_i];
            let mut all = a.clone();
            all.extend(b.iter().cloned());
            let bg = TokenStream::from_words("bg", all.clone()).unwrap();
            let space = select_features(&bg, ft, 1_000);
            let va = vectorize_words(&a, &space);
            let vb = vectorize_words(&b, &space);
            let vab = vectorize_words(&all, &space);
            let excess: u64 = vab.counts().iter().zip(va.counts()).zip(vb.counts())
                .map(|((ab, x), y)| {
                    prop_assert!(ab >= &(x + y));
                    Ok(ab - x - y)
                })
                .collect::<std::result::Result<Vec<_>, TestCaseError>>()?
                .into_iter()
                .sum();
            // a word join adds n-1 word windows; a character join adds n windows
            // because of the joining space
            let bound = match ft.kind() {
                FeatureKind::Word => ft.n() as u64 - 1,
                FeatureKind::Character => ft.n() as u64,
            };
            prop_assert!(excess <= bound);
        }

        #[test]
        fn selection_is_deterministic(ws in word_seq(), ft_i in 0usize..5, k in 1usize..20) {
            let ft = FeatureType::ALL[ft_i];
            let bg = TokenStream::from_words("bg", ws).unwrap();
            let a = select_features(&bg, ft, k);
            let b = select_features(&bg, ft, k);
            prop_assert_eq!(a.items(), b.items());
            prop_assert!(a.len() <= k);
        }
    }
}
