//! Corpus loading, fixed-size sub-corpus sampling and pair construction.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::normalize;

/// Default number of words in a sub-corpus.
pub const DEFAULT_SAMPLE_SIZE: usize = 10_000;
/// Default number of pairs per comparison condition.
pub const DEFAULT_PAIRS: usize = 250;
/// Pair construction gives up after this many draws per requested pair.
pub const PAIR_DRAW_BUDGET: usize = 10;

/// One corpus entry of a run manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub corpus_id: String,
    pub register_label: String,
    pub language_code: String,
    pub paths: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_word_count: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct ManifestFile {
    #[serde(default)]
    corpus: Vec<CorpusManifest>,
}

/// Parses a manifest file. Relative paths resolve against the manifest's directory.
///
/// ```toml
/// [[corpus]]
/// corpus_id = "eng-tw"
/// register_label = "TW"
/// language_code = "eng"
/// paths = ["tw/part1.txt", "tw/part2.txt"]
/// ```
pub fn read_manifest(path: &Path) -> Result<Vec<CorpusManifest>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    parse_manifest(&text, base).map_err(|reason| Error::Manifest {
        path: path.to_owned(),
        reason,
    })
}

pub(crate) fn parse_manifest(
    text: &str,
    base: &Path,
) -> std::result::Result<Vec<CorpusManifest>, String> {
    let file: ManifestFile = toml::from_str(text).map_err(|e| e.to_string())?;
    if file.corpus.is_empty() {
        return Err("no [[corpus]] entries".into());
    }
    let mut seen = HashSet::new();
    let mut entries = file.corpus;
    for entry in &mut entries {
        entry.validate()?;
        if !seen.insert(entry.corpus_id.clone()) {
            return Err(format!("duplicate corpus_id `{}`", entry.corpus_id));
        }
        for p in &mut entry.paths {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
    Ok(entries)
}

impl CorpusManifest {
    fn validate(&self) -> std::result::Result<(), String> {
        if self.corpus_id.trim().is_empty() {
            return Err("empty corpus_id".into());
        }
        if self.paths.is_empty() {
            return Err(format!("corpus `{}` lists no paths", self.corpus_id));
        }
        Ok(())
    }
}

/// A normalized corpus as one ordered sequence of word tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    corpus_id: String,
    words: Arc<[String]>,
}

impl TokenStream {
    /// Builds a stream from raw text, applying the standard normalization.
    pub fn from_text(corpus_id: impl Into<String>, text: &str) -> Result<Self> {
        Self::from_words(corpus_id, normalize::tokenize(text))
    }

    /// Builds a stream from already-normalized tokens.
    pub fn from_words(corpus_id: impl Into<String>, words: Vec<String>) -> Result<Self> {
        let corpus_id = corpus_id.into();
        if words.is_empty() {
            return Err(Error::EmptyCorpus { corpus_id });
        }
        debug_assert!(words
            .iter()
            .all(|w| !w.is_empty() && !w.chars().any(char::is_whitespace)));
        Ok(Self {
            corpus_id,
            words: words.into(),
        })
    }

    pub fn corpus_id(&self) -> &str {
        &self.corpus_id
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    /// Returns the same tokens under another corpus id.
    pub fn renamed(&self, corpus_id: impl Into<String>) -> Self {
        Self {
            corpus_id: corpus_id.into(),
            words: Arc::clone(&self.words),
        }
    }
}

/// Reads and normalizes every file of `manifest`, in path order.
pub fn load_corpus(manifest: &CorpusManifest) -> Result<TokenStream> {
    let mut words = Vec::new();
    for path in &manifest.paths {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        words.extend(normalize::tokenize(&text));
    }
    TokenStream::from_words(manifest.corpus_id.clone(), words)
}

/// The inputs that fully determine a sub-corpus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SeedRecord {
    pub master_seed: u64,
    pub corpus_id: String,
    pub sample_index: usize,
}

impl SeedRecord {
    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(self.master_seed.to_le_bytes());
        hasher.update((self.corpus_id.len() as u64).to_le_bytes());
        hasher.update(self.corpus_id.as_bytes());
        hasher.update((self.sample_index as u64).to_le_bytes());
        ChaCha8Rng::from_seed(hasher.finalize().into())
    }
}

/// A contiguous window of a token stream.
#[derive(Debug, Clone)]
pub struct SubCorpus {
    seed_record: SeedRecord,
    source: Arc<[String]>,
    window: Range<usize>,
}

impl SubCorpus {
    pub fn corpus_id(&self) -> &str {
        &self.seed_record.corpus_id
    }

    pub fn sample_index(&self) -> usize {
        self.seed_record.sample_index
    }

    pub fn seed_record(&self) -> &SeedRecord {
        &self.seed_record
    }

    /// Offset of the first word within the source stream.
    pub fn start(&self) -> usize {
        self.window.start
    }

    pub fn words(&self) -> &[String] {
        &self.source[self.window.clone()]
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }
}

impl PartialEq for SubCorpus {
    fn eq(&self, other: &Self) -> bool {
        self.seed_record == other.seed_record && self.words() == other.words()
    }
}

/// Draws the `sample_index`-th window of `sample_size` words from `stream`.
///
/// The start offset is uniform over `[0, word_count - sample_size]` and is a
/// pure function of `(master_seed, corpus_id, sample_index)`.
pub fn sample_subcorpus(
    stream: &TokenStream,
    sample_index: usize,
    sample_size: usize,
    master_seed: u64,
) -> Result<SubCorpus> {
    let word_count = stream.word_count();
    if sample_size == 0 || word_count < sample_size {
        return Err(Error::CorpusTooSmall {
            corpus_id: stream.corpus_id.clone(),
            word_count,
            sample_size,
        });
    }
    let seed_record = SeedRecord {
        master_seed,
        corpus_id: stream.corpus_id.clone(),
        sample_index,
    };
    let start = seed_record.rng().random_range(0..=word_count - sample_size);
    Ok(SubCorpus {
        seed_record,
        source: Arc::clone(&stream.words),
        window: start..start + sample_size,
    })
}

/// Pairs of sub-corpora for one comparison condition.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pub condition: (String, String),
    pub pairs: Vec<(SubCorpus, SubCorpus)>,
}

impl PairSet {
    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_same_corpus(&self) -> bool {
        self.condition.0 == self.condition.1
    }
}

/// Sample indices used by the `draw`-th pair attempt.
pub(crate) fn draw_indices(draw: usize) -> (usize, usize) {
    (2 * draw, 2 * draw + 1)
}

type WindowKey = (String, usize);

/// Tracks accepted pairs; rejects a draw whose two windows coincide or that
/// repeats an earlier pair of windows.
#[derive(Default)]
pub(crate) struct PairFilter {
    seen: BTreeSet<(WindowKey, WindowKey)>,
}

impl PairFilter {
    pub(crate) fn accept(&mut self, a: &SubCorpus, b: &SubCorpus) -> bool {
        let ka = (a.corpus_id().to_owned(), a.start());
        let kb = (b.corpus_id().to_owned(), b.start());
        if ka == kb {
            return false;
        }
        let key = if ka <= kb { (ka, kb) } else { (kb, ka) };
        self.seen.insert(key)
    }
}

/// Builds `n_pairs` unique pairs of sub-corpora, one member from each stream.
///
/// Draw `t` uses sample indices `2t` and `2t + 1`, so pairs are unique as
/// unordered `(corpus_id, sample_index)` pairs. Draws whose two windows are
/// the same span of the same corpus, or which repeat the windows of an earlier
/// pair, are skipped. After `PAIR_DRAW_BUDGET * n_pairs` draws the build fails.
pub fn build_pair_set(
    stream_a: &TokenStream,
    stream_b: &TokenStream,
    n_pairs: usize,
    sample_size: usize,
    master_seed: u64,
) -> Result<PairSet> {
    if n_pairs == 0 {
        return Err(Error::InvalidParameter("n_pairs must be at least 1".into()));
    }
    for stream in [stream_a, stream_b] {
        if stream.word_count() < sample_size {
            return Err(Error::CorpusTooSmall {
                corpus_id: stream.corpus_id.clone(),
                word_count: stream.word_count(),
                sample_size,
            });
        }
    }
    let budget = PAIR_DRAW_BUDGET * n_pairs;
    let mut filter = PairFilter::default();
    let mut drawn = Vec::with_capacity(n_pairs);
    let mut draws = 0;
    while drawn.len() < n_pairs && draws < budget {
        let (ia, ib) = draw_indices(draws);
        let a = sample_subcorpus(stream_a, ia, sample_size, master_seed)?;
        let b = sample_subcorpus(stream_b, ib, sample_size, master_seed)?;
        draws += 1;
        if filter.accept(&a, &b) {
            drawn.push((a, b));
        }
    }
    if drawn.len() < n_pairs {
        return Err(Error::PairingExhausted {
            corpus_a: stream_a.corpus_id.clone(),
            corpus_b: stream_b.corpus_id.clone(),
            requested: n_pairs,
            formed: drawn.len(),
            draws,
        });
    }
    Ok(PairSet {
        condition: (stream_a.corpus_id.clone(), stream_b.corpus_id.clone()),
        pairs: drawn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn stream(id: &str, n: usize) -> TokenStream {
        TokenStream::from_words(id, (0..n).map(|i| format!("w{i}")).collect()).unwrap()
    }

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::File::create(&p)
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
        p
    }

    fn manifest(paths: Vec<PathBuf>) -> CorpusManifest {
        CorpusManifest {
            corpus_id: "c".into(),
            register_label: "TW".into(),
            language_code: "eng".into(),
            paths,
            declared_word_count: None,
        }
    }

    #[test]
    fn load_normalizes_and_concatenates() {
        let dir = tempfile::tempdir().unwrap();
        let one = write(dir.path(), "one.txt", "The  cat\n sat");
        let s = load_corpus(&manifest(vec![one])).unwrap();
        assert_eq!(s.words(), ["the", "cat", "sat"]);
        assert_eq!(s.word_count(), 3);

        let a = write(dir.path(), "a.txt", "a b");
        let c = write(dir.path(), "c.txt", "c");
        let s = load_corpus(&manifest(vec![a, c])).unwrap();
        assert_eq!(s.words(), ["a", "b", "c"]);
    }

    #[test]
    fn load_errors() {
        let dir = tempfile::tempdir().unwrap();
        let empty = write(dir.path(), "empty.txt", "");
        assert!(matches!(
            load_corpus(&manifest(vec![empty])),
            Err(Error::EmptyCorpus { .. })
        ));
        let missing = dir.path().join("missing.txt");
        match load_corpus(&manifest(vec![missing.clone()])) {
            Err(Error::Io { path, .. }) => assert_eq!(path, missing),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn manifest_parsing() {
        let text = r#"
            [[corpus]]
            corpus_id = "tw"
            register_label = "TW"
            language_code = "eng"
            paths = ["tw.txt", "/abs/more.txt"]

            [[corpus]]
            corpus_id = "bg"
            register_label = "background"
            language_code = "eng"
            paths = ["bg.txt"]
            declared_word_count = 5
        "#;
        let m = parse_manifest(text, Path::new("/data")).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].paths[0], PathBuf::from("/data/tw.txt"));
        assert_eq!(m[0].paths[1], PathBuf::from("/abs/more.txt"));
        assert_eq!(m[1].declared_word_count, Some(5));

        let dup = "[[corpus]]\ncorpus_id='a'\nregister_label='x'\nlanguage_code='e'\npaths=['p']\n\
                   [[corpus]]\ncorpus_id='a'\nregister_label='y'\nlanguage_code='e'\npaths=['q']\n";
        assert!(parse_manifest(dup, Path::new("")).unwrap_err().contains("duplicate"));
        let no_paths = "[[corpus]]\ncorpus_id='a'\nregister_label='x'\nlanguage_code='e'\npaths=[]\n";
        assert!(parse_manifest(no_paths, Path::new("")).is_err());
        let no_id = "[[corpus]]\ncorpus_id=''\nregister_label='x'\nlanguage_code='e'\npaths=['p']\n";
        assert!(parse_manifest(no_id, Path::new("")).is_err());
    }

    #[test]
    fn sample_whole_stream_when_sizes_match() {
        let s = stream("a", 50);
        let sub = sample_subcorpus(&s, 7, 50, 1).unwrap();
        assert_eq!(sub.start(), 0);
        assert_eq!(sub.words(), s.words());
    }

    #[test]
    fn sample_too_small() {
        let s = stream("a", 49);
        match sample_subcorpus(&s, 0, 50, 1) {
            Err(Error::CorpusTooSmall {
                word_count,
                sample_size,
                ..
            }) => assert_eq!((word_count, sample_size), (49, 50)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sampling_is_deterministic_and_seed_sensitive() {
        let s = stream("a", 10_000);
        let x = sample_subcorpus(&s, 3, 100, 42).unwrap();
        let y = sample_subcorpus(&s, 3, 100, 42).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 100);
        let starts: HashSet<usize> = (0..20)
            .map(|i| sample_subcorpus(&s, i, 100, 42).unwrap().start())
            .collect();
        assert!(starts.len() > 1);
        let other: Vec<usize> = (0..20)
            .map(|i| sample_subcorpus(&s, i, 100, 43).unwrap().start())
            .collect();
        let ours: Vec<usize> = (0..20)
            .map(|i| sample_subcorpus(&s, i, 100, 42).unwrap().start())
            .collect();
        assert_ne!(ours, other);
    }

    #[test]
    fn same_corpus_single_pair_uses_distinct_indices() {
        let s = stream("a", 1_000);
        let ps = build_pair_set(&s, &s, 1, 100, 5).unwrap();
        assert_eq!(ps.n_pairs(), 1);
        let (a, b) = &ps.pairs[0];
        assert_ne!(a.sample_index(), b.sample_index());
        assert!(ps.is_same_corpus());
    }

    #[test]
    fn cross_corpus_pairs_are_unique() {
        let a = stream("a", 1_000);
        let b = stream("b", 1_000);
        let ps = build_pair_set(&a, &b, 3, 100, 5).unwrap();
        assert_eq!(ps.n_pairs(), 3);
        let keys: HashSet<_> = ps
            .pairs
            .iter()
            .map(|(x, y)| (x.sample_index(), y.sample_index()))
            .collect();
        assert_eq!(keys.len(), 3);
    }

    #[test]
    fn single_window_corpus_cannot_pair_with_itself() {
        let s = stream("a", 100);
        match build_pair_set(&s, &s, 2, 100, 5) {
            Err(Error::PairingExhausted { formed, draws, .. }) => {
                assert_eq!(formed, 0);
                assert_eq!(draws, 20);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pair_set_reports_small_corpus() {
        let a = stream("a", 1_000);
        let b = stream("b", 10);
        assert!(matches!(
            build_pair_set(&a, &b, 1, 100, 0),
            Err(Error::CorpusTooSmall { .. })
        ));
    }
}
