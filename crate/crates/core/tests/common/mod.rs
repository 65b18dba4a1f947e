#![allow(dead_code)]

use std::path::{Path, PathBuf};

use corpsim::corpus::TokenStream;
use corpsim::synthetic::{write_workspace, FixtureCorpus, SyntheticConfig, SyntheticLanguage};

pub const LANGUAGE_SEED: u64 = 2024;

pub struct Registers {
    pub lang: SyntheticLanguage,
    pub tw: TokenStream,
    pub wk: TokenStream,
    pub cc: TokenStream,
    pub background: TokenStream,
}

/// TW, WK and CC from registers 0..3, background from every block.
pub fn registers(n_registers: usize, words: usize, background_words: usize) -> Registers {
    let lang = SyntheticLanguage::new(n_registers, SyntheticConfig::default(), LANGUAGE_SEED);
    let stream = |id: &str, w| TokenStream::from_words(id, w).unwrap();
    Registers {
        tw: stream("tw", lang.register_words(0, words, 1)),
        wk: stream("wk", lang.register_words(1, words, 2)),
        cc: stream("cc", lang.register_words(2, words, 3)),
        background: stream("bg", lang.background_words(background_words, 4)),
        lang,
    }
}

pub fn fixture(id: &str, label: &str, words: Vec<String>) -> FixtureCorpus {
    FixtureCorpus {
        corpus_id: id.into(),
        register_label: label.into(),
        language_code: "syn".into(),
        words,
    }
}

/// A small on-disk workspace: TW, WK, CC, background and a 50/50 mixture.
pub fn small_workspace(dir: &Path) -> PathBuf {
    let r = registers(3, 30_000, 100_000);
    let corpora = [
        fixture("tw", "TW", r.tw.words().to_vec()),
        fixture("wk", "WK", r.wk.words().to_vec()),
        fixture("cc", "CC", r.cc.words().to_vec()),
        fixture("bg", "background", r.background.words().to_vec()),
        fixture("mixed", "mixed", r.lang.mixture_words(&[1.0, 1.0, 0.0], 30_000, 2_000, 5)),
    ];
    write_workspace(dir, &corpora).unwrap()
}

/// Flags for fast CLI runs over [`small_workspace`].
pub fn small_run_args(manifest: &Path, out: &Path) -> Vec<String> {
    [
        "--manifest",
        manifest.to_str().unwrap(),
        "--seed",
        "17",
        "--sample-size",
        "3000",
        "--k",
        "1500",
        "--pairs",
        "40",
        "--samples-per-corpus",
        "10",
        "--types",
        "c3,w1",
        "--out",
        out.to_str().unwrap(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}
