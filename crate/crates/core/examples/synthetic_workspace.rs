//! Writes a synthetic language to disk as corpus files plus a manifest, ready
//! for the `corpsim` command line.
//!
//! ```text
//! cargo run --example synthetic_workspace -- /tmp/syn
//! cargo run --release --bin corpsim -- analyze --manifest /tmp/syn/manifest.toml --seed 1 --out /tmp/syn/out
//! ```

use std::path::PathBuf;

use corpsim::synthetic::{write_workspace, FixtureCorpus, SyntheticConfig, SyntheticLanguage};

fn main() -> corpsim::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("corpsim-syn"));
    let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 2024);
    let n = 120_000;
    let corpus = |id: &str, label: &str, words| FixtureCorpus {
        corpus_id: id.into(),
        register_label: label.into(),
        language_code: "syn".into(),
        words,
    };
    let corpora = [
        corpus("syn-tw", "TW", lang.register_words(0, n, 1)),
        corpus("syn-wk", "WK", lang.register_words(1, n, 2)),
        corpus("syn-cc", "CC", lang.register_words(2, n, 3)),
        corpus("syn-background", "background", lang.background_words(400_000, 4)),
        corpus("syn-mixed", "mixed", lang.mixture_words(&[1.0, 1.0, 0.0], n, 5_000, 5)),
    ];
    let manifest = write_workspace(&dir, &corpora)?;
    println!("{}", manifest.display());
    Ok(())
}
