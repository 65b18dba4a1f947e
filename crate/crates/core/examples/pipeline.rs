//! The whole batch pipeline through the command-line entry point: write a
//! synthetic workspace, then run `analyze` and `validate` on it.

use corpsim::synthetic::{write_workspace, FixtureCorpus, SyntheticConfig, SyntheticLanguage};

fn main() -> corpsim::Result<()> {
    let dir = std::env::temp_dir().join("corpsim-pipeline");
    let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 2024);
    let corpus = |id: &str, label: &str, words| FixtureCorpus {
        corpus_id: id.into(),
        register_label: label.into(),
        language_code: "syn".into(),
        words,
    };
    let manifest = write_workspace(
        &dir,
        &[
            corpus("tw", "TW", lang.register_words(0, 40_000, 1)),
            corpus("wk", "WK", lang.register_words(1, 40_000, 2)),
            corpus("cc", "CC", lang.register_words(2, 40_000, 3)),
            corpus("bg", "background", lang.background_words(150_000, 4)),
            corpus("mixed", "mixed", lang.mixture_words(&[1.0, 1.0, 0.0], 40_000, 2_000, 5)),
        ],
    )?;
    let out = dir.join("out");
    for command in ["analyze", "validate"] {
        let args = [
            "corpsim",
            command,
            "--manifest",
            manifest.to_str().expect("utf-8 path"),
            "--seed",
            "11",
            "--sample-size",
            "4000",
            "--k",
            "2000",
            "--pairs",
            "60",
            "--samples-per-corpus",
            "20",
            "--types",
            "c3,w1",
            "--out",
            out.to_str().expect("utf-8 path"),
        ];
        let code = corpsim::cli::run(args);
        println!("{command}: exit {code}");
    }
    println!("{}", std::fs::read_to_string(out.join("validation.csv")).expect("validation table"));
    println!("{}", std::fs::read_to_string(out.join("homogeneity_c3.csv")).expect("homogeneity table"));
    Ok(())
}
