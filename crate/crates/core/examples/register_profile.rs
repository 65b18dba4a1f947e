//! Register profile: each sample placed by its similarity to TW and to WK,
//! written as an SVG scatter plot.

use corpsim::analysis::profile;
use corpsim::corpus::TokenStream;
use corpsim::features::{select_features, FeatureType};
use corpsim::plot::profile_scatter;
use corpsim::similarity::{build_benchmark, SamplingParams};
use corpsim::synthetic::{SyntheticConfig, SyntheticLanguage};

fn main() -> corpsim::Result<()> {
    let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 2024);
    let tw = TokenStream::from_words("tw", lang.register_words(0, 60_000, 1))?;
    let wk = TokenStream::from_words("wk", lang.register_words(1, 60_000, 2))?;
    let cc = TokenStream::from_words("cc", lang.register_words(2, 60_000, 3))?;
    let bg = TokenStream::from_words("bg", lang.background_words(200_000, 4))?;
    let mixed = TokenStream::from_words("mixed", lang.mixture_words(&[1.0, 1.0, 0.0], 60_000, 2_500, 5))?;

    let space = select_features(&bg, FeatureType::C4, 2_000);
    let params = SamplingParams { sample_size: 5_000, n_pairs: 100, seed: 7 };
    let bench = build_benchmark("syn", &tw, &wk, &cc, &space, params)?.distribution;

    let prof = profile(&tw, &wk, &[mixed], &bench, &space, SamplingParams { n_pairs: 40, ..params })?;
    for source in ["tw", "wk", "mixed"] {
        let pts: Vec<_> = prof.points.iter().filter(|p| p.source_corpus_id == source).collect();
        let mean = |f: fn(&&corpsim::analysis::ProfilePoint) -> f64| pts.iter().map(f).sum::<f64>() / pts.len() as f64;
        println!("{source:>6}: to TW {:+.2}, to WK {:+.2}", mean(|p| p.z_to_tw), mean(|p| p.z_to_wk));
    }

    let path = std::env::temp_dir().join("corpsim-profile.svg");
    std::fs::write(&path, profile_scatter("Register profile (C4)", &prof)).expect("write svg");
    println!("wrote {}", path.display());
    Ok(())
}
