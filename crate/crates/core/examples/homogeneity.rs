//! Homogeneity of a pure register against a two-register mixture.

use corpsim::analysis::homogeneity;
use corpsim::corpus::TokenStream;
use corpsim::features::{select_features, FeatureType};
use corpsim::similarity::{build_benchmark, SamplingParams};
use corpsim::synthetic::{SyntheticConfig, SyntheticLanguage};

fn main() -> corpsim::Result<()> {
    let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 2024);
    let words = |r, seed| lang.register_words(r, 60_000, seed);
    let tw = TokenStream::from_words("tw", words(0, 1))?;
    let wk = TokenStream::from_words("wk", words(1, 2))?;
    let cc = TokenStream::from_words("cc", words(2, 3))?;
    let bg = TokenStream::from_words("bg", lang.background_words(200_000, 4))?;
    let mixed = TokenStream::from_words("mixed", lang.mixture_words(&[1.0, 1.0, 0.0], 60_000, 2_500, 5))?;

    let space = select_features(&bg, FeatureType::C4, 2_000);
    let params = SamplingParams { sample_size: 5_000, n_pairs: 100, seed: 7 };
    let bench = build_benchmark("syn", &tw, &wk, &cc, &space, params)?.distribution;

    for corpus in [&tw, &mixed] {
        let (report, _) = homogeneity(corpus, &bench, &space, params)?;
        println!(
            "{:>6}: mean z {:.3}, sd {:.3}, 90% interval [{:.3}, {:.3}], {} outliers",
            report.corpus_id,
            report.mean_z,
            report.std_z,
            report.interval_90.0,
            report.interval_90.1,
            report.outliers.len()
        );
    }
    Ok(())
}
