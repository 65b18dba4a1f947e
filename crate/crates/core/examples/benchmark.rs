//! Build the six-condition benchmark for a synthetic language and standardize
//! a few raw similarities against it.

use corpsim::corpus::TokenStream;
use corpsim::features::{select_features, FeatureType};
use corpsim::similarity::{build_benchmark, standardize, SamplingParams};
use corpsim::synthetic::{SyntheticConfig, SyntheticLanguage};

fn main() -> corpsim::Result<()> {
    let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 2024);
    let tw = TokenStream::from_words("tw", lang.register_words(0, 60_000, 1))?;
    let wk = TokenStream::from_words("wk", lang.register_words(1, 60_000, 2))?;
    let cc = TokenStream::from_words("cc", lang.register_words(2, 60_000, 3))?;
    let bg = TokenStream::from_words("bg", lang.background_words(200_000, 4))?;

    let space = select_features(&bg, FeatureType::C3, 2_000);
    let params = SamplingParams { sample_size: 5_000, n_pairs: 100, seed: 7 };
    let bench = build_benchmark("syn", &tw, &wk, &cc, &space, params)?;
    println!("{}", bench.distribution.to_json());

    for (condition, scores) in &bench.scores {
        let z: Vec<f64> = scores.iter().map(|s| standardize(s.rho, &bench.distribution)).collect::<Result<_, _>>()?;
        let mean = z.iter().sum::<f64>() / z.len() as f64;
        println!("{condition}: mean z {mean:+.3}");
    }
    Ok(())
}
