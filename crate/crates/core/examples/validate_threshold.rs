//! Five-fold threshold validation of every feature type on a synthetic language.

use corpsim::corpus::TokenStream;
use corpsim::features::FeatureType;
use corpsim::synthetic::{SyntheticConfig, SyntheticLanguage};
use corpsim::validation::{compute_threshold, validate_language, ValidationParams};

fn main() -> corpsim::Result<()> {
    let t = compute_threshold([0.80, 0.90, 0.85], [0.40, 0.50, 0.45]);
    println!("threshold for same (.80 .90 .85) and cross (.40 .50 .45): {}", t.value);

    let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 2024);
    let tw = TokenStream::from_words("tw", lang.register_words(0, 60_000, 1))?;
    let wk = TokenStream::from_words("wk", lang.register_words(1, 60_000, 2))?;
    let cc = TokenStream::from_words("cc", lang.register_words(2, 60_000, 3))?;
    let bg = TokenStream::from_words("bg", lang.background_words(200_000, 4))?;

    let params = ValidationParams {
        sample_size: 5_000,
        k: 2_000,
        samples_per_corpus: 25,
        seed: 7,
        ..Default::default()
    };
    let (report, runs) = validate_language("syn", &tw, &wk, &cc, &bg, &FeatureType::ALL, &params)?;
    for run in &runs {
        println!("{}: folds {:?}", run.feature_type, run.fold_accuracies);
    }
    println!("best {} at {:.3}", report.best, report.best_accuracy());
    Ok(())
}
