//! Select a top-k n-gram space from a background corpus and vectorize a sample.

use corpsim::corpus::TokenStream;
use corpsim::features::{extract_ngrams, select_features, vectorize_words, FeatureSpace, FeatureType};

fn main() -> corpsim::Result<()> {
    let background = TokenStream::from_text("bg", "to be or not to be that is the question")?;

    let mut grams: Vec<_> = extract_ngrams(background.words(), FeatureType::C2).into_iter().collect();
    grams.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    println!("C2 counts: {:?}", &grams[..6]);

    for ft in FeatureType::ALL {
        let space = select_features(&background, ft, 5);
        println!("{ft} {} {:?}", space.id(), space.items());
    }

    let space = select_features(&background, "w1".parse()?, 4);
    let sample: Vec<String> = "be or be not".split(' ').map(String::from).collect();
    let v = vectorize_words(&sample, &space);
    println!("{:?} over {:?} ({} n-grams seen)", v.counts(), space.items(), v.total_ngrams());

    let restored = FeatureSpace::from_json(&space.to_json()).expect("round trip");
    assert_eq!(restored.id(), space.id());
    Ok(())
}
