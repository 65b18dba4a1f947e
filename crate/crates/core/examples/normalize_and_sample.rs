//! Normalize raw text into a word stream and cut seeded sub-corpora from it.

use corpsim::corpus::{build_pair_set, sample_subcorpus, TokenStream};
use corpsim::normalize::tokenize;

fn main() -> corpsim::Result<()> {
    println!("{:?}", tokenize("Straße  STRASSE\tCafe\u{301} café"));

    let text = "the cat sat on the mat and the dog sat on the log ".repeat(20);
    let stream = TokenStream::from_text("demo", &text)?;
    println!("{} words", stream.word_count());

    for index in 0..3 {
        let sample = sample_subcorpus(&stream, index, 12, 42)?;
        println!("sample {index} at {}: {}", sample.start(), sample.words().join(" "));
    }
    // same seed, same windows
    assert_eq!(sample_subcorpus(&stream, 1, 12, 42)?, sample_subcorpus(&stream, 1, 12, 42)?);

    let pairs = build_pair_set(&stream, &stream, 5, 12, 42)?;
    for (a, b) in &pairs.pairs {
        println!("pair {}@{} / {}@{}", a.sample_index(), a.start(), b.sample_index(), b.start());
    }
    Ok(())
}
