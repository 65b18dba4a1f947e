//! Seeded Zipfian pseudo-language corpora for tests, examples and demos.
//!
//! A [`SyntheticLanguage`] owns a lexicon of pronounceable pseudo-words split
//! into a shared function-word block and one disjoint content block per
//! register. Each register draws function words under its own rank order and
//! content words from its own block; the background mixes every block.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::error::{Error, Result};

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "ch", "sh", "th", "br",
    "st", "tr",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ou"];
const CODAS: &[&str] = &["", "", "n", "s", "r", "l", "t", "ng"];

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub function_words: usize,
    pub content_words: usize,
    /// Probability that a token is a function word.
    pub function_rate: f64,
    pub exponent: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            function_words: 80,
            content_words: 3_000,
            function_rate: 0.45,
            exponent: 1.05,
        }
    }
}

#[derive(Debug, Clone)]
struct RegisterModel {
    function_order: Vec<usize>,
    content: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SyntheticLanguage {
    lexicon: Vec<String>,
    config: SyntheticConfig,
    registers: Vec<RegisterModel>,
    background_content: Vec<usize>,
}

impl SyntheticLanguage {
    /// A language with `n_registers` registers plus an independent background block.
    pub fn new(n_registers: usize, config: SyntheticConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let blocks = n_registers + 1;
        let total = config.function_words + blocks * config.content_words;
        let lexicon = make_lexicon(total, &mut rng);
        let functions: Vec<usize> = (0..config.function_words).collect();
        let block = |b: usize| {
            let start = config.function_words + b * config.content_words;
            (start..start + config.content_words).collect::<Vec<_>>()
        };
        let registers = (0..n_registers)
            .map(|r| {
                let mut function_order = functions.clone();
                function_order.shuffle(&mut rng);
                RegisterModel {
                    function_order,
                    content: block(r),
                }
            })
            .collect();
        Self {
            lexicon,
            background_content: block(n_registers),
            config,
            registers,
        }
    }

    pub fn n_registers(&self) -> usize {
        self.registers.len()
    }

    /// `n_words` tokens from register `register`.
    pub fn register_words(&self, register: usize, n_words: usize, seed: u64) -> Vec<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000 ^ register as u64);
        let model = &self.registers[register];
        self.draw(&model.function_order, &[&model.content], n_words, &mut rng)
    }

    /// Background text: canonical function-word order, content from every block.
    pub fn background_words(&self, n_words: usize, seed: u64) -> Vec<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb6_0000);
        let functions: Vec<usize> = (0..self.config.function_words).collect();
        let mut pools: Vec<&[usize]> = self.registers.iter().map(|r| r.content.as_slice()).collect();
        pools.push(&self.background_content);
        self.draw(&functions, &pools, n_words, &mut rng)
    }

    /// Documents of `doc_len` words, each drawn wholly from one register chosen
    /// by `weights` (one weight per register).
    pub fn mixture_words(&self, weights: &[f64], n_words: usize, doc_len: usize, seed: u64) -> Vec<String> {
        assert_eq!(weights.len(), self.registers.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x313_0000);
        let total: f64 = weights.iter().sum();
        let mut out = Vec::with_capacity(n_words);
        let mut doc = 0u64;
        while out.len() < n_words {
            let mut pick = rng.random::<f64>() * total;
            let mut reg = 0;
            for (i, w) in weights.iter().enumerate() {
                if pick < *w {
                    reg = i;
                    break;
                }
                pick -= w;
                reg = i;
            }
            let len = doc_len.min(n_words - out.len());
            out.extend(self.register_words(reg, len, seed.wrapping_add(1_000_003 * (doc + 1))));
            doc += 1;
        }
        out
    }

    fn draw(&self, functions: &[usize], pools: &[&[usize]], n_words: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
        let fz = Zipf::new(functions.len() as f64, self.config.exponent).expect("valid zipf");
        let cz = Zipf::new(self.config.content_words as f64, self.config.exponent).expect("valid zipf");
        (0..n_words)
            .map(|_| {
                let id = if rng.random::<f64>() < self.config.function_rate {
                    functions[fz.sample(rng) as usize - 1]
                } else {
                    let pool = pools[rng.random_range(0..pools.len())];
                    pool[cz.sample(rng) as usize - 1]
                };
                self.lexicon[id].clone()
            })
            .collect()
    }
}

/// One corpus to write with [`write_workspace`].
#[derive(Debug, Clone)]
pub struct FixtureCorpus {
    pub corpus_id: String,
    pub register_label: String,
    pub language_code: String,
    pub words: Vec<String>,
}

/// Writes each corpus as `<corpus_id>.txt` (twenty words per line) under
/// `dir`, plus a `manifest.toml` listing them. Returns the manifest path.
pub fn write_workspace(dir: &Path, corpora: &[FixtureCorpus]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut manifest = String::new();
    for c in corpora {
        let file = format!("{}.txt", c.corpus_id);
        let path = dir.join(&file);
        let text: String = c.words.chunks(20).map(|line| line.join(" ") + "\n").collect();
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        let _ = write!(
            manifest,
            "[[corpus]]\ncorpus_id = {:?}\nregister_label = {:?}\nlanguage_code = {:?}\npaths = [{:?}]\n\n",
            c.corpus_id, c.register_label, c.language_code, file
        );
    }
    let path = dir.join("manifest.toml");
    fs::write(&path, manifest).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn make_lexicon(n: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut seen = HashSet::with_capacity(n);
    let mut words = Vec::with_capacity(n);
    while words.len() < n {
        // short words first so function words stay short
        let syllables = 1 + words.len() * 3 / n.max(1) + rng.random_range(0..2);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
            w.push_str(VOWELS[rng.random_range(0..VOWELS.len())]);
            w.push_str(CODAS[rng.random_range(0..CODAS.len())]);
        }
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}
