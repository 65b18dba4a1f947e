//! Run configuration: a flat `key = value` file whose entries command-line
//! flags override.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::corpus::{DEFAULT_PAIRS, DEFAULT_SAMPLE_SIZE};
use crate::features::{FeatureType, DEFAULT_K};
use crate::validation::DEFAULT_SAMPLES_PER_CORPUS;

pub const MIN_SAMPLE_SIZE: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub master_seed: u64,
    pub sample_size: usize,
    pub k: usize,
    pub n_pairs: usize,
    pub feature_types: Vec<FeatureType>,
    pub out_dir: PathBuf,
    pub no_plots: bool,
    pub pool_background: bool,
    pub language: Option<String>,
    pub samples_per_corpus: usize,
}

/// Partially specified configuration, from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub manifest: Option<PathBuf>,
    pub seed: Option<u64>,
    pub sample_size: Option<usize>,
    pub k: Option<usize>,
    pub pairs: Option<usize>,
    pub types: Option<Vec<FeatureType>>,
    pub out: Option<PathBuf>,
    pub no_plots: Option<bool>,
    pub pool_background: Option<bool>,
    pub language: Option<String>,
    pub samples_per_corpus: Option<usize>,
}

pub fn parse_types(s: &str) -> Result<Vec<FeatureType>, String> {
    let types = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<FeatureType>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if types.is_empty() {
        return Err("no feature types given".into());
    }
    let mut unique = Vec::with_capacity(types.len());
    for t in types {
        if !unique.contains(&t) {
            unique.push(t);
        }
    }
    Ok(unique)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("`{s}` is not a boolean")),
    }
}

impl ConfigLayer {
    /// Parses `key = value` lines; `#` starts a comment. Keys accept `-` or `_`.
    /// Relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, String> {
        let mut layer = ConfigLayer::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim().trim_matches('"');
            let num = |v: &str| v.parse::<usize>().map_err(|e| format!("line {}: {key}: {e}", lineno + 1));
            match key.as_str() {
                "manifest" => layer.manifest = Some(base.join(value)),
                "seed" | "master_seed" => {
                    layer.seed = Some(value.parse().map_err(|e| format!("line {}: seed: {e}", lineno + 1))?)
                }
                "sample_size" => layer.sample_size = Some(num(value)?),
                "k" => layer.k = Some(num(value)?),
                "pairs" | "n_pairs" => layer.pairs = Some(num(value)?),
                "types" | "feature_types" => layer.types = Some(parse_types(value)?),
                "out" | "out_dir" => layer.out = Some(base.join(value)),
                "no_plots" => layer.no_plots = Some(parse_bool(value)?),
                "pool_background" => layer.pool_background = Some(parse_bool(value)?),
                "language" => layer.language = Some(value.to_owned()),
                "samples_per_corpus" => layer.samples_per_corpus = Some(num(value)?),
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }
        Ok(layer)
    }

    /// Entries of `over` replace entries of `self`.
    pub fn overridden_by(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            manifest: over.manifest.or(self.manifest),
            seed: over.seed.or(self.seed),
            sample_size: over.sample_size.or(self.sample_size),
            k: over.k.or(self.k),
            pairs: over.pairs.or(self.pairs),
            types: over.types.or(self.types),
            out: over.out.or(self.out),
            no_plots: over.no_plots.or(self.no_plots),
            pool_background: over.pool_background.or(self.pool_background),
            language: over.language.or(self.language),
            samples_per_corpus: over.samples_per_corpus.or(self.samples_per_corpus),
        }
    }

    /// Applies defaults and checks the run invariants.
    pub fn resolve(self) -> Result<RunConfig, String> {
        let manifest = self.manifest.ok_or("a manifest is required (--manifest)")?;
        let master_seed = self.seed.ok_or("a seed is required (--seed); there is no clock-based default")?;
        let config = RunConfig {
            manifest,
            master_seed,
            sample_size: self.sample_size.unwrap_or(DEFAULT_SAMPLE_SIZE),
            k: self.k.unwrap_or(DEFAULT_K),
            n_pairs: self.pairs.unwrap_or(DEFAULT_PAIRS),
            feature_types: self.types.unwrap_or_else(|| FeatureType::ALL.to_vec()),
            out_dir: self.out.unwrap_or_else(|| PathBuf::from("corpsim-out")),
            no_plots: self.no_plots.unwrap_or(false),
            pool_background: self.pool_background.unwrap_or(false),
            language: self.language,
            samples_per_corpus: self.samples_per_corpus.unwrap_or(DEFAULT_SAMPLES_PER_CORPUS),
        };
        if config.sample_size < MIN_SAMPLE_SIZE {
            return Err(format!("sample size must be at least {MIN_SAMPLE_SIZE}"));
        }
        if config.k < 1 {
            return Err("k must be at least 1".into());
        }
        if config.n_pairs < 1 {
            return Err("pairs must be at least 1".into());
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let text = "# run\nmanifest = corpora.toml\nseed = 42\nsample-size = 2000\ntypes = c4, w1\nno_plots = yes\n";
        let layer = ConfigLayer::parse(text, Path::new("/runs")).unwrap();
        assert_eq!(layer.manifest, Some(PathBuf::from("/runs/corpora.toml")));
        assert_eq!(layer.seed, Some(42));
        assert_eq!(layer.sample_size, Some(2000));
        assert_eq!(layer.types, Some(vec![FeatureType::C4, FeatureType::W1]));
        assert_eq!(layer.no_plots, Some(true));
        assert!(ConfigLayer::parse("bogus = 1", Path::new("")).is_err());
        assert!(ConfigLayer::parse("seed", Path::new("")).is_err());
        assert!(ConfigLayer::parse("types = c9", Path::new("")).is_err());
    }

    #[test]
    fn flags_win_and_defaults_apply() {
        let file = ConfigLayer {
            manifest: Some("m".into()),
            seed: Some(1),
            k: Some(100),
            ..Default::default()
        };
        let flags = ConfigLayer {
            seed: Some(9),
            ..Default::default()
        };
        let cfg = file.overridden_by(flags).resolve().unwrap();
        assert_eq!(cfg.master_seed, 9);
        assert_eq!(cfg.k, 100);
        assert_eq!(cfg.sample_size, DEFAULT_SAMPLE_SIZE);
        assert_eq!(cfg.n_pairs, DEFAULT_PAIRS);
        assert_eq!(cfg.feature_types.len(), 5);
    }

    #[test]
    fn invariants_enforced() {
        let base = ConfigLayer {
            manifest: Some("m".into()),
            seed: Some(1),
            ..Default::default()
        };
        assert!(ConfigLayer { seed: None, ..base.clone() }.resolve().unwrap_err().contains("seed"));
        assert!(ConfigLayer { sample_size: Some(99), ..base.clone() }.resolve().is_err());
        assert!(ConfigLayer { k: Some(0), ..base.clone() }.resolve().is_err());
        assert!(ConfigLayer { pairs: Some(0), ..base.clone() }.resolve().is_err());
        assert!(base.resolve().is_ok());
    }

    #[test]
    fn type_lists() {
        assert_eq!(parse_types("C4,c4, W2").unwrap(), vec![FeatureType::C4, FeatureType::W2]);
        assert!(parse_types(" , ").is_err());
    }
}
