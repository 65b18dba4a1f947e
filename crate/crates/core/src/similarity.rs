//! Spearman rank correlation between frequency vectors and per-language
//! z-score standardization.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{build_pair_set, PairSet, SubCorpus, TokenStream};
use crate::error::{Error, Result};
use crate::features::{vectorize, FeatureSpace, FrequencyVector, SpaceId};

/// Benchmarks whose standard deviation does not exceed this cannot standardize.
pub const STD_EPSILON: f64 = 1e-9;

/// Condition labels of the benchmark, same-register conditions first.
pub const SAME_CONDITIONS: [&str; 3] = ["TW-TW", "WK-WK", "CC-CC"];
pub const CROSS_CONDITIONS: [&str; 3] = ["TW-WK", "CC-WK", "CC-TW"];

/// Average (fractional) 1-based ranks; tied values share the mean of their positions.
pub fn average_ranks<T: PartialOrd + Copy>(values: &[T]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("comparable values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j hold one tie group, 1-based ranks i+1..=j
        let rank = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        i = j;
    }
    ranks
}

/// A frequency vector reduced to centered ranks, ready for repeated correlation.
#[derive(Debug, Clone)]
pub struct RankedVector {
    space_id: SpaceId,
    centered: Vec<f64>,
    sum_sq: f64,
}

impl RankedVector {
    pub fn new(v: &FrequencyVector) -> Result<Self> {
        let ranks = average_ranks(v.counts());
        let mean = (ranks.len() as f64 + 1.0) / 2.0;
        let centered: Vec<f64> = ranks.into_iter().map(|r| r - mean).collect();
        let sum_sq: f64 = centered.iter().map(|c| c * c).sum();
        if sum_sq <= 0.0 {
            return Err(Error::DegenerateVector);
        }
        Ok(Self {
            space_id: v.space_id(),
            centered,
            sum_sq,
        })
    }

    /// Pearson correlation of the two rank sequences.
    pub fn rho(&self, other: &RankedVector) -> Result<f64> {
        if self.space_id != other.space_id || self.centered.len() != other.centered.len() {
            return Err(Error::SpaceMismatch);
        }
        let dot: f64 = self
            .centered
            .iter()
            .zip(&other.centered)
            .map(|(a, b)| a * b)
            .sum();
        Ok((dot / (self.sum_sq * other.sum_sq).sqrt()).clamp(-1.0, 1.0))
    }
}

/// Spearman's rho with average ranks for ties.
pub fn spearman_rho(v1: &FrequencyVector, v2: &FrequencyVector) -> Result<f64> {
    if v1.space_id() != v2.space_id() || v1.counts().len() != v2.counts().len() {
        return Err(Error::SpaceMismatch);
    }
    RankedVector::new(v1)?.rho(&RankedVector::new(v2)?)
}

/// Similarity of one pair of sub-corpora.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityScore {
    pub rho: f64,
    pub z: Option<f64>,
    pub condition: (String, String),
    pub sample_indices: (usize, usize),
}

/// Vectorizes every distinct sub-corpus of `sets` once and scores all pairs.
/// Output is aligned with the input sets and their pair order.
pub fn score_pair_sets(sets: &[PairSet], space: &FeatureSpace) -> Result<Vec<Vec<SimilarityScore>>> {
    let mut unique: BTreeMap<(&str, usize), &SubCorpus> = BTreeMap::new();
    for set in sets {
        for (a, b) in &set.pairs {
            unique.entry((a.corpus_id(), a.start())).or_insert(a);
            unique.entry((b.corpus_id(), b.start())).or_insert(b);
        }
    }
    let ranked: Vec<((&str, usize), RankedVector)> = unique
        .into_par_iter()
        .map(|(key, sub)| Ok((key, RankedVector::new(&vectorize(sub, space))?)))
        .collect::<Result<_>>()?;
    let ranked: HashMap<(&str, usize), RankedVector> = ranked.into_iter().collect();

    sets.iter()
        .map(|set| {
            set.pairs
                .par_iter()
                .map(|(a, b)| {
                    let ra = &ranked[&(a.corpus_id(), a.start())];
                    let rb = &ranked[&(b.corpus_id(), b.start())];
                    Ok(SimilarityScore {
                        rho: ra.rho(rb)?,
                        z: None,
                        condition: set.condition.clone(),
                        sample_indices: (a.sample_index(), b.sample_index()),
                    })
                })
                .collect()
        })
        .collect()
}

/// Per-language reference population of raw similarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkDistribution {
    pub language_code: String,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub n: usize,
    pub per_condition_means: BTreeMap<String, f64>,
}

impl BenchmarkDistribution {
    /// Pools the scores of all conditions into one distribution.
    pub fn from_conditions(language_code: impl Into<String>, conditions: &[(String, Vec<f64>)]) -> Result<Self> {
        let all: Vec<f64> = conditions.iter().flat_map(|(_, v)| v.iter().copied()).collect();
        if all.is_empty() {
            return Err(Error::InvalidParameter("benchmark has no scores".into()));
        }
        let (mean, std) = mean_and_population_std(&all);
        let per_condition_means = conditions
            .iter()
            .map(|(label, v)| (label.clone(), mean_and_population_std(v).0))
            .collect();
        Ok(Self {
            language_code: language_code.into(),
            mean,
            std,
            n: all.len(),
            per_condition_means,
        })
    }

    pub fn same_condition_means(&self) -> [f64; 3] {
        SAME_CONDITIONS.map(|c| self.per_condition_means.get(c).copied().unwrap_or(f64::NAN))
    }

    pub fn cross_condition_means(&self) -> [f64; 3] {
        CROSS_CONDITIONS.map(|c| self.per_condition_means.get(c).copied().unwrap_or(f64::NAN))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("benchmark serializes")
    }
}

pub(crate) fn mean_and_population_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Sampling parameters shared by every pair-based computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplingParams {
    pub sample_size: usize,
    pub n_pairs: usize,
    pub seed: u64,
}

/// A benchmark distribution together with the scores it was built from.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub distribution: BenchmarkDistribution,
    /// Scores grouped by condition, in benchmark condition order.
    pub scores: Vec<(String, Vec<SimilarityScore>)>,
}

/// Builds the six-condition benchmark from three register corpora.
pub fn build_benchmark(
    language_code: &str,
    tw: &TokenStream,
    wk: &TokenStream,
    cc: &TokenStream,
    space: &FeatureSpace,
    params: SamplingParams,
) -> Result<Benchmark> {
    let conditions: [(&str, &TokenStream, &TokenStream); 6] = [
        (SAME_CONDITIONS[0], tw, tw),
        (SAME_CONDITIONS[1], wk, wk),
        (SAME_CONDITIONS[2], cc, cc),
        (CROSS_CONDITIONS[0], tw, wk),
        (CROSS_CONDITIONS[1], cc, wk),
        (CROSS_CONDITIONS[2], cc, tw),
    ];
    let sets = conditions
        .iter()
        .map(|(_, a, b)| build_pair_set(a, b, params.n_pairs, params.sample_size, params.seed))
        .collect::<Result<Vec<_>>>()?;
    let scored = score_pair_sets(&sets, space)?;
    let raw: Vec<(String, Vec<f64>)> = conditions
        .iter()
        .zip(&scored)
        .map(|((label, _, _), s)| (label.to_string(), s.iter().map(|x| x.rho).collect()))
        .collect();
    let distribution = BenchmarkDistribution::from_conditions(language_code, &raw)?;
    let scores = conditions
        .iter()
        .zip(scored)
        .map(|((label, _, _), s)| (label.to_string(), s))
        .collect();
    Ok(Benchmark {
        distribution,
        scores,
    })
}

/// `(rho - mean) / std` under the benchmark.
pub fn standardize(rho: f64, bench: &BenchmarkDistribution) -> Result<f64> {
    if bench.std.is_nan() || bench.std <= STD_EPSILON {
        return Err(Error::DegenerateBenchmark {
            std: bench.std,
            epsilon: STD_EPSILON,
        });
    }
    Ok((rho - bench.mean) / bench.std)
}
