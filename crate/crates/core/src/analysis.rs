//! Homogeneity, register profiles, pairwise similarity matrices and Ward
//! clustering.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::corpus::{build_pair_set, draw_indices, sample_subcorpus, PairFilter, PairSet, TokenStream, PAIR_DRAW_BUDGET};
use crate::error::{Error, Result};
use crate::features::FeatureSpace;
use crate::similarity::{score_pair_sets, standardize, BenchmarkDistribution, SamplingParams, SimilarityScore};

/// Central credible mass of the homogeneity interval.
pub const CREDIBLE_LEVEL: f64 = 0.90;
/// Pairs more than this many standard deviations below the mean are outliers.
pub const OUTLIER_SDS: f64 = 3.0;

/// Posterior summary of a mean under a Gaussian model with unknown variance
/// and the Jeffreys prior: the posterior of the mean is Student-t with n - 1
/// degrees of freedom, centered on the sample mean with scale s / sqrt(n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPosterior {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
    pub low: f64,
    pub high: f64,
}

pub fn mean_posterior(values: &[f64], level: f64) -> Result<MeanPosterior> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a credible interval needs at least 2 values, got {n}"
        )));
    }
    if !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidParameter(format!("credible level {level} outside (0, 1)")));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let std = var.sqrt();
    let t = StudentsT::new(0.0, 1.0, nf - 1.0).expect("n - 1 > 0 degrees of freedom");
    let half = t.inverse_cdf(0.5 + level / 2.0) * std / nf.sqrt();
    Ok(MeanPosterior {
        mean,
        std,
        low: mean - half,
        high: mean + half,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outlier {
    pub sample_indices: (usize, usize),
    pub z: f64,
}

/// Self-similarity summary of one corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityReport {
    pub corpus_id: String,
    pub mean_z: f64,
    /// Sample standard deviation of the pair z-scores.
    pub std_z: f64,
    pub bayes_mean: f64,
    pub interval_90: (f64, f64),
    pub n_pairs: usize,
    pub outliers: Vec<Outlier>,
}

impl HomogeneityReport {
    /// Summarizes standardized pair scores of one corpus.
    pub fn from_scores(corpus_id: impl Into<String>, scores: &[SimilarityScore]) -> Result<Self> {
        let zs: Vec<f64> = scores
            .iter()
            .map(|s| s.z.ok_or_else(|| Error::Invariant("unstandardized score".into())))
            .collect::<Result<_>>()?;
        let post = mean_posterior(&zs, CREDIBLE_LEVEL)?;
        let cutoff = post.mean - OUTLIER_SDS * post.std;
        let outliers = scores
            .iter()
            .zip(&zs)
            .filter(|(_, &z)| z < cutoff)
            .map(|(s, &z)| Outlier {
                sample_indices: s.sample_indices,
                z,
            })
            .collect();
        Ok(Self {
            corpus_id: corpus_id.into(),
            mean_z: post.mean,
            std_z: post.std,
            bayes_mean: post.mean,
            interval_90: (post.low, post.high),
            n_pairs: zs.len(),
            outliers,
        })
    }
}

fn standardize_all(scores: &mut [SimilarityScore], bench: &BenchmarkDistribution) -> Result<()> {
    for s in scores {
        s.z = Some(standardize(s.rho, bench)?);
    }
    Ok(())
}

/// Standardized self-similarity of `corpus` over `params.n_pairs` same-corpus pairs.
/// Returns the report and the standardized pair scores.
pub fn homogeneity(
    corpus: &TokenStream,
    bench: &BenchmarkDistribution,
    space: &FeatureSpace,
    params: SamplingParams,
) -> Result<(HomogeneityReport, Vec<SimilarityScore>)> {
    if params.n_pairs < 2 {
        return Err(Error::InvalidParameter("homogeneity needs at least 2 pairs".into()));
    }
    let set = build_pair_set(corpus, corpus, params.n_pairs, params.sample_size, params.seed)?;
    let mut scores = score_pair_sets(&[set], space)?.pop().unwrap_or_default();
    standardize_all(&mut scores, bench)?;
    Ok((HomogeneityReport::from_scores(corpus.corpus_id(), &scores)?, scores))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub source_corpus_id: String,
    pub sample_index: usize,
    pub z_to_tw: f64,
    pub z_to_wk: f64,
}

/// Per-sample standardized similarity to the two reference registers.
/// Coordinates are similarity-oriented: higher means closer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegisterProfile {
    pub points: Vec<ProfilePoint>,
}

/// Profiles `params.n_pairs` samples from each of TW, WK and `extras`.
///
/// Each sample is paired with a fresh TW sample and a fresh WK sample. Sample
/// indices follow the same-corpus pair schedule, so the TW points of a profile
/// reuse exactly the pairs that [`homogeneity`] builds for TW at the same seed.
pub fn profile(
    tw: &TokenStream,
    wk: &TokenStream,
    extras: &[TokenStream],
    bench: &BenchmarkDistribution,
    space: &FeatureSpace,
    params: SamplingParams,
) -> Result<RegisterProfile> {
    let SamplingParams {
        sample_size,
        n_pairs: n_samples,
        seed,
    } = params;
    if n_samples == 0 {
        return Err(Error::InvalidParameter("profile needs at least 1 sample".into()));
    }
    let sources: Vec<&TokenStream> = [tw, wk].into_iter().chain(extras).collect();
    let mut sets = Vec::with_capacity(sources.len() * 2);
    for src in &sources {
        let mut to_tw = PairSet {
            condition: (src.corpus_id().to_owned(), tw.corpus_id().to_owned()),
            pairs: Vec::with_capacity(n_samples),
        };
        let mut to_wk = PairSet {
            condition: (src.corpus_id().to_owned(), wk.corpus_id().to_owned()),
            pairs: Vec::with_capacity(n_samples),
        };
        let mut filter = PairFilter::default();
        let budget = PAIR_DRAW_BUDGET * n_samples;
        let mut draws = 0;
        while to_tw.pairs.len() < n_samples && draws < budget {
            let (i_src, i_ref) = draw_indices(draws);
            draws += 1;
            let s = sample_subcorpus(src, i_src, sample_size, seed)?;
            let rt = sample_subcorpus(tw, i_ref, sample_size, seed)?;
            let rw = sample_subcorpus(wk, i_ref, sample_size, seed)?;
            let accepted = if src.corpus_id() == tw.corpus_id() {
                filter.accept(&s, &rt)
            } else if src.corpus_id() == wk.corpus_id() {
                filter.accept(&s, &rw)
            } else {
                true
            };
            if accepted {
                to_tw.pairs.push((s.clone(), rt));
                to_wk.pairs.push((s, rw));
            }
        }
        if to_tw.pairs.len() < n_samples {
            return Err(Error::PairingExhausted {
                corpus_a: src.corpus_id().to_owned(),
                corpus_b: format!("{}/{}", tw.corpus_id(), wk.corpus_id()),
                requested: n_samples,
                formed: to_tw.pairs.len(),
                draws,
            });
        }
        sets.push(to_tw);
        sets.push(to_wk);
    }
    let scored = score_pair_sets(&sets, space)?;
    let mut points = Vec::with_capacity(sources.len() * n_samples);
    for (src, chunk) in sources.iter().zip(scored.chunks(2)) {
        for (a, b) in chunk[0].iter().zip(&chunk[1]) {
            points.push(ProfilePoint {
                source_corpus_id: src.corpus_id().to_owned(),
                sample_index: a.sample_indices.0,
                z_to_tw: standardize(a.rho, bench)?,
                z_to_wk: standardize(b.rho, bench)?,
            });
        }
    }
    Ok(RegisterProfile { points })
}

/// Symmetric matrix of mean pairwise similarity between corpora.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn new(ids: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        let n = ids.len();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(format!("similarity matrix must be {n}x{n}")));
        }
        for (i, row) in values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != values[j][i] {
                    return Err(Error::InvalidParameter(format!("matrix not symmetric at ({i}, {j})")));
                }
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParameter(format!("entry ({i}, {j}) = {v} outside [-1, 1]")));
                }
            }
        }
        Ok(Self { ids, values })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Mean rho over a pair set for every corpus pair; the diagonal is self-similarity.
pub fn similarity_matrix(corpora: &[TokenStream], space: &FeatureSpace, params: SamplingParams) -> Result<SimilarityMatrix> {
    if corpora.len() < 2 {
        return Err(Error::InvalidParameter("similarity matrix needs at least 2 corpora".into()));
    }
    let n = corpora.len();
    let mut cells = Vec::new();
    let mut sets = Vec::new();
    for i in 0..n {
        for j in i..n {
            cells.push((i, j));
            sets.push(build_pair_set(&corpora[i], &corpora[j], params.n_pairs, params.sample_size, params.seed)?);
        }
    }
    let scored = score_pair_sets(&sets, space)?;
    let mut values = vec![vec![0.0; n]; n];
    for ((i, j), scores) in cells.into_iter().zip(scored) {
        let mean = scores.iter().map(|s| s.rho).sum::<f64>() / scores.len() as f64;
        values[i][j] = mean;
        values[j][i] = mean;
    }
    SimilarityMatrix::new(corpora.iter().map(|c| c.corpus_id().to_owned()).collect(), values)
}

/// One agglomeration step. Leaves are nodes `0..n`; step `s` creates node `n + s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub node_a: usize,
    pub node_b: usize,
    pub height: f64,
    pub merged_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
    pub matrix: Vec<Vec<f64>>,
}

impl Dendrogram {
    /// Merge steps whose height is below the previous step's.
    pub fn inversions(&self) -> Vec<usize> {
        self.merges
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].height < w[0].height)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_monotonic(&self) -> bool {
        self.inversions().is_empty()
    }

    /// Leaf indices under `node`.
    pub fn members(&self, node: usize) -> Vec<usize> {
        let n = self.leaves.len();
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if x < n {
                out.push(x);
            } else {
                let m = &self.merges[x - n];
                stack.push(m.node_b);
                stack.push(m.node_a);
            }
        }
        out
    }

    /// Leaves in dendrogram drawing order.
    pub fn leaf_order(&self) -> Vec<usize> {
        match self.merges.len() {
            0 => (0..self.leaves.len()).collect(),
            m => self.members(self.leaves.len() + m - 1),
        }
    }

    /// The two leaf groups separated by the final merge.
    pub fn top_split(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let last = self.merges.last()?;
        let mut a = self.members(last.node_a);
        let mut b = self.members(last.node_b);
        a.sort_unstable();
        b.sort_unstable();
        Some((a, b))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dendrogram serializes")
    }
}

/// Ward clustering of a similarity matrix using distance `1 - rho`.
pub fn ward_cluster(matrix: &SimilarityMatrix) -> Dendrogram {
    let distances: Vec<Vec<f64>> = matrix
        .values
        .iter()
        .map(|row| row.iter().map(|r| 1.0 - r).collect())
        .collect();
    Dendrogram {
        leaves: matrix.ids.clone(),
        merges: ward_linkage(&distances),
        matrix: matrix.values.clone(),
    }
}

/// Agglomerative Ward linkage over a symmetric dissimilarity matrix with the
/// Lance-Williams update. The diagonal is ignored. Ties merge the pair with the
/// smallest node ids.
pub fn ward_linkage(distances: &[Vec<f64>]) -> Vec<Merge> {
    let n = distances.len();
    if n < 2 {
        return Vec::new();
    }
    let mut d: Vec<Vec<f64>> = distances.to_vec();
    // active slot -> (node id, size)
    let mut active: Vec<Option<(usize, usize)>> = (0..n).map(|i| Some((i, 1))).collect();
    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut best: Option<(f64, usize, usize, (usize, usize))> = None;
        for i in 0..n {
            let Some((ni, _)) = active[i] else { continue };
            for j in i + 1..n {
                let Some((nj, _)) = active[j] else { continue };
                let key = (ni.min(nj), ni.max(nj));
                let better = match best {
                    None => true,
                    Some((bd, _, _, bk)) => d[i][j] < bd || (d[i][j] == bd && key < bk),
                };
                if better {
                    best = Some((d[i][j], i, j, key));
                }
            }
        }
        let (height, i, j, (node_a, node_b)) = best.expect("at least two active clusters");
        let (_, si) = active[i].unwrap();
        let (_, sj) = active[j].unwrap();
        let dij = d[i][j];
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            let Some((_, sk)) = active[k] else { continue };
            let (si, sj, sk) = (si as f64, sj as f64, sk as f64);
            let updated = ((si + sk) * d[k][i] + (sj + sk) * d[k][j] - sk * dij) / (si + sj + sk);
            d[i][k] = updated;
            d[k][i] = updated;
        }
        active[i] = Some((n + step, si + sj));
        active[j] = None;
        merges.push(Merge {
            node_a,
            node_b,
            height,
            merged_size: si + sj,
        });
    }
    merges
}
