//! Same-versus-different corpus prediction with a midpoint threshold,
//! five-fold cross-validation and best feature type selection.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{sample_subcorpus, SeedRecord, TokenStream};
use crate::error::{Error, Result};
use crate::features::{select_features, vectorize, FeatureType, DEFAULT_K};
use crate::similarity::{RankedVector, CROSS_CONDITIONS, SAME_CONDITIONS};

pub const DEFAULT_FOLDS: usize = 5;
pub const DEFAULT_SAMPLES_PER_CORPUS: usize = 50;

/// Decision threshold between same-corpus and cross-corpus similarity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub value: f64,
    pub fold_id: usize,
    pub same_condition_means: BTreeMap<String, f64>,
    pub cross_condition_means: BTreeMap<String, f64>,
}

impl Threshold {
    /// Re-derives the threshold from the stored condition means.
    pub fn recompute(&self) -> f64 {
        midpoint(
            self.same_condition_means.values().copied(),
            self.cross_condition_means.values().copied(),
        )
    }
}

fn midpoint(same: impl Iterator<Item = f64>, cross: impl Iterator<Item = f64>) -> f64 {
    let lowest_same = same.fold(f64::INFINITY, f64::min);
    let highest_cross = cross.fold(f64::NEG_INFINITY, f64::max);
    0.5 * (lowest_same + highest_cross)
}

/// Halfway between the lowest same-register mean and the highest cross-register mean.
pub fn compute_threshold(same_means: [f64; 3], cross_means: [f64; 3]) -> Threshold {
    let label = |labels: [&str; 3], v: [f64; 3]| {
        labels
            .iter()
            .zip(v)
            .map(|(l, x)| (l.to_string(), x))
            .collect::<BTreeMap<_, _>>()
    };
    Threshold {
        value: midpoint(same_means.into_iter(), cross_means.into_iter()),
        fold_id: 0,
        same_condition_means: label(SAME_CONDITIONS, same_means),
        cross_condition_means: label(CROSS_CONDITIONS, cross_means),
    }
}

/// Predicts "same corpus" only when `rho` is strictly above the threshold.
pub fn predict_same(rho: f64, t: &Threshold) -> bool {
    rho > t.value
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationParams {
    pub sample_size: usize,
    pub k: usize,
    pub samples_per_corpus: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for ValidationParams {
    fn default() -> Self {
        Self {
            sample_size: crate::corpus::DEFAULT_SAMPLE_SIZE,
            k: DEFAULT_K,
            samples_per_corpus: DEFAULT_SAMPLES_PER_CORPUS,
            folds: DEFAULT_FOLDS,
            seed: 0,
        }
    }
}

/// One test-pair prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub fold: usize,
    pub condition: String,
    pub sample_indices: (usize, usize),
    pub rho: f64,
    pub predicted_same: bool,
    pub actual_same: bool,
}

impl Prediction {
    pub fn correct(&self) -> bool {
        self.predicted_same == self.actual_same
    }
}

#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub feature_type: FeatureType,
    pub fold_accuracies: Vec<f64>,
    pub thresholds: Vec<Threshold>,
    /// Ordered by fold, then condition, then pair.
    pub predictions: Vec<Prediction>,
}

impl CrossValidation {
    pub fn mean_accuracy(&self) -> f64 {
        self.fold_accuracies.iter().sum::<f64>() / self.fold_accuracies.len() as f64
    }
}

/// Sub-corpus pool of three corpora with precomputed pairwise similarities.
struct FoldPlan {
    /// Per corpus, fold id of each sample.
    fold_of: [Vec<usize>; 3],
    /// rho[c1][c2][i][j] between sample i of corpus c1 and sample j of corpus c2.
    rho: BTreeMap<(usize, usize), Vec<Vec<f64>>>,
}

/// Corpus index pairs of the six conditions, in label order.
const CONDITION_CORPORA: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (2, 1), (2, 0)];

fn condition_label(i: usize) -> &'static str {
    if i < 3 {
        SAME_CONDITIONS[i]
    } else {
        CROSS_CONDITIONS[i - 3]
    }
}

impl FoldPlan {
    fn pairs(&self, cond: usize, keep: impl Fn(usize) -> bool) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let (a, b) = CONDITION_CORPORA[cond];
        let fa = &self.fold_of[a];
        let fb = &self.fold_of[b];
        let m = &self.rho[&(a, b)];
        let mut out = Vec::new();
        for i in 0..fa.len() {
            if !keep(fa[i]) {
                continue;
            }
            let j_start = if a == b { i + 1 } else { 0 };
            for j in j_start..fb.len() {
                if keep(fb[j]) {
                    out.push((i, j, m[i][j]));
                }
            }
        }
        out.into_iter()
    }

    fn evaluate(&self, fold: usize) -> (f64, Threshold, Vec<Prediction>) {
        let mean = |cond: usize| {
            let (sum, n) = self
                .pairs(cond, |f| f != fold)
                .fold((0.0, 0usize), |(s, n), (_, _, r)| (s + r, n + 1));
            sum / n as f64
        };
        let means: Vec<f64> = (0..6).map(mean).collect();
        let mut threshold = compute_threshold(
            [means[0], means[1], means[2]],
            [means[3], means[4], means[5]],
        );
        threshold.fold_id = fold;

        let mut predictions = Vec::new();
        for cond in 0..6 {
            for (i, j, rho) in self.pairs(cond, |f| f == fold) {
                predictions.push(Prediction {
                    fold,
                    condition: condition_label(cond).to_owned(),
                    sample_indices: (i, j),
                    rho,
                    predicted_same: predict_same(rho, &threshold),
                    actual_same: cond < 3,
                });
            }
        }
        let correct = predictions.iter().filter(|p| p.correct()).count();
        (correct as f64 / predictions.len() as f64, threshold, predictions)
    }
}

fn build_plan(
    corpora: [&TokenStream; 3],
    feature_type: FeatureType,
    background: &TokenStream,
    params: &ValidationParams,
) -> Result<FoldPlan> {
    let m = params.samples_per_corpus;
    let short = corpora.iter().any(|c| c.word_count() < params.sample_size);
    if params.folds < 2 || m < params.folds || short {
        let details = corpora
            .iter()
            .map(|c| format!("{} has {} words", c.corpus_id(), c.word_count()))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::FoldConstruction {
            needed: params.folds,
            details: format!(
                "{details}; sample size {} words, {m} samples per corpus, {} folds",
                params.sample_size, params.folds
            ),
        });
    }
    let space = select_features(background, feature_type, params.k);

    let ranked: Vec<Vec<RankedVector>> = corpora
        .iter()
        .map(|c| {
            (0..m)
                .into_par_iter()
                .map(|i| {
                    let sub = sample_subcorpus(c, i, params.sample_size, params.seed)?;
                    RankedVector::new(&vectorize(&sub, &space))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let fold_of = corpora.map(|c| {
        let mut order: Vec<usize> = (0..m).collect();
        let mut rng = SeedRecord {
            master_seed: params.seed,
            corpus_id: format!("{}#folds", c.corpus_id()),
            sample_index: 0,
        }
        .rng();
        order.shuffle(&mut rng);
        let mut fold_of = vec![0; m];
        for (pos, &sample) in order.iter().enumerate() {
            fold_of[sample] = pos % params.folds;
        }
        fold_of
    });

    let mut rho = BTreeMap::new();
    for &(a, b) in &CONDITION_CORPORA {
        let matrix = ranked[a]
            .par_iter()
            .map(|x| ranked[b].iter().map(|y| x.rho(y)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        rho.insert((a, b), matrix);
    }
    Ok(FoldPlan { fold_of, rho })
}

/// Five-fold (by default) cross-validation of one feature type.
///
/// Each corpus contributes `samples_per_corpus` sub-corpora, partitioned into
/// disjoint folds. For each fold the threshold comes from condition means over
/// pairs of training sub-corpora, and every pair whose members both lie in the
/// test fold is predicted. Feature selection runs once on `background`.
pub fn cross_validate(
    tw: &TokenStream,
    wk: &TokenStream,
    cc: &TokenStream,
    background: &TokenStream,
    feature_type: FeatureType,
    params: &ValidationParams,
) -> Result<CrossValidation> {
    let plan = build_plan([tw, wk, cc], feature_type, background, params)?;
    let outcomes: Vec<_> = (0..params.folds).into_par_iter().map(|f| plan.evaluate(f)).collect();
    let mut cv = CrossValidation {
        feature_type,
        fold_accuracies: Vec::with_capacity(params.folds),
        thresholds: Vec::with_capacity(params.folds),
        predictions: Vec::new(),
    };
    for (acc, t, preds) in outcomes {
        cv.fold_accuracies.push(acc);
        cv.thresholds.push(t);
        cv.predictions.extend(preds);
    }
    Ok(cv)
}

fn preference(ft: FeatureType, accuracy: f64) -> (f64, bool, usize) {
    (accuracy, ft.is_character(), ft.n())
}

/// Highest mean accuracy; ties prefer character features, then larger n.
pub fn select_best_feature_type(accuracies: &BTreeMap<FeatureType, f64>) -> Option<FeatureType> {
    accuracies
        .iter()
        .max_by(|(fa, a), (fb, b)| {
            preference(**fa, **a)
                .partial_cmp(&preference(**fb, **b))
                .expect("accuracies are finite")
        })
        .map(|(ft, _)| *ft)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub language_code: String,
    pub per_feature_type: BTreeMap<FeatureType, f64>,
    pub best: FeatureType,
    pub fold_accuracies: BTreeMap<FeatureType, Vec<f64>>,
    pub tie_break_applied: bool,
}

impl ValidationReport {
    pub fn from_runs(language_code: impl Into<String>, runs: &[CrossValidation]) -> Result<Self> {
        let per_feature_type: BTreeMap<_, _> =
            runs.iter().map(|r| (r.feature_type, r.mean_accuracy())).collect();
        let best = select_best_feature_type(&per_feature_type)
            .ok_or_else(|| Error::InvalidParameter("no feature types to validate".into()))?;
        let top = per_feature_type[&best];
        let tie_break_applied = per_feature_type.values().filter(|&&a| a == top).count() > 1;
        Ok(Self {
            language_code: language_code.into(),
            fold_accuracies: runs
                .iter()
                .map(|r| (r.feature_type, r.fold_accuracies.clone()))
                .collect(),
            per_feature_type,
            best,
            tie_break_applied,
        })
    }

    pub fn best_accuracy(&self) -> f64 {
        self.per_feature_type[&self.best]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Cross-validates every requested feature type and picks the best.
pub fn validate_language(
    language_code: &str,
    tw: &TokenStream,
    wk: &TokenStream,
    cc: &TokenStream,
    background: &TokenStream,
    feature_types: &[FeatureType],
    params: &ValidationParams,
) -> Result<(ValidationReport, Vec<CrossValidation>)> {
    let runs = feature_types
        .iter()
        .map(|&ft| cross_validate(tw, wk, cc, background, ft, params))
        .collect::<Result<Vec<_>>>()?;
    Ok((ValidationReport::from_runs(language_code, &runs)?, runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{SyntheticConfig, SyntheticLanguage};

    #[test]
    fn threshold_examples() {
        let t = compute_threshold([0.80, 0.90, 0.85], [0.40, 0.50, 0.45]);
        assert_eq!(t.value, 0.5 * (0.80 + 0.50));
        assert!((t.value - 0.65).abs() < 1e-15);
        assert_eq!(compute_threshold([1.0; 3], [0.0; 3]).value, 0.5);
        let t = compute_threshold([0.5, 0.6, 0.7], [0.55, 0.65, 0.75]);
        assert_eq!(t.value, 0.5 * (0.5 + 0.75));
        assert_eq!(t.recompute().to_bits(), t.value.to_bits());
        assert_eq!(t.same_condition_means["CC-CC"], 0.7);
        assert_eq!(t.cross_condition_means["CC-TW"], 0.75);
    }

    #[test]
    fn prediction_tie_goes_to_different() {
        let mut t = compute_threshold([1.0; 3], [0.0; 3]);
        t.value = 0.65;
        assert!(predict_same(0.70, &t));
        assert!(!predict_same(0.60, &t));
        assert!(!predict_same(0.65, &t));
    }

    #[test]
    fn best_type_rules() {
        let m = |v: &[(FeatureType, f64)]| v.iter().copied().collect::<BTreeMap<_, _>>();
        use FeatureType as F;
        assert_eq!(
            select_best_feature_type(&m(&[(F::C2, 1.0), (F::C3, 1.0), (F::C4, 1.0), (F::W1, 1.0)])),
            Some(F::C4)
        );
        assert_eq!(select_best_feature_type(&m(&[(F::W1, 0.98), (F::C4, 0.97)])), Some(F::W1));
        assert_eq!(select_best_feature_type(&m(&[(F::W1, 0.90), (F::C4, 0.90)])), Some(F::C4));
        assert_eq!(select_best_feature_type(&m(&[(F::W1, 0.90), (F::W2, 0.90)])), Some(F::W2));
        assert_eq!(select_best_feature_type(&BTreeMap::new()), None);
    }

    fn fixture(separable: bool) -> [TokenStream; 4] {
        let lang = SyntheticLanguage::new(3, SyntheticConfig::default(), 11);
        let names = ["tw", "wk", "cc"];
        let regs: Vec<TokenStream> = (0..3)
            .map(|r| {
                let reg = if separable { r } else { 0 };
                let words = lang.register_words(reg, 12_000, 5);
                TokenStream::from_words(names[r], words).unwrap()
            })
            .collect();
        let bg = TokenStream::from_words("bg", lang.background_words(30_000, 9)).unwrap();
        [regs[0].clone(), regs[1].clone(), regs[2].clone(), bg]
    }

    fn small_params() -> ValidationParams {
        ValidationParams {
            sample_size: 1_000,
            k: 500,
            samples_per_corpus: 20,
            folds: 5,
            seed: 3,
        }
    }

    #[test]
    fn folds_cover_each_sample_once_and_order_is_irrelevant() {
        let [tw, wk, cc, bg] = fixture(true);
        let plan = build_plan([&tw, &wk, &cc], FeatureType::W1, &bg, &small_params()).unwrap();
        for folds in &plan.fold_of {
            for f in 0..5 {
                assert_eq!(folds.iter().filter(|&&x| x == f).count(), 4);
            }
        }
        let forward: Vec<f64> = (0..5).map(|f| plan.evaluate(f).0).collect();
        let mut backward: Vec<f64> = (0..5).rev().map(|f| plan.evaluate(f).0).collect();
        backward.reverse();
        assert_eq!(forward, backward);
    }

    #[test]
    fn separable_fixture_is_perfect() {
        let [tw, wk, cc, bg] = fixture(true);
        let cv = cross_validate(&tw, &wk, &cc, &bg, FeatureType::W1, &small_params()).unwrap();
        for t in &cv.thresholds {
            let min_same = t.same_condition_means.values().copied().fold(f64::INFINITY, f64::min);
            let max_cross = t.cross_condition_means.values().copied().fold(f64::NEG_INFINITY, f64::max);
            assert!(min_same > max_cross);
        }
        assert_eq!(cv.fold_accuracies, vec![1.0; 5]);
        // per fold: 3 * C(4,2) same pairs + 3 * 16 cross pairs
        assert_eq!(cv.predictions.len(), 5 * (18 + 48));
    }

    #[test]
    fn identical_corpora_accuracy_matches_prediction_log() {
        let [tw, wk, cc, bg] = fixture(false);
        let cv = cross_validate(&tw, &wk, &cc, &bg, FeatureType::W1, &small_params()).unwrap();
        for fold in 0..5 {
            let log: Vec<_> = cv.predictions.iter().filter(|p| p.fold == fold).collect();
            let tp = log.iter().filter(|p| p.predicted_same && p.actual_same).count();
            let tn = log.iter().filter(|p| !p.predicted_same && !p.actual_same).count();
            let expected = (tp + tn) as f64 / log.len() as f64;
            assert_eq!(cv.fold_accuracies[fold], expected);
        }
        // indistinguishable sources cannot be separated well
        assert!(cv.mean_accuracy() < 0.9);
    }

    #[test]
    fn too_few_samples_is_a_fold_error() {
        let [tw, wk, cc, bg] = fixture(true);
        let params = ValidationParams {
            samples_per_corpus: 4,
            ..small_params()
        };
        assert!(matches!(
            cross_validate(&tw, &wk, &cc, &bg, FeatureType::W1, &params),
            Err(Error::FoldConstruction { .. })
        ));
        let params = ValidationParams {
            sample_size: 50_000,
            ..small_params()
        };
        match cross_validate(&tw, &wk, &cc, &bg, FeatureType::W1, &params) {
            Err(Error::FoldConstruction { details, .. }) => assert!(details.contains("12000 words")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_marks_ties() {
        let run = |ft, accs: Vec<f64>| CrossValidation {
            feature_type: ft,
            fold_accuracies: accs,
            thresholds: vec![],
            predictions: vec![],
        };
        let r = ValidationReport::from_runs(
            "amh",
            &[run(FeatureType::W1, vec![1.0; 5]), run(FeatureType::C3, vec![1.0; 5])],
        )
        .unwrap();
        assert_eq!(r.best, FeatureType::C3);
        assert!(r.tie_break_applied);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["best"], "C3");
        assert_eq!(json["per_feature_type"]["W1"], 1.0);
    }
}
