//! The `corpsim` batch command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
//! violation.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{homogeneity, profile, similarity_matrix, ward_cluster, Dendrogram, HomogeneityReport};
use crate::config::{parse_types, ConfigLayer, RunConfig};
use crate::corpus::{load_corpus, read_manifest, CorpusManifest, TokenStream};
use crate::error::Error;
use crate::features::{select_features, FeatureSpace, FeatureType};
use crate::normalize::{NormalizationInfo, NORMALIZATION};
use crate::plot;
use crate::report;
use crate::similarity::{build_benchmark, BenchmarkDistribution, SamplingParams};
use crate::validation::{validate_language, ValidationParams, DEFAULT_FOLDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const RUN_RECORD: &str = "run_record.json";

#[derive(Debug, Parser)]
#[command(name = "corpsim", version, about = "Corpus similarity and register-variation analysis", args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
enum Command {
    /// Select top-k feature spaces from the background corpus.
    Features,
    /// Build the six-condition z-score benchmark.
    Benchmark,
    /// Five-fold threshold validation of every feature type.
    Validate,
    /// Homogeneity (self-similarity) of every corpus.
    Homogeneity,
    /// Register profile of every sample against TW and WK.
    Profile,
    /// Pairwise similarity matrix and Ward dendrogram.
    Cluster,
    /// Benchmark, homogeneity, profile and cluster in one run.
    Analyze,
    /// Re-render SVG plots from CSV/JSON outputs.
    Plot {
        /// Directory holding earlier outputs (defaults to --out).
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct SharedArgs {
    /// Flat key = value run configuration; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    sample_size: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    pairs: Option<usize>,
    /// Comma-separated feature types, e.g. `c4,w1`.
    #[arg(long, global = true, alias = "type", value_parser = parse_type_list)]
    types: Option<TypeList>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    no_plots: bool,
    /// Select features from all corpora of the language when no background corpus exists.
    #[arg(long, global = true)]
    pool_background: bool,
    /// Language to analyze when the manifest holds several.
    #[arg(long, global = true)]
    language: Option<String>,
    /// Sub-corpora drawn per corpus for validation.
    #[arg(long, global = true)]
    samples_per_corpus: Option<usize>,
}

#[derive(Debug, Clone)]
struct TypeList(Vec<FeatureType>);

fn parse_type_list(s: &str) -> Result<TypeList, String> {
    parse_types(s).map(TypeList)
}

impl SharedArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            manifest: self.manifest.clone(),
            seed: self.seed,
            sample_size: self.sample_size,
            k: self.k,
            pairs: self.pairs,
            types: self.types.clone().map(|t| t.0),
            out: self.out.clone(),
            no_plots: self.no_plots.then_some(true),
            pool_background: self.pool_background.then_some(true),
            language: self.language.clone(),
            samples_per_corpus: self.samples_per_corpus,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(Error::Invariant(_) | Error::SpaceMismatch) => EXIT_INTERNAL,
            CliError::Run(Error::InvalidParameter(_) | Error::UnknownFeatureType(_)) => EXIT_USAGE,
            CliError::Run(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Run(e) => write!(f, "error: {e}"),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("corpsim: {e}");
            e.exit_code()
        }
    }
}

fn resolve_config(shared: &SharedArgs) -> Result<RunConfig, CliError> {
    let file_layer = match &shared.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Run(Error::io(path, e)))?;
            let base = path.parent().unwrap_or_else(|| Path::new(""));
            ConfigLayer::parse(&text, base).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))?
        }
        None => ConfigLayer::default(),
    };
    file_layer.overridden_by(shared.layer()).resolve().map_err(CliError::Usage)
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    if let Command::Plot { input } = &cli.command {
        let dir = input
            .clone()
            .or_else(|| cli.shared.out.clone())
            .ok_or_else(|| CliError::Usage("plot needs --input or --out".into()))?;
        return replot(&dir);
    }
    let config = resolve_config(&cli.shared)?;
    let started = Instant::now();
    let mut out = Emitter::new(&config.out_dir)?;
    let ws = out.timed("load corpora", || Workspace::load(&config))?;
    let name = match cli.command {
        Command::Features => {
            cmd_features(&ws, &config, &mut out)?;
            "features"
        }
        Command::Benchmark => {
            for &ft in &config.feature_types {
                let (_, bench) = benchmark_for(&ws, &config, ft, &mut out)?;
                out.write(&format!("benchmark_{}.json", suffix(ft)), bench.to_json())?;
            }
            "benchmark"
        }
        Command::Validate => {
            cmd_validate(&ws, &config, &mut out)?;
            "validate"
        }
        Command::Homogeneity => {
            for &ft in &config.feature_types {
                let (space, bench) = benchmark_for(&ws, &config, ft, &mut out)?;
                emit_homogeneity(&ws, &config, ft, &space, &bench, &mut out)?;
            }
            "homogeneity"
        }
        Command::Profile => {
            for &ft in &config.feature_types {
                let (space, bench) = benchmark_for(&ws, &config, ft, &mut out)?;
                emit_profile(&ws, &config, ft, &space, &bench, &mut out)?;
            }
            "profile"
        }
        Command::Cluster => {
            for &ft in &config.feature_types {
                let space = feature_space(&ws, &config, ft, &mut out)?;
                emit_cluster(&ws, &config, ft, &space, &mut out)?;
            }
            "cluster"
        }
        Command::Analyze => {
            for &ft in &config.feature_types {
                let (space, bench) = benchmark_for(&ws, &config, ft, &mut out)?;
                out.write(&format!("benchmark_{}.json", suffix(ft)), bench.to_json())?;
                emit_homogeneity(&ws, &config, ft, &space, &bench, &mut out)?;
                emit_profile(&ws, &config, ft, &space, &bench, &mut out)?;
                emit_cluster(&ws, &config, ft, &space, &mut out)?;
            }
            "analyze"
        }
        Command::Plot { .. } => unreachable!("handled above"),
    };
    out.timings.push(("total".into(), started.elapsed().as_millis()));
    out.finish(name, &config, &ws)
}

fn suffix(ft: FeatureType) -> String {
    ft.to_string().to_ascii_lowercase()
}

struct Workspace {
    language: String,
    corpora: Vec<(CorpusManifest, TokenStream)>,
}

const BACKGROUND: &str = "background";

impl Workspace {
    fn load(config: &RunConfig) -> Result<Self, CliError> {
        let manifest = read_manifest(&config.manifest)?;
        let mut languages: Vec<&str> = manifest.iter().map(|m| m.language_code.as_str()).collect();
        languages.sort_unstable();
        languages.dedup();
        let language = match &config.language {
            Some(l) if languages.contains(&l.as_str()) => l.clone(),
            Some(l) => {
                return Err(CliError::Usage(format!(
                    "language `{l}` not in manifest (found {})",
                    languages.join(", ")
                )))
            }
            None if languages.len() == 1 => languages[0].to_owned(),
            None => {
                return Err(CliError::Usage(format!(
                    "manifest holds several languages ({}); choose one with --language",
                    languages.join(", ")
                )))
            }
        };
        let selected: Vec<CorpusManifest> = manifest.into_iter().filter(|m| m.language_code == language).collect();
        let streams = selected.par_iter().map(load_corpus).collect::<Result<Vec<_>, Error>>()?;
        Ok(Self {
            language,
            corpora: selected.into_iter().zip(streams).collect(),
        })
    }

    fn labeled(&self, label: &str) -> Vec<&TokenStream> {
        self.corpora
            .iter()
            .filter(|(m, _)| m.register_label.eq_ignore_ascii_case(label))
            .map(|(_, s)| s)
            .collect()
    }

    fn register(&self, label: &str) -> Result<&TokenStream, CliError> {
        match self.labeled(label).as_slice() {
            [one] => Ok(one),
            [] => Err(Error::MissingCorpus(format!(
                "no corpus labeled `{label}` for language `{}`",
                self.language
            ))
            .into()),
            many => Err(Error::MissingCorpus(format!(
                "{} corpora labeled `{label}` for language `{}`; expected exactly one",
                many.len(),
                self.language
            ))
            .into()),
        }
    }

    /// Every corpus except background ones, in manifest order.
    fn analyzed(&self) -> Vec<&TokenStream> {
        self.corpora
            .iter()
            .filter(|(m, _)| !m.register_label.eq_ignore_ascii_case(BACKGROUND))
            .map(|(_, s)| s)
            .collect()
    }

    fn background(&self, pool: bool) -> Result<TokenStream, CliError> {
        let found = self.labeled(BACKGROUND);
        if let [one] = found.as_slice() {
            return Ok((*one).clone());
        }
        if found.len() > 1 {
            return Err(Error::MissingCorpus(format!(
                "{} corpora labeled `background`; expected exactly one",
                found.len()
            ))
            .into());
        }
        if !pool {
            return Err(Error::MissingCorpus(format!(
                "feature selection requires a corpus labeled \"background\" for language `{}`; \
                 pass --pool-background to select features from all corpora pooled instead",
                self.language
            ))
            .into());
        }
        let words = self.corpora.iter().flat_map(|(_, s)| s.words().iter().cloned()).collect();
        Ok(TokenStream::from_words(format!("{}-pooled", self.language), words)?)
    }
}

fn feature_space(ws: &Workspace, config: &RunConfig, ft: FeatureType, out: &mut Emitter) -> Result<FeatureSpace, CliError> {
    let background = ws.background(config.pool_background)?;
    let mut hasher = Sha256::new();
    hasher.update(format!("{ft}\0{}\0{}\0", config.k, background.corpus_id()).as_bytes());
    for w in background.words() {
        hasher.update(w.as_bytes());
        hasher.update([0u8]);
    }
    let key = hex(&hasher.finalize()[..16]);
    let cache = out.dir.join("cache").join(format!("features-{key}.json"));
    if let Ok(text) = fs::read_to_string(&cache) {
        if let Ok(space) = FeatureSpace::from_json(&text) {
            return Ok(space);
        }
    }
    let space = out.timed(&format!("select features {ft}"), || select_features(&background, ft, config.k));
    fs::create_dir_all(cache.parent().expect("cache has a parent")).map_err(|e| Error::io(&cache, e))?;
    fs::write(&cache, space.to_json()).map_err(|e| Error::io(&cache, e))?;
    Ok(space)
}

fn sampling(config: &RunConfig) -> SamplingParams {
    SamplingParams {
        sample_size: config.sample_size,
        n_pairs: config.n_pairs,
        seed: config.master_seed,
    }
}

fn benchmark_for(
    ws: &Workspace,
    config: &RunConfig,
    ft: FeatureType,
    out: &mut Emitter,
) -> Result<(FeatureSpace, BenchmarkDistribution), CliError> {
    let space = feature_space(ws, config, ft, out)?;
    let (tw, wk, cc) = (ws.register("TW")?, ws.register("WK")?, ws.register("CC")?);
    let bench = out.timed(&format!("benchmark {ft}"), || {
        build_benchmark(&ws.language, tw, wk, cc, &space, sampling(config))
    })?;
    Ok((space, bench.distribution))
}

fn cmd_features(ws: &Workspace, config: &RunConfig, out: &mut Emitter) -> Result<(), CliError> {
    for &ft in &config.feature_types {
        let space = feature_space(ws, config, ft, out)?;
        out.write(&format!("features_{}.json", suffix(ft)), space.to_json())?;
    }
    Ok(())
}

fn cmd_validate(ws: &Workspace, config: &RunConfig, out: &mut Emitter) -> Result<(), CliError> {
    let background = ws.background(config.pool_background)?;
    let (tw, wk, cc) = (ws.register("TW")?, ws.register("WK")?, ws.register("CC")?);
    let params = ValidationParams {
        sample_size: config.sample_size,
        k: config.k,
        samples_per_corpus: config.samples_per_corpus,
        folds: DEFAULT_FOLDS,
        seed: config.master_seed,
    };
    let (report, runs) = out.timed("validate", || {
        validate_language(&ws.language, tw, wk, cc, &background, &config.feature_types, &params)
    })?;
    #[derive(Serialize)]
    struct ValidationFile<'a> {
        report: &'a crate::validation::ValidationReport,
        thresholds: Vec<(FeatureType, &'a [crate::validation::Threshold])>,
    }
    let file = ValidationFile {
        report: &report,
        thresholds: runs.iter().map(|r| (r.feature_type, r.thresholds.as_slice())).collect(),
    };
    out.write("validation.json", to_json(&file))?;
    out.write("validation.csv", report::validation_csv(std::slice::from_ref(&report)))?;
    Ok(())
}

fn emit_homogeneity(
    ws: &Workspace,
    config: &RunConfig,
    ft: FeatureType,
    space: &FeatureSpace,
    bench: &BenchmarkDistribution,
    out: &mut Emitter,
) -> Result<(), CliError> {
    let mut reports: Vec<HomogeneityReport> = Vec::new();
    let mut pairs = Vec::new();
    for corpus in ws.analyzed() {
        let (r, scores) = out.timed(&format!("homogeneity {ft} {}", corpus.corpus_id()), || {
            homogeneity(corpus, bench, space, sampling(config))
        })?;
        reports.push(r);
        pairs.push((corpus.corpus_id().to_owned(), scores));
    }
    let sfx = suffix(ft);
    out.write(&format!("homogeneity_{sfx}.csv"), report::homogeneity_csv(&reports))?;
    out.write(&format!("homogeneity_{sfx}.json"), to_json(&reports))?;
    out.write(&format!("homogeneity_pairs_{sfx}.csv"), report::homogeneity_pairs_csv(&pairs))?;
    if !config.no_plots {
        let groups: Vec<(String, Vec<f64>)> = pairs
            .iter()
            .map(|(id, s)| (id.clone(), s.iter().filter_map(|x| x.z).collect()))
            .collect();
        out.write(&format!("homogeneity_{sfx}.svg"), homogeneity_svg(ft, &groups))?;
    }
    Ok(())
}

fn homogeneity_svg(ft: impl std::fmt::Display, groups: &[(String, Vec<f64>)]) -> String {
    plot::strip_plot(&format!("Homogeneity ({ft})"), "standardized similarity (z)", groups)
}

fn emit_profile(
    ws: &Workspace,
    config: &RunConfig,
    ft: FeatureType,
    space: &FeatureSpace,
    bench: &BenchmarkDistribution,
    out: &mut Emitter,
) -> Result<(), CliError> {
    let tw = ws.register("TW")?;
    let wk = ws.register("WK")?;
    let extras: Vec<TokenStream> = ws
        .analyzed()
        .into_iter()
        .filter(|s| s.corpus_id() != tw.corpus_id() && s.corpus_id() != wk.corpus_id())
        .cloned()
        .collect();
    let prof = out.timed(&format!("profile {ft}"), || {
        profile(tw, wk, &extras, bench, space, sampling(config))
    })?;
    let sfx = suffix(ft);
    out.write(&format!("profile_{sfx}.csv"), report::profile_csv(&prof))?;
    if !config.no_plots {
        out.write(&format!("profile_{sfx}.svg"), profile_svg(ft, &prof))?;
    }
    Ok(())
}

fn profile_svg(ft: impl std::fmt::Display, prof: &crate::analysis::RegisterProfile) -> String {
    plot::profile_scatter(&format!("Register profile ({ft})"), prof)
}

fn emit_cluster(
    ws: &Workspace,
    config: &RunConfig,
    ft: FeatureType,
    space: &FeatureSpace,
    out: &mut Emitter,
) -> Result<(), CliError> {
    let corpora: Vec<TokenStream> = ws.analyzed().into_iter().cloned().collect();
    let matrix = out.timed(&format!("similarity matrix {ft}"), || {
        similarity_matrix(&corpora, space, sampling(config))
    })?;
    let dendrogram = ward_cluster(&matrix);
    if dendrogram.merges.len() + 1 != dendrogram.leaves.len() {
        return Err(Error::Invariant(format!(
            "{} merges for {} leaves",
            dendrogram.merges.len(),
            dendrogram.leaves.len()
        ))
        .into());
    }
    let inversions = dendrogram.inversions();
    if !inversions.is_empty() {
        eprintln!("corpsim: warning: Ward merge heights decrease at steps {inversions:?} ({ft})");
    }
    let sfx = suffix(ft);
    out.write(&format!("similarity_matrix_{sfx}.csv"), report::matrix_csv(&matrix))?;
    out.write(&format!("dendrogram_{sfx}.json"), dendrogram.to_json())?;
    if !config.no_plots {
        out.write(&format!("cluster_{sfx}.svg"), cluster_svg(ft, &dendrogram))?;
    }
    Ok(())
}

fn cluster_svg(ft: impl std::fmt::Display, d: &Dendrogram) -> String {
    plot::cluster_heatmap(&format!("Mean similarity with Ward clustering ({ft})"), d)
}

fn replot(dir: &Path) -> Result<(), CliError> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .collect();
    names.sort();
    let mut rendered = 0;
    for name in &names {
        let path = dir.join(name);
        let write = |file: String, svg: String| {
            let target = dir.join(file);
            fs::write(&target, svg).map_err(|e| CliError::Run(Error::io(&target, e)))
        };
        if let Some(sfx) = name.strip_prefix("homogeneity_pairs_").and_then(|s| s.strip_suffix(".csv")) {
            let groups = report::read_homogeneity_pairs(&path)?;
            write(format!("homogeneity_{sfx}.svg"), homogeneity_svg(sfx.to_uppercase(), &groups))?;
            rendered += 1;
        } else if let Some(sfx) = name.strip_prefix("profile_").and_then(|s| s.strip_suffix(".csv")) {
            let prof = report::read_profile(&path)?;
            write(format!("profile_{sfx}.svg"), profile_svg(sfx.to_uppercase(), &prof))?;
            rendered += 1;
        } else if let Some(sfx) = name.strip_prefix("dendrogram_").and_then(|s| s.strip_suffix(".json")) {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let d: Dendrogram = serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            write(format!("cluster_{sfx}.svg"), cluster_svg(sfx.to_uppercase(), &d))?;
            rendered += 1;
        }
    }
    if rendered == 0 {
        return Err(Error::MissingCorpus(format!("no plottable CSV/JSON outputs in {}", dir.display())).into());
    }
    Ok(())
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
struct Artifact {
    file: String,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Conventions {
    similarity: &'static str,
    benchmark_std: &'static str,
    homogeneity_std: &'static str,
    credible_interval: &'static str,
    outliers: &'static str,
    profile_axes: &'static str,
    ward_distance: &'static str,
    sampling: &'static str,
}

const CONVENTIONS: Conventions = Conventions {
    similarity: "Spearman rho, average ranks for ties, Pearson correlation of ranks",
    benchmark_std: "population standard deviation over all six pooled conditions",
    homogeneity_std: "sample standard deviation (n - 1) of pair z-scores",
    credible_interval: "central 90% Student-t interval for the mean (Gaussian model, Jeffreys prior)",
    outliers: "pairs with z below mean - 3 * std",
    profile_axes: "standardized similarity; higher means more similar",
    ward_distance: "1 - mean rho, Lance-Williams Ward update",
    sampling: "contiguous word windows at seeded uniform offsets",
};

/// Everything needed to reproduce a run. Timings make this file differ
/// between otherwise identical runs; the artifacts it lists do not.
#[derive(Serialize)]
struct RunRecord<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    language: &'a str,
    corpora: Vec<CorpusEntry<'a>>,
    normalization: NormalizationInfo,
    conventions: Conventions,
    artifacts: &'a [Artifact],
    timings_ms: Vec<(String, u128)>,
}

#[derive(Serialize)]
struct CorpusEntry<'a> {
    corpus_id: &'a str,
    register_label: &'a str,
    word_count: usize,
}

/// Single writer for one output directory.
struct Emitter {
    dir: PathBuf,
    artifacts: Vec<Artifact>,
    timings: Vec<(String, u128)>,
}

impl Emitter {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_owned(),
            artifacts: Vec::new(),
            timings: Vec::new(),
        })
    }

    fn timed<T>(&mut self, step: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let value = f();
        self.timings.push((step.to_owned(), start.elapsed().as_millis()));
        value
    }

    fn write(&mut self, file: &str, contents: String) -> Result<(), CliError> {
        let path = self.dir.join(file);
        fs::write(&path, &contents).map_err(|e| Error::io(&path, e))?;
        self.artifacts.retain(|a| a.file != file);
        self.artifacts.push(Artifact {
            file: file.to_owned(),
            sha256: hex(&Sha256::digest(contents.as_bytes())),
            bytes: contents.len(),
        });
        Ok(())
    }

    fn finish(self, command: &str, config: &RunConfig, ws: &Workspace) -> Result<(), CliError> {
        let record = RunRecord {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            language: &ws.language,
            corpora: ws
                .corpora
                .iter()
                .map(|(m, s)| CorpusEntry {
                    corpus_id: &m.corpus_id,
                    register_label: &m.register_label,
                    word_count: s.word_count(),
                })
                .collect(),
            normalization: NORMALIZATION,
            conventions: CONVENTIONS,
            artifacts: &self.artifacts,
            timings_ms: self.timings,
        };
        let path = self.dir.join(RUN_RECORD);
        fs::write(&path, to_json(&record)).map_err(|e| Error::io(&path, e))?;
        Ok(())
    }
}
