//! Training and prediction: candidate graph, pair features, account views,
//! wGCCA fusion, scaling and the classifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use clonescope_core::cascade::{predict_cascade, train_cascade, CascadeConfig, CascadeModel};
use clonescope_core::features::{extract_pair_features, PairFeatureVector, BOUNDED_FEATURES, PAIR_FEATURE_COUNT};
use clonescope_core::graph::{build_candidate_graph, CandidateGraph, EdgeScores, GraphConfig};
use clonescope_core::learners::{predict_proba_forest, train_forest, ForestKind, ForestModel};
use clonescope_core::linalg::Matrix;
use clonescope_core::metrics::EvaluationReport;
use clonescope_core::scaling::MinMaxScaler;
use clonescope_core::seed;
use clonescope_core::text::{normalize_text, TfidfModel};
use clonescope_core::views::{
    build_interaction_graph, node2vec_walks, post_view, profile_attribute_vector, skipgram_train, EdgeKind,
    HashedEmbedder, Node2VecConfig,
};
use clonescope_core::wgcca::{wgcca_fit, wgcca_project, Ridge, ViewMatrix, ViewProjection, ViewWeights, WgccaOptions};
use clonescope_core::{AccountProfile, Date};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub type Pair = (String, String);
/// Per-account vectors keyed by id.
pub type VectorMap = BTreeMap<String, Vec<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Ablation {
    /// Pair features and both accounts' fused embeddings.
    Full,
    /// Only the two candidate-graph similarity scores.
    Gc,
    /// Only the ten pair features.
    Account,
    /// Only the two fused embeddings.
    Wgcca,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CascadeVariant {
    /// Two random forests, extra trees and logistic regression.
    Default,
    Rf,
    Ert,
    Lr,
}

impl CascadeVariant {
    pub fn config(self) -> CascadeConfig {
        match self {
            CascadeVariant::Default => CascadeConfig::default(),
            CascadeVariant::Rf => CascadeConfig::all_random_forest(),
            CascadeVariant::Ert => CascadeConfig::all_extra_trees(),
            CascadeVariant::Lr => CascadeConfig::all_logistic(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classifier {
    Cascade { variant: CascadeVariant },
    /// A single random forest, for comparison with the cascade.
    RandomForest { n_trees: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub delta: f64,
    pub view_weights: Vec<f64>,
    pub latent_dim: usize,
    pub folds: usize,
    pub ablation: Ablation,
    pub classifier: Classifier,
    pub seed: u64,
    /// Width of the hashed post embedding (ignored with external vectors).
    pub post_dimension: usize,
    pub node2vec: Node2VecConfig,
    pub ridge: Ridge,
    pub test_fraction: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            delta: 0.8,
            view_weights: ViewWeights::default_four().as_slice().to_vec(),
            latent_dim: 64,
            folds: 5,
            ablation: Ablation::Full,
            classifier: Classifier::Cascade { variant: CascadeVariant::Default },
            seed: 42,
            post_dimension: 256,
            node2vec: Node2VecConfig::default(),
            ridge: Ridge::default(),
            test_fraction: 0.2,
        }
    }
}

impl PipelineConfig {
    fn uses_embeddings(&self) -> bool {
        matches!(self.ablation, Ablation::Full | Ablation::Wgcca)
    }

    pub fn validate(&self) -> Result<()> {
        GraphConfig::with_delta(self.delta)?;
        let weights = ViewWeights::new(self.view_weights.clone())?;
        if weights.len() != 4 {
            return Err(Error::Config(format!("expected 4 view weights, got {}", weights.len())));
        }
        if self.latent_dim == 0 {
            return Err(Error::Config("latent dimension must be positive".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::Config("test fraction must lie in (0, 1)".into()));
        }
        self.node2vec.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PostSource {
    Hashed { embedder: HashedEmbedder },
    /// Per-account vectors supplied at train and predict time.
    External { dimension: usize },
}

/// Everything needed to embed an account, including ones not seen in training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingState {
    pub post: PostSource,
    /// Follower then friend node vectors; unseen accounts get zeros.
    pub network: Vec<VectorMap>,
    pub network_dimension: usize,
    pub profile_scaler: MinMaxScaler,
    pub weights: ViewWeights,
    pub projection: ViewProjection,
    /// Rows of the shared embedding for the accounts it was fitted on.
    pub shared: VectorMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Featurizer {
    pub graph: GraphConfig,
    pub ablation: Ablation,
    pub tfidf: TfidfModel,
    pub embedding: Option<EmbeddingState>,
    pub scaler: MinMaxScaler,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum ClassifierModel {
    Cascade(CascadeModel),
    RandomForest(ForestModel),
}

impl ClassifierModel {
    pub fn input_dim(&self) -> usize {
        match self {
            ClassifierModel::Cascade(m) => m.input_dim,
            ClassifierModel::RandomForest(m) => m.n_features,
        }
    }

    /// Class distributions and labels thresholded at a clone probability of 0.5.
    pub fn predict(&self, x: &Matrix) -> Result<(Vec<[f64; 2]>, Vec<u8>)> {
        let p = match self {
            ClassifierModel::Cascade(m) => predict_cascade(m, x)?.0,
            ClassifierModel::RandomForest(m) => predict_proba_forest(m, x)?,
        };
        let labels = p.iter().map(|r| u8::from(r[1] > 0.5)).collect();
        Ok((p, labels))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSplit {
    pub train: Vec<Pair>,
    pub test: Vec<Pair>,
}

pub const BUNDLE_FORMAT: &str = "clonescope-bundle";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format: String,
    pub version: u32,
    pub config: PipelineConfig,
    pub featurizer: Featurizer,
    pub classifier: ClassifierModel,
    pub split: PairSplit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairPrediction {
    pub pair: Pair,
    pub probability: f64,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSummary {
    pub accounts: usize,
    pub labeled_pairs: usize,
    pub candidate_pairs: usize,
    pub positive_candidates: usize,
    /// Share of labeled pairs that the candidate graph recovered.
    pub graph_recall: f64,
    pub train_pairs: usize,
    pub test_pairs: usize,
    pub input_dim: usize,
    pub cascade_levels: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub bundle: ModelBundle,
    pub test_predictions: Vec<PairPrediction>,
    pub test_report: EvaluationReport,
    pub summary: TrainingSummary,
}

/// Counts a predicted-positive pair as a true positive iff it is in `truth`;
/// truth pairs that are missing or predicted negative are false negatives.
pub fn evaluate(predictions: &[PairPrediction], truth: &BTreeSet<Pair>) -> EvaluationReport {
    let (mut tp, mut fp, mut tn) = (0, 0, 0);
    let mut found = 0;
    for p in predictions {
        let positive = truth.contains(&p.pair);
        match (p.label == 1, positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => {}
        }
        found += u64::from(positive);
    }
    let fn_ = truth.len() as u64 - tp;
    debug_assert!(found <= truth.len() as u64);
    EvaluationReport::from_counts(tp, fp, fn_, tn)
}

pub fn fit_tfidf(accounts: &[AccountProfile]) -> Result<TfidfModel> {
    let docs: Vec<String> = accounts.iter().map(|a| normalize_text(&a.description)).collect();
    Ok(TfidfModel::fit(&docs)?)
}

/// Pair features for every candidate edge, in canonical pair order.
pub fn pair_feature_rows(
    accounts: &[AccountProfile],
    graph: &CandidateGraph,
    tfidf: &TfidfModel,
    config: &GraphConfig,
) -> Vec<(Pair, PairFeatureVector)> {
    let by_id: HashMap<&str, &AccountProfile> = accounts.iter().map(|a| (a.id.as_str(), a)).collect();
    graph
        .edges()
        .keys()
        .map(|(a, b)| {
            let f = extract_pair_features(by_id[a.as_str()], by_id[b.as_str()], tfidf, &config.jw_params);
            ((a.clone(), b.clone()), f)
        })
        .collect()
}

fn input_mask(ablation: Ablation, latent_dim: usize) -> Vec<bool> {
    let features = (0..PAIR_FEATURE_COUNT).map(|j| j >= BOUNDED_FEATURES);
    match ablation {
        Ablation::Gc => vec![false; 2],
        Ablation::Account => features.collect(),
        Ablation::Wgcca => vec![true; 2 * latent_dim],
        Ablation::Full => features.chain(std::iter::repeat_n(true, 2 * latent_dim)).collect(),
    }
}

fn assemble(ablation: Ablation, scores: EdgeScores, f: &PairFeatureVector, ga: &[f64], gb: &[f64]) -> Vec<f64> {
    match ablation {
        Ablation::Gc => vec![scores.username_sim, scores.screen_name_sim],
        Ablation::Account => f.to_array().to_vec(),
        Ablation::Wgcca => ga.iter().chain(gb).copied().collect(),
        Ablation::Full => f.to_array().iter().chain(ga).chain(gb).copied().collect(),
    }
}

fn post_vectors(accounts: &[AccountProfile], source: &PostSource, external: Option<&VectorMap>) -> Result<Vec<Vec<f64>>> {
    match source {
        PostSource::Hashed { embedder } => Ok(accounts.iter().map(|a| post_view(embedder, &a.posts)).collect()),
        PostSource::External { dimension } => {
            let map = external.ok_or_else(|| Error::Config("this model needs --embeddings-file".into()))?;
            accounts
                .iter()
                .map(|a| match map.get(&a.id) {
                    Some(v) if v.len() == *dimension => Ok(v.clone()),
                    Some(v) => Err(Error::Config(format!(
                        "embedding for {} has {} values, expected {dimension}",
                        a.id,
                        v.len()
                    ))),
                    None => Ok(vec![0.0; *dimension]),
                })
                .collect()
        }
    }
}

fn network_vectors(dataset: &Dataset, config: &PipelineConfig, kind: EdgeKind) -> Result<VectorMap> {
    let ids: Vec<String> = dataset.accounts.iter().map(|a| a.id.clone()).collect();
    let graph = build_interaction_graph(&ids, &dataset.edge_triples(), kind)?;
    let n2v = Node2VecConfig { seed: seed::derive_str(config.seed, kind.as_str()), ..config.node2vec };
    let walks = node2vec_walks(&graph, &n2v);
    let model = skipgram_train(&walks, graph.node_count(), &n2v);
    Ok(ids.into_iter().zip(model.vectors).collect())
}

fn profile_rows(accounts: &[AccountProfile], reference: &Date) -> Result<Vec<[f64; 12]>> {
    accounts.iter().map(|a| Ok(profile_attribute_vector(a, reference)?.to_array())).collect()
}

fn fit_embeddings(dataset: &Dataset, config: &PipelineConfig, external: Option<&VectorMap>) -> Result<EmbeddingState> {
    let accounts = &dataset.accounts;
    let n = accounts.len();
    let post = match external {
        Some(map) => PostSource::External { dimension: map.values().next().map_or(0, Vec::len) },
        None => PostSource::Hashed {
            embedder: HashedEmbedder::new(config.post_dimension, seed::derive_str(config.seed, "posts")),
        },
    };
    let posts = post_vectors(accounts, &post, external)?;
    let network = vec![
        network_vectors(dataset, config, EdgeKind::Follower)?,
        network_vectors(dataset, config, EdgeKind::Friend)?,
    ];
    let profile = Matrix::from_rows(&profile_rows(accounts, &dataset.reference_date())?);
    let profile_scaler = MinMaxScaler::fit_all(&profile)?;
    let profile = profile_scaler.transform(&profile)?;

    let net_matrix = |map: &VectorMap| {
        Matrix::from_rows(&accounts.iter().map(|a| map[&a.id].clone()).collect::<Vec<_>>())
    };
    let views = vec![
        ViewMatrix::new("post", Matrix::from_rows(&posts)),
        ViewMatrix::new("follower", net_matrix(&network[0])),
        ViewMatrix::new("friend", net_matrix(&network[1])),
        ViewMatrix::new("profile", profile),
    ];
    let weights = ViewWeights::new(config.view_weights.clone())?;
    let (shared, projection) = wgcca_fit(&views, &weights, config.latent_dim.min(n), &WgccaOptions::with_ridge(config.ridge))?;
    if shared.latent_dim() < config.latent_dim {
        return Err(Error::Config(format!(
            "latent dimension {} exceeds the {n} accounts available",
            config.latent_dim
        )));
    }
    let shared = accounts.iter().enumerate().map(|(i, a)| (a.id.clone(), shared.g.row(i).to_vec())).collect();
    Ok(EmbeddingState {
        post,
        network,
        network_dimension: config.node2vec.dimension,
        profile_scaler,
        weights,
        projection,
        shared,
    })
}

impl EmbeddingState {
    /// Shared-embedding rows for `accounts`: stored rows for fitted
    /// accounts, inductive projections for the rest.
    fn rows_for(&self, accounts: &[&AccountProfile], reference: &Date, external: Option<&VectorMap>) -> Result<VectorMap> {
        let mut out = VectorMap::new();
        let unseen: Vec<AccountProfile> = accounts
            .iter()
            .filter(|a| match self.shared.get(&a.id) {
                Some(row) => {
                    out.insert(a.id.clone(), row.clone());
                    false
                }
                None => true,
            })
            .map(|a| (*a).clone())
            .collect();
        if unseen.is_empty() {
            return Ok(out);
        }
        let posts = post_vectors(&unseen, &self.post, external)?;
        let profiles = profile_rows(&unseen, reference)?;
        for ((account, post), profile) in unseen.iter().zip(posts).zip(profiles) {
            let network = |map: &VectorMap| map.get(&account.id).cloned().unwrap_or(vec![0.0; self.network_dimension]);
            let mut profile = profile.to_vec();
            self.profile_scaler.transform_row(&mut profile);
            let x_new = vec![post, network(&self.network[0]), network(&self.network[1]), profile];
            out.insert(account.id.clone(), wgcca_project(&self.projection, &self.weights, &x_new)?);
        }
        Ok(out)
    }
}

/// Unscaled classifier inputs for each candidate pair.
fn raw_inputs(
    dataset: &Dataset,
    graph: &CandidateGraph,
    graph_config: &GraphConfig,
    tfidf: &TfidfModel,
    ablation: Ablation,
    embedding: Option<&EmbeddingState>,
    external: Option<&VectorMap>,
) -> Result<(Vec<Pair>, Matrix)> {
    let features = pair_feature_rows(&dataset.accounts, graph, tfidf, graph_config);
    let rows_by_id = match embedding {
        Some(state) => {
            let involved: BTreeSet<&str> = graph.edges().keys().flat_map(|(a, b)| [a.as_str(), b.as_str()]).collect();
            let accounts: Vec<&AccountProfile> =
                dataset.accounts.iter().filter(|a| involved.contains(a.id.as_str())).collect();
            state.rows_for(&accounts, &dataset.reference_date(), external)?
        }
        None => VectorMap::new(),
    };
    let empty = Vec::new();
    let rows: Vec<Vec<f64>> = features
        .iter()
        .map(|((a, b), f)| {
            let scores = graph.scores(a, b).expect("pair comes from the graph");
            let ga = rows_by_id.get(a).unwrap_or(&empty);
            let gb = rows_by_id.get(b).unwrap_or(&empty);
            assemble(ablation, scores, f, ga, gb)
        })
        .collect();
    let pairs = features.into_iter().map(|(p, _)| p).collect();
    let width = rows.first().map_or(0, Vec::len);
    let matrix = if rows.is_empty() { Matrix::zeros(0, width) } else { Matrix::from_rows(&rows) };
    Ok((pairs, matrix))
}

fn select(x: &Matrix, rows: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(rows.len(), x.cols());
    for (o, &r) in rows.iter().enumerate() {
        out.row_mut(o).copy_from_slice(x.row(r));
    }
    out
}

/// Stratified split of pair indices: each class sends `round(fraction · count)`
/// members to the test side while keeping at least one for training.
fn stratified_split(labels: &[u8], fraction: f64, seed_value: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = seed::rng(seed::derive_str(seed_value, "split"));
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        let take = ((fraction * members.len() as f64).round() as usize).min(members.len().saturating_sub(1));
        test.extend_from_slice(&members[..take]);
        train.extend_from_slice(&members[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// The featurized training data: everything up to, but not including,
/// the classifier. Several classifiers can be fitted on one preparation.
#[derive(Debug, Clone)]
pub struct PreparedTraining {
    pub config: PipelineConfig,
    pub pairs: Vec<Pair>,
    pub labels: Vec<u8>,
    /// Scaled classifier inputs, one row per pair.
    pub inputs: Matrix,
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub featurizer: Featurizer,
    pub summary: TrainingSummary,
}

pub fn prepare_training(dataset: &Dataset, config: &PipelineConfig, external: Option<&VectorMap>) -> Result<PreparedTraining> {
    config.validate()?;
    let graph_config = GraphConfig::with_delta(config.delta)?;
    let graph = build_candidate_graph(&dataset.accounts, &graph_config)?;
    let truth = dataset.label_set();
    let (pairs, labels) = {
        let pairs: Vec<Pair> = graph.edges().keys().cloned().collect();
        let labels: Vec<u8> = pairs.iter().map(|p| u8::from(truth.contains(p))).collect();
        (pairs, labels)
    };
    let positives = labels.iter().filter(|&&l| l == 1).count();
    if positives == 0 {
        return Err(Error::NoLabeledPairs);
    }
    if positives == labels.len() {
        return Err(Error::NoNegativePairs);
    }
    let tfidf = fit_tfidf(&dataset.accounts)?;
    let embedding = if config.uses_embeddings() { Some(fit_embeddings(dataset, config, external)?) } else { None };
    let (raw_pairs, raw) = raw_inputs(dataset, &graph, &graph_config, &tfidf, config.ablation, embedding.as_ref(), external)?;
    debug_assert_eq!(raw_pairs, pairs);

    let (train_rows, test_rows) = stratified_split(&labels, config.test_fraction, config.seed);
    let scaler = MinMaxScaler::fit(&select(&raw, &train_rows), input_mask(config.ablation, config.latent_dim))?;
    let inputs = scaler.transform(&raw)?;
    let summary = TrainingSummary {
        accounts: dataset.accounts.len(),
        labeled_pairs: truth.len(),
        candidate_pairs: pairs.len(),
        positive_candidates: positives,
        graph_recall: if truth.is_empty() { 0.0 } else { positives as f64 / truth.len() as f64 },
        train_pairs: train_rows.len(),
        test_pairs: test_rows.len(),
        input_dim: inputs.cols(),
        cascade_levels: None,
    };
    Ok(PreparedTraining {
        config: config.clone(),
        pairs,
        labels,
        inputs,
        train_rows,
        test_rows,
        featurizer: Featurizer { graph: graph_config, ablation: config.ablation, tfidf, embedding, scaler },
        summary,
    })
}

impl PreparedTraining {
    pub fn fit(&self, classifier: Classifier) -> Result<TrainOutcome> {
        let x_train = select(&self.inputs, &self.train_rows);
        let y_train: Vec<u8> = self.train_rows.iter().map(|&i| self.labels[i]).collect();
        let seed_value = seed::derive_str(self.config.seed, "classifier");
        let model = match classifier {
            Classifier::Cascade { variant } => {
                let cascade = CascadeConfig { folds: self.config.folds, seed: seed_value, ..variant.config() };
                ClassifierModel::Cascade(train_cascade(&x_train, &y_train, &cascade)?)
            }
            Classifier::RandomForest { n_trees } => ClassifierModel::RandomForest(train_forest(
                &x_train,
                &y_train,
                ForestKind::RandomForest,
                n_trees,
                seed_value,
            )?),
        };
        let x_test = select(&self.inputs, &self.test_rows);
        let (probs, labels) = model.predict(&x_test)?;
        let test_predictions: Vec<PairPrediction> = self
            .test_rows
            .iter()
            .zip(probs.iter().zip(labels))
            .map(|(&i, (p, label))| PairPrediction { pair: self.pairs[i].clone(), probability: p[1], label })
            .collect();
        let truth: BTreeSet<Pair> = self.test_rows.iter().filter(|&&i| self.labels[i] == 1).map(|&i| self.pairs[i].clone()).collect();
        let test_report = evaluate(&test_predictions, &truth);
        let pick = |rows: &[usize]| rows.iter().map(|&i| self.pairs[i].clone()).collect();
        let mut summary = self.summary.clone();
        summary.cascade_levels = match &model {
            ClassifierModel::Cascade(m) => Some(m.levels.len()),
            ClassifierModel::RandomForest(_) => None,
        };
        let bundle = ModelBundle {
            format: BUNDLE_FORMAT.into(),
            version: BUNDLE_VERSION,
            config: PipelineConfig { classifier, ..self.config.clone() },
            featurizer: self.featurizer.clone(),
            classifier: model,
            split: PairSplit { train: pick(&self.train_rows), test: pick(&self.test_rows) },
        };
        Ok(TrainOutcome { bundle, test_predictions, test_report, summary })
    }
}

/// Full training run: featurize, split 80:20 by pair, fit the classifier
/// and score the held-out pairs.
pub fn train_pipeline(dataset: &Dataset, config: &PipelineConfig, external: Option<&VectorMap>) -> Result<TrainOutcome> {
    prepare_training(dataset, config, external)?.fit(config.classifier)
}

/// Scores every candidate pair of `dataset` with a trained bundle.
pub fn predict_pipeline(bundle: &ModelBundle, dataset: &Dataset, external: Option<&VectorMap>) -> Result<Vec<PairPrediction>> {
    let f = &bundle.featurizer;
    let graph = build_candidate_graph(&dataset.accounts, &f.graph)?;
    if graph.edge_count() == 0 {
        return Ok(Vec::new());
    }
    let (pairs, raw) = raw_inputs(dataset, &graph, &f.graph, &f.tfidf, f.ablation, f.embedding.as_ref(), external)?;
    let inputs = f.scaler.transform(&raw)?;
    let (probs, labels) = bundle.classifier.predict(&inputs)?;
    Ok(pairs
        .into_iter()
        .zip(probs.iter().zip(labels))
        .map(|(pair, (p, label))| PairPrediction { pair, probability: p[1], label })
        .collect())
}
