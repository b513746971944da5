use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use clonescope_core::graph::{build_candidate_graph, canonical_pair, GraphConfig};

use crate::bundle::{load_bundle, save_bundle};
use crate::dataset::{ingest, ingest_dir, write_dataset, Dataset};
use crate::error::{Error, Result};
use crate::formats::{
    format_report, read_predictions, read_vectors, write_feature_dump, write_graph, write_predictions,
    write_report, write_vectors,
};
use crate::pipeline::{
    evaluate, fit_tfidf, pair_feature_rows, predict_pipeline, train_pipeline, Ablation, CascadeVariant,
    Classifier, PipelineConfig, VectorMap,
};
use crate::synthetic::generate_synthetic;

#[derive(Debug, Parser)]
#[command(name = "clonescope", version, about = "Detect cloned social-network accounts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic labeled dataset.
    Generate(GenerateArgs),
    /// Export the candidate graph and, optionally, its pair features.
    BuildGraph(BuildGraphArgs),
    /// Train a model and report held-out precision, recall and F1.
    Train(TrainArgs),
    /// Score candidate pairs with a trained model.
    Predict(PredictArgs),
    /// Compare predictions with ground-truth labels.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1000)]
    pub n_legit: usize,
    #[arg(long, default_value_t = 200)]
    pub clone_pairs: usize,
    #[arg(long, default_value_t = 2000)]
    pub noise: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Where a dataset comes from: a directory, or individual files.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Directory holding accounts.jsonl and optional edges.tsv, labels.tsv, manifest.json.
    #[arg(long, conflicts_with_all = ["accounts", "edges", "labels", "manifest"])]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub accounts: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

impl DataArgs {
    pub fn load(&self) -> Result<Dataset> {
        match (&self.data, &self.accounts) {
            (Some(dir), _) => ingest_dir(dir),
            (None, Some(accounts)) => {
                ingest(accounts, self.edges.as_deref(), self.labels.as_deref(), self.manifest.as_deref())
            }
            (None, None) => Err(Error::Config("pass --data or --accounts".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildGraphArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.8)]
    pub delta: f64,
    /// Graph export path.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional pair-feature dump.
    #[arg(long)]
    pub features_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 0.8)]
    pub delta: f64,
    /// Post, follower, friend and profile view weights.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.5,0.25")]
    pub wgcca_weights: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    pub latent_dim: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, value_enum, default_value_t = Ablation::Full)]
    pub ablation: Ablation,
    #[arg(long, value_enum, default_value_t = CascadeVariant::Default)]
    pub cascade: CascadeVariant,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Precomputed per-account post vectors used instead of hashed embeddings.
    #[arg(long)]
    pub embeddings_file: Option<PathBuf>,
    /// Where to save the model bundle.
    #[arg(long)]
    pub bundle: PathBuf,
    /// JSON evaluation report for the held-out pairs.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Held-out predictions.
    #[arg(long)]
    pub predictions_out: Option<PathBuf>,
    /// Fused per-account embeddings.
    #[arg(long)]
    pub embeddings_out: Option<PathBuf>,
}

impl TrainArgs {
    pub fn config(&self) -> PipelineConfig {
        PipelineConfig {
            delta: self.delta,
            view_weights: self.wgcca_weights.clone(),
            latent_dim: self.latent_dim,
            folds: self.folds,
            ablation: self.ablation,
            classifier: Classifier::Cascade { variant: self.cascade },
            seed: self.seed,
            ..PipelineConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long)]
    pub embeddings_file: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub predictions: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Restrict scoring to the held-out pairs of this model.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn external(path: Option<&Path>) -> Result<Option<VectorMap>> {
    path.map(read_vectors).transpose()
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => {
            let ds = generate_synthetic(a.n_legit, a.clone_pairs, a.noise, a.seed)?;
            write_dataset(&ds, &a.out)?;
            println!("wrote {} accounts, {} edges, {} labels to {}", ds.accounts.len(), ds.edges.len(), ds.labels.len(), a.out.display());
        }
        Command::BuildGraph(a) => {
            let ds = a.data.load()?;
            let config = GraphConfig::with_delta(a.delta)?;
            let graph = build_candidate_graph(&ds.accounts, &config)?;
            write_graph(&graph, &a.out)?;
            if let Some(path) = &a.features_out {
                let tfidf = fit_tfidf(&ds.accounts)?;
                write_feature_dump(&pair_feature_rows(&ds.accounts, &graph, &tfidf, &config), path)?;
            }
            println!("{} accounts, {} candidate pairs", ds.accounts.len(), graph.edge_count());
        }
        Command::Train(a) => {
            let ds = a.data.load()?;
            let ext = external(a.embeddings_file.as_deref())?;
            let outcome = train_pipeline(&ds, &a.config(), ext.as_ref())?;
            let s = &outcome.summary;
            println!("candidate pairs {} (train {}, test {})", s.candidate_pairs, s.train_pairs, s.test_pairs);
            println!("graph recall {:.4} ({} of {} labeled pairs)", s.graph_recall, s.positive_candidates, s.labeled_pairs);
            if let Some(levels) = s.cascade_levels {
                println!("cascade levels {levels}");
            }
            println!("{}", format_report(&outcome.test_report));
            save_bundle(&outcome.bundle, &a.bundle)?;
            if let Some(path) = &a.report {
                write_report(&outcome.test_report, path)?;
            }
            if let Some(path) = &a.predictions_out {
                write_predictions(&outcome.test_predictions, path)?;
            }
            if let Some(path) = &a.embeddings_out {
                let state = outcome.bundle.featurizer.embedding.as_ref().ok_or_else(|| {
                    Error::Config("this ablation computes no fused embeddings".into())
                })?;
                write_vectors(&state.shared, path)?;
            }
        }
        Command::Predict(a) => {
            let bundle = load_bundle(&a.bundle)?;
            let ds = a.data.load()?;
            let ext = external(a.embeddings_file.as_deref())?;
            let predictions = predict_pipeline(&bundle, &ds, ext.as_ref())?;
            write_predictions(&predictions, &a.out)?;
            let positives = predictions.iter().filter(|p| p.label == 1).count();
            println!("{} candidate pairs, {positives} predicted clones", predictions.len());
        }
        Command::Evaluate(a) => {
            let mut predictions = read_predictions(&a.predictions)?;
            for p in &mut predictions {
                p.pair = canonical_pair(&p.pair.0, &p.pair.1);
            }
            let mut truth: BTreeSet<_> =
                crate::dataset::read_label_pairs(&a.labels)?.iter().map(|(v, c)| canonical_pair(v, c)).collect();
            if let Some(path) = &a.bundle {
                let held_out: BTreeSet<_> = load_bundle(path)?.split.test.into_iter().collect();
                predictions.retain(|p| held_out.contains(&p.pair));
                truth.retain(|p| held_out.contains(p));
            }
            let report = evaluate(&predictions, &truth);
            println!("{}", format_report(&report));
            if let Some(path) = &a.report {
                write_report(&report, path)?;
            }
        }
    }
    Ok(())
}
