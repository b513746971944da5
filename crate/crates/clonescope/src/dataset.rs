//! Datasets on disk: JSON-lines accounts, tab-separated edges and labels,
//! and an optional JSON manifest.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clonescope_core::graph::{canonical_pair, check_unique_ids};
use clonescope_core::views::EdgeKind;
use clonescope_core::{AccountProfile, Date};
use serde::{Deserialize, Serialize};

use crate::error::{io_error, Error, Result};

pub const ACCOUNTS_FILE: &str = "accounts.jsonl";
pub const EDGES_FILE: &str = "edges.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Manifest {
    /// Date that account ages are measured against.
    #[serde(default)]
    pub reference_date: Option<Date>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub accounts: Vec<AccountProfile>,
    pub edges: Vec<Edge>,
    /// `(victim, clone)` pairs as listed; empty for unlabeled data.
    pub labels: Vec<(String, String)>,
    pub manifest: Manifest,
}

impl Dataset {
    /// Validates ids, edge endpoints and label pairs.
    pub fn new(
        accounts: Vec<AccountProfile>,
        edges: Vec<Edge>,
        labels: Vec<(String, String)>,
        manifest: Manifest,
    ) -> Result<Self> {
        if accounts.is_empty() {
            return Err(Error::EmptyDataset);
        }
        check_unique_ids(&accounts)?;
        let ids: HashSet<&str> = accounts.iter().map(|a| a.id.as_str()).collect();
        let known = |id: &str| if ids.contains(id) { Ok(()) } else { Err(Error::UnknownAccount(id.into())) };
        for e in &edges {
            known(&e.a)?;
            known(&e.b)?;
        }
        for (v, c) in &labels {
            known(v)?;
            known(c)?;
            if v == c {
                return Err(Error::SelfLabel(v.clone()));
            }
        }
        Ok(Self { accounts, edges, labels, manifest })
    }

    /// The manifest's reference date, or the latest registration date.
    pub fn reference_date(&self) -> Date {
        self.manifest
            .reference_date
            .unwrap_or_else(|| self.accounts.iter().map(|a| a.registered_on).max().expect("nonempty dataset"))
    }

    /// Labels as canonical `(min_id, max_id)` pairs.
    pub fn label_set(&self) -> BTreeSet<(String, String)> {
        self.labels.iter().map(|(a, b)| canonical_pair(a, b)).collect()
    }

    pub fn edge_triples(&self) -> Vec<(&str, &str, EdgeKind)> {
        self.edges.iter().map(|e| (e.a.as_str(), e.b.as_str(), e.kind)).collect()
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_error(path))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, message: message.into() }
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty())
}

pub fn read_accounts(path: &Path) -> Result<Vec<AccountProfile>> {
    let text = read(path)?;
    lines(&text)
        .map(|(n, line)| {
            let account: AccountProfile =
                serde_json::from_str(line).map_err(|e| parse_error(path, n, e.to_string()))?;
            if account.id.is_empty() {
                return Err(parse_error(path, n, "empty account id"));
            }
            Ok(account)
        })
        .collect()
}

fn tab_fields<'a>(path: &Path, n: usize, line: &'a str, expected: usize) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
    if fields.len() != expected {
        return Err(parse_error(path, n, format!("expected {expected} tab-separated fields, found {}", fields.len())));
    }
    Ok(fields)
}

fn check_id(path: &Path, n: usize, ids: &HashSet<&str>, id: &str) -> Result<()> {
    if ids.contains(id) {
        Ok(())
    } else {
        Err(Error::UnknownId { path: path.to_path_buf(), line: n, id: id.into() })
    }
}

pub fn read_edges(path: &Path, accounts: &[AccountProfile]) -> Result<Vec<Edge>> {
    let ids: HashSet<&str> = accounts.iter().map(|a| a.id.as_str()).collect();
    let text = read(path)?;
    lines(&text)
        .map(|(n, line)| {
            let f = tab_fields(path, n, line, 3)?;
            let kind: EdgeKind = f[2].parse().map_err(|_| parse_error(path, n, format!("unknown edge kind {:?}", f[2])))?;
            check_id(path, n, &ids, f[0])?;
            check_id(path, n, &ids, f[1])?;
            Ok(Edge { a: f[0].into(), b: f[1].into(), kind })
        })
        .collect()
}

pub fn read_labels(path: &Path, accounts: &[AccountProfile]) -> Result<Vec<(String, String)>> {
    let ids: HashSet<&str> = accounts.iter().map(|a| a.id.as_str()).collect();
    parse_labels(path, Some(&ids))
}

/// Label pairs without checking ids against an account list.
pub fn read_label_pairs(path: &Path) -> Result<Vec<(String, String)>> {
    parse_labels(path, None)
}

fn parse_labels(path: &Path, ids: Option<&HashSet<&str>>) -> Result<Vec<(String, String)>> {
    let text = read(path)?;
    lines(&text)
        .map(|(n, line)| {
            let f = tab_fields(path, n, line, 2)?;
            if let Some(ids) = ids {
                check_id(path, n, ids, f[0])?;
                check_id(path, n, ids, f[1])?;
            }
            if f[0] == f[1] {
                return Err(parse_error(path, n, "label pairs an account with itself"));
            }
            Ok((f[0].into(), f[1].into()))
        })
        .collect()
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    serde_json::from_str(&read(path)?).map_err(|e| parse_error(path, e.line(), e.to_string()))
}

/// Reads and validates a dataset. Without a manifest path, a
/// `manifest.json` next to the accounts file is used when present.
pub fn ingest(
    accounts_path: &Path,
    edges_path: Option<&Path>,
    labels_path: Option<&Path>,
    manifest_path: Option<&Path>,
) -> Result<Dataset> {
    let accounts = read_accounts(accounts_path)?;
    if accounts.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let edges = edges_path.map(|p| read_edges(p, &accounts)).transpose()?.unwrap_or_default();
    let labels = labels_path.map(|p| read_labels(p, &accounts)).transpose()?.unwrap_or_default();
    let sibling: Option<PathBuf> = accounts_path.parent().map(|d| d.join(MANIFEST_FILE)).filter(|p| p.is_file());
    let manifest = match manifest_path.map(Path::to_path_buf).or(sibling) {
        Some(p) => read_manifest(&p)?,
        None => Manifest::default(),
    };
    Dataset::new(accounts, edges, labels, manifest)
}

/// Reads `accounts.jsonl`, `edges.tsv`, `labels.tsv` and `manifest.json`
/// from a directory; the last three are optional.
pub fn ingest_dir(dir: &Path) -> Result<Dataset> {
    let optional = |name: &str| Some(dir.join(name)).filter(|p| p.is_file());
    let edges = optional(EDGES_FILE);
    let labels = optional(LABELS_FILE);
    let manifest = optional(MANIFEST_FILE);
    ingest(&dir.join(ACCOUNTS_FILE), edges.as_deref(), labels.as_deref(), manifest.as_deref())
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_error(parent))?;
    }
    Ok(BufWriter::new(fs::File::create(path).map_err(io_error(path))?))
}

pub fn write_dataset(dataset: &Dataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let path = dir.join(ACCOUNTS_FILE);
    let mut w = create(&path)?;
    for a in &dataset.accounts {
        let line = serde_json::to_string(a).expect("accounts serialize");
        writeln!(w, "{line}").map_err(io_error(&path))?;
    }
    w.flush().map_err(io_error(&path))?;

    let path = dir.join(EDGES_FILE);
    let mut w = create(&path)?;
    for e in &dataset.edges {
        writeln!(w, "{}\t{}\t{}", e.a, e.b, e.kind.as_str()).map_err(io_error(&path))?;
    }
    w.flush().map_err(io_error(&path))?;

    let path = dir.join(LABELS_FILE);
    let mut w = create(&path)?;
    for (v, c) in &dataset.labels {
        writeln!(w, "{v}\t{c}").map_err(io_error(&path))?;
    }
    w.flush().map_err(io_error(&path))?;

    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&dataset.manifest).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(io_error(&path))
}
