//! Plain-text exports and imports: candidate graphs, feature dumps,
//! per-account vectors, predictions and evaluation reports.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use clonescope_core::features::{PairFeatureVector, PAIR_FEATURE_NAMES};
use clonescope_core::graph::CandidateGraph;
use clonescope_core::metrics::EvaluationReport;

use crate::dataset::create;
use crate::error::{io_error, Error, Result};
use crate::pipeline::PairPrediction;

fn write_lines(path: &Path, header: Option<String>, rows: impl Iterator<Item = String>) -> Result<()> {
    let mut w = create(path)?;
    let err = io_error(path);
    let body = || -> std::io::Result<()> {
        if let Some(h) = header {
            writeln!(w, "{h}")?;
        }
        for r in rows {
            writeln!(w, "{r}")?;
        }
        w.flush()
    };
    body().map_err(err)
}

/// `id_a<TAB>id_b<TAB>username_sim<TAB>screen_name_sim`, sorted by pair.
pub fn write_graph(graph: &CandidateGraph, path: &Path) -> Result<()> {
    let rows = graph
        .edges()
        .iter()
        .map(|((a, b), s)| format!("{a}\t{b}\t{:.4}\t{:.4}", s.username_sim, s.screen_name_sim));
    write_lines(path, None, rows)
}

/// Tab-separated feature dump with a header naming the ten pair features.
pub fn write_feature_dump(rows: &[((String, String), PairFeatureVector)], path: &Path) -> Result<()> {
    let header = format!("id_a\tid_b\t{}", PAIR_FEATURE_NAMES.join("\t"));
    let body = rows.iter().map(|((a, b), f)| {
        let values: Vec<String> = f.to_array().iter().map(|v| format!("{v:.4}")).collect();
        format!("{a}\t{b}\t{}", values.join("\t"))
    });
    write_lines(path, Some(header), body)
}

/// `id<TAB>v1<TAB>...<TAB>vk` per account.
pub fn write_vectors(vectors: &BTreeMap<String, Vec<f64>>, path: &Path) -> Result<()> {
    let rows = vectors.iter().map(|(id, v)| {
        let values: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
        format!("{id}\t{}", values.join("\t"))
    });
    write_lines(path, None, rows)
}

/// Externally computed per-account post vectors: an id followed by reals,
/// separated by tabs or spaces. Every record must have the same length.
pub fn read_vectors(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let mut out = BTreeMap::new();
    let mut dimension = None;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let mut fields = line.split_whitespace();
        let Some(id) = fields.next() else { continue };
        let values = fields
            .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::Parse { path: path.into(), line: n, message: "expected finite reals after the id".into() })?;
        match dimension {
            None => dimension = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(Error::Parse {
                    path: path.into(),
                    line: n,
                    message: format!("expected {d} values, found {}", values.len()),
                })
            }
            _ => {}
        }
        if values.is_empty() {
            return Err(Error::Parse { path: path.into(), line: n, message: "no values after the id".into() });
        }
        if out.insert(id.to_string(), values).is_some() {
            return Err(Error::Parse { path: path.into(), line: n, message: format!("duplicate id {id:?}") });
        }
    }
    if out.is_empty() {
        return Err(Error::Parse { path: path.into(), line: 0, message: "no vectors".into() });
    }
    Ok(out)
}

/// `id_a<TAB>id_b<TAB>probability<TAB>label`.
pub fn write_predictions(predictions: &[PairPrediction], path: &Path) -> Result<()> {
    let rows = predictions.iter().map(|p| format!("{}\t{}\t{:.4}\t{}", p.pair.0, p.pair.1, p.probability, p.label));
    write_lines(path, Some("id_a\tid_b\tclone_probability\tlabel".into()), rows)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PairPrediction>> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let parse = |n: usize, message: &str| Error::Parse { path: path.into(), line: n, message: message.into() };
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 4 {
                return Err(parse(i + 1, "expected 4 tab-separated fields"));
            }
            let probability = f[2].parse().map_err(|_| parse(i + 1, "bad probability"))?;
            let label = match f[3] {
                "0" => 0,
                "1" => 1,
                _ => return Err(parse(i + 1, "label must be 0 or 1")),
            };
            Ok(PairPrediction { pair: (f[0].into(), f[1].into()), probability, label })
        })
        .collect()
}

/// Human-readable report lines, four decimals.
pub fn format_report(report: &EvaluationReport) -> String {
    format!(
        "precision {:.4}\nrecall    {:.4}\nf1        {:.4}\ntp {} fp {} fn {} tn {}",
        report.precision, report.recall, report.f1, report.tp, report.fp, report.fn_, report.tn
    )
}

/// JSON report with values rounded to four decimals.
pub fn report_json(report: &EvaluationReport) -> String {
    let round = |v: f64| (v * 1e4).round() / 1e4;
    let value = serde_json::json!({
        "precision": round(report.precision),
        "recall": round(report.recall),
        "f1": round(report.f1),
        "tp": report.tp,
        "fp": report.fp,
        "fn": report.fn_,
        "tn": report.tn,
    });
    serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
}

pub fn write_report(report: &EvaluationReport, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(report_json(report).as_bytes()).and_then(|_| w.flush()).map_err(io_error(path))
}
