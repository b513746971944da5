//! String and text similarity: Jaro, Jaro–Winkler, normalization, TF-IDF
//! and cosine similarity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bundled English stop-word list, one word per line, sorted.
pub const STOP_WORDS: &str = include_str!("../resources/stopwords.txt");

pub fn is_stop_word(word: &str) -> bool {
    STOP_WORDS.lines().any(|w| w == word)
}

/// Lowercases, strips punctuation and drops stop words. Tokens in the
/// output are separated by single spaces.
pub fn normalize_text(text: &str) -> String {
    let mut out = String::new();
    for raw in text.split_whitespace() {
        let token: String = raw
            .chars()
            .flat_map(char::to_lowercase)
            .filter(|c| c.is_alphanumeric())
            .collect();
        if token.is_empty() || is_stop_word(&token) {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&token);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JaroWinklerParams {
    prefix_scale: f64,
    max_prefix_len: usize,
}

impl JaroWinklerParams {
    pub fn new(prefix_scale: f64, max_prefix_len: usize) -> Result<Self> {
        if !(0.0..=0.25).contains(&prefix_scale) {
            return Err(Error::InvalidParameter(format!(
                "prefix scale {prefix_scale} outside [0, 0.25]"
            )));
        }
        if max_prefix_len == 0 {
            return Err(Error::InvalidParameter("prefix cap must be positive".into()));
        }
        if prefix_scale * max_prefix_len as f64 > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "prefix scale {prefix_scale} times cap {max_prefix_len} exceeds 1"
            )));
        }
        Ok(Self { prefix_scale, max_prefix_len })
    }

    pub fn prefix_scale(&self) -> f64 {
        self.prefix_scale
    }

    pub fn max_prefix_len(&self) -> usize {
        self.max_prefix_len
    }
}

impl Default for JaroWinklerParams {
    fn default() -> Self {
        Self { prefix_scale: 0.1, max_prefix_len: 4 }
    }
}

pub fn jaro(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    jaro_chars(&a, &b)
}

/// Jaro similarity over pre-split characters.
///
/// Characters match when equal and at most `max(|a|,|b|)/2 - 1` positions
/// apart; `t` is half the number of matched characters that appear in a
/// different order.
pub fn jaro_chars(a: &[char], b: &[char]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_used = vec![false; b.len()];
    let mut a_matched = Vec::with_capacity(a.len().min(b.len()));
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == ca {
                b_used[j] = true;
                a_matched.push(ca);
                break;
            }
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let out_of_order = b
        .iter()
        .zip(&b_used)
        .filter(|(_, &used)| used)
        .zip(&a_matched)
        .filter(|((cb, _), ca)| cb != ca)
        .count();
    let m = m as f64;
    let t = out_of_order as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

pub fn jaro_winkler(s1: &str, s2: &str, params: &JaroWinklerParams) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    jaro_winkler_chars(&a, &b, params)
}

pub fn jaro_winkler_chars(a: &[char], b: &[char], params: &JaroWinklerParams) -> f64 {
    let js = jaro_chars(a, b);
    let prefix = a
        .iter()
        .zip(b)
        .take(params.max_prefix_len)
        .take_while(|(x, y)| x == y)
        .count();
    let score = js + prefix as f64 * params.prefix_scale * (1.0 - js);
    score.min(1.0)
}

/// Sparse vector over a [`TfidfModel`] vocabulary, entries sorted by index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    pub dim: usize,
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&(_, v)| v == 0.0)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|&(_, v)| v * v).sum())
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j, mut acc) = (0, 0, 0.0);
        while i < self.entries.len() && j < other.entries.len() {
            let (ia, va) = self.entries[i];
            let (ib, vb) = other.entries[j];
            match ia.cmp(&ib) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    acc += va * vb;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }
}

/// Smoothed TF-IDF weighting fitted on a corpus of normalized documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    vocabulary: BTreeMap<String, usize>,
    idf: Vec<f64>,
    document_count: usize,
}

impl TfidfModel {
    /// Fits over whitespace-tokenized documents. Vocabulary indices follow
    /// the lexicographic order of the terms.
    pub fn fit<S: AsRef<str>>(corpus: &[S]) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in corpus {
            let mut terms: Vec<&str> = doc.as_ref().split_whitespace().collect();
            terms.sort_unstable();
            terms.dedup();
            for t in terms {
                *df.entry(t).or_insert(0) += 1;
            }
        }
        let n = corpus.len();
        let mut vocabulary = BTreeMap::new();
        let mut idf = Vec::with_capacity(df.len());
        for (index, (term, count)) in df.into_iter().enumerate() {
            vocabulary.insert(String::from(term), index);
            idf.push(smoothed_idf(n, count));
        }
        Ok(Self { vocabulary, idf, document_count: n })
    }

    pub fn vocabulary(&self) -> &BTreeMap<String, usize> {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn idf_of(&self, term: &str) -> Option<f64> {
        self.vocabulary.get(term).map(|&i| self.idf[i])
    }

    /// Raw term counts times idf; out-of-vocabulary terms are ignored.
    pub fn vector(&self, text: &str) -> SparseVector {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for term in text.split_whitespace() {
            if let Some(&i) = self.vocabulary.get(term) {
                *tf.entry(i).or_insert(0.0) += 1.0;
            }
        }
        SparseVector {
            dim: self.idf.len(),
            entries: tf.into_iter().map(|(i, c)| (i, c * self.idf[i])).collect(),
        }
    }
}

fn smoothed_idf(documents: usize, document_frequency: usize) -> f64 {
    libm::log((1.0 + documents as f64) / (1.0 + document_frequency as f64)) + 1.0
}

pub fn tfidf_fit<S: AsRef<str>>(corpus: &[S]) -> Result<TfidfModel> {
    TfidfModel::fit(corpus)
}

pub fn tfidf_vector(model: &TfidfModel, text: &str) -> SparseVector {
    model.vector(text)
}

/// Cosine similarity of two non-negative vectors, clamped to `[0, 1]`;
/// zero when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), actual: b.len() });
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = libm::sqrt(a.iter().map(|x| x * x).sum());
    let nb = libm::sqrt(b.iter().map(|x| x * x).sum());
    Ok(clamped_cosine(dot, na, nb))
}

pub fn sparse_cosine(a: &SparseVector, b: &SparseVector) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, actual: b.dim });
    }
    Ok(clamped_cosine(a.dot(b), a.norm(), b.norm()))
}

fn clamped_cosine(dot: f64, na: f64, nb: f64) -> f64 {
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}
