//! Slow, definition-level reference implementations. Nothing here shares
//! code with `clonescope-core`; the test suites compare the two.

use std::collections::BTreeSet;

pub use nalgebra;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Jaro similarity straight from the definition: characters match when
/// equal and no farther apart than `max(|a|,|b|)/2 − 1`; each character
/// of `b` may be matched once, scanning `a` left to right and taking the
/// leftmost free partner. Transpositions are matched pairs out of order,
/// halved.
pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) as i64 / 2 - 1).max(0);
    let mut taken = vec![false; b.len()];
    let mut a_matches = Vec::new();
    for (i, ca) in a.iter().enumerate() {
        let partner = (0..b.len()).find(|&j| !taken[j] && b[j] == *ca && (i as i64 - j as i64).abs() <= window);
        if let Some(j) = partner {
            taken[j] = true;
            a_matches.push(*ca);
        }
    }
    let b_matches: Vec<char> = b.iter().zip(&taken).filter(|(_, t)| **t).map(|(c, _)| *c).collect();
    let m = a_matches.len() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let half_transpositions = a_matches.iter().zip(&b_matches).filter(|(x, y)| x != y).count() as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - half_transpositions) / m) / 3.0
}

pub fn jaro_winkler(a: &str, b: &str, prefix_scale: f64, max_prefix: usize) -> f64 {
    let j = jaro(a, b);
    let l = a.chars().zip(b.chars()).take(max_prefix).take_while(|(x, y)| x == y).count() as f64;
    (j + l * prefix_scale * (1.0 - j)).min(1.0)
}

pub fn random_string(rng: &mut impl Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// All index pairs `(i, j)`, `i < j`, where either name pair reaches `delta`.
/// Names are lowercased and trimmed; an empty name never matches.
pub fn threshold_graph(names: &[(String, String)], delta: f64) -> BTreeSet<(usize, usize)> {
    let key = |s: &str| s.trim().to_lowercase();
    let sim = |x: &str, y: &str| {
        let (x, y) = (key(x), key(y));
        if x.is_empty() || y.is_empty() {
            0.0
        } else {
            jaro_winkler(&x, &y, 0.1, 4)
        }
    };
    let mut edges = BTreeSet::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            if sim(&names[i].0, &names[j].0) >= delta || sim(&names[i].1, &names[j].1) >= delta {
                edges.insert((i, j));
            }
        }
    }
    edges
}

/// Exhaustive best root split by weighted Gini impurity over all features
/// and all midpoints of consecutive distinct values. Ties (within 1e-12)
/// go to the lower feature, then the lower threshold.
pub fn best_gini_split(x: &[Vec<f64>], y: &[u8]) -> Option<(usize, f64)> {
    let n = x.len() as f64;
    let gini = |labels: &[u8]| {
        if labels.is_empty() {
            return 0.0;
        }
        let p = labels.iter().filter(|&&v| v == 1).count() as f64 / labels.len() as f64;
        1.0 - p * p - (1.0 - p) * (1.0 - p)
    };
    let d = x.first().map_or(0, Vec::len);
    let mut best: Option<(f64, usize, f64)> = None;
    for f in 0..d {
        let mut values: Vec<f64> = x.iter().map(|r| r[f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let t = w[0] + (w[1] - w[0]) / 2.0;
            let left: Vec<u8> = x.iter().zip(y).filter(|(r, _)| r[f] <= t).map(|(_, &l)| l).collect();
            let right: Vec<u8> = x.iter().zip(y).filter(|(r, _)| r[f] > t).map(|(_, &l)| l).collect();
            let impurity = left.len() as f64 / n * gini(&left) + right.len() as f64 / n * gini(&right);
            let better = match best {
                None => true,
                Some((b, _, _)) => impurity < b - 1e-12,
            };
            if better {
                best = Some((impurity, f, t));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

/// Central finite-difference gradient of `f` at `x`.
pub fn finite_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[i] += h;
            down[i] -= h;
            (f(&up) - f(&down)) / (2.0 * h)
        })
        .collect()
}

pub fn to_dmatrix(rows: usize, cols: usize, row_major: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, row_major)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>() * 2.0 - 1.0)
}

/// Random n × k matrix with orthonormal columns (QR of a Gaussian-ish draw).
pub fn random_orthonormal(rng: &mut impl Rng, n: usize, k: usize) -> DMatrix<f64> {
    let q = random_matrix(rng, n, k).qr().q();
    q.columns(0, k).into_owned()
}

fn regularized_inverse(x: &DMatrix<f64>, ridge: f64) -> DMatrix<f64> {
    let d = x.ncols();
    (x.transpose() * x + DMatrix::identity(d, d) * ridge)
        .try_inverse()
        .expect("invertible gram matrix")
}

/// `M = Σ w_i X_i (X_iᵀX_i + r_i I)⁻¹ X_iᵀ`.
pub fn gcca_matrix(views: &[DMatrix<f64>], weights: &[f64], ridges: &[f64]) -> DMatrix<f64> {
    let n = views[0].nrows();
    let mut m = DMatrix::zeros(n, n);
    for ((x, &w), &r) in views.iter().zip(weights).zip(ridges) {
        m += x * regularized_inverse(x, r) * x.transpose() * w;
    }
    m
}

/// Eigenvalues of a symmetric matrix, descending.
pub fn eigenvalues_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `Σ w_i ‖G − X_i U_i‖²` with each `U_i` the regularized least-squares map.
pub fn gcca_objective(views: &[DMatrix<f64>], weights: &[f64], ridges: &[f64], g: &DMatrix<f64>) -> f64 {
    views
        .iter()
        .zip(weights)
        .zip(ridges)
        .map(|((x, &w), &r)| {
            let u = regularized_inverse(x, r) * x.transpose() * g;
            w * (g - x * u).norm_squared()
        })
        .sum()
}

/// `Σ w_i ‖X_i − G Gᵀ X_i‖²`: how much of each view the shared space misses.
pub fn view_reconstruction_residual(views: &[DMatrix<f64>], weights: &[f64], g: &DMatrix<f64>) -> f64 {
    let p = g * g.transpose();
    views.iter().zip(weights).map(|(x, &w)| w * (x - &p * x).norm_squared()).sum()
}
