//! Weighted generalized canonical correlation analysis.
//!
//! Finds an orthonormal `G` (n × k) minimizing
//! `Σ_i w_i ‖G − X_i U_i‖²_F`. The columns of `G` are the top-k
//! eigenvectors of `M = Σ_i w_i X_i (X_iᵀX_i + r_i I)⁻¹ X_iᵀ` and
//! `U_i = (X_iᵀX_i + r_i I)⁻¹ X_iᵀ G`.
//!
//! `M` is never formed at full size. With the Cholesky factor
//! `X_iᵀX_i + r_i I = L_i L_iᵀ` and `Y_i = X_i L_i⁻ᵀ`, each term is
//! `Y_i Y_iᵀ`, so `M` lives in the span of the `Y_i` columns. The
//! eigenproblem is solved on `B = Qᵀ M Q` for an orthonormal basis `Q`
//! of that span, and `G = Q V`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{orthonormal_basis, symmetric_eigen, Cholesky, Matrix};

const BASIS_TOLERANCE: f64 = 1e-10;
const CHOLESKY_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct ViewMatrix {
    pub name: String,
    /// Rows are accounts in the shared order; columns are view features.
    pub data: Matrix,
}

impl ViewMatrix {
    pub fn new(name: impl Into<String>, data: Matrix) -> Self {
        Self { name: name.into(), data }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewWeights(Vec<f64>);

impl ViewWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("no view weights".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter(format!("view weights must be finite and >= 0: {weights:?}")));
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidParameter("view weights are all zero".into()));
        }
        Ok(Self(weights))
    }

    /// Post, follower network, friend network, profile.
    pub fn default_four() -> Self {
        Self(vec![0.25, 0.5, 0.5, 0.25])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// Regularizer added to each view's Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Ridge {
    Fixed(f64),
    /// `c · trace(XᵀX) / d`, or `c` when the trace is zero.
    TraceScaled(f64),
}

impl Default for Ridge {
    fn default() -> Self {
        Ridge::TraceScaled(1e-6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WgccaOptions {
    pub ridge: Ridge,
    /// Column-center each view before fitting (means are kept for projection).
    pub center: bool,
}

impl Default for WgccaOptions {
    fn default() -> Self {
        Self { ridge: Ridge::default(), center: true }
    }
}

impl WgccaOptions {
    pub fn with_ridge(ridge: Ridge) -> Self {
        Self { ridge, ..Self::default() }
    }
}

impl Ridge {
    fn value(&self, trace: f64, dim: usize) -> f64 {
        match *self {
            Ridge::Fixed(r) => r,
            Ridge::TraceScaled(c) if trace > 0.0 => c * trace / dim as f64,
            Ridge::TraceScaled(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedEmbedding {
    /// n × k with orthonormal columns.
    pub g: Matrix,
    /// Eigenvalues of `M` matching the columns of `g`, descending.
    pub eigenvalues: Vec<f64>,
}

impl SharedEmbedding {
    pub fn latent_dim(&self) -> usize {
        self.g.cols()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewProjection {
    /// One d_i × k map per view.
    pub u: Vec<Matrix>,
    pub ridges: Vec<f64>,
    /// Column means removed from each view before fitting.
    pub means: Vec<Vec<f64>>,
}

impl ViewProjection {
    pub fn latent_dim(&self) -> usize {
        self.u.first().map_or(0, Matrix::cols)
    }
}

/// Subtracts column means, returning the centered matrix and the means.
pub fn center_columns(x: &Matrix) -> (Matrix, Vec<f64>) {
    let (n, d) = (x.rows(), x.cols());
    let mut means = vec![0.0; d];
    for i in 0..n {
        for (m, v) in means.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    if n > 0 {
        means.iter_mut().for_each(|m| *m /= n as f64);
    }
    let mut centered = x.clone();
    for i in 0..n {
        for (v, m) in centered.row_mut(i).iter_mut().zip(&means) {
            *v -= m;
        }
    }
    (centered, means)
}

fn flip_to_positive_lead(column: &mut [f64]) {
    if let Some(&lead) = column.iter().find(|v| v.abs() > 1e-12) {
        if lead < 0.0 {
            column.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn wgcca_fit(
    views: &[ViewMatrix],
    weights: &ViewWeights,
    k: usize,
    options: &WgccaOptions,
) -> Result<(SharedEmbedding, ViewProjection)> {
    if views.is_empty() {
        return Err(Error::InvalidParameter("no views".into()));
    }
    if weights.len() != views.len() {
        return Err(Error::DimensionMismatch { expected: views.len(), actual: weights.len() });
    }
    let n = views[0].data.rows();
    for v in views {
        if v.data.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: v.data.rows() });
        }
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("latent dimension {k} must be in 1..={n}")));
    }

    let mut centered = Vec::with_capacity(views.len());
    let mut factors = Vec::with_capacity(views.len());
    let mut ridges = Vec::with_capacity(views.len());
    let mut means = Vec::with_capacity(views.len());
    // Columns of Y_i = X_i L_i⁻ᵀ, one Vec per column.
    let mut whitened: Vec<Vec<Vec<f64>>> = Vec::with_capacity(views.len());
    for (index, view) in views.iter().enumerate() {
        let (xc, mu) = if options.center {
            center_columns(&view.data)
        } else {
            (view.data.clone(), vec![0.0; view.data.cols()])
        };
        let d = xc.cols();
        let mut gram = xc.gram();
        let r = options.ridge.value(gram.trace(), d);
        for j in 0..d {
            gram[(j, j)] += r;
        }
        let chol = Cholesky::new(&gram, CHOLESKY_TOLERANCE).ok_or(Error::SingularGram { view: index })?;
        let mut cols = vec![vec![0.0; n]; d];
        let mut row = vec![0.0; d];
        for i in 0..n {
            row.copy_from_slice(xc.row(i));
            chol.forward_substitute(&mut row);
            for (c, v) in cols.iter_mut().zip(&row) {
                c[i] = *v;
            }
        }
        whitened.push(cols);
        centered.push(xc);
        factors.push(chol);
        ridges.push(r);
        means.push(mu);
    }

    let w = weights.as_slice();
    let spanning: Vec<Vec<f64>> = whitened
        .iter()
        .zip(w)
        .filter(|(_, &wi)| wi > 0.0)
        .flat_map(|(cols, _)| cols.iter().cloned())
        .collect();
    let q = orthonormal_basis(&spanning, BASIS_TOLERANCE);
    let r = q.len();

    let mut b = Matrix::zeros(r, r);
    for (cols, &wi) in whitened.iter().zip(w) {
        if wi == 0.0 {
            continue;
        }
        // A_i = Qᵀ Y_i, then accumulate w_i A_i A_iᵀ.
        let mut a = Matrix::zeros(r, cols.len());
        for (p, qp) in q.iter().enumerate() {
            for (c, yc) in cols.iter().enumerate() {
                a[(p, c)] = dot(qp, yc);
            }
        }
        let mut term = Matrix::zeros(r, r);
        for p in 0..r {
            for s in 0..=p {
                let v = dot(a.row(p), a.row(s));
                term[(p, s)] = v;
                term[(s, p)] = v;
            }
        }
        for (bv, tv) in b.as_mut_slice().iter_mut().zip(term.as_slice()) {
            *bv += wi * tv;
        }
    }

    let (values, vectors) = symmetric_eigen(&b)?;
    let mut order: Vec<usize> = (0..r).collect();
    // Descending eigenvalue; equal values keep the solver's ordering.
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));

    let mut g_cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut eigenvalues = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let mut col = vec![0.0; n];
        for (p, qp) in q.iter().enumerate() {
            let coef = vectors[(p, idx)];
            for (c, v) in col.iter_mut().zip(qp) {
                *c += coef * v;
            }
        }
        eigenvalues.push(values[idx].max(0.0));
        g_cols.push(col);
    }
    // k beyond the rank of M: any orthonormal completion has eigenvalue 0.
    let mut unit = 0;
    while g_cols.len() < k {
        let mut e = vec![0.0; n];
        e[unit] = 1.0;
        unit += 1;
        let mut candidates = g_cols.clone();
        candidates.push(e);
        let basis = orthonormal_basis(&candidates, 1e-6);
        if basis.len() == candidates.len() {
            g_cols.push(basis.into_iter().last().expect("nonempty basis"));
            eigenvalues.push(0.0);
        }
    }
    for col in &mut g_cols {
        flip_to_positive_lead(col);
    }
    let mut g = Matrix::zeros(n, k);
    for (j, col) in g_cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            g[(i, j)] = *v;
        }
    }

    let u = centered
        .iter()
        .zip(&factors)
        .map(|(xc, chol)| chol.solve(&xc.t_matmul(&g)))
        .collect();

    Ok((SharedEmbedding { g, eigenvalues }, ViewProjection { u, ridges, means }))
}

/// Inductive embedding of an unseen account: the weight-averaged per-view
/// latent estimates `Σ_i w_i (x_i − μ_i)ᵀ U_i / Σ_i w_i`.
pub fn wgcca_project(projection: &ViewProjection, weights: &ViewWeights, x_new: &[Vec<f64>]) -> Result<Vec<f64>> {
    if x_new.len() != projection.u.len() {
        return Err(Error::DimensionMismatch { expected: projection.u.len(), actual: x_new.len() });
    }
    if weights.len() != projection.u.len() {
        return Err(Error::DimensionMismatch { expected: projection.u.len(), actual: weights.len() });
    }
    let k = projection.latent_dim();
    let mut out = vec![0.0; k];
    for (((x, u), mu), &w) in x_new.iter().zip(&projection.u).zip(&projection.means).zip(weights.as_slice()) {
        if x.len() != u.rows() {
            return Err(Error::DimensionMismatch { expected: u.rows(), actual: x.len() });
        }
        if w == 0.0 {
            continue;
        }
        for (c, (xv, m)) in x.iter().zip(mu).enumerate() {
            let centered = xv - m;
            if centered == 0.0 {
                continue;
            }
            for (o, uv) in out.iter_mut().zip(u.row(c)) {
                *o += w * centered * uv;
            }
        }
    }
    let total = weights.total();
    out.iter_mut().for_each(|o| *o /= total);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_view() {
        // Uncentered: M = X(XᵀX)⁻¹Xᵀ = I₃ and U = XᵀG = G.
        let x = Matrix::identity(3);
        let opts = WgccaOptions { ridge: Ridge::Fixed(0.0), center: false };
        let (emb, proj) = wgcca_fit(
            &[ViewMatrix::new("x", x.clone())],
            &ViewWeights::new(vec![1.0]).unwrap(),
            2,
            &opts,
        )
        .unwrap();
        assert_eq!(emb.eigenvalues, vec![1.0, 1.0]);
        let gtg = emb.g.t_matmul(&emb.g);
        assert!(gtg.sub(&Matrix::identity(2)).frobenius_norm() < 1e-12);
        assert_eq!(proj.u[0], emb.g);
        assert_eq!(emb.g.sub(&x.matmul(&proj.u[0])).frobenius_norm(), 0.0);
        let zero = wgcca_project(&proj, &ViewWeights::new(vec![1.0]).unwrap(), &[vec![0.0; 3]]).unwrap();
        assert_eq!(zero, vec![0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let v = [ViewMatrix::new("x", x)];
        let w = ViewWeights::new(vec![1.0]).unwrap();
        assert!(matches!(wgcca_fit(&v, &w, 4, &WgccaOptions::default()), Err(Error::InvalidParameter(_))));
        assert!(ViewWeights::new(vec![0.0, 0.0]).is_err());
        assert!(ViewWeights::new(vec![-1.0]).is_err());
        let two = ViewWeights::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(wgcca_fit(&v, &two, 1, &WgccaOptions::default()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn singular_gram_without_ridge() {
        // Duplicate column makes XᵀX singular.
        let x = Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [4.0, 4.0], [0.0, 0.0]]);
        let err = wgcca_fit(
            &[ViewMatrix::new("x", x)],
            &ViewWeights::new(vec![1.0]).unwrap(),
            1,
            &WgccaOptions { ridge: Ridge::Fixed(0.0), center: false },
        )
        .unwrap_err();
        assert_eq!(err, Error::SingularGram { view: 0 });
    }

    #[test]
    fn projection_edge_cases() {
        let x = Matrix::from_rows(&[[1.0, 0.5], [0.2, 1.0], [0.3, 0.1], [0.9, 0.4]]);
        let w = ViewWeights::new(vec![1.0]).unwrap();
        let (_, proj) = wgcca_fit(&[ViewMatrix::new("x", x)], &w, 2, &WgccaOptions::default()).unwrap();
        let mean = proj.means[0].clone();
        assert_eq!(wgcca_project(&proj, &w, &[mean]).unwrap(), vec![0.0, 0.0]);
        let row = vec![1.0, 0.5];
        let got = wgcca_project(&proj, &w, &[row.clone()]).unwrap();
        for j in 0..2 {
            let expect = (row[0] - proj.means[0][0]) * proj.u[0][(0, j)]
                + (row[1] - proj.means[0][1]) * proj.u[0][(1, j)];
            assert!((got[j] - expect).abs() < 1e-15);
        }
        assert!(wgcca_project(&proj, &w, &[vec![1.0]]).is_err());
    }
}
