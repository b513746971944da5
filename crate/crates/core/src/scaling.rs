use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Per-column min–max scaling to `[0, 1]`. Inactive columns pass through
/// unchanged; constant columns map to 0. Transformed values are clamped,
/// so rows outside the fitted range stay in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub active: Vec<bool>,
}

impl MinMaxScaler {
    pub fn fit(x: &Matrix, active: Vec<bool>) -> Result<Self> {
        if active.len() != x.cols() {
            return Err(Error::DimensionMismatch { expected: x.cols(), actual: active.len() });
        }
        if x.rows() == 0 {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        let mut min = x.row(0).to_vec();
        let mut max = min.clone();
        for i in 1..x.rows() {
            for (j, &v) in x.row(i).iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Self { min, max, active })
    }

    pub fn fit_all(x: &Matrix) -> Result<Self> {
        Self::fit(x, alloc::vec![true; x.cols()])
    }

    pub fn width(&self) -> usize {
        self.min.len()
    }

    pub fn transform_row(&self, row: &mut [f64]) {
        for (j, v) in row.iter_mut().enumerate() {
            if !self.active[j] {
                continue;
            }
            let span = self.max[j] - self.min[j];
            *v = if span > 0.0 { ((*v - self.min[j]) / span).clamp(0.0, 1.0) } else { 0.0 };
        }
    }

    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.width() {
            return Err(Error::DimensionMismatch { expected: self.width(), actual: x.cols() });
        }
        let mut out = x.clone();
        for i in 0..out.rows() {
            self.transform_row(out.row_mut(i));
        }
        Ok(out)
    }
}
