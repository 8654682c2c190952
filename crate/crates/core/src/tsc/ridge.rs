use alloc::vec::Vec;

use crate::linalg::{Matrix, SymmetricEigen};

/// Ridge regression solved in dual form through one eigendecomposition of
/// the (centred) Gram matrix, so every penalty on a grid costs O(n²) and
/// the exact leave-one-out residuals come from the hat-matrix diagonal.
#[derive(Debug, Clone)]
pub struct RidgePath {
    fit_intercept: bool,
    x_means: Vec<f64>,
    y_mean: f64,
    xc: Matrix,
    yc: Vec<f64>,
    eigen: SymmetricEigen,
    uty: Vec<f64>,
}

impl RidgePath {
    pub fn new(x: &Matrix, y: &[f64], fit_intercept: bool) -> Self {
        assert_eq!(x.rows(), y.len());
        let n = x.rows();
        let p = x.cols();
        let mut x_means = alloc::vec![0.0; p];
        let mut y_mean = 0.0;
        if fit_intercept && n > 0 {
            for r in 0..n {
                for (m, v) in x_means.iter_mut().zip(x.row(r)) {
                    *m += v;
                }
            }
            for m in &mut x_means {
                *m /= n as f64;
            }
            y_mean = y.iter().sum::<f64>() / n as f64;
        }
        let mut xc = x.clone();
        for r in 0..n {
            for (v, m) in xc.row_mut(r).iter_mut().zip(&x_means) {
                *v -= m;
            }
        }
        let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
        let eigen = SymmetricEigen::new(&xc.gram_rows());
        let uty = (0..n)
            .map(|k| (0..n).map(|i| eigen.vectors[(i, k)] * yc[i]).sum())
            .collect();
        Self {
            fit_intercept,
            x_means,
            y_mean,
            xc,
            yc,
            eigen,
            uty,
        }
    }

    fn n(&self) -> usize {
        self.yc.len()
    }

    fn eigenvalue(&self, k: usize) -> f64 {
        self.eigen.values[k].max(0.0)
    }

    /// Dual coefficients `c = (K + αI)⁻¹ y_c`.
    fn dual(&self, alpha: f64) -> Vec<f64> {
        let n = self.n();
        let mut c = alloc::vec![0.0; n];
        for k in 0..n {
            let s = self.uty[k] / (self.eigenvalue(k) + alpha);
            for (i, ci) in c.iter_mut().enumerate() {
                *ci += self.eigen.vectors[(i, k)] * s;
            }
        }
        c
    }

    /// Weights and intercept minimising `‖y − Xw − b‖² + α‖w‖²`.
    pub fn coefficients(&self, alpha: f64) -> (Vec<f64>, f64) {
        let c = self.dual(alpha);
        let p = self.xc.cols();
        let mut w = alloc::vec![0.0; p];
        for (i, ci) in c.iter().enumerate() {
            for (wj, xij) in w.iter_mut().zip(self.xc.row(i)) {
                *wj += ci * xij;
            }
        }
        let intercept = if self.fit_intercept {
            self.y_mean - w.iter().zip(&self.x_means).map(|(a, b)| a * b).sum::<f64>()
        } else {
            0.0
        };
        (w, intercept)
    }

    /// Mean squared leave-one-out residual. Infinite when some training
    /// point has leverage 1.
    pub fn loo_mse(&self, alpha: f64) -> f64 {
        let n = self.n();
        if n == 0 {
            return f64::INFINITY;
        }
        let base = if self.fit_intercept { 1.0 / n as f64 } else { 0.0 };
        let mut total = 0.0;
        for i in 0..n {
            let mut fitted = 0.0;
            let mut h = base;
            for k in 0..n {
                let u = self.eigen.vectors[(i, k)];
                let shrink = self.eigenvalue(k) / (self.eigenvalue(k) + alpha);
                fitted += u * shrink * self.uty[k];
                h += u * u * shrink;
            }
            let denom = 1.0 - h;
            if denom < 1e-12 {
                return f64::INFINITY;
            }
            let e = (self.yc[i] - fitted) / denom;
            total += e * e;
        }
        total / n as f64
    }

    /// Index of the grid value with the smallest leave-one-out error; the
    /// first one wins ties.
    pub fn select(&self, grid: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &a) in grid.iter().enumerate() {
            let score = self.loo_mse(a);
            if best.map_or(true, |(_, s)| score < s) {
                best = Some((i, score));
            }
        }
        best
    }
}
