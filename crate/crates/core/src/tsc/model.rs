use alloc::string::String;
use alloc::vec::Vec;

use super::kernels::KernelBank;
use super::ridge::RidgePath;
use super::task::SeriesInstance;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math::sqrt;

pub const DEFAULT_N_KERNELS: usize = 1000;
pub const DEFAULT_ALPHA_GRID: [f64; 7] = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    Positive,
    Negative,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Positive => "positive",
            ClassLabel::Negative => "negative",
        }
    }

    pub fn from_score(score: f64) -> Self {
        if score > 0.0 {
            ClassLabel::Positive
        } else {
            ClassLabel::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub n_kernels: usize,
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
    pub electrode: String,
    pub task: String,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            n_kernels: DEFAULT_N_KERNELS,
            alpha_grid: DEFAULT_ALPHA_GRID.to_vec(),
            seed: 0,
            electrode: String::new(),
            task: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingMeta {
    pub n_train: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub seed: u64,
    pub electrode: String,
    pub task: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RocketModel {
    pub bank: KernelBank,
    /// Inputs are divided by this before convolution.
    pub input_scale: f64,
    pub feature_means: Vec<f64>,
    pub feature_scales: Vec<f64>,
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub alpha: f64,
    /// True when the selected penalty sits at either end of the grid.
    pub alpha_on_boundary: bool,
    pub meta: TrainingMeta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: ClassLabel,
    pub score: f64,
}

/// Rows are truth (positive, negative), columns prediction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn matrix(&self) -> [[usize; 2]; 2] {
        [[self.tp, self.fn_], [self.fp, self.tn]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    pub confusion: Confusion,
}

impl Evaluation {
    pub fn from_predictions(predictions: &[Prediction], truth: &[ClassLabel]) -> Self {
        let mut c = Confusion::default();
        for (p, t) in predictions.iter().zip(truth) {
            match (t, p.label) {
                (ClassLabel::Positive, ClassLabel::Positive) => c.tp += 1,
                (ClassLabel::Positive, ClassLabel::Negative) => c.fn_ += 1,
                (ClassLabel::Negative, ClassLabel::Positive) => c.fp += 1,
                (ClassLabel::Negative, ClassLabel::Negative) => c.tn += 1,
            }
        }
        let total = c.total();
        let accuracy = if total == 0 { 0.0 } else { (c.tp + c.tn) as f64 / total as f64 };
        Self { accuracy, confusion: c }
    }
}

/// Mean per-series standard deviation, used to bring inputs to unit scale.
pub fn series_scale(instances: &[SeriesInstance]) -> f64 {
    let mut total = 0.0;
    for inst in instances {
        let n = inst.values.len() as f64;
        if n == 0.0 {
            continue;
        }
        let m = inst.values.iter().sum::<f64>() / n;
        total += sqrt(inst.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n);
    }
    let scale = total / instances.len().max(1) as f64;
    if scale.is_finite() && scale > 0.0 {
        scale
    } else {
        1.0
    }
}

fn check_training(train: &[SeriesInstance]) -> Result<usize> {
    let pos = train.iter().filter(|s| s.label == ClassLabel::Positive).count();
    let neg = train.len() - pos;
    if pos < 2 || neg < 2 {
        return Err(Error::DegenerateLabels);
    }
    let len = train[0].values.len();
    if let Some(bad) = train.iter().find(|s| s.values.len() != len) {
        return Err(Error::LengthMismatch { left: len, right: bad.values.len() });
    }
    Ok(len)
}

/// Kernel bank and input scale for `train`, before any features are computed.
pub fn prepare(train: &[SeriesInstance], options: &FitOptions) -> Result<(KernelBank, f64)> {
    let len = check_training(train)?;
    if options.n_kernels == 0 || options.alpha_grid.is_empty() || options.alpha_grid.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::InvalidConfig("classifier needs kernels and a positive alpha grid".into()));
    }
    Ok((KernelBank::generate(options.seed, options.n_kernels, len), series_scale(train)))
}

pub fn fit(train: &[SeriesInstance], options: &FitOptions) -> Result<RocketModel> {
    let (bank, scale) = prepare(train, options)?;
    let rows: Vec<Vec<f64>> = train.iter().map(|s| bank.transform(&s.values, scale)).collect();
    let labels: Vec<ClassLabel> = train.iter().map(|s| s.label).collect();
    fit_with_features(bank, scale, &rows, &labels, options)
}

/// Finishes training from precomputed feature rows (`bank.transform` of
/// each training series), which lets callers compute rows in parallel.
pub fn fit_with_features(
    bank: KernelBank,
    input_scale: f64,
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    options: &FitOptions,
) -> Result<RocketModel> {
    let n = rows.len();
    if labels.len() != n {
        return Err(Error::LengthMismatch { left: n, right: labels.len() });
    }
    let n_pos = labels.iter().filter(|l| **l == ClassLabel::Positive).count();
    let n_neg = n - n_pos;
    if n_pos < 2 || n_neg < 2 {
        return Err(Error::DegenerateLabels);
    }
    let p = bank.n_features();
    if let Some(bad) = rows.iter().find(|r| r.len() != p) {
        return Err(Error::LengthMismatch { left: p, right: bad.len() });
    }

    let mut means = alloc::vec![0.0; p];
    for r in rows {
        for (m, v) in means.iter_mut().zip(r) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut vars = alloc::vec![0.0; p];
    for r in rows {
        for ((s, v), m) in vars.iter_mut().zip(r).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    let mut constant = alloc::vec![false; p];
    let scales: Vec<f64> = vars
        .iter()
        .zip(constant.iter_mut())
        .map(|(v, c)| {
            let sd = sqrt(v / n as f64);
            if sd > 1e-12 {
                sd
            } else {
                *c = true;
                1.0
            }
        })
        .collect();

    let mut data = Vec::with_capacity(n * p);
    for r in rows {
        data.extend(r.iter().zip(&means).zip(&scales).map(|((v, m), s)| (v - m) / s));
    }
    let x = Matrix::from_vec(n, p, data);
    let targets: Vec<f64> = labels
        .iter()
        .map(|l| match l {
            ClassLabel::Positive => n as f64 / (2.0 * n_pos as f64),
            ClassLabel::Negative => -(n as f64) / (2.0 * n_neg as f64),
        })
        .collect();

    let path = RidgePath::new(&x, &targets, true);
    let (idx, _) = path.select(&options.alpha_grid).expect("non-empty alpha grid");
    let alpha = options.alpha_grid[idx];
    let (mut weights, intercept) = path.coefficients(alpha);
    for (w, c) in weights.iter_mut().zip(&constant) {
        if *c {
            *w = 0.0;
        }
    }
    Ok(RocketModel {
        bank,
        input_scale,
        feature_means: means,
        feature_scales: scales,
        weights,
        intercept,
        alpha,
        alpha_on_boundary: idx == 0 || idx + 1 == options.alpha_grid.len(),
        meta: TrainingMeta {
            n_train: n,
            n_positive: n_pos,
            n_negative: n_neg,
            seed: options.seed,
            electrode: options.electrode.clone(),
            task: options.task.clone(),
        },
    })
}

impl RocketModel {
    pub fn features(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.bank.series_len {
            return Err(Error::LengthMismatch { left: self.bank.series_len, right: values.len() });
        }
        Ok(self.bank.transform(values, self.input_scale))
    }

    pub fn score_features(&self, row: &[f64]) -> f64 {
        let mut s = self.intercept;
        for (((v, m), sc), w) in row.iter().zip(&self.feature_means).zip(&self.feature_scales).zip(&self.weights) {
            s += w * ((v - m) / sc);
        }
        s
    }

    pub fn predict_one(&self, values: &[f64]) -> Result<Prediction> {
        let score = self.score_features(&self.features(values)?);
        Ok(Prediction { label: ClassLabel::from_score(score), score })
    }
}

pub fn predict(model: &RocketModel, instances: &[SeriesInstance]) -> Result<Vec<Prediction>> {
    instances.iter().map(|s| model.predict_one(&s.values)).collect()
}

pub fn predict_with_features(model: &RocketModel, rows: &[Vec<f64>]) -> Vec<Prediction> {
    rows.iter()
        .map(|r| {
            let score = model.score_features(r);
            Prediction { label: ClassLabel::from_score(score), score }
        })
        .collect()
}

pub fn evaluate(model: &RocketModel, test: &[SeriesInstance]) -> Result<Evaluation> {
    let preds = predict(model, test)?;
    let truth: Vec<ClassLabel> = test.iter().map(|s| s.label).collect();
    Ok(Evaluation::from_predictions(&preds, &truth))
}
