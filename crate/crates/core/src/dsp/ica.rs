//! Symmetric fixed-point FastICA with the `log cosh` contrast (`g = tanh`).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix, SymmetricEigen};
use crate::math::{mean, pearson, sqrt, tanh};
use crate::recording::Recording;
use crate::rng::{streams, Stream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcaOptions {
    pub n_components: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Stop once every unmixing row moves by less than this.
    pub tolerance: f64,
    /// Fit on every `fit_stride`-th sample; activations always use all.
    pub fit_stride: usize,
}

impl IcaOptions {
    pub fn new(n_components: usize, seed: u64) -> Self {
        Self {
            n_components,
            seed,
            max_iter: 200,
            tolerance: 1e-4,
            fit_stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub iterations: usize,
    pub final_delta: f64,
    /// `false` means the iteration cap was hit; the decomposition is still
    /// usable but should be reported.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcaDecomposition {
    pub channels: Vec<String>,
    pub channel_means: Vec<f64>,
    /// `[component x channel]`, maps centred data to unit-variance space.
    pub whitening: Matrix,
    /// `[channel x component]`, inverse of `whitening` on its range.
    pub dewhitening: Matrix,
    /// Orthogonal `[component x component]` rotation found by the iteration.
    pub rotation: Matrix,
    /// `[component x channel]` = `rotation * whitening`.
    pub unmixing: Matrix,
    /// `[channel x component]` = `dewhitening * rotation^T`.
    pub mixing: Matrix,
    /// `[component x time]` source estimates.
    pub activations: Matrix,
    pub report: ConvergenceReport,
}

impl IcaDecomposition {
    pub fn n_components(&self) -> usize {
        self.unmixing.rows()
    }
}

pub fn fast_ica(rec: &Recording, n_components: usize, seed: u64) -> Result<IcaDecomposition> {
    fast_ica_with(rec, &IcaOptions::new(n_components, seed))
}

pub fn fast_ica_with(rec: &Recording, opts: &IcaOptions) -> Result<IcaDecomposition> {
    let n_ch = rec.channels.len();
    let n_t = rec.n_samples();
    let n_comp = opts.n_components;
    if n_comp == 0 || n_comp > n_ch {
        return Err(Error::Precondition(format!(
            "n_components {n_comp} must be in 1..={n_ch}"
        )));
    }
    if n_t < 2 || opts.fit_stride == 0 {
        return Err(Error::Precondition("need at least two samples and a positive stride".to_string()));
    }

    let channel_means: Vec<f64> = (0..n_ch).map(|c| mean(rec.samples.row(c))).collect();
    let mut centred = rec.samples.clone();
    for (c, m) in channel_means.iter().enumerate() {
        for v in centred.row_mut(c) {
            *v -= m;
        }
    }

    let mut cov = centred.gram_rows();
    for i in 0..n_ch {
        for j in 0..n_ch {
            cov[(i, j)] /= n_t as f64;
        }
    }
    let eig = SymmetricEigen::new(&cov);
    let floor = eig.values[0] * 1e-12;
    let mut whitening = Matrix::zeros(n_comp, n_ch);
    let mut dewhitening = Matrix::zeros(n_ch, n_comp);
    for k in 0..n_comp {
        let lambda = eig.values[k];
        if !(lambda > floor && lambda > 0.0) {
            return Err(Error::RankDeficient { eigenvalue: lambda });
        }
        let s = sqrt(lambda);
        for c in 0..n_ch {
            whitening[(k, c)] = eig.vectors[(c, k)] / s;
            dewhitening[(c, k)] = eig.vectors[(c, k)] * s;
        }
    }

    let white = whitening.matmul(&centred);
    let fit = if opts.fit_stride == 1 {
        white.clone()
    } else {
        let cols: Vec<usize> = (0..n_t).step_by(opts.fit_stride).collect();
        let mut m = Matrix::zeros(n_comp, cols.len());
        for k in 0..n_comp {
            for (j, &t) in cols.iter().enumerate() {
                m[(k, j)] = white[(k, t)];
            }
        }
        m
    };

    let mut rng = Stream::new(opts.seed, streams::ICA, 0);
    let init = Matrix::from_vec(
        n_comp,
        n_comp,
        (0..n_comp * n_comp).map(|_| rng.normal()).collect(),
    );
    let mut w = symmetric_decorrelation(&init);
    let mut report = ConvergenceReport {
        iterations: 0,
        final_delta: f64::INFINITY,
        converged: false,
    };
    let n_fit = fit.cols() as f64;
    for iter in 1..=opts.max_iter {
        let mut projected = w.matmul(&fit);
        let mut mean_derivative = vec![0.0; n_comp];
        for i in 0..n_comp {
            let mut acc = 0.0;
            for u in projected.row_mut(i) {
                let g = tanh(*u);
                acc += 1.0 - g * g;
                *u = g;
            }
            mean_derivative[i] = acc / n_fit;
        }
        let mut next = Matrix::zeros(n_comp, n_comp);
        for i in 0..n_comp {
            for k in 0..n_comp {
                next[(i, k)] = dot(projected.row(i), fit.row(k)) / n_fit - mean_derivative[i] * w[(i, k)];
            }
        }
        let next = symmetric_decorrelation(&next);
        let delta = (0..n_comp)
            .map(|i| (1.0 - dot(next.row(i), w.row(i)).abs()).abs())
            .fold(0.0, f64::max);
        w = next;
        report.iterations = iter;
        report.final_delta = delta;
        if delta < opts.tolerance {
            report.converged = true;
            break;
        }
    }

    let unmixing = w.matmul(&whitening);
    let mixing = dewhitening.matmul(&w.transpose());
    let activations = unmixing.matmul(&centred);
    Ok(IcaDecomposition {
        channels: rec.channels.clone(),
        channel_means,
        whitening,
        dewhitening,
        rotation: w,
        unmixing,
        mixing,
        activations,
        report,
    })
}

/// `(W W^T)^{-1/2} W`: the nearest matrix with orthonormal rows.
fn symmetric_decorrelation(w: &Matrix) -> Matrix {
    let eig = SymmetricEigen::new(&w.gram_rows());
    let n = w.rows();
    let mut inv_sqrt = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += eig.vectors[(i, k)] * eig.vectors[(j, k)] / sqrt(eig.values[k].max(f64::MIN_POSITIVE));
            }
            inv_sqrt[(i, j)] = acc;
        }
    }
    inv_sqrt.matmul(w)
}

fn check_channels(rec: &Recording, decomp: &IcaDecomposition) -> Result<()> {
    if rec.channels != decomp.channels {
        return Err(Error::Precondition(
            "recording channels differ from the decomposition's".to_string(),
        ));
    }
    Ok(())
}

/// Rebuilds the recording from the kept components only:
/// `mixing[:, keep] * sources[keep, :] + channel means`, with the sources
/// computed from `rec` through the decomposition's unmixing matrix.
pub fn remove_components(rec: &Recording, decomp: &IcaDecomposition, drop: &[usize]) -> Result<Recording> {
    check_channels(rec, decomp)?;
    let n_comp = decomp.n_components();
    if let Some(&bad) = drop.iter().find(|&&d| d >= n_comp) {
        return Err(Error::IndexOutOfRange { index: bad, len: n_comp });
    }
    let mut centred = rec.samples.clone();
    for (c, m) in decomp.channel_means.iter().enumerate() {
        for v in centred.row_mut(c) {
            *v -= m;
        }
    }
    let mut sources = decomp.unmixing.matmul(&centred);
    for &d in drop {
        sources.row_mut(d).fill(0.0);
    }
    let mut out = decomp.mixing.matmul(&sources);
    for (c, m) in decomp.channel_means.iter().enumerate() {
        for v in out.row_mut(c) {
            *v += m;
        }
    }
    Ok(rec.with_samples(out))
}

/// Advisory blink detector: components whose activation correlates with
/// the named frontal channel at `|r| >= threshold`.
pub fn flag_blink_components(
    decomp: &IcaDecomposition,
    rec: &Recording,
    channel: &str,
    threshold: f64,
) -> Result<Vec<usize>> {
    check_channels(rec, decomp)?;
    let frontal = rec.channel(channel)?;
    if frontal.len() != decomp.activations.cols() {
        return Err(Error::LengthMismatch {
            left: frontal.len(),
            right: decomp.activations.cols(),
        });
    }
    Ok((0..decomp.n_components())
        .filter(|&k| pearson(decomp.activations.row(k), frontal).abs() >= threshold)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn rec_from(rows: Vec<Vec<f64>>) -> Recording {
        let names = (0..rows.len()).map(|i| format!("C{i}")).collect();
        Recording::new("p", 1000.0, names, Matrix::from_rows(&rows), vec![]).unwrap()
    }

    fn sources(n: usize) -> (Vec<f64>, Vec<f64>) {
        let sine = (0..n).map(|t| (2.0 * PI * 1.0 * t as f64 / 1000.0).sin()).collect();
        let square = (0..n)
            .map(|t| if (0.7 * t as f64 / 1000.0).fract() < 0.5 { 1.0 } else { -1.0 })
            .collect();
        (sine, square)
    }

    #[test]
    fn recovers_two_mixed_sources() {
        let n = 10_000;
        let (s1, s2) = sources(n);
        let x1: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| 1.0 * a + 0.6 * b + 3.0).collect();
        let x2: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| 0.4 * a + 1.0 * b - 1.0).collect();
        let d = fast_ica(&rec_from(vec![x1, x2]), 2, 7).unwrap();
        assert!(d.report.converged);
        let r = |k: usize, s: &[f64]| pearson(d.activations.row(k), s).abs();
        let direct = r(0, &s1).min(r(1, &s2));
        let swapped = r(0, &s2).min(r(1, &s1));
        assert!(direct.max(swapped) >= 0.99, "{direct} {swapped}");
        let ident = d.unmixing.matmul(&d.mixing);
        assert!(ident.max_abs_diff(&Matrix::identity(2)) < 1e-6);
    }

    #[test]
    fn whitened_independent_input_gives_signed_permutation() {
        let n = 20_000;
        let mut rng = Stream::new(4, 0, 0);
        let (_, square) = sources(n);
        let uniform: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
        // Centre and scale each source to unit variance, then remove the
        // residual sample correlation so the covariance is exactly I.
        let std = |v: &[f64]| {
            let m = mean(v);
            let s = sqrt(v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64);
            v.iter().map(|x| (x - m) / s).collect::<Vec<f64>>()
        };
        let a = std(&uniform);
        let b0 = std(&square);
        let c = dot(&a, &b0) / n as f64;
        let b = std(&b0.iter().zip(&a).map(|(y, x)| y - c * x).collect::<Vec<_>>());
        let d = fast_ica(&rec_from(vec![a, b]), 2, 3).unwrap();
        for i in 0..2 {
            let row = d.unmixing.row(i);
            let (big, small) = if row[0].abs() > row[1].abs() { (row[0], row[1]) } else { (row[1], row[0]) };
            assert!((big.abs() - 1.0).abs() < 0.02, "{row:?}");
            assert!(small.abs() < 0.05, "{row:?}");
        }
    }

    #[test]
    fn too_many_components_rejected() {
        let (s1, s2) = sources(100);
        let r = rec_from(vec![s1, s2]);
        assert!(matches!(fast_ica(&r, 3, 0), Err(Error::Precondition(_))));
        assert!(matches!(fast_ica(&r, 0, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn duplicated_channel_is_rank_deficient() {
        let (s1, _) = sources(500);
        let r = rec_from(vec![s1.clone(), s1]);
        assert!(matches!(fast_ica(&r, 2, 0), Err(Error::RankDeficient { .. })));
    }

    fn noisy_three_channel() -> Recording {
        let n = 5000;
        let mut rng = Stream::new(8, 0, 0);
        let (s1, s2) = sources(n);
        let s3: Vec<f64> = (0..n).map(|_| rng.uniform() - 0.5).collect();
        let rows = (0..3)
            .map(|c| {
                (0..n)
                    .map(|t| (c as f64 + 1.0) * s1[t] + 0.3 * s2[t] * (2.0 - c as f64) + s3[t] * 0.5 * ((c * c) as f64 + 1.0) + 10.0 * c as f64)
                    .collect()
            })
            .collect();
        rec_from(rows)
    }

    #[test]
    fn empty_drop_is_identity_and_full_drop_gives_means() {
        let r = noisy_three_channel();
        let d = fast_ica(&r, 3, 1).unwrap();
        let same = remove_components(&r, &d, &[]).unwrap();
        let n = (r.samples.rows() * r.n_samples()) as f64;
        let rms = sqrt(
            same.samples
                .as_slice()
                .iter()
                .zip(r.samples.as_slice())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                / n,
        );
        assert!(rms < 1e-6, "rms {rms}");

        let flat = remove_components(&r, &d, &[0, 1, 2]).unwrap();
        for c in 0..3 {
            assert!(flat.samples.row(c).iter().all(|v| (v - d.channel_means[c]).abs() < 1e-9));
        }
        assert!(matches!(
            remove_components(&r, &d, &[3]),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let r = noisy_three_channel();
        assert_eq!(fast_ica(&r, 3, 9).unwrap(), fast_ica(&r, 3, 9).unwrap());
    }
}
