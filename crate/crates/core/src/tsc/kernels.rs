use alloc::vec::Vec;

use crate::math::{floor, log2, powf};
use crate::rng::{streams, Stream};

pub const KERNEL_LENGTHS: [usize; 3] = [7, 9, 11];

/// One random dilated kernel. Weights are mean-centred, so adding a
/// constant to the input leaves the convolution output unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub dilation: usize,
    /// `(len - 1) * dilation / 2` when padded, else 0. Padding repeats the
    /// edge samples.
    pub padding: usize,
}

impl Kernel {
    /// Draws kernel `index` of the bank seeded by `seed` for series of
    /// `series_len` samples.
    pub fn generate(seed: u64, index: u64, series_len: usize) -> Self {
        let mut rng = Stream::new(seed, streams::KERNELS, index);
        let len = KERNEL_LENGTHS[rng.below(KERNEL_LENGTHS.len() as u64) as usize];
        let mut weights: Vec<f64> = (0..len).map(|_| rng.normal()).collect();
        let m = weights.iter().sum::<f64>() / len as f64;
        for w in &mut weights {
            *w -= m;
        }
        let bias = rng.uniform_range(-1.0, 1.0);
        let max_exponent = if series_len > len {
            log2((series_len - 1) as f64 / (len - 1) as f64)
        } else {
            0.0
        };
        let dilation = (floor(powf(2.0, rng.uniform_range(0.0, max_exponent))) as usize).max(1);
        let padding = if rng.below(2) == 1 { (len - 1) * dilation / 2 } else { 0 };
        Self {
            weights,
            bias,
            dilation,
            padding,
        }
    }

    /// Proportion of positive values and maximum of the convolution output.
    pub fn features(&self, x: &[f64]) -> (f64, f64) {
        let n = x.len() as isize;
        let span = ((self.weights.len() - 1) * self.dilation) as isize;
        let pad = self.padding as isize;
        let out_len = n + 2 * pad - span;
        if out_len <= 0 || n == 0 {
            return (0.0, 0.0);
        }
        let mut positive = 0usize;
        let mut max = f64::NEG_INFINITY;
        for i in 0..out_len {
            let origin = i - pad;
            let mut acc = self.bias;
            for (j, w) in self.weights.iter().enumerate() {
                let idx = (origin + (j * self.dilation) as isize).clamp(0, n - 1);
                acc += w * x[idx as usize];
            }
            if acc > 0.0 {
                positive += 1;
            }
            if acc > max {
                max = acc;
            }
        }
        (positive as f64 / out_len as f64, max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelBank {
    pub seed: u64,
    pub series_len: usize,
    pub kernels: Vec<Kernel>,
}

impl KernelBank {
    pub fn generate(seed: u64, n_kernels: usize, series_len: usize) -> Self {
        Self {
            seed,
            series_len,
            kernels: (0..n_kernels as u64)
                .map(|i| Kernel::generate(seed, i, series_len))
                .collect(),
        }
    }

    pub fn n_features(&self) -> usize {
        2 * self.kernels.len()
    }

    /// Feature row `[ppv_0, max_0, ppv_1, max_1, ...]` for `x / input_scale`.
    pub fn transform(&self, x: &[f64], input_scale: f64) -> Vec<f64> {
        let scaled: Vec<f64> = x.iter().map(|v| v / input_scale).collect();
        let mut out = Vec::with_capacity(self.n_features());
        for k in &self.kernels {
            let (ppv, max) = k.features(&scaled);
            out.push(ppv);
            out.push(max);
        }
        out
    }
}
