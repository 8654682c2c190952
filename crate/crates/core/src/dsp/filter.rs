use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::{cos, sin};
use crate::recording::Recording;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterDesign {
    Butterworth,
}

/// Band-pass realised as a high-pass and a low-pass Butterworth cascade of
/// `order_per_pass` each, run forward then backward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub low_cut_hz: f64,
    pub high_cut_hz: f64,
    pub order_per_pass: usize,
    pub design: FilterDesign,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            low_cut_hz: 0.1,
            high_cut_hz: 40.0,
            order_per_pass: 4,
            design: FilterDesign::Butterworth,
        }
    }
}

impl FilterSpec {
    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        let nyquist = sample_rate_hz / 2.0;
        if !(self.low_cut_hz > 0.0 && self.low_cut_hz < self.high_cut_hz && self.high_cut_hz < nyquist) {
            return Err(Error::InvalidSpec(format!(
                "need 0 < {} < {} < {nyquist}",
                self.low_cut_hz, self.high_cut_hz
            )));
        }
        if self.order_per_pass == 0 || self.order_per_pass % 2 != 0 {
            return Err(Error::InvalidSpec(format!(
                "order {} must be even and positive",
                self.order_per_pass
            )));
        }
        Ok(())
    }

    /// Second-order sections: high-pass sections first, then low-pass.
    pub fn design(&self, sample_rate_hz: f64) -> Result<SosFilter> {
        self.validate(sample_rate_hz)?;
        let mut sections = butterworth_sections(self.order_per_pass, self.low_cut_hz, sample_rate_hz, true);
        sections.extend(butterworth_sections(
            self.order_per_pass,
            self.high_cut_hz,
            sample_rate_hz,
            false,
        ));
        Ok(SosFilter { sections })
    }

    /// Total order of the cascade.
    pub fn total_order(&self) -> usize {
        2 * self.order_per_pass
    }
}

/// Normalised biquad (`a0 = 1`), applied in transposed direct form II.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

fn butterworth_sections(order: usize, cutoff_hz: f64, fs: f64, highpass: bool) -> Vec<Biquad> {
    let w0 = 2.0 * PI * cutoff_hz / fs;
    let (sw, cw) = (sin(w0), cos(w0));
    // 1 - cos(w0) without cancellation at very low cutoffs.
    let one_minus_cos = 2.0 * sin(w0 / 2.0) * sin(w0 / 2.0);
    (0..order / 2)
        .map(|k| {
            let q = 1.0 / (2.0 * sin(PI * (2 * k + 1) as f64 / (2 * order) as f64));
            let alpha = sw / (2.0 * q);
            let a0 = 1.0 + alpha;
            let b = if highpass {
                let h = (2.0 - one_minus_cos) / 2.0;
                [h, -2.0 * h, h]
            } else {
                let l = one_minus_cos / 2.0;
                [l, 2.0 * l, l]
            };
            Biquad {
                b: [b[0] / a0, b[1] / a0, b[2] / a0],
                a: [-2.0 * cw / a0, (1.0 - alpha) / a0],
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SosFilter {
    pub sections: Vec<Biquad>,
}

impl SosFilter {
    /// Per-section states that make the cascade's response to a unit step
    /// already settled, so a constant input produces no start-up transient.
    pub fn step_steady_state(&self) -> Vec<[f64; 2]> {
        let mut gain = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let [b0, b1, b2] = s.b;
                let [a1, a2] = s.a;
                let y = gain * (b0 + b1 + b2) / (1.0 + a1 + a2);
                let z2 = gain * b2 - a2 * y;
                let z1 = gain * b1 - a1 * y + z2;
                gain = y;
                [z1, z2]
            })
            .collect()
    }

    /// Single causal pass with states initialised to `initial * steady`.
    pub fn run(&self, x: &mut [f64], steady: &[[f64; 2]], initial: f64) {
        for (s, zi) in self.sections.iter().zip(steady) {
            let [b0, b1, b2] = s.b;
            let [a1, a2] = s.a;
            let mut z1 = zi[0] * initial;
            let mut z2 = zi[1] * initial;
            for v in x.iter_mut() {
                let input = *v;
                let y = b0 * input + z1;
                z1 = b1 * input - a1 * y + z2;
                z2 = b2 * input - a2 * y;
                *v = y;
            }
        }
    }

    /// Magnitude of the single-pass frequency response at `freq_hz`.
    pub fn magnitude(&self, freq_hz: f64, fs: f64) -> f64 {
        let w = 2.0 * PI * freq_hz / fs;
        let (c1, s1) = (cos(w), sin(w));
        let (c2, s2) = (cos(2.0 * w), sin(2.0 * w));
        self.sections.iter().fold(1.0, |acc, s| {
            let nr = s.b[0] + s.b[1] * c1 + s.b[2] * c2;
            let ni = -(s.b[1] * s1 + s.b[2] * s2);
            let dr = 1.0 + s.a[0] * c1 + s.a[1] * c2;
            let di = -(s.a[0] * s1 + s.a[1] * s2);
            acc * crate::math::sqrt((nr * nr + ni * ni) / (dr * dr + di * di))
        })
    }
}

/// Zero-phase filtering: odd-reflection padding of `pad` samples at both
/// ends, forward pass, reversed backward pass, trim.
pub fn filtfilt(filter: &SosFilter, x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let pad = pad.min(n - 1);
    let mut ext = Vec::with_capacity(n + 2 * pad);
    let (first, last) = (x[0], x[n - 1]);
    ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
    ext.extend_from_slice(x);
    ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

    let steady = filter.step_steady_state();
    let x0 = ext[0];
    filter.run(&mut ext, &steady, x0);
    ext.reverse();
    let y0 = ext[0];
    filter.run(&mut ext, &steady, y0);
    ext.reverse();
    ext.drain(..pad);
    ext.truncate(n);
    ext
}

/// Filters every channel independently with padding of three times the
/// cascade order.
pub fn bandpass(rec: &Recording, spec: &FilterSpec) -> Result<Recording> {
    let filter = spec.design(rec.sample_rate_hz)?;
    let pad = 3 * spec.total_order();
    let mut samples = rec.samples.clone();
    for c in 0..samples.rows() {
        let y = filtfilt(&filter, samples.row(c), pad);
        samples.row_mut(c).copy_from_slice(&y);
    }
    Ok(rec.with_samples(samples))
}
