//! Deterministic random streams.
//!
//! All randomness flows through ChaCha8 keyed by a 64-bit master seed.
//! Independent streams (one per participant, per kernel bank, per split)
//! are selected with the ChaCha stream counter, so the order in which
//! streams are consumed never changes their contents.

use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math::{cos, ln, sin, sqrt};

/// Stream namespaces. The stream id is `namespace << 32 | index`.
pub mod streams {
    pub const PARTICIPANT: u64 = 1;
    pub const KERNELS: u64 = 2;
    pub const SPLIT: u64 = 3;
    pub const ICA: u64 = 4;
    pub const SHUFFLE: u64 = 5;
    pub const NOISE: u64 = 6;
}

#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, namespace: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream((namespace << 32) | (index & 0xffff_ffff));
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n` (Lemire's nearly-divisionless method).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let mut m = (self.inner.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.inner.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Standard normal via Box-Muller; one variate per call, no caching.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        sqrt(-2.0 * ln(u1)) * cos(2.0 * PI * u2)
    }

    /// Both Box-Muller variates from one pair of uniforms.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = sqrt(-2.0 * ln(u1));
        let theta = 2.0 * PI * u2;
        (r * cos(theta), r * sin(theta))
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Exponential with the given rate.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -ln(1.0 - self.uniform()) / rate
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
