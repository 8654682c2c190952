//! Allocation-only core of the implicit hazard annotation pipeline.
//!
//! Everything here is pure computation over in-memory data: EEG
//! preprocessing, ERP measurement, the statistics used to contrast
//! conditions, a random-convolution-kernel classifier for single-trial ERP
//! windows, and a synthetic cohort generator that serves as ground truth.
//! File formats, the command line and parallel drivers live in the
//! `hazard-eeg` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dsp;
pub mod erp;
mod error;
pub mod fft;
pub mod linalg;
pub mod math;
pub mod montage;
pub mod recording;
pub mod rng;
pub mod stats;
pub mod synth;
pub mod tsc;

pub use error::{Error, Result};
pub use montage::Montage;
pub use recording::{Condition, ConditionLabel, Epoch, EventMarker, Recording, TrialLog};
