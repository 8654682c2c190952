//! Continuous-EEG preprocessing: mastoid re-referencing, zero-phase
//! band-pass filtering, bad-channel interpolation, ICA artifact removal,
//! epoch extraction, baseline correction and amplitude-based rejection.

mod chain;
mod epoching;
mod filter;
mod ica;
mod interpolate;
mod reference;

pub use chain::{preprocess, ChainGuard, IcaStep, PreprocessConfig, PreprocessOutput, Stage};
pub use epoching::{baseline_correct, extract_epochs, reject_epochs, DEFAULT_REJECT_THRESHOLD_UV};
pub use filter::{bandpass, filtfilt, Biquad, FilterDesign, FilterSpec, SosFilter};
pub use ica::{
    fast_ica, fast_ica_with, flag_blink_components, remove_components, ConvergenceReport,
    IcaDecomposition, IcaOptions,
};
pub use interpolate::{interpolate_channels, interpolation_weights, IDW_NEIGHBOURS, IDW_POWER};
pub use reference::rereference;
