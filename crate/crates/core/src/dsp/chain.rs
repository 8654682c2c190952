use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{
    bandpass, baseline_correct, extract_epochs, fast_ica_with, flag_blink_components, interpolate_channels,
    reject_epochs, remove_components, rereference, ConvergenceReport, FilterSpec, IcaOptions,
    DEFAULT_REJECT_THRESHOLD_UV,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::montage::Montage;
use crate::recording::{Epoch, Recording, EPOCH_END_MS, EPOCH_START_MS};

/// Preprocessing stages in their mandatory order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Rereference,
    Bandpass,
    Interpolate,
    Ica,
    Epoch,
    Baseline,
    Reject,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Rereference => "rereference",
            Stage::Bandpass => "bandpass",
            Stage::Interpolate => "interpolate",
            Stage::Ica => "ica",
            Stage::Epoch => "epoch",
            Stage::Baseline => "baseline",
            Stage::Reject => "reject",
        }
    }
}

/// Records applied stages and refuses any stage that would run at or before
/// the last one. Optional stages may be skipped.
#[derive(Debug, Clone, Default)]
pub struct ChainGuard {
    history: Vec<Stage>,
}

impl ChainGuard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&mut self, stage: Stage) -> Result<()> {
        if let Some(&last) = self.history.last() {
            if stage <= last {
                return Err(Error::StageOutOfOrder {
                    stage: stage.as_str(),
                    after: last.as_str(),
                });
            }
        }
        self.history.push(stage);
        Ok(())
    }

    pub fn history(&self) -> &[Stage] {
        &self.history
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcaStep {
    /// Defaults to the rank left after referencing and interpolation.
    pub n_components: Option<usize>,
    pub seed: u64,
    /// Component indices removed unconditionally.
    pub drop: Vec<usize>,
    /// Also drop components flagged by the frontal-correlation heuristic.
    pub auto_blink: bool,
    pub blink_channel: String,
    pub blink_threshold: f64,
    pub fit_stride: usize,
}

impl Default for IcaStep {
    fn default() -> Self {
        Self {
            n_components: None,
            seed: 0,
            drop: Vec::new(),
            auto_blink: true,
            blink_channel: "FPz".to_string(),
            blink_threshold: 0.7,
            fit_stride: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessConfig {
    pub references: Vec<String>,
    pub filter: FilterSpec,
    pub bad_channels: Vec<String>,
    pub ica: Option<IcaStep>,
    pub window_start_ms: i32,
    pub window_end_ms: i32,
    pub reject_threshold_uv: f64,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            references: alloc::vec!["M1".to_string(), "M2".to_string()],
            filter: FilterSpec::default(),
            bad_channels: Vec::new(),
            ica: None,
            window_start_ms: EPOCH_START_MS,
            window_end_ms: EPOCH_END_MS,
            reject_threshold_uv: DEFAULT_REJECT_THRESHOLD_UV,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessOutput {
    pub epochs: Vec<Epoch>,
    pub rejected: Vec<String>,
    pub ica_report: Option<ConvergenceReport>,
    pub dropped_components: Vec<usize>,
    pub stages: Vec<Stage>,
}

/// Runs the full chain: re-reference, band-pass, interpolate, optional ICA
/// clean-up, epoch, baseline-correct, reject.
pub fn preprocess(rec: &Recording, montage: &Montage, config: &PreprocessConfig) -> Result<PreprocessOutput> {
    let mut guard = ChainGuard::new();
    let refs: Vec<&str> = config.references.iter().map(String::as_str).collect();
    let bad: Vec<&str> = config.bad_channels.iter().map(String::as_str).collect();

    guard.advance(Stage::Rereference)?;
    let rec = rereference(rec, &refs)?;
    guard.advance(Stage::Bandpass)?;
    let rec = bandpass(&rec, &config.filter)?;
    guard.advance(Stage::Interpolate)?;
    let mut rec = interpolate_channels(&rec, &bad, montage)?;

    let mut ica_report = None;
    let mut dropped_components = Vec::new();
    if let Some(step) = &config.ica {
        guard.advance(Stage::Ica)?;
        let (cleaned, report, dropped) = ica_cleanup(&rec, &refs, bad.len(), step)?;
        rec = cleaned;
        ica_report = Some(report);
        dropped_components = dropped;
    }

    guard.advance(Stage::Epoch)?;
    let epochs = extract_epochs(&rec, config.window_start_ms, config.window_end_ms)?;
    guard.advance(Stage::Baseline)?;
    let epochs = epochs.iter().map(baseline_correct).collect::<Result<Vec<_>>>()?;
    guard.advance(Stage::Reject)?;
    let (epochs, rejected) = reject_epochs(epochs, config.reject_threshold_uv);

    Ok(PreprocessOutput {
        epochs,
        rejected,
        ica_report,
        dropped_components,
        stages: guard.history().to_vec(),
    })
}

// ICA over the non-reference channels; the mastoids are linearly dependent
// after referencing and stay untouched.
fn ica_cleanup(
    rec: &Recording,
    refs: &[&str],
    n_interpolated: usize,
    step: &IcaStep,
) -> Result<(Recording, ConvergenceReport, Vec<usize>)> {
    let keep: Vec<usize> = (0..rec.channels.len())
        .filter(|&i| !refs.contains(&rec.channels[i].as_str()))
        .collect();
    let mut sub = Matrix::zeros(keep.len(), rec.n_samples());
    for (r, &i) in keep.iter().enumerate() {
        sub.row_mut(r).copy_from_slice(rec.samples.row(i));
    }
    let sub_rec = Recording {
        participant_id: rec.participant_id.clone(),
        sample_rate_hz: rec.sample_rate_hz,
        channels: keep.iter().map(|&i| rec.channels[i].clone()).collect(),
        samples: sub,
        events: Vec::new(),
    };
    let n_components = step
        .n_components
        .unwrap_or_else(|| keep.len().saturating_sub(n_interpolated));
    let opts = IcaOptions {
        fit_stride: step.fit_stride.max(1),
        ..IcaOptions::new(n_components, step.seed)
    };
    let decomp = fast_ica_with(&sub_rec, &opts)?;
    let mut drop = step.drop.clone();
    if step.auto_blink {
        drop.extend(flag_blink_components(&decomp, &sub_rec, &step.blink_channel, step.blink_threshold)?);
    }
    drop.sort_unstable();
    drop.dedup();
    let cleaned = remove_components(&sub_rec, &decomp, &drop)?;
    let mut samples = rec.samples.clone();
    for (r, &i) in keep.iter().enumerate() {
        samples.row_mut(i).copy_from_slice(cleaned.samples.row(r));
    }
    Ok((rec.with_samples(samples), decomp.report, drop))
}
