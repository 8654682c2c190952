//! In-memory data model: conditions, continuous recordings, epochs and
//! behavioural trial logs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math::{ceil, round};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionLabel {
    Occlusion,
    OccludedHazard,
    OccludedPedestrian,
    VisiblePedestrian,
    Control,
}

impl ConditionLabel {
    pub const ALL: [ConditionLabel; 5] = [
        Self::Occlusion,
        Self::OccludedHazard,
        Self::OccludedPedestrian,
        Self::VisiblePedestrian,
        Self::Control,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Occlusion => "Occlusion",
            Self::OccludedHazard => "OccludedHazard",
            Self::OccludedPedestrian => "OccludedPedestrian",
            Self::VisiblePedestrian => "VisiblePedestrian",
            Self::Control => "Control",
        }
    }

    pub fn valid_for(self, experiment: u8) -> bool {
        match experiment {
            1 => matches!(self, Self::Occlusion | Self::OccludedHazard),
            2 => !matches!(self, Self::OccludedHazard),
            _ => false,
        }
    }
}

impl fmt::Display for ConditionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))
    }
}

/// A condition label tied to the experiment that defines it. Experiment 1
/// contrasts occlusion with an occluded hazard; experiment 2 has occluded
/// pedestrian, occlusion, visible pedestrian and control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    experiment: u8,
    label: ConditionLabel,
}

impl Condition {
    pub fn new(experiment: u8, label: ConditionLabel) -> Result<Self> {
        if !label.valid_for(experiment) {
            return Err(Error::InvalidCondition {
                experiment,
                label: label.to_string(),
            });
        }
        Ok(Self { experiment, label })
    }

    pub fn experiment(self) -> u8 {
        self.experiment
    }

    pub fn label(self) -> ConditionLabel {
        self.label
    }

    pub const fn exp1(label: ConditionLabel) -> Self {
        Self { experiment: 1, label }
    }

    pub const fn exp2(label: ConditionLabel) -> Self {
        Self { experiment: 2, label }
    }

    pub const EXP1: [Condition; 2] = [
        Self::exp1(ConditionLabel::Occlusion),
        Self::exp1(ConditionLabel::OccludedHazard),
    ];

    pub const EXP2: [Condition; 4] = [
        Self::exp2(ConditionLabel::OccludedPedestrian),
        Self::exp2(ConditionLabel::Occlusion),
        Self::exp2(ConditionLabel::VisiblePedestrian),
        Self::exp2(ConditionLabel::Control),
    ];
}

/// Formats as `<experiment>:<label>`, e.g. `2:Occlusion`.
impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.experiment, self.label)
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (exp, label) = s
            .split_once(':')
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))?;
        let experiment: u8 = exp
            .parse()
            .map_err(|_| Error::UnknownCondition(s.to_string()))?;
        Condition::new(experiment, label.parse()?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventMarker {
    pub sample_index: usize,
    pub trial_id: String,
    pub condition: Condition,
    pub clip_id: String,
}

/// Continuous multi-channel EEG, `samples` laid out `[channel x time]` in
/// microvolts.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub participant_id: String,
    pub sample_rate_hz: f64,
    pub channels: Vec<String>,
    pub samples: Matrix,
    pub events: Vec<EventMarker>,
}

impl Recording {
    pub fn new(
        participant_id: impl Into<String>,
        sample_rate_hz: f64,
        channels: Vec<String>,
        samples: Matrix,
        events: Vec<EventMarker>,
    ) -> Result<Self> {
        let rec = Self {
            participant_id: participant_id.into(),
            sample_rate_hz,
            channels,
            samples,
            events,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::InvalidRecording(format!(
                "sample rate {} is not positive",
                self.sample_rate_hz
            )));
        }
        if self.samples.rows() != self.channels.len() {
            return Err(Error::InvalidRecording(format!(
                "{} channel names for {} sample rows",
                self.channels.len(),
                self.samples.rows()
            )));
        }
        let mut names = BTreeSet::new();
        for c in &self.channels {
            if !names.insert(c.as_str()) {
                return Err(Error::DuplicateChannel(c.clone()));
            }
        }
        let n = self.n_samples();
        let mut trials = BTreeSet::new();
        for e in &self.events {
            if e.sample_index >= n {
                return Err(Error::EventOutOfRange {
                    trial_id: e.trial_id.clone(),
                    sample_index: e.sample_index as i64,
                    n_samples: n,
                });
            }
            if !trials.insert(e.trial_id.as_str()) {
                return Err(Error::DuplicateTrial(e.trial_id.clone()));
            }
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        self.samples.cols()
    }

    pub fn channel_index(&self, name: &str) -> Result<usize> {
        self.channels
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownChannel(name.to_string()))
    }

    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        Ok(self.samples.row(self.channel_index(name)?))
    }

    /// Trial ids whose event leaves fewer than `post_ms` of data after it.
    pub fn events_without_room(&self, post_ms: f64) -> Vec<&str> {
        let need = ceil(post_ms / 1000.0 * self.sample_rate_hz) as usize;
        self.events
            .iter()
            .filter(|e| e.sample_index + need > self.n_samples())
            .map(|e| e.trial_id.as_str())
            .collect()
    }

    /// Returns a copy carrying new sample data but the same metadata.
    pub fn with_samples(&self, samples: Matrix) -> Self {
        debug_assert_eq!(samples.rows(), self.channels.len());
        Self {
            participant_id: self.participant_id.clone(),
            sample_rate_hz: self.sample_rate_hz,
            channels: self.channels.clone(),
            samples,
            events: self.events.clone(),
        }
    }
}

/// Converts a millisecond offset to a whole number of samples.
pub fn ms_to_samples(ms: f64, sample_rate_hz: f64) -> i64 {
    round(ms / 1000.0 * sample_rate_hz) as i64
}

pub const EPOCH_START_MS: i32 = -500;
pub const EPOCH_END_MS: i32 = 600;

/// One trial's time-locked window. `samples` is `[channel x time]`; the
/// event sample sits at relative index `pre_samples()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Epoch {
    pub participant_id: String,
    pub trial_id: String,
    pub clip_id: String,
    pub condition: Condition,
    pub channels: Vec<String>,
    pub samples: Matrix,
    pub window_start_ms: i32,
    pub window_end_ms: i32,
    pub sample_rate_hz: f64,
    pub baseline_corrected: bool,
}

impl Epoch {
    pub fn pre_samples(&self) -> usize {
        ms_to_samples(-self.window_start_ms as f64, self.sample_rate_hz) as usize
    }

    pub fn len(&self) -> usize {
        self.samples.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.cols() == 0
    }

    pub fn expected_len(window_start_ms: i32, window_end_ms: i32, sample_rate_hz: f64) -> usize {
        ms_to_samples((window_end_ms - window_start_ms) as f64, sample_rate_hz) as usize
    }

    pub fn channel_index(&self, name: &str) -> Result<usize> {
        self.channels
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownChannel(name.to_string()))
    }

    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        Ok(self.samples.row(self.channel_index(name)?))
    }
}

/// Behavioural record of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    pub participant_id: String,
    pub trial_id: String,
    pub condition: Condition,
    pub pressed: bool,
    pub press_latency_ms: Option<f64>,
}

impl TrialLog {
    pub fn new(
        participant_id: impl Into<String>,
        trial_id: impl Into<String>,
        condition: Condition,
        pressed: bool,
        press_latency_ms: Option<f64>,
    ) -> Result<Self> {
        let log = Self {
            participant_id: participant_id.into(),
            trial_id: trial_id.into(),
            condition,
            pressed,
            press_latency_ms,
        };
        log.validate()?;
        Ok(log)
    }

    pub fn validate(&self) -> Result<()> {
        let reason = match (self.pressed, self.press_latency_ms) {
            (true, None) => Some("pressed trial has no latency"),
            (false, Some(_)) => Some("unpressed trial has a latency"),
            (true, Some(l)) if !(l >= 0.0 && l.is_finite()) => Some("latency must be non-negative"),
            _ => None,
        };
        match reason {
            Some(r) => Err(Error::InvalidTrialLog {
                trial_id: self.trial_id.clone(),
                reason: r.to_string(),
            }),
            None => Ok(()),
        }
    }
}
