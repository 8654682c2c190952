//! Synthetic EEG cohort with known ground truth: pink background noise,
//! Gaussian ERP bumps injected per condition, optional blinks and
//! condition-dependent button presses.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::erp::{ComponentName, Polarity};
use crate::error::{Error, Result};
use crate::fft::fft_in_place;
use crate::linalg::Matrix;
use crate::math::{ceil, exp, floor, powf, round, sin, sqrt};
use crate::montage::{builtin_montage, Montage};
use crate::recording::{
    Condition, ConditionLabel, EventMarker, Recording, TrialLog, EPOCH_END_MS, EPOCH_START_MS,
};
use crate::rng::{streams, Stream};

pub const DEFAULT_CHANNELS: [&str; 12] = [
    "FP1", "FPz", "FP2", "AF3", "AF4", "F3", "F1", "Fz", "F2", "F4", "M1", "M2",
];

pub const BLINK_DURATION_MS: f64 = 300.0;

/// A Gaussian bump added to trials of the listed conditions, centred on one
/// electrode and falling off with great-circle distance from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTemplate {
    pub component: ComponentName,
    pub polarity: Polarity,
    pub centre: String,
    /// Width of the Gaussian spatial falloff, in radians on the unit sphere.
    pub spread_rad: f64,
    pub peak_ms: f64,
    pub width_ms: f64,
    pub amplitude_uv: f64,
    pub participant_sd_uv: f64,
    pub trial_sd_uv: f64,
    pub latency_jitter_ms: f64,
    pub conditions: Vec<Condition>,
    /// Paired Cohen's d the default amplitudes were calibrated against.
    pub target_d: Option<f64>,
}

impl ComponentTemplate {
    pub fn p400() -> Self {
        Self {
            component: ComponentName::P400,
            polarity: Polarity::Positive,
            centre: "FPz".to_string(),
            spread_rad: 0.52,
            peak_ms: 400.0,
            width_ms: 30.0,
            amplitude_uv: 6.8,
            participant_sd_uv: 6.0,
            trial_sd_uv: 1.0,
            latency_jitter_ms: 10.0,
            conditions: alloc::vec![
                Condition::exp2(ConditionLabel::Occlusion),
                Condition::exp2(ConditionLabel::OccludedPedestrian),
            ],
            target_d: Some(1.11),
        }
    }

    pub fn n500() -> Self {
        Self {
            component: ComponentName::N500,
            polarity: Polarity::Negative,
            centre: "AF3".to_string(),
            spread_rad: 0.9,
            peak_ms: 500.0,
            width_ms: 30.0,
            amplitude_uv: 7.0,
            participant_sd_uv: 8.3,
            trial_sd_uv: 1.0,
            latency_jitter_ms: 10.0,
            conditions: alloc::vec![
                Condition::exp2(ConditionLabel::OccludedPedestrian),
                Condition::exp2(ConditionLabel::VisiblePedestrian),
            ],
            target_d: Some(0.84),
        }
    }

    pub fn gain(&self, montage: &Montage, channel: &str) -> Result<f64> {
        let d = montage.angular_distance(&self.centre, channel)?;
        Ok(exp(-d * d / (2.0 * self.spread_rad * self.spread_rad)))
    }

    fn validate(&self, montage: &Montage) -> Result<()> {
        if montage.get(&self.centre).is_none() {
            return Err(invalid(format!("template centre `{}` is not in the montage", self.centre)));
        }
        let sigmas = [
            self.participant_sd_uv,
            self.trial_sd_uv,
            self.latency_jitter_ms,
        ];
        if sigmas.iter().any(|s| !(*s >= 0.0)) || !(self.width_ms > 0.0) || !(self.spread_rad > 0.0) {
            return Err(invalid(format!("{:?} template has a negative or zero width", self.component)));
        }
        if !self.amplitude_uv.is_finite() || !self.peak_ms.is_finite() {
            return Err(invalid(format!("{:?} template has a non-finite amplitude or peak", self.component)));
        }
        Ok(())
    }
}

/// Press probability and latency distribution for one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressModel {
    pub condition: Condition,
    pub probability: f64,
    pub latency_mean_ms: f64,
    pub latency_sd_ms: f64,
}

impl PressModel {
    pub const fn new(condition: Condition, probability: f64, latency_mean_ms: f64, latency_sd_ms: f64) -> Self {
        Self {
            condition,
            probability,
            latency_mean_ms,
            latency_sd_ms,
        }
    }

    /// Press rates observed in both experiments.
    pub fn observed() -> Vec<Self> {
        use ConditionLabel::*;
        alloc::vec![
            Self::new(Condition::exp1(OccludedHazard), 217.0 / 220.0, 3500.0, 1000.0),
            Self::new(Condition::exp1(Occlusion), 18.0 / 220.0, 2500.0, 1000.0),
            Self::new(Condition::exp2(OccludedPedestrian), 220.0 / 220.0, 5650.0, 250.0),
            Self::new(Condition::exp2(VisiblePedestrian), 219.0 / 220.0, 3000.0, 1500.0),
            Self::new(Condition::exp2(Occlusion), 59.0 / 220.0, 3500.0, 1500.0),
            Self::new(Condition::exp2(Control), 35.0 / 220.0, 3500.0, 1500.0),
        ]
    }
}

/// How participant-level amplitude offsets are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectSampling {
    /// Independent normal draws.
    Independent,
    /// Normal draws standardised to sample mean 0 and sample SD 1 across the
    /// cohort, so every cohort realises the configured mean and SD exactly.
    MomentMatched,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_participants: usize,
    /// EEG trials per experiment-2 condition.
    pub trials_per_condition: usize,
    /// Behaviour-only trials per experiment-1 condition; 0 skips experiment 1.
    pub exp1_trials_per_condition: usize,
    pub sample_rate_hz: f64,
    pub channels: Vec<String>,
    pub trial_spacing_s: f64,
    pub lead_in_s: f64,
    pub clip_length_ms: f64,
    pub noise_sigma_uv: f64,
    pub pink_exponent: f64,
    pub templates: Vec<ComponentTemplate>,
    pub effect_sampling: EffectSampling,
    pub press: Vec<PressModel>,
    pub blink_rate_per_min: f64,
    pub blink_amplitude_uv: f64,
    /// Samples are rounded to this step; 0 keeps full precision.
    pub quantum_uv: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_participants: 10,
            trials_per_condition: 20,
            exp1_trials_per_condition: 20,
            sample_rate_hz: 1000.0,
            channels: DEFAULT_CHANNELS.iter().map(|c| c.to_string()).collect(),
            trial_spacing_s: 9.0,
            lead_in_s: 2.0,
            clip_length_ms: 7000.0,
            noise_sigma_uv: 5.0,
            pink_exponent: 1.0,
            templates: alloc::vec![ComponentTemplate::p400(), ComponentTemplate::n500()],
            effect_sampling: EffectSampling::MomentMatched,
            press: PressModel::observed(),
            blink_rate_per_min: 0.0,
            blink_amplitude_uv: 100.0,
            quantum_uv: 0.001,
            seed: 0,
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidConfig(msg)
}

impl SynthConfig {
    pub fn validate(&self, montage: &Montage) -> Result<()> {
        if self.n_participants == 0 || self.trials_per_condition == 0 {
            return Err(invalid("cohort needs at least one participant and one trial".to_string()));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(invalid(format!("sample rate {} is not positive", self.sample_rate_hz)));
        }
        if !(self.lead_in_s * 1000.0 >= -(EPOCH_START_MS as f64)) {
            return Err(invalid(format!("lead-in {} s leaves no room for the first baseline", self.lead_in_s)));
        }
        let epoch_s = (EPOCH_END_MS - EPOCH_START_MS) as f64 / 1000.0;
        if !(self.trial_spacing_s >= epoch_s) {
            return Err(invalid(format!("trial spacing {} s is shorter than one epoch", self.trial_spacing_s)));
        }
        let sigmas = [self.noise_sigma_uv, self.pink_exponent, self.blink_rate_per_min, self.quantum_uv];
        if sigmas.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(invalid("noise, exponent, blink rate and quantum must be non-negative".to_string()));
        }
        if !(self.clip_length_ms > 0.0) {
            return Err(invalid("clip length must be positive".to_string()));
        }
        if self.channels.is_empty() {
            return Err(invalid("no channels".to_string()));
        }
        for (i, c) in self.channels.iter().enumerate() {
            if montage.get(c).is_none() {
                return Err(invalid(format!("channel `{c}` is not in the montage")));
            }
            if self.channels[..i].iter().any(|o| o.eq_ignore_ascii_case(c)) {
                return Err(invalid(format!("channel `{c}` listed twice")));
            }
        }
        for t in &self.templates {
            t.validate(montage)?;
        }
        for p in &self.press {
            if !(0.0..=1.0).contains(&p.probability) || !(p.latency_sd_ms >= 0.0) {
                return Err(invalid(format!("press model for {} is out of range", p.condition)));
            }
        }
        Ok(())
    }

    fn press_model(&self, condition: Condition) -> Option<&PressModel> {
        self.press.iter().find(|p| p.condition == condition)
    }

    fn samples(&self, seconds: f64) -> usize {
        round(seconds * self.sample_rate_hz) as usize
    }
}

/// Spectral-synthesis noise with power proportional to `1/f^beta`, scaled
/// to sample standard deviation `sigma_uv`.
pub fn pink_noise(n_samples: usize, sigma_uv: f64, beta: f64, seed: u64) -> Vec<f64> {
    pink_noise_from(&mut Stream::new(seed, streams::NOISE, 0), n_samples, sigma_uv, beta)
}

fn pink_noise_from(rng: &mut Stream, n_samples: usize, sigma_uv: f64, beta: f64) -> Vec<f64> {
    pink_noise_pair(rng, n_samples, sigma_uv, beta).0
}

/// Two independent series from one complex transform: the first spectrum
/// goes in the real part of the output, the second in the imaginary part.
fn pink_noise_pair(rng: &mut Stream, n_samples: usize, sigma_uv: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    if sigma_uv == 0.0 || n_samples < 2 {
        return (alloc::vec![0.0; n_samples], alloc::vec![0.0; n_samples]);
    }
    let m = n_samples.next_power_of_two();
    let mut re = alloc::vec![0.0; m];
    let mut im = alloc::vec![0.0; m];
    for k in 1..=m / 2 {
        let g = powf(k as f64, -beta / 2.0);
        let (ar, ai) = rng.normal_pair();
        let (br, bi) = rng.normal_pair();
        let (ar, ai, br, bi) = (ar * g, ai * g, br * g, bi * g);
        if k == m / 2 {
            re[k] = ar;
            im[k] = br;
            continue;
        }
        re[k] = ar - bi;
        im[k] = ai + br;
        re[m - k] = ar + bi;
        im[m - k] = br - ai;
    }
    fft_in_place(&mut re, &mut im, true);
    re.truncate(n_samples);
    im.truncate(n_samples);
    rescale(&mut re, sigma_uv);
    rescale(&mut im, sigma_uv);
    (re, im)
}

fn rescale(x: &mut [f64], sigma: f64) {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let sd = sqrt(x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64);
    if sd > 0.0 {
        for v in x {
            *v *= sigma / sd;
        }
    }
}

/// `amplitude × exp(−(t − peak)²/(2σ²))`, signed by polarity, at every
/// sample of the −500..600 ms epoch grid.
pub fn erp_template(peak_ms: f64, sigma_ms: f64, amplitude_uv: f64, polarity: Polarity, sample_rate_hz: f64) -> Vec<f64> {
    let len = crate::recording::ms_to_samples((EPOCH_END_MS - EPOCH_START_MS) as f64, sample_rate_hz);
    (0..len)
        .map(|k| {
            let t = EPOCH_START_MS as f64 + k as f64 * 1000.0 / sample_rate_hz;
            gaussian(t, peak_ms, sigma_ms, polarity.sign() * amplitude_uv)
        })
        .collect()
}

fn gaussian(t: f64, peak: f64, sigma: f64, amplitude: f64) -> f64 {
    let z = (t - peak) / sigma;
    amplitude * exp(-0.5 * z * z)
}

/// Unit-amplitude blink shape: a raised lobe over the first 60 % of the
/// window and a shallower opposite-sign lobe after it.
pub fn blink_waveform(sample_rate_hz: f64) -> Vec<f64> {
    let n = round(BLINK_DURATION_MS * sample_rate_hz / 1000.0) as usize;
    let split = 0.6 * n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64;
            if t < split {
                let s = sin(PI * t / split);
                s * s
            } else {
                let s = sin(PI * (t - split) / (n as f64 - split));
                -0.3 * s * s
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlinkArtifact {
    pub waveform: Vec<f64>,
    /// Per-channel scale, 1 at FPz.
    pub profile: Vec<f64>,
}

pub const BLINK_SPREAD_RAD: f64 = 0.6;

/// Blink shape scaled to about `amplitude_uv` (±10 %, drawn from `seed`)
/// with a frontal profile over `channels`.
pub fn blink_artifact(seed: u64, amplitude_uv: f64, sample_rate_hz: f64, montage: &Montage, channels: &[String]) -> Result<BlinkArtifact> {
    let mut rng = Stream::new(seed, streams::NOISE, u32::MAX as u64);
    let scale = amplitude_uv * (1.0 + 0.1 * rng.normal());
    let waveform = blink_waveform(sample_rate_hz).into_iter().map(|v| v * scale).collect();
    Ok(BlinkArtifact { waveform, profile: blink_profile(montage, channels)? })
}

pub fn blink_profile(montage: &Montage, channels: &[String]) -> Result<Vec<f64>> {
    channels
        .iter()
        .map(|c| {
            let d = montage.angular_distance("FPz", c)?;
            Ok(exp(-d * d / (2.0 * BLINK_SPREAD_RAD * BLINK_SPREAD_RAD)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjectedComponent {
    pub component: ComponentName,
    /// Signed amplitude at the template centre.
    pub amplitude_uv: f64,
    pub latency_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialTruth {
    pub trial_id: String,
    pub clip_id: String,
    pub condition: Condition,
    /// Onset sample for EEG trials; `None` for behaviour-only trials.
    pub onset_sample: Option<usize>,
    pub components: Vec<InjectedComponent>,
    pub pressed: bool,
    pub press_latency_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticipantTruth {
    pub participant_id: String,
    /// Participant-level amplitude offset per template, in template order.
    pub participant_effects_uv: Vec<f64>,
    pub blink_onsets: Vec<usize>,
    /// Signed blink amplitude at FPz for each onset.
    pub blink_amplitudes_uv: Vec<f64>,
    pub trials: Vec<TrialTruth>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroundTruth {
    pub participants: Vec<ParticipantTruth>,
}

impl GroundTruth {
    pub fn press_count(&self, condition: Condition) -> usize {
        self.participants
            .iter()
            .flat_map(|p| &p.trials)
            .filter(|t| t.condition == condition && t.pressed)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    pub recordings: Vec<Recording>,
    pub logs: Vec<TrialLog>,
    pub truth: GroundTruth,
}

/// Participant offsets in µV, indexed `[template][participant]`.
pub fn participant_effects(config: &SynthConfig) -> Vec<Vec<f64>> {
    let n = config.n_participants;
    config
        .templates
        .iter()
        .enumerate()
        .map(|(ti, t)| {
            let mut rng = Stream::new(config.seed, streams::PARTICIPANT, 0xffff_0000 + ti as u64);
            let mut z: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            if config.effect_sampling == EffectSampling::MomentMatched {
                let m = z.iter().sum::<f64>() / n as f64;
                let sd = if n > 1 {
                    sqrt(z.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64)
                } else {
                    0.0
                };
                for v in &mut z {
                    *v = if sd > 0.0 { (*v - m) / sd } else { 0.0 };
                }
            }
            z.into_iter().map(|v| v * t.participant_sd_uv).collect()
        })
        .collect()
}

pub fn participant_id(index: usize) -> String {
    format!("P{:02}", index + 1)
}

pub fn generate_cohort(config: &SynthConfig) -> Result<Cohort> {
    generate_cohort_with(config, &builtin_montage())
}

pub fn generate_cohort_with(config: &SynthConfig, montage: &Montage) -> Result<Cohort> {
    config.validate(montage)?;
    let mut cohort = Cohort {
        recordings: Vec::with_capacity(config.n_participants),
        logs: Vec::new(),
        truth: GroundTruth::default(),
    };
    for i in 0..config.n_participants {
        let (rec, logs, truth) = generate_participant(config, montage, i)?;
        cohort.recordings.push(rec);
        cohort.logs.extend(logs);
        cohort.truth.participants.push(truth);
    }
    Ok(cohort)
}

/// One participant's recording, logs and truth. Each participant draws from
/// its own streams, so participants can be generated in any order.
pub fn generate_participant(config: &SynthConfig, montage: &Montage, index: usize) -> Result<(Recording, Vec<TrialLog>, ParticipantTruth)> {
    config.validate(montage)?;
    if index >= config.n_participants {
        return Err(invalid(format!("participant index {index} outside a cohort of {}", config.n_participants)));
    }
    let pid = participant_id(index);
    let base = index as u64 * 8;
    let mut trial_rng = Stream::new(config.seed, streams::PARTICIPANT, base);
    let mut blink_rng = Stream::new(config.seed, streams::PARTICIPANT, base + 1);
    let mut exp1_rng = Stream::new(config.seed, streams::PARTICIPANT, base + 2);

    let mut order: Vec<(Condition, usize)> = Condition::EXP2
        .iter()
        .flat_map(|c| (0..config.trials_per_condition).map(move |k| (*c, k)))
        .collect();
    trial_rng.shuffle(&mut order);

    let spacing = config.samples(config.trial_spacing_s);
    let lead = config.samples(config.lead_in_s);
    let n_samples = lead + spacing * order.len();
    let n_ch = config.channels.len();
    let rate = config.sample_rate_hz;

    let gains: Vec<Vec<f64>> = config
        .templates
        .iter()
        .map(|t| config.channels.iter().map(|c| t.gain(montage, c)).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    let participant_effects: Vec<f64> = participant_effects(config).iter().map(|t| t[index]).collect();

    let mut data = alloc::vec![0.0; n_ch * n_samples];
    let mut events = Vec::with_capacity(order.len());
    let mut logs = Vec::new();
    let mut trials = Vec::new();

    for (k, (condition, clip)) in order.iter().enumerate() {
        let onset = lead + k * spacing;
        let trial_id = format!("{pid}-T{:03}", k + 1);
        let clip_id = clip_name(*condition, *clip);
        let mut components = Vec::new();
        for (ti, t) in config.templates.iter().enumerate() {
            if !t.conditions.contains(condition) {
                continue;
            }
            let amplitude = t.polarity.sign() * (t.amplitude_uv + participant_effects[ti] + t.trial_sd_uv * trial_rng.normal());
            let latency = t.peak_ms + t.latency_jitter_ms * trial_rng.normal();
            let first = floor((latency - 6.0 * t.width_ms) * rate / 1000.0) as i64;
            let last = ceil((latency + 6.0 * t.width_ms) * rate / 1000.0) as i64;
            for off in first..=last {
                let s = onset as i64 + off;
                if s < 0 || s >= n_samples as i64 {
                    continue;
                }
                let v = gaussian(off as f64 * 1000.0 / rate, latency, t.width_ms, amplitude);
                for (c, g) in gains[ti].iter().enumerate() {
                    data[c * n_samples + s as usize] += g * v;
                }
            }
            components.push(InjectedComponent {
                component: t.component,
                amplitude_uv: amplitude,
                latency_ms: latency,
            });
        }
        let (pressed, latency) = draw_press(config, *condition, &mut trial_rng);
        events.push(EventMarker {
            sample_index: onset,
            trial_id: trial_id.clone(),
            condition: *condition,
            clip_id: clip_id.clone(),
        });
        logs.push(TrialLog::new(pid.clone(), trial_id.clone(), *condition, pressed, latency)?);
        trials.push(TrialTruth {
            trial_id,
            clip_id,
            condition: *condition,
            onset_sample: Some(onset),
            components,
            pressed,
            press_latency_ms: latency,
        });
    }

    let mut exp1: Vec<(Condition, usize)> = Condition::EXP1
        .iter()
        .flat_map(|c| (0..config.exp1_trials_per_condition).map(move |k| (*c, k)))
        .collect();
    exp1_rng.shuffle(&mut exp1);
    for (k, (condition, clip)) in exp1.iter().enumerate() {
        let trial_id = format!("{pid}-E1-T{:03}", k + 1);
        let (pressed, latency) = draw_press(config, *condition, &mut exp1_rng);
        logs.push(TrialLog::new(pid.clone(), trial_id.clone(), *condition, pressed, latency)?);
        trials.push(TrialTruth {
            trial_id,
            clip_id: clip_name(*condition, *clip),
            condition: *condition,
            onset_sample: None,
            components: Vec::new(),
            pressed,
            press_latency_ms: latency,
        });
    }

    let mut blink_onsets = Vec::new();
    let mut blink_amplitudes = Vec::new();
    if config.blink_rate_per_min > 0.0 {
        let shape = blink_waveform(rate);
        let profile = blink_profile(montage, &config.channels)?;
        let per_sample = config.blink_rate_per_min / 60.0 / rate;
        let mut t = blink_rng.exponential(per_sample);
        while (t as usize) + shape.len() < n_samples {
            let onset = t as usize;
            let amp = config.blink_amplitude_uv * (1.0 + 0.1 * blink_rng.normal());
            for (c, p) in profile.iter().enumerate() {
                let row = &mut data[c * n_samples + onset..c * n_samples + onset + shape.len()];
                for (d, w) in row.iter_mut().zip(&shape) {
                    *d += amp * p * w;
                }
            }
            blink_onsets.push(onset);
            blink_amplitudes.push(amp);
            t += shape.len() as f64 + blink_rng.exponential(per_sample);
        }
    }

    for pair in 0..n_ch.div_ceil(2) {
        let mut rng = Stream::new(config.seed, streams::NOISE, index as u64 * 256 + pair as u64);
        let (a, b) = pink_noise_pair(&mut rng, n_samples, config.noise_sigma_uv, config.pink_exponent);
        for (c, noise) in [(2 * pair, a), (2 * pair + 1, b)] {
            if c < n_ch {
                for (d, n) in data[c * n_samples..(c + 1) * n_samples].iter_mut().zip(&noise) {
                    *d += n;
                }
            }
        }
    }
    if config.quantum_uv > 0.0 {
        let q = config.quantum_uv;
        for d in &mut data {
            *d = round(*d / q) * q;
            if *d == 0.0 {
                *d = 0.0;
            }
        }
    }

    let rec = Recording::new(pid.clone(), rate, config.channels.clone(), Matrix::from_vec(n_ch, n_samples, data), events)?;
    let truth = ParticipantTruth {
        participant_id: pid,
        participant_effects_uv: participant_effects,
        blink_onsets,
        blink_amplitudes_uv: blink_amplitudes,
        trials,
    };
    Ok((rec, logs, truth))
}

fn clip_name(condition: Condition, clip: usize) -> String {
    format!("e{}-{}-{:02}", condition.experiment(), condition.label().as_str(), clip + 1)
}

fn draw_press(config: &SynthConfig, condition: Condition, rng: &mut Stream) -> (bool, Option<f64>) {
    let Some(model) = config.press_model(condition) else {
        return (false, None);
    };
    let u = rng.uniform();
    let z = rng.normal();
    if u < model.probability {
        let latency = (model.latency_mean_ms + model.latency_sd_ms * z).clamp(150.0, config.clip_length_ms);
        (true, Some(round(latency)))
    } else {
        (false, None)
    }
}
