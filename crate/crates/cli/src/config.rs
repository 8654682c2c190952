//! TOML pipeline configuration. Every table and key is optional.
//!
//! ```toml
//! seed = 0
//!
//! [simulate]
//! n_participants = 10
//! trials_per_condition = 20
//! noise_sigma_uv = 5.0
//! blink_rate_per_min = 0.0
//! [simulate.p400]
//! amplitude_uv = 6.8
//!
//! [preprocess]
//! references = ["M1", "M2"]
//! reject_threshold_uv = 100.0
//! ica = false
//! bad_channels = { P03 = ["F1"] }
//! ica_drop = { P01 = [0] }
//!
//! [windows]
//! p400 = [351, 450]
//! n500 = [451, 550]
//!
//! [classifier]
//! n_kernels = 1000
//! alpha_grid = [0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0]
//! models = [
//!   { task = "occlusion-vs-control", electrodes = ["FPz", "AF4", "F4"] },
//!   { task = "pedestrian-vs-control", electrodes = ["AF3", "F3", "F1"] },
//! ]
//!
//! [split]
//! n_train = 16
//! n_test = 4
//! ```
//!
//! `seed` feeds the simulator, the kernel bank and the train/test split
//! unless `classifier.seed` or `split.seed` are given.

use std::collections::BTreeMap;
use std::path::Path;

use hazard_eeg_core::dsp::{FilterSpec, IcaStep, PreprocessConfig, DEFAULT_REJECT_THRESHOLD_UV};
use hazard_eeg_core::erp::{ComponentName, ErpWindow};
use hazard_eeg_core::montage::Montage;
use hazard_eeg_core::recording::EPOCH_END_MS;
use hazard_eeg_core::synth::{ComponentTemplate, EffectSampling, SynthConfig};
use hazard_eeg_core::tsc::{FitOptions, SplitSpec, Task, DEFAULT_ALPHA_GRID, DEFAULT_N_KERNELS};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::read_text;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub simulate: SimulateSection,
    pub preprocess: PreprocessSection,
    pub windows: WindowsSection,
    pub classifier: ClassifierSection,
    pub split: SplitSection,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct TemplateOverrides {
    pub amplitude_uv: Option<f64>,
    pub participant_sd_uv: Option<f64>,
    pub trial_sd_uv: Option<f64>,
    pub latency_jitter_ms: Option<f64>,
    pub peak_ms: Option<f64>,
    pub width_ms: Option<f64>,
    pub spread_rad: Option<f64>,
    pub centre: Option<String>,
}

impl TemplateOverrides {
    fn apply(&self, t: &mut ComponentTemplate) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { t.$f = v; } )* };
        }
        set!(amplitude_uv, participant_sd_uv, trial_sd_uv, latency_jitter_ms, peak_ms, width_ms, spread_rad);
        if let Some(c) = &self.centre {
            t.centre = c.clone();
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub n_participants: Option<usize>,
    pub trials_per_condition: Option<usize>,
    pub exp1_trials_per_condition: Option<usize>,
    pub sample_rate_hz: Option<f64>,
    pub channels: Option<Vec<String>>,
    pub trial_spacing_s: Option<f64>,
    pub lead_in_s: Option<f64>,
    pub noise_sigma_uv: Option<f64>,
    pub pink_exponent: Option<f64>,
    pub blink_rate_per_min: Option<f64>,
    pub blink_amplitude_uv: Option<f64>,
    pub quantum_uv: Option<f64>,
    /// `moment-matched` (default) or `independent`.
    pub effect_sampling: Option<String>,
    /// Drop all ERP templates (null cohort).
    pub no_effects: bool,
    pub p400: TemplateOverrides,
    pub n500: TemplateOverrides,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessSection {
    pub references: Vec<String>,
    pub low_cut_hz: f64,
    pub high_cut_hz: f64,
    pub order_per_pass: usize,
    pub reject_threshold_uv: f64,
    pub ica: bool,
    pub ica_components: Option<usize>,
    pub ica_auto_blink: bool,
    pub ica_blink_threshold: f64,
    pub ica_fit_stride: usize,
    pub bad_channels: BTreeMap<String, Vec<String>>,
    pub ica_drop: BTreeMap<String, Vec<usize>>,
}

impl Default for PreprocessSection {
    fn default() -> Self {
        let filter = FilterSpec::default();
        let ica = IcaStep::default();
        Self {
            references: vec!["M1".into(), "M2".into()],
            low_cut_hz: filter.low_cut_hz,
            high_cut_hz: filter.high_cut_hz,
            order_per_pass: filter.order_per_pass,
            reject_threshold_uv: DEFAULT_REJECT_THRESHOLD_UV,
            ica: false,
            ica_components: None,
            ica_auto_blink: ica.auto_blink,
            ica_blink_threshold: ica.blink_threshold,
            ica_fit_stride: ica.fit_stride,
            bad_channels: BTreeMap::new(),
            ica_drop: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct WindowsSection {
    pub p400: [i32; 2],
    pub n500: [i32; 2],
}

impl Default for WindowsSection {
    fn default() -> Self {
        let (p, n) = (ErpWindow::p400(), ErpWindow::n500());
        Self { p400: [p.start_ms, p.end_ms], n500: [n.start_ms, n.end_ms] }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub task: String,
    pub electrodes: Vec<String>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierSection {
    pub n_kernels: usize,
    pub alpha_grid: Vec<f64>,
    pub seed: Option<u64>,
    pub models: Vec<ModelSpec>,
}

impl Default for ClassifierSection {
    fn default() -> Self {
        Self {
            n_kernels: DEFAULT_N_KERNELS,
            alpha_grid: DEFAULT_ALPHA_GRID.to_vec(),
            seed: None,
            models: Task::ALL
                .iter()
                .map(|t| ModelSpec { task: t.name().to_string(), electrodes: t.window().electrodes.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSection {
    pub n_train: usize,
    pub n_test: usize,
    pub seed: Option<u64>,
}

impl Default for SplitSection {
    fn default() -> Self {
        let s = SplitSpec::default();
        Self { n_train: s.n_train, n_test: s.n_test, seed: None }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if let Some(s) = seed {
            self.seed = s;
            self.classifier.seed = None;
            self.split.seed = None;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.synth()?;
        self.preprocess_for("")?;
        self.window(ComponentName::P400)?;
        self.window(ComponentName::N500)?;
        self.models()?;
        let c = &self.classifier;
        if c.n_kernels == 0 {
            return Err(config_err("classifier.n_kernels must be positive"));
        }
        if c.alpha_grid.is_empty() || c.alpha_grid.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(config_err("classifier.alpha_grid must be non-empty and positive"));
        }
        if self.split.n_train < 2 || self.split.n_test == 0 {
            return Err(config_err("split needs n_train >= 2 and n_test >= 1"));
        }
        Ok(())
    }

    /// Checks channel names used by the config against `montage`.
    pub fn validate_channels(&self, montage: &Montage) -> Result<()> {
        let mut names: Vec<&String> = self.preprocess.references.iter().collect();
        names.extend(self.preprocess.bad_channels.values().flatten());
        names.extend(self.classifier.models.iter().flat_map(|m| &m.electrodes));
        for n in names {
            if montage.get(n).is_none() {
                return Err(config_err(format!("channel `{n}` is not in the montage")));
            }
        }
        Ok(())
    }

    pub fn synth(&self) -> Result<SynthConfig> {
        let s = &self.simulate;
        let mut cfg = SynthConfig { seed: self.seed, ..SynthConfig::default() };
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = s.$f { cfg.$f = v; } )* };
        }
        set!(n_participants, trials_per_condition, exp1_trials_per_condition, sample_rate_hz, trial_spacing_s, lead_in_s,
             noise_sigma_uv, pink_exponent, blink_rate_per_min, blink_amplitude_uv, quantum_uv);
        if let Some(ch) = &s.channels {
            cfg.channels = ch.clone();
        }
        cfg.effect_sampling = match s.effect_sampling.as_deref() {
            None | Some("moment-matched") => EffectSampling::MomentMatched,
            Some("independent") => EffectSampling::Independent,
            Some(other) => return Err(config_err(format!("unknown effect_sampling `{other}`"))),
        };
        s.p400.apply(&mut cfg.templates[0]);
        s.n500.apply(&mut cfg.templates[1]);
        if s.no_effects {
            cfg.templates.clear();
        }
        cfg.validate(&hazard_eeg_core::montage::builtin_montage())
            .map_err(|e| config_err(format!("simulate: {e}")))?;
        Ok(cfg)
    }

    pub fn window(&self, component: ComponentName) -> Result<ErpWindow> {
        let (mut w, range) = match component {
            ComponentName::P400 => (ErpWindow::p400(), self.windows.p400),
            ComponentName::N500 => (ErpWindow::n500(), self.windows.n500),
        };
        if !(0 <= range[0] && range[0] <= range[1] && range[1] < EPOCH_END_MS) {
            return Err(config_err(format!("{component:?} window {range:?} is outside the epoch")));
        }
        w.start_ms = range[0];
        w.end_ms = range[1];
        Ok(w)
    }

    pub fn task_window(&self, task: Task) -> Result<ErpWindow> {
        self.window(task.window().name)
    }

    pub fn models(&self) -> Result<Vec<(Task, Vec<String>)>> {
        self.classifier
            .models
            .iter()
            .map(|m| {
                let task: Task = m.task.parse().map_err(|_| config_err(format!("unknown task `{}`", m.task)))?;
                if m.electrodes.is_empty() {
                    return Err(config_err(format!("task `{}` lists no electrodes", m.task)));
                }
                Ok((task, m.electrodes.clone()))
            })
            .collect()
    }

    pub fn preprocess_for(&self, participant: &str) -> Result<PreprocessConfig> {
        let p = &self.preprocess;
        let filter = FilterSpec {
            low_cut_hz: p.low_cut_hz,
            high_cut_hz: p.high_cut_hz,
            order_per_pass: p.order_per_pass,
            ..FilterSpec::default()
        };
        filter.validate(self.simulate.sample_rate_hz.unwrap_or(1000.0)).map_err(|e| config_err(format!("preprocess: {e}")))?;
        if !(p.reject_threshold_uv > 0.0) {
            return Err(config_err("preprocess.reject_threshold_uv must be positive"));
        }
        if p.references.is_empty() {
            return Err(config_err("preprocess.references is empty"));
        }
        let ica = p.ica.then(|| IcaStep {
            n_components: p.ica_components,
            seed: self.seed,
            drop: p.ica_drop.get(participant).cloned().unwrap_or_default(),
            auto_blink: p.ica_auto_blink,
            blink_threshold: p.ica_blink_threshold,
            fit_stride: p.ica_fit_stride.max(1),
            ..IcaStep::default()
        });
        Ok(PreprocessConfig {
            references: p.references.clone(),
            filter,
            bad_channels: p.bad_channels.get(participant).cloned().unwrap_or_default(),
            ica,
            reject_threshold_uv: p.reject_threshold_uv,
            ..PreprocessConfig::default()
        })
    }

    pub fn fit_options(&self, task: Task, electrode: &str) -> FitOptions {
        FitOptions {
            n_kernels: self.classifier.n_kernels,
            alpha_grid: self.classifier.alpha_grid.clone(),
            seed: self.classifier.seed.unwrap_or(self.seed),
            electrode: electrode.to_string(),
            task: task.name().to_string(),
        }
    }

    pub fn split_spec(&self) -> SplitSpec {
        SplitSpec { n_train: self.split.n_train, n_test: self.split.n_test, seed: self.split.seed.unwrap_or(self.seed) }
    }
}
