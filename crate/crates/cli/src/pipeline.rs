//! In-memory stages shared by the commands and the seed sweep.

use hazard_eeg_core::dsp::{preprocess, PreprocessOutput};
use hazard_eeg_core::erp::{contrast_conditions, ComponentName, ErpWindow, Polarity};
use hazard_eeg_core::recording::ConditionLabel;
use hazard_eeg_core::stats::TestResult;
use hazard_eeg_core::synth::{generate_participant, Cohort, GroundTruth, SynthConfig};
use hazard_eeg_core::tsc::{evaluate, fit, make_task_with_window, Evaluation, RocketModel, Task, TaskData};
use hazard_eeg_core::{Condition, Epoch, Montage, Recording};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::error::{Error, Result};

/// A thread pool of `jobs` workers, or the global default for `None`.
pub fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(e.to_string()))
}

/// Generates the cohort with participants spread over `pool`.
pub fn simulate_cohort(config: &SynthConfig, montage: &Montage, pool: &rayon::ThreadPool) -> Result<Cohort> {
    config.validate(montage).map_err(|e| Error::Config(e.to_string()))?;
    let parts: Vec<_> = pool.install(|| {
        (0..config.n_participants)
            .into_par_iter()
            .map(|i| generate_participant(config, montage, i))
            .collect::<core::result::Result<Vec<_>, _>>()
    })?;
    let mut cohort = Cohort { recordings: Vec::new(), logs: Vec::new(), truth: GroundTruth::default() };
    for (rec, logs, truth) in parts {
        cohort.recordings.push(rec);
        cohort.logs.extend(logs);
        cohort.truth.participants.push(truth);
    }
    Ok(cohort)
}

/// Preprocesses every recording, in input order.
pub fn preprocess_all(
    recordings: &[Recording],
    montage: &Montage,
    config: &PipelineConfig,
    pool: &rayon::ThreadPool,
) -> Result<Vec<PreprocessOutput>> {
    pool.install(|| {
        recordings
            .par_iter()
            .map(|rec| {
                let pid = &rec.participant_id;
                let cfg = config.preprocess_for(pid)?;
                preprocess(rec, montage, &cfg).map_err(|e| Error::from(e).in_participant(pid))
            })
            .collect()
    })
}

/// A participant-level condition contrast at one electrode.
#[derive(Debug, Clone, PartialEq)]
pub struct Contrast {
    pub window: ErpWindow,
    pub electrode: String,
    pub hazard: Condition,
    pub control: Condition,
}

impl Contrast {
    pub fn scope(&self) -> String {
        format!("{}/{} {} vs {}", self.window.name.as_str(), self.electrode, self.hazard, self.control)
    }

    /// Significant at `alpha` with the sign of the component's polarity.
    pub fn confirms(&self, result: &TestResult, alpha: f64) -> bool {
        let sign = if result.statistic > 0.0 { Polarity::Positive } else { Polarity::Negative };
        result.p_two_tailed < alpha && result.statistic != 0.0 && sign == self.window.polarity
    }
}

/// The six hazard-versus-control contrasts: P400 for occlusion and N500 for
/// the occluded pedestrian, each at its three electrodes.
pub fn paper_contrasts(config: &PipelineConfig) -> Result<Vec<Contrast>> {
    let control = Condition::exp2(ConditionLabel::Control);
    let mut out = Vec::new();
    for (name, hazard) in [
        (ComponentName::P400, ConditionLabel::Occlusion),
        (ComponentName::N500, ConditionLabel::OccludedPedestrian),
    ] {
        let window = config.window(name)?;
        for e in &window.electrodes {
            out.push(Contrast {
                window: window.clone(),
                electrode: e.clone(),
                hazard: Condition::exp2(hazard),
                control,
            });
        }
    }
    Ok(out)
}

pub fn run_contrasts(epochs: &[Epoch], contrasts: &[Contrast]) -> Result<Vec<TestResult>> {
    contrasts
        .iter()
        .map(|c| Ok(contrast_conditions(epochs, c.hazard, c.control, &c.window, &c.electrode)?))
        .collect()
}

pub fn task_data(epochs: &[Epoch], config: &PipelineConfig, task: Task, electrode: &str) -> Result<TaskData> {
    let window = config.task_window(task)?;
    Ok(make_task_with_window(epochs, task, &window, electrode, config.split_spec())?)
}

#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub task: Task,
    pub electrode: String,
    pub model: RocketModel,
    pub evaluation: Evaluation,
}

/// Fits and evaluates one model per configured (task, electrode) pair, in
/// configuration order.
pub fn train_all(epochs: &[Epoch], config: &PipelineConfig, pool: &rayon::ThreadPool) -> Result<Vec<TrainedModel>> {
    let jobs: Vec<(Task, String)> = config
        .models()?
        .into_iter()
        .flat_map(|(t, es)| es.into_iter().map(move |e| (t, e)))
        .collect();
    pool.install(|| jobs.par_iter().map(|(t, e)| train_one(epochs, config, *t, e)).collect())
}

pub fn train_one(epochs: &[Epoch], config: &PipelineConfig, task: Task, electrode: &str) -> Result<TrainedModel> {
    let data = task_data(epochs, config, task, electrode)?;
    let model = fit(&data.train, &config.fit_options(task, electrode))?;
    let evaluation = evaluate(&model, &data.test)?;
    Ok(TrainedModel { task, electrode: electrode.to_string(), model, evaluation })
}

/// Accuracy with the training labels permuted by `seed`.
pub fn shuffled_accuracy(epochs: &[Epoch], config: &PipelineConfig, task: Task, electrode: &str, seed: u64) -> Result<f64> {
    let mut data = task_data(epochs, config, task, electrode)?;
    data.shuffle_train_labels(seed);
    let model = fit(&data.train, &config.fit_options(task, electrode))?;
    Ok(evaluate(&model, &data.test)?.accuracy)
}

/// Formats `x` with four significant figures, switching to scientific
/// notation below 1e-4.
pub fn sig4(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if mag < -4 {
        return format!("{x:.3e}");
    }
    let decimals = (3 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}
