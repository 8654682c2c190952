//! The command verbs. Each reads its inputs, runs the in-memory stages and
//! writes its outputs atomically under `out`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hazard_eeg_core::erp::{window_amplitude, ErpWindow};
use hazard_eeg_core::montage::builtin_montage;
use hazard_eeg_core::recording::ConditionLabel;
use hazard_eeg_core::stats::{build_contingency, chi_square, ContingencyTable, TestResult};
use hazard_eeg_core::synth::{Cohort, GroundTruth};
use hazard_eeg_core::tsc::{ClassLabel, RocketModel, Task};
use hazard_eeg_core::{Condition, Epoch, TrialLog};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::PipelineConfig;
use crate::epochs::{epoch_path, read_epoch_dir, write_epochs};
use crate::error::{Error, Result};
use crate::formats::{read_events, write_behavior, write_events, write_recording};
use crate::io::{header, write_atomic};
use crate::manifest::{format_manifest, load_manifest, read_recording, DatasetManifest, ParticipantEntry};
use crate::model_io::{load_model, save_model};
use crate::pipeline::{
    paper_contrasts, preprocess_all, run_contrasts, shuffled_accuracy, sig4, simulate_cohort, train_all, Contrast,
};

pub const MANIFEST_FILE: &str = "manifest.txt";

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn csv_file(kind: &str, columns: &str) -> String {
    format!("{}\n{columns}\n", header(kind))
}

/// Writes a synthetic dataset: a manifest, per-participant recording,
/// events and behaviour files, and a ground-truth table.
pub fn simulate(config: &PipelineConfig, out: &Path, pool: &rayon::ThreadPool) -> Result<Cohort> {
    let synth = config.synth()?;
    let montage = builtin_montage();
    let cohort = simulate_cohort(&synth, &montage, pool)?;
    ensure_dir(out)?;
    let mut entries = Vec::new();
    for rec in &cohort.recordings {
        let pid = &rec.participant_id;
        let dir = out.join(pid);
        ensure_dir(&dir)?;
        let logs: Vec<&TrialLog> = cohort.logs.iter().filter(|l| &l.participant_id == pid).collect();
        let exp2: Vec<TrialLog> = logs.iter().filter(|l| l.condition.experiment() == 2).map(|l| (*l).clone()).collect();
        let exp1: Vec<TrialLog> = logs.iter().filter(|l| l.condition.experiment() == 1).map(|l| (*l).clone()).collect();
        let rel = PathBuf::from(pid);
        write_recording(&dir.join("recording.csv"), rec)?;
        write_events(&dir.join("events.csv"), &rec.events)?;
        write_behavior(&dir.join("behavior.csv"), &exp2)?;
        let behavior_exp1 = if exp1.is_empty() {
            None
        } else {
            write_behavior(&dir.join("behavior_exp1.csv"), &exp1)?;
            Some(rel.join("behavior_exp1.csv"))
        };
        entries.push(ParticipantEntry {
            id: pid.clone(),
            recording: rel.join("recording.csv"),
            events: rel.join("events.csv"),
            behavior: rel.join("behavior.csv"),
            behavior_exp1,
        });
    }
    let dataset = format!("synthetic-{}", synth.seed);
    write_atomic(&out.join(MANIFEST_FILE), format_manifest(&dataset, synth.sample_rate_hz, "builtin", &entries).as_bytes())?;
    write_atomic(&out.join("truth.csv"), format_truth(&cohort.truth).as_bytes())?;
    Ok(cohort)
}

pub fn format_truth(truth: &GroundTruth) -> String {
    let mut s = csv_file("truth", "participant,trial_id,clip_id,condition,onset_sample,pressed,press_latency_ms,components");
    for p in &truth.participants {
        for t in &p.trials {
            let onset = t.onset_sample.map(|o| o.to_string()).unwrap_or_default();
            let latency = t.press_latency_ms.map(|l| l.to_string()).unwrap_or_default();
            let comps: Vec<String> = t
                .components
                .iter()
                .map(|c| format!("{}:{}@{}", c.component.as_str(), c.amplitude_uv, c.latency_ms))
                .collect();
            writeln!(
                s,
                "{},{},{},{},{onset},{},{latency},{}",
                p.participant_id,
                t.trial_id,
                t.clip_id,
                t.condition,
                u8::from(t.pressed),
                comps.join(";")
            )
            .unwrap();
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessSummary {
    pub participant: String,
    pub epochs: usize,
    pub rejected: Vec<String>,
    pub dropped_components: Vec<usize>,
    pub ica_converged: Option<bool>,
}

/// Runs the preprocessing chain for every participant and writes one epoch
/// file each, plus `rejections.csv` and `preprocess-summary.csv`.
pub fn preprocess(manifest_path: &Path, config: &PipelineConfig, out: &Path, pool: &rayon::ThreadPool) -> Result<Vec<PreprocessSummary>> {
    let manifest = load_manifest(manifest_path)?;
    let montage = manifest.load_montage()?;
    config.validate_channels(&montage)?;
    let recordings = pool.install(|| {
        manifest
            .participants
            .par_iter()
            .map(|p| read_recording(p, &manifest, &montage).map_err(|e| e.in_participant(&p.id)))
            .collect::<Result<Vec<_>>>()
    })?;
    let outputs = preprocess_all(&recordings, &montage, config, pool)?;
    ensure_dir(out)?;
    let mut rejections = csv_file("rejections", "participant,trial_id");
    let mut summary = csv_file("preprocess-summary", "participant,epochs,rejected,ica_dropped,ica_converged");
    let mut result = Vec::new();
    for (rec, o) in recordings.iter().zip(outputs) {
        let pid = &rec.participant_id;
        let pcfg = config.preprocess_for(pid)?;
        write_epochs(
            &epoch_path(out, pid),
            pid,
            rec.sample_rate_hz,
            (pcfg.window_start_ms, pcfg.window_end_ms),
            &rec.channels,
            &o.epochs,
        )?;
        for t in &o.rejected {
            writeln!(rejections, "{pid},{t}").unwrap();
        }
        let converged = o.ica_report.as_ref().map(|r| r.converged);
        let dropped: Vec<String> = o.dropped_components.iter().map(|c| c.to_string()).collect();
        writeln!(
            summary,
            "{pid},{},{},{},{}",
            o.epochs.len(),
            o.rejected.len(),
            dropped.join(";"),
            converged.map_or("", |c| if c { "1" } else { "0" })
        )
        .unwrap();
        result.push(PreprocessSummary {
            participant: pid.clone(),
            epochs: o.epochs.len(),
            rejected: o.rejected,
            dropped_components: o.dropped_components,
            ica_converged: converged,
        });
    }
    write_atomic(&out.join("rejections.csv"), rejections.as_bytes())?;
    write_atomic(&out.join("preprocess-summary.csv"), summary.as_bytes())?;
    Ok(result)
}

/// Exp-1 rows: occluded hazard, then occlusion.
pub const EXP1_ROWS: [Condition; 2] = [
    Condition::exp1(ConditionLabel::OccludedHazard),
    Condition::exp1(ConditionLabel::Occlusion),
];

/// Exp-2 rows: occluded pedestrian, visible pedestrian, occlusion, control.
pub const EXP2_ROWS: [Condition; 4] = [
    Condition::exp2(ConditionLabel::OccludedPedestrian),
    Condition::exp2(ConditionLabel::VisiblePedestrian),
    Condition::exp2(ConditionLabel::Occlusion),
    Condition::exp2(ConditionLabel::Control),
];

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub test: &'static str,
    pub scope: String,
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub contingency: Vec<ContingencyTable>,
    pub stats: Vec<StatsRow>,
}

pub fn contingency_tables(logs: &[TrialLog]) -> Result<Vec<(&'static str, ContingencyTable)>> {
    let mut out = Vec::new();
    for (name, rows) in [("exp1", &EXP1_ROWS[..]), ("exp2", &EXP2_ROWS[..])] {
        let subset: Vec<TrialLog> = logs.iter().filter(|l| rows.contains(&l.condition)).cloned().collect();
        if !subset.is_empty() {
            out.push((name, build_contingency(&subset, rows)?));
        }
    }
    Ok(out)
}

/// Window amplitude per participant and condition, plus the mean over
/// participants, for every contrast electrode.
pub fn format_erp_report(epochs: &[Epoch], contrasts: &[Contrast]) -> Result<String> {
    let mut s = csv_file("erp-report", "component,window_ms,electrode,condition,participant,n_trials,amplitude_uv");
    let mut seen = Vec::new();
    for c in contrasts {
        let key = (c.window.name, c.electrode.clone());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        for cond in [c.hazard, c.control] {
            let mut per: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for e in epochs.iter().filter(|e| e.condition == cond) {
                per.entry(&e.participant_id).or_default().push(window_amplitude(e, &c.window, &c.electrode)?);
            }
            let mut means = Vec::new();
            for (pid, amps) in &per {
                let m = amps.iter().sum::<f64>() / amps.len() as f64;
                means.push(m);
                erp_row(&mut s, &c.window, &c.electrode, cond, pid, amps.len(), m);
            }
            if !means.is_empty() {
                let n: usize = per.values().map(Vec::len).sum();
                let m = means.iter().sum::<f64>() / means.len() as f64;
                erp_row(&mut s, &c.window, &c.electrode, cond, "all", n, m);
            }
        }
    }
    Ok(s)
}

fn erp_row(s: &mut String, w: &ErpWindow, electrode: &str, cond: Condition, who: &str, n: usize, amp: f64) {
    writeln!(s, "{},{}..{},{electrode},{cond},{who},{n},{:.4}", w.name.as_str(), w.start_ms, w.end_ms, amp).unwrap();
}

pub fn format_stats_row(row: &StatsRow) -> String {
    let r = &row.result;
    let d = r.effect_size.map(|d| format!("{d:.4}")).unwrap_or_default();
    format!("{},{},{:.4},{},{},{d}", row.test, row.scope, r.statistic, r.df, sig4(r.p_two_tailed))
}

/// Chi-square tests on the behaviour logs and the six ERP contrasts.
pub fn report(manifest_path: &Path, epochs_dir: &Path, config: &PipelineConfig, out: &Path) -> Result<Report> {
    let manifest = load_manifest(manifest_path)?;
    let mut logs = Vec::new();
    for p in &manifest.participants {
        logs.extend(manifest.load_behavior(p).map_err(|e| e.in_participant(&p.id))?);
    }
    let epochs = read_epoch_dir(epochs_dir)?;
    build_report(&logs, &epochs, config, out)
}

pub fn build_report(logs: &[TrialLog], epochs: &[Epoch], config: &PipelineConfig, out: &Path) -> Result<Report> {
    let tables = contingency_tables(logs)?;
    let mut cont = csv_file("contingency", "experiment,condition,pressed,not_pressed");
    let mut stats = Vec::new();
    for (name, t) in &tables {
        for (label, row) in t.row_labels.iter().zip(&t.counts) {
            writeln!(cont, "{name},{label},{},{}", row[0], row[1]).unwrap();
        }
        stats.push(StatsRow {
            test: "chi_square",
            scope: format!("{name} press x condition"),
            result: chi_square(t)?,
        });
    }
    let contrasts = paper_contrasts(config)?;
    for (c, r) in contrasts.iter().zip(run_contrasts(epochs, &contrasts)?) {
        stats.push(StatsRow { test: "paired_t", scope: c.scope(), result: r });
    }
    let mut s = csv_file("stats-report", "test,scope,statistic,df,p,effect_size");
    for row in &stats {
        s.push_str(&format_stats_row(row));
        s.push('\n');
    }
    ensure_dir(out)?;
    write_atomic(&out.join("contingency.csv"), cont.as_bytes())?;
    write_atomic(&out.join("stats-report.csv"), s.as_bytes())?;
    write_atomic(&out.join("erp-report.csv"), format_erp_report(epochs, &contrasts)?.as_bytes())?;
    Ok(Report { contingency: tables.into_iter().map(|(_, t)| t).collect(), stats })
}

pub fn model_file_name(task: Task, electrode: &str) -> String {
    format!("{}-{electrode}.rocket", task.name())
}

pub const EVAL_COLUMNS: &str = "task,electrode,seed,accuracy,tp,fp,tn,fn";

/// Fits every configured model, optionally restricted to one task and
/// electrode, and writes `models/*.rocket` and `eval.csv`.
pub fn train(
    epochs_dir: &Path,
    config: &PipelineConfig,
    only: Option<(Task, Option<String>)>,
    out: &Path,
    pool: &rayon::ThreadPool,
) -> Result<Vec<String>> {
    let epochs = read_epoch_dir(epochs_dir)?;
    let mut cfg = config.clone();
    if let Some((task, electrode)) = only {
        let electrodes = match electrode {
            Some(e) => vec![e],
            None => cfg.models()?.into_iter().find(|(t, _)| *t == task).map(|(_, e)| e).unwrap_or_else(|| task.window().electrodes),
        };
        cfg.classifier.models = vec![crate::config::ModelSpec { task: task.name().into(), electrodes }];
    }
    let trained = train_all(&epochs, &cfg, pool)?;
    let models_dir = out.join("models");
    ensure_dir(&models_dir)?;
    let mut eval = csv_file("eval", EVAL_COLUMNS);
    let mut lines = Vec::new();
    for t in &trained {
        save_model(&t.model, &models_dir.join(model_file_name(t.task, &t.electrode)))?;
        let c = &t.evaluation.confusion;
        let line = format!(
            "{},{},{},{:.4},{},{},{},{}",
            t.task.name(),
            t.electrode,
            t.model.meta.seed,
            t.evaluation.accuracy,
            c.tp,
            c.fp,
            c.tn,
            c.fn_
        );
        if t.model.alpha_on_boundary {
            eprintln!(
                "warning: {} at {}: selected alpha {} is at the edge of the grid",
                t.task.name(),
                t.electrode,
                t.model.alpha
            );
        }
        eval.push_str(&line);
        eval.push('\n');
        lines.push(line);
    }
    write_atomic(&out.join("eval.csv"), eval.as_bytes())?;
    Ok(lines)
}

/// Loads a model and checks it matches the requested task and electrode.
pub fn load_checked_model(models_dir: &Path, task: Task, electrode: &str) -> Result<RocketModel> {
    let path = models_dir.join(model_file_name(task, electrode));
    if !path.exists() {
        return Err(Error::ModelMissing { task: task.name().into(), electrode: electrode.into() });
    }
    let model = load_model(&path)?;
    if model.meta.electrode != electrode || model.meta.task != task.name() {
        return Err(Error::ElectrodeMismatch {
            model: format!("{}@{}", model.meta.task, model.meta.electrode),
            requested: format!("{}@{electrode}", task.name()),
        });
    }
    Ok(model)
}

fn epoch_series<'a>(epoch: &'a Epoch, window: &ErpWindow, electrode: &str) -> Result<&'a [f64]> {
    Ok(hazard_eeg_core::erp::window_samples(epoch, window, electrode)?)
}

/// Scores every epoch with one model and writes `predictions.csv`.
pub fn classify(epochs_dir: &Path, model_path: &Path, config: &PipelineConfig, out: &Path) -> Result<usize> {
    let model = load_model(model_path)?;
    let task: Task = model
        .meta
        .task
        .parse()
        .map_err(|_| Error::CorruptModel { path: model_path.into(), message: format!("unknown task `{}`", model.meta.task) })?;
    let window = config.task_window(task)?;
    let epochs = read_epoch_dir(epochs_dir)?;
    let mut s = csv_file("predictions", "participant,trial_id,clip_id,condition,label,score");
    for e in &epochs {
        let series = epoch_series(e, &window, &model.meta.electrode)
            .map_err(|err| match err {
                Error::Core(hazard_eeg_core::Error::UnknownChannel(_)) => Error::ElectrodeMismatch {
                    model: model.meta.electrode.clone(),
                    requested: e.participant_id.clone(),
                },
                other => other,
            })?;
        let p = model.predict_one(series)?;
        writeln!(s, "{},{},{},{},{},{}", e.participant_id, e.trial_id, e.clip_id, e.condition, p.label.as_str(), p.score).unwrap();
    }
    ensure_dir(out)?;
    write_atomic(&out.join("predictions.csv"), s.as_bytes())?;
    Ok(epochs.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BehavioralLabel {
    OvertHazard,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImplicitLabel {
    CovertHazard,
    Hazard,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotationRecord {
    pub clip_id: String,
    pub trial_id: String,
    pub behavioral_label: BehavioralLabel,
    pub implicit_label: ImplicitLabel,
    pub classifier_score: Option<f64>,
    pub provenance: String,
}

/// Vote of the occlusion-task models over their electrodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Vote {
    pub positive: usize,
    pub total: usize,
    pub mean_score: f64,
}

impl Vote {
    pub fn majority(&self) -> bool {
        2 * self.positive > self.total
    }
}

/// Press beats the classifier; an unpressed trial is a covert hazard only
/// on a strict majority of positive votes.
pub fn fuse(pressed: bool, vote: Option<&Vote>) -> (BehavioralLabel, ImplicitLabel) {
    match (pressed, vote) {
        (true, _) => (BehavioralLabel::OvertHazard, ImplicitLabel::Hazard),
        (false, Some(v)) if v.majority() => (BehavioralLabel::None, ImplicitLabel::CovertHazard),
        (false, _) => (BehavioralLabel::None, ImplicitLabel::None),
    }
}

/// One record per trial with an event marker in `clips`, which maps
/// `(participant, trial)` to the clip shown.
pub fn annotate_epochs(
    logs: &[TrialLog],
    clips: &BTreeMap<(String, String), String>,
    epochs: &[Epoch],
    models: &[RocketModel],
    window: &ErpWindow,
) -> Result<Vec<AnnotationRecord>> {
    let by_trial: BTreeMap<(&str, &str), &Epoch> =
        epochs.iter().map(|e| ((e.participant_id.as_str(), e.trial_id.as_str()), e)).collect();
    let electrodes: Vec<&str> = models.iter().map(|m| m.meta.electrode.as_str()).collect();
    let task = models.first().map_or("", |m| m.meta.task.as_str());
    let mut out = Vec::with_capacity(logs.len());
    for log in logs {
        let Some(clip_id) = clips.get(&(log.participant_id.clone(), log.trial_id.clone())) else {
            continue;
        };
        let epoch = by_trial.get(&(log.participant_id.as_str(), log.trial_id.as_str()));
        let vote = match epoch {
            Some(e) if !models.is_empty() => {
                let mut positive = 0;
                let mut sum = 0.0;
                for m in models {
                    let p = m.predict_one(epoch_series(e, window, &m.meta.electrode)?)?;
                    positive += usize::from(p.label == ClassLabel::Positive);
                    sum += p.score;
                }
                Some(Vote { positive, total: models.len(), mean_score: sum / models.len() as f64 })
            }
            _ => None,
        };
        let (behavioral_label, implicit_label) = fuse(log.pressed, vote.as_ref());
        let provenance = match (&vote, epoch) {
            (Some(v), _) => format!("{task}@{} votes {}/{}", electrodes.join("+"), v.positive, v.total),
            (None, None) => "no epoch".to_string(),
            (None, Some(_)) => "no model".to_string(),
        };
        out.push(AnnotationRecord {
            clip_id: clip_id.clone(),
            trial_id: log.trial_id.clone(),
            behavioral_label,
            implicit_label,
            classifier_score: vote.map(|v| v.mean_score),
            provenance,
        });
    }
    Ok(out)
}

pub fn format_annotations(records: &[AnnotationRecord]) -> String {
    let mut s = header("annotations");
    s.push('\n');
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("record serialises"));
        s.push('\n');
    }
    s
}

/// Annotates every trial with an event marker using the occlusion-task models at
/// their configured electrodes.
pub fn annotate(
    manifest_path: &Path,
    epochs_dir: &Path,
    models_dir: &Path,
    config: &PipelineConfig,
    out: &Path,
) -> Result<Vec<AnnotationRecord>> {
    let manifest: DatasetManifest = load_manifest(manifest_path)?;
    let task = Task::OcclusionVsControl;
    let electrodes = config
        .models()?
        .into_iter()
        .find(|(t, _)| *t == task)
        .map(|(_, e)| e)
        .ok_or_else(|| Error::ModelMissing { task: task.name().into(), electrode: "*".into() })?;
    let models = electrodes
        .iter()
        .map(|e| load_checked_model(models_dir, task, e))
        .collect::<Result<Vec<_>>>()?;
    let window = config.task_window(task)?;
    let epochs = read_epoch_dir(epochs_dir)?;
    let mut logs = Vec::new();
    let mut clips = BTreeMap::new();
    for p in &manifest.participants {
        logs.extend(manifest.load_behavior(p).map_err(|e| e.in_participant(&p.id))?);
        for ev in read_events(&p.events)? {
            clips.insert((p.id.clone(), ev.trial_id), ev.clip_id);
        }
    }
    let records = annotate_epochs(&logs, &clips, &epochs, &models, &window)?;
    ensure_dir(out)?;
    write_atomic(&out.join("annotations.jsonl"), format_annotations(&records).as_bytes())?;
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeed {
    pub seed: u64,
    pub contrasts: Vec<TestResult>,
    pub accuracies: Vec<(Task, String, f64, Option<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub contrasts: Vec<Contrast>,
    pub seeds: Vec<SweepSeed>,
}

impl Sweep {
    /// Number of seeds in which contrast `i` is significant with the right sign.
    pub fn confirmed(&self, i: usize, alpha: f64) -> usize {
        self.seeds.iter().filter(|s| self.contrasts[i].confirms(&s.contrasts[i], alpha)).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    pub first_seed: u64,
    pub n_seeds: u64,
    pub classify: bool,
    pub shuffled: bool,
}

/// Simulates, preprocesses and analyses one cohort per seed in memory.
pub fn run_sweep(config: &PipelineConfig, opts: SweepOptions, pool: &rayon::ThreadPool) -> Result<Sweep> {
    let contrasts = paper_contrasts(config)?;
    let montage = builtin_montage();
    let mut seeds = Vec::new();
    for seed in opts.first_seed..opts.first_seed + opts.n_seeds {
        let cfg = config.clone().with_seed(Some(seed));
        let cohort = simulate_cohort(&cfg.synth()?, &montage, pool)?;
        let epochs: Vec<Epoch> =
            preprocess_all(&cohort.recordings, &montage, &cfg, pool)?.into_iter().flat_map(|o| o.epochs).collect();
        let results = run_contrasts(&epochs, &contrasts)?;
        let mut accuracies = Vec::new();
        if opts.classify {
            for t in train_all(&epochs, &cfg, pool)? {
                let shuffled = if opts.shuffled {
                    Some(shuffled_accuracy(&epochs, &cfg, t.task, &t.electrode, seed)?)
                } else {
                    None
                };
                accuracies.push((t.task, t.electrode, t.evaluation.accuracy, shuffled));
            }
        }
        seeds.push(SweepSeed { seed, contrasts: results, accuracies });
    }
    Ok(Sweep { contrasts, seeds })
}

pub fn format_sweep(sweep: &Sweep) -> (String, String) {
    let mut c = csv_file("sweep-contrasts", "seed,scope,t,p,d,confirmed");
    let mut a = csv_file("sweep-classifier", "seed,task,electrode,accuracy,shuffled_accuracy");
    for s in &sweep.seeds {
        for (con, r) in sweep.contrasts.iter().zip(&s.contrasts) {
            let d = r.effect_size.map(|d| format!("{d:.4}")).unwrap_or_default();
            writeln!(c, "{},{},{:.4},{},{d},{}", s.seed, con.scope(), r.statistic, sig4(r.p_two_tailed), u8::from(con.confirms(r, 0.05)))
                .unwrap();
        }
        for (task, e, acc, sh) in &s.accuracies {
            let sh = sh.map(|v| format!("{v:.4}")).unwrap_or_default();
            writeln!(a, "{},{},{e},{acc:.4},{sh}", s.seed, task.name()).unwrap();
        }
    }
    (c, a)
}

pub fn seed_sweep(config: &PipelineConfig, opts: SweepOptions, out: &Path, pool: &rayon::ThreadPool) -> Result<Sweep> {
    let sweep = run_sweep(config, opts, pool)?;
    let (c, a) = format_sweep(&sweep);
    ensure_dir(out)?;
    write_atomic(&out.join("sweep-contrasts.csv"), c.as_bytes())?;
    if opts.classify {
        write_atomic(&out.join("sweep-classifier.csv"), a.as_bytes())?;
    }
    Ok(sweep)
}
