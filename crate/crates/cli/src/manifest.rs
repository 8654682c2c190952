//! Dataset manifest: a small key-value format with one section per
//! participant.
//!
//! ```text
//! #hazard-eeg manifest v1
//! dataset = synthetic-0
//! sample_rate_hz = 1000
//! montage = builtin            # or a path to a name,x,y,z file
//!
//! [participant P01]
//! recording = P01/recording.csv
//! events = P01/events.csv
//! behavior = P01/behavior.csv           # experiment 2 trials
//! behavior_exp1 = P01/behavior_exp1.csv # optional, experiment 1 trials
//! ```
//!
//! Paths are relative to the manifest's directory. `#` starts a comment.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hazard_eeg_core::montage::builtin_montage;
use hazard_eeg_core::{Montage, Recording, TrialLog};

use crate::error::{Error, Result};
use crate::formats::{read_behavior, read_events, read_montage, read_recording_samples};
use crate::io::{header, read_text, Lines};

#[derive(Debug, Clone, PartialEq)]
pub enum MontageSource {
    Builtin,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticipantEntry {
    pub id: String,
    pub recording: PathBuf,
    pub events: PathBuf,
    pub behavior: PathBuf,
    pub behavior_exp1: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub path: PathBuf,
    pub dataset: String,
    pub sample_rate_hz: f64,
    pub montage: MontageSource,
    pub participants: Vec<ParticipantEntry>,
}

struct Section {
    id: String,
    line: usize,
    recording: Option<PathBuf>,
    events: Option<PathBuf>,
    behavior: Option<PathBuf>,
    behavior_exp1: Option<PathBuf>,
}

pub fn load_manifest(path: &Path) -> Result<DatasetManifest> {
    let text = read_text(path)?;
    let lines = Lines::new(path, &text, "manifest")?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |v: &str| base.join(v);

    let mut dataset = None;
    let mut rate = None;
    let mut montage = None;
    let mut sections: Vec<Section> = Vec::new();

    for &(no, raw) in &lines.lines {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| lines.schema(no, "unterminated section header"))?;
            let mut parts = inner.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("participant"), Some(id), None) => {
                    if sections.iter().any(|s| s.id == id) {
                        return Err(Error::DuplicateParticipant(id.to_string()));
                    }
                    sections.push(Section {
                        id: id.to_string(),
                        line: no,
                        recording: None,
                        events: None,
                        behavior: None,
                        behavior_exp1: None,
                    });
                }
                _ => return Err(lines.schema(no, format!("expected `[participant <id>]`, found `[{inner}`"))),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| lines.schema(no, format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if value.is_empty() {
            return Err(lines.schema(no, format!("`{key}` has no value")));
        }
        let slot = match sections.last_mut() {
            None => match key {
                "dataset" => &mut dataset,
                "sample_rate_hz" => &mut rate,
                "montage" => &mut montage,
                _ => return Err(lines.schema(no, format!("unknown key `{key}`"))),
            },
            Some(s) => {
                let field = match key {
                    "recording" => &mut s.recording,
                    "events" => &mut s.events,
                    "behavior" => &mut s.behavior,
                    "behavior_exp1" => &mut s.behavior_exp1,
                    _ => return Err(lines.schema(no, format!("unknown participant key `{key}`"))),
                };
                if field.is_some() {
                    return Err(lines.schema(no, format!("`{key}` given twice")));
                }
                *field = Some(resolve(value));
                continue;
            }
        };
        if slot.is_some() {
            return Err(lines.schema(no, format!("`{key}` given twice")));
        }
        *slot = Some((no, value.to_string()));
    }

    let need = |v: Option<(usize, String)>, key: &str| v.ok_or_else(|| lines.schema(1, format!("missing `{key}`")));
    let (_, dataset) = need(dataset, "dataset")?;
    let (rate_line, rate) = need(rate, "sample_rate_hz")?;
    let sample_rate_hz = lines.parse_f64(rate_line, 1, &rate)?;
    if sample_rate_hz <= 0.0 {
        return Err(lines.schema(rate_line, "sample_rate_hz must be positive"));
    }
    let montage = match montage {
        None => MontageSource::Builtin,
        Some((_, v)) if v == "builtin" => MontageSource::Builtin,
        Some((_, v)) => MontageSource::File(resolve(&v)),
    };
    if sections.is_empty() {
        return Err(lines.schema(1, "no participants"));
    }

    let mut participants = Vec::with_capacity(sections.len());
    for s in sections {
        let missing = |key: &str| lines.schema(s.line, format!("participant `{}` has no `{key}`", s.id));
        let entry = ParticipantEntry {
            recording: s.recording.ok_or_else(|| missing("recording"))?,
            events: s.events.ok_or_else(|| missing("events"))?,
            behavior: s.behavior.ok_or_else(|| missing("behavior"))?,
            behavior_exp1: s.behavior_exp1,
            id: s.id,
        };
        participants.push(entry);
    }
    let manifest = DatasetManifest { path: path.to_path_buf(), dataset, sample_rate_hz, montage, participants };
    for p in manifest.all_paths() {
        if !p.is_file() {
            return Err(Error::MissingFile(p));
        }
    }
    Ok(manifest)
}

impl DatasetManifest {
    pub fn all_paths(&self) -> Vec<PathBuf> {
        let mut out = Vec::new();
        if let MontageSource::File(p) = &self.montage {
            out.push(p.clone());
        }
        for e in &self.participants {
            out.extend([e.recording.clone(), e.events.clone(), e.behavior.clone()]);
            out.extend(e.behavior_exp1.clone());
        }
        out
    }

    pub fn load_montage(&self) -> Result<Montage> {
        match &self.montage {
            MontageSource::Builtin => Ok(builtin_montage()),
            MontageSource::File(p) => read_montage(p),
        }
    }

    pub fn participant(&self, id: &str) -> Option<&ParticipantEntry> {
        self.participants.iter().find(|p| p.id == id)
    }

    /// Both experiments' behaviour rows for one participant.
    pub fn load_behavior(&self, entry: &ParticipantEntry) -> Result<Vec<TrialLog>> {
        let mut logs = Vec::new();
        if let Some(p) = &entry.behavior_exp1 {
            logs.extend(read_behavior(p, &entry.id, 1)?);
        }
        logs.extend(read_behavior(&entry.behavior, &entry.id, 2)?);
        Ok(logs)
    }
}

/// Recording named by `entry`, with its event sidecar merged in and
/// validated against the manifest's montage and sample rate.
pub fn read_recording(entry: &ParticipantEntry, manifest: &DatasetManifest, montage: &Montage) -> Result<Recording> {
    let (channels, samples) = read_recording_samples(&entry.recording, Some(montage))?;
    let events = read_events(&entry.events)?;
    Ok(Recording::new(entry.id.clone(), manifest.sample_rate_hz, channels, samples, events)?)
}

/// Manifest text for entries whose paths are relative to the manifest.
pub fn format_manifest(dataset: &str, sample_rate_hz: f64, montage: &str, participants: &[ParticipantEntry]) -> String {
    let mut out = header("manifest");
    out.push('\n');
    writeln!(out, "dataset = {dataset}").expect("write to string");
    writeln!(out, "sample_rate_hz = {sample_rate_hz}").expect("write to string");
    writeln!(out, "montage = {montage}").expect("write to string");
    for p in participants {
        writeln!(out, "\n[participant {}]", p.id).expect("write to string");
        writeln!(out, "recording = {}", p.recording.display()).expect("write to string");
        writeln!(out, "events = {}", p.events.display()).expect("write to string");
        writeln!(out, "behavior = {}", p.behavior.display()).expect("write to string");
        if let Some(b) = &p.behavior_exp1 {
            writeln!(out, "behavior_exp1 = {}", b.display()).expect("write to string");
        }
    }
    out
}
