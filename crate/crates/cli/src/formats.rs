//! Plain-text dataset formats: recordings, event sidecars, behaviour logs
//! and montage tables.

use std::fmt::Write as _;
use std::path::Path;

use hazard_eeg_core::linalg::Matrix;
use hazard_eeg_core::montage::MontageEntry;
use hazard_eeg_core::{Condition, ConditionLabel, EventMarker, Montage, Recording, TrialLog};

use crate::error::{Error, Result};
use crate::io::{header, read_text, write_atomic, Lines};

fn split_fields(line: &str) -> Vec<&str> {
    line.split(',').collect()
}

/// Header line, channel-name line, then one comma-separated row per sample.
pub fn format_recording(rec: &Recording) -> String {
    let n = rec.n_samples();
    let n_ch = rec.channels.len();
    let mut out = String::with_capacity(n * n_ch * 8 + 64);
    out.push_str(&header("recording"));
    out.push('\n');
    out.push_str(&rec.channels.join(","));
    out.push('\n');
    let rows: Vec<&[f64]> = (0..n_ch).map(|c| rec.samples.row(c)).collect();
    for t in 0..n {
        for (c, row) in rows.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            write!(out, "{}", row[t]).expect("write to string");
        }
        out.push('\n');
    }
    out
}

pub fn write_recording(path: &Path, rec: &Recording) -> Result<()> {
    write_atomic(path, format_recording(rec).as_bytes())
}

/// Channels and samples of a recording file, without events.
pub fn read_recording_samples(path: &Path, montage: Option<&Montage>) -> Result<(Vec<String>, Matrix)> {
    let text = read_text(path)?;
    let lines = Lines::new(path, &text, "recording")?;
    let Some(&(first_no, first)) = lines.lines.first() else {
        return Err(lines.schema(1, "empty recording file"));
    };
    let channels: Vec<String> = split_fields(first).iter().map(|c| c.trim().to_string()).collect();
    for (i, c) in channels.iter().enumerate() {
        if c.is_empty() {
            return Err(lines.parse_error(first_no, i + 1, "empty channel name"));
        }
        if let Some(m) = montage {
            if m.get(c).is_none() {
                return Err(hazard_eeg_core::Error::UnknownChannel(c.clone()).into());
            }
        }
    }
    let n_ch = channels.len();
    let body = &lines.lines[1..];
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(body.len()); n_ch];
    for &(no, line) in body {
        let fields = split_fields(line);
        if fields.len() != n_ch {
            return Err(Error::RaggedRows { path: path.to_path_buf(), line: no, expected: n_ch, found: fields.len() });
        }
        for (c, f) in fields.iter().enumerate() {
            columns[c].push(lines.parse_f64(no, c + 1, f)?);
        }
    }
    let n = body.len();
    let data: Vec<f64> = columns.into_iter().flatten().collect();
    Ok((channels, Matrix::from_vec(n_ch, n, data)))
}

pub fn format_events(events: &[EventMarker]) -> String {
    let mut out = header("events");
    out.push('\n');
    for e in events {
        writeln!(
            out,
            "{},{},{},{},{}",
            e.sample_index,
            e.trial_id,
            e.clip_id,
            e.condition.experiment(),
            e.condition.label()
        )
        .expect("write to string");
    }
    out
}

pub fn write_events(path: &Path, events: &[EventMarker]) -> Result<()> {
    write_atomic(path, format_events(events).as_bytes())
}

pub fn read_events(path: &Path) -> Result<Vec<EventMarker>> {
    let text = read_text(path)?;
    let lines = Lines::new(path, &text, "events")?;
    let mut out = Vec::with_capacity(lines.lines.len());
    for &(no, line) in &lines.lines {
        let f = split_fields(line);
        if f.len() != 5 {
            return Err(Error::RaggedRows { path: path.to_path_buf(), line: no, expected: 5, found: f.len() });
        }
        let sample_index: usize = f[0]
            .trim()
            .parse()
            .map_err(|_| lines.parse_error(no, 1, format!("`{}` is not a sample index", f[0])))?;
        let experiment: u8 =
            f[3].trim().parse().map_err(|_| lines.parse_error(no, 4, format!("`{}` is not an experiment", f[3])))?;
        let label: ConditionLabel = f[4].trim().parse().map_err(|_| lines.parse_error(no, 5, format!("unknown condition `{}`", f[4])))?;
        let condition = Condition::new(experiment, label).map_err(|e| lines.schema(no, e.to_string()))?;
        for (i, id) in [(2, f[1]), (3, f[2])] {
            if id.trim().is_empty() {
                return Err(lines.parse_error(no, i, "empty identifier"));
            }
        }
        out.push(EventMarker {
            sample_index,
            trial_id: f[1].trim().to_string(),
            condition,
            clip_id: f[2].trim().to_string(),
        });
    }
    Ok(out)
}

pub fn format_behavior(logs: &[TrialLog]) -> String {
    let mut out = header("behavior");
    out.push('\n');
    for l in logs {
        let latency = l.press_latency_ms.map(|v| v.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{},{}", l.trial_id, l.condition.label(), u8::from(l.pressed), latency).expect("write to string");
    }
    out
}

pub fn write_behavior(path: &Path, logs: &[TrialLog]) -> Result<()> {
    write_atomic(path, format_behavior(logs).as_bytes())
}

/// Behaviour rows for one participant; `experiment` fixes which condition
/// labels are valid.
pub fn read_behavior(path: &Path, participant_id: &str, experiment: u8) -> Result<Vec<TrialLog>> {
    let text = read_text(path)?;
    let lines = Lines::new(path, &text, "behavior")?;
    let mut out: Vec<TrialLog> = Vec::with_capacity(lines.lines.len());
    for &(no, line) in &lines.lines {
        let f = split_fields(line);
        if f.len() != 4 {
            return Err(Error::RaggedRows { path: path.to_path_buf(), line: no, expected: 4, found: f.len() });
        }
        let label: ConditionLabel = f[1].trim().parse().map_err(|_| lines.parse_error(no, 2, format!("unknown condition `{}`", f[1])))?;
        let condition = Condition::new(experiment, label).map_err(|e| lines.schema(no, e.to_string()))?;
        let pressed = match f[2].trim() {
            "1" => true,
            "0" => false,
            other => return Err(lines.parse_error(no, 3, format!("pressed must be 0 or 1, found `{other}`"))),
        };
        let latency = match f[3].trim() {
            "" => None,
            v => Some(lines.parse_f64(no, 4, v)?),
        };
        let trial_id = f[0].trim();
        if out.iter().any(|l| l.trial_id == trial_id) {
            return Err(lines.schema(no, format!("trial `{trial_id}` listed twice")));
        }
        let log = TrialLog::new(participant_id, trial_id, condition, pressed, latency).map_err(|e| lines.schema(no, e.to_string()))?;
        out.push(log);
    }
    Ok(out)
}

pub fn format_montage(montage: &Montage) -> String {
    let mut out = header("montage");
    out.push('\n');
    for e in montage.entries() {
        writeln!(out, "{},{},{},{}", e.name, e.position[0], e.position[1], e.position[2]).expect("write to string");
    }
    out
}

/// `name,x,y,z` per line; a leading `name,x,y,z` column header is allowed.
pub fn read_montage(path: &Path) -> Result<Montage> {
    let text = read_text(path)?;
    let lines = Lines::new(path, &text, "montage")?;
    let mut entries = Vec::new();
    for (i, &(no, line)) in lines.lines.iter().enumerate() {
        let f = split_fields(line);
        if i == 0 && f.first().map(|s| s.trim().eq_ignore_ascii_case("name")).unwrap_or(false) {
            continue;
        }
        if f.len() != 4 {
            return Err(Error::RaggedRows { path: path.to_path_buf(), line: no, expected: 4, found: f.len() });
        }
        let position = [lines.parse_f64(no, 2, f[1])?, lines.parse_f64(no, 3, f[2])?, lines.parse_f64(no, 4, f[3])?];
        entries.push(MontageEntry { name: f[0].trim().to_string(), position });
    }
    Ok(Montage::new(entries)?)
}
