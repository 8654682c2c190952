//! Epoch files: one per participant.
//!
//! ```text
//! #hazard-eeg epochs v1
//! participant,P01
//! sample_rate_hz,1000
//! window_ms,-500,600
//! channels,FPz,AF3,...
//! trial,<trial_id>,<clip_id>,<experiment:label>,<baseline_corrected 0|1>
//! <one line of samples per channel, in channel order>
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hazard_eeg_core::linalg::Matrix;
use hazard_eeg_core::{Condition, Epoch};

use crate::error::{Error, Result};
use crate::io::{header, read_text, write_atomic, Lines};

pub fn epoch_path(dir: &Path, participant: &str) -> PathBuf {
    dir.join(format!("{participant}.epochs"))
}

/// All epochs must share participant, rate, window and channels.
pub fn format_epochs(participant: &str, sample_rate_hz: f64, window: (i32, i32), channels: &[String], epochs: &[Epoch]) -> String {
    let mut out = header("epochs");
    out.push('\n');
    writeln!(out, "participant,{participant}").unwrap();
    writeln!(out, "sample_rate_hz,{sample_rate_hz}").unwrap();
    writeln!(out, "window_ms,{},{}", window.0, window.1).unwrap();
    writeln!(out, "channels,{}", channels.join(",")).unwrap();
    for e in epochs {
        writeln!(out, "trial,{},{},{},{}", e.trial_id, e.clip_id, e.condition, u8::from(e.baseline_corrected)).unwrap();
        for c in 0..e.channels.len() {
            let row = e.samples.row(c);
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

pub fn write_epochs(path: &Path, participant: &str, sample_rate_hz: f64, window: (i32, i32), channels: &[String], epochs: &[Epoch]) -> Result<()> {
    write_atomic(path, format_epochs(participant, sample_rate_hz, window, channels, epochs).as_bytes())
}

pub fn read_epochs(path: &Path) -> Result<Vec<Epoch>> {
    let text = read_text(path)?;
    let lines = Lines::new(path, &text, "epochs")?;
    let mut it = lines.lines.iter().copied();
    let mut field = |name: &str| -> Result<(usize, Vec<&str>)> {
        let (no, line) = it.next().ok_or_else(|| lines.schema(0, format!("missing `{name}` line")))?;
        let parts: Vec<&str> = line.split(',').collect();
        if parts[0] != name || parts.len() < 2 {
            return Err(lines.schema(no, format!("expected `{name},...`")));
        }
        Ok((no, parts[1..].to_vec()))
    };
    let (_, p) = field("participant")?;
    let participant = p[0].to_string();
    let (no, r) = field("sample_rate_hz")?;
    let rate = lines.parse_f64(no, 2, r[0])?;
    let (no, w) = field("window_ms")?;
    if w.len() != 2 {
        return Err(lines.schema(no, "window_ms needs start and end"));
    }
    let parse_ms = |i: usize, s: &str| s.trim().parse::<i32>().map_err(|_| lines.parse_error(no, i + 2, format!("`{s}` is not a millisecond offset")));
    let window = (parse_ms(0, w[0])?, parse_ms(1, w[1])?);
    let (_, ch) = field("channels")?;
    let channels: Vec<String> = ch.iter().map(|c| c.to_string()).collect();
    let len = hazard_eeg_core::recording::ms_to_samples((window.1 - window.0) as f64, rate) as usize;

    let rest: Vec<(usize, &str)> = it.collect();
    let block = 1 + channels.len();
    if rest.len() % block != 0 {
        return Err(lines.schema(rest.last().map(|l| l.0).unwrap_or(0), "truncated epoch block"));
    }
    let mut out = Vec::with_capacity(rest.len() / block);
    for chunk in rest.chunks(block) {
        let (no, head) = chunk[0];
        let h: Vec<&str> = head.split(',').collect();
        if h.len() != 5 || h[0] != "trial" {
            return Err(lines.schema(no, "expected `trial,<id>,<clip>,<condition>,<baseline>`"));
        }
        let condition: Condition = h[3].parse().map_err(|_| lines.parse_error(no, 4, format!("unknown condition `{}`", h[3])))?;
        let baseline_corrected = match h[4] {
            "1" => true,
            "0" => false,
            other => return Err(lines.parse_error(no, 5, format!("baseline flag must be 0 or 1, found `{other}`"))),
        };
        let mut data = Vec::with_capacity(len * channels.len());
        for &(rno, row) in &chunk[1..] {
            let fields: Vec<&str> = row.split(',').collect();
            if fields.len() != len {
                return Err(Error::RaggedRows { path: path.to_path_buf(), line: rno, expected: len, found: fields.len() });
            }
            for (i, f) in fields.iter().enumerate() {
                data.push(lines.parse_f64(rno, i + 1, f)?);
            }
        }
        out.push(Epoch {
            participant_id: participant.clone(),
            trial_id: h[1].to_string(),
            clip_id: h[2].to_string(),
            condition,
            channels: channels.clone(),
            samples: Matrix::from_vec(channels.len(), len, data),
            window_start_ms: window.0,
            window_end_ms: window.1,
            sample_rate_hz: rate,
            baseline_corrected,
        });
    }
    Ok(out)
}

/// Every `*.epochs` file in `dir`, in file-name order.
pub fn read_epoch_dir(dir: &Path) -> Result<Vec<Epoch>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "epochs").unwrap_or(false))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::MissingFile(dir.join("*.epochs")));
    }
    let mut out = Vec::new();
    for f in files {
        out.extend(read_epochs(&f)?);
    }
    Ok(out)
}
