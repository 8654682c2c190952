use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::math::mean;
use crate::recording::{ms_to_samples, Epoch, Recording};

pub const DEFAULT_REJECT_THRESHOLD_UV: f64 = 100.0;

/// Cuts `[event - start, event + end)` around every event marker. The
/// event sample lands at relative index `-start_ms * rate / 1000`.
pub fn extract_epochs(rec: &Recording, window_start_ms: i32, window_end_ms: i32) -> Result<Vec<Epoch>> {
    if !(window_start_ms < 0 && window_end_ms > 0) {
        return Err(Error::Precondition(alloc::format!(
            "epoch window {window_start_ms}..{window_end_ms} ms must straddle the event"
        )));
    }
    let pre = ms_to_samples(-window_start_ms as f64, rec.sample_rate_hz);
    let len = Epoch::expected_len(window_start_ms, window_end_ms, rec.sample_rate_hz);
    let n = rec.n_samples() as i64;
    rec.events
        .iter()
        .map(|ev| {
            let start = ev.sample_index as i64 - pre;
            if start < 0 || start + len as i64 > n {
                return Err(Error::WindowOutOfRange {
                    trial_id: ev.trial_id.clone(),
                });
            }
            let start = start as usize;
            let mut samples = Matrix::zeros(rec.channels.len(), len);
            for c in 0..rec.channels.len() {
                samples
                    .row_mut(c)
                    .copy_from_slice(&rec.samples.row(c)[start..start + len]);
            }
            Ok(Epoch {
                participant_id: rec.participant_id.clone(),
                trial_id: ev.trial_id.clone(),
                clip_id: ev.clip_id.clone(),
                condition: ev.condition,
                channels: rec.channels.clone(),
                samples,
                window_start_ms,
                window_end_ms,
                sample_rate_hz: rec.sample_rate_hz,
                baseline_corrected: false,
            })
        })
        .collect()
}

/// Subtracts, per channel, the mean of the pre-event samples `[0, pre)`.
pub fn baseline_correct(epoch: &Epoch) -> Result<Epoch> {
    if epoch.baseline_corrected {
        return Err(Error::AlreadyCorrected(epoch.trial_id.clone()));
    }
    let pre = epoch.pre_samples();
    let mut out = epoch.clone();
    for c in 0..out.samples.rows() {
        let row = out.samples.row_mut(c);
        let base = mean(&row[..pre]);
        for v in row.iter_mut() {
            *v -= base;
        }
    }
    out.baseline_corrected = true;
    Ok(out)
}

/// Splits epochs into retained ones and the ids of those where any channel's
/// peak-to-peak amplitude exceeds `threshold_uv`.
pub fn reject_epochs(epochs: Vec<Epoch>, threshold_uv: f64) -> (Vec<Epoch>, Vec<String>) {
    let mut retained = Vec::with_capacity(epochs.len());
    let mut rejected = Vec::new();
    for e in epochs {
        let worst = (0..e.samples.rows())
            .map(|c| {
                let row = e.samples.row(c);
                let (lo, hi) = row
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                hi - lo
            })
            .fold(0.0, f64::max);
        if worst > threshold_uv {
            rejected.push(e.trial_id);
        } else {
            retained.push(e);
        }
    }
    (retained, rejected)
}
