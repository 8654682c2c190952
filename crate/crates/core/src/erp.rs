//! Condition-wise ERP averaging, window amplitudes and participant-level
//! condition contrasts.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::mean;
use crate::recording::{ms_to_samples, Condition, Epoch};
use crate::stats::{paired_t, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentName {
    P400,
    N500,
}

impl ComponentName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::P400 => "P400",
            Self::N500 => "N500",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Self::Positive => 1.0,
            Self::Negative => -1.0,
        }
    }
}

/// A post-event analysis window with inclusive millisecond endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ErpWindow {
    pub name: ComponentName,
    pub start_ms: i32,
    pub end_ms: i32,
    pub polarity: Polarity,
    pub electrodes: Vec<String>,
}

impl ErpWindow {
    pub fn p400() -> Self {
        Self {
            name: ComponentName::P400,
            start_ms: 351,
            end_ms: 450,
            polarity: Polarity::Positive,
            electrodes: ["FPz", "AF4", "F4"].iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn n500() -> Self {
        Self {
            name: ComponentName::N500,
            start_ms: 451,
            end_ms: 550,
            polarity: Polarity::Negative,
            electrodes: ["AF3", "F3", "F1"].iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Inclusive sample range relative to the start of an epoch whose event
    /// sits at `pre_samples`.
    pub fn sample_range(&self, pre_samples: usize, sample_rate_hz: f64, epoch_len: usize) -> Result<(usize, usize)> {
        let oob = Error::WindowOutOfBounds {
            start_ms: self.start_ms,
            end_ms: self.end_ms,
        };
        if self.start_ms < 0 || self.start_ms > self.end_ms {
            return Err(oob);
        }
        let first = pre_samples + ms_to_samples(self.start_ms as f64, sample_rate_hz) as usize;
        let last = pre_samples + ms_to_samples(self.end_ms as f64, sample_rate_hz) as usize;
        if last >= epoch_len {
            return Err(oob);
        }
        Ok((first, last))
    }

    pub fn len_samples(&self, sample_rate_hz: f64) -> usize {
        (ms_to_samples(self.end_ms as f64, sample_rate_hz) - ms_to_samples(self.start_ms as f64, sample_rate_hz))
            as usize
            + 1
    }
}

/// Pointwise mean of matching epochs at one electrode.
#[derive(Debug, Clone, PartialEq)]
pub struct ErpAverage {
    pub condition: Condition,
    pub electrode: String,
    pub waveform: Vec<f64>,
    pub n_trials: usize,
    pub pre_samples: usize,
    pub sample_rate_hz: f64,
}

/// Anything that exposes time-locked waveforms per electrode.
pub trait Waveforms {
    fn waveform(&self, electrode: &str) -> Result<&[f64]>;
    fn pre_samples(&self) -> usize;
    fn sample_rate_hz(&self) -> f64;
}

impl Waveforms for Epoch {
    fn waveform(&self, electrode: &str) -> Result<&[f64]> {
        self.channel(electrode)
    }
    fn pre_samples(&self) -> usize {
        Epoch::pre_samples(self)
    }
    fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }
}

impl Waveforms for ErpAverage {
    fn waveform(&self, electrode: &str) -> Result<&[f64]> {
        if electrode == self.electrode {
            Ok(&self.waveform)
        } else {
            Err(Error::UnknownChannel(electrode.to_string()))
        }
    }
    fn pre_samples(&self) -> usize {
        self.pre_samples
    }
    fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }
}

pub fn grand_average(epochs: &[Epoch], condition: Condition, electrode: &str) -> Result<ErpAverage> {
    let matching: Vec<&Epoch> = epochs.iter().filter(|e| e.condition == condition).collect();
    let first = matching.first().ok_or(Error::NoMatchingEpochs)?;
    let len = first.len();
    let mut acc = alloc::vec![0.0; len];
    for e in &matching {
        if !e.baseline_corrected {
            return Err(Error::NotBaselineCorrected(e.trial_id.clone()));
        }
        let w = e.channel(electrode)?;
        if w.len() != len {
            return Err(Error::LengthMismatch { left: len, right: w.len() });
        }
        for (a, v) in acc.iter_mut().zip(w) {
            *a += v;
        }
    }
    let n = matching.len() as f64;
    for a in &mut acc {
        *a /= n;
    }
    Ok(ErpAverage {
        condition,
        electrode: electrode.to_string(),
        waveform: acc,
        n_trials: matching.len(),
        pre_samples: first.pre_samples(),
        sample_rate_hz: first.sample_rate_hz,
    })
}

/// The samples of `window` at `electrode`.
pub fn window_samples<'a, W: Waveforms>(source: &'a W, window: &ErpWindow, electrode: &str) -> Result<&'a [f64]> {
    let w = source.waveform(electrode)?;
    let (first, last) = window.sample_range(source.pre_samples(), source.sample_rate_hz(), w.len())?;
    Ok(&w[first..=last])
}

/// Mean amplitude over the inclusive window.
pub fn window_amplitude<W: Waveforms>(source: &W, window: &ErpWindow, electrode: &str) -> Result<f64> {
    Ok(mean(window_samples(source, window, electrode)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticipantAmplitude {
    pub participant_id: String,
    pub a: f64,
    pub b: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Per-participant mean window amplitude in each condition, ordered by
/// participant id. Every participant present in `epochs` must have at
/// least one epoch in both conditions.
pub fn participant_amplitudes(
    epochs: &[Epoch],
    cond_a: Condition,
    cond_b: Condition,
    window: &ErpWindow,
    electrode: &str,
) -> Result<Vec<ParticipantAmplitude>> {
    let mut groups: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for e in epochs {
        let entry = groups.entry(e.participant_id.as_str()).or_default();
        if e.condition == cond_a {
            entry.0.push(window_amplitude(e, window, electrode)?);
        } else if e.condition == cond_b {
            entry.1.push(window_amplitude(e, window, electrode)?);
        }
    }
    groups
        .into_iter()
        .map(|(pid, (a, b))| {
            if a.is_empty() || b.is_empty() {
                return Err(Error::MissingParticipantData(pid.to_string()));
            }
            Ok(ParticipantAmplitude {
                participant_id: pid.to_string(),
                a: mean(&a),
                b: mean(&b),
                n_a: a.len(),
                n_b: b.len(),
            })
        })
        .collect()
}

/// Paired t-test across participants of condition A minus condition B.
pub fn contrast_conditions(
    epochs: &[Epoch],
    cond_a: Condition,
    cond_b: Condition,
    window: &ErpWindow,
    electrode: &str,
) -> Result<TestResult> {
    let amps = participant_amplitudes(epochs, cond_a, cond_b, window, electrode)?;
    let a: Vec<f64> = amps.iter().map(|p| p.a).collect();
    let b: Vec<f64> = amps.iter().map(|p| p.b).collect();
    paired_t(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::baseline_correct;
    use crate::linalg::Matrix;
    use crate::recording::{ConditionLabel, EPOCH_END_MS, EPOCH_START_MS};
    use crate::rng::Stream;
    use alloc::format;
    use alloc::vec;

    const OCCL: Condition = Condition::exp2(ConditionLabel::Occlusion);
    const CTRL: Condition = Condition::exp2(ConditionLabel::Control);

    fn epoch(pid: &str, trial: &str, cond: Condition, rows: Vec<Vec<f64>>) -> Epoch {
        Epoch {
            participant_id: pid.into(),
            trial_id: trial.into(),
            clip_id: "clip".into(),
            condition: cond,
            channels: vec!["FPz".into(), "AF3".into()],
            samples: Matrix::from_rows(&rows),
            window_start_ms: EPOCH_START_MS,
            window_end_ms: EPOCH_END_MS,
            sample_rate_hz: 1000.0,
            baseline_corrected: true,
        }
    }

    fn random_epoch(s: &mut Stream, pid: &str, trial: &str, cond: Condition, shift: f64) -> Epoch {
        let rows = (0..2).map(|_| (0..1100).map(|_| s.normal() + shift).collect()).collect();
        epoch(pid, trial, cond, rows)
    }

    #[test]
    fn windows_have_one_hundred_samples() {
        assert_eq!(ErpWindow::p400().len_samples(1000.0), 100);
        assert_eq!(ErpWindow::n500().len_samples(1000.0), 100);
        assert_eq!(ErpWindow::p400().sample_range(500, 1000.0, 1100).unwrap(), (851, 950));
        assert_eq!(ErpWindow::n500().sample_range(500, 1000.0, 1100).unwrap(), (951, 1050));
    }

    #[test]
    fn constant_epoch_amplitude() {
        let e = epoch("p", "t", OCCL, vec![vec![5.0; 1100], vec![0.0; 1100]]);
        assert_eq!(window_amplitude(&e, &ErpWindow::p400(), "FPz").unwrap(), 5.0);
    }

    #[test]
    fn gaussian_bump_amplitude() {
        let g = |ms: f64| 8.0 * (-(ms - 400.0).powi(2) / (2.0 * 40.0f64.powi(2))).exp();
        let row: Vec<f64> = (0..1100).map(|i| g(i as f64 - 500.0)).collect();
        let e = epoch("p", "t", OCCL, vec![row, vec![0.0; 1100]]);
        let expect = (351..=450).map(|ms| g(ms as f64)).sum::<f64>() / 100.0;
        let got = window_amplitude(&e, &ErpWindow::p400(), "FPz").unwrap();
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn window_past_epoch_end() {
        let e = epoch("p", "t", OCCL, vec![vec![0.0; 1100]; 2]);
        let late = ErpWindow { end_ms: 650, ..ErpWindow::n500() };
        assert!(matches!(window_amplitude(&e, &late, "AF3"), Err(Error::WindowOutOfBounds { .. })));
        assert!(matches!(window_amplitude(&e, &ErpWindow::p400(), "Cz"), Err(Error::UnknownChannel(_))));
    }

    #[test]
    fn grand_average_basics() {
        let mut s = Stream::new(1, 0, 0);
        let a = random_epoch(&mut s, "p", "a", OCCL, 0.0);
        let avg = grand_average(&[a.clone(), a.clone()], OCCL, "FPz").unwrap();
        assert_eq!(avg.waveform, a.samples.row(0));
        let mut neg = a.clone();
        neg.samples = Matrix::from_vec(2, 1100, a.samples.as_slice().iter().map(|v| -v).collect());
        let avg = grand_average(&[a, neg], OCCL, "FPz").unwrap();
        assert!(avg.waveform.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grand_average_matches_accumulate_loop() {
        let mut s = Stream::new(2, 0, 0);
        let epochs: Vec<Epoch> = (0..20).map(|i| random_epoch(&mut s, "p", &format!("t{i}"), OCCL, 1.0)).collect();
        let avg = grand_average(&epochs, OCCL, "AF3").unwrap();
        for t in 0..1100 {
            let mut acc = 0.0;
            for e in &epochs {
                acc += e.samples[(1, t)];
            }
            assert!((avg.waveform[t] - acc / 20.0).abs() < 1e-9);
        }
        assert_eq!(avg.n_trials, 20);
    }

    #[test]
    fn grand_average_errors() {
        let mut s = Stream::new(3, 0, 0);
        let e = random_epoch(&mut s, "p", "t", OCCL, 0.0);
        assert_eq!(grand_average(&[e.clone()], CTRL, "FPz"), Err(Error::NoMatchingEpochs));
        let mut raw = e;
        raw.baseline_corrected = false;
        assert!(matches!(grand_average(&[raw], OCCL, "FPz"), Err(Error::NotBaselineCorrected(_))));
    }

    #[test]
    fn averaging_commutes_with_baseline() {
        let mut s = Stream::new(4, 0, 0);
        let raw: Vec<Epoch> = (0..8)
            .map(|i| {
                let mut e = random_epoch(&mut s, "p", &format!("t{i}"), OCCL, i as f64);
                e.baseline_corrected = false;
                e
            })
            .collect();
        let corrected: Vec<Epoch> = raw.iter().map(|e| baseline_correct(e).unwrap()).collect();
        let avg_of_corrected = grand_average(&corrected, OCCL, "FPz").unwrap();
        // Average the raw epochs by hand, then correct the average.
        let mut avg_raw = raw[0].clone();
        for t in 0..1100 {
            avg_raw.samples[(0, t)] = raw.iter().map(|e| e.samples[(0, t)]).sum::<f64>() / 8.0;
        }
        let corrected_avg = baseline_correct(&avg_raw).unwrap();
        for t in 0..1100 {
            assert!((avg_of_corrected.waveform[t] - corrected_avg.samples[(0, t)]).abs() < 1e-9);
        }
    }

    fn cohort(s: &mut Stream, effect: &[f64]) -> Vec<Epoch> {
        let mut out = Vec::new();
        for (p, &shift) in effect.iter().enumerate() {
            let pid = format!("P{p:02}");
            for k in 0..3 {
                out.push(random_epoch(s, &pid, &format!("{pid}-o{k}"), OCCL, shift));
                out.push(random_epoch(s, &pid, &format!("{pid}-c{k}"), CTRL, 0.0));
            }
        }
        out
    }

    #[test]
    fn identical_conditions_give_zero_t() {
        let mut s = Stream::new(5, 0, 0);
        let mut epochs = Vec::new();
        for p in 0..10 {
            let e = random_epoch(&mut s, &format!("P{p}"), &format!("{p}a"), OCCL, 0.0);
            let mut c = e.clone();
            c.condition = CTRL;
            c.trial_id = format!("{p}b");
            epochs.push(e);
            epochs.push(c);
        }
        let r = contrast_conditions(&epochs, OCCL, CTRL, &ErpWindow::p400(), "FPz").unwrap();
        assert_eq!((r.statistic, r.p_two_tailed), (0.0, 1.0));
    }

    #[test]
    fn contrast_composes_window_means_and_paired_t() {
        let mut s = Stream::new(6, 0, 0);
        let epochs = cohort(&mut s, &[0.5, 0.1, 0.9, -0.2, 0.4, 0.3, 0.8, 0.0, 0.6, 0.2]);
        let w = ErpWindow::p400();
        let r = contrast_conditions(&epochs, OCCL, CTRL, &w, "FPz").unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for p in 0..10 {
            let pid = format!("P{p:02}");
            let amp = |c: Condition| {
                let v: Vec<f64> = epochs
                    .iter()
                    .filter(|e| e.participant_id == pid && e.condition == c)
                    .map(|e| e.samples.row(0)[851..=950].iter().sum::<f64>() / 100.0)
                    .collect();
                v.iter().sum::<f64>() / v.len() as f64
            };
            a.push(amp(OCCL));
            b.push(amp(CTRL));
        }
        assert_eq!(r, paired_t(&a, &b).unwrap());

        let swapped = contrast_conditions(&epochs, CTRL, OCCL, &w, "FPz").unwrap();
        assert_eq!(swapped.statistic, -r.statistic);
        assert_eq!(swapped.effect_size.map(|d| -d), r.effect_size);
        assert!((swapped.p_two_tailed - r.p_two_tailed).abs() < 1e-15);
    }

    #[test]
    fn missing_participant_condition() {
        let mut s = Stream::new(7, 0, 0);
        let mut epochs = cohort(&mut s, &[0.1, 0.2]);
        epochs.retain(|e| !(e.participant_id == "P01" && e.condition == CTRL));
        assert_eq!(
            contrast_conditions(&epochs, OCCL, CTRL, &ErpWindow::p400(), "FPz"),
            Err(Error::MissingParticipantData("P01".into()))
        );
    }

    proptest::proptest! {
        #[test]
        fn window_amplitude_is_linear(a in -5.0f64..5.0, b in -5.0f64..5.0, seed in 0u64..1000) {
            let mut s = Stream::new(seed, 0, 0);
            let x = random_epoch(&mut s, "p", "x", OCCL, 0.0);
            let y = random_epoch(&mut s, "p", "y", OCCL, 0.0);
            let mut z = x.clone();
            z.samples = Matrix::from_vec(2, 1100, x.samples.as_slice().iter().zip(y.samples.as_slice()).map(|(p, q)| a * p + b * q).collect());
            let w = ErpWindow::n500();
            let lhs = window_amplitude(&z, &w, "AF3").unwrap();
            let rhs = a * window_amplitude(&x, &w, "AF3").unwrap() + b * window_amplitude(&y, &w, "AF3").unwrap();
            proptest::prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }
}
