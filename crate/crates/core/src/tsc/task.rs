use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::model::ClassLabel;
use crate::erp::{window_samples, ErpWindow};
use crate::error::{Error, Result};
use crate::recording::{Condition, ConditionLabel, Epoch};
use crate::rng::{streams, Stream};

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInstance {
    pub values: Vec<f64>,
    pub label: ClassLabel,
    pub participant_id: String,
    pub trial_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    /// P400 window; occluded-pedestrian and occlusion pooled against control.
    OcclusionVsControl,
    /// N500 window; occluded-pedestrian against control.
    PedestrianVsControl,
}

impl Task {
    pub const ALL: [Task; 2] = [Task::OcclusionVsControl, Task::PedestrianVsControl];

    pub fn name(self) -> &'static str {
        match self {
            Task::OcclusionVsControl => "occlusion-vs-control",
            Task::PedestrianVsControl => "pedestrian-vs-control",
        }
    }

    pub fn window(self) -> ErpWindow {
        match self {
            Task::OcclusionVsControl => ErpWindow::p400(),
            Task::PedestrianVsControl => ErpWindow::n500(),
        }
    }

    pub fn positive_conditions(self) -> &'static [Condition] {
        const A: [Condition; 2] = [
            Condition::exp2(ConditionLabel::OccludedPedestrian),
            Condition::exp2(ConditionLabel::Occlusion),
        ];
        const B: [Condition; 1] = [Condition::exp2(ConditionLabel::OccludedPedestrian)];
        match self {
            Task::OcclusionVsControl => &A,
            Task::PedestrianVsControl => &B,
        }
    }

    pub fn negative_condition(self) -> Condition {
        Condition::exp2(ConditionLabel::Control)
    }

    pub fn label_for(self, condition: Condition) -> Option<ClassLabel> {
        if self.positive_conditions().contains(&condition) {
            Some(ClassLabel::Positive)
        } else if condition == self.negative_condition() {
            Some(ClassLabel::Negative)
        } else {
            None
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "p400" | "occlusion-vs-control" => Ok(Task::OcclusionVsControl),
            "b" | "n500" | "pedestrian-vs-control" => Ok(Task::PedestrianVsControl),
            other => Err(Error::InvalidConfig(alloc::format!("unknown task `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { n_train: 16, n_test: 4, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TaskMeta {
    pub train_positive: usize,
    pub train_negative: usize,
    pub test_positive: usize,
    pub test_negative: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskData {
    pub task: Task,
    pub electrode: String,
    pub train: Vec<SeriesInstance>,
    pub test: Vec<SeriesInstance>,
    pub meta: TaskMeta,
}

impl TaskData {
    /// Permutes the training labels, leaving the test set untouched.
    pub fn shuffle_train_labels(&mut self, seed: u64) {
        let mut labels: Vec<ClassLabel> = self.train.iter().map(|s| s.label).collect();
        Stream::new(seed, streams::SHUFFLE, 0).shuffle(&mut labels);
        for (s, l) in self.train.iter_mut().zip(labels) {
            s.label = l;
        }
    }
}

fn stream_index(participant: &str, condition: usize) -> u64 {
    let mut h: u32 = 0x811c_9dc5;
    for b in participant.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    (((h & 0x0fff_ffff) as u64) << 4) | condition as u64
}

/// Builds train/test series for one task at one electrode, drawing
/// `n_train` then `n_test` trials per participant per condition from a
/// seeded shuffle of that participant's trials.
pub fn make_task(epochs: &[Epoch], task: Task, electrode: &str, split: SplitSpec) -> Result<TaskData> {
    make_task_with_window(epochs, task, &task.window(), electrode, split)
}

/// As [`make_task`] with a custom analysis window.
pub fn make_task_with_window(epochs: &[Epoch], task: Task, window: &ErpWindow, electrode: &str, split: SplitSpec) -> Result<TaskData> {
    let mut conditions: Vec<Condition> = task.positive_conditions().to_vec();
    conditions.push(task.negative_condition());

    let mut by_participant: BTreeMap<&str, BTreeMap<Condition, Vec<&Epoch>>> = BTreeMap::new();
    for e in epochs {
        let entry = by_participant.entry(e.participant_id.as_str()).or_default();
        if conditions.contains(&e.condition) {
            entry.entry(e.condition).or_default().push(e);
        }
    }
    if by_participant.is_empty() {
        return Err(Error::NoMatchingEpochs);
    }

    let required = split.n_train + split.n_test;
    let mut data = TaskData {
        task,
        electrode: electrode.to_string(),
        train: Vec::new(),
        test: Vec::new(),
        meta: TaskMeta::default(),
    };
    for (participant, groups) in &by_participant {
        for (ci, condition) in conditions.iter().enumerate() {
            let mut trials: Vec<&Epoch> = groups.get(condition).cloned().unwrap_or_default();
            if trials.len() < required {
                return Err(Error::InsufficientTrials {
                    participant: participant.to_string(),
                    condition: condition.to_string(),
                    available: trials.len(),
                    required,
                });
            }
            trials.sort_by(|a, b| a.trial_id.cmp(&b.trial_id));
            Stream::new(split.seed, streams::SPLIT, stream_index(participant, ci)).shuffle(&mut trials);
            let label = task.label_for(*condition).expect("task condition");
            for (k, e) in trials.iter().take(required).enumerate() {
                let inst = SeriesInstance {
                    values: window_samples(*e, window, electrode)?.to_vec(),
                    label,
                    participant_id: e.participant_id.clone(),
                    trial_id: e.trial_id.clone(),
                };
                let positive = label == ClassLabel::Positive;
                if k < split.n_train {
                    data.train.push(inst);
                    if positive {
                        data.meta.train_positive += 1;
                    } else {
                        data.meta.train_negative += 1;
                    }
                } else {
                    data.test.push(inst);
                    if positive {
                        data.meta.test_positive += 1;
                    } else {
                        data.meta.test_negative += 1;
                    }
                }
            }
        }
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use alloc::format;

    fn epoch(participant: &str, trial: usize, condition: Condition) -> Epoch {
        let len = 1100;
        let data: Vec<f64> = (0..len).map(|i| (trial * 10_000 + i) as f64).collect();
        Epoch {
            participant_id: participant.to_string(),
            trial_id: format!("{participant}-{condition}-{trial:03}"),
            clip_id: format!("clip{trial}"),
            condition,
            channels: alloc::vec!["AF3".to_string()],
            samples: Matrix::from_vec(1, len, data),
            window_start_ms: -500,
            window_end_ms: 600,
            sample_rate_hz: 1000.0,
            baseline_corrected: true,
        }
    }

    fn cohort(n_participants: usize, per_condition: usize) -> Vec<Epoch> {
        let mut out = Vec::new();
        for p in 0..n_participants {
            for c in Condition::EXP2 {
                for t in 0..per_condition {
                    out.push(epoch(&format!("P{p:02}"), t, c));
                }
            }
        }
        out
    }

    #[test]
    fn task_b_shape() {
        let data = make_task(&cohort(10, 20), Task::PedestrianVsControl, "AF3", SplitSpec::default()).unwrap();
        assert_eq!(data.train.len(), 320);
        assert_eq!(data.test.len(), 80);
        assert!(data.train.iter().all(|s| s.values.len() == 100));
        assert_eq!(data.meta.train_positive, 160);
        assert_eq!(data.meta.test_negative, 40);
        // Window 451..=550 ms begins 951 samples into the epoch.
        let first = &data.train[0];
        assert_eq!(first.values[0] % 10_000.0, 951.0);
    }

    #[test]
    fn shuffled_labels_keep_counts_and_test_set() {
        let data = make_task(&cohort(10, 20), Task::PedestrianVsControl, "AF3", SplitSpec::default()).unwrap();
        let mut shuffled = data.clone();
        shuffled.shuffle_train_labels(3);
        let positives = |d: &TaskData| d.train.iter().filter(|s| s.label == ClassLabel::Positive).count();
        assert_eq!(positives(&shuffled), positives(&data));
        assert_eq!(shuffled.test, data.test);
        assert!(shuffled.train.iter().zip(&data.train).any(|(a, b)| a.label != b.label));
        assert!(shuffled.train.iter().zip(&data.train).all(|(a, b)| a.values == b.values));
    }

    #[test]
    fn custom_window_changes_slice() {
        let mut w = Task::PedestrianVsControl.window();
        w.start_ms = 0;
        w.end_ms = 9;
        let data = make_task_with_window(&cohort(10, 20), Task::PedestrianVsControl, &w, "AF3", SplitSpec::default()).unwrap();
        assert!(data.train.iter().all(|s| s.values.len() == 10));
        assert_eq!(data.train[0].values[0] % 10_000.0, 500.0);
    }

    #[test]
    fn task_a_ratio_and_disjoint() {
        let data = make_task(&cohort(3, 22), Task::OcclusionVsControl, "AF3", SplitSpec::default()).unwrap();
        assert_eq!(data.meta.train_positive, 2 * data.meta.train_negative);
        assert_eq!(data.meta.test_positive, 2 * data.meta.test_negative);
        for t in &data.test {
            assert!(data.train.iter().all(|s| s.trial_id != t.trial_id));
        }
    }

    #[test]
    fn seeded_split_is_stable_and_varies() {
        let epochs = cohort(2, 20);
        let a = make_task(&epochs, Task::PedestrianVsControl, "AF3", SplitSpec { seed: 1, ..SplitSpec::default() }).unwrap();
        let mut reversed = epochs.clone();
        reversed.reverse();
        let b = make_task(&reversed, Task::PedestrianVsControl, "AF3", SplitSpec { seed: 1, ..SplitSpec::default() }).unwrap();
        assert_eq!(a, b);
        let c = make_task(&epochs, Task::PedestrianVsControl, "AF3", SplitSpec { seed: 2, ..SplitSpec::default() }).unwrap();
        assert_ne!(a.test, c.test);
    }

    #[test]
    fn insufficient_trials_named() {
        let mut epochs = cohort(2, 20);
        epochs.retain(|e| {
            let number: usize = e.trial_id[e.trial_id.len() - 3..].parse().unwrap();
            !(e.participant_id == "P01" && e.condition.label() == ConditionLabel::Occlusion && number >= 10)
        });
        let err = make_task(&epochs, Task::OcclusionVsControl, "AF3", SplitSpec::default()).unwrap_err();
        match err {
            Error::InsufficientTrials { participant, condition, available, required } => {
                assert_eq!(participant, "P01");
                assert_eq!(condition, Condition::exp2(ConditionLabel::Occlusion).to_string());
                assert_eq!(available, 10);
                assert_eq!(required, 20);
            }
            other => panic!("{other:?}"),
        }
        assert!(make_task(&epochs, Task::PedestrianVsControl, "AF3", SplitSpec::default()).is_ok());
    }

    #[test]
    fn task_names_parse() {
        for t in Task::ALL {
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
        }
        assert!("c".parse::<Task>().is_err());
    }
}
