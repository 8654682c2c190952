use hazard_eeg_core::dsp::{preprocess, PreprocessConfig};
use hazard_eeg_core::erp::{contrast_conditions, ErpWindow};
use hazard_eeg_core::montage::builtin_montage;
use hazard_eeg_core::recording::{EPOCH_END_MS, EPOCH_START_MS};
use hazard_eeg_core::synth::{generate_cohort_with, Cohort, SynthConfig};
use hazard_eeg_core::{Condition, ConditionLabel, Epoch};
use proptest::prelude::*;

fn small_config(seed: u64) -> SynthConfig {
    SynthConfig {
        n_participants: 4,
        trials_per_condition: 6,
        exp1_trials_per_condition: 3,
        channels: ["FPz", "AF3", "M1", "M2"].iter().map(|s| s.to_string()).collect(),
        seed,
        ..SynthConfig::default()
    }
}

fn run(seed: u64) -> (Cohort, Vec<Epoch>, usize) {
    let montage = builtin_montage();
    let cohort = generate_cohort_with(&small_config(seed), &montage).unwrap();
    let mut epochs = Vec::new();
    let mut rejected = 0;
    for rec in &cohort.recordings {
        let out = preprocess(rec, &montage, &PreprocessConfig::default()).unwrap();
        rejected += out.rejected.len();
        epochs.extend(out.epochs);
    }
    (cohort, epochs, rejected)
}

#[test]
fn epochs_have_the_fixed_shape_and_zero_baseline() {
    let (cohort, epochs, rejected) = run(5);
    let events: usize = cohort.recordings.iter().map(|r| r.events.len()).sum();
    assert_eq!(epochs.len() + rejected, events);
    for e in &epochs {
        assert_eq!(e.len(), 1100);
        assert_eq!((e.window_start_ms, e.window_end_ms), (EPOCH_START_MS, EPOCH_END_MS));
        assert!(e.baseline_corrected);
        for c in 0..e.channels.len() {
            let base = &e.samples.row(c)[..e.pre_samples()];
            let mean = base.iter().sum::<f64>() / base.len() as f64;
            assert!(mean.abs() < 1e-9, "{} {}: {mean}", e.trial_id, e.channels[c]);
        }
    }
}

#[test]
fn truth_press_counts_match_the_logs() {
    let (cohort, _, _) = run(6);
    for label in ConditionLabel::ALL {
        for experiment in [1, 2] {
            let Ok(condition) = Condition::new(experiment, label) else { continue };
            let logged = cohort.logs.iter().filter(|l| l.condition == condition && l.pressed).count();
            assert_eq!(cohort.truth.press_count(condition), logged, "{condition}");
        }
    }
}

#[test]
fn injected_components_have_their_sign() {
    let (_, epochs, _) = run(7);
    let control = Condition::exp2(ConditionLabel::Control);
    let p400 = contrast_conditions(&epochs, Condition::exp2(ConditionLabel::Occlusion), control, &ErpWindow::p400(), "FPz").unwrap();
    let n500 = contrast_conditions(&epochs, Condition::exp2(ConditionLabel::OccludedPedestrian), control, &ErpWindow::n500(), "AF3").unwrap();
    assert!(p400.statistic > 0.0);
    assert!(n500.statistic < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn contrasts_are_antisymmetric(seed in 0u64..1000) {
        let (_, epochs, _) = run(seed);
        let a = Condition::exp2(ConditionLabel::VisiblePedestrian);
        let b = Condition::exp2(ConditionLabel::Occlusion);
        let w = ErpWindow::n500();
        let ab = contrast_conditions(&epochs, a, b, &w, "AF3").unwrap();
        let ba = contrast_conditions(&epochs, b, a, &w, "AF3").unwrap();
        prop_assert_eq!(ab.statistic, -ba.statistic);
        prop_assert_eq!(ab.effect_size.map(|d| -d), ba.effect_size);
        prop_assert!((ab.p_two_tailed - ba.p_two_tailed).abs() < 1e-12);
    }
}
