//! Acceptance criteria, one test per criterion. Each test writes a
//! `criterion N: PASS|FAIL (...)` line straight to stdout, so the verdict
//! shows even when the harness captures test output.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::hint::black_box;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use hazard_eeg::config::ModelSpec;
use hazard_eeg::pipeline::{paper_contrasts, Contrast, preprocess_all, run_contrasts, shuffled_accuracy, simulate_cohort, task_data, thread_pool, train_one};
use hazard_eeg::PipelineConfig;
use hazard_eeg_core::dsp::{bandpass, fast_ica_with, flag_blink_components, remove_components, FilterSpec, IcaOptions};
use hazard_eeg_core::erp::{grand_average, window_amplitude, ComponentName, ErpWindow};
use hazard_eeg_core::linalg::Matrix;
use hazard_eeg_core::math::pearson;
use hazard_eeg_core::montage::builtin_montage;
use hazard_eeg_core::recording::ConditionLabel;
use hazard_eeg_core::rng::Stream;
use hazard_eeg_core::stats::{chi_square, paired_t, ContingencyTable, TestResult};
use hazard_eeg_core::synth::{blink_waveform, generate_participant, SynthConfig};
use hazard_eeg_core::tsc::{RidgePath, Task};
use hazard_eeg_core::{Condition, Epoch, Recording};

fn verdict(n: u32, pass: bool, detail: &str) -> bool {
    let line = format!("criterion {n}: {} ({detail})\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    pass
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn criterion_1_chi_square_reproduction() {
    let exp1 = ContingencyTable::from_counts(vec![vec![217, 3], vec![18, 202]]);
    let exp2 = ContingencyTable::from_counts(vec![vec![220, 0], vec![219, 1], vec![59, 161], vec![35, 185]]);
    let reps = 1000u32;
    let start = Instant::now();
    let mut results = (None, None);
    for _ in 0..reps {
        results = (Some(chi_square(black_box(&exp1)).unwrap()), Some(chi_square(black_box(&exp2)).unwrap()));
    }
    let per_call = start.elapsed() / (2 * reps);
    let (a, b) = (results.0.unwrap(), results.1.unwrap());
    let pass = close(a.statistic, 361.69, 0.05)
        && a.df == 1
        && a.p_two_tailed < 0.001
        && close(b.statistic, 571.81, 0.05)
        && b.df == 3
        && b.p_two_tailed < 0.001
        && per_call < Duration::from_millis(1);
    let detail = format!(
        "chi2 {:.4} df {} p {:.3e}; chi2 {:.4} df {} p {:.3e}; {:?} per call",
        a.statistic, a.df, a.p_two_tailed, b.statistic, b.df, b.p_two_tailed, per_call
    );
    assert!(verdict(1, pass, &detail), "{detail}");
}

/// Ten differences whose paired t is exactly `t`.
fn differences_with_t(t: f64) -> Vec<f64> {
    let z: Vec<f64> = (0..10).map(|i| (i as f64 - 4.5) * if i % 2 == 0 { 1.0 } else { 0.7 }).collect();
    let m = z.iter().sum::<f64>() / 10.0;
    let sd = (z.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / 9.0).sqrt();
    z.iter().map(|v| (v - m) / sd + t / 10f64.sqrt()).collect()
}

#[test]
fn criterion_2_t_d_p_consistency() {
    let pairs: [(f64, f64, Option<(f64, f64)>); 6] = [
        (3.51, 1.11, Some((0.0066, 0.0005))),
        (1.59, 0.50, None),
        (1.06, 0.34, None),
        (2.64, 0.84, Some((0.027, 0.002))),
        (2.28, 0.72, Some((0.049, 0.002))),
        (2.31, 0.73, Some((0.046, 0.002))),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (t, d_paper, p_paper) in pairs {
        let r = paired_t(&differences_with_t(t), &[0.0; 10]).unwrap();
        let d = r.effect_size.unwrap();
        let d_ok = close(d, d_paper, 0.005) && rel_close(d, t / 10f64.sqrt(), 1e-9) && rel_close(r.statistic, t, 1e-9);
        let p_ok = p_paper.map_or(true, |(p, tol)| close(r.p_two_tailed, p, tol));
        all &= d_ok && p_ok;
        let p_note = p_paper.map_or(String::new(), |(p, _)| format!(" p {:.4} vs {p}", r.p_two_tailed));
        let flag = if d_ok && p_ok { "ok" } else { "MISS" };
        parts.push(format!("t={t}: d {d:.4} vs {d_paper}{p_note} {flag}"));
    }
    let detail = parts.join("; ");
    assert!(verdict(2, all, &detail), "{detail}");
}

fn dft_gain_db(h: &[f64], freq: f64, rate: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (k, v) in h.iter().enumerate() {
        let w = 2.0 * PI * freq * k as f64 / rate;
        re += v * w.cos();
        im -= v * w.sin();
    }
    20.0 * (re * re + im * im).sqrt().log10()
}

fn one_channel(x: Vec<f64>, rate: f64) -> Recording {
    Recording::new("P00", rate, vec!["FPz".into()], Matrix::from_vec(1, x.len(), x), vec![]).unwrap()
}

#[test]
fn criterion_3_filter_contract() {
    let start = Instant::now();
    let rate = 1000.0;
    let spec = FilterSpec::default();
    let n = 1 << 17;
    let mut impulse = vec![0.0; n];
    impulse[n / 2] = 1.0;
    let h = bandpass(&one_channel(impulse, rate), &spec).unwrap().samples.row(0).to_vec();
    let g10 = dft_gain_db(&h, 10.0, rate);
    let g0 = dft_gain_db(&h, 0.0, rate);
    let g80 = dft_gain_db(&h, 80.0, rate);

    let mut rng = Stream::new(11, 0, 0);
    let len = 20_000;
    let comps: Vec<(f64, f64)> = (0..60).map(|_| (rng.uniform_range(2.0, 30.0), rng.uniform_range(0.0, 2.0 * PI))).collect();
    let x: Vec<f64> = (0..len)
        .map(|k| comps.iter().map(|(f, ph)| (2.0 * PI * f * k as f64 / rate + ph).sin()).sum())
        .collect();
    let y = bandpass(&one_channel(x.clone(), rate), &spec).unwrap().samples.row(0).to_vec();
    let xcorr = |lag: i64| -> f64 {
        (0..len as i64)
            .filter_map(|k| {
                let j = k + lag;
                (j >= 0 && j < len as i64).then(|| x[k as usize] * y[j as usize])
            })
            .sum()
    };
    let peak = (-100..=100).max_by(|a, b| xcorr(*a).total_cmp(&xcorr(*b))).unwrap();
    let elapsed = start.elapsed();
    let pass = g10.abs() <= 1.0 && g0 <= -20.0 && g80 <= -20.0 && peak == 0 && elapsed < Duration::from_secs(5);
    let detail = format!("10 Hz {g10:.3} dB, DC {g0:.1} dB, 80 Hz {g80:.1} dB, xcorr peak lag {peak}, {elapsed:.2?}");
    assert!(verdict(3, pass, &detail), "{detail}");
}

fn two_sources(n: usize) -> (Vec<f64>, Vec<f64>) {
    let sine = (0..n).map(|t| (2.0 * PI * 3.0 * t as f64 / 1000.0).sin()).collect();
    let saw = (0..n).map(|t| (1.3 * t as f64 / 1000.0).fract() * 2.0 - 1.0).collect();
    (sine, saw)
}

#[test]
fn criterion_4_ica_recovery() {
    let start = Instant::now();
    let n = 10_000;
    let (s1, s2) = two_sources(n);
    let x1: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| 0.8 * a + 0.5 * b).collect();
    let x2: Vec<f64> = s1.iter().zip(&s2).map(|(a, b)| 0.3 * a - 1.1 * b + 2.0).collect();
    let mixed = Recording::new("P00", 1000.0, vec!["A".into(), "B".into()], Matrix::from_rows(&[x1, x2]), vec![]).unwrap();
    let d = fast_ica_with(&mixed, &IcaOptions::new(2, 5)).unwrap();
    let r = |k: usize, s: &[f64]| pearson(d.activations.row(k), s).abs();
    let recovered = (r(0, &s1).min(r(1, &s2))).max(r(0, &s2).min(r(1, &s1)));

    let channels: Vec<String> = ["FPz", "AF3", "AF4", "F3", "F1", "F4", "M1", "M2"].iter().map(|s| s.to_string()).collect();
    let cfg = SynthConfig {
        n_participants: 1,
        trials_per_condition: 5,
        exp1_trials_per_condition: 0,
        blink_rate_per_min: 20.0,
        channels: channels.clone(),
        seed: 4,
        ..SynthConfig::default()
    };
    let montage = builtin_montage();
    let (rec, _, truth) = generate_participant(&cfg, &montage, 0).unwrap();
    let shape = blink_waveform(rec.sample_rate_hz);
    let mut blink = vec![0.0; rec.n_samples()];
    for (&onset, &amp) in truth.blink_onsets.iter().zip(&truth.blink_amplitudes_uv) {
        for (k, v) in shape.iter().enumerate() {
            if let Some(b) = blink.get_mut(onset + k) {
                *b += amp * v;
            }
        }
    }
    let before = pearson(rec.channel("FPz").unwrap(), &blink).abs();
    let opts = IcaOptions { fit_stride: 2, ..IcaOptions::new(channels.len(), 4) };
    let decomp = fast_ica_with(&rec, &opts).unwrap();
    let flagged = flag_blink_components(&decomp, &rec, "FPz", 0.7).unwrap();
    let cleaned = remove_components(&rec, &decomp, &flagged).unwrap();
    let residual = pearson(cleaned.channel("FPz").unwrap(), &blink).abs();
    let elapsed = start.elapsed();
    let pass = recovered >= 0.99 && !flagged.is_empty() && residual <= 0.1 && elapsed < Duration::from_secs(30);
    let detail = format!(
        "two-source |r| {recovered:.4}; {} blinks, FPz |r| {before:.3} before, {residual:.3} after dropping {flagged:?}; {elapsed:.2?}",
        truth.blink_onsets.len()
    );
    assert!(verdict(4, pass, &detail), "{detail}");
}

const SWEEP_SEEDS: u64 = 20;
const SWEEP_CHANNELS: [&str; 4] = ["FPz", "AF3", "M1", "M2"];

struct SeedRun {
    calibrated: Vec<TestResult>,
    null: Vec<TestResult>,
    accuracy: f64,
    shuffled: f64,
}

struct SweepData {
    runs: Vec<SeedRun>,
    contrasts: Vec<Contrast>,
    calibrated_time: Duration,
    null_time: Duration,
    classifier_time: Duration,
    shape: (usize, usize),
    single_trial_snr: f64,
}

fn sweep_config(seed: u64, null: bool) -> PipelineConfig {
    let mut cfg = PipelineConfig::default().with_seed(Some(seed));
    cfg.simulate.channels = Some(SWEEP_CHANNELS.iter().map(|s| s.to_string()).collect());
    cfg.simulate.no_effects = null;
    cfg.classifier.models = vec![ModelSpec { task: Task::PedestrianVsControl.name().into(), electrodes: vec!["AF3".into()] }];
    cfg
}

/// Mean injected N500 window amplitude at AF3 over the standard deviation
/// of single-trial control window amplitudes.
fn snr(epochs: &[Epoch]) -> f64 {
    let w = ErpWindow::n500();
    let amps = |c: ConditionLabel| -> Vec<f64> {
        epochs
            .iter()
            .filter(|e| e.condition == Condition::exp2(c))
            .map(|e| window_amplitude(e, &w, "AF3").unwrap())
            .collect()
    };
    let (pos, neg) = (amps(ConditionLabel::OccludedPedestrian), amps(ConditionLabel::Control));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let m = mean(&neg);
    let sd = (neg.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (neg.len() - 1) as f64).sqrt();
    (mean(&pos) - m).abs() / sd
}

fn sweep() -> &'static SweepData {
    static DATA: OnceLock<SweepData> = OnceLock::new();
    DATA.get_or_init(|| {
        let pool = thread_pool(None).unwrap();
        let montage = builtin_montage();
        let contrasts: Vec<_> = paper_contrasts(&sweep_config(0, false))
            .unwrap()
            .into_iter()
            .filter(|c| SWEEP_CHANNELS.contains(&c.electrode.as_str()))
            .collect();
        let mut runs = Vec::new();
        let (mut calibrated_time, mut null_time, mut classifier_time) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
        let mut shape = (0, 0);
        let mut snr_sum = 0.0;
        for seed in 0..SWEEP_SEEDS {
            let t0 = Instant::now();
            let cfg = sweep_config(seed, false);
            let cohort = simulate_cohort(&cfg.synth().unwrap(), &montage, &pool).unwrap();
            let epochs: Vec<Epoch> =
                preprocess_all(&cohort.recordings, &montage, &cfg, &pool).unwrap().into_iter().flat_map(|o| o.epochs).collect();
            let calibrated = run_contrasts(&epochs, &contrasts).unwrap();
            calibrated_time += t0.elapsed();

            let t1 = Instant::now();
            let task = Task::PedestrianVsControl;
            if seed == 0 {
                let data = task_data(&epochs, &cfg, task, "AF3").unwrap();
                shape = (data.train.len(), data.test.len());
            }
            let accuracy = train_one(&epochs, &cfg, task, "AF3").unwrap().evaluation.accuracy;
            let shuffled = shuffled_accuracy(&epochs, &cfg, task, "AF3", seed).unwrap();
            classifier_time += t1.elapsed();
            snr_sum += snr(&epochs);

            let t2 = Instant::now();
            let ncfg = sweep_config(seed, true);
            let cohort = simulate_cohort(&ncfg.synth().unwrap(), &montage, &pool).unwrap();
            let epochs: Vec<Epoch> =
                preprocess_all(&cohort.recordings, &montage, &ncfg, &pool).unwrap().into_iter().flat_map(|o| o.epochs).collect();
            let null = run_contrasts(&epochs, &contrasts).unwrap();
            null_time += t2.elapsed();
            runs.push(SeedRun { calibrated, null, accuracy, shuffled });
        }
        SweepData {
            runs,
            contrasts,
            calibrated_time,
            null_time,
            classifier_time,
            shape,
            single_trial_snr: snr_sum / SWEEP_SEEDS as f64,
        }
    })
}

#[test]
fn criterion_5_erp_effect_recovery() {
    let data = sweep();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, c) in data.contrasts.iter().enumerate() {
        let scope = c.scope();
        let hits = data.runs.iter().filter(|r| c.confirms(&r.calibrated[i], 0.05)).count();
        let false_pos = data.runs.iter().filter(|r| r.null[i].p_two_tailed < 0.05).count();
        let mean_d = data.runs.iter().map(|r| r.calibrated[i].effect_size.unwrap()).sum::<f64>() / SWEEP_SEEDS as f64;
        pass &= hits >= 15 && false_pos <= 2;
        parts.push(format!("{scope}: mean d {mean_d:.2}, significant {hits}/20, null false positives {false_pos}/20"));
    }
    let total = data.calibrated_time + data.null_time;
    pass &= total < Duration::from_secs(600);
    let detail = format!("{}; sweep {total:.1?}", parts.join("; "));
    assert!(verdict(5, pass, &detail), "{detail}");
}

/// Central 99% band of Binomial(n, 1/2) as accuracy fractions.
fn binomial_band(n: u64) -> (f64, f64) {
    let mut pmf = vec![0.0f64; n as usize + 1];
    pmf[0] = 0.5f64.powi(n as i32);
    for k in 1..=n as usize {
        pmf[k] = pmf[k - 1] * (n as f64 - k as f64 + 1.0) / k as f64;
    }
    let mut lo = 0;
    let mut below = 0.0;
    while below + pmf[lo] <= 0.005 {
        below += pmf[lo];
        lo += 1;
    }
    let hi = n as usize - lo;
    (lo as f64 / n as f64, hi as f64 / n as f64)
}

#[test]
fn criterion_6_classification_protocol() {
    let data = sweep();
    let mean_acc = data.runs.iter().map(|r| r.accuracy).sum::<f64>() / SWEEP_SEEDS as f64;
    let (lo, hi) = binomial_band(80);
    let in_band = data.runs.iter().filter(|r| r.shuffled >= lo && r.shuffled <= hi).count();
    let time = data.calibrated_time + data.classifier_time;
    let pass = data.shape == (320, 80) && (0.60..=0.85).contains(&mean_acc) && in_band >= 18 && time < Duration::from_secs(600);
    let detail = format!(
        "task (b) at AF3: {}/{} train/test, mean accuracy {mean_acc:.3}, shuffled within [{lo:.4}, {hi:.4}] in {in_band}/20, single-trial SNR {:.2}, {time:.1?}",
        data.shape.0, data.shape.1, data.single_trial_snr
    );
    assert!(verdict(6, pass, &detail), "{detail}");
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

fn run_pipeline(config: &Path, root: &Path, jobs: usize) {
    let bin = env!("CARGO_BIN_EXE_hazard-eeg");
    let data = root.join("data");
    let epochs = root.join("epochs");
    let train = root.join("train");
    let steps: Vec<(PathBuf, Vec<PathBuf>, &str)> = vec![
        (data.clone(), vec![], "simulate"),
        (epochs.clone(), vec![data.join("manifest.txt")], "preprocess"),
        (train.clone(), vec![epochs.clone()], "train"),
        (root.join("annotate"), vec![data.join("manifest.txt"), epochs.clone(), train.join("models")], "annotate"),
    ];
    for (out, args, verb) in steps {
        let output = Command::new(bin)
            .arg("--config")
            .arg(config)
            .args(["--seed", "42", "--jobs", &jobs.to_string(), "--out"])
            .arg(&out)
            .arg(verb)
            .args(&args)
            .output()
            .unwrap();
        assert!(output.status.success(), "{verb}: {}", String::from_utf8_lossy(&output.stderr));
    }
}

#[test]
fn criterion_7_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.toml");
    std::fs::write(
        &config,
        "[simulate]\nn_participants = 3\ntrials_per_condition = 10\nexp1_trials_per_condition = 2\n\
         channels = [\"FPz\", \"AF3\", \"AF4\", \"F3\", \"F1\", \"F4\", \"M1\", \"M2\"]\n\
         [classifier]\nn_kernels = 200\n[split]\nn_train = 8\nn_test = 2\n",
    )
    .unwrap();
    let runs = [("first", 1), ("second", 1), ("parallel", 4)];
    for (name, jobs) in runs {
        run_pipeline(&config, &dir.path().join(name), jobs);
    }
    let first = tree(&dir.path().join("first"));
    let second = tree(&dir.path().join("second"));
    let parallel = tree(&dir.path().join("parallel"));
    let differing = |other: &BTreeMap<PathBuf, Vec<u8>>| -> Vec<String> {
        let keys: BTreeSet<&PathBuf> = first.keys().chain(other.keys()).collect();
        keys.into_iter().filter(|k| first.get(*k) != other.get(*k)).map(|k| k.display().to_string()).collect()
    };
    let (d2, d4) = (differing(&second), differing(&parallel));
    let pass = !first.is_empty() && d2.is_empty() && d4.is_empty();
    let detail = format!(
        "{} files; repeat differs in {d2:?}; --jobs 1 vs 4 differs in {d4:?}",
        first.len()
    );
    assert!(verdict(7, pass, &detail), "{detail}");
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Gamma(m / 2) for a positive integer m.
fn gamma_half(m: u32) -> f64 {
    if m % 2 == 0 {
        (1..m / 2).map(|k| k as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Two-tailed Student t p-value by quadrature of the density tail.
fn t_p_oracle(t: f64, df: u32) -> f64 {
    let nu = df as f64;
    let c = gamma_half(df + 1) / ((nu * PI).sqrt() * gamma_half(df));
    let a = t.abs();
    let density = |x: f64| c * (1.0 + x * x / nu).powf(-(nu + 1.0) / 2.0);
    let tail = simpson(|u| if u == 0.0 { if df == 1 { c / a } else { 0.0 } } else { density(a / u) * a / (u * u) }, 0.0, 1.0, 4000);
    2.0 * tail
}

fn erfc_oracle(z: f64) -> f64 {
    2.0 / PI.sqrt() * simpson(|t| (-t * t).exp(), z, z + 12.0, 24_000)
}

/// Chi-square survival function from its closed-form series.
fn chisq_sf_oracle(x: f64, df: u32) -> f64 {
    let h = x / 2.0;
    if df % 2 == 0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..df / 2 {
            term *= h / j as f64;
            sum += term;
        }
        (-h).exp() * sum
    } else {
        let mut sum = 0.0;
        let mut term = h.sqrt() / gamma_half(3);
        for j in 0..(df.saturating_sub(1)) / 2 {
            sum += term;
            term *= h / (j as f64 + 1.5);
        }
        erfc_oracle(h.sqrt()) + (-h).exp() * sum
    }
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

fn random_epoch(rng: &mut Stream, condition: Condition, rate: f64, channels: &[String]) -> Epoch {
    let len = Epoch::expected_len(-500, 600, rate);
    let data: Vec<f64> = (0..channels.len() * len).map(|_| 20.0 * rng.normal()).collect();
    Epoch {
        participant_id: "P01".into(),
        trial_id: format!("t{}", rng.below(1_000_000)),
        clip_id: "c".into(),
        condition,
        channels: channels.to_vec(),
        samples: Matrix::from_vec(channels.len(), len, data),
        window_start_ms: -500,
        window_end_ms: 600,
        sample_rate_hz: rate,
        baseline_corrected: true,
    }
}

#[test]
fn criterion_8_oracle_equivalence() {
    const CASES: usize = 100;
    let mut rng = Stream::new(2024, 0, 0);
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut fail = |name: &'static str, ok: bool| {
        *failures.entry(name).or_insert(0) += usize::from(!ok);
    };

    for _ in 0..CASES {
        let n = 3 + rng.below(28) as usize;
        let shift = rng.uniform_range(-1.0, 1.0);
        let x: Vec<f64> = (0..n).map(|_| rng.normal() * 3.0 + 10.0).collect();
        let y: Vec<f64> = x.iter().map(|v| v - shift - rng.normal()).collect();
        let r = paired_t(&x, &y).unwrap();
        let d: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let m = d.iter().sum::<f64>() / n as f64;
        let sd = (d.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64).sqrt();
        let t = m / (sd / (n as f64).sqrt());
        let ok = r.df as usize == n - 1
            && rel_close(r.statistic, t, 1e-9)
            && rel_close(r.effect_size.unwrap(), m / sd, 1e-9)
            && rel_close(r.p_two_tailed, t_p_oracle(t, r.df), 1e-6);
        fail("paired_t", ok);
    }

    for _ in 0..CASES {
        let rows = 2 + rng.below(3) as usize;
        let cols = 2 + rng.below(2) as usize;
        let counts: Vec<Vec<u64>> = (0..rows).map(|_| (0..cols).map(|_| 1 + rng.below(60)).collect()).collect();
        let table = ContingencyTable::from_counts(counts.clone());
        let r = chi_square(&table).unwrap();
        let total: f64 = counts.iter().flatten().sum::<u64>() as f64;
        let mut stat = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                let row: f64 = counts[i].iter().sum::<u64>() as f64;
                let col: f64 = counts.iter().map(|r| r[j]).sum::<u64>() as f64;
                let e = row * col / total;
                stat += (counts[i][j] as f64 - e).powi(2) / e;
            }
        }
        let df = ((rows - 1) * (cols - 1)) as u32;
        let ok = r.df == df && rel_close(r.statistic, stat, 1e-9) && rel_close(r.p_two_tailed, chisq_sf_oracle(stat, df), 1e-6);
        fail("chi_square", ok);
    }

    let channels: Vec<String> = vec!["FPz".into(), "AF3".into()];
    for _ in 0..CASES {
        let rate = if rng.below(2) == 0 { 1000.0 } else { 2000.0 };
        let e = random_epoch(&mut rng, Condition::exp2(ConditionLabel::Control), rate, &channels);
        let start = rng.below(500) as i32;
        let end = start + rng.below((600 - start) as u64) as i32;
        let mut w = ErpWindow::p400();
        w.start_ms = start;
        w.end_ms = end;
        let step = 1000.0 / rate;
        let pre = 500.0 / step;
        let row = e.channel("AF3").unwrap();
        let picked: Vec<f64> = (0..row.len())
            .filter(|&k| {
                let t = (k as f64 - pre) * step;
                t >= start as f64 - 1e-9 && t <= end as f64 + 1e-9
            })
            .map(|k| row[k])
            .collect();
        let expected = picked.iter().sum::<f64>() / picked.len() as f64;
        fail("window_amplitude", rel_close(window_amplitude(&e, &w, "AF3").unwrap(), expected, 1e-9));
    }

    for _ in 0..CASES {
        let k = 1 + rng.below(12) as usize;
        let target = Condition::exp2(ConditionLabel::Occlusion);
        let mut epochs: Vec<Epoch> = (0..k).map(|_| random_epoch(&mut rng, target, 1000.0, &channels)).collect();
        epochs.extend((0..3).map(|_| random_epoch(&mut rng, Condition::exp2(ConditionLabel::Control), 1000.0, &channels)));
        let avg = grand_average(&epochs, target, "FPz").unwrap();
        let matching: Vec<&Epoch> = epochs.iter().filter(|e| e.condition == target).collect();
        let ok = avg.n_trials == k
            && (0..avg.waveform.len()).all(|t| {
                let brute = matching.iter().map(|e| e.channel("FPz").unwrap()[t]).sum::<f64>() / k as f64;
                close(avg.waveform[t], brute, 1e-9 * brute.abs().max(1.0))
            });
        fail("grand_average", ok);
    }

    for _ in 0..CASES {
        let n = 4 + rng.below(27) as usize;
        let p = 1 + rng.below(40) as usize;
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..p).map(|_| rng.normal()).collect()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let alpha = 10f64.powf(rng.uniform_range(-3.0, 3.0));
        let (w, b) = RidgePath::new(&Matrix::from_rows(&rows), &y, true).coefficients(alpha);
        let xm: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
        let ym = y.iter().sum::<f64>() / n as f64;
        let mut a = vec![vec![0.0; p]; p];
        let mut rhs = vec![0.0; p];
        for (r, yi) in rows.iter().zip(&y) {
            for i in 0..p {
                rhs[i] += (r[i] - xm[i]) * (yi - ym);
                for j in 0..p {
                    a[i][j] += (r[i] - xm[i]) * (r[j] - xm[j]);
                }
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += alpha;
        }
        let w_ref = solve(a, rhs);
        let b_ref = ym - xm.iter().zip(&w_ref).map(|(m, v)| m * v).sum::<f64>();
        let scale = w_ref.iter().fold(b_ref.abs(), |acc, v| acc.max(v.abs()));
        let ok = w.iter().zip(&w_ref).all(|(u, v)| close(*u, *v, 1e-6 * scale)) && close(b, b_ref, 1e-6 * scale);
        fail("ridge", ok);
    }

    let pass = failures.values().all(|&f| f == 0);
    let detail = failures
        .iter()
        .map(|(k, v)| format!("{k} {}/{CASES}", CASES - v))
        .collect::<Vec<_>>()
        .join(", ");
    assert!(verdict(8, pass, &detail), "{detail}");
}

#[test]
fn sweep_contrast_windows_are_the_default_ones() {
    let cfg = sweep_config(0, false);
    assert_eq!(cfg.window(ComponentName::P400).unwrap(), ErpWindow::p400());
    assert_eq!(cfg.window(ComponentName::N500).unwrap(), ErpWindow::n500());
}
