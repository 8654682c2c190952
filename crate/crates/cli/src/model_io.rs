//! `ROCKETv1` model files.
//!
//! ```text
//! ROCKETv1
//! task <name>
//! electrode <name>
//! seed <u64>
//! n_train <n>
//! n_positive <n>
//! n_negative <n>
//! series_len <n>
//! input_scale <f64>
//! alpha <f64>
//! alpha_on_boundary <0|1>
//! intercept <f64>
//! kernels <n>
//! <len> <dilation> <padding> <bias> <w_1> ... <w_len>     (n lines)
//! features <2n>
//! <mean> <scale> <weight>                                  (2n lines)
//! end
//! ```
//!
//! Numbers use shortest round-trip decimal formatting, so a loaded model
//! predicts bit-identically.

use std::fmt::Write as _;
use std::path::Path;

use hazard_eeg_core::tsc::{Kernel, KernelBank, RocketModel, TrainingMeta};

use crate::error::{Error, Result};
use crate::io::{read_text, write_atomic};

pub const MAGIC: &str = "ROCKETv1";

pub fn format_model(m: &RocketModel) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "task {}", m.meta.task).unwrap();
    writeln!(out, "electrode {}", m.meta.electrode).unwrap();
    writeln!(out, "seed {}", m.meta.seed).unwrap();
    writeln!(out, "n_train {}", m.meta.n_train).unwrap();
    writeln!(out, "n_positive {}", m.meta.n_positive).unwrap();
    writeln!(out, "n_negative {}", m.meta.n_negative).unwrap();
    writeln!(out, "series_len {}", m.bank.series_len).unwrap();
    writeln!(out, "input_scale {}", m.input_scale).unwrap();
    writeln!(out, "alpha {}", m.alpha).unwrap();
    writeln!(out, "alpha_on_boundary {}", u8::from(m.alpha_on_boundary)).unwrap();
    writeln!(out, "intercept {}", m.intercept).unwrap();
    writeln!(out, "kernels {}", m.bank.kernels.len()).unwrap();
    for k in &m.bank.kernels {
        write!(out, "{} {} {} {}", k.weights.len(), k.dilation, k.padding, k.bias).unwrap();
        for w in &k.weights {
            write!(out, " {w}").unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "features {}", m.weights.len()).unwrap();
    for ((mean, scale), w) in m.feature_means.iter().zip(&m.feature_scales).zip(&m.weights) {
        writeln!(out, "{mean} {scale} {w}").unwrap();
    }
    out.push_str("end\n");
    out
}

pub fn save_model(model: &RocketModel, path: &Path) -> Result<()> {
    write_atomic(path, format_model(model).as_bytes())
}

struct Reader<'a> {
    path: &'a Path,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Reader<'a> {
    fn corrupt(&self, message: impl Into<String>) -> Error {
        Error::CorruptModel { path: self.path.to_path_buf(), message: message.into() }
    }

    fn line(&mut self) -> Result<(usize, &'a str)> {
        match self.lines.next() {
            Some((i, l)) => Ok((i + 1, l)),
            None => Err(self.corrupt("file ends early")),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let (no, l) = self.line()?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v),
            _ => Err(self.corrupt(format!("line {no}: expected `{key}`"))),
        }
    }

    fn number<T: std::str::FromStr>(&self, s: &str, what: &str) -> Result<T> {
        s.trim().parse().map_err(|_| self.corrupt(format!("bad {what} `{s}`")))
    }
}

pub fn parse_model(path: &Path, text: &str) -> Result<RocketModel> {
    let mut r = Reader { path, lines: text.lines().enumerate() };
    let (_, magic) = r.lines.next().map(|(i, l)| (i, l)).ok_or_else(|| Error::CorruptModel { path: path.to_path_buf(), message: "empty file".into() })?;
    if magic != MAGIC {
        return Err(Error::VersionMismatch { path: path.to_path_buf(), found: magic.chars().take(32).collect() });
    }
    let task = r.keyed("task")?.to_string();
    let electrode = r.keyed("electrode")?.to_string();
    let seed: u64 = { let v = r.keyed("seed")?; r.number(v, "seed")? };
    let n_train: usize = { let v = r.keyed("n_train")?; r.number(v, "n_train")? };
    let n_positive: usize = { let v = r.keyed("n_positive")?; r.number(v, "n_positive")? };
    let n_negative: usize = { let v = r.keyed("n_negative")?; r.number(v, "n_negative")? };
    let series_len: usize = { let v = r.keyed("series_len")?; r.number(v, "series_len")? };
    let input_scale: f64 = { let v = r.keyed("input_scale")?; r.number(v, "input_scale")? };
    let alpha: f64 = { let v = r.keyed("alpha")?; r.number(v, "alpha")? };
    let alpha_on_boundary = match r.keyed("alpha_on_boundary")? {
        "0" => false,
        "1" => true,
        other => return Err(r.corrupt(format!("bad alpha_on_boundary `{other}`"))),
    };
    let intercept: f64 = { let v = r.keyed("intercept")?; r.number(v, "intercept")? };
    let n_kernels: usize = { let v = r.keyed("kernels")?; r.number(v, "kernel count")? };
    let mut kernels = Vec::with_capacity(n_kernels);
    for _ in 0..n_kernels {
        let (no, l) = r.line()?;
        let parts: Vec<&str> = l.split(' ').collect();
        if parts.len() < 4 {
            return Err(r.corrupt(format!("line {no}: short kernel line")));
        }
        let len: usize = r.number(parts[0], "kernel length")?;
        if parts.len() != 4 + len {
            return Err(r.corrupt(format!("line {no}: kernel has {} weights, expected {len}", parts.len() - 4)));
        }
        let weights = parts[4..].iter().map(|w| r.number::<f64>(w, "weight")).collect::<Result<Vec<_>>>()?;
        kernels.push(Kernel {
            weights,
            dilation: r.number(parts[1], "dilation")?,
            padding: r.number(parts[2], "padding")?,
            bias: r.number(parts[3], "bias")?,
        });
    }
    let n_features: usize = { let v = r.keyed("features")?; r.number(v, "feature count")? };
    if n_features != 2 * n_kernels {
        return Err(r.corrupt(format!("{n_features} features for {n_kernels} kernels")));
    }
    let (mut means, mut scales, mut weights) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n_features {
        let (no, l) = r.line()?;
        let parts: Vec<&str> = l.split(' ').collect();
        if parts.len() != 3 {
            return Err(r.corrupt(format!("line {no}: expected mean, scale and weight")));
        }
        means.push(r.number::<f64>(parts[0], "mean")?);
        let scale: f64 = r.number(parts[1], "scale")?;
        if !(scale > 0.0) {
            return Err(r.corrupt(format!("line {no}: non-positive scale")));
        }
        scales.push(scale);
        weights.push(r.number::<f64>(parts[2], "weight")?);
    }
    let (_, end) = r.line()?;
    if end != "end" {
        return Err(r.corrupt("missing `end`"));
    }
    Ok(RocketModel {
        bank: KernelBank { seed, series_len, kernels },
        input_scale,
        feature_means: means,
        feature_scales: scales,
        weights,
        intercept,
        alpha,
        alpha_on_boundary,
        meta: TrainingMeta { n_train, n_positive, n_negative, seed, electrode, task },
    })
}

pub fn load_model(path: &Path) -> Result<RocketModel> {
    let text = read_text(path)?;
    parse_model(path, &text)
}
