use alloc::vec::Vec;

use crate::error::Result;
use crate::recording::Recording;

/// Subtracts the per-sample mean of the reference channels from every
/// channel, the references included.
pub fn rereference(rec: &Recording, refs: &[&str]) -> Result<Recording> {
    let idx: Vec<usize> = refs
        .iter()
        .map(|r| rec.channel_index(r))
        .collect::<Result<_>>()?;
    let n = rec.n_samples();
    let mut reference = alloc::vec![0.0; n];
    if !idx.is_empty() {
        for &i in &idx {
            for (acc, v) in reference.iter_mut().zip(rec.samples.row(i)) {
                *acc += v;
            }
        }
        let k = idx.len() as f64;
        for v in &mut reference {
            *v /= k;
        }
    }
    let mut samples = rec.samples.clone();
    for c in 0..samples.rows() {
        for (v, r) in samples.row_mut(c).iter_mut().zip(&reference) {
            *v -= r;
        }
    }
    Ok(rec.with_samples(samples))
}
