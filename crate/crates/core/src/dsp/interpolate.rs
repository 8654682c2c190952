use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::montage::{great_circle, Montage};
use crate::recording::Recording;

pub const IDW_NEIGHBOURS: usize = 6;
pub const IDW_POWER: i32 = 2;
const MIN_GOOD_CHANNELS: usize = 4;

/// Normalised inverse-distance weights of the `IDW_NEIGHBOURS` candidates
/// nearest to `target` by great-circle distance. Returns `(candidate index,
/// weight)` pairs. A candidate at distance zero takes all the weight.
pub fn interpolation_weights(target: [f64; 3], candidates: &[[f64; 3]]) -> Vec<(usize, f64)> {
    let mut by_distance: Vec<(usize, f64)> = candidates
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, great_circle(target, p)))
        .collect();
    by_distance.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    by_distance.truncate(IDW_NEIGHBOURS);

    if let Some(&(i, d)) = by_distance.first() {
        if d == 0.0 {
            return alloc::vec![(i, 1.0)];
        }
    }
    let raw: Vec<(usize, f64)> = by_distance
        .into_iter()
        .map(|(i, d)| (i, 1.0 / crate::math::powf(d, IDW_POWER as f64)))
        .collect();
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    raw.into_iter().map(|(i, w)| (i, w / total)).collect()
}

/// Replaces each bad channel with the inverse-distance-weighted average of
/// its nearest good neighbours. Good channels are copied unchanged.
pub fn interpolate_channels(rec: &Recording, bad: &[&str], montage: &Montage) -> Result<Recording> {
    if bad.is_empty() {
        return Ok(rec.clone());
    }
    let bad_idx: Vec<usize> = bad
        .iter()
        .map(|b| rec.channel_index(b))
        .collect::<Result<_>>()?;
    let good: Vec<usize> = (0..rec.channels.len())
        .filter(|i| !bad_idx.contains(i))
        .collect();
    if good.len() < MIN_GOOD_CHANNELS {
        return Err(Error::TooFewGoodChannels {
            good: good.len(),
            required: MIN_GOOD_CHANNELS,
        });
    }
    let position = |i: usize| {
        montage
            .get(&rec.channels[i])
            .ok_or_else(|| Error::UnknownChannel(rec.channels[i].to_string()))
    };
    let good_pos: Vec<[f64; 3]> = good.iter().map(|&i| position(i)).collect::<Result<_>>()?;

    let mut samples = rec.samples.clone();
    for &b in &bad_idx {
        let weights = interpolation_weights(position(b)?, &good_pos);
        let row = samples.row_mut(b);
        row.fill(0.0);
        for (k, w) in weights {
            for (o, v) in row.iter_mut().zip(rec.samples.row(good[k])) {
                *o += w * v;
            }
        }
    }
    Ok(rec.with_samples(samples))
}
