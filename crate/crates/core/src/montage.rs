//! Electrode positions on the unit sphere.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{atan2, cos, sin, sqrt};

/// Channels every montage must provide: the six analysis electrodes and the
/// mastoid reference pair.
pub const REQUIRED_CHANNELS: [&str; 8] = ["FPz", "AF4", "F4", "AF3", "F3", "F1", "M1", "M2"];

const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MontageEntry {
    pub name: String,
    pub position: [f64; 3],
}

/// Channel name to unit-sphere coordinate table. `x` points right, `y`
/// towards the nasion and `z` towards the vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Montage {
    entries: Vec<MontageEntry>,
}

impl Montage {
    pub fn new(entries: Vec<MontageEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            let [x, y, z] = e.position;
            let norm = sqrt(x * x + y * y + z * z);
            if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::InvalidMontage(alloc::format!(
                    "`{}` has norm {norm}, expected 1",
                    e.name
                )));
            }
            if entries[..i].iter().any(|o| o.name.eq_ignore_ascii_case(&e.name)) {
                return Err(Error::DuplicateChannel(e.name.clone()));
            }
        }
        let montage = Self { entries };
        for name in REQUIRED_CHANNELS {
            if montage.get(name).is_none() {
                return Err(Error::InvalidMontage(alloc::format!(
                    "required channel `{name}` is missing"
                )));
            }
        }
        Ok(montage)
    }

    /// Case-insensitive lookup.
    pub fn get(&self, name: &str) -> Option<[f64; 3]> {
        self.entries
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .map(|e| e.position)
    }

    pub fn entries(&self) -> &[MontageEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Great-circle distance in radians between two named channels.
    pub fn angular_distance(&self, a: &str, b: &str) -> Result<f64> {
        let pa = self.get(a).ok_or_else(|| Error::UnknownChannel(a.to_string()))?;
        let pb = self.get(b).ok_or_else(|| Error::UnknownChannel(b.to_string()))?;
        Ok(great_circle(pa, pb))
    }
}

pub fn great_circle(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    atan2(sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]), d)
}

// Idealised 10-10 layout as an azimuthal-equidistant grid centred on Cz.
// Columns step 22.5 degrees (T7/T8 on the equator), rows step 18 degrees
// (FPz and Oz at 72 degrees from the vertex). Odd numbers are left.
const COL_DEG: f64 = 22.5;
const ROW_DEG: f64 = 18.0;

// (name, column, row) on the grid; negative column = left hemisphere.
const GRID_SITES: &[(&str, f64, f64)] = &[
    ("FP1", -1.0, 4.0),
    ("FPz", 0.0, 4.0),
    ("FP2", 1.0, 4.0),
    ("AF3", -2.0, 3.0),
    ("AF4", 2.0, 3.0),
    ("F7", -4.0, 2.0),
    ("F5", -3.0, 2.0),
    ("F3", -2.0, 2.0),
    ("F1", -1.0, 2.0),
    ("Fz", 0.0, 2.0),
    ("F2", 1.0, 2.0),
    ("F4", 2.0, 2.0),
    ("F6", 3.0, 2.0),
    ("F8", 4.0, 2.0),
    ("FT7", -4.0, 1.0),
    ("FC5", -3.0, 1.0),
    ("FC3", -2.0, 1.0),
    ("FC1", -1.0, 1.0),
    ("FCz", 0.0, 1.0),
    ("FC2", 1.0, 1.0),
    ("FC4", 2.0, 1.0),
    ("FC6", 3.0, 1.0),
    ("FT8", 4.0, 1.0),
    ("T7", -4.0, 0.0),
    ("C5", -3.0, 0.0),
    ("C3", -2.0, 0.0),
    ("C1", -1.0, 0.0),
    ("Cz", 0.0, 0.0),
    ("C2", 1.0, 0.0),
    ("C4", 2.0, 0.0),
    ("C6", 3.0, 0.0),
    ("T8", 4.0, 0.0),
    ("TP7", -4.0, -1.0),
    ("CP5", -3.0, -1.0),
    ("CP3", -2.0, -1.0),
    ("CP1", -1.0, -1.0),
    ("CPz", 0.0, -1.0),
    ("CP2", 1.0, -1.0),
    ("CP4", 2.0, -1.0),
    ("CP6", 3.0, -1.0),
    ("TP8", 4.0, -1.0),
    ("P7", -4.0, -2.0),
    ("P5", -3.0, -2.0),
    ("P3", -2.0, -2.0),
    ("P1", -1.0, -2.0),
    ("Pz", 0.0, -2.0),
    ("P2", 1.0, -2.0),
    ("P4", 2.0, -2.0),
    ("P6", 3.0, -2.0),
    ("P8", 4.0, -2.0),
    ("PO7", -4.0, -3.0),
    ("PO5", -3.0, -3.0),
    ("PO3", -2.0, -3.0),
    ("POz", 0.0, -3.0),
    ("PO4", 2.0, -3.0),
    ("PO6", 3.0, -3.0),
    ("PO8", 4.0, -3.0),
    ("O1", -1.0, -4.0),
    ("Oz", 0.0, -4.0),
    ("O2", 1.0, -4.0),
];

// Off-grid sites given directly in flat-projection degrees (x, y).
const EXTRA_SITES: &[(&str, f64, f64)] = &[
    ("M1", -100.0, -45.0),
    ("M2", 100.0, -45.0),
    ("CB1", -45.0, -90.0),
    ("CB2", 45.0, -90.0),
];

fn project(u_deg: f64, v_deg: f64) -> [f64; 3] {
    let r_deg = sqrt(u_deg * u_deg + v_deg * v_deg);
    if r_deg == 0.0 {
        return [0.0, 0.0, 1.0];
    }
    let theta = r_deg.to_radians();
    let s = sin(theta);
    [s * u_deg / r_deg, s * v_deg / r_deg, cos(theta)]
}

/// The bundled 64-site 10-10 cap layout plus the M1/M2 mastoids.
pub fn builtin_montage() -> Montage {
    let entries = GRID_SITES
        .iter()
        .map(|&(name, col, row)| (name, col * COL_DEG, row * ROW_DEG))
        .chain(EXTRA_SITES.iter().copied())
        .map(|(name, u, v)| MontageEntry {
            name: name.to_string(),
            position: project(u, v),
        })
        .collect();
    Montage::new(entries).expect("builtin montage is valid")
}
