use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::hypothesis::TestResult;
use super::special::chisq_sf;
use crate::error::{Error, Result};
use crate::recording::{Condition, TrialLog};

pub const PRESSED: usize = 0;
pub const NOT_PRESSED: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// `counts[row][col]`.
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    /// Table with generic labels; rows must all have the same width.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Self {
        let width = counts.first().map_or(0, Vec::len);
        assert!(counts.iter().all(|r| r.len() == width), "ragged contingency table");
        Self {
            row_labels: (0..counts.len()).map(|i| alloc::format!("row{i}")).collect(),
            col_labels: (0..width).map(|j| alloc::format!("col{j}")).collect(),
            counts,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        let width = self.col_labels.len();
        (0..width).map(|j| self.counts.iter().map(|r| r[j]).sum()).collect()
    }
}

/// Counts pressed / not-pressed trials per condition, rows in the order of
/// `conditions`.
pub fn build_contingency(logs: &[TrialLog], conditions: &[Condition]) -> Result<ContingencyTable> {
    let mut counts = vec![vec![0u64; 2]; conditions.len()];
    for log in logs {
        let row = conditions
            .iter()
            .position(|c| *c == log.condition)
            .ok_or_else(|| Error::UnknownCondition(log.condition.to_string()))?;
        counts[row][if log.pressed { PRESSED } else { NOT_PRESSED }] += 1;
    }
    Ok(ContingencyTable {
        row_labels: conditions.iter().map(|c| c.to_string()).collect(),
        col_labels: vec!["pressed".to_string(), "not_pressed".to_string()],
        counts,
    })
}

/// Pearson chi-square test of independence, without continuity correction.
pub fn chi_square(table: &ContingencyTable) -> Result<TestResult> {
    let rows = table.counts.len();
    let cols = table.col_labels.len();
    if rows < 2 || cols < 2 {
        return Err(Error::ZeroDegreesOfFreedom);
    }
    let n = table.total() as f64;
    let row_totals = table.row_totals();
    let col_totals = table.col_totals();
    let mut statistic = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        for (j, &obs) in row.iter().enumerate() {
            let expected = row_totals[i] as f64 * col_totals[j] as f64 / n;
            if !(expected > 0.0) {
                return Err(Error::ZeroExpectedCount { row: i, col: j });
            }
            let diff = obs as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    let df = ((rows - 1) * (cols - 1)) as u32;
    Ok(TestResult {
        statistic,
        df,
        p_two_tailed: chisq_sf(statistic, df),
        effect_size: None,
    })
}
