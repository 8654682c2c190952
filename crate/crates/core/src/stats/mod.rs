//! Chi-square test of independence, paired t-test with paired Cohen's d,
//! and the special functions behind their p-values.

mod contingency;
mod hypothesis;
pub mod special;

pub use contingency::{build_contingency, chi_square, ContingencyTable, NOT_PRESSED, PRESSED};
pub use hypothesis::{paired_t, TestResult};
pub use special::{chisq_sf, t_sf};
