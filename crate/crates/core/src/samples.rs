//! Problems shipped with the crate, used by `acx selftest` and the tests.

pub const GROUND_AC: &str = include_str!("../problems/ground_ac.acx");
pub const RUNNING: &str = include_str!("../problems/running.acx");
pub const INCONSISTENT: &str = include_str!("../problems/inconsistent.acx");
pub const INVALID: &str = include_str!("../problems/invalid.acx");

/// Labels of the final rules of the running example in direct mode.
pub const RUNNING_DIRECT_LABELS: [usize; 7] = [3, 5, 9, 10, 11, 13, 16];
