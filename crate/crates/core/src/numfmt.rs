//! Shortest round-trip decimal output for CSV and text reports.

use std::fmt;

/// Plain notation for magnitudes in `[1e-4, 1e16)`, exponent notation
/// otherwise. Both are the shortest digits that parse back to the same `f64`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.0.abs();
        if self.0 == 0.0 || !self.0.is_finite() || (1e-4..1e16).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}
