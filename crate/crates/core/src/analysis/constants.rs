//! Smallness constants.
//!
//! Both thresholds have the form `(a - b) / 3` with `a` and `b` nearly equal.
//! Since `a^2 - b^2` is an exact closed form, they are evaluated as
//! `(a^2 - b^2) / (3 (a + b))`, which avoids the cancellation.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// `64 - 4 pi^2`: oscillation energy below which a curve with winding number
/// one cannot have a double point.
pub const EMBEDDED_THRESHOLD: f64 = 64.0 - 4.0 * PI * PI;

/// The smallness constant `K* = (2 pi + 12 pi^2 - 4 pi sqrt(3 pi) sqrt(1 + 3 pi)) / 3`.
pub fn kstar() -> f64 {
    let a = 2.0 * PI + 12.0 * PI * PI;
    let b = 4.0 * PI * (3.0 * PI * (1.0 + 3.0 * PI)).sqrt();
    4.0 * PI * PI / (3.0 * (a + b))
}

/// Oscillation-energy threshold for winding number `omega`:
/// `(4 pi + 24 pi^2 omega^2 - 8 pi sqrt(3 pi) sqrt(omega^2 + 3 pi omega^4)) / 3`.
/// Equals `2 K*` at `omega = +-1`.
pub fn general_smallness_threshold(omega: i64) -> Result<f64> {
    if omega == 0 {
        return invalid("smallness threshold is undefined for winding number 0");
    }
    let w2 = (omega as f64).powi(2);
    let a = 4.0 * PI + 24.0 * PI * PI * w2;
    let b = 8.0 * PI * (3.0 * PI * (w2 + 3.0 * PI * w2 * w2)).sqrt();
    Ok(16.0 * PI * PI / (3.0 * (a + b)))
}

/// `exp(K* / 8 pi^2)`, the admissible bound on the isoperimetric ratio.
pub fn isoperimetric_threshold() -> f64 {
    (kstar() / (8.0 * PI * PI)).exp()
}
