//! Angle helpers shared by the kinematic and planning code.

use std::f64::consts::{PI, TAU};

/// Wraps an angle into (−π, π].
pub fn normalize(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// Shortest signed difference `to − from`, in (−π, π].
pub fn diff(to: f64, from: f64) -> f64 {
    normalize(to - from)
}

/// Returns the representative of `angle` (mod 2π) closest to `reference`.
pub fn unwrap_near(angle: f64, reference: f64) -> f64 {
    reference + diff(angle, reference)
}
