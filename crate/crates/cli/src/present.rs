//! Rounding used in every emitted table.
//!
//! Percents, PRI and ranks get one decimal, entropies, centrality and
//! density two, the share of the maximum entropy none. Exact values are
//! rounded half away from zero.

use scientrix_core::numeric::format_half_up;
use scientrix_core::Rational;

pub fn pct(value: Rational) -> String {
    format_half_up(value, 1)
}

pub fn pri(value: Rational) -> String {
    format_half_up(value, 1)
}

pub fn rank(value: Rational) -> String {
    format_half_up(value, 1)
}

pub fn entropy(value: f64) -> String {
    fixed(value, 2)
}

pub fn strength(value: f64) -> String {
    fixed(value, 2)
}

pub fn share_of_max(value: f64) -> String {
    fixed(value, 0)
}

/// Half-away-from-zero rounding of a float.
///
/// A relative nudge of 1e-12 absorbs binary representation error, so that
/// 2.675 renders as 2.68 like its decimal spelling suggests.
pub fn fixed(value: f64, places: u32) -> String {
    if !value.is_finite() {
        return String::new();
    }
    let scale = 10f64.powi(places as i32);
    let units = (value * scale * (1.0 + 1e-12)).round();
    if units == 0.0 {
        return format!("{:.*}", places as usize, 0.0);
    }
    format!("{:.*}", places as usize, units / scale)
}
