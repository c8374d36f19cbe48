//! Exact arithmetic helpers shared by the count-based indicators.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Exact rational number used for ranks, percentile indexes and shares.
pub type Rational = Ratio<i64>;

/// `count / total * 100`, or zero for an empty denominator.
pub fn percent(count: usize, total: usize) -> Rational {
    if total == 0 {
        return Rational::zero();
    }
    Rational::new(count as i64 * 100, total as i64)
}

pub fn to_f64(value: Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Rounds half away from zero to `places` decimals and renders the result
/// with exactly that many decimals.
pub fn format_half_up(value: Rational, places: u32) -> String {
    let scale = 10i64.pow(places);
    let scaled = value * Rational::from_integer(scale);
    let negative = scaled < Rational::zero();
    let abs = if negative { -scaled } else { scaled };
    let half = Rational::new(1, 2);
    let units = (abs + half).floor().to_integer();
    let int = units / scale;
    let frac = units % scale;
    let sign = if negative && units != 0 { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = places as usize)
    }
}
