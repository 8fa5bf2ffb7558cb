//! Fixed-precision number formatting shared by every emitted file.

/// Number of significant digits kept in reports and CSV output.
pub const SIGNIFICANT_DIGITS: usize = 6;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
///
/// Non-finite values pass through unchanged.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let rounded: f64 = s.parse().expect("scientific notation round-trips");
    // normalise -0
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits in the shortest
/// plain form (`0.182003`, `2001.7`, `1e-7`).
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{}", round_sig(x))
}
