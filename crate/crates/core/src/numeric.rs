//! Small numeric helpers shared by the demand-based analyses.

/// Relative snap width for ratios that should be integral. Release instants
/// are built as multiples of periods, so `t / period` is an integer up to
/// accumulated rounding noise; without snapping, a one-ulp overshoot would
/// flip a ceiling and inflate the demand by a whole job.
const SNAP: f64 = 1e-9;

fn snapped(q: f64) -> Option<f64> {
    let r = q.round();
    if (q - r).abs() <= SNAP * q.abs().max(1.0) {
        Some(r)
    } else {
        None
    }
}

/// Finite and strictly positive; rejects NaN.
pub(crate) fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// `ceil(t / period)` with near-integer ratios snapped to the integer.
pub(crate) fn ceil_ratio(t: f64, period: f64) -> f64 {
    let q = t / period;
    snapped(q).unwrap_or_else(|| q.ceil())
}

/// `floor(t / period)` with near-integer ratios snapped to the integer.
pub(crate) fn floor_ratio(t: f64, period: f64) -> f64 {
    let q = t / period;
    snapped(q).unwrap_or_else(|| q.floor())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_multiples() {
        assert_eq!(ceil_ratio(3.0, 2.0), 2.0);
        assert_eq!(ceil_ratio(4.0, 2.0), 2.0);
        assert_eq!(floor_ratio(3.0, 2.0), 1.0);
        assert_eq!(floor_ratio(4.0, 2.0), 2.0);
    }

    #[test]
    fn snapping_absorbs_rounding_noise() {
        // 3 * 0.3 = 0.8999999999999999 in binary floating point.
        let t = 3.0 * 0.3;
        assert_eq!(ceil_ratio(t, 0.3), 3.0);
        assert_eq!(floor_ratio(t, 0.3), 3.0);
    }

    #[test]
    fn genuine_fractions_are_untouched() {
        assert_eq!(ceil_ratio(5.1, 5.0), 2.0);
        assert_eq!(floor_ratio(5.1, 5.0), 1.0);
        assert_eq!(ceil_ratio(0.1, 5.0), 1.0);
    }
}
