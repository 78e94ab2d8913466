//! Test outcomes.

/// Absolute tolerance applied on the accept boundary of every test:
/// a value within `DEFAULT_TOLERANCE` of the bound counts as accepted,
/// so exact boundary cases (value == bound) accept.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Outcome of one schedulability test.
///
/// `accepted` holds iff `value <= bound` within the accept tolerance,
/// except for not-applicable results, which carry `accepted = false`,
/// NaN value/bound, and an explanatory note.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    /// Identifier of the test that produced this verdict.
    pub test_name: &'static str,
    /// Whether the task (or set) passed the test.
    pub accepted: bool,
    /// The tested left-hand-side quantity.
    pub value: f64,
    /// The computed right-hand-side threshold.
    pub bound: f64,
    /// Optional detail, e.g. which disjunct of an OR-test fired.
    pub note: Option<String>,
}

impl Verdict {
    /// Builds a verdict by comparing `value` against `bound` under the
    /// default accept tolerance.
    pub fn decide(test_name: &'static str, value: f64, bound: f64) -> Self {
        Verdict {
            test_name,
            accepted: accepts(value, bound),
            value,
            bound,
            note: None,
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A rejection that signals the test did not apply to the input.
    pub fn not_applicable(test_name: &'static str, reason: impl Into<String>) -> Self {
        Verdict {
            test_name,
            accepted: false,
            value: f64::NAN,
            bound: f64::NAN,
            note: Some(reason.into()),
        }
    }

    /// True when the verdict is a real accept/reject rather than
    /// a not-applicable marker.
    pub fn is_applicable(&self) -> bool {
        !self.value.is_nan() || !self.bound.is_nan()
    }

    /// Re-evaluate acceptance under a caller-chosen boundary tolerance.
    /// Not-applicable verdicts stay rejected.
    pub fn accepted_with(&self, tolerance: f64) -> bool {
        self.is_applicable() && self.value <= self.bound + tolerance
    }
}

/// The shared accept-boundary comparison: `value <= bound` with equality
/// counting as accept.
pub(crate) fn accepts(value: f64, bound: f64) -> bool {
    value <= bound + DEFAULT_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_equality_accepts() {
        assert!(accepts(1.0, 1.0));
        assert!(accepts(1.0 + 0.5e-12, 1.0));
        assert!(!accepts(1.0 + 1e-9, 1.0));
    }

    #[test]
    fn not_applicable_rejects_under_any_tolerance() {
        let v = Verdict::not_applicable("t", "wrong model");
        assert!(!v.accepted);
        assert!(!v.is_applicable());
        assert!(!v.accepted_with(1e9));
    }
}
