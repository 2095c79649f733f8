//! The interval result type shared by every method.

use serde::Serialize;

/// Per-interval diagnostic flags and sampler metadata.
///
/// Flags record the pathologies a method can exhibit (zero width, raw
/// bounds outside `[0, 1]`, infinite endpoints) so callers can report them
/// instead of silently normalizing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Interval collapsed to a single point.
    pub zero_width: bool,
    /// Raw bounds left `[0, 1]` for a proportion-valued target.
    pub out_of_unit_range: bool,
    /// Bounds were clamped into `[0, 1]` after construction.
    pub clamped: bool,
    /// At least one endpoint is infinite.
    pub unbounded: bool,
    /// A variance estimate went negative and was clamped to zero.
    pub variance_clamped: bool,
    /// Effective sample size of the importance weights behind this interval.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ess: Option<f64>,
    /// Number of posterior/bootstrap draws used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<u32>,
    /// Draws excluded as degenerate (for example zero F1 denominators).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded_draws: Option<u32>,
}

/// A two-sided interval at a given confidence/credibility level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    /// Nominal level `1 − α`.
    pub level: f64,
    pub method: &'static str,
    pub diagnostics: Diagnostics,
}

impl Interval {
    /// Builds an interval; orders the endpoints and sets the zero-width and
    /// unbounded flags.
    pub fn new(lower: f64, upper: f64, level: f64, method: &'static str) -> Self {
        let (lower, upper) = if lower <= upper { (lower, upper) } else { (upper, lower) };
        let mut diagnostics = Diagnostics::default();
        diagnostics.zero_width = lower == upper;
        diagnostics.unbounded = lower.is_infinite() || upper.is_infinite();
        Self { lower, upper, level, method, diagnostics }
    }

    /// Marks bounds that left `[0, 1]`; for proportion-valued targets.
    pub fn flag_unit_range(mut self) -> Self {
        if self.lower < 0.0 || self.upper > 1.0 {
            self.diagnostics.out_of_unit_range = true;
        }
        self
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Closed-interval containment. Infinite endpoints contain every finite
    /// value on their side.
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// Copy clamped into `[0, 1]`, with the `clamped` flag set when the raw
    /// bounds actually exceeded the unit interval.
    pub fn clamped_to_unit(&self) -> Self {
        let mut out = *self;
        out.lower = self.lower.clamp(0.0, 1.0);
        out.upper = self.upper.clamp(0.0, 1.0);
        if out.lower != self.lower || out.upper != self.upper {
            out.diagnostics.clamped = true;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_zero_width_and_unbounded() {
        let i = Interval::new(1.0, 1.0, 0.95, "clt");
        assert!(i.diagnostics.zero_width);
        let j = Interval::new(0.2, f64::INFINITY, 0.95, "fisher-or");
        assert!(j.diagnostics.unbounded);
        assert!(j.contains(1e12));
    }

    #[test]
    fn clamping_sets_flag_only_when_needed() {
        let raw = Interval::new(-0.1, 0.4, 0.95, "clt").flag_unit_range();
        assert!(raw.diagnostics.out_of_unit_range);
        let clamped = raw.clamped_to_unit();
        assert_eq!(clamped.lower, 0.0);
        assert!(clamped.diagnostics.clamped);

        let fine = Interval::new(0.1, 0.4, 0.95, "wilson").clamped_to_unit();
        assert!(!fine.diagnostics.clamped);
    }

    #[test]
    fn containment_is_closed() {
        let i = Interval::new(0.25, 0.75, 0.9, "clt");
        assert!(i.contains(0.25));
        assert!(i.contains(0.75));
        assert!(!i.contains(0.7500001));
    }
}
