use std::fmt;

use serde::Serialize;

/// A hypothesis of the smooth-point method. Analysis failures and report
/// warnings each name exactly one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// The critical set is finite.
    FiniteCriticalSet,
    /// Exactly one critical point in the positive orthant.
    PositivePointUniqueness,
    /// The contributing set is certified to be the positive point alone.
    ContributingSetCertified,
    /// The contributing point is a smooth point of the singular variety.
    SmoothPoint,
    /// `c_d J_d(c) != 0`.
    NonzeroLastPartial,
    /// `c_d` is a simple zero of `x_d -> J(c_1, ..., c_{d-1}, x_d)`.
    SimpleZeroInLast,
    /// The Hessian determinant `h(J, c)` is nonzero.
    NonzeroHessian,
    /// `J(0) != 0`, so the power series exists.
    SeriesDefinedAtOrigin,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::FiniteCriticalSet => "finite critical set",
            Hypothesis::PositivePointUniqueness => "positive critical point uniqueness",
            Hypothesis::ContributingSetCertified => "certified single contributing point",
            Hypothesis::SmoothPoint => "smooth contributing point",
            Hypothesis::NonzeroLastPartial => "c_d J_d(c) != 0",
            Hypothesis::SimpleZeroInLast => "c_d simple zero in the last coordinate",
            Hypothesis::NonzeroHessian => "h(J,c) != 0",
            Hypothesis::SeriesDefinedAtOrigin => "J(0) != 0",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
