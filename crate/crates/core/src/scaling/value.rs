use serde::Serialize;
use std::cmp::Ordering;

/// A growth rate of the form `n^exponent · (log n)^polylog_order`, optionally
/// weakened by an `n^{-ε}` slack for arbitrarily small `ε > 0`.
///
/// Comparison is lexicographic on `(exponent, polylog_order)`: a single
/// positive power of `n` beats any power of `log n`, so `log n` sorts above
/// `Θ(1)` but below `n^{0.0001}`. Exponents are compared with a `1e-12`
/// tolerance so that algebraically equal boundary expressions tie. The slack
/// flag is metadata: it never flips a strict comparison and is excluded from
/// equality.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingValue {
    /// Power of `n`.
    pub exponent: f64,
    /// Power of `log n` carried alongside (`Θ(log n)` is exponent 0, order 1).
    pub polylog_order: i32,
    /// True when the expression carries a `−ε` slack.
    pub epsilon_slack: bool,
}

impl ScalingValue {
    /// Tolerance for exponent comparisons.
    pub const EXPONENT_EPS: f64 = 1e-12;

    /// `Θ(n^e)`.
    pub fn power(exponent: f64) -> Self {
        Self { exponent, polylog_order: 0, epsilon_slack: false }
    }

    /// `Θ(log n)`.
    pub fn log_n() -> Self {
        Self { exponent: 0.0, polylog_order: 1, epsilon_slack: false }
    }

    /// `Θ(1)`.
    pub fn constant() -> Self {
        Self::power(0.0)
    }

    pub fn with_polylog(mut self, order: i32) -> Self {
        self.polylog_order = order;
        self
    }

    pub fn with_slack(mut self) -> Self {
        self.epsilon_slack = true;
        self
    }

    /// Lexicographic order on `(exponent, polylog_order)`, slack ignored.
    pub fn order(&self, other: &Self) -> Ordering {
        if (self.exponent - other.exponent).abs() <= Self::EXPONENT_EPS {
            self.polylog_order.cmp(&other.polylog_order)
        } else if self.exponent < other.exponent {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// The larger of two values. On an exact tie the slack-free value wins,
    /// since `n^e` dominates `n^{e-ε}`.
    pub fn max(a: Self, b: Self) -> Self {
        match a.order(&b) {
            Ordering::Less => b,
            Ordering::Greater => a,
            Ordering::Equal => {
                if a.epsilon_slack && !b.epsilon_slack {
                    b
                } else {
                    a
                }
            }
        }
    }

    /// The smaller of two values. On an exact tie the slack-carrying value
    /// wins, since `n^{e-ε}` is the binding term.
    pub fn min(a: Self, b: Self) -> Self {
        match a.order(&b) {
            Ordering::Less => a,
            Ordering::Greater => b,
            Ordering::Equal => {
                if b.epsilon_slack && !a.epsilon_slack {
                    b
                } else {
                    a
                }
            }
        }
    }

    /// Minimum of a nonempty term list under [`ScalingValue::min`].
    pub fn min_of(values: &[Self]) -> Self {
        let mut it = values.iter();
        let first = *it.next().expect("min_of requires a nonempty slice");
        it.fold(first, |acc, &v| Self::min(acc, v))
    }
}

impl PartialEq for ScalingValue {
    fn eq(&self, other: &Self) -> bool {
        self.order(other) == Ordering::Equal
    }
}

impl PartialOrd for ScalingValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.order(other))
    }
}

impl std::fmt::Display for ScalingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let slack = if self.epsilon_slack { "-eps" } else { "" };
        let near_zero = self.exponent.abs() <= Self::EXPONENT_EPS;
        match (near_zero, self.polylog_order) {
            (true, 0) if !self.epsilon_slack => write!(f, "1"),
            (true, 0) => write!(f, "n^{{-eps}}"),
            (true, 1) => write!(f, "log n{}", if self.epsilon_slack { " * n^{-eps}" } else { "" }),
            (true, p) => write!(f, "(log n)^{p}{}", if self.epsilon_slack { " * n^{-eps}" } else { "" }),
            (false, 0) => write!(f, "n^{{{}{slack}}}", trim(self.exponent)),
            (false, 1) => write!(f, "n^{{{}{slack}}} log n", trim(self.exponent)),
            (false, -1) => write!(f, "n^{{{}{slack}}} / log n", trim(self.exponent)),
            (false, p) => write!(f, "n^{{{}{slack}}} (log n)^{p}", trim(self.exponent)),
        }
    }
}

fn trim(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}
