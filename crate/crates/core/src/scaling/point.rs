use super::ScalingError;
use serde::Serialize;

/// An operating point on the exponent plane: `m = n^β` base stations with
/// `l = n^γ` antennas each, path loss `α`, and optionally a backhaul link
/// rate `R_BS = n^η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: Option<f64>,
}

impl ScalingPoint {
    /// Validated constructor without a backhaul exponent.
    ///
    /// Requires `α > 2`, `β, γ ∈ [0, 1)` and `β + γ ≤ 1` (the total antenna
    /// count scales at most linearly with `n`).
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, ScalingError> {
        for v in [alpha, beta, gamma] {
            if !v.is_finite() {
                return Err(ScalingError::NonFinite(v));
            }
        }
        if alpha <= 2.0 {
            return Err(ScalingError::AlphaOutOfRange(alpha));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(ScalingError::BetaOutOfRange(beta));
        }
        if !(0.0..1.0).contains(&gamma) {
            return Err(ScalingError::GammaOutOfRange(gamma));
        }
        if beta + gamma > 1.0 {
            return Err(ScalingError::AntennaBudgetExceeded(beta + gamma));
        }
        Ok(Self { alpha, beta, gamma, eta: None })
    }

    /// Validated constructor with a backhaul exponent `η ∈ (−∞, ∞)`.
    pub fn with_eta(alpha: f64, beta: f64, gamma: f64, eta: f64) -> Result<Self, ScalingError> {
        if !eta.is_finite() {
            return Err(ScalingError::NonFinite(eta));
        }
        let mut p = Self::new(alpha, beta, gamma)?;
        p.eta = Some(eta);
        Ok(p)
    }

    pub fn eta(&self) -> Result<f64, ScalingError> {
        self.eta.ok_or(ScalingError::MissingEta)
    }

    /// Classify the operating regime.
    ///
    /// Regime A is `β + 2γ < 1`, regime B is `β + 2γ ≥ 1`. Within A the
    /// split is `γ ≤ β` (A-1) versus `γ > β` (A-2); within B it is `β ≥ 1/2`
    /// (B-1), `β < 1/3` (B-4), and for `1/3 ≤ β < 1/2` the split `γ ≤ β`
    /// (B-2) versus `γ > β` (B-3).
    pub fn regime(&self) -> RegimeLabel {
        let (b, g) = (self.beta, self.gamma);
        if b + 2.0 * g < 1.0 {
            if g <= b {
                RegimeLabel::A1
            } else {
                RegimeLabel::A2
            }
        } else if b >= 0.5 {
            RegimeLabel::B1
        } else if b < 1.0 / 3.0 {
            RegimeLabel::B4
        } else if g <= b {
            RegimeLabel::B2
        } else {
            RegimeLabel::B3
        }
    }
}

/// Major regime group on the `(β, γ)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Major {
    A,
    B,
}

/// One of the six operating sub-regimes. A admits only minors 1–2; B admits
/// 1–4, which the enum encodes statically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeLabel {
    A1,
    A2,
    B1,
    B2,
    B3,
    B4,
}

impl RegimeLabel {
    pub fn major(&self) -> Major {
        match self {
            RegimeLabel::A1 | RegimeLabel::A2 => Major::A,
            _ => Major::B,
        }
    }

    pub fn minor(&self) -> u8 {
        match self {
            RegimeLabel::A1 | RegimeLabel::B1 => 1,
            RegimeLabel::A2 | RegimeLabel::B2 => 2,
            RegimeLabel::B3 => 3,
            RegimeLabel::B4 => 4,
        }
    }

    pub const ALL: [RegimeLabel; 6] = [
        RegimeLabel::A1,
        RegimeLabel::A2,
        RegimeLabel::B1,
        RegimeLabel::B2,
        RegimeLabel::B3,
        RegimeLabel::B4,
    ];
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let major = match self.major() {
            Major::A => 'A',
            Major::B => 'B',
        };
        write!(f, "{}-{}", major, self.minor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(beta: f64, gamma: f64) -> ScalingPoint {
        ScalingPoint::new(3.0, beta, gamma).unwrap()
    }

    #[test]
    fn classify_worked_points() {
        assert_eq!(point(0.5, 0.25).regime(), RegimeLabel::B1);
        assert_eq!(point(0.2, 0.1).regime(), RegimeLabel::A1);
        assert_eq!(point(0.2, 0.45).regime(), RegimeLabel::B4);
        assert_eq!(point(0.4, 0.45).regime(), RegimeLabel::B3);
    }

    #[test]
    fn classify_boundaries() {
        // The A/B boundary belongs to B; gamma = beta ties go to the "<=" side.
        assert_eq!(point(0.5, 0.25).regime().major(), Major::B);
        assert_eq!(point(0.2, 0.2).regime(), RegimeLabel::A1);
        assert_eq!(point(0.4, 0.4).regime(), RegimeLabel::B2);
        assert_eq!(point(1.0 / 3.0, 0.4).regime(), RegimeLabel::B3);
        assert_eq!(point(0.33, 0.4).regime(), RegimeLabel::B4);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(matches!(
            ScalingPoint::new(2.0, 0.3, 0.3),
            Err(ScalingError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            ScalingPoint::new(3.0, 1.2, 0.3),
            Err(ScalingError::BetaOutOfRange(_))
        ));
        assert!(matches!(
            ScalingPoint::new(3.0, 0.3, -0.1),
            Err(ScalingError::GammaOutOfRange(_))
        ));
        assert!(matches!(
            ScalingPoint::new(3.0, 0.7, 0.4),
            Err(ScalingError::AntennaBudgetExceeded(_))
        ));
        assert!(matches!(
            ScalingPoint::with_eta(3.0, 0.3, 0.3, f64::NAN),
            Err(ScalingError::NonFinite(_))
        ));
    }

    #[test]
    fn display_labels() {
        assert_eq!(RegimeLabel::A2.to_string(), "A-2");
        assert_eq!(RegimeLabel::B4.to_string(), "B-4");
    }
}
