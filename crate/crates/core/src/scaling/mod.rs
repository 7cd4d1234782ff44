//! Closed-form scaling laws on the `(α, β, γ, η)` exponent plane.
//!
//! Everything in this module is a pure function of its inputs; all growth
//! rates are carried as [`ScalingValue`]s, i.e. `n^exponent · (log n)^polylog`
//! with an optional `n^{-ε}` slack marker for bounds that hold for every
//! arbitrarily small `ε > 0`.

mod laws;
mod point;
mod value;

pub use laws::{
    cbs_exponent, cbs_protocol_exponent, generalized_exponent, is_infrastructure_limited,
    regime_worst_case_cbs, throughput_exponent_infinite, xki_exponent, ExponentBreakdown,
    GeneralizedThroughput, WorstCaseGroup,
};
pub use point::{Major, RegimeLabel, ScalingPoint};
pub use value::ScalingValue;

use serde::Serialize;

/// The two infrastructure-supported routing protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Infrastructure-supported single-hop: multiple access up to the BS,
    /// wired BS-to-BS hop, broadcast down to the destinations.
    Ish,
    /// Infrastructure-supported multihop: nearest-neighbor relaying between
    /// nodes and BS boundary antennas, with the same wired BS-to-BS hop.
    Imh,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Ish => write!(f, "ISH"),
            Scheme::Imh => write!(f, "IMH"),
        }
    }
}

/// Domain errors for the exponent-plane operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalingError {
    #[error("path-loss exponent alpha must exceed 2, got {0}")]
    AlphaOutOfRange(f64),
    #[error("beta must lie in [0, 1), got {0}")]
    BetaOutOfRange(f64),
    #[error("gamma must lie in [0, 1), got {0}")]
    GammaOutOfRange(f64),
    #[error("beta + gamma must not exceed 1, got {0}")]
    AntennaBudgetExceeded(f64),
    #[error("exponent parameter must be finite, got {0}")]
    NonFinite(f64),
    #[error("eta (backhaul rate exponent) is required for this quantity")]
    MissingEta,
    #[error("xki exponents require positive arguments, got a={0}, b={1}")]
    NonPositiveXkiArgs(f64, f64),
    #[error("the ISH backhaul requirement is defined only in regime B; point is in {0}")]
    IshOutsideRegimeB(RegimeLabel),
}
