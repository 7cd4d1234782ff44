//! Capacity laboratory for large-scale hybrid wireless networks whose base
//! stations are interconnected by rate-limited (cost-effective) backhaul
//! links.
//!
//! The crate has two halves that check each other:
//!
//! * [`scaling`] — closed-form scaling laws on the exponent plane. A network
//!   with `n` nodes, `m = n^β` multi-antenna base stations, `l = n^γ`
//!   antennas per BS and per-link backhaul rate `R_BS = n^η` is summarised by
//!   the point `(α, β, γ, η)`. The module classifies operating regimes,
//!   evaluates throughput exponents for the two infrastructure-supported
//!   routing protocols (single-hop "ISH" and multihop "IMH"), and computes
//!   the minimum backhaul rate that preserves the infinite-backhaul scaling.
//! * [`topology`], [`channel`], [`protocols`], [`montecarlo`] — a
//!   finite-instance Monte-Carlo simulator of the same two protocols on
//!   realised node placements and random-phase power-law channels, used to
//!   validate the closed forms at desk scale: throughput-vs-backhaul sweeps,
//!   knee (saturation) detection, and empirical scaling-exponent fits.

pub mod channel;
pub mod linalg;
pub mod montecarlo;
pub mod protocols;
pub mod scaling;
pub mod topology;

pub use protocols::{Bottleneck, ThroughputReport};
pub use scaling::{RegimeLabel, ScalingPoint, ScalingValue, Scheme};
pub use topology::{NetworkConfig, Topology, TrafficMatrix};
