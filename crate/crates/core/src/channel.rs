//! Random-phase power-law channel model and radio-constant conversions.
//!
//! Every complex coefficient has the far-field form `e^{jθ} / r^{α/2}` with
//! `θ` uniform on `[0, 2π)` and `r` the element distance in meters, so
//! `|h|² = r^{−α}` exactly. Path loss is referenced to 1 m (no extra
//! constant); with the default radio constants this puts a 100 m link at
//! roughly 13 dB SNR for `α = 3.5`. Uplink and downlink draws use
//! independent phases but share distances, so magnitudes are reciprocal.

use crate::topology::{NetworkConfig, Point};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("transmit and receive elements are co-located; the far-field coefficient is singular")]
    ZeroDistance,
}

/// One far-field coefficient at distance `r` meters.
pub fn coefficient<R: Rng + ?Sized>(
    r: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<Complex64, ChannelError> {
    if r <= 0.0 {
        return Err(ChannelError::ZeroDistance);
    }
    let theta = rng.random_range(0.0..TAU);
    let mag = r.powf(-alpha / 2.0);
    Ok(Complex64::from_polar(mag, theta))
}

/// Uplink channel vector from a node to each antenna of one BS.
pub fn uplink_vector<R: Rng + ?Sized>(
    node: Point,
    bs_antennas: &[Point],
    alpha: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>, ChannelError> {
    bs_antennas
        .iter()
        .map(|a| coefficient(node.distance(*a), alpha, rng))
        .collect()
}

/// [`uplink_vector`] into a caller-owned buffer; used on the interference
/// accumulation path where one vector per transmitter would churn the
/// allocator.
pub fn uplink_vector_into<R: Rng + ?Sized>(
    node: Point,
    bs_antennas: &[Point],
    alpha: f64,
    rng: &mut R,
    out: &mut Vec<Complex64>,
) -> Result<(), ChannelError> {
    out.clear();
    for a in bs_antennas {
        out.push(coefficient(node.distance(*a), alpha, rng)?);
    }
    Ok(())
}

/// Downlink channel vector from each antenna of one BS to a node. Distances
/// match the uplink; phases are fresh independent draws.
pub fn downlink_vector<R: Rng + ?Sized>(
    node: Point,
    bs_antennas: &[Point],
    alpha: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>, ChannelError> {
    uplink_vector(node, bs_antennas, alpha, rng)
}

/// Node-to-node coefficient.
pub fn node_to_node<R: Rng + ?Sized>(
    a: Point,
    b: Point,
    alpha: f64,
    rng: &mut R,
) -> Result<Complex64, ChannelError> {
    coefficient(a.distance(b), alpha, rng)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Thermal noise power over the configured bandwidth, noise figure included.
pub fn noise_power_watts(config: &NetworkConfig) -> f64 {
    let dbm = config.noise_density_dbm_hz
        + 10.0 * config.bandwidth_hz.log10()
        + config.noise_figure_db;
    dbm_to_watts(dbm)
}
