//! Achievable rates of the two infrastructure-supported protocols on a
//! realized topology, coupled to rate-limited backhaul.
//!
//! ISH access is a single-hop multiple access channel per cell: all in-cell
//! sources transmit at power `P` simultaneously, every out-of-cell
//! transmitter is treated as noise, and the BS decodes with MMSE-SIC. The
//! per-cell sum rate is the Gaussian vector MAC capacity
//! `log2 det(I + P K⁻¹ H H†)`, which equals the sum of the per-stream
//! MMSE-SIC rates for any cancelling order. ISH exit is dirty-paper-coded
//! broadcast evaluated through its dual multiple-access expression with the
//! BS budget `nP/m` split uniformly over the served destinations.
//!
//! IMH moves packets by nearest-neighbor relaying through routing cells of
//! area `2 ln n` (in spacing units) under a 9-fold spatial reuse;
//! `min{l, ⌊√(n/m)⌋}` paths run concurrently per cell.
//!
//! End to end, every flow receives one uniform rate `r`, the largest value
//! that simultaneously fits each cell's access and exit capacity and each
//! directed BS-pair backhaul link of rate `r_bs`; the report records which
//! constraint binds. The network throughput is the better protocol's.

use crate::channel::{self, ChannelError};
use crate::linalg::{HermitianMatrix, LinalgError};
use crate::scaling::Scheme;
use crate::topology::{self, ConfigError, NetworkConfig, Topology, TrafficMatrix};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Numerical(#[from] LinalgError),
}

/// Which constraint pinned the per-flow rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bottleneck {
    WirelessUplink,
    WirelessDownlink,
    Backhaul,
    WirelessHop,
}

impl std::fmt::Display for Bottleneck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Bottleneck::WirelessUplink => "wireless-uplink",
            Bottleneck::WirelessDownlink => "wireless-downlink",
            Bottleneck::Backhaul => "backhaul",
            Bottleneck::WirelessHop => "wireless-hop",
        };
        f.write_str(s)
    }
}

/// Per-cell wireless capacities in b/s/Hz.
#[derive(Debug, Clone, Serialize)]
pub struct CellRates {
    pub uplink: Vec<f64>,
    pub downlink: Vec<f64>,
    pub imh_access: Vec<f64>,
    pub imh_exit: Vec<f64>,
}

/// Throughput of one realized instance.
#[derive(Debug, Clone, Serialize)]
pub struct ThroughputReport {
    pub t_ish: f64,
    pub t_imh: f64,
    /// `max(t_ish, t_imh)`.
    pub t_n: f64,
    /// Protocol achieving `t_n`.
    pub scheme: Scheme,
    /// Binding constraint of the winning protocol.
    pub bottleneck: Bottleneck,
    /// Uniform per-flow rate of the winning protocol.
    pub per_flow_rate: f64,
    pub traffic: TrafficMatrix,
}

/// Sum rate of a Gaussian vector multiple-access channel:
/// `log2 det(K + Σ pᵢ hᵢ hᵢ†) − log2 det(K)` for noise-plus-interference
/// covariance `K`.
pub fn vector_mac_sum_rate(
    channels: &[Vec<Complex64>],
    powers: &[f64],
    noise_cov: &HermitianMatrix,
) -> Result<f64, LinalgError> {
    debug_assert_eq!(channels.len(), powers.len());
    if channels.is_empty() {
        return Ok(0.0);
    }
    let base = noise_cov.cholesky()?.log2_det();
    let mut full = noise_cov.clone();
    for (h, &p) in channels.iter().zip(powers) {
        full.add_rank_one(h, p);
    }
    Ok((full.cholesky()?.log2_det() - base).max(0.0))
}

/// Per-stream MMSE-SIC rates in the cancelling order given by the slice:
/// stream `i` sees streams `i+1..` plus `noise_cov` as noise, earlier
/// streams already cancelled. The rates sum to [`vector_mac_sum_rate`].
pub fn sic_stream_rates(
    channels: &[Vec<Complex64>],
    powers: &[f64],
    noise_cov: &HermitianMatrix,
) -> Result<Vec<f64>, LinalgError> {
    debug_assert_eq!(channels.len(), powers.len());
    let mut rates = vec![0.0; channels.len()];
    let mut cov = noise_cov.clone();
    for i in (0..channels.len()).rev() {
        let chol = cov.cholesky()?;
        let sinr = powers[i] * chol.quad_form_inv(&channels[i])?;
        rates[i] = (1.0 + sinr).log2();
        cov.add_rank_one(&channels[i], powers[i]);
    }
    Ok(rates)
}

/// ISH access: sum rate of one cell's uplink with every out-of-cell node
/// transmitting at power `P` into the noise covariance.
pub fn ish_uplink_sum_rate<R: Rng + ?Sized>(
    topo: &Topology,
    cfg: &NetworkConfig,
    cell: usize,
    rng: &mut R,
) -> Result<f64, ProtocolError> {
    let members = &topo.nodes_by_cell[cell];
    if members.is_empty() {
        return Ok(0.0);
    }
    let p = cfg.tx_power_w();
    let antennas = &topo.antenna_positions[cell];
    let mut cov =
        HermitianMatrix::scaled_identity(cfg.l, channel::noise_power_watts(cfg));
    let mut h = Vec::with_capacity(cfg.l);
    for (node, &home) in topo.node_positions.iter().zip(&topo.cell_of_node) {
        if home != cell {
            channel::uplink_vector_into(*node, antennas, cfg.alpha, rng, &mut h)?;
            cov.add_rank_one(&h, p);
        }
    }
    let mut in_cell = Vec::with_capacity(members.len());
    for &idx in members {
        in_cell.push(channel::uplink_vector(
            topo.node_positions[idx],
            antennas,
            cfg.alpha,
            rng,
        )?);
    }
    let powers = vec![p; in_cell.len()];
    Ok(vector_mac_sum_rate(&in_cell, &powers, &cov)?)
}

/// ISH exit: DPC broadcast sum rate of one cell through the dual
/// multiple-access expression. The BS budget `nP/m` is split uniformly over
/// the served destinations; other BSs radiate their full budget uniformly
/// from their antennas and are treated as noise.
pub fn ish_downlink_sum_rate<R: Rng + ?Sized>(
    topo: &Topology,
    cfg: &NetworkConfig,
    cell: usize,
    rng: &mut R,
) -> Result<f64, ProtocolError> {
    let members = &topo.nodes_by_cell[cell];
    if members.is_empty() {
        return Ok(0.0);
    }
    let budget = cfg.bs_power_w();
    if budget <= 0.0 {
        return Ok(0.0);
    }
    let antennas = &topo.antenna_positions[cell];
    let mut cov =
        HermitianMatrix::scaled_identity(cfg.l, channel::noise_power_watts(cfg));
    let mut g = Vec::with_capacity(cfg.l);
    for (other, ants) in topo.antenna_positions.iter().enumerate() {
        if other == cell {
            continue;
        }
        let per_antenna = cfg.bs_power_w() / ants.len() as f64;
        for a in ants {
            channel::uplink_vector_into(*a, antennas, cfg.alpha, rng, &mut g)?;
            cov.add_rank_one(&g, per_antenna);
        }
    }
    let mut served = Vec::with_capacity(members.len());
    for &idx in members {
        served.push(channel::downlink_vector(
            topo.node_positions[idx],
            antennas,
            cfg.alpha,
            rng,
        )?);
    }
    let powers = vec![budget / served.len() as f64; served.len()];
    Ok(vector_mac_sum_rate(&served, &powers, &cov)?)
}

/// Direction of a multihop stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Source toward a BS boundary antenna.
    Access,
    /// BS boundary antenna toward a destination.
    Exit,
}

/// Per-hop SINR of the multihop protocol: a nearest-neighbor hop of
/// `√2 · node_spacing` against noise plus ring interference from concurrent
/// routing cells (spatial reuse 9, nearest co-channel transmitters at three
/// routing-cell sides, `8k` of them on ring `k` out to the network edge).
pub fn imh_hop_sinr(cfg: &NetworkConfig) -> Result<f64, ProtocolError> {
    let routing_side = (2.0 * (cfg.n as f64).ln()).sqrt() * cfg.node_spacing_m;
    let cell_side = cfg.cell_side_m();
    if routing_side > cell_side {
        return Err(ConfigError::RoutingCellTooLarge {
            routing_m: routing_side,
            cell_m: cell_side,
        }
        .into());
    }
    let p = cfg.tx_power_w();
    let d_hop = std::f64::consts::SQRT_2 * cfg.node_spacing_m;
    let signal = p * d_hop.powf(-cfg.alpha);
    let ring_pitch = 3.0 * routing_side;
    let rings = (cfg.side_m() / ring_pitch).ceil() as usize;
    let mut interference = 0.0;
    for k in 1..=rings {
        interference += 8.0 * k as f64 * p * (ring_pitch * k as f64).powf(-cfg.alpha);
    }
    Ok(signal / (channel::noise_power_watts(cfg) + interference))
}

/// Aggregate multihop capacity of one cell stage:
/// `min{l, ⌊√(n/m)⌋} · log2(1 + SINR_hop) / 9`. Access and exit stages share
/// the hop geometry, so the value is direction-independent.
pub fn imh_cell_rate(cfg: &NetworkConfig, _direction: Direction) -> Result<f64, ProtocolError> {
    cfg.validate()?;
    let sinr = imh_hop_sinr(cfg)?;
    let hop_rate = (1.0 + sinr).log2();
    Ok(cfg.imh_paths_per_cell() as f64 * hop_rate / 9.0)
}

/// All per-cell wireless capacities for one channel realization.
///
/// A cell too small to hold one `2 ln n` routing square cannot host the
/// multihop relay structure; the IMH stages are unavailable (zero capacity)
/// at such operating points rather than an error, so mixed sweeps where
/// only the single-hop protocol exists still evaluate.
pub fn cell_rates<R: Rng + ?Sized>(
    topo: &Topology,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> Result<CellRates, ProtocolError> {
    let m = cfg.m;
    let mut uplink = Vec::with_capacity(m);
    let mut downlink = Vec::with_capacity(m);
    for cell in 0..m {
        uplink.push(ish_uplink_sum_rate(topo, cfg, cell, rng)?);
        downlink.push(ish_downlink_sum_rate(topo, cfg, cell, rng)?);
    }
    let imh = match imh_cell_rate(cfg, Direction::Access) {
        Ok(rate) => rate,
        Err(ProtocolError::Config(ConfigError::RoutingCellTooLarge { .. })) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(CellRates {
        uplink,
        downlink,
        imh_access: vec![imh; m],
        imh_exit: vec![imh; m],
    })
}

/// Largest uniform per-flow rate for one protocol plus the constraint that
/// binds it: access capacity over flows sourced per cell, exit capacity over
/// flows terminating per cell, and `r_bs` over the heaviest BS-pair load.
pub fn scheme_throughput(
    rates: &CellRates,
    traffic: &TrafficMatrix,
    cfg: &NetworkConfig,
    scheme: Scheme,
) -> (f64, Bottleneck, f64) {
    let (access, exit, access_kind, exit_kind) = match scheme {
        Scheme::Ish => (
            &rates.uplink,
            &rates.downlink,
            Bottleneck::WirelessUplink,
            Bottleneck::WirelessDownlink,
        ),
        Scheme::Imh => (
            &rates.imh_access,
            &rates.imh_exit,
            Bottleneck::WirelessHop,
            Bottleneck::WirelessHop,
        ),
    };

    let mut per_flow = f64::INFINITY;
    let mut bottleneck = access_kind;
    let consider = |rate: f64, kind: Bottleneck, per_flow: &mut f64, b: &mut Bottleneck| {
        if rate < *per_flow {
            *per_flow = rate;
            *b = kind;
        }
    };

    for cell in 0..traffic.cells() {
        let sourced = traffic.column_sum(cell);
        if sourced > 0 {
            consider(access[cell] / sourced as f64, access_kind, &mut per_flow, &mut bottleneck);
        }
        let terminating = traffic.row_sum(cell);
        if terminating > 0 {
            consider(exit[cell] / terminating as f64, exit_kind, &mut per_flow, &mut bottleneck);
        }
    }
    let heaviest = traffic.max_off_diagonal();
    if heaviest > 0 && cfg.r_bs.is_finite() {
        consider(
            cfg.r_bs / heaviest as f64,
            Bottleneck::Backhaul,
            &mut per_flow,
            &mut bottleneck,
        );
    }

    if !per_flow.is_finite() {
        // No populated cell produced a constraint; nothing can flow.
        return (0.0, access_kind, 0.0);
    }
    (per_flow * cfg.n as f64, bottleneck, per_flow)
}

/// Evaluate both protocols on one topology and channel realization.
pub fn evaluate<R: Rng + ?Sized>(
    topo: &Topology,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> Result<ThroughputReport, ProtocolError> {
    let traffic = topology::count_traffic(topo, &topo.all_sources());
    let rates = cell_rates(topo, cfg, rng)?;
    let (t_ish, b_ish, r_ish) = scheme_throughput(&rates, &traffic, cfg, Scheme::Ish);
    let (t_imh, b_imh, r_imh) = scheme_throughput(&rates, &traffic, cfg, Scheme::Imh);
    let (scheme, bottleneck, per_flow_rate) = if t_imh > t_ish {
        (Scheme::Imh, b_imh, r_imh)
    } else {
        (Scheme::Ish, b_ish, r_ish)
    };
    Ok(ThroughputReport {
        t_ish,
        t_imh,
        t_n: t_ish.max(t_imh),
        scheme,
        bottleneck,
        per_flow_rate,
        traffic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn scalar_capacity() {
        // One node, one antenna, no interferers: log2(1 + P |h|^2 / N).
        let n0 = 1e-13;
        let p = 1e-4;
        let h = vec![c(3e-5, 4e-5)]; // |h|^2 = 2.5e-9
        let cov = HermitianMatrix::scaled_identity(1, n0);
        let rate = vector_mac_sum_rate(std::slice::from_ref(&h), &[p], &cov).unwrap();
        let expected = (1.0 + p * 2.5e-9 / n0).log2();
        assert!((rate - expected).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_users_rates_add() {
        let n0 = 2e-13;
        let p = 5e-5;
        let h1 = vec![c(1e-4, 0.0), c(0.0, 0.0)];
        let h2 = vec![c(0.0, 0.0), c(0.0, 2e-4)];
        let cov = HermitianMatrix::scaled_identity(2, n0);
        let sum = vector_mac_sum_rate(&[h1.clone(), h2.clone()], &[p, p], &cov).unwrap();
        let expected = (1.0 + p * 1e-8 / n0).log2() + (1.0 + p * 4e-8 / n0).log2();
        assert!((sum - expected).abs() < 1e-12);
    }

    #[test]
    fn sic_rates_sum_to_log_det() {
        // Chain-rule determinant identity on random instances.
        let mut r = rng(42);
        for trial in 0..50 {
            let antennas = 2 + (trial % 7);
            let users = 3 + (trial % 10);
            let mut cov = HermitianMatrix::scaled_identity(antennas, 1.0);
            // A couple of interferers keep the covariance non-diagonal.
            for _ in 0..3 {
                let v: Vec<Complex64> = (0..antennas)
                    .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
                    .collect();
                cov.add_rank_one(&v, 0.5);
            }
            let channels: Vec<Vec<Complex64>> = (0..users)
                .map(|_| {
                    (0..antennas)
                        .map(|_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            let powers: Vec<f64> = (0..users).map(|u| 0.2 + 0.1 * u as f64).collect();
            let streams = sic_stream_rates(&channels, &powers, &cov).unwrap();
            let total = vector_mac_sum_rate(&channels, &powers, &cov).unwrap();
            let sum: f64 = streams.iter().sum();
            assert!(
                (sum - total).abs() < 1e-9,
                "trial {trial}: SIC sum {sum} vs log-det {total}"
            );
        }
    }

    #[test]
    fn uplink_downlink_duality_on_symmetric_instance() {
        // Same total power, conjugate channels, no interference: the MAC sum
        // rate equals the dual broadcast expression exactly. Hand-frozen
        // oracle on a 2x2 instance:
        //   H = [[1, i], [2, 0]] (rows = users), P = 1, N = 1.
        //   det(I + sum h h^H) = det([[6, i], [-i, 2]]) = 11.
        let n0 = 1.0;
        let p = 1.0;
        let up_user1 = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let up_user2 = vec![c(2.0, 0.0), c(0.0, 0.0)];
        let cov = HermitianMatrix::scaled_identity(2, n0);
        let uplink =
            vector_mac_sum_rate(&[up_user1.clone(), up_user2.clone()], &[p, p], &cov).unwrap();
        assert!((uplink - 11f64.log2()).abs() < 1e-12);

        // Downlink duals carry conjugated coefficients; |det| is unchanged.
        let down_user1: Vec<Complex64> = up_user1.iter().map(|z| z.conj()).collect();
        let down_user2: Vec<Complex64> = up_user2.iter().map(|z| z.conj()).collect();
        let downlink =
            vector_mac_sum_rate(&[down_user1, down_user2], &[p, p], &cov).unwrap();
        assert!((uplink - downlink).abs() < 1e-9);
    }

    #[test]
    fn imh_paths_and_rate() {
        let cfg = NetworkConfig::new(1296, 16, 4);
        assert_eq!(cfg.imh_paths_per_cell(), 4);
        let sinr = imh_hop_sinr(&cfg).unwrap();
        assert!(sinr >= 1.0, "hop SINR {sinr} below 0 dB at the bench constants");
        let rate = imh_cell_rate(&cfg, Direction::Access).unwrap();
        assert!((rate - 4.0 * (1.0 + sinr).log2() / 9.0).abs() < 1e-12);
        assert_eq!(rate, imh_cell_rate(&cfg, Direction::Exit).unwrap());

        // Path count saturates at sqrt(n/m) once l exceeds it.
        let cfg = NetworkConfig::new(5184, 64, 64);
        assert_eq!(cfg.imh_paths_per_cell(), 9);
    }

    #[test]
    fn imh_needs_room_for_routing_cells() {
        // 2 ln n routing squares no longer fit in a cell when m is too large
        // for the given n.
        let cfg = NetworkConfig::new(64, 64, 1);
        assert!(matches!(
            imh_cell_rate(&cfg, Direction::Access),
            Err(ProtocolError::Config(ConfigError::RoutingCellTooLarge { .. }))
        ));
    }

    #[test]
    fn evaluate_survives_imh_infeasible_cells() {
        // Dense BS grids leave no room for routing squares; the multihop
        // protocol drops out and the single-hop protocol carries the run.
        let mut cfg = NetworkConfig::new(1296, 144, 3);
        cfg.seed = 2;
        let topo = topology::generate(&cfg).unwrap();
        let rep = evaluate(&topo, &cfg, &mut rng(6)).unwrap();
        assert_eq!(rep.t_imh, 0.0);
        assert!(rep.t_ish > 0.0);
        assert_eq!(rep.scheme, Scheme::Ish);
    }

    #[test]
    fn hop_rate_stays_bounded_across_n() {
        // The hop SINR is set by the fixed nearest-neighbor distance, so the
        // per-hop rate holds above 0.1 b/s/Hz across the bench range of n.
        for n in [256usize, 1296, 4096, 10000] {
            let cfg = NetworkConfig::new(n, 16, 4);
            let sinr = imh_hop_sinr(&cfg).unwrap();
            let hop_rate = (1.0 + sinr).log2();
            assert!(hop_rate > 0.1, "hop rate {hop_rate} at n={n}");
        }
    }

    #[test]
    fn alpha_enters_only_through_hop_sinr() {
        let mut a = NetworkConfig::new(1296, 16, 4);
        a.alpha = 3.5;
        let mut b = a.clone();
        b.alpha = 4.0;
        let paths = a.imh_paths_per_cell() as f64;
        for cfg in [&a, &b] {
            let rate = imh_cell_rate(cfg, Direction::Access).unwrap();
            let sinr = imh_hop_sinr(cfg).unwrap();
            assert!((rate - paths * (1.0 + sinr).log2() / 9.0).abs() < 1e-12);
        }
        assert!(
            imh_cell_rate(&a, Direction::Access).unwrap()
                > imh_cell_rate(&b, Direction::Access).unwrap()
        );
    }

    #[test]
    fn downlink_single_user_gets_full_budget() {
        // n = m: one node per cell on average; a lone served destination is
        // allocated the whole nP/m with nP/m = P here.
        let mut cfg = NetworkConfig::new(16, 16, 1);
        cfg.seed = 3;
        let topo = topology::generate(&cfg).unwrap();
        let cell = (0..16).find(|&c| topo.nodes_by_cell[c].len() == 1).unwrap();
        let node = topo.node_positions[topo.nodes_by_cell[cell][0]];
        let d = node.distance(topo.antenna_positions[cell][0]);

        // Strip interference by comparing against the isolated formula with
        // the realized |h|^2 = d^-alpha.
        let n0 = channel::noise_power_watts(&cfg);
        let expected = (1.0 + cfg.bs_power_w() * d.powf(-cfg.alpha) / n0).log2();
        let mut r = rng(5);
        let mut only = topo.clone();
        only.antenna_positions = vec![vec![Point { x: -1e9, y: -1e9 }]; 16];
        only.antenna_positions[cell] = topo.antenna_positions[cell].clone();
        let got = ish_downlink_sum_rate(&only, &cfg, cell, &mut r).unwrap();
        // Other BSs were pushed far away, so interference is negligible.
        assert!((got - expected).abs() / expected < 1e-6, "got {got}, expected {expected}");
    }

    #[test]
    fn zero_budget_means_zero_downlink() {
        let mut cfg = NetworkConfig::new(16, 4, 1);
        cfg.tx_power_dbm = f64::NEG_INFINITY;
        let topo = topology::generate(&cfg).unwrap();
        let mut r = rng(1);
        for cell in 0..4 {
            assert_eq!(ish_downlink_sum_rate(&topo, &cfg, cell, &mut r).unwrap(), 0.0);
        }
    }

    #[test]
    fn end_to_end_backhaul_extremes() {
        let mut cfg = NetworkConfig::new(144, 4, 2);
        cfg.seed = 9;
        let topo = topology::generate(&cfg).unwrap();

        // Unlimited backhaul: the wireless min decides.
        let unlimited = evaluate(&topo, &cfg, &mut rng(1)).unwrap();
        assert!(unlimited.t_n > 0.0);
        assert_ne!(unlimited.bottleneck, Bottleneck::Backhaul);

        // Zero backhaul with cross-cell pairs: nothing flows.
        let mut starved = cfg.clone();
        starved.r_bs = 0.0;
        let report = evaluate(&topo, &starved, &mut rng(1)).unwrap();
        assert_eq!(report.t_n, 0.0);
        assert_eq!(report.bottleneck, Bottleneck::Backhaul);
    }

    #[test]
    fn throughput_monotone_and_saturating_in_r_bs() {
        let mut cfg = NetworkConfig::new(256, 4, 2);
        cfg.seed = 21;
        let topo = topology::generate(&cfg).unwrap();
        let saturated = evaluate(&topo, &cfg, &mut rng(2)).unwrap();

        let mut last = 0.0;
        for r_bs in [0.01, 0.05, 0.2, 1.0, 5.0, 25.0, 125.0] {
            let mut c = cfg.clone();
            c.r_bs = r_bs;
            let rep = evaluate(&topo, &c, &mut rng(2)).unwrap();
            assert!(rep.t_n + 1e-12 >= last, "t_n not monotone at r_bs={r_bs}");
            last = rep.t_n;
            assert!(rep.t_n <= saturated.t_n + 1e-12);
        }
        assert!((last - saturated.t_n).abs() < 1e-9, "sweep did not saturate");

        // The knee sits at max X_ki times the saturated per-flow rate.
        let knee = saturated.traffic.max_off_diagonal() as f64 * saturated.per_flow_rate;
        let mut at_knee = cfg.clone();
        at_knee.r_bs = knee;
        let rep = evaluate(&topo, &at_knee, &mut rng(2)).unwrap();
        assert!((rep.t_n - saturated.t_n).abs() < 1e-9);
        let mut below = cfg.clone();
        below.r_bs = knee * 0.9;
        let rep = evaluate(&topo, &below, &mut rng(2)).unwrap();
        assert!(rep.t_n < saturated.t_n - 1e-12);
    }

    #[test]
    fn max_rule_and_monotone_in_power() {
        let mut cfg = NetworkConfig::new(144, 4, 2);
        cfg.seed = 4;
        let topo = topology::generate(&cfg).unwrap();
        let rep = evaluate(&topo, &cfg, &mut rng(3)).unwrap();
        assert_eq!(rep.t_n, rep.t_ish.max(rep.t_imh));

        let mut hot = cfg.clone();
        hot.tx_power_dbm = cfg.tx_power_dbm + 6.0;
        let rep_hot = evaluate(&topo, &hot, &mut rng(3)).unwrap();
        assert!(rep_hot.t_n >= rep.t_n);
    }
}
