//! Finite network instances: node placement, the cell grid, BS/antenna
//! placement, source-destination pairing, and realized inter-cell traffic
//! counts.
//!
//! The network is a square of side `node_spacing_m · √n` (unit node density
//! in spacing units) divided into `m` equal square cells with one BS at each
//! cell center. Nodes are placed uniformly at random outside the BS discs of
//! radius `ε₀ · cell_side` by rejection sampling. Antennas sit regularly on
//! the BS boundary circle while `l` fits below `√(n/m)`, otherwise `√(n/m)`
//! of them do and the rest fill the disc uniformly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("BS count {0} is not a positive perfect square")]
    NotPerfectSquare(usize),
    #[error("each BS needs at least one antenna")]
    NoAntennas,
    #[error("total antenna count m*l = {ml} exceeds the node count {n}")]
    TooManyAntennas { ml: usize, n: usize },
    #[error("path-loss exponent alpha must exceed 2, got {0}")]
    AlphaOutOfRange(f64),
    #[error("epsilon0 must lie in (0, 1), got {0}")]
    Epsilon0OutOfRange(f64),
    #[error("BS discs would cover {fraction:.2} of the area; epsilon0 {epsilon0} is too large for rejection sampling")]
    BsDiscsTooLarge { epsilon0: f64, fraction: f64 },
    #[error("{field} must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("backhaul rate must be nonnegative, got {0}")]
    NegativeBackhaul(f64),
    #[error("routing cell side {routing_m:.1} m exceeds cell side {cell_m:.1} m; raise n so cells can hold 2 ln n routing squares")]
    RoutingCellTooLarge { routing_m: f64, cell_m: f64 },
}

/// A position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

fn default_alpha() -> f64 {
    3.5
}
fn default_spacing() -> f64 {
    100.0
}
fn default_tx_power() -> f64 {
    -10.0
}
fn default_noise_density() -> f64 {
    -174.0
}
fn default_noise_figure() -> f64 {
    5.0
}
fn default_bandwidth() -> f64 {
    40e6
}
fn default_r_bs() -> f64 {
    f64::INFINITY
}
fn default_epsilon0() -> f64 {
    0.1
}
fn default_seed() -> u64 {
    0
}

/// Finite-instance parameters. The radio constants default to the standard
/// bench values: 100 m nearest-neighbor spacing, −10 dBm node power,
/// −174 dBm/Hz noise density, 5 dB noise figure, 40 MHz bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Number of wireless nodes.
    pub n: usize,
    /// Number of BSs; must be a perfect square (one per grid cell).
    pub m: usize,
    /// Antennas per BS.
    pub l: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_spacing")]
    pub node_spacing_m: f64,
    #[serde(default = "default_tx_power")]
    pub tx_power_dbm: f64,
    #[serde(default = "default_noise_density")]
    pub noise_density_dbm_hz: f64,
    #[serde(default = "default_noise_figure")]
    pub noise_figure_db: f64,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_hz: f64,
    /// Rate of each directed BS-to-BS backhaul link in b/s/Hz. Defaults to
    /// infinity (unconstrained backhaul).
    #[serde(default = "default_r_bs")]
    pub r_bs: f64,
    /// BS disc radius as a fraction of the cell side.
    #[serde(default = "default_epsilon0")]
    pub epsilon0: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl NetworkConfig {
    pub fn new(n: usize, m: usize, l: usize) -> Self {
        Self {
            n,
            m,
            l,
            alpha: default_alpha(),
            node_spacing_m: default_spacing(),
            tx_power_dbm: default_tx_power(),
            noise_density_dbm_hz: default_noise_density(),
            noise_figure_db: default_noise_figure(),
            bandwidth_hz: default_bandwidth(),
            r_bs: default_r_bs(),
            epsilon0: default_epsilon0(),
            seed: default_seed(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::NoNodes);
        }
        let g = (self.m as f64).sqrt().round() as usize;
        if self.m == 0 || g * g != self.m {
            return Err(ConfigError::NotPerfectSquare(self.m));
        }
        if self.l == 0 {
            return Err(ConfigError::NoAntennas);
        }
        if self.m * self.l > self.n {
            return Err(ConfigError::TooManyAntennas { ml: self.m * self.l, n: self.n });
        }
        if self.alpha.is_nan() || self.alpha <= 2.0 {
            return Err(ConfigError::AlphaOutOfRange(self.alpha));
        }
        if !(self.epsilon0 > 0.0 && self.epsilon0 < 1.0) {
            return Err(ConfigError::Epsilon0OutOfRange(self.epsilon0));
        }
        for (field, value) in [
            ("node_spacing_m", self.node_spacing_m),
            ("bandwidth_hz", self.bandwidth_hz),
        ] {
            if value.is_nan() || value <= 0.0 {
                return Err(ConfigError::NonPositive { field, value });
            }
        }
        if self.r_bs.is_nan() || self.r_bs < 0.0 {
            return Err(ConfigError::NegativeBackhaul(self.r_bs));
        }
        Ok(())
    }

    /// Cells per grid side, `√m`.
    pub fn grid_dim(&self) -> usize {
        (self.m as f64).sqrt().round() as usize
    }

    /// Network side length in meters.
    pub fn side_m(&self) -> f64 {
        self.node_spacing_m * (self.n as f64).sqrt()
    }

    /// Cell side length in meters.
    pub fn cell_side_m(&self) -> f64 {
        self.side_m() / self.grid_dim() as f64
    }

    /// BS disc radius in meters.
    pub fn bs_radius_m(&self) -> f64 {
        self.epsilon0 * self.cell_side_m()
    }

    pub fn tx_power_w(&self) -> f64 {
        crate::channel::dbm_to_watts(self.tx_power_dbm)
    }

    /// Per-BS power budget `nP/m`, matching the total node power.
    pub fn bs_power_w(&self) -> f64 {
        self.tx_power_w() * self.n as f64 / self.m as f64
    }

    /// Average nodes per cell.
    pub fn nodes_per_cell(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    /// Simultaneous multihop paths per cell, `min{l, ⌊√(n/m)⌋}`.
    pub fn imh_paths_per_cell(&self) -> usize {
        self.l.min(self.nodes_per_cell().sqrt().floor() as usize)
    }

    /// Cell index of a position.
    pub fn cell_of_point(&self, p: Point) -> usize {
        let g = self.grid_dim();
        let cs = self.cell_side_m();
        let col = ((p.x / cs) as usize).min(g - 1);
        let row = ((p.y / cs) as usize).min(g - 1);
        row * g + col
    }

    fn cell_center(&self, cell: usize) -> Point {
        let g = self.grid_dim();
        let cs = self.cell_side_m();
        let row = cell / g;
        let col = cell % g;
        Point { x: (col as f64 + 0.5) * cs, y: (row as f64 + 0.5) * cs }
    }
}

/// A realized network instance. Immutable after generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub node_positions: Vec<Point>,
    pub bs_positions: Vec<Point>,
    /// Per BS: boundary antennas first (regular angular spacing), then any
    /// interior antennas.
    pub antenna_positions: Vec<Vec<Point>>,
    pub cell_of_node: Vec<usize>,
    /// Fixed-point-free permutation (for n > 1): `sd_pairing[source] = destination`.
    pub sd_pairing: Vec<usize>,
    /// Node indices per cell, ascending.
    pub nodes_by_cell: Vec<Vec<usize>>,
}

impl Topology {
    /// Every node as an active source, grouped by cell.
    pub fn all_sources(&self) -> Vec<Vec<usize>> {
        self.nodes_by_cell.clone()
    }
}

/// Generate a topology. Deterministic for a fixed `config.seed`.
pub fn generate(config: &NetworkConfig) -> Result<Topology, ConfigError> {
    config.validate()?;
    // Rejection sampling needs the discs to leave most of each cell free.
    let disc_fraction = PI * config.epsilon0 * config.epsilon0;
    if disc_fraction >= 0.5 {
        return Err(ConfigError::BsDiscsTooLarge {
            epsilon0: config.epsilon0,
            fraction: disc_fraction,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let side = config.side_m();
    let radius = config.bs_radius_m();
    let m = config.m;
    let n = config.n;

    let bs_positions: Vec<Point> = (0..m).map(|c| config.cell_center(c)).collect();

    // Nodes: uniform on the square minus the BS discs. A disc never crosses
    // its cell border (epsilon0 < 0.4), so only the home-cell BS is checked.
    let mut node_positions = Vec::with_capacity(n);
    let mut cell_of_node = Vec::with_capacity(n);
    let mut nodes_by_cell = vec![Vec::new(); m];
    for idx in 0..n {
        loop {
            let p = Point {
                x: rng.random_range(0.0..side),
                y: rng.random_range(0.0..side),
            };
            let cell = config.cell_of_point(p);
            if p.distance(bs_positions[cell]) <= radius {
                continue;
            }
            node_positions.push(p);
            cell_of_node.push(cell);
            nodes_by_cell[cell].push(idx);
            break;
        }
    }

    // Pairing: uniform permutation, resampled until it has no fixed point.
    // Drawn before the antennas so that node placement and pairing are
    // identical across antenna counts at a fixed (n, m, seed).
    let mut sd_pairing: Vec<usize> = (0..n).collect();
    if n > 1 {
        loop {
            sd_pairing.shuffle(&mut rng);
            if sd_pairing.iter().enumerate().all(|(i, &d)| i != d) {
                break;
            }
        }
    }

    // Antennas per BS.
    let sqrt_npc = config.nodes_per_cell().sqrt();
    let boundary_count = if (config.l as f64) <= sqrt_npc {
        config.l
    } else {
        (sqrt_npc.floor() as usize).max(1)
    };
    let mut antenna_positions = Vec::with_capacity(m);
    for bs in &bs_positions {
        let mut ants = Vec::with_capacity(config.l);
        for t in 0..boundary_count {
            let angle = TAU * t as f64 / boundary_count as f64;
            ants.push(Point {
                x: bs.x + radius * angle.cos(),
                y: bs.y + radius * angle.sin(),
            });
        }
        for _ in boundary_count..config.l {
            let r = radius * rng.random_range(0.0f64..1.0).sqrt();
            let angle = rng.random_range(0.0..TAU);
            ants.push(Point { x: bs.x + r * angle.cos(), y: bs.y + r * angle.sin() });
        }
        antenna_positions.push(ants);
    }

    Ok(Topology {
        node_positions,
        bs_positions,
        antenna_positions,
        cell_of_node,
        sd_pairing,
        nodes_by_cell,
    })
}

/// Realized flow counts between cells: `get(k, i)` is the number of
/// destinations in cell `k` whose (currently active) sources are in cell `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficMatrix {
    m: usize,
    counts: Vec<u32>,
}

impl TrafficMatrix {
    pub fn zero(m: usize) -> Self {
        Self { m, counts: vec![0; m * m] }
    }

    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn get(&self, dest_cell: usize, source_cell: usize) -> u32 {
        self.counts[dest_cell * self.m + source_cell]
    }

    /// Flows originating in `source_cell` (column sum).
    pub fn column_sum(&self, source_cell: usize) -> u32 {
        (0..self.m).map(|k| self.get(k, source_cell)).sum()
    }

    /// Flows terminating in `dest_cell` (row sum).
    pub fn row_sum(&self, dest_cell: usize) -> u32 {
        (0..self.m).map(|i| self.get(dest_cell, i)).sum()
    }

    /// Heaviest backhaul link load in flows; same-cell traffic is excluded
    /// because it never touches a BS-to-BS link.
    pub fn max_off_diagonal(&self) -> u32 {
        let mut best = 0;
        for k in 0..self.m {
            for i in 0..self.m {
                if k != i {
                    best = best.max(self.get(k, i));
                }
            }
        }
        best
    }

    pub fn off_diagonal_entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (0..self.m).flat_map(move |k| {
            (0..self.m)
                .filter(move |&i| i != k)
                .map(move |i| (k, i, self.get(k, i)))
        })
    }
}

/// Exact per-pair flow counts for the given active sources.
pub fn count_traffic(topo: &Topology, active_sources: &[Vec<usize>]) -> TrafficMatrix {
    let m = topo.bs_positions.len();
    debug_assert_eq!(active_sources.len(), m);
    let mut tm = TrafficMatrix::zero(m);
    for (i, sources) in active_sources.iter().enumerate() {
        for &s in sources {
            debug_assert_eq!(topo.cell_of_node[s], i);
            let dest = topo.sd_pairing[s];
            let k = topo.cell_of_node[dest];
            tm.counts[k * m + i] += 1;
        }
    }
    tm
}

/// The multihop protocol's simultaneously transmitting sources: the first
/// `min{l, ⌊√(n/m)⌋}` node indices of each cell. Cells with fewer nodes
/// contribute what they have; empty cells contribute nothing.
pub fn imh_active_set(topo: &Topology, config: &NetworkConfig) -> Vec<Vec<usize>> {
    let k = config.imh_paths_per_cell();
    topo.nodes_by_cell
        .iter()
        .map(|nodes| nodes.iter().copied().take(k).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_generation() {
        let mut cfg = NetworkConfig::new(16, 4, 2);
        cfg.seed = 7;
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let mut cfg2 = cfg.clone();
        cfg2.seed = 8;
        let c = generate(&cfg2).unwrap();
        assert_ne!(a.node_positions, c.node_positions);
    }

    #[test]
    fn nodes_stay_inside_square_and_outside_discs() {
        let cfg = NetworkConfig::new(400, 16, 3);
        let topo = generate(&cfg).unwrap();
        assert_eq!(topo.node_positions.len(), 400);
        let side = cfg.side_m();
        let radius = cfg.bs_radius_m();
        for (idx, p) in topo.node_positions.iter().enumerate() {
            assert!(p.x >= 0.0 && p.x < side && p.y >= 0.0 && p.y < side);
            for bs in &topo.bs_positions {
                assert!(p.distance(*bs) > radius, "node {idx} inside a BS disc");
            }
            assert_eq!(topo.cell_of_node[idx], cfg.cell_of_point(*p));
        }
    }

    #[test]
    fn boundary_antennas_for_small_l() {
        // l = 4 <= sqrt(81) = 9: all four antennas on the circle, 90 degrees apart.
        let cfg = NetworkConfig::new(1296, 16, 4);
        let topo = generate(&cfg).unwrap();
        let radius = cfg.bs_radius_m();
        for (bs, ants) in topo.bs_positions.iter().zip(&topo.antenna_positions) {
            assert_eq!(ants.len(), 4);
            for a in ants {
                assert!((a.distance(*bs) - radius).abs() < 1e-9);
            }
            // Adjacent boundary antennas are 2 R sin(pi/l) apart; the minimum
            // pairwise distance cannot fall below that.
            let expected_min = 2.0 * radius * (PI / 4.0).sin();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    assert!(ants[i].distance(ants[j]) >= expected_min - 1e-9);
                }
            }
        }
    }

    #[test]
    fn interior_antennas_for_large_l() {
        // l = 16 > sqrt(n/m) = 8: 8 on the boundary, 8 uniform inside.
        let cfg = NetworkConfig::new(1024, 16, 16);
        let topo = generate(&cfg).unwrap();
        let radius = cfg.bs_radius_m();
        for (bs, ants) in topo.bs_positions.iter().zip(&topo.antenna_positions) {
            assert_eq!(ants.len(), 16);
            for a in &ants[..8] {
                assert!((a.distance(*bs) - radius).abs() < 1e-9);
            }
            for a in &ants[8..] {
                assert!(a.distance(*bs) <= radius + 1e-9);
            }
        }
    }

    #[test]
    fn pairing_is_a_derangement() {
        for seed in 0..20 {
            let mut cfg = NetworkConfig::new(64, 4, 2);
            cfg.seed = seed;
            let topo = generate(&cfg).unwrap();
            let mut seen = [false; 64];
            for (s, &d) in topo.sd_pairing.iter().enumerate() {
                assert_ne!(s, d, "self pair at seed {seed}");
                assert!(!seen[d]);
                seen[d] = true;
            }
            assert!(seen.iter().all(|&x| x));
        }
    }

    #[test]
    fn cell_occupancy_concentrates() {
        // n/m = 81 nodes per cell on average; the per-seed worst-case
        // deviation stays within 3*sqrt(81) of the mean on average.
        let mut devs = Vec::new();
        for seed in 0..1000 {
            let mut cfg = NetworkConfig::new(1296, 16, 4);
            cfg.seed = seed;
            let topo = generate(&cfg).unwrap();
            let max_dev = topo
                .nodes_by_cell
                .iter()
                .map(|c| (c.len() as f64 - 81.0).abs())
                .fold(0.0, f64::max);
            devs.push(max_dev);
        }
        let mean_max_dev = devs.iter().sum::<f64>() / devs.len() as f64;
        assert!(mean_max_dev <= 27.0, "mean worst-case deviation {mean_max_dev}");
    }

    #[test]
    fn traffic_counts_small_instance() {
        // Four nodes in four cells with a hand-built cross pairing.
        let cfg = NetworkConfig::new(4, 4, 1);
        let mut topo = generate(&cfg).unwrap();
        let cs = cfg.cell_side_m();
        topo.node_positions = vec![
            Point { x: 0.2 * cs, y: 0.2 * cs },
            Point { x: 1.2 * cs, y: 0.2 * cs },
            Point { x: 0.2 * cs, y: 1.2 * cs },
            Point { x: 1.2 * cs, y: 1.2 * cs },
        ];
        topo.cell_of_node = vec![0, 1, 2, 3];
        topo.nodes_by_cell = vec![vec![0], vec![1], vec![2], vec![3]];
        topo.sd_pairing = vec![1, 0, 3, 2];
        let tm = count_traffic(&topo, &topo.all_sources());
        assert_eq!(tm.get(1, 0), 1);
        assert_eq!(tm.get(0, 1), 1);
        assert_eq!(tm.get(3, 2), 1);
        assert_eq!(tm.get(2, 3), 1);
        let total: u32 = (0..4).map(|i| tm.column_sum(i)).sum();
        assert_eq!(total, 4);
        assert_eq!(tm.get(0, 0) + tm.get(2, 2), 0);

        // No active sources: all-zero matrix.
        let empty = count_traffic(&topo, &vec![vec![]; 4]);
        assert_eq!(empty.max_off_diagonal(), 0);
        assert_eq!((0..4).map(|i| empty.column_sum(i)).sum::<u32>(), 0);
    }

    #[test]
    fn column_sums_equal_active_counts() {
        let mut cfg = NetworkConfig::new(500, 25, 2);
        cfg.seed = 11;
        let topo = generate(&cfg).unwrap();
        let active = imh_active_set(&topo, &cfg);
        let tm = count_traffic(&topo, &active);
        for (i, sources) in active.iter().enumerate() {
            assert_eq!(tm.column_sum(i) as usize, sources.len());
        }
    }

    #[test]
    fn imh_active_set_sizes() {
        // min{l, sqrt(n/m)}: l = 4 vs sqrt(81) = 9 gives 4 per cell.
        let cfg = NetworkConfig::new(1296, 16, 4);
        let topo = generate(&cfg).unwrap();
        for cell in imh_active_set(&topo, &cfg) {
            assert!(cell.len() <= 4);
        }
        assert_eq!(cfg.imh_paths_per_cell(), 4);

        // Saturation: l = 64 > 9 caps at 9.
        let mut cfg = NetworkConfig::new(5184, 64, 64);
        cfg.alpha = 3.5;
        assert_eq!(cfg.nodes_per_cell(), 81.0);
        assert_eq!(cfg.imh_paths_per_cell(), 9);
    }

    #[test]
    fn config_validation() {
        assert!(NetworkConfig::new(16, 4, 2).validate().is_ok());
        assert!(matches!(
            NetworkConfig::new(16, 5, 2).validate(),
            Err(ConfigError::NotPerfectSquare(5))
        ));
        assert!(matches!(
            NetworkConfig::new(16, 4, 0).validate(),
            Err(ConfigError::NoAntennas)
        ));
        assert!(matches!(
            NetworkConfig::new(16, 4, 8).validate(),
            Err(ConfigError::TooManyAntennas { .. })
        ));
        let mut cfg = NetworkConfig::new(16, 4, 2);
        cfg.alpha = 2.0;
        assert!(matches!(cfg.validate(), Err(ConfigError::AlphaOutOfRange(_))));
        let mut cfg = NetworkConfig::new(16, 4, 2);
        cfg.epsilon0 = 0.45; // pi * 0.45^2 > 1/2
        assert!(matches!(generate(&cfg), Err(ConfigError::BsDiscsTooLarge { .. })));
    }

    #[test]
    fn config_json_defaults() {
        let cfg: NetworkConfig = serde_json::from_str(r#"{"n":1296,"m":16,"l":4}"#).unwrap();
        assert_eq!(cfg.alpha, 3.5);
        assert_eq!(cfg.node_spacing_m, 100.0);
        assert_eq!(cfg.tx_power_dbm, -10.0);
        assert_eq!(cfg.bandwidth_hz, 40e6);
        assert!(cfg.r_bs.is_infinite());
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn empirical_pair_count_growth() {
        // With n^0.7 active sources per cell and n^0.4 cells the heaviest
        // pair grows like n^0.3; checked within a 4x constant at n = 10^4.
        let n = 10_000usize;
        let a = (n as f64).powf(0.7).round() as usize;
        let cells = {
            let g = (n as f64).powf(0.2).round() as usize; // sqrt of n^0.4
            g * g
        };
        let predicted = (n as f64).powf(0.3);
        let mut worst = 0u32;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tm = TrafficMatrix::zero(cells);
            for i in 0..cells {
                for _ in 0..a {
                    let k = rng.random_range(0..cells);
                    tm.counts[k * cells + i] += 1;
                }
            }
            worst = worst.max(tm.max_off_diagonal());
        }
        let ratio = worst as f64 / predicted;
        assert!(ratio > 0.25 && ratio < 4.0, "max/predicted ratio {ratio}");
    }
}
