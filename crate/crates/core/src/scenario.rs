//! Users, UAV-BS cells and fronthaul rates.
//!
//! Users are drawn uniformly in a square region, grouped into `M0` cells by
//! seeded Lloyd clustering, and each UAV hovers over its cell centroid. A cell's
//! rate target is the mean equal-share fronthaul rate of its users.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antenna::{downward_angles, AntennaPattern};
use crate::channel::SourceArray;
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::units::{db_to_lin, dbm_to_w, SPEED_OF_LIGHT, THERMAL_NOISE_DBM_HZ};

const CLUSTER_ATTEMPTS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub region_center: Vec2,
    pub region_side: f64,
    pub n0: usize,
    pub m0: usize,
    pub uav_altitude: f64,
    /// Fronthaul bandwidth per cell, Hz.
    pub b_f: f64,
    /// Fronthaul noise power, W.
    pub sigma_f_sq: f64,
    /// UAV-BS fronthaul transmit power, W.
    pub p_uav_tx: f64,
    pub fronthaul_freq: f64,
    pub uav_pattern: AntennaPattern,
    pub source: SourceArray,
    /// Path gain at 1 m on the backhaul.
    pub beta0: f64,
    /// Backhaul bandwidth shared by FDMA across UAVs, Hz.
    pub b_b: f64,
    /// Backhaul receiver noise, W.
    pub sigma_sq: f64,
    pub cluster_max_iter: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let b_f = 10e6;
        Self {
            region_center: Vec2::new(1000.0, 0.0),
            region_side: 500.0,
            n0: 1000,
            m0: 6,
            uav_altitude: 45.0,
            b_f,
            sigma_f_sq: dbm_to_w(THERMAL_NOISE_DBM_HZ + 10.0 * b_f.log10() + 9.0),
            p_uav_tx: dbm_to_w(0.0),
            fronthaul_freq: 2e9,
            uav_pattern: AntennaPattern::default(),
            source: SourceArray {
                m: 16,
                spacing_wavelengths: 0.5,
                pattern: AntennaPattern::default(),
                p_max: dbm_to_w(20.0),
            },
            beta0: db_to_lin(-43.3),
            b_b: 50e6,
            sigma_sq: dbm_to_w(-99.0),
            cluster_max_iter: 300,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.region_side > 0.0) {
            return Err(Error::Domain("region side must be positive"));
        }
        if self.m0 == 0 || self.n0 < self.m0 {
            return Err(Error::Domain("need 1 <= M0 <= N0"));
        }
        if !(self.uav_altitude > 0.0) {
            return Err(Error::Domain("UAV altitude must be positive"));
        }
        if !(self.b_f > 0.0 && self.sigma_f_sq > 0.0 && self.p_uav_tx >= 0.0 && self.fronthaul_freq > 0.0) {
            return Err(Error::Domain("fronthaul parameters must be positive"));
        }
        if !(self.beta0 > 0.0 && self.b_b > 0.0 && self.sigma_sq > 0.0) {
            return Err(Error::Domain("backhaul parameters must be positive"));
        }
        if self.cluster_max_iter == 0 {
            return Err(Error::Domain("clustering needs at least one iteration"));
        }
        self.uav_pattern.validate()?;
        self.source.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub seed: u64,
    pub region_center: Vec2,
    pub region_side: f64,
    pub users: Vec<Vec2>,
    /// User indices per cell, ascending.
    pub cells: Vec<Vec<usize>>,
    pub uavs: Vec<Vec3>,
    pub rates: Vec<f64>,
    pub source: SourceArray,
    pub beta0: f64,
    pub b_b: f64,
    pub sigma_sq: f64,
}

impl Scenario {
    pub fn m0(&self) -> usize {
        self.uavs.len()
    }
}

/// Deterministic scenario for `seed`. User offsets from the region center are
/// drawn first, so layouts at different region distances share a seed's draws.
pub fn generate_scenario(cfg: &ScenarioConfig, seed: u64) -> Result<Scenario> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 0.5 * cfg.region_side;
    let users: Vec<Vec2> = (0..cfg.n0)
        .map(|_| {
            let dx = rng.gen_range(-half..half);
            let dy = rng.gen_range(-half..half);
            cfg.region_center + Vec2::new(dx, dy)
        })
        .collect();
    let (centroids, labels) = cluster(&users, cfg.m0, cfg.cluster_max_iter, &mut rng)?;
    let mut cells = vec![Vec::new(); cfg.m0];
    for (i, &l) in labels.iter().enumerate() {
        cells[l].push(i);
    }
    let uavs: Vec<Vec3> = centroids.iter().map(|c| c.with_z(cfg.uav_altitude)).collect();
    let rates = cells
        .iter()
        .zip(&uavs)
        .map(|(cell, &uav)| {
            let members: Vec<Vec2> = cell.iter().map(|&i| users[i]).collect();
            fronthaul_rate(cfg, uav, &members)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scenario {
        seed,
        region_center: cfg.region_center,
        region_side: cfg.region_side,
        users,
        cells,
        uavs,
        rates,
        source: cfg.source.clone(),
        beta0: cfg.beta0,
        b_b: cfg.b_b,
        sigma_sq: cfg.sigma_sq,
    })
}

/// Cell throughput: bandwidth split evenly across users, free-space path loss
/// at the fronthaul carrier, and the UAV antenna looking straight down.
pub fn fronthaul_rate(cfg: &ScenarioConfig, uav: Vec3, users: &[Vec2]) -> Result<f64> {
    if users.is_empty() {
        return Err(Error::Domain("fronthaul rate needs a non-empty cell"));
    }
    let lambda = SPEED_OF_LIGHT / cfg.fronthaul_freq;
    let share = cfg.b_f / users.len() as f64;
    let mut total = 0.0;
    for &u in users {
        let dx = u.x - uav.x;
        let dy = u.y - uav.y;
        let d = u.with_z(0.0).dist(uav);
        let (theta, phi) = downward_angles(dx, dy, uav.z);
        let g = crate::antenna::antenna_gain(theta, phi, &cfg.uav_pattern)?;
        let fspl = (lambda / (4.0 * PI * d)).powi(2);
        total += share * (1.0 + cfg.p_uav_tx * g * fspl / cfg.sigma_f_sq).log2();
    }
    Ok(total)
}

/// Lloyd clustering from `k` distinct seeded users. Ties go to the lowest
/// centroid index. An empty cluster restarts from fresh seeds.
pub fn cluster(
    points: &[Vec2],
    k: usize,
    max_iter: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<Vec2>, Vec<usize>)> {
    if k == 0 || points.len() < k {
        return Err(Error::Domain("clustering needs 1 <= k <= point count"));
    }
    'attempt: for _ in 0..CLUSTER_ATTEMPTS {
        let mut idx: Vec<usize> = (0..points.len()).collect();
        for i in 0..k {
            let j = rng.gen_range(i..points.len());
            idx.swap(i, j);
        }
        let mut centroids: Vec<Vec2> = idx[..k].iter().map(|&i| points[i]).collect();
        let mut labels = vec![usize::MAX; points.len()];
        for _ in 0..max_iter {
            let mut changed = false;
            for (p, l) in points.iter().zip(labels.iter_mut()) {
                let best = nearest(&centroids, *p);
                if best != *l {
                    *l = best;
                    changed = true;
                }
            }
            let mut sums = vec![Vec2::ZERO; k];
            let mut counts = vec![0usize; k];
            for (p, &l) in points.iter().zip(&labels) {
                sums[l] = sums[l] + *p;
                counts[l] += 1;
            }
            if counts.contains(&0) {
                continue 'attempt;
            }
            for j in 0..k {
                centroids[j] = sums[j] * (1.0 / counts[j] as f64);
            }
            if !changed {
                break;
            }
        }
        return Ok((centroids, labels));
    }
    Err(Error::Domain("clustering left an empty cell after all restarts"))
}

fn nearest(centroids: &[Vec2], p: Vec2) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = (p.x - c.x).powi(2) + (p.y - c.y).powi(2);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}
