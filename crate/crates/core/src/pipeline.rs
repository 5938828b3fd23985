//! One-pass planner: place, partition, choose gain, allocate powers.

use alloc::vec::Vec;

use num_traits::Float;

use crate::channel::RisGeometry;
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::partition::{assemble_phases, choose_partition, Partition};
use crate::placement::{consensus_placement, PlacementProblem, PlacementSolution, WeiszfeldOptions};
use crate::power::{self, alpha_star, AlphaStar, PowerOffsets, PowerProblem, PowerReport};
use crate::scenario::Scenario;
use crate::units::{db_to_lin, dbm_to_w, SPEED_OF_LIGHT};

/// Aerial-RIS physical and electrical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisConfig {
    pub geometry: RisGeometry,
    pub alpha_max: f64,
    pub p_e: f64,
    pub sigma_a_sq: f64,
    pub p_max_a: f64,
}

impl Default for RisConfig {
    fn default() -> Self {
        Self {
            geometry: RisGeometry {
                n: 300,
                spacing_wavelengths: 0.1,
                altitude: 180.0,
                wavelength: SPEED_OF_LIGHT / 3.5e9,
            },
            alpha_max: db_to_lin(40.0).sqrt(),
            p_e: dbm_to_w(-3.8),
            sigma_a_sq: dbm_to_w(-80.0),
            p_max_a: dbm_to_w(20.0),
        }
    }
}

impl RisConfig {
    /// Same surface without amplifiers: unit gain, no injected noise, no element draw.
    pub fn passive(&self) -> Self {
        Self {
            alpha_max: 1.0,
            p_e: 0.0,
            sigma_a_sq: 0.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !(self.alpha_max >= 1.0) {
            return Err(Error::Domain("alpha_max must be at least 1"));
        }
        if self.p_e < 0.0 || self.sigma_a_sq < 0.0 || !(self.p_max_a > 0.0) {
            return Err(Error::Domain("RIS powers must be non-negative with a positive budget"));
        }
        Ok(())
    }
}

/// Gain seeding the placement regularizers, which depend on the gain that is
/// only chosen afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlacementGain {
    /// Place once with `alpha_max`.
    #[default]
    AlphaMax,
    /// Place with `alpha_max`, solve the gain, then place and partition again with it.
    Repass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerOptions {
    pub weiszfeld: WeiszfeldOptions,
    pub placement_gain: PlacementGain,
    /// Fall back to a grid search when the closed-form placement is out of regime.
    pub grid_fallback: bool,
    pub theta_bar: f64,
    pub delta: f64,
    pub offsets: PowerOffsets,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        Self {
            weiszfeld: WeiszfeldOptions::default(),
            placement_gain: PlacementGain::default(),
            grid_fallback: false,
            theta_bar: 0.0,
            delta: 0.1,
            offsets: PowerOffsets::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaRule {
    Optimal,
    /// `alpha^2 = alpha*^2 * 10^(db / 10)`.
    DetunedDb(f64),
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub q: Vec2,
    pub placement: PlacementSolution,
    pub partition: Partition,
    pub theta: Vec<f64>,
    pub active: Vec<bool>,
    pub alpha: f64,
    pub alpha_star: Option<AlphaStar>,
    pub problem: PowerProblem,
    pub report: PowerReport,
}

impl Deployment {
    pub fn ris_position(&self, altitude: f64) -> Vec3 {
        self.q.with_z(altitude)
    }
}

pub fn placement_problem(scn: &Scenario, ris: &RisConfig, alpha: f64, delta: f64) -> PlacementProblem {
    let a2 = alpha * alpha;
    let n = ris.geometry.n as f64;
    PlacementProblem {
        uavs: scn.uavs.clone(),
        altitude: ris.geometry.altitude,
        omega_tilde_1: a2 * n * scn.source.m as f64 * scn.beta0 * scn.source.gain(),
        omega_tilde_2: a2 * (ris.sigma_a_sq / scn.sigma_sq) * n * scn.beta0,
        delta,
    }
}

pub fn power_problem(scn: &Scenario, ris: &RisConfig, q: Vec2, partition: &Partition) -> PowerProblem {
    let r = ris.geometry.position(q);
    PowerProblem {
        rates: scn.rates.clone(),
        d_m: scn.uavs.iter().map(|&u| r.dist(u)).collect(),
        g_m: partition.gains(ris.geometry.spacing_wavelengths),
        d_s: r.norm(),
        b_b: scn.b_b,
        g_s: scn.source.gain(),
        beta0: scn.beta0,
        m: scn.source.m,
        n: partition.active_elements(),
        sigma_sq: scn.sigma_sq,
        sigma_a_sq: ris.sigma_a_sq,
        p_e: ris.p_e,
        p_max: scn.source.p_max,
        p_max_a: ris.p_max_a,
        alpha_max: ris.alpha_max,
    }
}

struct Stage {
    placement: PlacementSolution,
    partition: Partition,
    problem: PowerProblem,
}

fn stage(scn: &Scenario, ris: &RisConfig, alpha: f64, opts: &PlannerOptions) -> Result<Stage> {
    let pp = placement_problem(scn, ris, alpha, opts.delta);
    let placement = consensus_placement(&pp, opts.weiszfeld, opts.grid_fallback)?;
    let partition = choose_partition(placement.q_star, &ris.geometry, &scn.uavs)?;
    let problem = power_problem(scn, ris, placement.q_star, &partition);
    Ok(Stage {
        placement,
        partition,
        problem,
    })
}

/// Plans a deployment for `scn` with gain chosen by `rule`.
pub fn plan(scn: &Scenario, ris: &RisConfig, rule: AlphaRule, opts: &PlannerOptions) -> Result<Deployment> {
    ris.validate()?;
    let mut st = stage(scn, ris, ris.alpha_max, opts)?;
    let mut star = match rule {
        AlphaRule::Fixed(_) => None,
        _ => Some(alpha_star(&st.problem)?),
    };
    if let (PlacementGain::Repass, Some(s)) = (opts.placement_gain, star) {
        st = stage(scn, ris, s.alpha, opts)?;
        star = Some(alpha_star(&st.problem)?);
    }
    let (alpha, clamped) = match (rule, star) {
        (AlphaRule::Optimal, Some(s)) => (s.alpha, s.clamped),
        (AlphaRule::DetunedDb(db), Some(s)) => (s.alpha * db_to_lin(db).sqrt(), false),
        (AlphaRule::Fixed(a), _) => (a, a >= ris.alpha_max && ris.alpha_max > 1.0),
        _ => unreachable!("gain rule always has a solved optimum unless fixed"),
    };
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain("amplification must be positive and finite"));
    }
    let (theta, active) = assemble_phases(st.placement.q_star, &ris.geometry, &st.partition, opts.theta_bar)?;
    let report = power::report(&st.problem, alpha, clamped, &opts.offsets)?;
    Ok(Deployment {
        q: st.placement.q_star,
        placement: st.placement,
        partition: st.partition,
        theta,
        active,
        alpha,
        alpha_star: star,
        problem: st.problem,
        report,
    })
}
