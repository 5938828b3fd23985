//! Benchmarks: the same surface without amplifiers, and a two-hop AF relay.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::pipeline::{plan, AlphaRule, Deployment, PlannerOptions, RisConfig};
use crate::placement::golden_section;
use crate::power::{energy_efficiency, PowerOffsets};
use crate::ris::required_snr;
use crate::scenario::Scenario;
use crate::units::dbm_to_w;

/// Passive-RIS benchmark through the active planner at unit gain with no
/// amplifier noise or element draw. Its objective is `sum P_m` alone.
pub fn passive_baseline(scn: &Scenario, ris: &RisConfig, opts: &PlannerOptions) -> Result<Deployment> {
    let mut d = plan(scn, &ris.passive(), AlphaRule::Fixed(1.0), opts)?;
    let r = &mut d.report;
    r.obj = r.sum_pm;
    r.p_r = 0.0;
    r.p_tot_a = 0.0;
    r.feasible_ris = true;
    r.eta = energy_efficiency(r, &opts.offsets, &scn.rates)?;
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AfPlacement {
    /// Halfway between the source and the UAV centroid.
    Midpoint,
    /// Fixed ground distance from the source along the source-centroid axis, m.
    Distance(f64),
    /// Best position on that axis by grid search.
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfRelayConfig {
    pub elements: usize,
    pub p_dac: f64,
    pub p_mix: f64,
    pub p_filt: f64,
    pub p_syn: f64,
    pub altitude: f64,
    pub placement: AfPlacement,
    /// Relay transmit budget, W.
    pub p_relay_max: f64,
}

impl Default for AfRelayConfig {
    fn default() -> Self {
        Self {
            elements: 16,
            p_dac: 33.27e-3,
            p_mix: 30.3e-3,
            p_filt: 2.5e-3,
            p_syn: 50e-3,
            altitude: 180.0,
            placement: AfPlacement::Midpoint,
            p_relay_max: dbm_to_w(30.0),
        }
    }
}

impl AfRelayConfig {
    pub fn validate(&self) -> Result<()> {
        if self.elements == 0 {
            return Err(Error::Domain("AF relay needs at least one element"));
        }
        let parts = [self.p_dac, self.p_mix, self.p_filt, self.p_syn];
        if parts.iter().any(|&p| !(p >= 0.0)) || !(self.p_relay_max > 0.0) || !(self.altitude > 0.0) {
            return Err(Error::Domain("AF relay powers must be non-negative"));
        }
        if let AfPlacement::Distance(d) = self.placement {
            if !(d >= 0.0) {
                return Err(Error::Domain("AF relay distance must be non-negative"));
            }
        }
        Ok(())
    }

    /// Per-element RF chain draw `P_DAC + P_mix + P_filt`.
    pub fn chain_power(&self) -> f64 {
        self.p_dac + self.p_mix + self.p_filt
    }

    /// `N (P_DAC + P_mix + P_filt) + P_syn`.
    pub fn circuit_power(&self) -> f64 {
        self.elements as f64 * self.chain_power() + self.p_syn
    }
}

/// End-to-end SNR of variable-gain AF.
pub fn af_snr(gamma1: f64, gamma2: f64) -> f64 {
    gamma1 * gamma2 / (gamma1 + gamma2 + 1.0)
}

/// Relay power reaching `gamma` with first-hop SNR `gamma1`, where the
/// second-hop SNR is `b * P_r`. `None` when `gamma1 <= gamma` (unreachable).
pub fn relay_power_bisect(gamma: f64, gamma1: f64, b: f64) -> Option<f64> {
    if gamma <= 0.0 {
        return Some(0.0);
    }
    if !(gamma1 > gamma) {
        return None;
    }
    let mut hi = gamma / b;
    while af_snr(gamma1, b * hi) < gamma {
        hi *= 2.0;
        if !hi.is_finite() {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if af_snr(gamma1, b * mid) < gamma {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= hi * 1e-15 {
            break;
        }
    }
    Some(hi)
}

/// Source and relay powers `(P_s, P_r)` minimizing their sum at target SNR
/// `gamma`, with hop SNRs `a P_s` and `b P_r`. Golden-section over the
/// first-hop excess `ln(a P_s - gamma)`; the relay power comes from bisection.
pub fn split_powers(gamma: f64, a: f64, b: f64) -> (f64, f64) {
    if gamma <= 0.0 {
        return (0.0, 0.0);
    }
    let cost = |t: f64| {
        let g1 = gamma + t.exp();
        let pr = relay_power_bisect(gamma, g1, b).unwrap_or(f64::INFINITY);
        g1 / a + pr
    };
    let scale = (gamma + 1.0).ln();
    let t = golden_section(cost, scale - 30.0, scale + 30.0, 1e-10);
    let g1 = gamma + t.exp();
    (g1 / a, relay_power_bisect(gamma, g1, b).unwrap_or(f64::INFINITY))
}

/// Closed-form optimum of [`split_powers`]: first-hop excess `sqrt(a G (G+1) / b)`.
pub fn split_powers_closed_form(gamma: f64, a: f64, b: f64) -> (f64, f64) {
    let u = (a * gamma * (gamma + 1.0) / b).sqrt();
    ((gamma + u) / a, (gamma + gamma * (gamma + 1.0) / u) / b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AfReport {
    pub relay: Vec3,
    pub p_s: Vec<f64>,
    pub p_r: Vec<f64>,
    pub sum_ps: f64,
    pub sum_pr: f64,
    pub p_circ: f64,
    /// `sum P_s + sum P_r + P_circ`.
    pub obj: f64,
    pub eta: f64,
    pub feasible_source: bool,
    pub feasible_relay: bool,
}

fn af_at(scn: &Scenario, cfg: &AfRelayConfig, relay: Vec3, offsets: &PowerOffsets) -> Result<AfReport> {
    let n = cfg.elements as f64;
    let g_s = scn.source.gain();
    let d1 = relay.norm();
    let a = g_s * scn.source.m as f64 * n * scn.beta0 / (d1 * d1) / scn.sigma_sq;
    let mut p_s = Vec::with_capacity(scn.m0());
    let mut p_r = Vec::with_capacity(scn.m0());
    for (i, (&c, &u)) in scn.rates.iter().zip(&scn.uavs).enumerate() {
        let d2 = relay.dist(u);
        if !(d2 > 0.0) {
            return Err(Error::Domain("AF relay coincides with a UAV").at_uav(i));
        }
        let b = n * scn.beta0 / (d2 * d2) / scn.sigma_sq;
        let (ps, pr) = split_powers(required_snr(scn.b_b, scn.m0(), c), a, b);
        p_s.push(ps);
        p_r.push(pr);
    }
    let sum_ps: f64 = p_s.iter().sum();
    let sum_pr: f64 = p_r.iter().sum();
    let p_circ = cfg.circuit_power();
    let obj = sum_ps + sum_pr + p_circ;
    let den = obj + offsets.total();
    if !(den > 0.0) {
        return Err(Error::Domain("AF energy efficiency needs positive consumed power"));
    }
    Ok(AfReport {
        relay,
        eta: scn.rates.iter().sum::<f64>() / den,
        feasible_source: g_s * sum_ps <= scn.source.p_max,
        feasible_relay: sum_pr <= cfg.p_relay_max,
        p_s,
        p_r,
        sum_ps,
        sum_pr,
        p_circ,
        obj,
    })
}

/// AF-relay benchmark: relay at `cfg.altitude` on the source-centroid axis.
pub fn af_baseline(scn: &Scenario, cfg: &AfRelayConfig, offsets: &PowerOffsets) -> Result<AfReport> {
    cfg.validate()?;
    if scn.uavs.is_empty() {
        return Err(Error::Domain("AF baseline needs at least one UAV"));
    }
    let inv = 1.0 / scn.m0() as f64;
    let centroid = scn.uavs.iter().fold(Vec2::ZERO, |acc, u| acc + u.xy()) * inv;
    let span = centroid.norm();
    if !(span > 0.0) {
        return Err(Error::Domain("UAV centroid coincides with the source"));
    }
    let dir = centroid * (1.0 / span);
    let at = |d: f64| (dir * d).with_z(cfg.altitude);
    match cfg.placement {
        AfPlacement::Midpoint => af_at(scn, cfg, at(0.5 * span), offsets),
        AfPlacement::Distance(d) => af_at(scn, cfg, at(d), offsets),
        AfPlacement::Search => {
            const STEPS: usize = 100;
            let mut best: Option<AfReport> = None;
            for k in 1..STEPS {
                let r = af_at(scn, cfg, at(span * k as f64 / STEPS as f64), offsets)?;
                if best.as_ref().is_none_or(|b| r.obj < b.obj) {
                    best = Some(r);
                }
            }
            Ok(best.expect("search visits at least one position"))
        }
    }
}
