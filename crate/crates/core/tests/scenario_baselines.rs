#![allow(clippy::needless_range_loop)]

use aeris_core::antenna::{antenna_gain, downward_angles, AntennaPattern};
use aeris_core::baseline::{
    af_baseline, af_snr, passive_baseline, relay_power_bisect, split_powers, split_powers_closed_form, AfPlacement,
    AfRelayConfig,
};
use aeris_core::geometry::Vec2;
use aeris_core::pipeline::{plan, AlphaRule, PlannerOptions, RisConfig};
use aeris_core::power::{transmit_powers, PowerOffsets};
use aeris_core::scenario::{cluster, generate_scenario, Scenario, ScenarioConfig};
use aeris_core::units::w_to_dbm;
use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scenario(seed: u64) -> Scenario {
    generate_scenario(&ScenarioConfig::default(), seed).unwrap()
}

#[test]
fn antenna_pattern_examples() {
    let p = AntennaPattern::default();
    assert_eq!(p.gain_db(90.0, 0.0).unwrap(), 8.0);
    // Half the vertical beamwidth off boresight costs 3 dB.
    assert_relative_eq!(p.gain_db(90.0 + 32.5, 0.0).unwrap(), 5.0, max_relative = 1e-14);
    assert_relative_eq!(p.gain_db(90.0, 32.5).unwrap(), 5.0, max_relative = 1e-14);
    // Total attenuation is capped.
    assert_eq!(p.gain_db(0.0, 179.0).unwrap(), 8.0 - 30.0);
    assert_relative_eq!(antenna_gain(90.0, 0.0, &p).unwrap(), 10f64.powf(0.8), max_relative = 1e-14);
    assert!(p.gain_db(181.0, 0.0).is_err());
    assert!(p.gain_db(90.0, 180.0).is_err());
    assert_eq!(downward_angles(0.0, 0.0, 45.0), (90.0, 0.0));
    let (t, f) = downward_angles(45.0, -45.0, 45.0);
    assert_relative_eq!(t, 135.0, max_relative = 1e-14);
    assert_relative_eq!(f, -45.0, max_relative = 1e-14);
}

proptest! {
    #[test]
    fn antenna_pattern_even_about_boresight(dt in 0.0f64..90.0, phi in 0.0f64..179.0) {
        let p = AntennaPattern::default();
        let g = p.gain_db(90.0 + dt, phi).unwrap();
        prop_assert!((g - p.gain_db(90.0 - dt, phi).unwrap()).abs() < 1e-12);
        prop_assert_eq!(g, p.gain_db(90.0 + dt, -phi).unwrap());
        prop_assert!((-22.0..=8.0).contains(&g));
    }
}

#[test]
fn scenarios_are_deterministic() {
    assert_eq!(scenario(4), scenario(4));
    assert_ne!(scenario(4).users, scenario(5).users);
}

#[test]
fn seed_one_layout_is_sane() {
    let s = scenario(1);
    assert_eq!(s.users.len(), 1000);
    assert_eq!(s.m0(), 6);
    assert!(s.rates.iter().all(|c| c.is_finite() && *c > 0.0));
    for u in &s.users {
        assert!((u.x - 1000.0).abs() <= 250.0 && u.y.abs() <= 250.0);
    }
    assert!(s.uavs.iter().all(|u| u.z == 45.0));
    let total: usize = s.cells.iter().map(Vec::len).sum();
    assert_eq!(total, 1000);
}

#[test]
fn one_user_per_cell_puts_uav_overhead() {
    let cfg = ScenarioConfig {
        n0: 5,
        m0: 5,
        ..ScenarioConfig::default()
    };
    let s = generate_scenario(&cfg, 9).unwrap();
    for (cell, uav) in s.cells.iter().zip(&s.uavs) {
        assert_eq!(cell.len(), 1);
        assert_eq!(uav.xy(), s.users[cell[0]]);
    }
}

#[test]
fn clustering_is_a_lloyd_fixed_point() {
    let s = scenario(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (centroids, labels) = cluster(&s.users, 6, 300, &mut rng).unwrap();
    for (p, &l) in s.users.iter().zip(&labels) {
        let d = p.dist(centroids[l]);
        assert!(centroids.iter().all(|c| d <= p.dist(*c) + 1e-9));
    }
    for (j, c) in centroids.iter().enumerate() {
        let members: Vec<Vec2> = s.users.iter().zip(&labels).filter(|(_, &l)| l == j).map(|(p, _)| *p).collect();
        assert!(!members.is_empty());
        let mean = members.iter().fold(Vec2::ZERO, |a, p| a + *p) * (1.0 / members.len() as f64);
        assert!(mean.dist(*c) < 1e-9);
    }
    assert!(cluster(&s.users[..3], 4, 10, &mut rng).is_err());
}

#[test]
fn plan_is_invariant_to_uav_order() {
    let s = scenario(3);
    let mut perm = s.clone();
    let order = [4, 2, 0, 5, 1, 3];
    perm.uavs = order.iter().map(|&i| s.uavs[i]).collect();
    perm.rates = order.iter().map(|&i| s.rates[i]).collect();
    perm.cells = order.iter().map(|&i| s.cells[i].clone()).collect();
    let ris = RisConfig::default();
    let opts = PlannerOptions::default();
    let a = plan(&s, &ris, AlphaRule::Optimal, &opts).unwrap();
    let b = plan(&perm, &ris, AlphaRule::Optimal, &opts).unwrap();
    assert_relative_eq!(a.report.obj, b.report.obj, max_relative = 1e-9);
    assert!(a.q.dist(b.q) < 1e-6);
    for (k, &i) in order.iter().enumerate() {
        assert_relative_eq!(a.report.p_m[i], b.report.p_m[k], max_relative = 1e-9);
    }
}

#[test]
fn passive_powers_follow_direct_formula() {
    let s = scenario(6);
    let d = passive_baseline(&s, &RisConfig::default(), &PlannerOptions::default()).unwrap();
    let p = &d.problem;
    let gammas = p.gammas();
    for i in 0..s.m0() {
        let want = gammas[i] * p.sigma_sq * p.d_s * p.d_s * p.d_m[i] * p.d_m[i]
            / (p.g_s * p.beta0 * p.beta0 * p.m as f64 * p.g_m[i]);
        assert_relative_eq!(d.report.p_m[i], want, max_relative = 1e-12);
    }
    assert_eq!(d.report.obj, d.report.sum_pm);
    assert_eq!(d.report.p_tot_a, 0.0);
    assert_eq!(d.alpha, 1.0);
}

#[test]
fn doubling_array_gain_halves_passive_power() {
    let s = scenario(6);
    let d = passive_baseline(&s, &RisConfig::default(), &PlannerOptions::default()).unwrap();
    let mut p = d.problem.clone();
    let base = transmit_powers(&p, 1.0).unwrap();
    p.g_m.iter_mut().for_each(|g| *g *= 2.0);
    for (x, y) in base.iter().zip(transmit_powers(&p, 1.0).unwrap()) {
        assert_relative_eq!(y, x / 2.0, max_relative = 1e-14);
    }
}

#[test]
fn active_beats_passive() {
    let ris = RisConfig::default();
    let opts = PlannerOptions::default();
    for seed in 0..8 {
        let s = scenario(seed);
        let a = plan(&s, &ris, AlphaRule::Optimal, &opts).unwrap();
        let p = passive_baseline(&s, &ris, &opts).unwrap();
        assert!(a.report.obj <= p.report.obj, "seed {seed}");
        assert!(a.report.eta > p.report.eta, "seed {seed}");
    }
}

#[test]
fn af_chain_power_example() {
    let cfg = AfRelayConfig::default();
    // 33.27 + 30.3 + 2.5 = 66.07 mW.
    assert_relative_eq!(w_to_dbm(cfg.chain_power()), 18.2, epsilon = 0.005);
    assert_relative_eq!(cfg.circuit_power(), 16.0 * 66.07e-3 + 50e-3, max_relative = 1e-12);
}

#[test]
fn af_split_matches_closed_form() {
    for &(gamma, a, b) in &[(1.0, 1e3, 2e3), (31.0, 5e4, 1e3), (0.2, 10.0, 10.0), (255.0, 1e7, 3e6)] {
        let (ps, pr) = split_powers(gamma, a, b);
        let (cs, cr) = split_powers_closed_form(gamma, a, b);
        assert_relative_eq!(ps + pr, cs + cr, max_relative = 1e-9);
        assert_relative_eq!(ps, cs, max_relative = 1e-4);
        assert_relative_eq!(af_snr(a * cs, b * cr), gamma, max_relative = 1e-12);
    }
    assert_eq!(split_powers(0.0, 1.0, 1.0), (0.0, 0.0));
}

#[test]
fn af_perfect_second_hop_limit() {
    let (ps, pr) = split_powers_closed_form(7.0, 100.0, 1e15);
    assert_relative_eq!(ps, 0.07, max_relative = 1e-6);
    // Relay power vanishes as b^(-1/2).
    let (_, pr4) = split_powers_closed_form(7.0, 100.0, 1e17);
    assert!(pr < 1e-7);
    assert_relative_eq!(pr / pr4, 10.0, max_relative = 1e-6);
    assert!(relay_power_bisect(7.0, 7.0, 1.0).is_none());
    let pr = relay_power_bisect(7.0, 20.0, 3.0).unwrap();
    assert_relative_eq!(af_snr(20.0, 3.0 * pr), 7.0, max_relative = 1e-12);
}

#[test]
fn af_baseline_meets_rates_and_search_improves() {
    let s = scenario(0);
    let mid = af_baseline(&s, &AfRelayConfig::default(), &PowerOffsets::default()).unwrap();
    assert_relative_eq!(mid.relay.xy().norm() * 2.0, {
        let c = s.uavs.iter().fold(Vec2::ZERO, |a, u| a + u.xy()) * (1.0 / 6.0);
        c.norm()
    }, max_relative = 1e-12);
    assert_relative_eq!(mid.obj, mid.sum_ps + mid.sum_pr + mid.p_circ, max_relative = 1e-14);
    let search = AfRelayConfig {
        placement: AfPlacement::Search,
        ..AfRelayConfig::default()
    };
    let best = af_baseline(&s, &search, &PowerOffsets::default()).unwrap();
    assert!(best.obj <= mid.obj * (1.0 + 1e-12));
}
