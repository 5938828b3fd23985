//! Acceptance criteria. Each criterion prints one PASS/FAIL line straight to
//! stdout (not captured by the harness); the test fails if any criterion does.

use std::f64::consts::TAU;
use std::io::Write;
use std::time::Instant;

use aeris_core::baseline::AfRelayConfig;
use aeris_core::channel::{LosChannel, RisGeometry, SourceArray};
use aeris_core::antenna::AntennaPattern;
use aeris_core::geometry::{Vec2, Vec3};
use aeris_core::partition::{assemble_phases, choose_partition};
use aeris_core::pipeline::{plan, AlphaRule};
use aeris_core::placement::{distance_sum, kappa, placement_cost, weiszfeld, weiszfeld_observed, WeiszfeldOptions};
use aeris_core::power::{alpha_star, decomposition, objective, sensitivity, transmit_powers, PowerProblem};
use aeris_core::ris::{beamforming_gain, hpbw, mrt_precoder, rate, snr_closed_form, snr_exact_subarray, ClosedForm};
use aeris_core::scenario::generate_scenario;
use aeris_core::units::{db_to_lin, dbm_to_w, w_to_dbm};
use aeris_sim::config::{ExperimentConfig, Method};
use aeris_sim::experiment::{run_experiment, run_experiment_threads, SweepResult};
use aeris_sim::output::write_rows_csv;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and limits.
const C1_INSTANCES: usize = 500;
const C1_GRID: usize = 100_000;
const C1_RUNTIME_S: f64 = 10.0;
const C2_INSTANCES: usize = 500;
const C2_GRID: usize = 10_000;
const C2_AM_GM_REL: f64 = 1e-9;
const C3_GEOMETRIES: usize = 1_000;
const C3_REL: f64 = 1e-9;
const C4_REL: f64 = 1e-9;
const C5_BAND: (f64, f64) = (0.45, 0.55);
const C6_MONOTONE_INSTANCES: usize = 200;
const C6_MONOTONE_REL: f64 = 1e-12;
const C6_GRID_INSTANCES: usize = 20;
const C6_GRID_STEP_M: f64 = 0.01;
const C6_GRID_TOL_M: f64 = 0.02;
const C7_SEEDS: usize = 100;
const C7_SUM_PM_DBM: f64 = 10.0;
const C7_MIN_BELOW: usize = 95;
const C7_RUNTIME_S: f64 = 60.0;
const C8_BAND_DB: (f64, f64) = (25.0, 40.0);
const C9_DELTA0_DB: f64 = -5.0;
const C9_REL: f64 = 1e-9;
const C10_CHAIN_DBM: f64 = 18.2;
const C10_CHAIN_TOL_DB: f64 = 0.05;
const C10_MIN_GAP_DB: f64 = 20.0;

// Reference electrical parameters.
const N: usize = 300;
const M: usize = 16;
const ALPHA_MAX_SQ: f64 = 1e4;
const BETA0_DB: f64 = -43.3;
const G_S_DB: f64 = 8.0;
const SIGMA_A_SQ_DBM: f64 = -80.0;
const SIGMA_SQ_DBM: f64 = -99.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, o: &Outcome) {
    let line = format!("{} criterion {id:>2}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

fn c1_placement_oracle() -> Outcome {
    let start = Instant::now();
    let beta0 = db_to_lin(BETA0_DB);
    let o1 = ALPHA_MAX_SQ * (N * M) as f64 * beta0 * db_to_lin(G_S_DB);
    let o2 = ALPHA_MAX_SQ * dbm_to_w(SIGMA_A_SQ_DBM) / dbm_to_w(SIGMA_SQ_DBM) * N as f64 * beta0;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let step = 0.5 / C1_GRID as f64;
    let (mut done, mut skipped, mut worst) = (0, 0, 0.0f64);
    while done < C1_INSTANCES {
        let h = rng.gen_range(150.0..=200.0);
        let w = rng.gen_range(800.0..=1600.0);
        let hm = rng.gen_range(30.0..=60.0);
        let (z1, z2, ob1, ob2) = (h / w, (h - hm) / w, o1 / (w * w), o2 / (w * w));
        let Ok(k) = kappa(z1, z2, ob1, ob2) else {
            skipped += 1;
            continue;
        };
        let f = |k: f64| placement_cost(k, z1, z2, ob1, ob2);
        let (mut best, mut best_v) = (0.0, f64::INFINITY);
        for i in 1..C1_GRID {
            let x = i as f64 * step;
            let v = f(x);
            if v < best_v {
                best = x;
                best_v = v;
            }
        }
        worst = worst.max((k - best).abs() / step);
        done += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1.0 && secs < C1_RUNTIME_S,
        detail: format!(
            "closed-form kappa vs {C1_GRID}-point grid on {C1_INSTANCES} instances: worst {worst:.3} grid steps (limit 1), {skipped} out-of-regime draws skipped, {secs:.2} s (limit {C1_RUNTIME_S} s)"
        ),
    }
}

fn random_power_problem(rng: &mut ChaCha8Rng) -> PowerProblem {
    let m0 = rng.gen_range(1..=6);
    PowerProblem {
        rates: (0..m0).map(|_| rng.gen_range(1e6..2e7)).collect(),
        d_m: (0..m0).map(|_| rng.gen_range(700.0..1700.0)).collect(),
        g_m: (0..m0).map(|_| rng.gen_range(0.5..1.0) * (N * N) as f64).collect(),
        d_s: rng.gen_range(150.0..260.0),
        b_b: 50e6,
        g_s: db_to_lin(G_S_DB),
        beta0: db_to_lin(BETA0_DB),
        m: M,
        n: N,
        sigma_sq: dbm_to_w(SIGMA_SQ_DBM),
        sigma_a_sq: dbm_to_w(SIGMA_A_SQ_DBM),
        p_e: dbm_to_w(-3.8),
        p_max: 0.1,
        p_max_a: 0.1,
        alpha_max: f64::INFINITY,
    }
}

fn c2_gain_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let (lo, hi) = (0.5f64, 5000.0f64);
    let ratio = (hi / lo).powf(1.0 / (C2_GRID - 1) as f64);
    let (mut worst_steps, mut worst_amgm) = (0.0f64, 0.0f64);
    for _ in 0..C2_INSTANCES {
        let p = random_power_problem(&mut rng);
        let star = alpha_star(&p).unwrap();
        let total = |a: f64| objective(&p, a, &transmit_powers(&p, a).unwrap());
        let best = (0..C2_GRID)
            .map(|i| lo * ratio.powi(i as i32))
            .min_by(|a, b| total(*a).total_cmp(&total(*b)))
            .unwrap();
        worst_steps = worst_steps.max((star.unclamped / best).ln().abs() / ratio.ln());
        let d = decomposition(&p, star.unclamped);
        worst_amgm = worst_amgm.max((d.quadratic - d.inverse).abs() / d.quadratic);
    }
    Outcome {
        pass: worst_steps <= 1.0 && worst_amgm <= C2_AM_GM_REL,
        detail: format!(
            "alpha* vs {C2_GRID}-point log grid on {C2_INSTANCES} instances: worst {worst_steps:.3} grid steps (limit 1); AM-GM term mismatch {worst_amgm:.2e} (limit {C2_AM_GM_REL:e})"
        ),
    }
}

fn c3_snr_dual_path() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let beta0 = db_to_lin(BETA0_DB);
    let source = SourceArray {
        m: M,
        spacing_wavelengths: 0.5,
        pattern: AntennaPattern::default(),
        p_max: 0.1,
    };
    let (mut worst, mut sub, mut links) = (0.0f64, 0, 0);
    for _ in 0..C3_GEOMETRIES {
        let ris = RisGeometry {
            n: rng.gen_range(20..=400),
            spacing_wavelengths: 0.1,
            altitude: rng.gen_range(120.0..220.0),
            wavelength: 299_792_458.0 / 3.5e9,
        };
        let q = Vec2::new(rng.gen_range(-50.0..150.0), rng.gen_range(-50.0..50.0));
        let uavs: Vec<Vec3> = (0..rng.gen_range(1..=6))
            .map(|_| Vec3::new(rng.gen_range(200.0..1600.0), rng.gen_range(-800.0..800.0), rng.gen_range(30.0..60.0)))
            .collect();
        let part = choose_partition(q, &ris, &uavs).unwrap();
        if part.l > 1 {
            sub += 1;
        }
        let (theta, active) = assemble_phases(q, &ris, &part, rng.gen_range(0.0..TAU)).unwrap();
        let alpha = rng.gen_range(1.0..100.0);
        let gains: Vec<f64> = active.iter().map(|&a| if a { alpha } else { 0.0 }).collect();
        let h_s = LosChannel::source_link(beta0, &source, &ris, q, rng.gen_range(0.0..TAU)).unwrap();
        let v = mrt_precoder(M, 0.5, h_s.sin_source.unwrap());
        let pos = ris.position(q);
        let g = part.gains(0.1);
        let (p, sa, s2) = (rng.gen_range(1e-4..1e-1), dbm_to_w(SIGMA_A_SQ_DBM), dbm_to_w(SIGMA_SQ_DBM));
        for (i, &u) in uavs.iter().enumerate() {
            let h_m = LosChannel::uav_link(beta0, &ris, q, u, rng.gen_range(0.0..TAU)).unwrap();
            let exact = snr_exact_subarray(&h_s, &h_m, &gains, &theta, &v, p, db_to_lin(G_S_DB), sa, s2, part.serving_range(i));
            let closed = snr_closed_form(&ClosedForm {
                p,
                g_s: db_to_lin(G_S_DB),
                m: M,
                beta0,
                d_s: pos.norm(),
                d_m: pos.dist(u),
                gain: g[i],
                alpha,
                n: part.active_elements(),
                sigma_a_sq: sa,
                sigma_sq: s2,
            });
            worst = worst.max((exact - closed).abs() / closed);
            links += 1;
        }
    }
    Outcome {
        pass: worst <= C3_REL,
        detail: format!(
            "matrix vs closed-form SNR on {C3_GEOMETRIES} geometries ({sub} with sub-arrays, {links} links): worst relative gap {worst:.2e} (limit {C3_REL:e})"
        ),
    }
}

fn c4_rate_matching() -> Outcome {
    let base = ExperimentConfig::default();
    let (mut worst, mut checked) = (0.0f64, 0);
    for d_g in [800.0, 1000.0, 1200.0] {
        let cfg = base.at(d_g);
        let ris = cfg.ris();
        let opts = cfg.planner();
        for seed in 0..C7_SEEDS as u64 {
            let scn = generate_scenario(&cfg.scenario(), seed).unwrap();
            for rule in [AlphaRule::Optimal, AlphaRule::DetunedDb(C9_DELTA0_DB), AlphaRule::Fixed(1.0)] {
                let d = plan(&scn, &ris, rule, &opts).unwrap();
                let p = &d.problem;
                for i in 0..scn.m0() {
                    let snr = snr_closed_form(&ClosedForm {
                        p: d.report.p_m[i],
                        g_s: p.g_s,
                        m: p.m,
                        beta0: p.beta0,
                        d_s: p.d_s,
                        d_m: p.d_m[i],
                        gain: p.g_m[i],
                        alpha: d.alpha,
                        n: p.n,
                        sigma_a_sq: p.sigma_a_sq,
                        sigma_sq: p.sigma_sq,
                    });
                    worst = worst.max((rate(p.b_b, scn.m0(), snr) - scn.rates[i]).abs() / scn.rates[i]);
                    checked += 1;
                }
            }
        }
    }
    Outcome {
        pass: worst <= C4_REL,
        detail: format!("R_m(P_m) vs C_m over {checked} UAV links: worst relative gap {worst:.2e} (limit {C4_REL:e})"),
    }
}

fn c5_gain_shape() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n_bar in [50usize, 150, 300] {
        let peak = (n_bar * n_bar) as f64;
        pass &= beamforming_gain(0.0, n_bar, 0.1) == peak;
        let at = beamforming_gain(hpbw(n_bar, 0.1), n_bar, 0.1) / peak;
        let half = beamforming_gain(0.5 * hpbw(n_bar, 0.1), n_bar, 0.1) / peak;
        pass &= (C5_BAND.0..=C5_BAND.1).contains(&at);
        parts.push(format!("n={n_bar}: g(hpbw)={at:.4} g(hpbw/2)={half:.4}"));
    }
    Outcome {
        pass,
        detail: format!(
            "g(0) = n^2 exactly; g(hpbw)/n^2 in [{}, {}]: {} (0.8858/(n d) is the full width, half power sits at its midpoint)",
            C5_BAND.0,
            C5_BAND.1,
            parts.join(", ")
        ),
    }
}

fn c6_weiszfeld() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut monotone = true;
    for _ in 0..C6_MONOTONE_INSTANCES {
        let k = rng.gen_range(1..=12);
        let pts: Vec<Vec2> = (0..k).map(|_| Vec2::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0))).collect();
        let mut last = f64::INFINITY;
        weiszfeld_observed(&pts, WeiszfeldOptions::default(), |_, _, obj| {
            monotone &= obj <= last * (1.0 + C6_MONOTONE_REL);
            last = obj;
        })
        .unwrap();
    }
    let mut worst = 0.0f64;
    let cells = (10.0 / C6_GRID_STEP_M).round() as usize;
    for _ in 0..C6_GRID_INSTANCES {
        let k = rng.gen_range(3..=8);
        let pts: Vec<Vec2> = (0..k).map(|_| Vec2::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
        let m = weiszfeld(&pts, WeiszfeldOptions::default()).unwrap();
        let mut best = (Vec2::ZERO, f64::INFINITY);
        for i in 0..=cells {
            for j in 0..=cells {
                let q = Vec2::new(i as f64 * C6_GRID_STEP_M, j as f64 * C6_GRID_STEP_M);
                let v = distance_sum(&pts, q);
                if v < best.1 {
                    best = (q, v);
                }
            }
        }
        worst = worst.max(m.point.dist(best.0));
    }
    Outcome {
        pass: monotone && worst <= C6_GRID_TOL_M,
        detail: format!(
            "objective non-increasing on {C6_MONOTONE_INSTANCES} instances: {monotone}; worst distance to {C6_GRID_STEP_M} m grid optimum on {C6_GRID_INSTANCES} instances {:.2} cm (limit {:.0} cm)",
            worst * 100.0,
            C6_GRID_TOL_M * 100.0
        ),
    }
}

fn sweep() -> SweepResult {
    run_experiment(&ExperimentConfig {
        seeds: C7_SEEDS,
        sweep_values: vec![800.0, 1000.0, 1200.0],
        delta0_db: C9_DELTA0_DB,
        ..ExperimentConfig::default()
    })
}

fn c7_feasibility() -> Outcome {
    let cfg = ExperimentConfig {
        seeds: C7_SEEDS,
        sweep_values: vec![1000.0],
        methods: vec![Method::Active],
        ..ExperimentConfig::default()
    };
    let start = Instant::now();
    let r = run_experiment(&cfg);
    let secs = start.elapsed().as_secs_f64();
    let rows: Vec<_> = r.rows_for(1000.0, Method::Active).collect();
    let src = rows.iter().filter(|r| r.feasible_src == Some(true)).count();
    let ris = rows.iter().filter(|r| r.feasible_ris == Some(true)).count();
    let both = rows.iter().filter(|r| r.feasible_src == Some(true) && r.feasible_ris == Some(true)).count();
    let below = rows.iter().filter(|r| r.sum_pm_w.is_some_and(|p| w_to_dbm(p) < C7_SUM_PM_DBM)).count();
    let n_pe = N as f64 * dbm_to_w(cfg.p_e_dbm);
    Outcome {
        pass: both == C7_SEEDS && below >= C7_MIN_BELOW && secs < C7_RUNTIME_S,
        detail: format!(
            "feasible {both}/{C7_SEEDS} (source {src}, RIS {ris}; N*P_E = {:.1} dBm alone exceeds the {} dBm RIS budget); sum P_m < {C7_SUM_PM_DBM} dBm in {below}/{C7_SEEDS} (need {C7_MIN_BELOW}); {secs:.2} s (limit {C7_RUNTIME_S} s)",
            w_to_dbm(n_pe),
            cfg.p_max_a_dbm
        ),
    }
}

fn gap(r: &SweepResult, v: f64, hi: Method, lo: Method) -> f64 {
    let a: Vec<f64> = r.rows_for(v, hi).map(|x| x.obj_dbm.unwrap()).collect();
    let b: Vec<f64> = r.rows_for(v, lo).map(|x| x.obj_dbm.unwrap()).collect();
    assert_eq!(a.len(), b.len());
    mean(a.iter().zip(&b).map(|(x, y)| x - y))
}

fn c8_passive_gain(r: &SweepResult) -> Outcome {
    let g: Vec<f64> = [800.0, 1000.0, 1200.0].iter().map(|&v| gap(r, v, Method::Passive, Method::Active)).collect();
    let in_band = (C8_BAND_DB.0..=C8_BAND_DB.1).contains(&g[1]);
    Outcome {
        pass: in_band && g[0] > g[2],
        detail: format!(
            "mean passive-minus-active gain {:.2} dB at 1000 m (band [{}, {}]); 800 m {:.2} dB > 1200 m {:.2} dB",
            g[1], C8_BAND_DB.0, C8_BAND_DB.1, g[0], g[2]
        ),
    }
}

fn c9_detuning(r: &SweepResult) -> Outcome {
    let g: Vec<f64> = [800.0, 1000.0, 1200.0].iter().map(|&v| gap(r, v, Method::Detuned, Method::Active)).collect();
    let cfg = ExperimentConfig::default();
    let eps = db_to_lin(C9_DELTA0_DB).sqrt().sqrt() - 1.0;
    // Defaults clamp the gain at alpha_max, where the log-ratio identity does
    // not apply; it is checked on the same deployment problems with the cap lifted.
    let (mut worst, mut checked, mut clamped) = (0.0f64, 0, 0);
    for d_g in [800.0, 1000.0, 1200.0] {
        let mut c = cfg.clone();
        c.d_g = d_g;
        for seed in 0..C7_SEEDS as u64 {
            let scn = generate_scenario(&c.scenario(), seed).unwrap();
            let d = plan(&scn, &c.ris(), AlphaRule::Optimal, &c.planner()).unwrap();
            clamped += usize::from(d.alpha_star.unwrap().clamped);
            let mut p = d.problem.clone();
            p.alpha_max = f64::INFINITY;
            let star = alpha_star(&p).unwrap();
            let s = sensitivity(&p, &star, eps).unwrap();
            worst = worst.max((s.closed_form - s.direct).abs() / s.direct.abs());
            checked += 1;
        }
    }
    Outcome {
        pass: g[0] > g[2] && worst <= C9_REL,
        detail: format!(
            "mean detuning gap 800 m {:.3} dB > 1200 m {:.3} dB (1000 m: {:.3} dB, informational); closed-form vs direct log-ratio on {checked} deployments ({clamped} clamped by default, checked uncapped): worst {worst:.2e} (limit {C9_REL:e})",
            g[0], g[2], g[1]
        ),
    }
}

fn c10_af(r: &SweepResult) -> Outcome {
    let chain = w_to_dbm(AfRelayConfig::default().chain_power());
    let g = gap(r, 1000.0, Method::Af, Method::Active);
    Outcome {
        pass: (chain - C10_CHAIN_DBM).abs() <= C10_CHAIN_TOL_DB && g >= C10_MIN_GAP_DB,
        detail: format!(
            "per-element chain {chain:.2} dBm (target {C10_CHAIN_DBM}); mean AF-minus-active total power {g:.2} dB at 1000 m (need >= {C10_MIN_GAP_DB})"
        ),
    }
}

fn csv_bytes(r: &SweepResult) -> Vec<u8> {
    let mut buf = Vec::new();
    write_rows_csv(&r.rows, &mut buf).unwrap();
    buf
}

fn c11_determinism() -> Outcome {
    let cfg = ExperimentConfig {
        seeds: 20,
        sweep_values: vec![800.0, 1200.0],
        ..ExperimentConfig::default()
    };
    let a = csv_bytes(&run_experiment_threads(&cfg, 4).unwrap());
    let b = csv_bytes(&run_experiment_threads(&cfg, 4).unwrap());
    let one = csv_bytes(&run_experiment_threads(&cfg, 1).unwrap());
    Outcome {
        pass: a == b && a == one,
        detail: format!(
            "CSV ({} bytes) identical across two runs: {}; 1 thread vs 4 threads: {}",
            a.len(),
            a == b,
            a == one
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let shared = sweep();
    let outcomes = [
        c1_placement_oracle(),
        c2_gain_oracle(),
        c3_snr_dual_path(),
        c4_rate_matching(),
        c5_gain_shape(),
        c6_weiszfeld(),
        c7_feasibility(),
        c8_passive_gain(&shared),
        c9_detuning(&shared),
        c10_af(&shared),
        c11_determinism(),
    ];
    let mut failed = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        report(i + 1, o);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
