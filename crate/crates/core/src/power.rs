//! Amplification gain, transmit powers, total-power objective, budget
//! certificates and gain sensitivity.
//!
//! With `G_m = 2^(M0 C_m / B_b) - 1` and
//! `O0_m = sigma^2 G_m / (G_s beta0^2 M g_m)`, `O1 = N M beta0 G_s`,
//! `O2 = (sigma_a^2 / sigma^2) N beta0`, the objective is
//! `A alpha^2 + B / alpha^2 + C` where
//! `A = N sigma_a^2 + sum O0 O1 O2`, `B = sum O0 d_s^2 d_m^2` and
//! `C = sum O0 (d_s^2 O2 + d_m^2 O1) + N P_E`. The minimizer is `(B/A)^(1/4)`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::ris::required_snr;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerProblem {
    /// Per-UAV target rates, bit/s.
    pub rates: Vec<f64>,
    /// Per-UAV RIS-to-UAV distances, m.
    pub d_m: Vec<f64>,
    /// Per-UAV array gains.
    pub g_m: Vec<f64>,
    /// Source-to-RIS distance, m.
    pub d_s: f64,
    pub b_b: f64,
    pub g_s: f64,
    pub beta0: f64,
    pub m: usize,
    /// Amplifying elements.
    pub n: usize,
    pub sigma_sq: f64,
    pub sigma_a_sq: f64,
    pub p_e: f64,
    pub p_max: f64,
    pub p_max_a: f64,
    pub alpha_max: f64,
}

impl PowerProblem {
    pub fn validate(&self) -> Result<()> {
        let k = self.rates.len();
        if k == 0 || self.d_m.len() != k || self.g_m.len() != k {
            return Err(Error::Domain("per-UAV inputs must be non-empty and equal length"));
        }
        if self.rates.iter().any(|&c| !(c >= 0.0)) {
            return Err(Error::Domain("rates must be non-negative"));
        }
        if self.d_m.iter().any(|&d| !(d > 0.0)) || !(self.d_s > 0.0) {
            return Err(Error::Domain("distances must be positive"));
        }
        if let Some(i) = self.g_m.iter().position(|&g| !(g > 0.0)) {
            return Err(Error::Unreachable { index: i });
        }
        if !(self.sigma_sq > 0.0) || self.sigma_a_sq < 0.0 || self.p_e < 0.0 {
            return Err(Error::Domain("noise powers must be positive (receiver) and non-negative (RIS)"));
        }
        if !(self.p_max > 0.0 && self.p_max_a > 0.0 && self.alpha_max > 0.0) {
            return Err(Error::Domain("budgets and alpha_max must be positive"));
        }
        if self.m == 0 || self.n == 0 || !(self.b_b > 0.0 && self.g_s > 0.0 && self.beta0 > 0.0) {
            return Err(Error::Domain("array sizes, bandwidth and gains must be positive"));
        }
        Ok(())
    }

    pub fn m0(&self) -> usize {
        self.rates.len()
    }

    pub fn beta_s(&self) -> f64 {
        self.beta0 / (self.d_s * self.d_s)
    }

    /// Required SNR per UAV.
    pub fn gammas(&self) -> Vec<f64> {
        self.rates.iter().map(|&c| required_snr(self.b_b, self.m0(), c)).collect()
    }

    fn omega0(&self, gamma: f64, g: f64) -> f64 {
        self.sigma_sq * gamma / (self.g_s * self.beta0 * self.beta0 * self.m as f64 * g)
    }

    pub fn omega1(&self) -> f64 {
        self.n as f64 * self.m as f64 * self.beta0 * self.g_s
    }

    pub fn omega2(&self) -> f64 {
        self.sigma_a_sq / self.sigma_sq * self.n as f64 * self.beta0
    }

    /// `(A, B, C)` with `C` including the hardware term.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let (o1, o2) = (self.omega1(), self.omega2());
        let ds2 = self.d_s * self.d_s;
        let n = self.n as f64;
        let mut a = n * self.sigma_a_sq;
        let mut b = 0.0;
        let mut c = n * self.p_e;
        for ((gamma, &dm), &g) in self.gammas().into_iter().zip(&self.d_m).zip(&self.g_m) {
            let o0 = self.omega0(gamma, g);
            let dm2 = dm * dm;
            a += o0 * o1 * o2;
            b += o0 * ds2 * dm2;
            c += o0 * (ds2 * o2 + dm2 * o1);
        }
        (a, b, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStar {
    pub alpha: f64,
    /// Fourth-root minimizer before the clamp.
    pub unclamped: f64,
    pub clamped: bool,
}

pub fn alpha_star(p: &PowerProblem) -> Result<AlphaStar> {
    p.validate()?;
    let (a, b, _) = p.coefficients();
    if !(a > 0.0) {
        return Err(Error::Domain("alpha objective has no quadratic term"));
    }
    let unclamped = (b / a).sqrt().sqrt();
    Ok(AlphaStar {
        alpha: unclamped.min(p.alpha_max),
        unclamped,
        clamped: unclamped > p.alpha_max,
    })
}

/// Rate-matching transmit powers at gain `alpha`.
pub fn transmit_powers(p: &PowerProblem, alpha: f64) -> Result<Vec<f64>> {
    p.validate()?;
    if !(alpha > 0.0) {
        return Err(Error::Domain("amplification must be positive"));
    }
    let a2 = alpha * alpha;
    let ds2 = p.d_s * p.d_s;
    let scale = p.g_s * p.beta0 * p.beta0 * p.m as f64;
    Ok(p.gammas()
        .into_iter()
        .zip(&p.d_m)
        .zip(&p.g_m)
        .map(|((gamma, &dm), &g)| {
            let dm2 = dm * dm;
            gamma * (p.sigma_sq / a2 + p.sigma_a_sq * p.n as f64 * p.beta0 / dm2) * dm2 * ds2 / (scale * g)
        })
        .collect())
}

/// Total power `(1 + alpha^2 N M beta_s G_s) sum P_m + alpha^2 N sigma_a^2 + N P_E`.
pub fn objective(p: &PowerProblem, alpha: f64, powers: &[f64]) -> f64 {
    let a2 = alpha * alpha;
    let n = p.n as f64;
    let sum: f64 = powers.iter().sum();
    (1.0 + a2 * n * p.m as f64 * p.beta_s() * p.g_s) * sum + a2 * n * p.sigma_a_sq + n * p.p_e
}

/// Objective split into its `alpha^2`, `alpha^-2` and constant parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub quadratic: f64,
    pub inverse: f64,
    pub constant: f64,
}

impl Decomposition {
    pub fn total(&self) -> f64 {
        self.quadratic + self.inverse + self.constant
    }
}

pub fn decomposition(p: &PowerProblem, alpha: f64) -> Decomposition {
    let (a, b, c) = p.coefficients();
    let a2 = alpha * alpha;
    Decomposition {
        quadratic: a * a2,
        inverse: b / a2,
        constant: c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub source: bool,
    pub ris: bool,
    /// `P_max - G_s sum P_m`, W.
    pub source_margin: f64,
    /// `P_max_a - P_tot_a`, W.
    pub ris_margin: f64,
}

/// Budget certificates evaluated from problem data alone, independent of any
/// power vector.
pub fn feasibility(p: &PowerProblem, alpha: f64) -> Feasibility {
    let a2 = alpha * alpha;
    let n = p.n as f64;
    let ds2 = p.d_s * p.d_s;
    let b02 = p.beta0 * p.beta0;
    let (mut s_d, mut s_g) = (0.0, 0.0);
    for ((gamma, &dm), &g) in p.gammas().into_iter().zip(&p.d_m).zip(&p.g_m) {
        s_d += gamma * dm * dm / g;
        s_g += gamma / g;
    }
    let source_lhs = ds2 / (b02 * p.m as f64) * (p.sigma_sq * s_d / a2 + p.sigma_a_sq * n * p.beta0 * s_g);
    let ris_lhs = n * p.p_e
        + a2 * n * p.sigma_a_sq
        + n * p.beta_s() * (ds2 / b02) * (p.sigma_sq * s_d + a2 * p.sigma_a_sq * n * p.beta0 * s_g);
    let source_margin = p.p_max - source_lhs;
    let ris_margin = p.p_max_a - ris_lhs;
    Feasibility {
        source: source_margin >= 0.0,
        ris: ris_margin >= 0.0,
        source_margin,
        ris_margin,
    }
}

/// Largest `sum P_m` both budgets allow at gain `alpha`.
pub fn sum_power_bound(p: &PowerProblem, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let n = p.n as f64;
    let ris = (p.p_max_a - n * p.p_e - a2 * n * p.sigma_a_sq) / (a2 * p.g_s * n * p.m as f64 * p.beta_s());
    (p.p_max / p.g_s).min(ris)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivity {
    pub closed_form: f64,
    pub direct: f64,
}

/// Log-objective change when the gain moves from `alpha*` to `alpha*(1 + eps)`.
pub fn sensitivity(p: &PowerProblem, star: &AlphaStar, epsilon: f64) -> Result<Sensitivity> {
    if star.clamped {
        return Err(Error::SensitivityUndefined);
    }
    if !(epsilon > -1.0) {
        return Err(Error::Domain("epsilon must exceed -1"));
    }
    let (a, b, c) = p.coefficients();
    let root = (a * b).sqrt();
    let s = (1.0 + epsilon) * (1.0 + epsilon);
    let closed_form = ((root * (s + 1.0 / s) + c) / (2.0 * root + c)).ln();
    let at = |alpha: f64| objective(p, alpha, &transmit_powers(p, alpha).expect("validated"));
    let direct = at(star.alpha * (1.0 + epsilon)).ln() - at(star.alpha).ln();
    Ok(Sensitivity { closed_form, direct })
}

/// The budget with the smaller relative margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Binding {
    Source,
    Ris,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub alpha: f64,
    pub clamped: bool,
    pub p_m: Vec<f64>,
    pub sum_pm: f64,
    /// Radiated source power `G_s sum P_m`.
    pub p_tot_s: f64,
    pub p_r: f64,
    pub p_tot_a: f64,
    pub obj: f64,
    pub eta: f64,
    pub feasible_source: bool,
    pub feasible_ris: bool,
    pub binding: Binding,
}

/// Constant draws outside the optimized link.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PowerOffsets {
    pub p_gbs: f64,
    pub p_ap: f64,
    pub p_uav: Vec<f64>,
}

impl PowerOffsets {
    pub fn total(&self) -> f64 {
        self.p_gbs + self.p_ap + self.p_uav.iter().sum::<f64>()
    }
}

/// Bits per joule: `sum C_m / (sum (P_m + P_uav,m) + P_tot_a + P_gBS + P_AP)`.
pub fn energy_efficiency(report: &PowerReport, offsets: &PowerOffsets, rates: &[f64]) -> Result<f64> {
    if offsets.p_gbs < 0.0 || offsets.p_ap < 0.0 || offsets.p_uav.iter().any(|&x| x < 0.0) {
        return Err(Error::Domain("power offsets must be non-negative"));
    }
    let den = report.sum_pm + report.p_tot_a + offsets.total();
    if !(den > 0.0) {
        return Err(Error::Domain("energy efficiency needs positive consumed power"));
    }
    Ok(rates.iter().sum::<f64>() / den)
}

/// Powers, objective and certificates at a chosen gain.
pub fn report(p: &PowerProblem, alpha: f64, clamped: bool, offsets: &PowerOffsets) -> Result<PowerReport> {
    let p_m = transmit_powers(p, alpha)?;
    let sum_pm: f64 = p_m.iter().sum();
    let (p_r, p_tot_a) = crate::ris::active_power(alpha, p.n, p.m, p.beta_s(), p.g_s, sum_pm, p.sigma_a_sq, p.p_e);
    let f = feasibility(p, alpha);
    let binding = if f.source_margin / p.p_max <= f.ris_margin / p.p_max_a {
        Binding::Source
    } else {
        Binding::Ris
    };
    let mut r = PowerReport {
        alpha,
        clamped,
        obj: objective(p, alpha, &p_m),
        p_tot_s: p.g_s * sum_pm,
        p_m,
        sum_pm,
        p_r,
        p_tot_a,
        eta: 0.0,
        feasible_source: f.source,
        feasible_ris: f.ris,
        binding,
    };
    r.eta = energy_efficiency(&r, offsets, &p.rates)?;
    Ok(r)
}
