//! Active-RIS electrical model: precoding, phase alignment, SNR and power draw.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::ops::Range;

use num_complex::Complex64;
use num_traits::{Euclid, Float};

use crate::channel::{LosChannel, RisGeometry};
use crate::error::{Error, Result};
use crate::geometry::{array_response, sin_between, Vec2, Vec3};

/// Half-power width constant of a uniform array factor, in units of `1/(n d)`.
pub const HPBW_CONSTANT: f64 = 0.8858;

/// Below this `|sin(pi d dphi)|` the array factor takes its limit `n^2`.
const SINGULAR_EPS: f64 = 1e-12;

/// Electrical state of the surface. Equal gain is the deployed representation.
#[derive(Debug, Clone, PartialEq)]
pub struct RisElectrical {
    pub alpha: f64,
    pub alpha_max: f64,
    pub theta: Vec<f64>,
    pub sigma_a_sq: f64,
    pub p_e: f64,
    pub p_max_a: f64,
}

impl RisElectrical {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha <= self.alpha_max) {
            return Err(Error::Domain("amplification must satisfy 1 < alpha <= alpha_max"));
        }
        if self.sigma_a_sq < 0.0 || self.p_e < 0.0 || self.p_max_a < 0.0 {
            return Err(Error::Domain("RIS powers must be non-negative"));
        }
        Ok(())
    }
}

/// Rate in bit/s for FDMA share `b_b / m0`.
pub fn rate(b_b: f64, m0: usize, snr: f64) -> f64 {
    b_b / m0 as f64 * (1.0 + snr).log2()
}

/// SNR needed to carry `rate` on an FDMA share `b_b / m0`.
pub fn required_snr(b_b: f64, m0: usize, rate: f64) -> f64 {
    (m0 as f64 * rate / b_b).exp2() - 1.0
}

/// MRT precoder `a_s / sqrt(M)`.
pub fn mrt_precoder(m: usize, spacing_wavelengths: f64, sin_aod_source: f64) -> Vec<Complex64> {
    let norm = 1.0 / (m as f64).sqrt();
    array_response(m, spacing_wavelengths, sin_aod_source)
        .into_iter()
        .map(|a| a * norm)
        .collect()
}

/// Phases that steer the source's incident wave toward `align_point`, for
/// elements in `range` with local indexing from the start of the range.
pub fn phase_shifts(
    q: Vec2,
    ris: &RisGeometry,
    align_point: Vec3,
    range: Range<usize>,
    theta_bar: f64,
) -> Result<Vec<f64>> {
    let r = ris.position(q);
    let sin_t = sin_between(r, align_point)?;
    let sin_r = sin_between(r, Vec3::ZERO)?;
    Ok(phase_ramp(range.len(), ris.spacing_wavelengths, sin_t - sin_r, theta_bar))
}

pub(crate) fn phase_ramp(len: usize, spacing: f64, delta_sin: f64, theta_bar: f64) -> Vec<f64> {
    (0..len)
        .map(|k| {
            let t = Euclid::rem_euclid(&(theta_bar - TAU * k as f64 * spacing * delta_sin), &TAU);
            // A tiny negative input can round up to exactly TAU.
            if t >= TAU {
                0.0
            } else {
                t
            }
        })
        .collect()
}

/// `||A Theta^H h||^2` formed with the phase matrix in place.
pub fn amplified_noise_gain(gains: &[f64], theta: &[f64], uav: &LosChannel) -> f64 {
    gains
        .iter()
        .zip(theta)
        .zip(&uav.entries)
        .map(|((&a, &t), h)| (Complex64::from_polar(a, -t) * h.conj()).norm_sqr())
        .sum()
}

/// Received SNR by direct matrix products, with per-element gains and phases.
#[allow(clippy::too_many_arguments)]
pub fn snr_exact(
    source: &LosChannel,
    uav: &LosChannel,
    gains: &[f64],
    theta: &[f64],
    precoder: &[Complex64],
    p: f64,
    g_s: f64,
    sigma_a_sq: f64,
    sigma_sq: f64,
) -> f64 {
    snr_exact_subarray(source, uav, gains, theta, precoder, p, g_s, sigma_a_sq, sigma_sq, 0..source.rows)
}

/// As [`snr_exact`], but only elements in `serving` contribute to the desired
/// signal. Every amplifying element still injects noise.
#[allow(clippy::too_many_arguments)]
pub fn snr_exact_subarray(
    source: &LosChannel,
    uav: &LosChannel,
    gains: &[f64],
    theta: &[f64],
    precoder: &[Complex64],
    p: f64,
    g_s: f64,
    sigma_a_sq: f64,
    sigma_sq: f64,
    serving: Range<usize>,
) -> f64 {
    let n = source.rows;
    debug_assert_eq!(uav.cols, n);
    debug_assert_eq!(gains.len(), n);
    debug_assert_eq!(theta.len(), n);
    debug_assert_eq!(precoder.len(), source.cols);
    let mut signal = Complex64::new(0.0, 0.0);
    for row in serving {
        let hv: Complex64 = (0..source.cols).map(|k| source.at(row, k) * precoder[k]).sum();
        signal += uav.entries[row] * Complex64::from_polar(gains[row], theta[row]) * hv;
    }
    let noise: f64 = gains
        .iter()
        .zip(&uav.entries)
        .map(|(&a, h)| a * a * h.norm_sqr())
        .sum();
    p * g_s * signal.norm_sqr() / (sigma_a_sq * noise + sigma_sq)
}

/// Array factor `|sin(pi n d x) / sin(pi d x)|^2`, peak `n^2`.
pub fn beamforming_gain(delta_phi: f64, n_bar: usize, spacing_wavelengths: f64) -> f64 {
    let n = n_bar as f64;
    let x = PI * spacing_wavelengths * delta_phi;
    let den = x.sin();
    if den.abs() < SINGULAR_EPS {
        return n * n;
    }
    let r = (n * x).sin() / den;
    r * r
}

/// Half-power beamwidth in sine space, `0.8858 / (n d)`.
pub fn hpbw(n_bar: usize, spacing_wavelengths: f64) -> f64 {
    HPBW_CONSTANT / (n_bar as f64 * spacing_wavelengths)
}

/// Inputs to the equal-gain closed-form SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub p: f64,
    pub g_s: f64,
    pub m: usize,
    pub beta0: f64,
    /// Source-to-RIS distance.
    pub d_s: f64,
    /// RIS-to-UAV distance.
    pub d_m: f64,
    pub gain: f64,
    pub alpha: f64,
    /// Amplifying (noise-injecting) element count.
    pub n: usize,
    pub sigma_a_sq: f64,
    pub sigma_sq: f64,
}

pub fn snr_closed_form(c: &ClosedForm) -> f64 {
    let a2 = c.alpha * c.alpha;
    let beta = c.beta0 / (c.d_m * c.d_m);
    let num = c.p * c.g_s * c.beta0 * c.beta0 * c.m as f64 * a2 * c.gain;
    let den = (c.sigma_a_sq * beta * c.n as f64 * a2 + c.sigma_sq) * c.d_s * c.d_s * c.d_m * c.d_m;
    num / den
}

/// Reflection power and total active-RIS draw `(P_R, P_tot_a)`.
#[allow(clippy::too_many_arguments)]
pub fn active_power(
    alpha: f64,
    n: usize,
    m: usize,
    beta_s: f64,
    g_s: f64,
    sum_pm: f64,
    sigma_a_sq: f64,
    p_e: f64,
) -> (f64, f64) {
    let n = n as f64;
    let p_r = alpha * alpha * (n * m as f64 * beta_s * g_s * sum_pm + n * sigma_a_sq);
    (p_r, p_r + n * p_e)
}
