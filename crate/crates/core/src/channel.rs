//! Deterministic line-of-sight channels for the source-to-RIS and RIS-to-UAV hops.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::geometry::{array_response, path_loss, sin_between, Vec2, Vec3};

/// Ground source ULA, located at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceArray {
    pub m: usize,
    pub spacing_wavelengths: f64,
    pub pattern: AntennaPattern,
    /// Maximum transmit power, W.
    pub p_max: f64,
}

impl SourceArray {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Domain("source array needs at least one antenna"));
        }
        if !(self.spacing_wavelengths > 0.0) {
            return Err(Error::Domain("source spacing must be positive"));
        }
        self.pattern.validate()
    }

    /// Directional gain toward the RIS. The source steers its boresight at the
    /// RIS, so this is the pattern peak.
    pub fn gain(&self) -> f64 {
        self.pattern.peak_gain()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisGeometry {
    pub n: usize,
    pub spacing_wavelengths: f64,
    /// Hover altitude H, m.
    pub altitude: f64,
    pub wavelength: f64,
}

impl RisGeometry {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("RIS needs at least one element"));
        }
        if !(self.spacing_wavelengths > 0.0) || !(self.altitude > 0.0) || !(self.wavelength > 0.0) {
            return Err(Error::Domain("RIS spacing, altitude and wavelength must be positive"));
        }
        Ok(())
    }

    pub fn position(&self, q: Vec2) -> Vec3 {
        q.with_z(self.altitude)
    }
}

/// Rank-1 plane-wave channel, stored row-major.
///
/// Source link: `rows = N`, `cols = M`, entries of `H`.
/// UAV link: `rows = 1`, `cols = N`, entries of the row vector `h*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LosChannel {
    pub path_loss: f64,
    pub random_phase: f64,
    /// `-2 pi d / lambda`, kept apart from the random part.
    pub distance_phase: f64,
    /// Angle sine at the RIS (arrival for the source link, departure for UAV links).
    pub sin_ris: f64,
    /// Departure sine at the source; `None` on UAV links.
    pub sin_source: Option<f64>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Complex64>,
}

impl LosChannel {
    pub fn source_link(
        beta0: f64,
        source: &SourceArray,
        ris: &RisGeometry,
        q: Vec2,
        random_phase: f64,
    ) -> Result<Self> {
        let r = ris.position(q);
        let beta_s = path_loss(beta0, Vec3::ZERO, r)?;
        let sin_source = sin_between(Vec3::ZERO, r)?;
        let sin_ris = sin_between(r, Vec3::ZERO)?;
        let distance_phase = -2.0 * PI * r.norm() / ris.wavelength;
        let scale = Complex64::from_polar(beta_s.sqrt(), random_phase + distance_phase);
        let a_ris = array_response(ris.n, ris.spacing_wavelengths, sin_ris);
        let a_s = array_response(source.m, source.spacing_wavelengths, sin_source);
        let mut entries = Vec::with_capacity(ris.n * source.m);
        for ar in &a_ris {
            for as_ in &a_s {
                entries.push(scale * ar * as_.conj());
            }
        }
        Ok(Self {
            path_loss: beta_s,
            random_phase,
            distance_phase,
            sin_ris,
            sin_source: Some(sin_source),
            rows: ris.n,
            cols: source.m,
            entries,
        })
    }

    pub fn uav_link(beta0: f64, ris: &RisGeometry, q: Vec2, uav: Vec3, random_phase: f64) -> Result<Self> {
        let r = ris.position(q);
        let beta = path_loss(beta0, r, uav)?;
        let sin_ris = sin_between(r, uav)?;
        let distance_phase = -2.0 * PI * r.dist(uav) / ris.wavelength;
        let scale = Complex64::from_polar(beta.sqrt(), random_phase + distance_phase);
        let entries = array_response(ris.n, ris.spacing_wavelengths, sin_ris)
            .into_iter()
            .map(|a| scale * a.conj())
            .collect();
        Ok(Self {
            path_loss: beta,
            random_phase,
            distance_phase,
            sin_ris,
            sin_source: None,
            rows: 1,
            cols: ris.n,
            entries,
        })
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channels {
    pub source: LosChannel,
    pub uavs: Vec<LosChannel>,
}

/// Builds all hops for a RIS at `[q, H]`, drawing each random phase uniformly
/// in `[0, 2 pi)` from a generator seeded with `seed`.
pub fn build_channels(
    beta0: f64,
    source: &SourceArray,
    uavs: &[Vec3],
    ris: &RisGeometry,
    q: Vec2,
    seed: u64,
) -> Result<Channels> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi_h = rng.gen_range(0.0..2.0 * PI);
    let source_link = LosChannel::source_link(beta0, source, ris, q, phi_h)?;
    let uav_links = uavs
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let phi = rng.gen_range(0.0..2.0 * PI);
            LosChannel::uav_link(beta0, ris, q, u, phi).map_err(|e| e.at_uav(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Channels {
        source: source_link,
        uavs: uav_links,
    })
}
