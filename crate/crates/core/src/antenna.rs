//! Directional antenna pattern with separable vertical and horizontal attenuation.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::units::db_to_lin;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub g_max_db: f64,
    /// Vertical half-power beamwidth, degrees.
    pub theta_h_deg: f64,
    /// Horizontal half-power beamwidth, degrees.
    pub phi_h_deg: f64,
    pub sla_v_db: f64,
    pub a_max_db: f64,
}

impl Default for AntennaPattern {
    fn default() -> Self {
        Self {
            g_max_db: 8.0,
            theta_h_deg: 65.0,
            phi_h_deg: 65.0,
            sla_v_db: 30.0,
            a_max_db: 30.0,
        }
    }
}

impl AntennaPattern {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_h_deg > 0.0 && self.phi_h_deg > 0.0) {
            return Err(Error::Domain("antenna beamwidths must be positive"));
        }
        if !(self.sla_v_db >= 0.0 && self.a_max_db >= 0.0) || !self.g_max_db.is_finite() {
            return Err(Error::Domain("antenna attenuation caps must be non-negative"));
        }
        Ok(())
    }

    pub fn peak_gain(&self) -> f64 {
        db_to_lin(self.g_max_db)
    }

    /// Attenuation-limited gain in dB for zenith angle `theta` and azimuth `phi`.
    pub fn gain_db(&self, theta_deg: f64, phi_deg: f64) -> Result<f64> {
        if !(0.0..=180.0).contains(&theta_deg) || !(-180.0..180.0).contains(&phi_deg) {
            return Err(Error::Domain("antenna angles out of range"));
        }
        let av = (12.0 * ((theta_deg - 90.0) / self.theta_h_deg).powi(2)).min(self.sla_v_db);
        let ah = (12.0 * (phi_deg / self.phi_h_deg).powi(2)).min(self.a_max_db);
        Ok(self.g_max_db - (av + ah).min(self.a_max_db))
    }
}

/// Linear antenna gain.
pub fn antenna_gain(theta_deg: f64, phi_deg: f64, pattern: &AntennaPattern) -> Result<f64> {
    pattern.gain_db(theta_deg, phi_deg).map(db_to_lin)
}

/// Pattern angles for an antenna at height `h` looking straight down, toward a
/// ground point offset by `(dx, dy)`. Boresight maps to `(90, 0)`.
pub fn downward_angles(dx: f64, dy: f64, h: f64) -> (f64, f64) {
    let theta = 90.0 + dx.atan2(h).to_degrees();
    let phi = dy.atan2(h).to_degrees();
    (theta, phi)
}
