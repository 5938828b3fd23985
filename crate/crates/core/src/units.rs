//! Decibel conversions. Internals stay linear; these are for the edges.

use num_traits::Float;

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

pub fn dbm_to_w(dbm: f64) -> f64 {
    db_to_lin(dbm) * 1e-3
}

pub fn w_to_dbm(w: f64) -> f64 {
    lin_to_db(w * 1e3)
}

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density at 290 K, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;
