//! Flat key-value experiment configuration. Every key has a default, and
//! unknown keys are rejected. Radio quantities are dB/dBm here and linear
//! everywhere past [`ExperimentConfig::scenario`] and friends.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use aeris_core::antenna::AntennaPattern;
use aeris_core::baseline::{AfPlacement, AfRelayConfig};
use aeris_core::channel::{RisGeometry, SourceArray};
use aeris_core::pipeline::{PlacementGain, PlannerOptions, RisConfig};
use aeris_core::placement::WeiszfeldOptions;
use aeris_core::power::PowerOffsets;
use aeris_core::scenario::ScenarioConfig;
use aeris_core::units::{db_to_lin, dbm_to_w, SPEED_OF_LIGHT, THERMAL_NOISE_DBM_HZ};
use aeris_core::Vec2;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Active,
    Passive,
    Af,
    Detuned,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Active, Method::Passive, Method::Af, Method::Detuned];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Active => "active",
            Method::Passive => "passive",
            Method::Af => "af",
            Method::Detuned => "detuned",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| ConfigError::Invalid(format!("unknown method `{s}` (expected active, passive, af, detuned)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    /// Distance of the region center from the source, m.
    #[serde(rename = "d_G")]
    DG,
    /// RIS altitude, m.
    H,
    /// RIS element count.
    N,
    /// Fixed `alpha^2` in dB for the active methods.
    #[serde(rename = "alpha")]
    Alpha,
    /// AF relay ground distance from the source, m.
    #[serde(rename = "af_distance")]
    AfDistance,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::DG => "d_G",
            SweepAxis::H => "H",
            SweepAxis::N => "N",
            SweepAxis::Alpha => "alpha",
            SweepAxis::AfDistance => "af_distance",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [SweepAxis::DG, SweepAxis::H, SweepAxis::N, SweepAxis::Alpha, SweepAxis::AfDistance]
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| ConfigError::Invalid(format!("unknown sweep axis `{s}` (expected d_G, H, N, alpha, af_distance)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AfPlacementKey {
    Midpoint,
    Search,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    // Region and users.
    pub d_g: f64,
    pub region_side: f64,
    pub n0: usize,
    pub m0: usize,
    pub h_uav: f64,

    // Fronthaul.
    pub b_f_hz: f64,
    pub fronthaul_nf_db: f64,
    pub p_uav_dbm: f64,
    pub fronthaul_freq_hz: f64,

    // Antenna pattern shared by source and UAVs.
    pub g_max_db: f64,
    pub theta_h_deg: f64,
    pub phi_h_deg: f64,
    pub sla_v_db: f64,
    pub a_max_db: f64,

    // Source and backhaul.
    pub m: usize,
    pub d_s_wavelengths: f64,
    pub p_max_dbm: f64,
    pub beta0_db: f64,
    pub b_b_hz: f64,
    pub sigma_sq_dbm: f64,
    pub carrier_hz: f64,

    // Aerial RIS.
    pub n: usize,
    pub d_ris_wavelengths: f64,
    pub h: f64,
    pub alpha_max_sq_db: f64,
    pub p_e_dbm: f64,
    pub sigma_a_sq_dbm: f64,
    pub p_max_a_dbm: f64,
    pub delta0_db: f64,

    // Planner.
    pub delta: f64,
    pub weiszfeld_tol: f64,
    pub weiszfeld_max_iter: usize,
    pub grid_fallback: bool,
    pub placement_repass: bool,
    pub theta_bar: f64,

    // AF relay.
    pub af_elements: usize,
    pub p_dac_mw: f64,
    pub p_mix_mw: f64,
    pub p_filt_mw: f64,
    pub p_syn_mw: f64,
    pub af_relay_max_dbm: f64,
    pub af_altitude: f64,
    pub af_placement: AfPlacementKey,

    // Constant offsets for energy efficiency.
    pub p_gbs_w: f64,
    pub p_ap_w: f64,
    pub p_uav_w: f64,

    // Experiment.
    pub seeds: usize,
    pub seed_base: u64,
    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    pub methods: Vec<Method>,
    pub out_dir: PathBuf,
    pub json: bool,
    /// Record wall-clock time per row. Off by default so output is reproducible.
    pub timing: bool,
    /// Worker threads; 0 uses all cores.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d_g: 1000.0,
            region_side: 500.0,
            n0: 1000,
            m0: 6,
            h_uav: 45.0,
            b_f_hz: 10e6,
            fronthaul_nf_db: 9.0,
            p_uav_dbm: 0.0,
            fronthaul_freq_hz: 2e9,
            g_max_db: 8.0,
            theta_h_deg: 65.0,
            phi_h_deg: 65.0,
            sla_v_db: 30.0,
            a_max_db: 30.0,
            m: 16,
            d_s_wavelengths: 0.5,
            p_max_dbm: 20.0,
            beta0_db: -43.3,
            b_b_hz: 50e6,
            sigma_sq_dbm: -99.0,
            carrier_hz: 3.5e9,
            n: 300,
            d_ris_wavelengths: 0.1,
            h: 180.0,
            alpha_max_sq_db: 40.0,
            p_e_dbm: -3.8,
            sigma_a_sq_dbm: -80.0,
            p_max_a_dbm: 20.0,
            delta0_db: -5.0,
            delta: 0.1,
            weiszfeld_tol: 1e-9,
            weiszfeld_max_iter: 10_000,
            grid_fallback: false,
            placement_repass: false,
            theta_bar: 0.0,
            af_elements: 16,
            p_dac_mw: 33.27,
            p_mix_mw: 30.3,
            p_filt_mw: 2.5,
            p_syn_mw: 50.0,
            af_relay_max_dbm: 30.0,
            af_altitude: 180.0,
            af_placement: AfPlacementKey::Midpoint,
            p_gbs_w: 0.0,
            p_ap_w: 0.0,
            p_uav_w: 0.0,
            seeds: 100,
            seed_base: 0,
            sweep_axis: SweepAxis::DG,
            sweep_values: vec![1000.0],
            methods: Method::ALL.to_vec(),
            out_dir: PathBuf::from("out"),
            json: true,
            timing: false,
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, path)
    }

    /// Parses `axis=v1,v2,...`.
    pub fn apply_sweep(&mut self, text: &str) -> Result<(), ConfigError> {
        let (axis, values) = text
            .split_once('=')
            .ok_or_else(|| ConfigError::Invalid(format!("sweep `{text}` must look like axis=v1,v2")))?;
        self.sweep_axis = axis.parse()?;
        self.sweep_values = values
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| ConfigError::Invalid(format!("sweep value `{v}` is not a number")))
            })
            .collect::<Result<_, _>>()?;
        self.validate()
    }

    /// Parses `m1,m2,...`.
    pub fn apply_methods(&mut self, text: &str) -> Result<(), ConfigError> {
        self.methods = text.split(',').map(str::parse).collect::<Result<_, _>>()?;
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.seeds == 0 {
            return bad("seeds must be at least 1");
        }
        if self.sweep_values.is_empty() {
            return bad("sweep_values must not be empty");
        }
        if self.sweep_values.iter().any(|v| !v.is_finite()) {
            return bad("sweep_values must be finite");
        }
        if self.sweep_values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sweep_values must be strictly ascending");
        }
        if self.sweep_axis == SweepAxis::N && self.sweep_values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
            return bad("N sweep values must be positive integers");
        }
        if self.methods.is_empty() {
            return bad("methods must not be empty");
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return bad("methods must not repeat");
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("delta must lie in (0, 1)");
        }
        if self.weiszfeld_tol.is_nan() || self.weiszfeld_tol <= 0.0 || self.weiszfeld_max_iter == 0 {
            return bad("Weiszfeld tolerance and iteration cap must be positive");
        }
        if self.p_gbs_w < 0.0 || self.p_ap_w < 0.0 || self.p_uav_w < 0.0 {
            return bad("power offsets must be non-negative");
        }
        // Run every value through the core validators.
        for &v in &self.sweep_values {
            let c = self.at(v);
            c.scenario().validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
            c.ris().validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
            c.af((self.sweep_axis == SweepAxis::AfDistance).then_some(v))
                .validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    /// Copy with the swept parameter set to `value`. The `alpha` and
    /// `af_distance` axes are applied per method by the runner instead.
    pub fn at(&self, value: f64) -> Self {
        let mut c = self.clone();
        match self.sweep_axis {
            SweepAxis::DG => c.d_g = value,
            SweepAxis::H => c.h = value,
            SweepAxis::N => c.n = value as usize,
            SweepAxis::Alpha | SweepAxis::AfDistance => {}
        }
        c
    }

    pub fn pattern(&self) -> AntennaPattern {
        AntennaPattern {
            g_max_db: self.g_max_db,
            theta_h_deg: self.theta_h_deg,
            phi_h_deg: self.phi_h_deg,
            sla_v_db: self.sla_v_db,
            a_max_db: self.a_max_db,
        }
    }

    pub fn scenario(&self) -> ScenarioConfig {
        ScenarioConfig {
            region_center: Vec2::new(self.d_g, 0.0),
            region_side: self.region_side,
            n0: self.n0,
            m0: self.m0,
            uav_altitude: self.h_uav,
            b_f: self.b_f_hz,
            sigma_f_sq: dbm_to_w(THERMAL_NOISE_DBM_HZ + 10.0 * self.b_f_hz.log10() + self.fronthaul_nf_db),
            p_uav_tx: dbm_to_w(self.p_uav_dbm),
            fronthaul_freq: self.fronthaul_freq_hz,
            uav_pattern: self.pattern(),
            source: SourceArray {
                m: self.m,
                spacing_wavelengths: self.d_s_wavelengths,
                pattern: self.pattern(),
                p_max: dbm_to_w(self.p_max_dbm),
            },
            beta0: db_to_lin(self.beta0_db),
            b_b: self.b_b_hz,
            sigma_sq: dbm_to_w(self.sigma_sq_dbm),
            cluster_max_iter: 300,
        }
    }

    pub fn ris(&self) -> RisConfig {
        RisConfig {
            geometry: RisGeometry {
                n: self.n,
                spacing_wavelengths: self.d_ris_wavelengths,
                altitude: self.h,
                wavelength: SPEED_OF_LIGHT / self.carrier_hz,
            },
            alpha_max: db_to_lin(self.alpha_max_sq_db).sqrt(),
            p_e: dbm_to_w(self.p_e_dbm),
            sigma_a_sq: dbm_to_w(self.sigma_a_sq_dbm),
            p_max_a: dbm_to_w(self.p_max_a_dbm),
        }
    }

    pub fn offsets(&self) -> PowerOffsets {
        PowerOffsets {
            p_gbs: self.p_gbs_w,
            p_ap: self.p_ap_w,
            p_uav: vec![self.p_uav_w; self.m0],
        }
    }

    pub fn planner(&self) -> PlannerOptions {
        PlannerOptions {
            weiszfeld: WeiszfeldOptions {
                tol: self.weiszfeld_tol,
                max_iter: self.weiszfeld_max_iter,
            },
            placement_gain: if self.placement_repass {
                PlacementGain::Repass
            } else {
                PlacementGain::AlphaMax
            },
            grid_fallback: self.grid_fallback,
            theta_bar: self.theta_bar,
            delta: self.delta,
            offsets: self.offsets(),
        }
    }

    /// AF relay settings; `distance` overrides the configured placement.
    pub fn af(&self, distance: Option<f64>) -> AfRelayConfig {
        let placement = match (distance, self.af_placement) {
            (Some(d), _) => AfPlacement::Distance(d),
            (None, AfPlacementKey::Midpoint) => AfPlacement::Midpoint,
            (None, AfPlacementKey::Search) => AfPlacement::Search,
        };
        AfRelayConfig {
            elements: self.af_elements,
            p_dac: self.p_dac_mw * 1e-3,
            p_mix: self.p_mix_mw * 1e-3,
            p_filt: self.p_filt_mw * 1e-3,
            p_syn: self.p_syn_mw * 1e-3,
            altitude: self.af_altitude,
            placement,
            p_relay_max: dbm_to_w(self.af_relay_max_dbm),
        }
    }
}
