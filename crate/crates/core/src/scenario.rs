//! Scenario configuration, validation and the `p_x` sweep engine.
//!
//! A scenario is a TOML document with the sections below. Units are part of
//! the key names where they are fixed; the five power fields (`transmit.p_h`,
//! `transmit.p_m`, `primary.p_p`, `overheads.p_cp`, `overheads.p_sp`, and the
//! per-pair power overrides) are watts when `units = "watt"` and dBm when
//! `units = "dbm"`.
//!
//! ```toml
//! name = "example"
//! units = "watt"                     # "watt" | "dbm"
//!
//! [environment]
//! bandwidth_hz = 1.0e6               # Hz
//! noise_psd_dbm_per_hz = -174.0      # dBm/Hz
//! carrier_ghz = 5.0                  # GHz
//! omega = 0.5                        # LOS probability, optional (default 0.5)
//! pathloss_combine = "db"            # "db" | "linear", optional
//! speed_of_light_m_per_s = 3.0e8     # recorded only
//!
//! [sensing]
//! t_t_s = 0.125e-3                   # s
//! t_se_s = 0.125e-3                  # s
//! p_x0 = 0.5                         # P(primary inactive)
//! p_x1 = 0.5                         # P(primary active)
//! p_f = 0.1                          # false-alarm probability
//! p_d = 0.9                          # detection probability
//! enforce_regulatory = true          # require p_d >= 0.9, p_f <= 0.1
//! grid = { start = 0.0, stop = 1.0, step = 0.01 }
//!
//! [overheads]
//! p_cp = 99.0                        # circuit power
//! p_sp = 1.0                         # sensing power
//!
//! [transmit]
//! p_h = 0.7                          # default HRC transmit power
//! p_m = 0.3                          # default MRC transmit power
//!
//! [primary]
//! p_p = 50.0                         # primary transmit power
//! g_p2 = 4.4e-15                     # power gain, or distance_m = 500.0 (m)
//! mu_p_db = -10.0                    # dB
//! mu_threshold_db = -20.0            # dB
//!
//! [optimizer]
//! p_max_w = 1000.0                   # W, oracle's initial bracket
//! coupling = "nominal"               # "nominal" | "cascaded"
//!
//! [[pairs]]                          # one HRC + one MRC per subcarrier
//! g_h2 = 7.9e-15                     # or d_h_m (m)
//! g_m2 = 3.8e-15                     # or d_m_m (m)
//! # p_h, p_m: optional per-pair power overrides
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::link::{
    pair_throughput, prefactor, Device, DevicePair, MetricPoint, PowerOverheads, PrimaryLink, RadioEnvironment,
    SensingProfile, SensingState,
};
use crate::optimize::{optimize_scenario, CouplingMode};
use crate::pathloss::{link_gain, CombineMode, PathlossInput, ValidityWarning};
use crate::scalar::{cst, to_f64, Scalar};
use crate::units::{dbm_to_watt, PowerDbm};

pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.toml");
pub const PLACEMENT_SCENARIO: &str = include_str!("../scenarios/placement.toml");
pub const LITERAL_DBM_SCENARIO: &str = include_str!("../scenarios/literal_dbm.toml");

/// LOS probability used when the scenario leaves `omega` unset.
pub const DEFAULT_OMEGA: f64 = 0.5;

/// Relative mismatch tolerated between a given gain and one computed from a
/// given distance.
const GAIN_CONSISTENCY_TOL: f64 = 1e-6;

/// Bundled scenario text by name: `default`, `placement`, `literal-dbm`.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "default" => Some(DEFAULT_SCENARIO),
        "placement" => Some(PLACEMENT_SCENARIO),
        "literal-dbm" | "literal_dbm" => Some(LITERAL_DBM_SCENARIO),
        _ => None,
    }
}

/// How the five power fields of a scenario are read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Watt,
    Dbm,
}

impl std::fmt::Display for UnitMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UnitMode::Watt => "watt",
            UnitMode::Dbm => "dbm",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub units: UnitMode,
    pub environment: EnvironmentConfig,
    pub sensing: SensingConfig,
    pub overheads: OverheadsConfig,
    pub transmit: TransmitConfig,
    pub primary: PrimaryConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    pub pairs: Vec<PairConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub bandwidth_hz: f64,
    pub noise_psd_dbm_per_hz: f64,
    pub carrier_ghz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default)]
    pub pathloss_combine: CombineMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_of_light_m_per_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensingConfig {
    pub t_t_s: f64,
    pub t_se_s: f64,
    pub p_x0: f64,
    pub p_x1: f64,
    pub p_f: f64,
    pub p_d: f64,
    #[serde(default)]
    pub enforce_regulatory: bool,
    #[serde(default)]
    pub grid: GridConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            start: 0.0,
            stop: 1.0,
            step: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverheadsConfig {
    pub p_cp: f64,
    pub p_sp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmitConfig {
    pub p_h: f64,
    pub p_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimaryConfig {
    pub p_p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_p2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_m: Option<f64>,
    #[serde(default = "default_mu_p")]
    pub mu_p_db: f64,
    #[serde(default = "default_mu_threshold")]
    pub mu_threshold_db: f64,
}

fn default_mu_p() -> f64 {
    -10.0
}

fn default_mu_threshold() -> f64 {
    -20.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    #[serde(default = "default_p_max")]
    pub p_max_w: f64,
    #[serde(default)]
    pub coupling: CouplingMode,
}

fn default_p_max() -> f64 {
    1000.0
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            p_max_w: default_p_max(),
            coupling: CouplingMode::Nominal,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_h2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_h_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_m_m: Option<f64>,
}

/// Non-fatal findings attached to a scenario and to every sweep over it.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioWarning {
    /// `omega` was not given; [`DEFAULT_OMEGA`] was used for pathloss.
    OmegaDefaulted { value: f64 },
    /// A link geometry lies outside the pathloss model's fitted range.
    Pathloss { link: String, warning: ValidityWarning },
    /// `P_M |g_m|^2 >= P_H |g_h|^2`: the SIC decoding order is strained.
    SicOrdering { pair: usize, optimized: bool },
}

/// Arithmetic `p_x` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub start: T,
    pub stop: T,
    pub step: T,
}

impl<T: Scalar> Grid<T> {
    fn intervals(&self) -> Result<usize> {
        let span = self.stop - self.start;
        if !(self.start >= T::zero() && self.stop <= T::one() && span > T::zero() && self.step > T::zero()) {
            return Err(Error::config(
                "sensing.grid",
                "need 0 <= start < stop <= 1 and step > 0",
            ));
        }
        let n = (span / self.step).round();
        let mismatch = (n * self.step - span).abs();
        if n < T::one() || mismatch > cst::<T>(1e-9) * span.max(T::one()) {
            return Err(Error::config("sensing.grid", "step must divide stop - start"));
        }
        n.to_usize()
            .ok_or_else(|| Error::config("sensing.grid", "too many grid points"))
    }

    /// `start + (stop - start) * i / n` for `i = 0..n`, then `stop` itself.
    pub fn points(&self) -> Result<Vec<T>> {
        let n = self.intervals()?;
        let span = self.stop - self.start;
        let n_t = cst::<T>(n as f64);
        Ok((0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + span * cst::<T>(i as f64) / n_t
                }
            })
            .collect())
    }
}

/// Validated, immutable scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub name: String,
    pub description: Option<String>,
    pub unit_mode: UnitMode,
    pub env: RadioEnvironment<T>,
    pub sensing: SensingProfile<T>,
    pub enforce_regulatory: bool,
    pub grid: Grid<T>,
    pub pairs: Vec<DevicePair<T>>,
    pub primary: PrimaryLink<T>,
    pub overheads: PowerOverheads<T>,
    pub omega: T,
    pub omega_defaulted: bool,
    pub combine: CombineMode,
    pub speed_of_light_m_per_s: Option<f64>,
    /// Initial oracle bracket, watts.
    pub p_max: T,
    pub coupling: CouplingMode,
    pub warnings: Vec<ScenarioWarning>,
    /// Hex SHA-256 prefix of the canonical configuration.
    pub hash: String,
}

impl<T: Scalar> Scenario<T> {
    /// Scenario assembled in code, with the default grid, omega and optimizer
    /// settings.
    pub fn from_parts(
        name: impl Into<String>,
        env: RadioEnvironment<T>,
        sensing: SensingProfile<T>,
        pairs: Vec<DevicePair<T>>,
        primary: PrimaryLink<T>,
        overheads: PowerOverheads<T>,
    ) -> Result<Self> {
        let grid = GridConfig::default();
        let mut scn = Scenario {
            name: name.into(),
            description: None,
            unit_mode: UnitMode::Watt,
            env,
            sensing,
            enforce_regulatory: false,
            grid: Grid {
                start: cst(grid.start),
                stop: cst(grid.stop),
                step: cst(grid.step),
            },
            pairs,
            primary,
            overheads,
            omega: cst(DEFAULT_OMEGA),
            omega_defaulted: true,
            combine: CombineMode::Db,
            speed_of_light_m_per_s: None,
            p_max: cst(default_p_max()),
            coupling: CouplingMode::Nominal,
            warnings: Vec::new(),
            hash: String::new(),
        };
        scn.validate()?;
        scn.warnings = sic_warnings(&scn.pairs, false);
        scn.hash = hash_text(&format!("{scn:?}"));
        Ok(scn)
    }

    /// Re-checks every component invariant; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::config("pairs", "at least one HRC/MRC pair is required"));
        }
        if !(self.env.bandwidth_hz > T::zero()) {
            return Err(Error::config("environment.bandwidth_hz", "must be > 0"));
        }
        if !self.env.noise_psd.0.is_finite() {
            return Err(Error::config("environment.noise_psd_dbm_per_hz", "must be finite"));
        }
        if !(self.env.carrier_ghz > T::zero()) {
            return Err(Error::config("environment.carrier_ghz", "must be > 0"));
        }
        if !(self.omega >= T::zero() && self.omega <= T::one()) {
            return Err(Error::config(
                "environment.omega",
                format!("LOS probability {} outside [0, 1]", to_f64(self.omega)),
            ));
        }
        self.sensing
            .validate(self.enforce_regulatory)
            .map_err(|e| prefix_field("sensing", e))?;
        self.grid.intervals()?;
        self.overheads.validate().map_err(|e| prefix_field("overheads", e))?;
        self.primary.validate().map_err(|e| prefix_field("primary", e))?;
        for (i, pair) in self.pairs.iter().enumerate() {
            pair.validate().map_err(|e| prefix_field(&format!("pairs[{i}]"), e))?;
        }
        if !(self.p_max > T::zero()) {
            return Err(Error::config("optimizer.p_max_w", "must be > 0"));
        }
        Ok(())
    }
}

fn prefix_field(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidArgument { name, reason } if name == section => Error::config(section, reason),
        Error::InvalidArgument { name, reason } => Error::config(format!("{section}.{name}"), reason),
        Error::Domain(reason) => Error::config(section, reason),
        other => other,
    }
}

fn hash_text(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

fn sic_warnings<T: Scalar>(pairs: &[DevicePair<T>], optimized: bool) -> Vec<ScenarioWarning> {
    pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.sic_ordered())
        .map(|(pair, _)| ScenarioWarning::SicOrdering { pair, optimized })
        .collect()
}

fn finite(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(field, format!("{v} is not finite")))
    }
}

/// Parses and validates a scenario document.
pub fn load_scenario(source: &str) -> Result<Scenario<f64>> {
    let cfg: ScenarioConfig = toml::from_str(source).map_err(|e| {
        let msg = e.message().to_string();
        let at = e.span().map(|span| locate_key(source, span.start));
        let field = match (missing_field(&msg), at) {
            (Some(name), Some(Key::Table(table))) => format!("{table}.{name}"),
            (Some(name), _) => name.to_string(),
            (None, Some(Key::Table(key) | Key::Value(key))) => key,
            (None, None) => "<document>".to_string(),
        };
        Error::config(field, msg)
    })?;
    scenario_from_config(&cfg)
}

enum Key {
    Table(String),
    Value(String),
}

/// Best-effort name of the TOML key or table on the line where a parse error starts.
fn locate_key(source: &str, offset: usize) -> Key {
    let line_start = source[..offset.min(source.len())].rfind('\n').map_or(0, |i| i + 1);
    let line = source[line_start..].lines().next().unwrap_or("").trim();
    if line.starts_with('[') {
        return Key::Table(line.trim_matches(|c| c == '[' || c == ']').trim().to_string());
    }
    match line.split_once('=') {
        Some((key, _)) => Key::Value(key.trim().to_string()),
        None => Key::Value(line.to_string()),
    }
}

fn missing_field(msg: &str) -> Option<&str> {
    msg.strip_prefix("missing field `")?.split('`').next()
}

/// Builds a validated scenario from an already-parsed configuration.
pub fn scenario_from_config(cfg: &ScenarioConfig) -> Result<Scenario<f64>> {
    let power = |field: &str, v: f64| -> Result<f64> {
        let v = finite(field, v)?;
        match cfg.units {
            UnitMode::Watt => {
                if v < 0.0 {
                    return Err(Error::config(field, "power must be >= 0 W"));
                }
                Ok(v)
            }
            UnitMode::Dbm => dbm_to_watt(PowerDbm(v))
                .map(|w| w.0)
                .map_err(|e| Error::config(field, e.to_string())),
        }
    };

    let env_cfg = &cfg.environment;
    let env = RadioEnvironment {
        bandwidth_hz: finite("environment.bandwidth_hz", env_cfg.bandwidth_hz)?,
        noise_psd: PowerDbm(finite("environment.noise_psd_dbm_per_hz", env_cfg.noise_psd_dbm_per_hz)?),
        carrier_ghz: finite("environment.carrier_ghz", env_cfg.carrier_ghz)?,
    };
    let omega = env_cfg.omega.unwrap_or(DEFAULT_OMEGA);
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::config(
            "environment.omega",
            format!("LOS probability {omega} outside [0, 1]"),
        ));
    }
    let combine = env_cfg.pathloss_combine;

    let mut warnings = Vec::new();
    let mut used_distance = false;
    let mut gain = |field: &str, given: Option<f64>, distance: Option<f64>, link: String| -> Result<f64> {
        let from_distance = match distance {
            Some(d) => {
                used_distance = true;
                let input = PathlossInput::new(finite(field, d)?, env.carrier_ghz, omega);
                for warning in input.validity_warnings() {
                    warnings.push(ScenarioWarning::Pathloss {
                        link: link.clone(),
                        warning,
                    });
                }
                Some(link_gain(&input, combine).map_err(|e| Error::config(field, e.to_string()))?)
            }
            None => None,
        };
        match (given, from_distance) {
            (Some(g), Some(gd)) => {
                if ((g - gd) / gd).abs() > GAIN_CONSISTENCY_TOL {
                    return Err(Error::config(
                        field,
                        format!("gain {g:e} disagrees with {gd:e} computed from the given distance"),
                    ));
                }
                Ok(g)
            }
            (Some(g), None) => finite(field, g),
            (None, Some(gd)) => Ok(gd),
            (None, None) => Err(Error::config(field, "give either a power gain or a distance")),
        }
    };

    let g_p2 = gain(
        "primary.g_p2",
        cfg.primary.g_p2,
        cfg.primary.distance_m,
        "primary".into(),
    )?;
    let mut pairs = Vec::with_capacity(cfg.pairs.len());
    for (i, pc) in cfg.pairs.iter().enumerate() {
        let g_h2 = gain(&format!("pairs[{i}].g_h2"), pc.g_h2, pc.d_h_m, format!("pairs[{i}].hrc"))?;
        let g_m2 = gain(&format!("pairs[{i}].g_m2"), pc.g_m2, pc.d_m_m, format!("pairs[{i}].mrc"))?;
        let p_h = power(&format!("pairs[{i}].p_h"), pc.p_h.unwrap_or(cfg.transmit.p_h))?;
        let p_m = power(&format!("pairs[{i}].p_m"), pc.p_m.unwrap_or(cfg.transmit.p_m))?;
        pairs.push(DevicePair {
            p_h,
            p_m,
            g_h2,
            g_m2,
            d_h: pc.d_h_m,
            d_m: pc.d_m_m,
        });
    }
    let omega_defaulted = used_distance && env_cfg.omega.is_none();
    if omega_defaulted {
        warnings.insert(0, ScenarioWarning::OmegaDefaulted { value: DEFAULT_OMEGA });
    }

    let s = &cfg.sensing;
    let scn = Scenario {
        name: cfg.name.clone(),
        description: cfg.description.clone(),
        unit_mode: cfg.units,
        env,
        sensing: SensingProfile {
            t_t: finite("sensing.t_t_s", s.t_t_s)?,
            t_se: finite("sensing.t_se_s", s.t_se_s)?,
            p_x0: s.p_x0,
            p_x1: s.p_x1,
            p_f: s.p_f,
            p_d: s.p_d,
        },
        enforce_regulatory: s.enforce_regulatory,
        grid: Grid {
            start: s.grid.start,
            stop: s.grid.stop,
            step: s.grid.step,
        },
        pairs,
        primary: PrimaryLink {
            p_p: power("primary.p_p", cfg.primary.p_p)?,
            g_p2,
            mu_p_db: finite("primary.mu_p_db", cfg.primary.mu_p_db)?,
            mu_threshold_db: finite("primary.mu_threshold_db", cfg.primary.mu_threshold_db)?,
        },
        overheads: PowerOverheads {
            p_cp: power("overheads.p_cp", cfg.overheads.p_cp)?,
            p_sp: power("overheads.p_sp", cfg.overheads.p_sp)?,
        },
        omega,
        omega_defaulted,
        combine,
        speed_of_light_m_per_s: env_cfg.speed_of_light_m_per_s,
        p_max: cfg.optimizer.p_max_w,
        coupling: cfg.optimizer.coupling,
        warnings,
        hash: String::new(),
    };
    scn.validate()?;

    let canonical = toml::to_string(cfg).map_err(|e| Error::config("<document>", e.to_string()))?;
    let mut scn = scn;
    scn.warnings.extend(sic_warnings(&scn.pairs, false));
    scn.hash = hash_text(&canonical);
    Ok(scn)
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint<T> {
    pub p_x: T,
    /// Per-pair mean throughput over mean transmit power: the headline series.
    pub mean: MetricPoint<T>,
    /// Throughput summed over pairs, with the same power denominator.
    pub sum: MetricPoint<T>,
    pub per_pair: Vec<MetricPoint<T>>,
}

/// Bookkeeping carried alongside a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMeta {
    pub scenario: String,
    pub scenario_hash: String,
    pub unit_mode: UnitMode,
    pub coupling: CouplingMode,
    /// Pairs whose optimum was infeasible and that kept their nominal power.
    pub infeasible_pairs: Vec<usize>,
    /// State implied by the primary's received SNR against the threshold.
    pub sensed_state: SensingState,
    pub omega_defaulted: bool,
    pub warnings: Vec<ScenarioWarning>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSeries<T> {
    pub state: SensingState,
    pub device: Device,
    pub optimized: bool,
    pub points: Vec<SweepPoint<T>>,
    pub meta: SweepMeta,
}

impl<T: Scalar> SweepSeries<T> {
    /// Transmit powers used per pair (identical at every grid point).
    pub fn tx_powers(&self) -> Vec<T> {
        self.points
            .first()
            .map(|p| p.per_pair.iter().map(|m| m.tx_power_w).collect())
            .unwrap_or_default()
    }
}

/// Sweeps `p_x` of `state` with the scenario's configured coupling mode.
pub fn run_sweep<T: Scalar>(
    scn: &Scenario<T>,
    state: SensingState,
    device: Device,
    optimized: bool,
) -> Result<SweepSeries<T>> {
    run_sweep_with(scn, state, device, optimized, scn.coupling)
}

/// Sweeps `p_x(z)` over the scenario grid for one device class.
///
/// When `optimized`, each pair's device transmits at its closed-form optimum;
/// infeasible pairs keep their nominal power and are listed in the metadata.
pub fn run_sweep_with<T: Scalar>(
    scn: &Scenario<T>,
    state: SensingState,
    device: Device,
    optimized: bool,
    coupling: CouplingMode,
) -> Result<SweepSeries<T>> {
    let primary = match state {
        SensingState::Effectual => None,
        SensingState::Interference => Some(&scn.primary),
    };

    let mut infeasible_pairs = Vec::new();
    let pairs: Vec<DevicePair<T>> = if optimized {
        let optima = optimize_scenario(scn, state, coupling)?;
        scn.pairs
            .iter()
            .zip(&optima)
            .map(|(pair, opt)| {
                let mut p = *pair;
                if coupling == CouplingMode::Cascaded && opt.hrc.feasible {
                    p = p.with_power(Device::Hrc, opt.hrc.p_star);
                }
                let r = opt.result(device);
                if r.feasible {
                    p = p.with_power(device, r.p_star);
                } else {
                    infeasible_pairs.push(opt.index);
                }
                p
            })
            .collect()
    } else {
        scn.pairs.clone()
    };

    let mut warnings = scn.warnings.clone();
    if optimized {
        warnings.extend(sic_warnings(&pairs, true));
    }

    let n = cst::<T>(pairs.len() as f64);
    let mean_tx = pairs.iter().fold(T::zero(), |acc, p| acc + p.power(device)) / n;
    let mut points = Vec::new();
    for p_x in scn.grid.points()? {
        let at = |e: Error| Error::AtGridPoint {
            p_x: to_f64(p_x),
            source: Box::new(e),
        };
        let sp = scn.sensing.with_p_x(state, p_x);
        let mut per_pair = Vec::with_capacity(pairs.len());
        let mut total = T::zero();
        for pair in &pairs {
            let s = pair_throughput(&sp, &scn.env, device, state, pair, primary).map_err(at)?;
            total = total + s;
            per_pair.push(
                MetricPoint::new(p_x, state, device, s, pair.power(device), &scn.overheads, optimized).map_err(at)?,
            );
        }
        points.push(SweepPoint {
            p_x,
            mean: MetricPoint::new(p_x, state, device, total / n, mean_tx, &scn.overheads, optimized).map_err(at)?,
            sum: MetricPoint::new(p_x, state, device, total, mean_tx, &scn.overheads, optimized).map_err(at)?,
            per_pair,
        });
    }

    Ok(SweepSeries {
        state,
        device,
        optimized,
        points,
        meta: SweepMeta {
            scenario: scn.name.clone(),
            scenario_hash: scn.hash.clone(),
            unit_mode: scn.unit_mode,
            coupling,
            infeasible_pairs,
            sensed_state: scn.primary.sensed_state(),
            omega_defaulted: scn.omega_defaulted,
            warnings,
        },
    })
}

/// Own-link gain at which a single pair reaches `target_bps`:
/// `g2 = (2^(target / (k b)) - 1) (n_p b + d_interference) / p_tx`.
pub fn solve_gain_for_target<T: Scalar>(
    target_bps: T,
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    state: SensingState,
    p_tx: T,
    d_interference: T,
) -> Result<T> {
    let kb = prefactor(sp, state)? * env.bandwidth_hz;
    if !(kb > T::zero()) {
        return Err(Error::domain("prefactor times bandwidth is zero; no gain reaches the target"));
    }
    if !(target_bps > T::zero()) {
        return Err(Error::domain(
            "target must be > 0 bps; a zero target sits on the g2 = 0 edge of the domain",
        ));
    }
    if !(p_tx > T::zero()) {
        return Err(Error::domain("transmit power must be > 0 W"));
    }
    if !(d_interference >= T::zero()) {
        return Err(Error::domain("interference power must be >= 0 W"));
    }
    let d = env.noise_power()? + d_interference;
    let sinr = (target_bps / kb * T::LN_2()).exp_m1();
    let g2 = sinr * d / p_tx;
    if !g2.is_finite() {
        return Err(Error::domain("target throughput is unreachable in floating point"));
    }
    Ok(g2)
}
