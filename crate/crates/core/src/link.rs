//! Sensing state, NOMA uplink throughputs and energy efficiencies.
//!
//! Every throughput has the same shape:
//!
//! ```text
//! S = t_t/(t_t + t_se) * p_x(z) * (1 - p_miss) * b * sum_n log2(1 + P_n |g_n|^2 / D_n)
//! ```
//!
//! where `p_miss` is the false-alarm probability in the effectual state and the
//! detection probability in the interference state, and `D_n` is noise plus
//! whatever interference the device sees: the paired HRC signal for MRC, the
//! primary transmitter in the interference state.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cst, to_f64, Scalar};
use crate::units::{noise_power, PowerDbm};

/// Primary transmitter activity as sensed by the secondary devices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensingState {
    /// `z = 0`: primary inactive, no primary interference.
    Effectual,
    /// `z = 1`: primary active, its received power enters every SINR.
    Interference,
}

impl SensingState {
    pub fn z(self) -> u8 {
        match self {
            SensingState::Effectual => 0,
            SensingState::Interference => 1,
        }
    }
}

impl fmt::Display for SensingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SensingState::Effectual => "effectual",
            SensingState::Interference => "interference",
        })
    }
}

/// Secondary device class sharing a NOMA subcarrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Device {
    /// High reliable communication: the stronger, first-decoded signal.
    Hrc,
    /// Moderate reliable communication: decoded under the HRC signal.
    Mrc,
}

impl fmt::Display for Device {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Device::Hrc => "hrc",
            Device::Mrc => "mrc",
        })
    }
}

/// Sensing-cycle timing and detection statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingProfile<T> {
    pub t_t: T,
    pub t_se: T,
    pub p_x0: T,
    pub p_x1: T,
    pub p_f: T,
    pub p_d: T,
}

fn check_probability<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(Error::invalid(name, format!("probability {} outside [0, 1]", to_f64(v))));
    }
    Ok(())
}

impl<T: Scalar> SensingProfile<T> {
    /// Checks timing and probability ranges. With `regulatory`, also requires
    /// `p_d >= 0.9` and `p_f <= 0.1`.
    pub fn validate(&self, regulatory: bool) -> Result<()> {
        if !(self.t_t > T::zero()) || !self.t_t.is_finite() {
            return Err(Error::invalid("t_t", "transmission time must be > 0"));
        }
        if !(self.t_se >= T::zero()) || !self.t_se.is_finite() {
            return Err(Error::invalid("t_se", "sensing time must be >= 0"));
        }
        check_probability("p_x0", self.p_x0)?;
        check_probability("p_x1", self.p_x1)?;
        check_probability("p_f", self.p_f)?;
        check_probability("p_d", self.p_d)?;
        if regulatory {
            if self.p_d < cst(0.9) {
                return Err(Error::invalid("p_d", "regulatory limit requires p_d >= 0.9"));
            }
            if self.p_f > cst(0.1) {
                return Err(Error::invalid("p_f", "regulatory limit requires p_f <= 0.1"));
            }
        }
        Ok(())
    }

    pub fn p_x(&self, state: SensingState) -> T {
        match state {
            SensingState::Effectual => self.p_x0,
            SensingState::Interference => self.p_x1,
        }
    }

    /// Copy with the state's `p_x` replaced.
    pub fn with_p_x(mut self, state: SensingState, p_x: T) -> Self {
        match state {
            SensingState::Effectual => self.p_x0 = p_x,
            SensingState::Interference => self.p_x1 = p_x,
        }
        self
    }

    /// `p_x0 (1 - p_f)` or `p_x1 (1 - p_d)`.
    pub fn detection_factor(&self, state: SensingState) -> T {
        match state {
            SensingState::Effectual => self.p_x0 * (T::one() - self.p_f),
            SensingState::Interference => self.p_x1 * (T::one() - self.p_d),
        }
    }
}

/// Shared physical context of the uplink.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioEnvironment<T> {
    pub bandwidth_hz: T,
    /// Noise power spectral density, dBm/Hz.
    pub noise_psd: PowerDbm<T>,
    pub carrier_ghz: T,
}

impl<T: Scalar> RadioEnvironment<T> {
    /// `n_p b` in watts.
    pub fn noise_power(&self) -> Result<T> {
        Ok(noise_power(self.noise_psd, self.bandwidth_hz)?.0)
    }
}

/// One HRC and one MRC device sharing a subcarrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevicePair<T> {
    pub p_h: T,
    pub p_m: T,
    pub g_h2: T,
    pub g_m2: T,
    pub d_h: Option<T>,
    pub d_m: Option<T>,
}

impl<T: Scalar> DevicePair<T> {
    pub fn new(p_h: T, p_m: T, g_h2: T, g_m2: T) -> Self {
        DevicePair {
            p_h,
            p_m,
            g_h2,
            g_m2,
            d_h: None,
            d_m: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_h", self.p_h), ("p_m", self.p_m)] {
            if !(p >= T::zero()) || !p.is_finite() {
                return Err(Error::invalid(name, format!("power {} must be finite and >= 0", to_f64(p))));
            }
        }
        for (name, g) in [("g_h2", self.g_h2), ("g_m2", self.g_m2)] {
            if !(g > T::zero()) || !g.is_finite() {
                return Err(Error::invalid(name, format!("gain {} must be finite and > 0", to_f64(g))));
            }
        }
        Ok(())
    }

    /// SIC needs the HRC signal to arrive stronger than the MRC signal.
    pub fn sic_ordered(&self) -> bool {
        self.p_h * self.g_h2 > self.p_m * self.g_m2
    }

    pub fn power(&self, device: Device) -> T {
        match device {
            Device::Hrc => self.p_h,
            Device::Mrc => self.p_m,
        }
    }

    pub fn gain(&self, device: Device) -> T {
        match device {
            Device::Hrc => self.g_h2,
            Device::Mrc => self.g_m2,
        }
    }

    pub fn with_power(mut self, device: Device, p: T) -> Self {
        match device {
            Device::Hrc => self.p_h = p,
            Device::Mrc => self.p_m = p,
        }
        self
    }
}

/// Primary transmitter link to the secondary receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimaryLink<T> {
    pub p_p: T,
    pub g_p2: T,
    /// Received SNR of the primary, dB.
    pub mu_p_db: T,
    /// Sensing threshold, dB.
    pub mu_threshold_db: T,
}

impl<T: Scalar> PrimaryLink<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_p >= T::zero()) || !self.p_p.is_finite() {
            return Err(Error::invalid("p_p", "primary power must be finite and >= 0"));
        }
        if !(self.g_p2 > T::zero()) || !self.g_p2.is_finite() {
            return Err(Error::invalid("g_p2", "primary gain must be finite and > 0"));
        }
        Ok(())
    }

    pub fn received_power(&self) -> T {
        self.p_p * self.g_p2
    }

    pub fn sensed_state(&self) -> SensingState {
        classify_state(self.mu_p_db, self.mu_threshold_db)
    }
}

/// Power drawn regardless of transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOverheads<T> {
    pub p_cp: T,
    pub p_sp: T,
}

impl<T: Scalar> PowerOverheads<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_cp >= T::zero()) || !(self.p_sp >= T::zero()) {
            return Err(Error::invalid("overheads", "p_cp and p_sp must be >= 0"));
        }
        if !(self.total() > T::zero()) || !self.total().is_finite() {
            return Err(Error::invalid("overheads", "p_cp + p_sp must be finite and > 0"));
        }
        Ok(())
    }

    /// `P_cp + P_sp`.
    pub fn total(&self) -> T {
        self.p_cp + self.p_sp
    }
}

/// One evaluated throughput / energy-efficiency record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricPoint<T> {
    pub p_x: T,
    pub state: SensingState,
    pub device: Device,
    pub throughput_bps: T,
    pub ee_bps_per_watt: T,
    pub tx_power_w: T,
    pub optimized: bool,
}

impl<T: Scalar> MetricPoint<T> {
    /// Builds a point whose EE is derived from the throughput, so the
    /// `ee = S / (P + P_cp + P_sp)` identity holds by construction.
    pub fn new(
        p_x: T,
        state: SensingState,
        device: Device,
        throughput_bps: T,
        tx_power_w: T,
        overheads: &PowerOverheads<T>,
        optimized: bool,
    ) -> Result<Self> {
        Ok(MetricPoint {
            p_x,
            state,
            device,
            throughput_bps,
            ee_bps_per_watt: energy_efficiency(throughput_bps, tx_power_w, overheads)?,
            tx_power_w,
            optimized,
        })
    }
}

/// `z = 0` below the threshold, `z = 1` at or above it.
pub fn classify_state<T: Scalar>(mu_p_db: T, mu_threshold_db: T) -> SensingState {
    if mu_p_db < mu_threshold_db {
        SensingState::Effectual
    } else {
        SensingState::Interference
    }
}

/// `t_t / (t_t + t_se)`.
pub fn duty_factor<T: Scalar>(sp: &SensingProfile<T>) -> Result<T> {
    let frame = sp.t_t + sp.t_se;
    if !(frame > T::zero()) {
        return Err(Error::domain("t_t + t_se must be > 0"));
    }
    Ok(sp.t_t / frame)
}

/// Everything multiplying `b * sum log2(...)`: duty factor times detection factor.
pub fn prefactor<T: Scalar>(sp: &SensingProfile<T>, state: SensingState) -> Result<T> {
    Ok(duty_factor(sp)? * sp.detection_factor(state))
}

/// `log2(1 + x)`, accurate for small `x`.
#[inline]
pub fn log2_1p<T: Scalar>(x: T) -> T {
    x.ln_1p() / T::LN_2()
}

/// Noise plus interference seen by `device` of `pair` in `state`.
pub fn denominator<T: Scalar>(
    noise_w: T,
    device: Device,
    state: SensingState,
    pair: &DevicePair<T>,
    primary: Option<&PrimaryLink<T>>,
) -> Result<T> {
    let mut d = noise_w;
    if device == Device::Mrc {
        d = d + pair.p_h * pair.g_h2;
    }
    if state == SensingState::Interference {
        let primary = primary.ok_or_else(|| Error::invalid("primary", "interference state needs a primary link"))?;
        d = d + primary.received_power();
    }
    Ok(d)
}

/// SINR of one device in one pair.
pub fn pair_sinr<T: Scalar>(
    env: &RadioEnvironment<T>,
    device: Device,
    state: SensingState,
    pair: &DevicePair<T>,
    primary: Option<&PrimaryLink<T>>,
) -> Result<T> {
    pair.validate()?;
    let d = denominator(env.noise_power()?, device, state, pair, primary)?;
    Ok(pair.power(device) * pair.gain(device) / d)
}

/// Throughput contributed by a single pair.
pub fn pair_throughput<T: Scalar>(
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    device: Device,
    state: SensingState,
    pair: &DevicePair<T>,
    primary: Option<&PrimaryLink<T>>,
) -> Result<T> {
    let kappa = prefactor(sp, state)?;
    Ok(kappa * env.bandwidth_hz * log2_1p(pair_sinr(env, device, state, pair, primary)?))
}

/// Summed throughput over all pairs for one device class and state.
pub fn throughput<T: Scalar>(
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    device: Device,
    state: SensingState,
    pairs: &[DevicePair<T>],
    primary: Option<&PrimaryLink<T>>,
) -> Result<T> {
    let kappa = prefactor(sp, state)?;
    let noise = env.noise_power()?;
    let mut rate_sum = T::zero();
    for pair in pairs {
        pair.validate()?;
        let d = denominator(noise, device, state, pair, primary)?;
        rate_sum = rate_sum + log2_1p(pair.power(device) * pair.gain(device) / d);
    }
    Ok(kappa * env.bandwidth_hz * rate_sum)
}

/// HRC throughput with the primary inactive.
pub fn throughput_hrc_effectual<T: Scalar>(
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    pairs: &[DevicePair<T>],
) -> Result<T> {
    throughput(sp, env, Device::Hrc, SensingState::Effectual, pairs, None)
}

/// MRC throughput with the primary inactive; the paired HRC signal interferes.
pub fn throughput_mrc_effectual<T: Scalar>(
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    pairs: &[DevicePair<T>],
) -> Result<T> {
    throughput(sp, env, Device::Mrc, SensingState::Effectual, pairs, None)
}

/// HRC throughput under a missed detection of the active primary.
pub fn throughput_hrc_interference<T: Scalar>(
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    pairs: &[DevicePair<T>],
    primary: &PrimaryLink<T>,
) -> Result<T> {
    primary.validate()?;
    throughput(sp, env, Device::Hrc, SensingState::Interference, pairs, Some(primary))
}

/// MRC throughput under a missed detection; both HRC and primary interfere.
pub fn throughput_mrc_interference<T: Scalar>(
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
    pairs: &[DevicePair<T>],
    primary: &PrimaryLink<T>,
) -> Result<T> {
    primary.validate()?;
    throughput(sp, env, Device::Mrc, SensingState::Interference, pairs, Some(primary))
}

/// `S / (P_tx + P_cp + P_sp)` in bits/s/W.
pub fn energy_efficiency<T: Scalar>(throughput_bps: T, p_tx: T, oh: &PowerOverheads<T>) -> Result<T> {
    let total = p_tx + oh.total();
    if !(total > T::zero()) {
        return Err(Error::domain(format!(
            "total consumed power must be > 0 W, got {}",
            to_f64(total)
        )));
    }
    Ok(throughput_bps / total)
}

/// Improvement relative to the optimized value: `100 (opt - orig) / opt`.
pub fn improvement_percent<T: Scalar>(original: T, optimized: T) -> Result<T> {
    if !(optimized > T::zero()) {
        return Err(Error::domain(format!(
            "optimized value must be > 0, got {}",
            to_f64(optimized)
        )));
    }
    Ok(cst::<T>(100.0) * (optimized - original) / optimized)
}
