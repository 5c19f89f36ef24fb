//! Logarithmic/linear power conversions and thermal noise power.
//!
//! dBm is referenced to 1 mW. All downstream math runs in linear watts.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{cst, to_f64, Scalar};

/// Power in decibel-milliwatts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerDbm<T>(pub T);

/// Linear power in watts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerWatt<T>(pub T);

impl<T: Scalar> PowerDbm<T> {
    pub fn value(self) -> T {
        self.0
    }

    pub fn to_watt(self) -> Result<PowerWatt<T>> {
        dbm_to_watt(self)
    }
}

impl<T: Scalar> PowerWatt<T> {
    pub fn value(self) -> T {
        self.0
    }

    pub fn to_dbm(self) -> Result<PowerDbm<T>> {
        watt_to_dbm(self)
    }
}

impl<T: Scalar> fmt::Display for PowerDbm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} dBm", self.0)
    }
}

impl<T: Scalar> fmt::Display for PowerWatt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} W", self.0)
    }
}

/// `10^((x - 30) / 10)` watts.
pub fn dbm_to_watt<T: Scalar>(x: PowerDbm<T>) -> Result<PowerWatt<T>> {
    if !x.0.is_finite() {
        return Err(Error::invalid("dbm", format!("{} is not finite", to_f64(x.0))));
    }
    let ten = cst::<T>(10.0);
    Ok(PowerWatt(ten.powf((x.0 - cst(30.0)) / ten)))
}

/// Inverse of [`dbm_to_watt`]; the power must be strictly positive.
pub fn watt_to_dbm<T: Scalar>(x: PowerWatt<T>) -> Result<PowerDbm<T>> {
    if !x.0.is_finite() {
        return Err(Error::invalid("watt", format!("{} is not finite", to_f64(x.0))));
    }
    if x.0 <= T::zero() {
        return Err(Error::domain(format!(
            "cannot express {} W in dBm (power must be > 0)",
            to_f64(x.0)
        )));
    }
    Ok(PowerDbm(cst::<T>(10.0) * x.0.log10() + cst(30.0)))
}

/// Noise power `n_p * b` in watts for a noise spectral density in dBm/Hz and a
/// bandwidth in Hz.
pub fn noise_power<T: Scalar>(psd_dbm_per_hz: PowerDbm<T>, bandwidth_hz: T) -> Result<PowerWatt<T>> {
    if !bandwidth_hz.is_finite() || bandwidth_hz <= T::zero() {
        return Err(Error::domain(format!(
            "bandwidth must be > 0 Hz, got {}",
            to_f64(bandwidth_hz)
        )));
    }
    let p = dbm_to_watt(psd_dbm_per_hz)?.0 * bandwidth_hz;
    if !p.is_finite() {
        return Err(Error::domain("noise power overflows"));
    }
    Ok(PowerWatt(p))
}
