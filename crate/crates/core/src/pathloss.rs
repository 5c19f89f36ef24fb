//! LOS / NLOS pathloss and the LOS-probability-weighted average.
//!
//! The fit is valid for 10–2000 m and 2–6 GHz. Inputs outside that range are
//! still evaluated; [`PathlossInput::validity_warnings`] reports them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cst, to_f64, Scalar};

pub const VALID_DISTANCE_M: (f64, f64) = (10.0, 2000.0);
pub const VALID_FREQUENCY_GHZ: (f64, f64) = (2.0, 6.0);

/// Link geometry for a pathloss query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossInput<T> {
    pub distance_m: T,
    pub carrier_ghz: T,
    /// LOS probability coefficient in `[0, 1]`.
    pub omega: T,
}

/// Pathloss in dB.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PathlossDb<T>(pub T);

/// How the LOS and NLOS losses are blended.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombineMode {
    /// `omega * PL_los + (1 - omega) * PL_nlos` in dB.
    #[default]
    Db,
    /// Average the linear gains, then convert back to dB.
    Linear,
}

/// Out-of-range geometry. Evaluated anyway; carried into result metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidityWarning {
    DistanceOutOfRange { distance_m: f64 },
    FrequencyOutOfRange { carrier_ghz: f64 },
}

impl<T: Scalar> PathlossInput<T> {
    pub fn new(distance_m: T, carrier_ghz: T, omega: T) -> Self {
        PathlossInput {
            distance_m,
            carrier_ghz,
            omega,
        }
    }

    fn check_geometry(&self) -> Result<()> {
        if !self.distance_m.is_finite() || self.distance_m <= T::zero() {
            return Err(Error::domain(format!(
                "distance must be > 0 m, got {}",
                to_f64(self.distance_m)
            )));
        }
        if !self.carrier_ghz.is_finite() || self.carrier_ghz <= T::zero() {
            return Err(Error::domain(format!(
                "carrier frequency must be > 0 GHz, got {}",
                to_f64(self.carrier_ghz)
            )));
        }
        Ok(())
    }

    fn check_omega(&self) -> Result<()> {
        if !(self.omega >= T::zero() && self.omega <= T::one()) {
            return Err(Error::domain(format!(
                "omega must lie in [0, 1], got {}",
                to_f64(self.omega)
            )));
        }
        Ok(())
    }

    pub fn validity_warnings(&self) -> Vec<ValidityWarning> {
        let mut out = Vec::new();
        let d = to_f64(self.distance_m);
        let f = to_f64(self.carrier_ghz);
        if !(VALID_DISTANCE_M.0..=VALID_DISTANCE_M.1).contains(&d) {
            out.push(ValidityWarning::DistanceOutOfRange { distance_m: d });
        }
        if !(VALID_FREQUENCY_GHZ.0..=VALID_FREQUENCY_GHZ.1).contains(&f) {
            out.push(ValidityWarning::FrequencyOutOfRange { carrier_ghz: f });
        }
        out
    }
}

/// `22 log10(d) + 28 + 20 log10(f_GHz)`.
pub fn pl_los<T: Scalar>(input: &PathlossInput<T>) -> Result<PathlossDb<T>> {
    input.check_geometry()?;
    Ok(PathlossDb(
        cst::<T>(22.0) * input.distance_m.log10()
            + cst(28.0)
            + cst::<T>(20.0) * input.carrier_ghz.log10(),
    ))
}

/// `36.7 log10(d) + 22.7 + 26 log10(f_GHz)`.
pub fn pl_nlos<T: Scalar>(input: &PathlossInput<T>) -> Result<PathlossDb<T>> {
    input.check_geometry()?;
    Ok(PathlossDb(
        cst::<T>(36.7) * input.distance_m.log10()
            + cst(22.7)
            + cst::<T>(26.0) * input.carrier_ghz.log10(),
    ))
}

/// Weighted pathloss, blended in the dB domain.
pub fn pl_average<T: Scalar>(input: &PathlossInput<T>) -> Result<PathlossDb<T>> {
    pl_average_with(input, CombineMode::Db)
}

pub fn pl_average_with<T: Scalar>(
    input: &PathlossInput<T>,
    mode: CombineMode,
) -> Result<PathlossDb<T>> {
    input.check_omega()?;
    let los = pl_los(input)?.0;
    let nlos = pl_nlos(input)?.0;
    let w = input.omega;
    match mode {
        CombineMode::Db => Ok(PathlossDb(w * los + (T::one() - w) * nlos)),
        CombineMode::Linear => {
            let g = w * power_gain(PathlossDb(los))? + (T::one() - w) * power_gain(PathlossDb(nlos))?;
            Ok(PathlossDb(-cst::<T>(10.0) * g.log10()))
        }
    }
}

/// Power channel gain `|g|^2 = 10^(-PL/10)`.
pub fn power_gain<T: Scalar>(pl: PathlossDb<T>) -> Result<T> {
    if !pl.0.is_finite() {
        return Err(Error::invalid("pathloss", format!("{} is not finite", to_f64(pl.0))));
    }
    Ok(cst::<T>(10.0).powf(-pl.0 / cst(10.0)))
}

/// Gain of a link at the given geometry using the chosen blend.
pub fn link_gain<T: Scalar>(input: &PathlossInput<T>, mode: CombineMode) -> Result<T> {
    power_gain(pl_average_with(input, mode)?)
}
