//! Energy-efficiency-optimal transmit power.
//!
//! For a device with own-link gain `g2`, total noise-plus-interference `D` and
//! fixed overhead `C = P_cp + P_sp`, the energy efficiency
//!
//! ```text
//! EE(P) = k * log2(1 + P g2 / D) / (P + C)
//! ```
//!
//! is maximized at
//!
//! ```text
//! P* = (C g2 - D) / (W0(a / e) g2) - D / g2,    a = (C g2 - D) / D
//! ```
//!
//! The same expression covers both device classes in both sensing states; only
//! `D` changes (noise, plus the primary in the interference state, plus the
//! paired HRC signal for MRC). The prefactor `k` never enters `P*`.
//!
//! [`numerical_argmax`] is an independent golden-section oracle for the same
//! maximum.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambert::{lambert_w0, LambertArg};
use crate::link::{
    denominator, log2_1p, prefactor, Device, DevicePair, PowerOverheads, PrimaryLink, RadioEnvironment,
    SensingProfile, SensingState,
};
use crate::scalar::{cst, to_f64, Scalar};
use crate::scenario::Scenario;
use crate::search::golden_section_max;

/// Ceiling for the oracle's auto-doubling bracket, watts.
pub const ORACLE_CEILING_W: f64 = 1e12;

/// Relative interval width at which the oracle stops.
pub const ORACLE_REL_TOL: f64 = 1e-9;

/// Single-device EE maximization problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptProblem<T> {
    /// Own-link power gain `|g|^2`.
    pub g2: T,
    /// Noise plus all interference received power, watts.
    pub d_total: T,
    pub overheads: PowerOverheads<T>,
    /// Initial upper bracket for the oracle, watts.
    pub p_max: T,
    pub state: SensingState,
    pub device: Device,
}

/// Why a closed-form evaluation produced no usable power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Infeasibility {
    /// The Lambert argument fell below `-1/e`.
    LambertDomain,
    /// `P*` evaluated to zero, a negative number or a non-finite value.
    NonPositivePower,
}

/// Closed-form optimum for one problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult<T> {
    pub p_star: T,
    /// `log2(1 + P* g2 / D) / (P* + C)`: EE per unit of `k`, bits/s/Hz/W.
    pub ee_at_star: T,
    pub feasible: bool,
    /// `a / e`, kept for diagnostics.
    pub lambert_arg: T,
    pub infeasibility: Option<Infeasibility>,
}

/// Which HRC power the MRC denominator uses when optimizing MRC.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingMode {
    /// The HRC transmits at its configured power.
    #[default]
    Nominal,
    /// The HRC transmits at its own optimum.
    Cascaded,
}

impl std::fmt::Display for CouplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CouplingMode::Nominal => "nominal",
            CouplingMode::Cascaded => "cascaded",
        })
    }
}

impl<T: Scalar> OptProblem<T> {
    pub fn new(
        g2: T,
        d_total: T,
        overheads: PowerOverheads<T>,
        p_max: T,
        state: SensingState,
        device: Device,
    ) -> Result<Self> {
        let prob = OptProblem {
            g2,
            d_total,
            overheads,
            p_max,
            state,
            device,
        };
        prob.validate()?;
        Ok(prob)
    }

    /// Problem for one device of one pair, with `D` assembled from the environment.
    pub fn for_pair(
        env: &RadioEnvironment<T>,
        pair: &DevicePair<T>,
        primary: Option<&PrimaryLink<T>>,
        overheads: PowerOverheads<T>,
        p_max: T,
        state: SensingState,
        device: Device,
    ) -> Result<Self> {
        pair.validate()?;
        let d = denominator(env.noise_power()?, device, state, pair, primary)?;
        OptProblem::new(pair.gain(device), d, overheads, p_max, state, device)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g2 > T::zero()) || !self.g2.is_finite() {
            return Err(Error::invalid("g2", format!("gain {} must be finite and > 0", to_f64(self.g2))));
        }
        if !(self.d_total > T::zero()) || !self.d_total.is_finite() {
            return Err(Error::invalid(
                "d_total",
                format!("denominator power {} must be finite and > 0", to_f64(self.d_total)),
            ));
        }
        self.overheads.validate()?;
        if !(self.p_max > T::zero()) {
            return Err(Error::invalid("p_max", "search ceiling must be > 0"));
        }
        Ok(())
    }

    /// `C = P_cp + P_sp`.
    pub fn fixed_power(&self) -> T {
        self.overheads.total()
    }

    /// `((C g2 - D) / D) e^-1`. Unchanged by a joint scaling of `g2` and `D`.
    pub fn lambert_argument(&self) -> T {
        let c = self.fixed_power();
        (c * self.g2 - self.d_total) / self.d_total / T::E()
    }

    /// EE per unit prefactor: `log2(1 + p g2 / D) / (p + C)`.
    pub fn normalized_ee(&self, p: T) -> T {
        log2_1p(p * self.g2 / self.d_total) / (p + self.fixed_power())
    }
}

/// Closed-form optimal transmit power.
pub fn optimal_power<T: Scalar>(prob: &OptProblem<T>) -> Result<OptResult<T>> {
    optimal_power_with(prob, |x| Ok(lambert_w0(LambertArg::new(x)?)))
}

/// [`optimal_power`] with a caller-supplied principal-branch Lambert W.
pub fn optimal_power_with<T, W>(prob: &OptProblem<T>, lambert: W) -> Result<OptResult<T>>
where
    T: Scalar,
    W: Fn(T) -> Result<T>,
{
    prob.validate()?;
    let g2 = prob.g2;
    let d = prob.d_total;
    let numerator = prob.fixed_power() * g2 - d;
    let arg = prob.lambert_argument();

    let infeasible = |why| OptResult {
        p_star: T::nan(),
        ee_at_star: T::nan(),
        feasible: false,
        lambert_arg: arg,
        infeasibility: Some(why),
    };

    let w = match lambert(arg) {
        Ok(w) => w,
        Err(Error::Domain(_)) => return Ok(infeasible(Infeasibility::LambertDomain)),
        Err(e) => return Err(e),
    };

    let p_star = if numerator == T::zero() {
        // 0/0 in the printed form; the limit of a / W0(a/e) as a -> 0 is e.
        d / g2 * (T::E() - T::one())
    } else {
        numerator / (w * g2) - d / g2
    };

    if !(p_star > T::zero()) || !p_star.is_finite() {
        return Ok(infeasible(Infeasibility::NonPositivePower));
    }
    Ok(OptResult {
        p_star,
        ee_at_star: prob.normalized_ee(p_star),
        feasible: true,
        lambert_arg: arg,
        infeasibility: None,
    })
}

/// `k b log2(1 + p g2 / D) / (p + C)` with `k` taken from the sensing profile
/// for the problem's state.
pub fn ee_of_power<T: Scalar>(
    p: T,
    prob: &OptProblem<T>,
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
) -> Result<T> {
    if !(p >= T::zero()) {
        return Err(Error::domain(format!("power must be >= 0, got {}", to_f64(p))));
    }
    let scale = prefactor(sp, prob.state)? * env.bandwidth_hz;
    Ok(scale * prob.normalized_ee(p))
}

/// Golden-section argmax of [`ee_of_power`] over `(0, p_max]`.
///
/// `p_max` is doubled until the objective is decreasing there (up to
/// [`ORACLE_CEILING_W`]); the lower end shrinks until the objective is
/// increasing. Shares nothing with the closed form but the objective.
pub fn numerical_argmax<T: Scalar>(
    prob: &OptProblem<T>,
    sp: &SensingProfile<T>,
    env: &RadioEnvironment<T>,
) -> Result<T> {
    prob.validate()?;
    let scale = prefactor(sp, prob.state)? * env.bandwidth_hz;
    if !(scale > T::zero()) {
        return Err(Error::domain("prefactor is zero: EE vanishes for every power"));
    }
    let f = |p: T| scale * prob.normalized_ee(p);
    let probe = cst::<T>(1e-3);

    let ceiling = cst::<T>(ORACLE_CEILING_W);
    let mut hi = prob.p_max;
    while !(f(hi * (T::one() - probe)) > f(hi)) {
        hi = hi * cst(2.0);
        if hi > ceiling {
            return Err(Error::Unbounded(format!(
                "EE still non-decreasing at {} W",
                ORACLE_CEILING_W
            )));
        }
    }

    let floor = T::min_positive_value() * cst(1e20);
    let mut lo = hi * cst(1e-6);
    while !(f(lo * (T::one() + probe)) > f(lo)) {
        lo = lo * cst(1e-3);
        if lo < floor {
            return Err(Error::Unbounded("EE not increasing near zero power".into()));
        }
    }

    Ok(golden_section_max(f, lo, hi, cst(ORACLE_REL_TOL)))
}

/// Optima for both devices of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOptimum<T> {
    pub index: usize,
    pub hrc_problem: OptProblem<T>,
    pub hrc: OptResult<T>,
    pub mrc_problem: OptProblem<T>,
    pub mrc: OptResult<T>,
}

impl<T: Scalar> PairOptimum<T> {
    pub fn result(&self, device: Device) -> &OptResult<T> {
        match device {
            Device::Hrc => &self.hrc,
            Device::Mrc => &self.mrc,
        }
    }

    pub fn problem(&self, device: Device) -> &OptProblem<T> {
        match device {
            Device::Hrc => &self.hrc_problem,
            Device::Mrc => &self.mrc_problem,
        }
    }
}

/// Per-pair optimal powers for both device classes in `state`.
///
/// In cascaded mode the MRC problem sees the HRC optimum (or the nominal HRC
/// power if that pair's HRC optimum is infeasible).
pub fn optimize_scenario<T: Scalar>(
    scn: &Scenario<T>,
    state: SensingState,
    coupling: CouplingMode,
) -> Result<Vec<PairOptimum<T>>> {
    let primary = match state {
        SensingState::Effectual => None,
        SensingState::Interference => Some(&scn.primary),
    };
    scn.pairs
        .iter()
        .enumerate()
        .map(|(index, pair)| {
            let hrc_problem =
                OptProblem::for_pair(&scn.env, pair, primary, scn.overheads, scn.p_max, state, Device::Hrc)?;
            let hrc = optimal_power(&hrc_problem)?;
            let mrc_pair = match coupling {
                CouplingMode::Cascaded if hrc.feasible => pair.with_power(Device::Hrc, hrc.p_star),
                _ => *pair,
            };
            let mrc_problem =
                OptProblem::for_pair(&scn.env, &mrc_pair, primary, scn.overheads, scn.p_max, state, Device::Mrc)?;
            let mrc = optimal_power(&mrc_problem)?;
            Ok(PairOptimum {
                index,
                hrc_problem,
                hrc,
                mrc_problem,
                mrc,
            })
        })
        .collect()
}

/// Unit problem with `D = g2 = 1` and `C = 1 + e^2`, whose optimum is `e^2 - 1`.
pub fn reference_problem() -> OptProblem<f64> {
    OptProblem {
        g2: 1.0,
        d_total: 1.0,
        overheads: PowerOverheads {
            p_cp: E * E,
            p_sp: 1.0,
        },
        p_max: 1.0,
        state: SensingState::Effectual,
        device: Device::Hrc,
    }
}
