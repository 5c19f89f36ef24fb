//! Energy-efficiency analysis for cognitive NOMA device pairs.
//!
//! An HRC (high-rate) and an MRC (low-rate) device share each subcarrier and
//! are decoded with successive interference cancellation. Each device's
//! transmit power can be set to the energy-efficiency optimum in closed form
//! using the principal branch of the Lambert W function.
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`). Type aliases at the
//! crate root fix the scalar to `f64`; the `*32` aliases fix it to `f32`.
//!
//! ```
//! use noma_ee::{optimal_power, reference_problem};
//!
//! let r = optimal_power(&reference_problem()).unwrap();
//! let e2 = std::f64::consts::E.powi(2);
//! assert!((r.p_star - (e2 - 1.0)).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv_out;
pub mod error;
pub mod lambert;
pub mod link;
pub mod optimize;
pub mod pathloss;
pub mod scalar;
pub mod scenario;
pub mod search;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
pub use lambert::{lambert_w0, lambert_w0_checked};
pub use link::{
    classify_state, denominator, duty_factor, energy_efficiency, improvement_percent, pair_throughput, prefactor,
    throughput, throughput_hrc_effectual, throughput_hrc_interference, throughput_mrc_effectual,
    throughput_mrc_interference, Device, SensingState,
};
pub use optimize::{
    ee_of_power, numerical_argmax, optimal_power, optimal_power_with, optimize_scenario, reference_problem,
    CouplingMode, Infeasibility,
};
pub use pathloss::{link_gain, pl_average, pl_average_with, pl_los, pl_nlos, power_gain, CombineMode, PathlossDb};
pub use scalar::Scalar;
pub use scenario::{builtin, load_scenario, run_sweep, run_sweep_with, solve_gain_for_target, UnitMode};
pub use units::{dbm_to_watt, noise_power, watt_to_dbm};

pub type PowerDbm = units::PowerDbm<f64>;
pub type PowerWatt = units::PowerWatt<f64>;
pub type LambertArg = lambert::LambertArg<f64>;
pub type PathlossInput = pathloss::PathlossInput<f64>;
pub type SensingProfile = link::SensingProfile<f64>;
pub type RadioEnvironment = link::RadioEnvironment<f64>;
pub type DevicePair = link::DevicePair<f64>;
pub type PrimaryLink = link::PrimaryLink<f64>;
pub type PowerOverheads = link::PowerOverheads<f64>;
pub type MetricPoint = link::MetricPoint<f64>;
pub type OptProblem = optimize::OptProblem<f64>;
pub type OptResult = optimize::OptResult<f64>;
pub type PairOptimum = optimize::PairOptimum<f64>;
pub type Scenario = scenario::Scenario<f64>;
pub type SweepSeries = scenario::SweepSeries<f64>;
pub type SweepPoint = scenario::SweepPoint<f64>;

pub type PowerDbm32 = units::PowerDbm<f32>;
pub type PowerWatt32 = units::PowerWatt<f32>;
pub type SensingProfile32 = link::SensingProfile<f32>;
pub type RadioEnvironment32 = link::RadioEnvironment<f32>;
pub type DevicePair32 = link::DevicePair<f32>;
pub type OptProblem32 = optimize::OptProblem<f32>;
pub type OptResult32 = optimize::OptResult<f32>;
