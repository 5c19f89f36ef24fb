//! Principal branch of the Lambert W function on the real line.
//!
//! `W0(x)` solves `w * e^w = x` with `w >= -1`, defined for `x >= -1/e`.
//! The initial guess is `ln(1 + x)` for `x >= 0` and the branch-point series
//! `-1 + p - p^2/3 + 11 p^3 / 72` with `p = sqrt(2 (e x + 1))` for `x < 0`;
//! Halley's method then refines it.

use crate::error::{Error, Result};
use crate::scalar::{cst, to_f64, Scalar};

const MAX_ITERATIONS: usize = 50;

/// Inputs this far below `-1/e` are treated as rounding noise and clamped.
const BRANCH_CLAMP: f64 = 1e-12;

/// Argument of the principal-branch Lambert W, validated to lie in `[-1/e, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LambertArg<T>(T);

impl<T: Scalar> LambertArg<T> {
    pub fn new(x: T) -> Result<Self> {
        if x.is_nan() {
            return Err(Error::invalid("x", "NaN has no Lambert W value"));
        }
        let branch = -T::one() / T::E();
        if x < branch {
            if branch - x <= cst(BRANCH_CLAMP) {
                return Ok(LambertArg(branch));
            }
            return Err(Error::domain(format!(
                "Lambert W0 undefined for x = {} < -1/e",
                to_f64(x)
            )));
        }
        Ok(LambertArg(x))
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// Principal-branch Lambert W of a validated argument.
pub fn lambert_w0<T: Scalar>(arg: LambertArg<T>) -> T {
    let x = arg.0;
    let one = T::one();
    let branch = -one / T::E();

    if x == T::zero() {
        return T::zero();
    }
    if x == branch {
        return -one;
    }
    if x == T::infinity() {
        return T::infinity();
    }

    let mut w = if x >= T::zero() {
        x.ln_1p()
    } else {
        let p = (cst::<T>(2.0) * (T::E() * x + one)).max(T::zero()).sqrt();
        -one + p - p * p / cst(3.0) + cst::<T>(11.0 / 72.0) * p * p * p
    };

    let tol = T::solver_tolerance();
    let two = cst::<T>(2.0);
    for _ in 0..MAX_ITERATIONS {
        let wp1 = w + one;
        if wp1 <= T::zero() {
            // Rounding pushed the iterate onto the branch point.
            return -one;
        }
        // Newton step f/f' written as (w - x e^-w)/(w + 1) so large x cannot
        // overflow e^w.
        let newton = (w - x * (-w).exp()) / wp1;
        let step = newton / (one - (w + two) * newton / (two * wp1));
        let next = if step.is_finite() { w - step } else { w - newton };
        let delta = (next - w).abs();
        w = next.max(-one);
        if delta <= tol * (one + w.abs()) {
            break;
        }
    }
    w
}

/// Convenience wrapper validating a raw scalar first.
pub fn lambert_w0_checked<T: Scalar>(x: T) -> Result<T> {
    Ok(lambert_w0(LambertArg::new(x)?))
}
