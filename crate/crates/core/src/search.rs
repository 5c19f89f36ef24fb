//! Golden-section search for the maximum of a unimodal function on a
//! positive interval.
//!
//! The search runs on `ln p`, so the stopping width is relative: it ends when
//! `hi / lo - 1 <= rel_tol`. Each iteration reuses one of the two interior
//! points, so it costs a single function evaluation.

use crate::scalar::{cst, Scalar};

const MAX_ITERATIONS: usize = 10_000;

/// Maximizes `f` on `[lo, hi]` (both > 0) assuming `f` is unimodal in `p`.
pub fn golden_section_max<T, F>(f: F, lo: T, hi: T, rel_tol: T) -> T
where
    T: Scalar,
    F: Fn(T) -> T,
{
    // 1/phi
    let inv_phi = (cst::<T>(5.0).sqrt() - T::one()) / cst(2.0);
    let mut a = lo.ln();
    let mut b = hi.ln();
    let g = |t: T| f(t.exp());

    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);

    // ln(1 + rel_tol) ~ rel_tol for the tolerances used here.
    let width = rel_tol.ln_1p();
    let mut iterations = 0;
    while b - a > width && iterations < MAX_ITERATIONS {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    ((a + b) / cst(2.0)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let p = golden_section_max(|x: f64| -(x - 3.0).powi(2), 1e-3, 1e3, 1e-10);
        assert!((p - 3.0).abs() < 1e-7);
    }

    #[test]
    fn spans_many_decades() {
        let target = 2.5e-7;
        let p = golden_section_max(|x: f64| -(x.ln() - f64::ln(target)).powi(2), 1e-20, 1e12, 1e-11);
        assert!((p / target - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_precision() {
        let p = golden_section_max(|x: f32| -(x - 0.5).powi(2), 1e-3, 10.0, 1e-5);
        assert!((p - 0.5).abs() < 1e-3);
    }
}
