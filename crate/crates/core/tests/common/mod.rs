//! Property checks shared by the proptest suite and the acceptance runner.
//!
//! Each `check_*` takes concrete inputs and returns `Err(description)` on a
//! violation. Oracles here are written independently of the library.

#![allow(dead_code)]

use std::f64::consts::E;
use std::fmt::Display;

use noma_ee::csv_out::write_sweep_csv;
use noma_ee::link::{DevicePair, MetricPoint, PowerOverheads, PrimaryLink, RadioEnvironment, SensingProfile};
use noma_ee::optimize::OptProblem;
use noma_ee::pathloss::PathlossInput;
use noma_ee::scenario::{Grid, Scenario};
use noma_ee::units::{PowerDbm, PowerWatt};
use noma_ee::{
    dbm_to_watt, lambert_w0_checked, numerical_argmax, optimal_power, pair_throughput, pl_average_with, pl_los,
    pl_nlos, power_gain, run_sweep, throughput, watt_to_dbm, CombineMode, Device, PathlossDb, SensingState,
};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn s<E: Display>(e: E) -> String {
    e.to_string()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

pub const STATES: [SensingState; 2] = [SensingState::Effectual, SensingState::Interference];
pub const DEVICES: [Device; 2] = [Device::Hrc, Device::Mrc];

pub fn env() -> RadioEnvironment<f64> {
    RadioEnvironment {
        bandwidth_hz: 1e6,
        noise_psd: PowerDbm(-174.0),
        carrier_ghz: 5.0,
    }
}

/// `n_p b` for the reference environment, computed from first principles.
pub fn noise_w() -> f64 {
    10f64.powf((-174.0 - 30.0) / 10.0) * 1e6
}

pub fn sensing(p_x0: f64, p_x1: f64, p_f: f64, p_d: f64) -> SensingProfile<f64> {
    SensingProfile {
        t_t: 0.125e-3,
        t_se: 0.125e-3,
        p_x0,
        p_x1,
        p_f,
        p_d,
    }
}

pub fn primary(p_p: f64, g_p2: f64) -> PrimaryLink<f64> {
    PrimaryLink {
        p_p,
        g_p2,
        mu_p_db: -10.0,
        mu_threshold_db: -20.0,
    }
}

pub fn overheads() -> PowerOverheads<f64> {
    PowerOverheads { p_cp: 99.0, p_sp: 1.0 }
}

// ---- units ----

pub fn check_dbm_round_trip(x: f64) -> Check {
    let back = watt_to_dbm(dbm_to_watt(PowerDbm(x)).map_err(s)?).map_err(s)?.0;
    ensure!((back - x).abs() <= 1e-12, "{x} dBm -> {back} dBm");
    let w = 10f64.powf((x - 30.0) / 10.0);
    ensure!(rel(dbm_to_watt(PowerDbm(x)).map_err(s)?.0, w) <= 1e-13, "{x} dBm != {w} W");
    ensure!(watt_to_dbm(PowerWatt(0.0)).is_err(), "0 W accepted");
    Ok(())
}

// ---- lambert ----

pub fn check_lambert_identity(x: f64) -> Check {
    let w = lambert_w0_checked(x).map_err(s)?;
    let resid = (w * w.exp() - x).abs();
    ensure!(resid <= 1e-12 * x.abs().max(1.0), "x = {x:e}: |W e^W - x| = {resid:e}");
    ensure!(w >= -1.0, "x = {x:e}: W = {w} below the principal branch");
    Ok(())
}

pub fn check_lambert_monotone(x1: f64, x2: f64) -> Check {
    let (a, b) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    let (wa, wb) = (lambert_w0_checked(a).map_err(s)?, lambert_w0_checked(b).map_err(s)?);
    ensure!(wa < wb, "W({a:e}) = {wa} not below W({b:e}) = {wb}");
    Ok(())
}

/// Arguments log-spaced over `[-1/e + 1e-9, 1e9]`, built as branch offsets
/// `1e-9 .. 1/e` followed by `1e-12 .. 1e9`.
pub fn lambert_test_grid(n: usize) -> Vec<f64> {
    let half = n / 2;
    let mut xs: Vec<f64> = (0..half)
        .map(|i| {
            let lo = 1e-9f64.ln();
            let hi = (1.0 / E).ln();
            -1.0 / E + (lo + (hi - lo) * i as f64 / half as f64).exp()
        })
        .collect();
    let rest = n - half;
    xs.extend((0..rest).map(|i| {
        let lo = 1e-12f64.ln();
        let hi = 1e9f64.ln();
        (lo + (hi - lo) * i as f64 / (rest - 1) as f64).exp()
    }));
    xs
}

// ---- pathloss ----

fn reference_los(d: f64, f: f64) -> f64 {
    22.0 * d.log10() + 28.0 + 20.0 * f.log10()
}

fn reference_nlos(d: f64, f: f64) -> f64 {
    36.7 * d.log10() + 22.7 + 26.0 * f.log10()
}

pub fn check_pathloss_monotone(d: f64, f: f64, k: f64) -> Check {
    let q = |d, f| PathlossInput::new(d, f, 0.5);
    for (name, pl) in [
        ("los", pl_los as fn(&PathlossInput<f64>) -> noma_ee::Result<PathlossDb<f64>>),
        ("nlos", pl_nlos),
    ] {
        let base = pl(&q(d, f)).map_err(s)?.0;
        let far = pl(&q(d * k, f)).map_err(s)?.0;
        let high = pl(&q(d, f * k)).map_err(s)?.0;
        ensure!(far > base, "{name} not increasing in d at {d} m x{k}");
        ensure!(high > base, "{name} not increasing in f at {f} GHz x{k}");
    }
    ensure!((pl_los(&q(d, f)).map_err(s)?.0 - reference_los(d, f)).abs() <= 1e-9, "los formula at {d}, {f}");
    ensure!((pl_nlos(&q(d, f)).map_err(s)?.0 - reference_nlos(d, f)).abs() <= 1e-9, "nlos formula at {d}, {f}");
    Ok(())
}

pub fn check_pathloss_bounded(d: f64, f: f64, omega: f64) -> Check {
    let input = PathlossInput::new(d, f, omega);
    let los = pl_los(&input).map_err(s)?.0;
    let nlos = pl_nlos(&input).map_err(s)?.0;
    let (lo, hi) = (los.min(nlos), los.max(nlos));
    for mode in [CombineMode::Db, CombineMode::Linear] {
        let avg = pl_average_with(&input, mode).map_err(s)?.0;
        let slack = 1e-9 * hi.abs().max(1.0);
        ensure!(avg >= lo - slack && avg <= hi + slack, "{mode:?} average {avg} outside [{lo}, {hi}]");
    }
    let db = pl_average_with(&input, CombineMode::Db).map_err(s)?.0;
    ensure!((db - (omega * los + (1.0 - omega) * nlos)).abs() <= 1e-9, "dB blend formula");
    Ok(())
}

pub fn check_gain_decreasing(d: f64, k: f64, f: f64, omega: f64) -> Check {
    for mode in [CombineMode::Db, CombineMode::Linear] {
        let g = |d| noma_ee::link_gain(&PathlossInput::new(d, f, omega), mode);
        let (near, far) = (g(d).map_err(s)?, g(d * k).map_err(s)?);
        ensure!(far < near, "{mode:?}: gain at {} m ({far:e}) not below gain at {d} m ({near:e})", d * k);
    }
    Ok(())
}

pub fn check_gain_inverse(pl: f64) -> Check {
    let g = power_gain(PathlossDb(pl)).map_err(s)?;
    ensure!(rel(g * 10f64.powf(pl / 10.0), 1.0) <= 1e-12, "pl {pl}: g = {g:e}");
    Ok(())
}

// ---- link metrics ----

#[derive(Debug, Clone)]
pub struct LinkCase {
    pub sp: SensingProfile<f64>,
    pub pairs: Vec<DevicePair<f64>>,
    pub primary: PrimaryLink<f64>,
}

/// Independent throughput: `t_t/(t_t+t_se) * p_x * (1-p_f | 1-p_d) * b * sum log2(1 + P g2 / D)`.
pub fn reference_throughput(c: &LinkCase, device: Device, state: SensingState) -> f64 {
    let duty = c.sp.t_t / (c.sp.t_t + c.sp.t_se);
    let k = match state {
        SensingState::Effectual => c.sp.p_x0 * (1.0 - c.sp.p_f),
        SensingState::Interference => c.sp.p_x1 * (1.0 - c.sp.p_d),
    };
    let sum: f64 = c
        .pairs
        .iter()
        .map(|p| {
            let mut d = noise_w();
            if device == Device::Mrc {
                d += p.p_h * p.g_h2;
            }
            if state == SensingState::Interference {
                d += c.primary.p_p * c.primary.g_p2;
            }
            let (pw, g) = match device {
                Device::Hrc => (p.p_h, p.g_h2),
                Device::Mrc => (p.p_m, p.g_m2),
            };
            (pw * g / d).ln_1p() / 2f64.ln()
        })
        .sum();
    duty * k * 1e6 * sum
}

fn thr(c: &LinkCase, device: Device, state: SensingState) -> Result<f64, String> {
    throughput(&c.sp, &env(), device, state, &c.pairs, Some(&c.primary)).map_err(s)
}

pub fn check_throughput_formula(c: &LinkCase) -> Check {
    for state in STATES {
        for device in DEVICES {
            let got = thr(c, device, state)?;
            let want = reference_throughput(c, device, state);
            ensure!(rel(got, want) <= 1e-12, "{state}/{device}: {got} vs reference {want}");
        }
    }
    Ok(())
}

pub fn check_linearity(c: &LinkCase) -> Check {
    for state in STATES {
        for device in DEVICES {
            let full = thr(c, device, state)?;
            let half_case = LinkCase {
                sp: c.sp.with_p_x(state, c.sp.p_x(state) / 2.0),
                ..c.clone()
            };
            let half = thr(&half_case, device, state)?;
            ensure!(half * 2.0 == full, "{state}/{device}: S(p_x/2) * 2 = {} but S(p_x) = {full}", half * 2.0);
            let zero_case = LinkCase {
                sp: c.sp.with_p_x(state, 0.0),
                ..c.clone()
            };
            ensure!(thr(&zero_case, device, state)? == 0.0, "{state}/{device}: S(0) != 0");
        }
    }
    Ok(())
}

pub fn check_additivity(c: &LinkCase) -> Check {
    for state in STATES {
        for device in DEVICES {
            let total = thr(c, device, state)?;
            let parts: f64 = c
                .pairs
                .iter()
                .map(|p| pair_throughput(&c.sp, &env(), device, state, p, Some(&c.primary)))
                .sum::<noma_ee::Result<f64>>()
                .map_err(s)?;
            ensure!(
                (total - parts).abs() <= 1e-12 * total.abs().max(f64::MIN_POSITIVE),
                "{state}/{device}: sum {total} vs parts {parts}"
            );
        }
    }
    Ok(())
}

/// Requires `g_h2 == g_m2` per pair and `p_h > p_m > 0`.
pub fn check_hrc_dominates_mrc(c: &LinkCase) -> Check {
    let h = thr(c, Device::Hrc, SensingState::Effectual)?;
    let m = thr(c, Device::Mrc, SensingState::Effectual)?;
    ensure!(h > m, "effectual HRC {h} not above MRC {m}");
    Ok(())
}

/// Requires `p_x0 == p_x1 > 0`, `p_f <= 0.1`, `p_d >= 0.9`, `P_P g_P2 > 0`.
pub fn check_state_dominance(c: &LinkCase) -> Check {
    for device in DEVICES {
        let e = thr(c, device, SensingState::Effectual)?;
        let i = thr(c, device, SensingState::Interference)?;
        ensure!(i < e, "{device}: interference {i} not below effectual {e}");
    }
    Ok(())
}

pub fn check_ee_identity(throughput_bps: f64, p_tx: f64, p_cp: f64, p_sp: f64) -> Check {
    let oh = PowerOverheads { p_cp, p_sp };
    let m = MetricPoint::new(0.5, SensingState::Effectual, Device::Hrc, throughput_bps, p_tx, &oh, false)
        .map_err(s)?;
    let back = m.ee_bps_per_watt * (p_tx + p_cp + p_sp);
    ensure!(
        (back - throughput_bps).abs() <= 1e-12 * throughput_bps.abs(),
        "ee {} * P_total != {throughput_bps}",
        m.ee_bps_per_watt
    );
    Ok(())
}

/// Own power up raises throughput; interfering power up lowers it. `k > 1`.
pub fn check_monotone_sinr(c: &LinkCase, k: f64) -> Check {
    let scaled = |f: &dyn Fn(&mut DevicePair<f64>)| LinkCase {
        pairs: c
            .pairs
            .iter()
            .map(|p| {
                let mut p = *p;
                f(&mut p);
                p
            })
            .collect(),
        ..c.clone()
    };
    let up_h = scaled(&|p| p.p_h *= k);
    let up_m = scaled(&|p| p.p_m *= k);
    let up_p = LinkCase {
        primary: PrimaryLink {
            p_p: c.primary.p_p * k,
            ..c.primary
        },
        ..c.clone()
    };
    for state in STATES {
        let h = thr(c, Device::Hrc, state)?;
        let m = thr(c, Device::Mrc, state)?;
        ensure!(thr(&up_h, Device::Hrc, state)? > h, "{state}: HRC not increasing in P_H");
        ensure!(thr(&up_m, Device::Mrc, state)? > m, "{state}: MRC not increasing in P_M");
        ensure!(thr(&up_h, Device::Mrc, state)? < m, "{state}: MRC not decreasing in P_H");
        if state == SensingState::Interference {
            ensure!(thr(&up_p, Device::Hrc, state)? < h, "HRC not decreasing in P_P");
            ensure!(thr(&up_p, Device::Mrc, state)? < m, "MRC not decreasing in P_P");
        }
    }
    Ok(())
}

// ---- optimizer ----

pub fn problem(g2: f64, d: f64, c: f64) -> OptProblem<f64> {
    OptProblem {
        g2,
        d_total: d,
        overheads: PowerOverheads { p_cp: c - 1.0, p_sp: 1.0 },
        p_max: 1000.0,
        state: SensingState::Effectual,
        device: Device::Hrc,
    }
}

/// `ln(1 + p g2 / D) / (p + C)`, proportional to EE.
pub fn objective(prob: &OptProblem<f64>, p: f64) -> f64 {
    (p * prob.g2 / prob.d_total).ln_1p() / (p + prob.overheads.p_cp + prob.overheads.p_sp)
}

/// Stationary point from `(1 + v) ln(1 + v) - v = C g2 / D`, `v = P g2 / D`,
/// found by bisection on `ln v`. Shares no code with the library.
pub fn bisection_optimum(prob: &OptProblem<f64>) -> f64 {
    let c = (prob.overheads.p_cp + prob.overheads.p_sp) * prob.g2 / prob.d_total;
    let h = |v: f64| (1.0 + v) * v.ln_1p() - v - c;
    let (mut lo, mut hi) = (-60.0f64, 80.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid.exp()) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp() * prob.d_total / prob.g2
}

pub fn check_oracle_equivalence(prob: &OptProblem<f64>) -> Check {
    let r = optimal_power(prob).map_err(s)?;
    ensure!(r.feasible, "infeasible: {r:?}");
    let golden = numerical_argmax(prob, &sensing(0.5, 0.5, 0.1, 0.9), &env()).map_err(s)?;
    let bisect = bisection_optimum(prob);
    ensure!(rel(golden, r.p_star) <= 1e-6, "golden {golden:e} vs closed {:e}", r.p_star);
    ensure!(rel(bisect, r.p_star) <= 1e-6, "bisection {bisect:e} vs closed {:e}", r.p_star);
    Ok(())
}

pub fn check_stationarity(prob: &OptProblem<f64>) -> Check {
    let p = optimal_power(prob).map_err(s)?.p_star;
    let kb = 0.5 * 0.5 * 0.9 * 1e6 / 2f64.ln();
    let ee = |p: f64| kb * objective(prob, p);
    let h = 1e-4 * p;
    let slope = (ee(p + h) - ee(p - h)) / (2.0 * h);
    let bound = 1e-6 * ee(p) / p;
    ensure!(slope.abs() <= bound, "|dEE/dP| = {:e} > {bound:e} at P* = {p:e}", slope.abs());
    Ok(())
}

pub fn check_optimality(prob: &OptProblem<f64>) -> Check {
    let p = optimal_power(prob).map_err(s)?.p_star;
    let best = objective(prob, p);
    for i in 0..100 {
        let q = 10.0 * p * 10f64.powf(-12.0 * i as f64 / 99.0);
        ensure!(objective(prob, q) <= best, "EE({q:e}) > EE(P* = {p:e})");
    }
    Ok(())
}

pub fn check_argument_invariance(prob: &OptProblem<f64>, k: f64) -> Check {
    let scaled = OptProblem {
        g2: prob.g2 * k,
        d_total: prob.d_total * k,
        ..*prob
    };
    let (a, b) = (prob.lambert_argument(), scaled.lambert_argument());
    let c = prob.overheads.total() * prob.g2 / prob.d_total;
    ensure!((a - b).abs() <= 1e-12 * c.max(1.0), "argument {a:e} -> {b:e} under k = {k:e}");
    let (pa, pb) = (optimal_power(prob).map_err(s)?.p_star, optimal_power(&scaled).map_err(s)?.p_star);
    ensure!(rel(pb, pa) <= 1e-12, "P* {pa:e} -> {pb:e} under k = {k:e}");
    Ok(())
}

pub fn check_prefactor_independence(prob: &OptProblem<f64>, sp: &SensingProfile<f64>, bandwidth_hz: f64) -> Check {
    let closed = optimal_power(prob).map_err(s)?.p_star;
    let env = RadioEnvironment { bandwidth_hz, ..env() };
    for state in STATES {
        let p = OptProblem { state, ..*prob };
        let oracle = numerical_argmax(&p, sp, &env).map_err(s)?;
        ensure!(rel(oracle, closed) <= 1e-6, "{state}: oracle {oracle:e} vs closed {closed:e}");
        ensure!(optimal_power(&p).map_err(s)?.p_star == closed, "{state}: closed form moved");
    }
    Ok(())
}

pub fn check_unimodal(prob: &OptProblem<f64>) -> Check {
    let p = optimal_power(prob).map_err(s)?.p_star;
    let n = 10_000;
    let values: Vec<f64> = (0..n)
        .map(|i| objective(prob, p * 10f64.powf(-6.0 + 12.0 * i as f64 / (n - 1) as f64)))
        .collect();
    let signs: Vec<bool> = values
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| w[1] > w[0])
        .collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    ensure!(changes == 1, "{changes} sign changes of the discrete derivative");
    ensure!(signs.first() == Some(&true), "EE not increasing at the low end");
    Ok(())
}

// ---- scenario engine ----

pub fn scenario_from(c: &LinkCase, grid: Grid<f64>) -> Result<Scenario<f64>, String> {
    let mut scn = Scenario::from_parts("prop", env(), c.sp, c.pairs.clone(), c.primary, overheads()).map_err(s)?;
    scn.grid = grid;
    scn.validate().map_err(s)?;
    Ok(scn)
}

pub fn check_sweep_determinism(scn: &Scenario<f64>) -> Check {
    let csv = |state, device| -> Result<Vec<u8>, String> {
        let a = run_sweep(scn, state, device, false).map_err(s)?;
        let b = run_sweep(scn, state, device, true).map_err(s)?;
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &a, &b).map_err(s)?;
        Ok(buf)
    };
    for state in STATES {
        for device in DEVICES {
            let here = csv(state, device)?;
            let again = csv(state, device)?;
            let scn2 = scn.clone();
            let there = std::thread::spawn(move || -> Result<Vec<u8>, String> {
                let a = run_sweep(&scn2, state, device, false).map_err(s)?;
                let b = run_sweep(&scn2, state, device, true).map_err(s)?;
                let mut buf = Vec::new();
                write_sweep_csv(&mut buf, &a, &b).map_err(s)?;
                Ok(buf)
            })
            .join()
            .map_err(|_| "sweep thread panicked".to_string())??;
            ensure!(here == again && here == there, "{state}/{device}: CSV bytes differ between runs");
        }
    }
    Ok(())
}

pub fn check_sweep_grid_and_identity(scn: &Scenario<f64>) -> Check {
    let g = scn.grid;
    let n = ((g.stop - g.start) / g.step).round() as usize;
    for state in STATES {
        for device in DEVICES {
            for optimized in [false, true] {
                let series = run_sweep(scn, state, device, optimized).map_err(s)?;
                ensure!(series.points.len() == n + 1, "{} points, expected {}", series.points.len(), n + 1);
                for (i, p) in series.points.iter().enumerate() {
                    let want = if i == n { g.stop } else { g.start + (g.stop - g.start) * i as f64 / n as f64 };
                    ensure!(p.p_x == want, "point {i}: p_x {} != {want}", p.p_x);
                    for m in [&p.mean, &p.sum].into_iter().chain(&p.per_pair) {
                        let back = m.ee_bps_per_watt * (m.tx_power_w + scn.overheads.total());
                        ensure!(
                            (back - m.throughput_bps).abs() <= 1e-12 * m.throughput_bps.abs(),
                            "EE identity broken at p_x = {}",
                            p.p_x
                        );
                    }
                }
                ensure!(
                    series.points.windows(2).all(|w| w[0].p_x < w[1].p_x),
                    "p_x not strictly increasing"
                );
            }
        }
    }
    Ok(())
}

/// Sweeps a scenario whose first pair has an HRC gain so small that `C g2 / D`
/// rounds away and the closed form cannot produce a positive power.
pub fn check_infeasible_fallback(c: &LinkCase) -> Check {
    let mut pairs = c.pairs.clone();
    pairs[0].g_h2 = 1e-300;
    let case = LinkCase { pairs, ..c.clone() };
    let scn = scenario_from(&case, Grid { start: 0.0, stop: 1.0, step: 0.25 })?;
    for state in STATES {
        let series = run_sweep(&scn, state, Device::Hrc, true).map_err(s)?;
        ensure!(series.meta.infeasible_pairs.contains(&0), "{state}: pair 0 not reported infeasible");
        let powers = series.tx_powers();
        ensure!(powers[0] == case.pairs[0].p_h, "{state}: infeasible pair did not keep its nominal power");
        ensure!(
            series.meta.infeasible_pairs.iter().all(|&i| powers[i] == case.pairs[i].p_h),
            "{state}: an infeasible pair moved"
        );
    }
    Ok(())
}
