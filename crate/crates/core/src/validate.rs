//! Built-in validation suite: Lambert W accuracy, closed form against the
//! golden-section oracle, reference-value reproduction and sweep shape checks.
//!
//! Randomized checks draw from ChaCha8 seeded with `seed_from_u64(seed)`, so a
//! report is identical across runs and platforms for a given seed.

use std::f64::consts::E;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::lambert::{lambert_w0, LambertArg};
use crate::link::{energy_efficiency, improvement_percent, Device, PowerOverheads, SensingState};
use crate::optimize::{ee_of_power, numerical_argmax, optimal_power_with, optimize_scenario, OptProblem, OptResult};
use crate::scenario::{run_sweep, Scenario, SweepSeries};

pub const LAMBERT_GRID_POINTS: usize = 10_000;
pub const LAMBERT_IDENTITY_TOL: f64 = 1e-12;
pub const LAMBERT_EXACT_TOL: f64 = 1e-10;
pub const ORACLE_AGREEMENT_TOL: f64 = 1e-6;
pub const STATIONARITY_TOL: f64 = 1e-6;
pub const REFERENCE_RATIO_TOL: f64 = 0.01;
/// Step of the central difference, relative to `P*`.
pub const FD_STEP: f64 = 1e-4;

/// Lambert W used by the closed form under test.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambertHook {
    #[default]
    Principal,
    /// Principal branch multiplied by a factor; a negative control.
    Scaled(f64),
}

impl LambertHook {
    fn eval(self, x: f64) -> Result<f64> {
        let w = lambert_w0(LambertArg::new(x)?);
        Ok(match self {
            LambertHook::Principal => w,
            LambertHook::Scaled(k) => k * w,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationOptions {
    pub seed: u64,
    pub trials: usize,
    pub lambert: LambertHook,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            seed: 0,
            trials: 1000,
            lambert: LambertHook::Principal,
        }
    }
}

/// One pass/fail entry. `measured` is the worst observed value of the quantity
/// compared against `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub scenario: String,
    pub scenario_hash: String,
    pub options: ValidationOptions,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, group: &str, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.group == group && c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} ({})\n", self.scenario, self.scenario_hash);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}/{}: measured {:.3e}, tolerance {:.3e}{}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.group,
                c.name,
                c.measured,
                c.tolerance,
                if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) },
            ));
        }
        out
    }
}

fn check(group: &'static str, name: impl Into<String>, measured: f64, tolerance: f64, detail: String) -> Check {
    Check {
        group,
        name: name.into(),
        passed: measured <= tolerance,
        measured,
        tolerance,
        detail,
    }
}

fn flag(group: &'static str, name: impl Into<String>, ok: bool, detail: String) -> Check {
    Check {
        group,
        name: name.into(),
        passed: ok,
        measured: if ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
        detail,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Runs every check group against `scn`.
pub fn run_validation(scn: &Scenario<f64>, opts: &ValidationOptions) -> ValidationReport {
    let mut checks = Vec::new();
    lambert_checks(&mut checks);
    optimizer_checks(scn, opts, &mut checks);
    reference_checks(&mut checks);
    scenario_checks(scn, opts, &mut checks);
    ValidationReport {
        scenario: scn.name.clone(),
        scenario_hash: scn.hash.clone(),
        options: *opts,
        checks,
    }
}

/// Arguments log-spaced over `[-1/e + 1e-9, 1e9]`: half by offset from the
/// branch point, half over `[1e-12, 1e9]`, plus zero.
pub fn lambert_grid(n: usize) -> Vec<f64> {
    let half = n / 2;
    let branch = -1.0 / E;
    let mut xs = Vec::with_capacity(n + 1);
    // offsets 1e-9 .. just under 1/e
    let top = (1.0 / E).log10();
    for i in 0..half {
        let t = -9.0 + (top - -9.0) * i as f64 / half as f64;
        xs.push(branch + 10f64.powf(t));
    }
    xs.push(0.0);
    let rest = n - half;
    for i in 0..rest {
        let t = -12.0 + 21.0 * i as f64 / (rest - 1).max(1) as f64;
        xs.push(10f64.powf(t));
    }
    xs
}

fn lambert_checks(out: &mut Vec<Check>) {
    let xs = lambert_grid(LAMBERT_GRID_POINTS);
    let mut worst = 0.0f64;
    let mut worst_x = 0.0;
    let mut monotone = true;
    let mut prev: Option<(f64, f64)> = None;
    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    for &x in &sorted {
        let w = match LambertArg::new(x) {
            Ok(a) => lambert_w0(a),
            Err(_) => f64::NAN,
        };
        let err = (w * w.exp() - x).abs() / x.abs().max(1.0);
        if !(err <= worst) {
            worst = err;
            worst_x = x;
        }
        if let Some((px, pw)) = prev {
            if x > px && !(w > pw) {
                monotone = false;
            }
        }
        prev = Some((x, w));
    }
    out.push(check(
        "lambert",
        "identity",
        worst,
        LAMBERT_IDENTITY_TOL,
        format!("{} arguments, worst at x = {worst_x:e}", sorted.len()),
    ));
    out.push(flag("lambert", "monotonic", monotone, String::new()));

    let exact = [(0.0, 0.0), (E, 1.0), (-1.0 / E, -1.0)];
    let worst = exact
        .iter()
        .map(|&(x, w)| match LambertArg::new(x) {
            Ok(a) => (lambert_w0(a) - w).abs(),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    out.push(check(
        "lambert",
        "trivial_values",
        worst,
        LAMBERT_EXACT_TOL,
        "W(0) = 0, W(e) = 1, W(-1/e) = -1".into(),
    ));
    let domain_ok = LambertArg::new(-0.5f64).is_err() && LambertArg::new(f64::NAN).is_err();
    out.push(flag(
        "lambert",
        "domain_rejection",
        domain_ok,
        "x < -1/e and NaN rejected".into(),
    ));
}

/// Random problem with `C g2 > D`: `g2` log-uniform on `[1e-16, 1]`, `D`
/// log-uniform on `[1e-18, 1e-2]`, `P_cp` uniform on `[0, 199]`, `P_sp = 1`.
pub fn random_problem(rng: &mut ChaCha8Rng) -> OptProblem<f64> {
    loop {
        let g2 = 10f64.powf(rng.random_range(-16.0..=0.0));
        let d = 10f64.powf(rng.random_range(-18.0..=-2.0));
        let p_cp = rng.random_range(0.0..=199.0);
        let overheads = PowerOverheads { p_cp, p_sp: 1.0 };
        if overheads.total() * g2 > d {
            return OptProblem {
                g2,
                d_total: d,
                overheads,
                p_max: 1000.0,
                state: SensingState::Effectual,
                device: Device::Hrc,
            };
        }
    }
}

/// Worst-case numbers from the randomized optimizer checks.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct OracleStats {
    agreement: f64,
    stationarity: f64,
    optimality_violations: usize,
    oracle_errors: usize,
    infeasible: usize,
    scaling: f64,
    prefactor: f64,
}

fn normalized_derivative(prob: &OptProblem<f64>, p: f64) -> f64 {
    let h = FD_STEP * p;
    let slope = (prob.normalized_ee(p + h) - prob.normalized_ee(p - h)) / (2.0 * h);
    // |dEE/dP| relative to EE(P*)/P*; the prefactor cancels.
    (slope * p / prob.normalized_ee(p)).abs()
}

fn optimizer_checks(scn: &Scenario<f64>, opts: &ValidationOptions, out: &mut Vec<Check>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lambert = |x| opts.lambert.eval(x);
    let sp = scn.sensing;
    let env = scn.env;
    let mut s = OracleStats::default();
    for _ in 0..opts.trials {
        let prob = random_problem(&mut rng);
        let r = match optimal_power_with(&prob, lambert) {
            Ok(r) if r.feasible => r,
            _ => {
                s.infeasible += 1;
                continue;
            }
        };
        match numerical_argmax(&prob, &sp, &env) {
            Ok(p) => s.agreement = s.agreement.max(rel(r.p_star, p)),
            Err(_) => s.oracle_errors += 1,
        }
        s.stationarity = s.stationarity.max(normalized_derivative(&prob, r.p_star));

        let best = prob.normalized_ee(r.p_star);
        for f in [0.5, 0.9, 0.999, 1.001, 1.1, 2.0] {
            if prob.normalized_ee(r.p_star * f) > best {
                s.optimality_violations += 1;
            }
        }

        let k = 10f64.powf(rng.random_range(-3.0..=3.0));
        let scaled = OptProblem {
            g2: prob.g2 * k,
            d_total: prob.d_total * k,
            ..prob
        };
        s.scaling = s.scaling.max(rel(scaled.lambert_argument(), prob.lambert_argument()));
        if let Ok(rs) = optimal_power_with(&scaled, lambert) {
            s.scaling = s.scaling.max(rel(rs.p_star, r.p_star));
        }

        let other = sp
            .with_p_x(SensingState::Effectual, rng.random_range(0.05..=1.0))
            .with_p_x(SensingState::Interference, rng.random_range(0.05..=1.0));
        let as_interference = OptProblem {
            state: SensingState::Interference,
            ..prob
        };
        if let (Ok(a), Ok(b)) = (
            numerical_argmax(&prob, &other, &env),
            numerical_argmax(&as_interference, &other, &env),
        ) {
            s.prefactor = s.prefactor.max(rel(a, r.p_star)).max(rel(b, r.p_star));
        }
    }

    let n = opts.trials;
    out.push(check(
        "oracle",
        "closed_form_vs_golden_section",
        s.agreement,
        ORACLE_AGREEMENT_TOL,
        format!("{n} problems, max relative deviation of P*"),
    ));
    out.push(check(
        "oracle",
        "stationarity",
        s.stationarity,
        STATIONARITY_TOL,
        "max |dEE/dP| * P* / EE(P*), central difference".into(),
    ));
    out.push(check(
        "oracle",
        "feasible_and_bracketed",
        (s.infeasible + s.oracle_errors) as f64,
        0.0,
        format!("{} infeasible, {} oracle failures", s.infeasible, s.oracle_errors),
    ));
    out.push(check(
        "oracle",
        "local_optimality",
        s.optimality_violations as f64,
        0.0,
        "EE(P*) >= EE(f P*) for f in {0.5, 0.9, 0.999, 1.001, 1.1, 2}".into(),
    ));
    out.push(check(
        "oracle",
        "argument_scaling_invariance",
        s.scaling,
        1e-12,
        "(g2, D) -> (k g2, k D) leaves a/e and P* unchanged".into(),
    ));
    out.push(check(
        "oracle",
        "prefactor_independence",
        s.prefactor,
        ORACLE_AGREEMENT_TOL,
        "oracle argmax under random p_x and either state vs closed-form P*".into(),
    ));

    let a = unit_problem(1.0);
    let e_minus_1 = optimal_power_with(&a, lambert).map(|r| r.p_star).unwrap_or(f64::NAN);
    out.push(check(
        "oracle",
        "zero_numerator_limit",
        rel(e_minus_1, E - 1.0),
        1e-12,
        "g2 = D = C = 1 gives P* = e - 1".into(),
    ));
    let b = unit_problem(1.0 + E * E);
    let e2_minus_1 = optimal_power_with(&b, lambert).map(|r| r.p_star).unwrap_or(f64::NAN);
    out.push(check(
        "oracle",
        "reference_optimum",
        rel(e2_minus_1, E * E - 1.0),
        1e-12,
        "g2 = D = 1, C = 1 + e^2 gives P* = e^2 - 1".into(),
    ));
}

fn unit_problem(c: f64) -> OptProblem<f64> {
    OptProblem {
        g2: 1.0,
        d_total: 1.0,
        overheads: PowerOverheads { p_cp: c - 1.0, p_sp: 1.0 },
        p_max: 1000.0,
        state: SensingState::Effectual,
        device: Device::Hrc,
    }
}

/// Figure-read (throughput, transmit power, EE) triples, with `P_cp + P_sp = 100 W`.
pub const REFERENCE_EE: [(&str, f64, f64, f64); 4] = [
    ("hrc_interference", 4330.0, 0.7, 42.99),
    ("mrc_interference", 3753.0, 0.3, 37.41),
    ("hrc_effectual", 1.409e6, 0.7, 1.4e4),
    ("mrc_effectual", 1.864e5, 0.3, 1858.0),
];

/// Printed (original, optimized, improvement %, allowed error in hundredths
/// of a percent) tuples.
pub const REFERENCE_IMPROVEMENT: [(&str, f64, f64, f64, i64); 3] = [
    ("mrc_effectual", 1.864e5, 7.157e5, 73.96, 0),
    ("hrc_interference", 4330.0, 7.419e4, 94.16, 0),
    ("mrc_interference", 3753.0, 5.72e4, 93.43, 1),
];

fn hundredths(pct: f64) -> i64 {
    (pct * 100.0).round() as i64
}

/// Printed HRC-effectual pair, whose stated improvement (83.13 %) does not
/// follow from the values; the computed figure is asserted instead.
pub const HRC_EFFECTUAL_IMPROVEMENT: (f64, f64, f64) = (1.409e6, 8.835e6, 84.05);

fn reference_checks(out: &mut Vec<Check>) {
    let oh = PowerOverheads { p_cp: 99.0, p_sp: 1.0 };
    for (name, s, p, expected) in REFERENCE_EE {
        let ee = energy_efficiency(s, p, &oh).unwrap_or(f64::NAN);
        out.push(check(
            "reference",
            format!("ee_{name}"),
            rel(ee, expected),
            REFERENCE_RATIO_TOL,
            format!("{s:e} bps at {p} W -> {ee:.4} bps/W, expected {expected}"),
        ));
    }
    for (name, orig, opt, expected, tol) in REFERENCE_IMPROVEMENT {
        let pct = improvement_percent(orig, opt).unwrap_or(f64::NAN);
        out.push(check(
            "reference",
            format!("improvement_{name}"),
            (hundredths(pct) - hundredths(expected)).abs() as f64,
            tol as f64,
            format!("{orig:e} -> {opt:e}: {pct:.2} %, expected {expected:.2} %; error in hundredths"),
        ));
    }
    let (orig, opt, expected) = HRC_EFFECTUAL_IMPROVEMENT;
    let pct = improvement_percent(orig, opt).unwrap_or(f64::NAN);
    out.push(check(
        "reference",
        "improvement_hrc_effectual",
        (hundredths(pct) - hundredths(expected)).abs() as f64,
        0.0,
        format!("{orig:e} -> {opt:e}: {pct:.2} %; the printed 83.13 % is inconsistent with these values"),
    ));
}

const STATES: [SensingState; 2] = [SensingState::Effectual, SensingState::Interference];
const DEVICES: [Device; 2] = [Device::Hrc, Device::Mrc];

fn scenario_checks(scn: &Scenario<f64>, opts: &ValidationOptions, out: &mut Vec<Check>) {
    let mut series: Vec<(SweepSeries<f64>, SweepSeries<f64>)> = Vec::new();
    for state in STATES {
        for device in DEVICES {
            match (run_sweep(scn, state, device, false), run_sweep(scn, state, device, true)) {
                (Ok(a), Ok(b)) => series.push((a, b)),
                (Err(e), _) | (_, Err(e)) => {
                    out.push(flag("scenario", format!("sweep_{state}_{device}"), false, e.to_string()));
                    return;
                }
            }
        }
    }
    let all = || series.iter().flat_map(|(a, b)| [a, b]);

    let grid = scn.grid.points().unwrap_or_default();
    let grid_ok = all().all(|s| {
        s.points.len() == grid.len()
            && s.points.iter().zip(&grid).all(|(p, g)| p.p_x == *g)
            && s.points.windows(2).all(|w| w[0].p_x < w[1].p_x)
    });
    out.push(flag("scenario", "grid_integrity", grid_ok, format!("{} points", grid.len())));

    let origin_ok = all().all(|s| {
        s.points
            .iter()
            .filter(|p| p.p_x == 0.0)
            .all(|p| p.mean.throughput_bps == 0.0 && p.mean.ee_bps_per_watt == 0.0)
    });
    out.push(flag("scenario", "origin", origin_ok, "throughput and EE vanish at p_x = 0".into()));

    let mut identity = 0.0f64;
    for s in all() {
        for p in &s.points {
            for m in std::iter::once(&p.mean).chain(&p.per_pair) {
                let back = m.ee_bps_per_watt * (m.tx_power_w + scn.overheads.total());
                identity = identity.max((back - m.throughput_bps).abs() / m.throughput_bps.abs().max(1.0));
            }
        }
    }
    out.push(check(
        "scenario",
        "ee_identity",
        identity,
        1e-12,
        "ee * (P + P_cp + P_sp) = throughput".into(),
    ));

    let mut linearity = 0.0f64;
    for s in all() {
        let last = s.points.last().expect("non-empty grid");
        let slope = last.mean.throughput_bps / last.p_x;
        for p in s.points.iter().filter(|p| p.p_x > 0.0) {
            linearity = linearity.max(rel(p.mean.throughput_bps / p.p_x, slope));
        }
    }
    out.push(check(
        "scenario",
        "linear_in_p_x",
        linearity,
        1e-12,
        "throughput / p_x constant along the grid".into(),
    ));

    let mut dominance_violations = 0usize;
    for (orig, opt) in &series {
        for (a, b) in orig.points.iter().zip(&opt.points) {
            for (i, (ma, mb)) in a.per_pair.iter().zip(&b.per_pair).enumerate() {
                if opt.meta.infeasible_pairs.contains(&i) {
                    continue;
                }
                if mb.ee_bps_per_watt < ma.ee_bps_per_watt * (1.0 - 1e-12) {
                    dominance_violations += 1;
                }
            }
        }
    }
    out.push(check(
        "scenario",
        "optimized_ee_not_below_original",
        dominance_violations as f64,
        0.0,
        "per feasible pair at every grid point".into(),
    ));

    let mut worst_oracle = 0.0f64;
    let mut oracle_failures = 0usize;
    let lambert = |x| opts.lambert.eval(x);
    for state in STATES {
        let optima = match optimize_scenario(scn, state, scn.coupling) {
            Ok(o) => o,
            Err(_) => {
                oracle_failures += 1;
                continue;
            }
        };
        for opt in &optima {
            for device in DEVICES {
                let prob = opt.problem(device);
                let r: OptResult<f64> = match optimal_power_with(prob, lambert) {
                    Ok(r) if r.feasible => r,
                    _ => continue,
                };
                let sp = scn.sensing.with_p_x(state, 1.0);
                match numerical_argmax(prob, &sp, &scn.env) {
                    Ok(p) => worst_oracle = worst_oracle.max(rel(r.p_star, p)),
                    Err(_) => oracle_failures += 1,
                }
                let ee_star = ee_of_power(r.p_star, prob, &sp, &scn.env).unwrap_or(f64::NAN);
                let ee_nominal = ee_of_power(nominal(scn, opt.index, device), prob, &sp, &scn.env)
                    .unwrap_or(f64::NAN);
                if !(ee_star >= ee_nominal) {
                    oracle_failures += 1;
                }
            }
        }
    }
    out.push(check(
        "scenario",
        "pair_optima_vs_oracle",
        worst_oracle,
        ORACLE_AGREEMENT_TOL,
        format!("{oracle_failures} failures"),
    ));
    if oracle_failures > 0 {
        out.push(flag("scenario", "pair_optima_evaluated", false, format!("{oracle_failures} failures")));
    }

    let at = |state, device, optimized: bool| {
        series
            .iter()
            .find(|(a, _)| a.state == state && a.device == device)
            .map(|(a, b)| if optimized { b } else { a })
            .expect("all four series present")
    };
    let mut state_ok = true;
    let mut device_ok = true;
    for optimized in [false, true] {
        for device in DEVICES {
            let e = at(SensingState::Effectual, device, optimized);
            let i = at(SensingState::Interference, device, optimized);
            state_ok &= e
                .points
                .iter()
                .zip(&i.points)
                .filter(|(p, _)| p.p_x > 0.0)
                .all(|(p, q)| p.mean.throughput_bps > q.mean.throughput_bps);
        }
        for state in STATES {
            let h = at(state, Device::Hrc, optimized);
            let m = at(state, Device::Mrc, optimized);
            device_ok &= h
                .points
                .iter()
                .zip(&m.points)
                .filter(|(p, _)| p.p_x > 0.0)
                .all(|(p, q)| p.mean.throughput_bps > q.mean.throughput_bps);
        }
    }
    out.push(flag(
        "scenario",
        "effectual_exceeds_interference",
        state_ok,
        "throughput at equal p_x > 0".into(),
    ));
    out.push(flag("scenario", "hrc_exceeds_mrc", device_ok, "throughput at equal p_x > 0, per state".into()));

    for (orig, opt) in &series {
        let (a, b) = (orig.points.last(), opt.points.last());
        let (Some(a), Some(b)) = (a, b) else { continue };
        let thr = improvement_percent(a.mean.throughput_bps, b.mean.throughput_bps).unwrap_or(f64::NAN);
        let ee = improvement_percent(a.mean.ee_bps_per_watt, b.mean.ee_bps_per_watt).unwrap_or(f64::NAN);
        out.push(Check {
            group: "scenario",
            name: format!("improvement_{}_{}", orig.state, orig.device),
            passed: thr > 50.0 && ee > 50.0,
            measured: thr.min(ee),
            tolerance: 50.0,
            detail: format!("throughput {thr:.2} %, EE {ee:.2} %; passes when both exceed the tolerance"),
        });
    }
}

fn nominal(scn: &Scenario<f64>, index: usize, device: Device) -> f64 {
    scn.pairs[index].power(device)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{load_scenario, DEFAULT_SCENARIO};

    #[test]
    fn grid_spans_requested_range() {
        let xs = lambert_grid(LAMBERT_GRID_POINTS);
        assert_eq!(xs.len(), LAMBERT_GRID_POINTS + 1);
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((lo - (-1.0 / E + 1e-9)).abs() < 1e-15);
        assert!((hi - 1e9).abs() < 1e-3);
    }

    #[test]
    fn default_scenario_passes() {
        let scn = load_scenario(DEFAULT_SCENARIO).unwrap();
        let opts = ValidationOptions {
            trials: 200,
            ..Default::default()
        };
        let report = run_validation(&scn, &opts);
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }

    #[test]
    fn corrupted_lambert_fails_stationarity() {
        let scn = load_scenario(DEFAULT_SCENARIO).unwrap();
        let opts = ValidationOptions {
            trials: 50,
            lambert: LambertHook::Scaled(1.01),
            ..Default::default()
        };
        let report = run_validation(&scn, &opts);
        assert!(!report.find("oracle", "stationarity").unwrap().passed);
        assert!(!report.find("oracle", "closed_form_vs_golden_section").unwrap().passed);
        assert!(report.find("lambert", "identity").unwrap().passed);
    }

    #[test]
    fn same_seed_same_report() {
        let scn = load_scenario(DEFAULT_SCENARIO).unwrap();
        let opts = ValidationOptions {
            seed: 7,
            trials: 30,
            ..Default::default()
        };
        assert_eq!(run_validation(&scn, &opts).to_json(), run_validation(&scn, &opts).to_json());
    }

    #[test]
    fn reports_reference_ratios() {
        let mut checks = Vec::new();
        reference_checks(&mut checks);
        assert_eq!(checks.len(), 8);
        assert!(checks.iter().all(|c| c.passed), "{checks:#?}");
    }
}
