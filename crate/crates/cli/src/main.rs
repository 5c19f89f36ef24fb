use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noma_ee::csv_out::write_sweep_csv;
use noma_ee::pathloss::{PathlossInput, ValidityWarning};
use noma_ee::validate::{run_validation, ValidationOptions};
use noma_ee::{
    builtin, link_gain, load_scenario, optimize_scenario, pl_average_with, pl_los, pl_nlos, run_sweep_with,
    CombineMode, CouplingMode, Device, Error, Scenario, SensingState,
};

/// Throughput and energy-efficiency sweeps for cognitive NOMA device pairs.
#[derive(Parser)]
#[command(name = "noma-ee", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Original and optimized series over the p_x grid, as CSV.
    Sweep {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long, value_enum)]
        state: StateArg,
        #[arg(long, value_enum)]
        device: DeviceArg,
        /// Overrides the scenario's coupling mode.
        #[arg(long, value_enum)]
        coupling: Option<CouplingArg>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-pair optimal transmit power, as CSV.
    Optimize {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long, value_enum)]
        state: StateArg,
        /// Restrict the table to one device class.
        #[arg(long, value_enum)]
        device: Option<DeviceArg>,
        #[arg(long, value_enum)]
        coupling: Option<CouplingArg>,
    },
    /// LOS, NLOS and averaged pathloss with the resulting power gain.
    Pathloss {
        /// Distance, m.
        #[arg(long = "d")]
        distance_m: f64,
        /// Carrier frequency, GHz.
        #[arg(long = "f")]
        carrier_ghz: f64,
        /// LOS probability.
        #[arg(long, default_value_t = 0.5)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = CombineArg::Db)]
        combine: CombineArg,
    },
    /// Runs the built-in validation suite; exit code 1 on any failure.
    Validate {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ScenarioSource {
    /// Scenario TOML file. Falls back to the bundled default.
    #[arg(long, env = "NOMA_EE_SCENARIO", conflicts_with = "builtin")]
    scenario: Option<PathBuf>,
    /// Bundled scenario: default, placement or literal-dbm.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Effectual,
    Interference,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeviceArg {
    Hrc,
    Mrc,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Nominal,
    Cascaded,
}

#[derive(Clone, Copy, ValueEnum)]
enum CombineArg {
    Db,
    Linear,
}

impl From<StateArg> for SensingState {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Effectual => SensingState::Effectual,
            StateArg::Interference => SensingState::Interference,
        }
    }
}

impl From<DeviceArg> for Device {
    fn from(d: DeviceArg) -> Self {
        match d {
            DeviceArg::Hrc => Device::Hrc,
            DeviceArg::Mrc => Device::Mrc,
        }
    }
}

impl From<CouplingArg> for CouplingMode {
    fn from(c: CouplingArg) -> Self {
        match c {
            CouplingArg::Nominal => CouplingMode::Nominal,
            CouplingArg::Cascaded => CouplingMode::Cascaded,
        }
    }
}

impl From<CombineArg> for CombineMode {
    fn from(c: CombineArg) -> Self {
        match c {
            CombineArg::Db => CombineMode::Db,
            CombineArg::Linear => CombineMode::Linear,
        }
    }
}

/// Exit status with the message to print on stderr.
enum Failure {
    Validation,
    Config(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Config(format!("i/o error: {e}"))
}

fn load(source: &ScenarioSource) -> Result<Scenario, Failure> {
    let text = match (&source.scenario, &source.builtin) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(name)) => builtin(name)
            .ok_or_else(|| Failure::Config(format!("unknown bundled scenario `{name}`")))?
            .to_string(),
        (None, None) => builtin("default").expect("bundled default").to_string(),
    };
    Ok(load_scenario(&text)?)
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_failure)?;
    tmp.write_all(bytes).map_err(io_failure)?;
    tmp.persist(path).map_err(|e| io_failure(e.error))?;
    Ok(())
}

fn sweep(
    source: &ScenarioSource,
    state: SensingState,
    device: Device,
    coupling: Option<CouplingMode>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let scn = load(source)?;
    let coupling = coupling.unwrap_or(scn.coupling);
    let original = run_sweep_with(&scn, state, device, false, coupling)?;
    let optimized = run_sweep_with(&scn, state, device, true, coupling)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &original, &optimized)?;
    match out {
        Some(path) => write_atomically(path, &buf),
        None => std::io::stdout().write_all(&buf).map_err(io_failure),
    }
}

fn optimize(
    source: &ScenarioSource,
    state: SensingState,
    device: Option<Device>,
    coupling: Option<CouplingMode>,
) -> Result<(), Failure> {
    let scn = load(source)?;
    let coupling = coupling.unwrap_or(scn.coupling);
    let optima = optimize_scenario(&scn, state, coupling)?;
    let mut out = format!(
        "# scenario: {}\n# scenario_hash: {}\n# state: {state}\n# coupling: {coupling}\n\
         pair,device,p_nominal_w,p_star_w,ee_at_star_bps_per_hz_per_w,feasible,lambert_arg\n",
        scn.name, scn.hash
    );
    let devices = match device {
        Some(d) => vec![d],
        None => vec![Device::Hrc, Device::Mrc],
    };
    for opt in &optima {
        for &d in &devices {
            let r = opt.result(d);
            out.push_str(&format!(
                "{},{d},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
                opt.index,
                scn.pairs[opt.index].power(d),
                r.p_star,
                r.ee_at_star,
                r.feasible,
                r.lambert_arg
            ));
        }
    }
    std::io::stdout().write_all(out.as_bytes()).map_err(io_failure)
}

fn pathloss(distance_m: f64, carrier_ghz: f64, omega: f64, combine: CombineMode) -> Result<(), Failure> {
    let input = PathlossInput::new(distance_m, carrier_ghz, omega);
    let bad_flag = |e: Error| Failure::Config(e.to_string());
    let los = pl_los(&input).map_err(bad_flag)?.0;
    let nlos = pl_nlos(&input).map_err(bad_flag)?.0;
    let avg = pl_average_with(&input, combine).map_err(bad_flag)?.0;
    let gain = link_gain(&input, combine).map_err(bad_flag)?;
    for w in input.validity_warnings() {
        match w {
            ValidityWarning::DistanceOutOfRange { distance_m } => {
                eprintln!("warning: distance {distance_m} m outside the fitted 10-2000 m range")
            }
            ValidityWarning::FrequencyOutOfRange { carrier_ghz } => {
                eprintln!("warning: carrier {carrier_ghz} GHz outside the fitted 2-6 GHz range")
            }
        }
    }
    println!("los_db {los:.6}");
    println!("nlos_db {nlos:.6}");
    println!("average_db {avg:.6}");
    println!("gain {gain:.12e}");
    Ok(())
}

fn validate(source: &ScenarioSource, seed: u64, trials: usize, json: bool) -> Result<(), Failure> {
    let scn = load(source)?;
    let opts = ValidationOptions {
        seed,
        trials,
        ..Default::default()
    };
    let report = run_validation(&scn, &opts);
    let text = if json { report.to_json() + "\n" } else { report.to_text() };
    std::io::stdout().write_all(text.as_bytes()).map_err(io_failure)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep {
            source,
            state,
            device,
            coupling,
            out,
        } => sweep(
            source,
            (*state).into(),
            (*device).into(),
            coupling.map(Into::into),
            out.as_deref(),
        ),
        Command::Optimize {
            source,
            state,
            device,
            coupling,
        } => optimize(source, (*state).into(), device.map(Into::into), coupling.map(Into::into)),
        Command::Pathloss {
            distance_m,
            carrier_ghz,
            omega,
            combine,
        } => pathloss(*distance_m, *carrier_ghz, *omega, (*combine).into()),
        Command::Validate {
            source,
            seed,
            trials,
            json,
        } => validate(source, *seed, *trials, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
