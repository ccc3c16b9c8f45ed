use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use qcomm_core::circuits::export_qasm;
use qcomm_core::noise::NoiseModel;
use qcomm_core::protocols::{
    build_bb84_circuit, build_sdc_circuit, run_bb84_sweep, run_sdc_sweep, sweep_points, Bb84Symbol,
    ExperimentPlan, Protocol, RouteKind, SdcInput, Sweep, SweepAxis, BB84_CELLS, SDC_INPUTS,
};
use qcomm_core::report::{
    bb84_rows, csv_string, parse_counts, replay_fixture, score_counts, sdc_rows, ReportRow,
};
use qcomm_core::simcore::Backend;
use qcomm_core::topology::{load_device, DeviceGraph};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] qcomm_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "qcomm",
    version,
    about = "Superdense coding and BB84 benchmarks on simulated devices"
)]
struct Cli {
    /// Directory for reports and QASM files; reports go to stdout when unset.
    #[arg(long, global = true, env = "QCOMM_OUT_DIR")]
    out_dir: Option<PathBuf>,

    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information of superdense coding over a SWAP or delay sweep.
    SdcSweep {
        #[command(flatten)]
        run: RunArgs,
        /// Add the drift-correcting phase gate before the outbound leg.
        #[arg(long)]
        correct_phase: bool,
    },
    /// QBER and secret key length of BB84 over a SWAP or delay sweep.
    Bb84 {
        #[arg(value_enum)]
        variant: Variant,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Metrics recomputed from a published table (table1 .. table7).
    ReplayFixture {
        id: String,
        /// Output file name; relative names resolve against --out-dir.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One OpenQASM 2.0 file per cell and sweep point.
    ExportQasm {
        #[arg(long, value_enum, default_value = "sdc")]
        protocol: ProtocolArg,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        correct_phase: bool,
    },
    /// Scores measured counts documents (JSON) with the simulated-run metrics.
    Score {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Overrides the protocol declared in the documents.
        #[arg(long, value_enum)]
        protocol: Option<ProtocolArg>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Single,
    Dualrail,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Sdc,
    Bb84Single,
    Bb84Dualrail,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Sdc => Protocol::Sdc,
            ProtocolArg::Bb84Single => Protocol::Bb84Single,
            ProtocolArg::Bb84Dualrail => Protocol::Bb84Dualrail,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Stationary,
    UpperRow,
    BothRows,
    Shuttle,
}

impl From<RouteArg> for RouteKind {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Stationary => RouteKind::Stationary,
            RouteArg::UpperRow => RouteKind::UpperRow,
            RouteArg::BothRows => RouteKind::BothRows,
            RouteArg::Shuttle => RouteKind::Shuttle,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Bundled device name or device TOML file.
    #[arg(long)]
    device: Option<String>,
    /// Bundled noise pack or noise TOML file.
    #[arg(long, default_value = "ibmqx5-2018")]
    noise: String,
    /// Experiment plan TOML; flags below override it.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// SWAP grid, e.g. 0..14:2.
    #[arg(long, conflicts_with = "delay")]
    swaps: Option<String>,
    /// Delay grid, e.g. 0..6us:1.26us.
    #[arg(long)]
    delay: Option<String>,
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    backend: Option<Backend>,
    /// Drop qubits from the density matrix once they are no longer used.
    #[arg(long)]
    retire_idle: bool,
    /// BB84 carrier qubit (rail A).
    #[arg(long)]
    carrier: Option<String>,
    /// BB84 SWAP partner (rail B).
    #[arg(long)]
    partner: Option<String>,
    /// Output file name; relative names resolve against --out-dir.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Setup {
    plan: ExperimentPlan,
    sweep: Sweep,
    graph: DeviceGraph,
    noise: NoiseModel,
}

fn load_noise(spec: &str) -> CliResult<NoiseModel> {
    if NoiseModel::bundled_names().contains(&spec) {
        return Ok(NoiseModel::bundled(spec)?);
    }
    let text = read(Path::new(spec))?;
    Ok(NoiseModel::from_toml_str(&text)?)
}

fn load_graph(spec: &str) -> CliResult<DeviceGraph> {
    if DeviceGraph::bundled_names().contains(&spec) {
        return Ok(DeviceGraph::bundled(spec)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "device `{spec}` is neither bundled ({}) nor a file",
            DeviceGraph::bundled_names().join(", ")
        )));
    }
    Ok(load_device(path)?)
}

fn usage(e: qcomm_core::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl RunArgs {
    fn setup(&self, protocol: Protocol, correct_phase: bool) -> CliResult<Setup> {
        let mut plan = match &self.plan {
            Some(p) => ExperimentPlan::from_toml_str(&read(p)?)?,
            None => ExperimentPlan::new(protocol),
        };
        if plan.protocol != protocol {
            return Err(CliError::Usage(format!(
                "plan is for {:?}, command runs {protocol:?}",
                plan.protocol
            )));
        }
        let sweep = match (&self.swaps, &self.delay, &plan.sweep) {
            (Some(g), _, _) => Sweep::parse(SweepAxis::Swaps, g).map_err(usage)?,
            (_, Some(g), _) => Sweep::parse(SweepAxis::Delay, g).map_err(usage)?,
            (None, None, Some(spec)) => spec.parse()?,
            (None, None, None) => Sweep::Swaps(vec![plan.swaps]),
        };
        if let Some(r) = self.route {
            plan.route = r.into();
        } else if self.plan.is_none()
            && matches!(&sweep, Sweep::Swaps(v) if v.iter().any(|&s| s > 0))
        {
            plan.route = match protocol {
                Protocol::Sdc => RouteKind::UpperRow,
                _ => RouteKind::Shuttle,
            };
        }
        if let Some(s) = self.shots {
            plan.shots = s;
        }
        if let Some(s) = self.seed {
            plan.seed = s;
        }
        if let Some(b) = self.backend {
            plan.backend = b;
        }
        plan.retire_idle |= self.retire_idle;
        plan.mitigation.phase_correction |= correct_phase;
        if let Some(c) = &self.carrier {
            plan.roles.carrier = c.clone();
        }
        if let Some(p) = &self.partner {
            plan.roles.partner = p.clone();
        }
        plan.validate()?;
        let device = self.device.as_deref().unwrap_or(match protocol {
            Protocol::Sdc => "ibmqx5",
            _ => "ibmqx4",
        });
        Ok(Setup {
            plan,
            sweep,
            graph: load_graph(device)?,
            noise: load_noise(&self.noise)?,
        })
    }
}

fn emit(
    rows: &[ReportRow],
    output: Option<&Path>,
    out_dir: Option<&Path>,
    default_name: &str,
) -> CliResult<()> {
    let text = csv_string(rows)?;
    let path = match (output, out_dir) {
        (Some(o), Some(dir)) if o.is_relative() => Some(dir.join(o)),
        (Some(o), _) => Some(o.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(default_name)),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
                    path: parent.to_path_buf(),
                    source,
                })?;
            }
            std::fs::write(&p, text).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            })?;
            info!("wrote {}", p.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
        }
    }
    Ok(())
}

fn cell_file_label(label: &str) -> String {
    label.replace('+', "plus").replace('x', "cross")
}

fn export(protocol: Protocol, run: &RunArgs, correct_phase: bool, out_dir: &Path) -> CliResult<()> {
    let s = run.setup(protocol, correct_phase)?;
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let tag = match protocol {
        Protocol::Sdc => "sdc",
        Protocol::Bb84Single => "bb84-single",
        Protocol::Bb84Dualrail => "bb84-dualrail",
    };
    for point in sweep_points(&s.plan, &s.sweep, &s.noise)? {
        let mut plan = s.plan.clone();
        plan.swaps = point.swaps;
        plan.delay_gates = point.delay_gates;
        let cells: &[&str] = if protocol == Protocol::Sdc {
            &SDC_INPUTS
        } else {
            &BB84_CELLS
        };
        for label in cells {
            let circ = match protocol {
                Protocol::Sdc => {
                    build_sdc_circuit(&plan, SdcInput::parse(label)?, &s.graph, &s.noise)?
                }
                _ => build_bb84_circuit(&plan, Bb84Symbol::parse(label)?, &s.graph, &s.noise)?,
            };
            let name = format!(
                "{tag}-swaps{}-delay{}-{}.qasm",
                point.swaps,
                point.delay_gates,
                cell_file_label(label)
            );
            let path = out_dir.join(name);
            std::fs::write(&path, export_qasm(&circ)?).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            info!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::SdcSweep { run, correct_phase } => {
            let s = run.setup(Protocol::Sdc, *correct_phase)?;
            let points = run_sdc_sweep(&s.plan, &s.sweep, &s.graph, &s.noise)?;
            let rows = sdc_rows(
                &points,
                s.plan.shots,
                s.plan.seed,
                &s.plan.backend.to_string(),
            );
            emit(&rows, run.output.as_deref(), out_dir, "sdc-sweep.csv")
        }
        Command::Bb84 { variant, run } => {
            let protocol = match variant {
                Variant::Single => Protocol::Bb84Single,
                Variant::Dualrail => Protocol::Bb84Dualrail,
            };
            let s = run.setup(protocol, false)?;
            let points = run_bb84_sweep(&s.plan, &s.sweep, &s.graph, &s.noise)?;
            let rows = bb84_rows(
                &points,
                s.plan.shots,
                s.plan.seed,
                &s.plan.backend.to_string(),
            );
            let name = match variant {
                Variant::Single => "bb84-single.csv",
                Variant::Dualrail => "bb84-dualrail.csv",
            };
            emit(&rows, run.output.as_deref(), out_dir, name)
        }
        Command::ReplayFixture { id, output } => {
            let rows = replay_fixture(id)?;
            emit(
                &rows,
                output.as_deref(),
                out_dir,
                &format!("{id}-replay.csv"),
            )
        }
        Command::ExportQasm {
            protocol,
            run,
            correct_phase,
        } => export(
            (*protocol).into(),
            run,
            *correct_phase,
            out_dir.unwrap_or(Path::new(".")),
        ),
        Command::Score {
            files,
            protocol,
            output,
        } => {
            let mut rows = Vec::new();
            for f in files {
                let doc = parse_counts(&read(f)?)?;
                rows.extend(score_counts(&doc, protocol.map(Protocol::from))?);
            }
            emit(&rows, output.as_deref(), out_dir, "score.csv")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
