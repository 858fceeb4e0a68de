//! `qhammer` command-line front end.
//!
//! Exit codes: 0 on success, 1 when any experiment or result row fails,
//! 2 on configuration errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use qhammer_core::factory::ExperimentSpec;
use qhammer_core::simulator::{calibrate, NoiseModel};
use qhammer_core::topology::load_device_map;
use qhammer_core::workflow::{self, CampaignConfig, WorkflowError};
use qhammer_core::{parse_label, stats};

const SEED_ENV: &str = "QHAMMER_SEED";

#[derive(Parser)]
#[command(
    name = "qhammer",
    version,
    about = "Row-hammer cross-talk workbench for heavy-hex devices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one QASM file per label and a manifest.
    Gen(CampaignArgs),
    /// Simulate every label (plus per-centre controls) into results.csv.
    Run(RunArgs),
    /// Flip rates and the chi-square / Cramér's V analysis of a results CSV.
    Analyze {
        csv: PathBuf,
        /// Also write the report to <OUT>/analysis.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-centre plot data (and optional SVG bar charts) from a results CSV.
    Plotdata {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Fit the cross-talk strength so one experiment hits a target flip rate.
    Calibrate {
        #[arg(long)]
        label: String,
        /// Target flip rate as a fraction, e.g. 0.8513.
        #[arg(long)]
        rate: f64,
        #[arg(long, default_value = "eagle127")]
        map: String,
        /// Template noise file; its mode, readout errors and w2 are kept.
        #[arg(long)]
        noise: Option<PathBuf>,
        /// Write the calibrated noise file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CampaignArgs {
    /// Shipped map name or edge-list file.
    #[arg(long, default_value = "eagle127")]
    map: String,
    /// File with one experiment label per line.
    #[arg(long)]
    labels_file: Option<PathBuf>,
    /// Experiment label; may be repeated.
    #[arg(long = "label")]
    labels: Vec<String>,
    #[arg(long, default_value_t = qhammer_core::factory::DEFAULT_SHOTS)]
    shots: u64,
    /// Angle in radians for parametric single-qubit gates (default π).
    #[arg(long)]
    angle: Option<f64>,
    /// Apply a label's leading '-' as X on the six neighborhood qubits.
    #[arg(long)]
    neighbor_prep: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
    /// Noise configuration file; noiseless when omitted.
    #[arg(long)]
    noise: Option<PathBuf>,
    /// Master seed; QHAMMER_SEED takes precedence.
    #[arg(long)]
    seed: Option<u64>,
    /// Prepare auto-inserted controls in |1>.
    #[arg(long)]
    control_one: bool,
}

fn campaign_config(args: &CampaignArgs) -> Result<CampaignConfig, WorkflowError> {
    let mut labels = match &args.labels_file {
        Some(path) => {
            workflow::read_labels_file(path).map_err(|e| WorkflowError::Config(e.to_string()))?
        }
        None => Vec::new(),
    };
    labels.extend(args.labels.iter().cloned());
    let mut config = CampaignConfig::new(labels, &args.out);
    config.map = args.map.clone();
    config.shots = args.shots;
    config.angle = args.angle;
    config.honor_neighbor_prep = args.neighbor_prep;
    Ok(config)
}

fn env_seed() -> Result<Option<u64>, WorkflowError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            WorkflowError::Config(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))
        }),
        Err(_) => Ok(None),
    }
}

fn cmd_gen(args: &CampaignArgs) -> Result<(), WorkflowError> {
    let config = campaign_config(args)?;
    let manifest = workflow::gen(&config)?;
    for m in &manifest {
        println!("{}\t{}\t{} ops", m.label, m.file, m.ops);
    }
    eprintln!(
        "wrote {} circuit(s) to {}",
        manifest.len(),
        config.out_dir.display()
    );
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<(), WorkflowError> {
    let mut config = campaign_config(&args.campaign)?;
    if let Some(path) = &args.noise {
        config.noise = workflow::read_noise_file(path)?;
    }
    config.seed = env_seed()?.or(args.seed).or(config.noise.seed).unwrap_or(0);
    config.control_prep_one = args.control_one;

    let report = workflow::run(&config)?;
    eprintln!(
        "wrote {} row(s) to {}",
        report.rows.len(),
        report.csv_path.display()
    );
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(WorkflowError::Experiments(report.failures))
    }
}

fn read_csv(path: &Path) -> Result<String, WorkflowError> {
    std::fs::read_to_string(path).map_err(|source| WorkflowError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn cmd_analyze(csv: &Path, out: Option<&Path>) -> Result<(), WorkflowError> {
    let analysis = workflow::analyze(&read_csv(csv)?)?;
    let report = analysis.render();
    print!("{report}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(dir.join("analysis.txt"), &report))
            .map_err(|source| WorkflowError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
    }
    Ok(())
}

fn cmd_plotdata(csv: &Path, out: &Path, svg: bool) -> Result<(), WorkflowError> {
    let report = workflow::plotdata(&read_csv(csv)?, out, svg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for f in &report.files {
        println!("{}", f.display());
    }
    Ok(())
}

fn cmd_calibrate(
    label: &str,
    rate: f64,
    map: &str,
    noise: Option<&Path>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let label = parse_label(label).with_context(|| format!("label `{label}`"))?;
    let graph = load_device_map(map)?;
    let template = match noise {
        Some(path) => workflow::read_noise_file(path)?,
        None => NoiseModel::noiseless(),
    };
    let model = calibrate(rate, &ExperimentSpec::new(label), &graph, &template)?;
    let success = rate > stats::SUCCESS_THRESHOLD;
    eprintln!("calibrated {label} to flip rate {rate} (successful attack: {success})");
    match out {
        Some(path) => std::fs::write(path, model.to_string())
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{model}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Analyze { csv, out } => cmd_analyze(csv, out.as_deref()),
        Command::Plotdata { csv, out, svg } => cmd_plotdata(csv, out, *svg),
        Command::Calibrate {
            label,
            rate,
            map,
            noise,
            out,
        } => {
            return match cmd_calibrate(label, *rate, map, noise.as_deref(), out.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
