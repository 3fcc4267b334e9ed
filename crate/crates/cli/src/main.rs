use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conslaw_core::expr::ZeroTest;
use conslaw_cli::commands::{self, GeodesicArgs, Outcome};
use conslaw_cli::{parse_generators, CliError, MetricFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

/// Noether symmetries and conservation laws of geodesic Lagrangians.
#[derive(Debug, Parser)]
#[command(name = "conslaw", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Seed for the randomized zero test.
    #[arg(long, default_value_t = ZeroTest::default().seed, global = true)]
    seed: u64,
    /// Absolute tolerance of the randomized zero test.
    #[arg(long, default_value_t = ZeroTest::default().tol, global = true)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riemann tensor, flatness and flat orthogonal sections.
    Curvature { metric: PathBuf },
    /// Solve for all Noether symmetries in the ansatz space.
    Noether {
        metric: PathBuf,
        #[arg(long)]
        s_degree: Option<u32>,
        #[arg(long)]
        coord_degree: Option<u32>,
    },
    /// Check candidate generators, deriving gauges that are left blank.
    Verify { metric: PathBuf, generators: PathBuf },
    /// Integrate a geodesic and measure the drift of conserved quantities.
    GeodesicCheck {
        metric: PathBuf,
        /// Initial positions then velocities, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        init: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        s_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// JSON report from `noether --format json`; defaults to checking L.
        #[arg(long)]
        quantities: Option<PathBuf>,
        /// Parameter value, e.g. `a=1`; overrides the metric file.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[arg(long, default_value_t = 1e-6)]
        max_drift: f64,
    },
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_metric(path: &Path) -> Result<MetricFile, CliError> {
    Ok(MetricFile::parse(&read(path)?, &path.display().to_string())?)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let zero = ZeroTest {
        seed: cli.seed,
        tol: cli.tol,
        ..ZeroTest::default()
    };
    match &cli.command {
        Command::Curvature { metric } => commands::curvature(&load_metric(metric)?),
        Command::Noether {
            metric,
            s_degree,
            coord_degree,
        } => {
            let f = load_metric(metric)?;
            let basis = commands::ansatz(&f, *s_degree, *coord_degree);
            commands::noether(&f, &basis, &zero)
        }
        Command::Verify { metric, generators } => {
            let f = load_metric(metric)?;
            let candidates = parse_generators(&read(generators)?, &generators.display().to_string(), f.metric.table())?;
            commands::verify(&f, &candidates, &zero)
        }
        Command::GeodesicCheck {
            metric,
            init,
            s_end,
            step,
            quantities,
            params,
            max_drift,
        } => {
            let f = load_metric(metric)?;
            let q = match quantities {
                Some(p) => Some(commands::load_quantities(&f, &read(p)?, &p.display().to_string())?),
                None => None,
            };
            let args = GeodesicArgs {
                init: init.clone(),
                s_end: *s_end,
                step: *step,
                params: params.iter().cloned().collect::<BTreeMap<_, _>>(),
                threshold: *max_drift,
            };
            commands::geodesic_check(&f, q, &args)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { conslaw_cli::exit::PARSE } else { conslaw_cli::exit::OK };
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Human => print!("{}", out.human),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
