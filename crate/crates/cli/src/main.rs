//! `tsankov`: batch checks of curvature models, their symmetries and the
//! plane-wave metrics realizing `M14`.
//!
//! The JSON report goes to stdout, a summary to stderr. Exit status is 0 when
//! every check holds, 1 when one fails and 2 on usage, parse or evaluation
//! errors.

mod check_model;
mod geometry;
mod input;
mod report;
mod symmetry;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use tsankov::algebra::{Mode, Rational};
use tsankov::model::Property;
use tsankov::Result;

use geometry::{Ctx, GeometryOp};
use input::GeometryInput;
use report::{Check, Report, RunConfig};

#[derive(Parser)]
#[command(
    name = "tsankov",
    version,
    about = "Exact checks of Jacobi-Tsankov curvature models"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rational,
    Float,
}

#[derive(Args)]
struct Global {
    /// Scalar mode; defaults to rational unless the input needs floats.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Relative tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for every sampled point and parameter.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of sampled points.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// CSV output for sweeps and traces.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add the wall-clock duration to the JSON report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature symmetries, signature and operator properties of a 0-model.
    CheckModel {
        /// `m14` or a model JSON file.
        model: String,
        /// Comma-separated property names, or `all`.
        #[arg(long, value_parser = parse_properties)]
        properties: Option<Properties>,
    },
    /// Membership of a map in the symmetry group of M14.
    #[command(group(ArgGroup::new("action").required(true)))]
    Symmetry {
        /// `m14` or a model JSON file.
        model: String,
        /// swap12, swap13, rotation:c,s, dilatation:a1,a2,a3 or a JSON file.
        #[arg(long, group = "action")]
        generator: Option<String>,
        /// A seeded random element of the kernel family.
        #[arg(long, group = "action")]
        kernel_random: bool,
        /// Constraint rank and dimension of the kernel family.
        #[arg(long, group = "action")]
        kernel_dim: bool,
        /// Kernel parameters {"b", "c_antisym"} from a JSON file.
        #[arg(long, group = "action")]
        kernel_params: Option<String>,
    },
    /// Curvature, geodesics and invariants of plane-wave metrics.
    Geometry {
        /// `m-phi`, `m-a` or a metric JSON file.
        metric: String,
        /// Family parameters for m-phi ({"phi": ...}) or m-a ({"a": ...}).
        #[arg(long)]
        params: Option<String>,
        #[command(subcommand)]
        op: GeometryOp,
    },
}

#[derive(Clone)]
struct Properties(Vec<Property>);

fn parse_properties(s: &str) -> Result<Properties> {
    if s == "all" {
        return Ok(Properties(Property::ALL.to_vec()));
    }
    s.split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<Vec<_>>>()
        .map(Properties)
}

/// Runs `$body` with `$S` bound to the scalar type of `$mode`.
macro_rules! with_scalar {
    ($mode:expr, $S:ident => $body:expr) => {
        match $mode {
            Mode::Rational => {
                type $S = Rational;
                $body
            }
            Mode::Float => {
                type $S = f64;
                $body
            }
        }
    };
}

fn requested(g: &Global) -> Option<Mode> {
    g.mode.map(|m| match m {
        ModeArg::Rational => Mode::Rational,
        ModeArg::Float => Mode::Float,
    })
}

fn execute(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let (name, inputs, mode, points, checks): (
        String,
        Vec<String>,
        Mode,
        Option<usize>,
        Vec<Check>,
    ) = match &cli.command {
        Command::CheckModel { model, properties } => {
            let text = input::model_text(model)?;
            let json: serde_json::Value = serde_json::from_str(&text)?;
            let mode = input::resolve(requested(g), input::has_float(&json));
            let props = properties.as_ref().map(|p| p.0.clone()).unwrap_or_default();
            let checks = with_scalar!(mode, S => {
                check_model::run(&input::parse_model::<S>(&text)?, &props)?
            });
            (
                "check-model".into(),
                vec![model.clone()],
                mode,
                None,
                checks,
            )
        }
        Command::Symmetry {
            model,
            generator,
            kernel_random,
            kernel_dim,
            kernel_params,
        } => {
            let text = input::model_text(model)?;
            let json: serde_json::Value = serde_json::from_str(&text)?;
            let mode = input::resolve(requested(g), input::has_float(&json));
            let mut inputs = vec![model.clone()];
            let action = match (generator, kernel_params) {
                (Some(s), _) => {
                    inputs.push(s.clone());
                    symmetry::Action::Generator(s.clone())
                }
                (_, Some(p)) => {
                    inputs.push(p.clone());
                    symmetry::Action::KernelParams(p.clone())
                }
                _ if *kernel_random => symmetry::Action::KernelRandom,
                _ => {
                    debug_assert!(*kernel_dim);
                    symmetry::Action::KernelDim
                }
            };
            let checks = with_scalar!(mode, S => {
                symmetry::run(&input::parse_model::<S>(&text)?, &action, g.seed)?
            });
            ("symmetry".into(), inputs, mode, None, checks)
        }
        Command::Geometry { metric, params, op } => {
            let input = GeometryInput::load(metric, params.as_deref())?;
            let mode = input::resolve(requested(g), input.wants_float());
            let points = g.points.unwrap_or_else(|| op.default_points());
            let ctx = Ctx {
                input: &input,
                tol: g.tol,
                points,
                seed: g.seed,
                out: g.out.as_deref(),
            };
            let checks = with_scalar!(mode, S => geometry::run::<S>(op, &ctx)?);
            let mut inputs = vec![metric.clone()];
            inputs.extend(params.iter().cloned());
            (
                format!("geometry {}", op.name()),
                inputs,
                mode,
                Some(points),
                checks,
            )
        }
    };
    Ok(Report::new(
        RunConfig {
            command: name,
            inputs,
            mode,
            tol: g.tol,
            points,
            seed: g.seed,
        },
        checks,
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    let mut report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    if cli.global.timing {
        report.duration_s = Some(elapsed.as_secs_f64());
    }
    eprint!("{}", report.summary(elapsed));
    // a closed pipe (`| head`) is not an error of the run
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    let _ = writeln!(std::io::stdout().lock(), "{json}");
    if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
