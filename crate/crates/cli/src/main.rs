use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use localglobal::ec_rational::{CurveQ, PointQ};
use localglobal_cli::{
    emit_job, parse_curve, parse_job, parse_point, parse_rational, run, CliError, ConfigOverrides, JobSpec, Task,
};

/// Local-global linear dependence tests on elliptic curves over Q and in Q^*.
///
/// Prints one JSON document on stdout and a summary on stderr. Exit codes:
/// 0 for any verdict (including independent and inconclusive), 2 for bad
/// input, 3 for internal failures.
///
/// Termination on elliptic curves relies on the curve having no complex
/// multiplication; this is not checked. Every verdict is still correct on CM
/// curves, since dependences are verified exactly and independences come
/// with a local certificate.
#[derive(Debug, Parser)]
#[command(name = "localglobal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: ConfigArgs,
    /// Only write the JSON document; no summary on stderr.
    #[arg(long, global = true)]
    json_only: bool,
    /// Print the job document instead of running it.
    #[arg(long, global = true)]
    print_job: bool,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    #[arg(long, global = true)]
    prime_bound: Option<u64>,
    #[arg(long, global = true)]
    stability_window: Option<usize>,
    #[arg(long, global = true)]
    coeff_bound: Option<u64>,
    #[arg(long, global = true)]
    saturation_bound: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; the output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    max_skipped_fraction: Option<f64>,
}

impl ConfigArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            prime_bound: self.prime_bound,
            stability_window: self.stability_window,
            coeff_bound: self.coeff_bound,
            saturation_bound: self.saturation_bound,
            seed: self.seed,
            threads: self.threads,
            max_skipped_fraction: self.max_skipped_fraction,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is the target an integer combination of the generators in E(Q)?
    EcDetect {
        /// `b` for y^2 = x^3 + b, or `a,b`.
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// `x,y` with rational coordinates, or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Is the target a product of integer powers of the generators in Q^*?
    MulDetect {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Primes where the points in I have order prime to l and those in J
    /// have order divisible by l^M.
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
        /// One-based indices, comma separated.
        #[arg(long = "i", value_delimiter = ',')]
        i: Vec<usize>,
        #[arg(long = "j", value_delimiter = ',')]
        j: Vec<usize>,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u32,
    },
    /// Group structure, coordinates and membership at one prime.
    LocalReport {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Rational torsion subgroup of a curve.
    Torsion {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
    },
    /// Runs a job document; `-` reads standard input.
    Run { file: String },
}

fn point_on(curve: &CurveQ, path: &str, raw: &str) -> Result<PointQ, CliError> {
    curve
        .check(parse_point(path, raw)?)
        .map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn points_on(curve: &CurveQ, field: &str, raw: &[String]) -> Result<Vec<PointQ>, CliError> {
    raw.iter()
        .enumerate()
        .map(|(k, s)| point_on(curve, &format!("{field}[{k}]"), s))
        .collect()
}

fn build_job(command: Command, overrides: ConfigOverrides) -> Result<JobSpec, CliError> {
    let task = match command {
        Command::EcDetect { curve, target, gens } => {
            let curve = parse_curve("curve", &curve)?;
            let target = point_on(&curve, "target", &target)?;
            let gens = points_on(&curve, "gens", &gens)?;
            Task::EcDetect { curve, target, gens }
        }
        Command::MulDetect { target, gens } => Task::MulDetect {
            target: parse_rational("target", &target)?,
            gens: gens
                .iter()
                .enumerate()
                .map(|(k, g)| parse_rational(&format!("gens[{k}]"), g))
                .collect::<Result<_, _>>()?,
        },
        Command::Witness {
            curve,
            points,
            i,
            j,
            ell,
            m,
        } => {
            let curve = parse_curve("curve", &curve)?;
            let points = points_on(&curve, "points", &points)?;
            Task::Witness {
                curve,
                points,
                i,
                j,
                ell,
                m,
            }
        }
        Command::LocalReport {
            curve,
            prime,
            target,
            gens,
        } => {
            let curve = parse_curve("curve", &curve)?;
            let target = point_on(&curve, "target", &target)?;
            let gens = points_on(&curve, "gens", &gens)?;
            Task::LocalReport {
                curve,
                target,
                gens,
                prime,
            }
        }
        Command::Torsion { curve } => Task::Torsion {
            curve: parse_curve("curve", &curve)?,
        },
        Command::Run { file } => {
            let text = if file == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(&file).map_err(|e| CliError::Input(format!("{file}: {e}")))?
            };
            let job = parse_job(&text)?;
            return Ok(JobSpec {
                config: job.config.merged(&overrides),
                task: job.task,
            });
        }
    };
    Ok(JobSpec {
        task,
        config: overrides,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = cli.config.overrides();
    let result = build_job(cli.command, overrides).and_then(|job| {
        if cli.print_job {
            Ok((emit_job(&job), None))
        } else {
            run(&job).map(|o| (o.document, Some(o.summary)))
        }
    });
    match result {
        Ok((document, summary)) => {
            if let (Some(s), false) = (summary, cli.json_only) {
                eprintln!("{s}");
            }
            // a closed pipe is the reader's choice, not a failure
            let _ = writeln!(std::io::stdout().lock(), "{document}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
