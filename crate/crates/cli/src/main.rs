use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use udkdv_core::conserved::profile;
use udkdv_core::darboux::{dress_state, undress_state};
use udkdv_core::eigen::{bound_pair, generic_pair, SolitonParams};
use udkdv_core::evolve::trajectory;
use udkdv_core::rational::Rational;
use udkdv_core::scattering::{analyze_with, leftmost, synthesize, AnalyzeOptions, SpectralData};
use udkdv_core::{Error, State};

mod input;
mod render;
mod table;

use input::{parse_input, positive_rational_arg, rational_arg, read_state, read_text, times_arg, Input, Times};

/// Exact-arithmetic toolkit for the ultradiscrete KdV equation.
///
/// States are one line of integers or p/q fractions, optionally led by
/// `@k` for the index of the first value. Use `-` to read from stdin.
#[derive(Parser)]
#[command(name = "udkdv", version)]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Index of the first value for states without an `@k` token.
    #[arg(long, global = true, allow_hyphen_values = true)]
    origin: Option<i64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the state at every time step from 0 to STEPS (negative steps go back).
    Evolve {
        input: PathBuf,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        steps: i64,
        /// Print only the final state.
        #[arg(long)]
        last: bool,
    },
    /// Undress a state into solitons and background; prints JSON by default.
    Spectrum {
        input: PathBuf,
        /// Time of the given state.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        time: i64,
        /// Print the conserved profile (rows i, U, X, Y) first.
        #[arg(long)]
        profile: bool,
        /// Print a table instead of JSON.
        #[arg(long)]
        table: bool,
        /// Stop once every remaining soliton has mass at most 1.
        #[arg(long)]
        halt_speed_one: bool,
    },
    /// Print the eigenfunction slices at t and t + 1.
    Eigen {
        input: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        time: i64,
        #[arg(long, value_parser = rational_arg, required_unless_present = "bound")]
        omega: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, required_unless_present = "bound")]
        phi: Option<Rational>,
        /// The bound state of a maximal block instead of a generic eigenfunction.
        #[arg(long, conflicts_with_all = ["omega", "phi"])]
        bound: bool,
        #[arg(long, default_value_t = 0, requires = "bound")]
        block: usize,
    },
    /// Add a soliton.
    Dress {
        input: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        time: i64,
        #[arg(long, value_parser = rational_arg)]
        omega: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        phi: Rational,
    },
    /// Remove the soliton of a maximal block; prints the state and (omega, phi).
    Undress {
        input: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        time: i64,
        /// Maximal block, counted from the left.
        #[arg(long, default_value_t = 0)]
        block: usize,
    },
    /// Solve the initial value problem by scattering; one state per time.
    Solve {
        input: PathBuf,
        /// Times such as `5`, `0..50:10` or `-2..2,9`.
        #[arg(short, long, value_parser = times_arg, allow_hyphen_values = true)]
        times: Times,
        #[arg(long)]
        halt_speed_one: bool,
    },
    /// Sample U^t(x) from spectral data, a T-expression or a state.
    Render {
        input: PathBuf,
        #[arg(short, long, value_parser = times_arg, default_value = "0", allow_hyphen_values = true)]
        times: Times,
        /// Grid step in x.
        #[arg(long, value_parser = positive_rational_arg, default_value = "1/4")]
        step: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, requires = "to")]
        from: Option<Rational>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, requires = "from")]
        to: Option<Rational>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Plot against x - t.
        #[arg(long)]
        comoving: bool,
        /// Decimal axis labels in SVG output.
        #[arg(long)]
        float: bool,
        #[arg(long)]
        halt_speed_one: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

pub enum Failure {
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Core(Error::Parse(_)) => 2,
            Failure::Core(Error::InvariantBreach(_)) => 4,
            Failure::Core(_) => 3,
        }
    }
}

fn spectral(s: &State, t: i64, halt_speed_one: bool) -> Result<SpectralData, Error> {
    analyze_with(s, t, AnalyzeOptions { halt_speed_one }, leftmost)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let origin = cli.origin;
    let out = match cli.command {
        Command::Evolve { input, steps, last } => {
            let s = read_state(&input, origin)?;
            let mut rows = trajectory(&s, steps);
            if last {
                rows.drain(..rows.len() - 1);
            }
            rows.iter().map(|r| format!("{r}\n")).collect()
        }
        Command::Spectrum {
            input,
            time,
            profile: show_profile,
            table,
            halt_speed_one,
        } => {
            let s = read_state(&input, origin)?;
            let mut out = String::new();
            if show_profile {
                out.push_str(&table::profile(&s, &profile(&s)));
            }
            let d = spectral(&s, time, halt_speed_one)?;
            if table {
                out.push_str(&table::spectrum(&d));
            } else {
                out.push_str(&d.to_json());
                out.push('\n');
            }
            out
        }
        Command::Eigen {
            input,
            time,
            omega,
            phi,
            bound,
            block,
        } => {
            let s = read_state(&input, origin)?;
            let (e0, e1, p) = match (omega, phi) {
                (Some(omega), Some(phi)) if !bound => {
                    let p = SolitonParams::new(omega, phi);
                    let (e0, e1) = generic_pair(&s, time, &p)?;
                    (e0, e1, p)
                }
                _ => bound_pair(&s, time, block)?,
            };
            table::eigen(&e0, &e1, &p)
        }
        Command::Dress { input, time, omega, phi } => {
            let s = read_state(&input, origin)?;
            format!("{}\n", dress_state(&s, time, &SolitonParams::new(omega, phi))?)
        }
        Command::Undress { input, time, block } => {
            let s = read_state(&input, origin)?;
            let (u, p) = undress_state(&s, time, block)?;
            format!("{u}\n{p}\n")
        }
        Command::Solve {
            input,
            times,
            halt_speed_one,
        } => {
            let d = match parse_input(&read_text(&input)?, origin)? {
                Input::Spectral(d) => d,
                Input::State(s) => spectral(&s, 0, halt_speed_one)?,
                Input::Expr(_) => return Err(Error::Parse("solve reads a state or spectral data".into()).into()),
            };
            let times = times.0;
            let states = times.par_iter().map(|&t| synthesize(&d, t)).collect::<Result<Vec<_>, _>>()?;
            states.iter().map(|s| format!("{s}\n")).collect()
        }
        Command::Render {
            input,
            times,
            step,
            from,
            to,
            format,
            comoving,
            float,
            halt_speed_one,
        } => {
            let src = match parse_input(&read_text(&input)?, origin)? {
                Input::Spectral(d) => render::Source::spectral(d)?,
                Input::State(s) => render::Source::spectral(spectral(&s, 0, halt_speed_one)?)?,
                Input::Expr(e) => render::Source::Expr(e),
            };
            let opts = render::Options {
                times: times.0,
                step,
                range: from.zip(to),
                comoving,
            };
            if let Some((a, b)) = &opts.range {
                if a > b {
                    return Err(Error::InvalidArgument(format!("empty range {a}..{b}")).into());
                }
            }
            let fig = render::sample(&src, &opts)?;
            match format {
                Format::Csv => render::csv(&fig),
                Format::Svg => render::svg(&fig, float),
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let target = cli.output.clone();
    let result = run(cli).and_then(|text| {
        match &target {
            Some(path) => fs::write(path, text),
            None => io::stdout().write_all(text.as_bytes()),
        }
        .map_err(|e| Failure::Io(format!("writing output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Io(m) => m.clone(),
                Failure::Core(e) => e.to_string(),
            };
            eprintln!("udkdv: {msg}");
            ExitCode::from(f.code())
        }
    }
}
