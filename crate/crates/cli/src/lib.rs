//! Command-line front-end: JSON reports and CSV plot data for the
//! single-charge Riesz equilibrium problem.

mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use riesz_equilibrium::iba::{run_iba, IbaStart, DEFAULT_MAX_ITER, DEFAULT_STOP_TOL};
use riesz_equilibrium::measures::{
    equilibrium_density_at, log_case_reference, sigma_density, signed_eq_density, FieldParams, IntervalDensity,
};
use riesz_equilibrium::solver::{critical_endpoint, critical_halfwidth, ms_functional, sigma_constant};
use riesz_equilibrium::verify::{verify_all, weakly_admissible_check};
use riesz_equilibrium::Error;

pub use output::{chebyshev_grid, chebyshev_interior_grid, format_number, log_grid};
use output::{Csv, Meta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "riesz-eq", version, about = "Riesz s-equilibrium measures in the field of an attracting charge")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Field {
    /// Riesz exponent, 0 < s < 1
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    /// Charge at bi
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    /// Height of the charge above the real axis
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct Out {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical endpoint ã by three routes, with derived quantities
    Endpoint {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        out: Out,
    },
    /// Equilibrium density on a Chebyshev grid of [−ã, ã]
    Density {
        #[command(flatten)]
        field: Field,
        #[arg(long, default_value_t = 1001)]
        grid_n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Signed equilibrium density of [−a, a]
    Signed {
        #[command(flatten)]
        field: Field,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1001)]
        grid_n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Density of σ_a with U + Q constant on [−a, a]
    Sigma {
        #[command(flatten)]
        field: Field,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1001)]
        grid_n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Mhaskar–Saff functional on a logarithmic grid of half-widths
    Functional {
        #[command(flatten)]
        field: Field,
        #[arg(long, default_value_t = 0.1)]
        a_min: f64,
        #[arg(long, default_value_t = 100.0)]
        a_max: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Iterated balayage from a0 (a number or "auto")
    Iba {
        #[command(flatten)]
        field: Field,
        #[arg(long, default_value = "auto")]
        a0: String,
        /// Stopping tolerance
        #[arg(long, default_value_t = DEFAULT_STOP_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Frostman conditions and endpoint exponents; q = 1 checks the
    /// weakly admissible case
    Verify {
        #[command(flatten)]
        field: Field,
        #[arg(long, default_value_t = 201)]
        grid_n: usize,
        /// Tolerance relative to |F_Q|
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Logarithmic (s = 0) reference case
    Logcase {
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 1001)]
        grid_n: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Verification(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Pole(_) | Error::Overflow(_) | Error::NoEquilibrium { .. } | Error::WeaklyAdmissible => {
            EXIT_DOMAIN
        }
        _ => EXIT_VERIFY,
    }
}

/// Parse `args` (including the program name), run, and return the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(stderr, "verification failed: {msg}");
            EXIT_VERIFY
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_IO
        }
    }
}

fn params(f: &Field) -> Result<FieldParams, Failure> {
    Ok(FieldParams::new(f.s, f.q, f.b)?)
}

fn check_grid(n: usize) -> Result<(), Failure> {
    if n < 2 {
        return Err(Error::Domain(format!("grid size must be at least 2, got {n}")).into());
    }
    Ok(())
}

fn emit(out: &Out, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sampled(density: &IntervalDensity, xs: &[f64]) -> Vec<[f64; 2]> {
    xs.iter().map(|&x| [x, density.evaluate(x)]).collect()
}

/// A sampled density as CSV, or as a JSON object with `x` and `density` arrays.
fn density_output(meta: Meta, rows: &[[f64; 2]], format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Csv => Csv::new(meta, &["x", "density"]).rows(rows).finish(),
        Format::Json => {
            let mut obj = meta.into_json();
            obj.insert("x".into(), rows.iter().map(|r| r[0]).collect::<Vec<_>>().into());
            obj.insert("density".into(), rows.iter().map(|r| r[1]).collect::<Vec<_>>().into());
            serde_json::to_string_pretty(&obj)? + "\n"
        }
    })
}

/// A serializable report as JSON, or as `key,value` CSV rows.
fn report_output<T: serde::Serialize>(meta: Meta, report: &T, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => {
            let value = serde_json::to_value(report)?;
            let mut rows = Vec::new();
            output::flatten_json("", &value, &mut rows);
            Csv::new(meta, &["key", "value"]).text_rows(&rows).finish()
        }
    })
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Endpoint { field, out } => {
            let p = params(field)?;
            let r = critical_endpoint(&p)?;
            let text = report_output(Meta::new("endpoint").field(&p), &r, out.format.unwrap_or(Format::Json))?;
            emit(out, stdout, &text)
        }
        Command::Density { field, grid_n, out } => {
            let p = params(field)?;
            check_grid(*grid_n)?;
            let a = critical_halfwidth(&p)?;
            let mu = equilibrium_density_at(&p, a)?;
            let rows = sampled(&mu, &chebyshev_grid(a, *grid_n));
            let meta = Meta::new("density").field(&p).value("a_tilde", a).count("grid_n", *grid_n);
            emit(out, stdout, &density_output(meta, &rows, out.format.unwrap_or(Format::Csv))?)
        }
        Command::Signed { field, a, grid_n, out } => {
            let p = params(field)?;
            check_grid(*grid_n)?;
            let r = signed_eq_density(&p, *a)?;
            let eta = r.density.as_ref().expect("signed report carries its density");
            // η_a is singular at ±a unless the coefficient vanishes
            let rows = sampled(eta, &chebyshev_interior_grid(*a, *grid_n));
            let meta = Meta::new("signed")
                .field(&p)
                .value("a", *a)
                .value("endpoint_coeff", r.endpoint_coeff)
                .value("positive_halfwidth", r.positive_halfwidth)
                .value("balayage_mass", r.balayage_mass)
                .value("total_mass", r.total_mass)
                .count("grid_n", *grid_n);
            emit(out, stdout, &density_output(meta, &rows, out.format.unwrap_or(Format::Csv))?)
        }
        Command::Sigma { field, a, grid_n, out } => {
            let p = params(field)?;
            check_grid(*grid_n)?;
            let d = sigma_density(&p, *a)?;
            let rows = sampled(&d, &chebyshev_grid(*a, *grid_n));
            let meta = Meta::new("sigma")
                .field(&p)
                .value("a", *a)
                .value("mass", d.mass()?)
                .count("grid_n", *grid_n);
            emit(out, stdout, &density_output(meta, &rows, out.format.unwrap_or(Format::Csv))?)
        }
        Command::Functional {
            field,
            a_min,
            a_max,
            n,
            out,
        } => {
            let p = params(field)?;
            check_grid(*n)?;
            if !(*a_min > 0.0 && a_max > a_min && a_max.is_finite()) {
                return Err(Error::Domain(format!("need 0 < a-min < a-max, got {a_min}, {a_max}")).into());
            }
            let mut rows = Vec::with_capacity(*n);
            for a in log_grid(*a_min, *a_max, *n) {
                rows.push([a, ms_functional(&p, a)?]);
            }
            let meta = Meta::new("functional").field(&p).count("n", *n);
            let text = match out.format.unwrap_or(Format::Csv) {
                Format::Csv => Csv::new(meta, &["a", "functional"]).rows(&rows).finish(),
                Format::Json => {
                    let mut obj = meta.into_json();
                    obj.insert("a".into(), rows.iter().map(|r| r[0]).collect::<Vec<_>>().into());
                    obj.insert("functional".into(), rows.iter().map(|r| r[1]).collect::<Vec<_>>().into());
                    serde_json::to_string_pretty(&obj)? + "\n"
                }
            };
            emit(out, stdout, &text)
        }
        Command::Iba {
            field,
            a0,
            tol,
            max_iter,
            out,
        } => {
            let p = params(field)?;
            let start = if a0.eq_ignore_ascii_case("auto") {
                IbaStart::Auto
            } else {
                IbaStart::Value(
                    a0.parse()
                        .map_err(|_| Error::Domain(format!("--a0 must be a number or \"auto\", got {a0}")))?,
                )
            };
            let t = run_iba(&p, start, *tol, *max_iter)?;
            let meta = Meta::new("iba").field(&p).value("tol", *tol);
            emit(out, stdout, &report_output(meta, &t, out.format.unwrap_or(Format::Json))?)
        }
        Command::Verify {
            field,
            grid_n,
            tol,
            out,
        } => {
            let format = out.format.unwrap_or(Format::Json);
            if field.q == 1.0 {
                let r = weakly_admissible_check(field.s, field.b, *tol)?;
                let meta = Meta::new("verify").value("s", field.s).value("q", 1.0).value("b", field.b);
                emit(out, stdout, &report_output(meta, &r, format)?)?;
                return if r.passed {
                    Ok(())
                } else {
                    Err(Failure::Verification(format!("potential gap {:e}", r.max_potential_gap)))
                };
            }
            let p = params(field)?;
            check_grid(*grid_n)?;
            let a = critical_halfwidth(&p)?;
            let r = verify_all(&p, *grid_n, tol * sigma_constant(&p, a).abs())?;
            let meta = Meta::new("verify").field(&p).count("grid_n", *grid_n).value("tol", *tol);
            emit(out, stdout, &report_output(meta, &r, format)?)?;
            if r.passed {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "constancy gap {:e}, exterior excess {:e}",
                    r.frostman.constancy_gap, r.frostman.off_support_min_excess
                )))
            }
        }
        Command::Logcase { q, b, grid_n, out } => {
            check_grid(*grid_n)?;
            let l = log_case_reference(*q, *b)?;
            let d = l.as_interval_density()?;
            let rows = sampled(&d, &chebyshev_grid(l.a_tilde, *grid_n));
            let meta = Meta::new("logcase")
                .value("q", *q)
                .value("b", *b)
                .value("a_tilde", l.a_tilde)
                .value("mass", l.mass_closed_form())
                .count("grid_n", *grid_n);
            emit(out, stdout, &density_output(meta, &rows, out.format.unwrap_or(Format::Csv))?)
        }
    }
}
