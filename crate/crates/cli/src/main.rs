//! `szego`: coefficients, determinant experiments, kernel dumps and
//! verification suites for the finite Hilbert matrix.
//!
//! Exit codes: 0 ok, 1 invariant failure, 2 bad input, 3 numeric or I/O
//! failure.

mod cache;
mod config;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use szego::asymptotics::{converge_experiment, gamma_closed, gamma_fg, gamma_integral};
use szego::limit::{beta1_experiment, even_power_experiment, LimitError};
use szego::matrix::{BetaParam, HilbertSpec, SpectralData};
use szego::operator::{kernel_eval, KernelKind, KernelSpec};
use szego::quadrature::QuadratureConfig;
use szego::report::{fmt17, ConvergenceReport};

use cache::SpectrumCache;
use config::{parse_alpha, parse_beta, parse_dyadic, parse_grid, parse_n_list, Grid, SizeList};

#[derive(Debug, Error)]
enum CliError {
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::BadInput(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::InequalityViolation { .. } => CliError::Invariant(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    HankelG,
    TildeG,
    DnRemainder,
    Carleman,
    Cosh,
    A0,
}

#[derive(Parser, Debug)]
#[command(
    name = "szego",
    version,
    about = "Determinant asymptotics of the finite Hilbert matrix"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format. Defaults to json for `gamma` and csv elsewhere.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct Quad {
    /// Gauss–Legendre points per panel.
    #[arg(long, default_value_t = 32)]
    quad_order: usize,
    /// Absolute and relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

impl Quad {
    fn config(&self) -> Result<QuadratureConfig, CliError> {
        config::quadrature(self.quad_order, self.tol).map_err(CliError::BadInput)
    }
}

#[derive(Args, Debug)]
struct Sizes {
    #[arg(long, default_value = "1", value_parser = parse_alpha)]
    alpha: f64,
    /// Explicit comma-separated matrix sizes.
    #[arg(long, value_parser = parse_n_list, conflicts_with = "dyadic")]
    n: Option<SizeList>,
    /// Dyadic exponent range `kmin..kmax`, giving N = 2^k.
    #[arg(long, value_parser = parse_dyadic, default_value = "4..13")]
    dyadic: SizeList,
    /// Skip the on-disk spectrum cache.
    #[arg(long)]
    no_cache: bool,
    /// Cache directory; `$SZEGO_CACHE_DIR` or `<tmp>/szego-cache` by default.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl Sizes {
    fn spectra(&self) -> Result<Vec<SpectralData>, CliError> {
        let cache = SpectrumCache::new(if self.no_cache {
            None
        } else {
            Some(self.cache_dir.clone().unwrap_or_else(SpectrumCache::default_dir))
        });
        let sizes = self.n.clone().unwrap_or_else(|| self.dyadic.clone()).0;
        sizes
            .into_iter()
            .map(|n| {
                let spec = HilbertSpec::new(n, self.alpha).map_err(|e| CliError::BadInput(e.to_string()))?;
                Ok(cache.spectrum(spec))
            })
            .collect()
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// γ(β) by the closed form, the integral and the arcsine form.
    Gamma {
        #[arg(long, value_parser = parse_beta, allow_hyphen_values = true)]
        beta: BetaParam,
        #[command(flatten)]
        quad: Quad,
        #[command(flatten)]
        output: Output,
    },
    /// Residuals ln det(I − (β/π)H) − 2n·γ(β) over a range of N.
    Converge {
        #[arg(long, value_parser = parse_beta, allow_hyphen_values = true)]
        beta: BetaParam,
        #[command(flatten)]
        sizes: Sizes,
        #[command(flatten)]
        output: Output,
    },
    /// The boundary case β = 1: ratio ln det(I − H/π)/(2n) with bounds.
    Limit {
        #[command(flatten)]
        sizes: Sizes,
        #[command(flatten)]
        output: Output,
    },
    /// Residuals of ln det(I + (H/π)^{2m}) − 2n·γ_{2m}.
    Even {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        sizes: Sizes,
        #[command(flatten)]
        quad: Quad,
        #[command(flatten)]
        output: Output,
    },
    /// Kernel values k(x, y) on a grid of x at fixed y.
    Kernels(KernelArgs),
    /// Run invariant suites, one PASS/FAIL line per invariant.
    Verify {
        /// all, quadrature, matrix, asymptotics, operator, limit or integrals.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed of the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        quad: Quad,
    },
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// `start:stop:count`, endpoints included.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Grid,
    /// Second argument.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    y: f64,
    /// Matrix size for the Hankel kinds.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value = "1", value_parser = parse_alpha)]
    alpha: f64,
    /// Parameter of the A0 kernel.
    #[arg(long, value_parser = parse_beta, allow_hyphen_values = true, default_value = "0.5")]
    beta: BetaParam,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    output: Output,
}

#[derive(Serialize)]
struct GammaReport {
    beta: Complex64,
    gamma_closed: Complex64,
    gamma_integral: Complex64,
    gamma_fg: Complex64,
    max_pairwise_gap: f64,
}

#[derive(Serialize)]
struct KernelRow {
    x: f64,
    y: f64,
    value: Complex64,
}

fn emit(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn csv_line(fields: &[String]) -> String {
    fields.join(",") + "\n"
}

fn cmd_gamma(beta: BetaParam, cfg: &QuadratureConfig, output: &Output) -> Result<(), CliError> {
    let closed = gamma_closed(beta).map_err(numeric)?.value;
    let integral = gamma_integral(beta, cfg).map_err(numeric)?.value;
    let fg = gamma_fg(beta.value()).value;
    let gap = (closed - integral)
        .norm()
        .max((closed - fg).norm())
        .max((integral - fg).norm());
    let report = GammaReport {
        beta: beta.value(),
        gamma_closed: closed,
        gamma_integral: integral,
        gamma_fg: fg,
        max_pairwise_gap: gap,
    };
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&report).map_err(numeric)? + "\n",
        Format::Csv => {
            let header = "beta_re,beta_im,closed_re,closed_im,integral_re,integral_im,fg_re,fg_im,max_pairwise_gap\n";
            let values = [report.beta, closed, integral, fg]
                .iter()
                .flat_map(|z| [fmt17(z.re), fmt17(z.im)])
                .chain([fmt17(gap)])
                .collect::<Vec<_>>();
            header.to_string() + &csv_line(&values)
        }
    };
    emit(output, &text)
}

fn emit_report(report: &ConvergenceReport, output: &Output) -> Result<(), CliError> {
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => report.to_csv().map_err(numeric)?,
        Format::Json => report.to_json().map_err(numeric)? + "\n",
    };
    emit(output, &text)?;
    eprintln!("{}", report.summary_line());
    Ok(())
}

fn cmd_kernels(args: &KernelArgs) -> Result<(), CliError> {
    let (n, alpha) = (args.n, args.alpha);
    let kind = match args.kind {
        Kind::HankelG => KernelKind::HankelG { n, alpha },
        Kind::TildeG => KernelKind::TildeG { n, alpha },
        Kind::DnRemainder => KernelKind::DnRemainder { n, alpha },
        Kind::Carleman => KernelKind::Carleman,
        Kind::Cosh => KernelKind::CoshConvolution,
        Kind::A0 => KernelKind::A0Kernel {
            beta: args.beta.value(),
        },
    };
    let cfg = args.quad.config()?;
    let y = args.y;
    let spec = KernelSpec::new(kind);
    let rows = args
        .grid
        .points()
        .into_iter()
        .map(|x| {
            let value = kernel_eval(&spec, x, y, &cfg).map_err(|e| CliError::BadInput(e.to_string()))?;
            Ok(KernelRow { x, y, value })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(numeric)? + "\n",
        Format::Csv => {
            let mut text = String::from("x,y,value_re,value_im\n");
            for r in &rows {
                text += &csv_line(&[fmt17(r.x), fmt17(r.y), fmt17(r.value.re), fmt17(r.value.im)]);
            }
            text
        }
    };
    emit(&args.output, &text)
}

fn cmd_verify(suite: &str, seed: u64, cfg: QuadratureConfig) -> Result<(), CliError> {
    let checks = verify::select(suite).map_err(CliError::BadInput)?;
    let ctx = verify::Ctx { cfg, seed };
    let mut first_failure = None;
    for check in checks {
        match (check.run)(&ctx) {
            Ok(detail) => println!("PASS {}/{}: {detail}", check.suite, check.name),
            Err(detail) => {
                println!("FAIL {}/{}: {detail}", check.suite, check.name);
                first_failure.get_or_insert(format!("{}/{}", check.suite, check.name));
            }
        }
    }
    match first_failure {
        None => Ok(()),
        Some(name) => Err(CliError::Invariant(format!("first failing invariant: {name}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gamma { beta, quad, output } => cmd_gamma(beta, &quad.config()?, &output),
        Command::Converge { beta, sizes, output } => {
            let report = converge_experiment(sizes.alpha, beta, &sizes.spectra()?).map_err(numeric)?;
            emit_report(&report, &output)
        }
        Command::Limit { sizes, output } => {
            let report = beta1_experiment(sizes.alpha, &sizes.spectra()?)?;
            emit_report(&report, &output)
        }
        Command::Even { m, sizes, quad, output } => {
            if m == 0 {
                return Err(CliError::BadInput("m must be positive".into()));
            }
            let report = even_power_experiment(m, sizes.alpha, &sizes.spectra()?, &quad.config()?)?;
            emit_report(&report, &output)
        }
        Command::Kernels(args) => cmd_kernels(&args),
        Command::Verify { suite, seed, quad } => cmd_verify(&suite, seed, quad.config()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
