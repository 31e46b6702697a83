use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hypradial::checks::{self, McSettings, Suite};
use hypradial::output::{self, EvalRow, Format, RecoveryRecord};
use hypradial::parallel;
use hypradial_core::eigenfn::{phi_spectral, separator_v, spectral_from_lambda};
use hypradial_core::inversion::{self, Observation};
use hypradial_core::{Error, HyperbolicSpace, QuadratureConfig};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_ZERO_OBSERVATION: u8 = 4;
const EXIT_SECOND_RADIUS: u8 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "hypradial",
    version,
    about = "Radial eigenfunctions of the hyperbolic Laplacian and eigenvalue recovery from sphere averages"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunConfig {
    /// Radius of the ball model; curvature is -1/rho^2.
    #[arg(long, global = true, default_value_t = 1.0)]
    rho: f64,
    /// Dimension of the geodesic spheres (the space has dimension k + 1).
    #[arg(long, global = true, default_value_t = 2)]
    k: u32,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Output encoding; defaults to csv for eval and json for invert.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Seed for Monte Carlo checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate phi_lambda(r) and the separator V(r) on an evenly spaced grid.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        /// Number of grid points, endpoints included.
        #[arg(long)]
        steps: usize,
    },
    /// Recover lambda from an observed sphere average.
    Invert {
        /// First observation as r:value.
        #[arg(long, value_parser = parse_obs, allow_hyphen_values = true)]
        obs: (f64, f64),
        /// Second observation as r:value, taken at r <= pi*rho/p.
        #[arg(long, value_parser = parse_obs, allow_hyphen_values = true, conflicts_with = "auto_sample")]
        obs2: Option<(f64, f64)>,
        /// Demo oracle: evaluate the true phi at the requested second radius.
        #[arg(long, requires = "lambda")]
        auto_sample: bool,
        /// True eigenvalue used by --auto-sample.
        #[arg(long, allow_negative_numbers = true, requires = "auto_sample")]
        lambda: Option<f64>,
    },
    /// Run property suites and report PASS/FAIL with the worst deviation.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Samples per Monte Carlo case.
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: u64,
        /// Worker threads for Monte Carlo; the result does not depend on it.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Identity,
    Oracle,
    Zeros,
    Limits,
    Separator,
    Mc,
    Inversion,
}

fn parse_obs(s: &str) -> Result<(f64, f64), String> {
    let (r, v) = s.split_once(':').ok_or_else(|| format!("expected r:value, got {s:?}"))?;
    let r = r.trim().parse::<f64>().map_err(|e| format!("bad radius {r:?}: {e}"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("bad value {v:?}: {e}"))?;
    Ok((r, v))
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Domain { .. } | Error::Usage(_) => EXIT_USAGE,
            Error::ZeroObservation => EXIT_ZERO_OBSERVATION,
            Error::RadiusTooLarge { .. } => EXIT_SECOND_RADIUS,
            _ => EXIT_CONVERGENCE,
        };
        Self { code, message: err.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Self { code: EXIT_CONVERGENCE, message: format!("write failed: {err}") }
    }
}

impl RunConfig {
    fn space(&self) -> Result<HyperbolicSpace, Failure> {
        Ok(HyperbolicSpace::new(self.rho, self.k)?)
    }

    fn quadrature(&self) -> Result<QuadratureConfig, Failure> {
        let mut cfg = QuadratureConfig::default();
        if let Some(t) = self.abs_tol {
            cfg.abs_tol = t;
        }
        if let Some(t) = self.rel_tol {
            cfg.rel_tol = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn format_or(&self, default: Format) -> Format {
        match self.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            None => default,
        }
    }
}

fn eval(run: &RunConfig, lambda: f64, r_min: f64, r_max: f64, steps: usize) -> Result<(), Failure> {
    let space = run.space()?;
    let cfg = run.quadrature()?;
    if steps == 0 {
        return Err(Error::Usage("--steps must be at least 1").into());
    }
    if r_min > r_max {
        return Err(Error::Usage("--r-min must not exceed --r-max").into());
    }
    let param = spectral_from_lambda(&space, lambda)?;
    let rows = checks::linspace(r_min, r_max, steps)
        .into_iter()
        .map(|r| {
            Ok(EvalRow { r, phi: phi_spectral(&space, &param, r, &cfg)?, branch: param.branch.name(), v: separator_v(&space, r, &cfg)? })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    output::write_eval(io::stdout().lock(), &rows, run.format_or(Format::Csv))?;
    Ok(())
}

fn invert(run: &RunConfig, obs: (f64, f64), obs2: Option<(f64, f64)>, auto_lambda: Option<f64>) -> Result<(), Failure> {
    let space = run.space()?;
    let cfg = run.quadrature()?;
    let first = Observation::new(obs.0, obs.1)?;
    if first.value == 0.0 {
        return Err(Failure { code: EXIT_ZERO_OBSERVATION, message: "zero observation carries no information".into() });
    }
    let result = match (obs2, auto_lambda) {
        (Some((r, v)), _) => inversion::recover_with_pair(&space, &first, &Observation::new(r, v)?, &cfg),
        (None, Some(lambda)) => {
            let param = spectral_from_lambda(&space, lambda)?;
            inversion::recover_with_sampler(&space, &first, |r0| phi_spectral(&space, &param, r0, &cfg), &cfg)
        }
        (None, None) => inversion::recover(&space, &first, &cfg),
    };
    let result = match result {
        Ok(result) => result,
        Err(Error::RadiusTooLarge { max_radius, .. }) => {
            println!("{}", output::float(max_radius));
            return Err(Failure {
                code: EXIT_SECOND_RADIUS,
                message: format!("a second observation is required at r0 = {} (pass --obs2 r0:value)", output::float(max_radius)),
            });
        }
        Err(err) => return Err(err.into()),
    };
    output::write_recovery(io::stdout().lock(), &RecoveryRecord::from(&result), run.format_or(Format::Json))?;
    Ok(())
}

fn verify(run: &RunConfig, suite: SuiteArg, mc_samples: u64, threads: Option<usize>) -> Result<bool, Failure> {
    let suite = match suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Identity => Suite::Identity,
        SuiteArg::Oracle => Suite::Oracle,
        SuiteArg::Zeros => Suite::Zeros,
        SuiteArg::Limits => Suite::Limits,
        SuiteArg::Separator => Suite::Separator,
        SuiteArg::Mc => Suite::Mc,
        SuiteArg::Inversion => Suite::Inversion,
    };
    if mc_samples == 0 {
        return Err(Error::Usage("--mc-samples must be at least 1").into());
    }
    let mc = McSettings { samples: mc_samples, seed: run.seed, threads: threads.unwrap_or_else(parallel::default_threads) };
    let mut out = io::stdout().lock();
    let mut all = true;
    for check in checks::run_suite(suite, mc) {
        writeln!(out, "{check}")?;
        all &= check.passed;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval { lambda, r_min, r_max, steps } => eval(&cli.run, lambda, r_min, r_max, steps).map(|()| true),
        Command::Invert { obs, obs2, auto_sample, lambda } => {
            invert(&cli.run, obs, obs2, if auto_sample { lambda } else { None }).map(|()| true)
        }
        Command::Verify { suite, mc_samples, threads } => verify(&cli.run, suite, mc_samples, threads),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(failure) => {
            eprintln!("hypradial: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
