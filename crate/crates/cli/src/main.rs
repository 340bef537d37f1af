//! `tempstable` command-line front end.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::fmt::Display;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tempstable::process::{self, ProcessError, ProcessParams};
use tempstable::relaxation::{self as rx, RelaxationError, RelaxationParams};
use tempstable::sampling::{self, SamplingError};
use tempstable::verify::{self, VerifyConfig};

use output::{emit, Cell, Format, OutputSpec, Table};

#[derive(Debug, Parser)]
#[command(name = "tempstable", version, about = "Tempered relaxation and generalized one-sided stable laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relaxation function Gamma(rho; lambda t)/Gamma(rho) on a time grid.
    Relax {
        /// Rate lambda > 0.
        #[arg(long)]
        lambda: f64,
        /// Shape rho in (0, 1].
        #[arg(long)]
        rho: f64,
        #[command(flatten)]
        t: TimeGrid,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Transition density h(x, t) on an x grid.
    Density {
        #[command(flatten)]
        p: LawArgs,
        /// Time t > 0.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[command(flatten)]
        x: SpaceGrid,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Independent draws of X(t).
    Sample {
        #[command(flatten)]
        p: LawArgs,
        /// Time t > 0.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Number of draws.
        #[arg(long)]
        n: usize,
        /// Seed; the same seed gives the same draws on any thread count.
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Fractional moments E X(1)^delta.
    Moments {
        #[command(flatten)]
        p: LawArgs,
        /// One or more orders, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<f64>,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Codifference of (X(s), X(t)) over a grid of later times t.
    Codiff {
        #[command(flatten)]
        p: LawArgs,
        /// Transform variable paired with X(s).
        #[arg(long)]
        eta1: f64,
        /// Transform variable paired with X(t).
        #[arg(long)]
        eta2: f64,
        /// Earlier time s > 0.
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        t: TimeGrid,
        #[command(flatten)]
        out: OutputSpec,
    },
    /// Runs a verification suite; exit status is the number of failed checks (at most 125).
    Verify {
        /// relaxation, spectral, density, moments, tails, codifference,
        /// sampling, cm, rho2, levy-measure or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed of the Monte-Carlo checks (fixed default so that runs are reproducible).
        #[arg(long, default_value_t = VerifyConfig::default().seed)]
        seed: u64,
        /// Draws per Monte-Carlo check.
        #[arg(long, default_value_t = VerifyConfig::default().draws)]
        draws: usize,
        #[command(flatten)]
        out: OutputSpec,
    },
}

#[derive(Debug, Clone, Args)]
struct LawArgs {
    /// Stability index alpha in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Shape rho > 0 with alpha rho <= 1.
    #[arg(long)]
    rho: f64,
    /// Scale c > 0.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

impl LawArgs {
    fn params(&self) -> Result<ProcessParams, CliError> {
        let p = if self.alpha == 1.0 {
            ProcessParams::boundary(self.rho, self.c)
        } else {
            ProcessParams::new(self.alpha, self.rho, self.c)
        };
        p.map_err(CliError::from)
    }

    fn describe(&self, t: &mut Table) {
        t.meta("alpha", self.alpha);
        t.meta("rho", self.rho);
        t.meta("c", self.c);
    }
}

/// Grid `start:stop:step`; with `--log` the step is taken in log10 units.
#[derive(Debug, Clone, Args)]
struct TimeGrid {
    /// Time grid start:stop:step.
    #[arg(long = "t", value_name = "START:STOP:STEP")]
    grid: String,
    /// Step the grid in log10 units.
    #[arg(long)]
    log: bool,
}

#[derive(Debug, Clone, Args)]
struct SpaceGrid {
    /// Point grid start:stop:step.
    #[arg(long = "x", value_name = "START:STOP:STEP")]
    grid: String,
    /// Step the grid in log10 units.
    #[arg(long)]
    log: bool,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ProcessError> for CliError {
    fn from(e: ProcessError) -> Self {
        match e {
            ProcessError::InvalidParams(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<RelaxationError> for CliError {
    fn from(e: RelaxationError) -> Self {
        match e {
            RelaxationError::InvalidParams(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SamplingError> for CliError {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::InvalidParams(_) | SamplingError::Process(ProcessError::InvalidParams(_)) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn parse_grid(spec: &str, log: bool) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Validation(format!("grid {spec:?}: {why}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("expected start:stop:step with numeric fields"))?;
    let values = match parts[..] {
        [v] => vec![v],
        [start, stop, step] => {
            if !(start.is_finite() && stop.is_finite() && step > 0.0 && step.is_finite()) || stop < start {
                return Err(bad("need finite start <= stop and step > 0"));
            }
            if log && !(start > 0.0) {
                return Err(bad("log grids need start > 0"));
            }
            let (a, b) = if log { (start.log10(), stop.log10()) } else { (start, stop) };
            let n = ((b - a) / step + 1e-9).floor() as usize + 1;
            if n > 10_000_000 {
                return Err(bad("more than 1e7 points"));
            }
            (0..n).map(|k| a + k as f64 * step).map(|v| if log { 10f64.powf(v) } else { v }).collect()
        }
        _ => return Err(bad("expected start:stop:step or a single value")),
    };
    Ok(values)
}

fn relax(lambda: f64, rho: f64, grid: &TimeGrid) -> Result<Table, CliError> {
    let p = RelaxationParams::new(lambda, rho)?;
    let ts = parse_grid(&grid.grid, grid.log)?;
    let mut t = Table::new("relax", vec!["t", "phi", "phi_ml_form", "small_t_asymptote", "large_t_asymptote"]);
    t.meta("lambda", lambda);
    t.meta("rho", rho);
    for &x in &ts {
        t.rows.push(vec![
            x.into(),
            rx::phi(p, x)?.into(),
            rx::phi_ml_form(p, x)?.into(),
            rx::small_t_asymptote(p, x)?.into(),
            rx::large_t_asymptote(p, x)?.into(),
        ]);
    }
    Ok(t)
}

fn density(law: &LawArgs, time: f64, grid: &SpaceGrid) -> Result<Table, CliError> {
    let p = law.params()?;
    let xs = parse_grid(&grid.grid, grid.log)?;
    if let Some(x) = xs.iter().find(|&&x| !(x > 0.0)) {
        return Err(CliError::Validation(format!("x = {x}: density grid points must be positive")));
    }
    let mut t = Table::new("density", vec!["x", "h", "method"]);
    law.describe(&mut t);
    t.meta("t", time);
    for (x, r) in xs.iter().zip(process::density_batch(p, &xs, time)) {
        let d = r?;
        t.rows.push(vec![(*x).into(), d.value.into(), d.method.as_str().into()]);
    }
    if p.alpha() < 1.0 {
        t.footer.push(("normalization".into(), process::weighted_mass(p, time, 0.0)?));
    }
    Ok(t)
}

fn sample(law: &LawArgs, time: f64, n: usize, seed: u64) -> Result<Table, CliError> {
    let p = law.params()?;
    let batch = sampling::sample_batch(p, time, n, seed)?;
    let mut t = Table::new("sample", vec!["index", "x"]);
    law.describe(&mut t);
    t.meta("t", time);
    t.meta("n", n);
    t.meta("seed", seed);
    t.meta("chunk_size", batch.chunk_size);
    for (i, v) in batch.values.iter().enumerate() {
        t.rows.push(vec![Cell::Text(i.to_string()), (*v).into()]);
    }
    Ok(t)
}

fn moments(law: &LawArgs, deltas: &[f64]) -> Result<Table, CliError> {
    let p = law.params()?;
    let mut t = Table::new("moments", vec!["delta", "moment"]);
    law.describe(&mut t);
    for &d in deltas {
        t.rows.push(vec![d.into(), process::moment(p, d)?.into()]);
    }
    Ok(t)
}

fn codiff(law: &LawArgs, eta1: f64, eta2: f64, s: f64, grid: &TimeGrid) -> Result<Table, CliError> {
    let p = law.params()?;
    let ts = parse_grid(&grid.grid, grid.log)?;
    let mut t = Table::new("codiff", vec!["t", "codifference", "literal_product_form", "literal_linear_asymptote"]);
    law.describe(&mut t);
    t.meta("eta1", eta1);
    t.meta("eta2", eta2);
    t.meta("s", s);
    for &x in &ts {
        t.rows.push(vec![
            x.into(),
            process::codifference(p, eta1, eta2, s, x)?.into(),
            process::codifference_product_form(p, eta1, eta2, s, x)?.into(),
            process::codifference_linear_asymptote(p, eta1, eta2, x).into(),
        ]);
    }
    Ok(t)
}

fn verify_cmd(suite: &str, seed: u64, draws: usize, out: &OutputSpec) -> Result<(String, usize), CliError> {
    if draws < 1000 {
        return Err(CliError::Validation(format!("draws = {draws} must be at least 1000")));
    }
    let reports = verify::run_suite(suite, &VerifyConfig { seed, draws }).map_err(|e| CliError::Validation(e.to_string()))?;
    let failures = verify::failure_count(&reports);
    eprint!("{}", verify::summary_table(&reports));
    let text = match out.format {
        Format::Json => verify::to_json(&reports).map_err(|e| CliError::Numeric(e.to_string()))? + "\n",
        Format::Csv => {
            let mut t = Table::new("verify", vec!["check_id", "verdict", "max_deviation", "tolerance", "notes"]);
            t.meta("suite", suite);
            t.meta("seed", seed);
            t.meta("draws", draws);
            t.meta("tolerance_table_version", verify::tolerances::TABLE_VERSION);
            for r in &reports {
                let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                t.rows.push(vec![
                    Cell::Text(r.check_id.clone()),
                    Cell::Text(verdict),
                    r.max_deviation().into(),
                    r.tolerance.into(),
                    Cell::Text(csv_quote(&r.notes)),
                ]);
            }
            t.render(out)
        }
    };
    Ok((text, failures))
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (text, out, status) = match &cli.command {
        Command::Relax { lambda, rho, t, out } => (relax(*lambda, *rho, t)?.render(out), out, 0),
        Command::Density { p, t, x, out } => (density(p, *t, x)?.render(out), out, 0),
        Command::Sample { p, t, n, seed, out } => (sample(p, *t, *n, *seed)?.render(out), out, 0),
        Command::Moments { p, delta, out } => (moments(p, delta)?.render(out), out, 0),
        Command::Codiff { p, eta1, eta2, s, t, out } => (codiff(p, *eta1, *eta2, *s, t)?.render(out), out, 0),
        Command::Verify { suite, seed, draws, out } => {
            let (text, failures) = verify_cmd(suite, *seed, *draws, out)?;
            (text, out, failures.min(125) as u8)
        }
    };
    emit(&text, out.out.as_deref()).map_err(|e| CliError::Numeric(format!("writing output: {e}")))?;
    Ok(status)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tempstable: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_grid_has_inclusive_end() {
        let g = parse_grid("0:5:0.1", false).unwrap();
        assert_eq!(g.len(), 51);
        assert!((g[50] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn log_grid_steps_in_decades() {
        let g = parse_grid("0.01:100:0.5", true).unwrap();
        assert_eq!(g.len(), 9);
        assert!((g[4] - 1.0).abs() < 1e-12);
        assert!(parse_grid("0:1:0.1", true).is_err());
    }

    #[test]
    fn malformed_grids_are_validation_errors() {
        for s in ["1:0:0.1", "0:1:0", "a:b:c", "0:1"] {
            assert!(matches!(parse_grid(s, false), Err(CliError::Validation(_))), "{s}");
        }
    }
}
