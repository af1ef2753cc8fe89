//! `isingdm` command-line front end.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 usage error.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isingdm::chain::pairwise_thermal_negativity;
use isingdm::models::{analytic_spectrum, build_hamiltonian, ModelKind, ModelParams};
use isingdm::qlinalg::hermitian_eigenvalues;
use isingdm::sweep::{
    evaluate_point, find_critical_field, find_persistence_temperature, find_vanish_recover_window,
    run_sweep, AxisRange, SweepAxis, SweepSpec, DEFAULT_THRESHOLD,
};
use isingdm::Error;

use output::{chain_csv, fmt_g12, sweep_csv, write_atomic};

#[derive(Parser)]
#[command(
    name = "isingdm",
    version,
    about = "Thermal negativity of Ising chains with DM interaction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negativity of the Gibbs state at one point
    #[command(allow_negative_numbers = true)]
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'T', long)]
        temperature: f64,
    },
    /// Eigenvalues of the Hamiltonian
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Negativity over a parameter grid
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Fixed temperature when T is not swept
        #[arg(short = 'T', long, default_value_t = 1.0)]
        temperature: f64,
        /// AXIS=MIN:MAX[:STEPS] with AXIS one of T, B, d; outermost first
        #[arg(long = "grid", required = true, value_parser = parse_grid)]
        grid: Vec<GridArg>,
        /// Steps for axes that do not give their own
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Field where the longitudinal negativity vanishes
    #[command(allow_negative_numbers = true)]
    CriticalField {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'T', long)]
        temperature: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Field interval where the transverse negativity dips to zero
    #[command(allow_negative_numbers = true)]
    Window {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'T', long)]
        temperature: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Temperature where the negativity at fixed field and DM vanishes
    #[command(allow_negative_numbers = true)]
    Persistence {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Pairwise negativity table for an open chain
    #[command(allow_negative_numbers = true)]
    Chain {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'T', long)]
        temperature: f64,
        /// Also report non-adjacent pairs
        #[arg(long)]
        distant: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// longitudinal, transverse or chain
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    #[arg(short = 'J', long = "coupling", default_value_t = 1.0)]
    j: f64,
    #[arg(short = 'B', long = "field", default_value_t = 0.0)]
    b: f64,
    #[arg(short = 'd', long = "dm", default_value_t = 0.0)]
    d: f64,
    /// Chain length (chain model only)
    #[arg(short = 'n', long = "sites", default_value_t = 2)]
    sites: usize,
}

#[derive(Args)]
struct OutArgs {
    /// Destination file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of --out, else csv
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug)]
struct GridArg {
    axis: SweepAxis,
    min: f64,
    max: f64,
    steps: Option<usize>,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridArg, String> {
    let (axis, range) = s
        .split_once('=')
        .ok_or_else(|| format!("expected AXIS=MIN:MAX[:STEPS], got '{s}'"))?;
    let axis = SweepAxis::from_symbol(axis)
        .ok_or_else(|| format!("unknown axis '{axis}' (use T, B or d)"))?;
    let parts: Vec<&str> = range.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(format!("expected MIN:MAX[:STEPS], got '{range}'"));
    }
    let num = |p: &str| {
        p.parse::<f64>()
            .map_err(|_| format!("'{p}' is not a number"))
    };
    let steps = match parts.get(2) {
        Some(p) => Some(
            p.parse::<usize>()
                .map_err(|_| format!("'{p}' is not a step count"))?,
        ),
        None => None,
    };
    Ok(GridArg {
        axis,
        min: num(parts[0])?,
        max: num(parts[1])?,
        steps,
    })
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_)
            | Error::InvalidSweep(_)
            | Error::UnsupportedKind(_)
            | Error::SizeLimit(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numeric(format!("{e:#}"))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

impl ModelArgs {
    fn params(&self, default: ModelKind) -> CliResult<ModelParams> {
        let kind = self.model.unwrap_or(default);
        let n = if kind == ModelKind::ChainDm {
            self.sites
        } else {
            2
        };
        Ok(ModelParams::new(kind, self.j, self.b, self.d, n)?)
    }

    fn require(
        &self,
        default: ModelKind,
        allowed: ModelKind,
        command: &str,
    ) -> CliResult<ModelParams> {
        let p = self.params(default)?;
        if p.kind != allowed {
            return Err(Failure::Usage(format!(
                "{command} requires --model {allowed}, got {}",
                p.kind
            )));
        }
        Ok(p)
    }
}

impl OutArgs {
    fn format(&self) -> Format {
        self.format
            .unwrap_or_else(|| match self.out.as_deref().and_then(Path::extension) {
                Some(ext) if ext == "json" => Format::Json,
                _ => Format::Csv,
            })
    }

    fn emit(&self, bytes: &[u8]) -> CliResult<()> {
        match &self.out {
            Some(path) => write_atomic(path, bytes)?,
            None => print!("{}", String::from_utf8_lossy(bytes)),
        }
        Ok(())
    }
}

fn kv(key: &str, value: f64) {
    println!("{key}={}", fmt_g12(value));
}

fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Eval { model, temperature } => {
            let p = model.params(ModelKind::LongitudinalDm)?;
            let r = evaluate_point(&p, temperature)?;
            println!("model={}", p.kind);
            kv("T", temperature);
            kv("B", p.b);
            kv("d", p.d);
            kv("J", p.j);
            kv("N", r.negativity);
            println!("path={}", r.path.name());
            for (k, mu) in r.mu.iter().enumerate() {
                kv(&format!("mu{}", k + 1), *mu);
            }
        }
        Command::Spectrum { model } => {
            let p = model.params(ModelKind::LongitudinalDm)?;
            let numeric = hermitian_eigenvalues(&build_hamiltonian(&p)?)?;
            let join = |v: &[f64]| v.iter().map(|&x| fmt_g12(x)).collect::<Vec<_>>().join(",");
            println!("model={}", p.kind);
            println!("numeric={}", join(&numeric));
            if p.kind != ModelKind::ChainDm {
                println!("analytic={}", join(&analytic_spectrum(&p)?.sorted_values()));
            }
        }
        Command::Sweep {
            model,
            temperature,
            grid,
            steps,
            out,
        } => {
            let p = model.params(ModelKind::LongitudinalDm)?;
            if p.kind == ModelKind::ChainDm {
                return Err(Failure::Usage(
                    "sweep supports the two-qubit models; use the chain command for chains".into(),
                ));
            }
            let mut spec = SweepSpec::new(p, temperature);
            spec.axes = grid
                .iter()
                .map(|g| {
                    (
                        g.axis,
                        AxisRange::new(g.min, g.max, g.steps.unwrap_or(steps)),
                    )
                })
                .collect();
            spec.validate()?;
            let records = run_sweep(&spec)?;
            let bytes = match out.format() {
                Format::Csv => sweep_csv(&records)?,
                Format::Json => {
                    let mut v = serde_json::to_vec_pretty(&records).map_err(anyhow::Error::from)?;
                    v.push(b'\n');
                    v
                }
            };
            out.emit(&bytes)?;
        }
        Command::CriticalField {
            model,
            temperature,
            threshold,
        } => {
            let p = model.require(
                ModelKind::LongitudinalDm,
                ModelKind::LongitudinalDm,
                "critical-field",
            )?;
            let r = find_critical_field(&p, temperature, p.d, threshold)?;
            kv("B0", r.b0);
            kv("bracket_lo", r.bracket.0);
            kv("bracket_hi", r.bracket.1);
            kv("T", r.temperature);
            kv("d", r.d);
        }
        Command::Window {
            model,
            temperature,
            threshold,
        } => {
            let p = model.require(ModelKind::TransverseDm, ModelKind::TransverseDm, "window")?;
            match find_vanish_recover_window(&p, temperature, p.d, threshold) {
                Ok(w) => {
                    kv("vanish", w.vanish);
                    kv("recover", w.recover);
                    kv("center", w.center());
                }
                Err(Error::NoWindow { limit }) => {
                    println!("window=none");
                    kv("limit", limit);
                }
                Err(e) => return Err(e.into()),
            }
            kv("T", temperature);
            kv("d", p.d);
        }
        Command::Persistence { model, threshold } => {
            let p = model.params(ModelKind::LongitudinalDm)?;
            let tc = find_persistence_temperature(&p, p.b, p.d, threshold)?;
            kv("Tc", tc);
            kv("B", p.b);
            kv("d", p.d);
        }
        Command::Chain {
            model,
            temperature,
            distant,
            out,
        } => {
            let p = model.require(ModelKind::ChainDm, ModelKind::ChainDm, "chain")?;
            let report = pairwise_thermal_negativity(&p, temperature, distant)?;
            if out.out.is_none() && out.format.is_none() {
                println!("n_sites={}", report.n_sites);
                for e in &report.entries {
                    kv(&format!("N_{}_{}", e.sites.0, e.sites.1), e.negativity);
                }
            } else {
                let bytes = match out.format() {
                    Format::Csv => chain_csv(&report)?,
                    Format::Json => {
                        let mut v =
                            serde_json::to_vec_pretty(&report).map_err(anyhow::Error::from)?;
                        v.push(b'\n');
                        v
                    }
                };
                out.emit(&bytes)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("B=-2:2:41").unwrap();
        assert_eq!(g.axis, SweepAxis::Field);
        assert_eq!((g.min, g.max, g.steps), (-2.0, 2.0, Some(41)));
        assert_eq!(parse_grid("T=0.1:5").unwrap().steps, None);
        assert!(parse_grid("x=0:1").is_err());
        assert!(parse_grid("B=0").is_err());
        assert!(parse_grid("B=a:1").is_err());
        assert!(parse_grid("B=0:1:2:3").is_err());
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from([
            "isingdm", "eval", "-J", "-1", "-B", "-0.5", "-d", "1", "-T", "0.1",
        ])
        .unwrap();
        let Command::Eval { model, .. } = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!((model.j, model.b), (-1.0, -0.5));
    }
}
