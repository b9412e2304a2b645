//! `noisegain`: reproducible noise-gain, pooling, normalization and rank
//! experiments from the command line.

mod commands;
mod error;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use noisegain::normlip::{NormConstants, DEFAULT_DIM, DEFAULT_MAPS};
use noisegain::pooling::DEFAULT_ORDER;
use noisegain::stemgain::BinStatistic;

use commands::{EnvelopeParams, Global, KernelChoice, LipschitzParams, ENVELOPE_COLUMNS};
use error::{CliError, CliResult};
use output::{Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "noisegain",
    version,
    about = "Noise-gain, pooling, normalization and rank experiments"
)]
struct Cli {
    /// Master seed; every experiment derives its own streams from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials (per-command default when omitted).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Grid side (per-command default when omitted).
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true, default_value_t = 1.0)]
    sigma: f64,
    /// Gauss-Hermite quadrature order.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (a directory for repro-all); standard output otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Statistic {
    Mean,
    Max,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stem-kernel noise gain: analytic vs Monte Carlo.
    GainStem {
        #[arg(long = "k", value_delimiter = ',', default_values_t = [4usize, 8, 12, 16, 20, 24, 28, 32])]
        ks: Vec<usize>,
        #[arg(long, value_enum, default_value_t = KernelChoice::Box)]
        kernel: KernelChoice,
        /// Gaussian width as a multiple of k.
        #[arg(long, default_value_t = 0.3)]
        width_factor: f64,
    },
    /// Anti-aliased downsampling gain with a box prefilter of side s.
    GainDownsample {
        #[arg(long = "s", value_delimiter = ',', default_values_t = [1usize, 2, 3, 4, 6, 8, 12, 16])]
        factors: Vec<usize>,
    },
    /// Radial spectral profile against the fitted low-pass envelope.
    Envelope {
        #[arg(long, value_enum, default_value_t = KernelChoice::Box)]
        kernel: KernelChoice,
        #[arg(long, default_value_t = 31)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        width_factor: f64,
        /// Radii to report (nearest profiled bin); defaults to pi/8, pi/4, pi/2.
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Radial bin width; defaults to pi sqrt(2) / 600.
        #[arg(long)]
        bin_width: Option<f64>,
        #[arg(long, value_enum, default_value_t = Statistic::Mean)]
        statistic: Statistic,
    },
    /// Average and max pooling error: quadrature theory vs Monte Carlo.
    Pooling {
        #[arg(long = "w", value_delimiter = ',', default_values_t = [2usize, 3, 4, 5, 6])]
        widths: Vec<usize>,
    },
    /// Measured norm of random maps behind normalization vs L_z / sigma_min.
    Lipschitz {
        #[arg(long, value_delimiter = ',', default_values_t = ["INCEPTION".to_string(), "OPENAI".to_string()])]
        presets: Vec<String>,
        /// Extra preset with these three channel stds (zero mean).
        #[arg(long, value_parser = parse_std3)]
        custom_std: Option<[f64; 3]>,
        #[arg(long, default_value_t = 3.0)]
        lz: f64,
        #[arg(long, default_value_t = DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_MAPS)]
        maps: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Clean/noisy ranks and rank differences of an accuracy table.
    Rankdiff {
        #[arg(long)]
        input: PathBuf,
        /// Severity for first-order flip predictions (needs tau=<v> columns).
        #[arg(long)]
        tau: Option<f64>,
        /// Report RankDiff(a) - RankDiff(b) for the pair `a,b`; repeatable.
        #[arg(long, value_parser = parse_pair)]
        pair: Vec<(String, String)>,
    },
    /// Regenerates all five tables into the --out directory and checks them.
    ReproAll,
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(',') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() && !b.contains(',') => {
            Ok((a.trim().to_string(), b.trim().to_string()))
        }
        _ => Err(format!("expected `a,b`, got `{s}`")),
    }
}

fn parse_std3(s: &str) -> Result<[f64; 3], String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected 3 stds, got {}", v.len()))
}

fn emit(table: &Table, format: Format, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn repro_all(g: &Global, format: Format, dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)?;
    // pooling Monte Carlo needs at least 100 trials
    let pool_global = Global {
        trials: g.trials.map(|t| t.max(100)),
        ..g.clone()
    };
    let inception = NormConstants::preset("INCEPTION")?;
    let openai = NormConstants::preset("OPENAI")?;
    let reports = [
        (
            "gain_stem",
            commands::gain_stem(
                &Global {
                    grid: g.grid.or(Some(512)),
                    ..g.clone()
                },
                &[4, 8, 12, 16, 20, 24, 28, 32],
                KernelChoice::Box,
                0.3,
            )?,
        ),
        (
            "gain_downsample",
            commands::gain_downsample(
                &Global {
                    grid: g.grid.or(Some(256)),
                    ..g.clone()
                },
                &[1, 2, 3, 4, 6, 8, 12, 16],
            )?,
        ),
        ("envelope", commands::envelope_reference(g)?),
        (
            "pooling",
            commands::pooling(&pool_global, &[2, 3, 4, 5, 6])?,
        ),
        (
            "lipschitz",
            commands::lipschitz(
                g,
                &LipschitzParams {
                    presets: vec![inception, openai],
                    l_z: 3.0,
                    dim: DEFAULT_DIM,
                    maps: DEFAULT_MAPS,
                    tol: 1e-4,
                },
            )?,
        ),
    ];
    let mut issues = Vec::new();
    for (name, report) in &reports {
        emit(
            &report.table,
            format,
            Some(&dir.join(format!("{name}.{}", format.extension()))),
        )?;
        issues.extend(report.issues.iter().cloned());
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(CliError::ToleranceExceeded(issues.join("; ")))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let g = Global {
        seed: cli.seed,
        trials: cli.trials,
        grid: cli.grid,
        sigma: cli.sigma,
        order: cli.order,
    };
    let out = cli.out.as_deref();
    let table = match cli.command {
        Command::GainStem {
            ks,
            kernel,
            width_factor,
        } => commands::gain_stem(&g, &ks, kernel, width_factor)?.table,
        Command::GainDownsample { factors } => commands::gain_downsample(&g, &factors)?.table,
        Command::Envelope {
            kernel,
            k,
            width_factor,
            radii,
            bin_width,
            statistic,
        } => {
            let params = EnvelopeParams {
                kernel,
                k,
                width_factor,
                radii: if radii.is_empty() {
                    EnvelopeParams::default_radii()
                } else {
                    radii
                },
                bin_width,
                statistic: match statistic {
                    Statistic::Mean => BinStatistic::Mean,
                    Statistic::Max => BinStatistic::Max,
                },
            };
            let mut table = Table::new(&ENVELOPE_COLUMNS);
            commands::envelope(&g, &params, &mut table)?;
            table
        }
        Command::Pooling { widths } => commands::pooling(&g, &widths)?.table,
        Command::Lipschitz {
            presets,
            custom_std,
            lz,
            dim,
            maps,
            tol,
        } => {
            let mut constants = presets
                .iter()
                .map(|p| NormConstants::preset(p))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(std) = custom_std {
                constants.push(NormConstants::new("CUSTOM", [0.0; 3], std)?);
            }
            let params = LipschitzParams {
                presets: constants,
                l_z: lz,
                dim,
                maps,
                tol,
            };
            commands::lipschitz(&g, &params)?.table
        }
        Command::Rankdiff { input, tau, pair } => commands::rankdiff(&input, tau, &pair)?,
        Command::ReproAll => {
            let dir =
                out.ok_or_else(|| CliError::Usage("repro-all needs --out <directory>".into()))?;
            return repro_all(&g, cli.format, dir);
        }
    };
    emit(&table, cli.format, out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            eprint!(
                "error: UsageError: {}",
                text.strip_prefix("error: ").unwrap_or(&text)
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::FAILURE
        }
    }
}
