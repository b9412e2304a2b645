//! Table builders behind each subcommand.

use std::f64::consts::PI;
use std::path::Path;

use noisegain::field::purpose_seed;
use noisegain::normlip::{lipschitz_bound, sensitivity_ratio, verify_bound, NormConstants};
use noisegain::pooling::{
    avg_error_stats, max_error_stats_uniform, pool_error_monte_carlo, PoolType, PoolWindow,
};
use noisegain::rankdiff::{
    fit_profile, predicted_rankdiff, rank_diff, read_table, RobustnessProfile,
};
use noisegain::stemgain::{
    default_bin_width, downsample_gain_analytic, downsample_gain_monte_carlo, fit_envelope,
    radial_profile, stem_gain_analytic, stem_gain_monte_carlo, BinStatistic, DownsampleOp, Kernel,
};

use crate::error::{CliError, CliResult};
use crate::output::{Table, Value};

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Global {
    pub seed: u64,
    pub trials: Option<usize>,
    pub grid: Option<usize>,
    pub sigma: f64,
    pub order: usize,
}

/// A table plus the tolerance checks it failed, if any.
pub struct Report {
    pub table: Table,
    pub issues: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KernelChoice {
    Box,
    Gaussian,
    Identity,
}

impl KernelChoice {
    fn name(self) -> &'static str {
        match self {
            KernelChoice::Box => "box",
            KernelChoice::Gaussian => "gaussian",
            KernelChoice::Identity => "identity",
        }
    }

    /// Gaussian width is `width_factor * k`.
    pub fn build(self, k: usize, width_factor: f64) -> CliResult<Kernel> {
        Ok(match self {
            KernelChoice::Box => Kernel::boxed(k)?,
            KernelChoice::Gaussian => Kernel::gaussian(k, width_factor * k as f64)?,
            KernelChoice::Identity => Kernel::identity(),
        })
    }
}

pub fn gain_stem(
    g: &Global,
    ks: &[usize],
    kernel: KernelChoice,
    width_factor: f64,
) -> CliResult<Report> {
    let grid = g.grid.unwrap_or(512);
    let trials = g.trials.unwrap_or(100);
    let mut table = Table::new(&["k", "analytic", "mc_mean", "mc_std"]);
    let mut issues = Vec::new();
    for &k in ks {
        let kern = kernel.build(k, width_factor)?;
        let analytic = stem_gain_analytic(&kern);
        let seed = purpose_seed(g.seed, &format!("gain-stem:{k}"));
        let est = stem_gain_monte_carlo(&kern, grid, grid, g.sigma, trials, seed)?;
        if !est.within(analytic, 3.0) {
            issues.push(format!(
                "gain-stem k={k}: mean {:.6} not within 3 std of {analytic:.6}",
                est.mean
            ));
        }
        table.push(vec![
            k.into(),
            analytic.into(),
            est.mean.into(),
            est.std.into(),
        ]);
    }
    Ok(Report { table, issues })
}

/// Each factor runs on the largest multiple of `s` not above the grid side.
pub fn gain_downsample(g: &Global, factors: &[usize]) -> CliResult<Report> {
    let grid = g.grid.unwrap_or(256);
    let trials = g.trials.unwrap_or(100);
    let mut table = Table::new(&["s", "grid", "analytic", "mc_mean", "mc_std"]);
    let mut issues = Vec::new();
    for &s in factors {
        let op = DownsampleOp::new(s)?;
        if s > grid {
            return Err(CliError::Usage(format!("factor {s} exceeds grid {grid}")));
        }
        let side = grid / s * s;
        let analytic = downsample_gain_analytic(&op);
        let seed = purpose_seed(g.seed, &format!("gain-downsample:{s}"));
        let est = downsample_gain_monte_carlo(&op, side, side, g.sigma, trials, seed)?;
        if !est.within(analytic, 3.0) {
            issues.push(format!(
                "gain-downsample s={s}: mean {:.6} not within 3 std of {analytic:.6}",
                est.mean
            ));
        }
        table.push(vec![
            s.into(),
            side.into(),
            analytic.into(),
            est.mean.into(),
            est.std.into(),
        ]);
    }
    Ok(Report { table, issues })
}

pub struct EnvelopeParams {
    pub kernel: KernelChoice,
    pub k: usize,
    pub width_factor: f64,
    /// Radii to report; each maps to the nearest profiled bin.
    pub radii: Vec<f64>,
    pub bin_width: Option<f64>,
    pub statistic: BinStatistic,
}

impl EnvelopeParams {
    pub fn default_radii() -> Vec<f64> {
        vec![PI / 8.0, PI / 4.0, PI / 2.0]
    }
}

pub const ENVELOPE_COLUMNS: [&str; 8] = [
    "kernel",
    "k",
    "r",
    "empirical",
    "envelope",
    "dominated",
    "beta",
    "delta",
];

pub fn envelope(g: &Global, params: &EnvelopeParams, table: &mut Table) -> CliResult<Vec<String>> {
    let grid = g.grid.unwrap_or(512);
    let kern = params.kernel.build(params.k, params.width_factor)?;
    let k = kern.side();
    let profile = radial_profile(
        &kern,
        grid,
        params.bin_width.unwrap_or_else(default_bin_width),
        params.statistic,
    )?;
    let fit = fit_envelope(&profile, k)?;
    let mut issues = Vec::new();
    if !fit.dominated {
        issues.push(format!(
            "envelope {} k={k}: fit does not dominate the profile",
            params.kernel.name()
        ));
    }
    for &r in &params.radii {
        let s = profile
            .nearest(r)
            .ok_or_else(|| CliError::Usage("radial profile is empty".into()))?;
        table.push(vec![
            params.kernel.name().into(),
            k.into(),
            s.radius.into(),
            s.magnitude.into(),
            fit.value(s.radius).into(),
            fit.dominated.into(),
            fit.beta.into(),
            fit.delta.into(),
        ]);
    }
    Ok(issues)
}

pub fn pooling(g: &Global, widths: &[usize]) -> CliResult<Report> {
    let trials = g.trials.unwrap_or(200_000);
    let mut table = Table::new(&[
        "w",
        "k",
        "avg_mse_em",
        "avg_mse_th",
        "max_bias_em",
        "max_bias_th",
        "max_mse_em",
        "max_mse_th",
    ]);
    let mut issues = Vec::new();
    for &w in widths {
        let k = w * w;
        let window = PoolWindow::uniform(k, 0.0)?;
        let avg_th = avg_error_stats(k, g.sigma)?;
        let max_th = max_error_stats_uniform(k, g.sigma, g.order)?;
        let avg = pool_error_monte_carlo(
            &window,
            g.sigma,
            PoolType::Avg,
            trials,
            purpose_seed(g.seed, &format!("pooling:avg:{w}")),
        )?;
        let max = pool_error_monte_carlo(
            &window,
            g.sigma,
            PoolType::Max,
            trials,
            purpose_seed(g.seed, &format!("pooling:max:{w}")),
        )?;
        for (what, em, th, se) in [
            ("avg mse", avg.mse, avg_th.mse, avg.std_error),
            ("max bias", max.bias, max_th.bias, max.bias_std_error),
            ("max mse", max.mse, max_th.mse, max.std_error),
        ] {
            if (em - th).abs() > 4.0 * se.unwrap_or(0.0) {
                issues.push(format!(
                    "pooling w={w} {what}: {em:.6} not within 4 se of {th:.6}"
                ));
            }
        }
        table.push(vec![
            w.into(),
            k.into(),
            avg.mse.into(),
            avg_th.mse.into(),
            max.bias.into(),
            max_th.bias.into(),
            max.mse.into(),
            max_th.mse.into(),
        ]);
    }
    Ok(Report { table, issues })
}

pub struct LipschitzParams {
    pub presets: Vec<NormConstants>,
    pub l_z: f64,
    pub dim: usize,
    pub maps: usize,
    pub tol: f64,
}

/// Columns `preset, bound, measured, ratio, sensitivity`; `sensitivity` is
/// how much larger the preset's bound is than the INCEPTION one.
pub fn lipschitz(g: &Global, params: &LipschitzParams) -> CliResult<Report> {
    let reference = NormConstants::preset("INCEPTION")?;
    let mut table = Table::new(&["preset", "bound", "measured", "ratio", "sensitivity"]);
    let mut issues = Vec::new();
    for c in &params.presets {
        let bound = lipschitz_bound(params.l_z, c)?;
        let seed = purpose_seed(g.seed, &format!("lipschitz:{}", c.name()));
        let report = verify_bound(params.dim, params.l_z, c, params.maps, params.tol, seed)?;
        if report.max_measured < 0.95 * bound {
            issues.push(format!(
                "lipschitz {}: measured {:.6} below 0.95 of bound {bound:.6}",
                c.name(),
                report.max_measured
            ));
        }
        table.push(vec![
            c.name().into(),
            bound.into(),
            report.max_measured.into(),
            report.ratio.into(),
            sensitivity_ratio(c, &reference).into(),
        ]);
    }
    Ok(Report { table, issues })
}

/// Extends the input table with ranks; with `tau`, also the first-order
/// prediction from each model's severity samples.
pub fn rankdiff(input: &Path, tau: Option<f64>, pairs: &[(String, String)]) -> CliResult<Table> {
    let file = std::fs::File::open(input)?;
    let records = read_table(file)?;
    let report = rank_diff(&records)?;
    if !pairs.is_empty() {
        let mut table = Table::new(&["model_a", "model_b", "rank_diff_a", "rank_diff_b", "delta"]);
        for (a, b) in pairs {
            let delta = report.delta(a, b)?;
            let (ra, rb) = (report.get(a).unwrap(), report.get(b).unwrap());
            table.push(vec![
                a.as_str().into(),
                b.as_str().into(),
                ra.rank_diff.into(),
                rb.rank_diff.into(),
                delta.into(),
            ]);
        }
        return Ok(table);
    }
    let mut columns = vec![
        "model_id",
        "clean_acc",
        "noisy_acc",
        "rank_clean",
        "rank_noisy",
        "rank_diff",
    ];
    let predictions = match tau {
        Some(tau) => {
            columns.extend(["predicted", "ambiguity"]);
            let profiles = records
                .iter()
                .map(fit_profile)
                .collect::<Result<Vec<RobustnessProfile>, _>>()?;
            Some(
                (0..profiles.len())
                    .map(|i| predicted_rankdiff(i, &profiles, tau))
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };
    let mut table = Table::new(&columns);
    for (i, (rec, row)) in records.iter().zip(&report.rows).enumerate() {
        let mut values: Vec<Value> = vec![
            rec.model_id.as_str().into(),
            rec.clean_acc.into(),
            rec.noisy_acc.into(),
            row.rank_clean.into(),
            row.rank_noisy.into(),
            row.rank_diff.into(),
        ];
        if let Some(p) = &predictions {
            values.push(p[i].predicted.into());
            values.push(p[i].ambiguity.into());
        }
        table.push(values);
    }
    Ok(table)
}

/// Reference `(radius, magnitude)` rows for the k = 31 box and Gaussian
/// (width 9.3) kernels on a 512 grid, mean-binned at width `pi sqrt 2 / 600`.
pub const ENVELOPE_REFERENCE: [(KernelChoice, [(f64, f64); 3]); 2] = [
    (
        KernelChoice::Box,
        [
            (0.3962, 0.0297134),
            (0.7886, 0.0129235),
            (1.5661, 0.0040941),
        ],
    ),
    (
        KernelChoice::Gaussian,
        [
            (0.3962, 0.0226295),
            (0.7886, 0.0059380),
            (1.6031, 0.0007060),
        ],
    ),
];

pub fn same_3sf(a: f64, b: f64) -> bool {
    let digits = |x: f64| {
        let e = x.abs().log10().floor() as i32;
        (x / 10f64.powi(e - 2)).round() as i64
    };
    digits(a) == digits(b)
}

/// Envelope rows at the reference radii, checked to three significant
/// figures.
pub fn envelope_reference(g: &Global) -> CliResult<Report> {
    let mut table = Table::new(&ENVELOPE_COLUMNS);
    let mut issues = Vec::new();
    let g = Global {
        grid: Some(512),
        ..g.clone()
    };
    for (kernel, rows) in ENVELOPE_REFERENCE {
        let params = EnvelopeParams {
            kernel,
            k: 31,
            width_factor: 0.3,
            radii: rows.iter().map(|r| r.0).collect(),
            bin_width: None,
            statistic: BinStatistic::Mean,
        };
        let before = table.rows().len();
        issues.extend(envelope(&g, &params, &mut table)?);
        for (row, &(r, m)) in table.rows()[before..].iter().zip(&rows) {
            if let Value::Float(got) = row[3] {
                if !same_3sf(got, m) {
                    issues.push(format!(
                        "envelope {} r={r}: {got:.7} differs from {m} at 3 s.f.",
                        kernel.name()
                    ));
                }
            }
        }
    }
    Ok(Report { table, issues })
}
